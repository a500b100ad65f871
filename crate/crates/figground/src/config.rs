//! Script-style configuration: `set <name> <value>` lines with `/* */`
//! comments, plus command-line overrides. Unknown keys and badly typed
//! values are rejected with the offending line number.

use crate::error::Error;
use crate::net::Hyperparameters;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub session: Option<String>,
    pub experiment: Option<String>,
    pub epsilon: f64,
    pub bepsilon: f64,
    pub momentum: f64,
    pub maxrand: f64,
    pub stoperr: f64,
    pub maxepoch: Option<usize>,
    pub seed: Option<u64>,
    pub seeds: Option<usize>,
    pub shuffle: bool,
    pub round_off: bool,
    pub winner_take_all: bool,
    pub reportrate: usize,
    pub subcycle: usize,
    pub jobs: usize,
    pub samples: Option<usize>,
    pub paper_scale: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            session: None,
            experiment: None,
            epsilon: 0.1,
            bepsilon: 0.1,
            momentum: 0.9,
            maxrand: 0.003,
            stoperr: 0.99,
            maxepoch: None,
            seed: None,
            seeds: None,
            shuffle: true,
            round_off: true,
            winner_take_all: false,
            reportrate: 1,
            subcycle: 2,
            jobs: 1,
            samples: None,
            paper_scale: false,
        }
    }
}

/// Strips `/* ... */` comments, which may span lines, replacing their
/// contents with spaces so line numbers survive.
fn strip_comments(text: &str) -> Result<String, Error> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    let mut depth = 0usize;
    let mut line = 1usize;
    let mut open_line = 0usize;
    while let Some(c) = chars.next() {
        if c == '\n' {
            line += 1;
            out.push('\n');
            continue;
        }
        if depth == 0 && c == '/' && chars.peek() == Some(&'*') {
            chars.next();
            depth = 1;
            open_line = line;
            continue;
        }
        if depth > 0 && c == '*' && chars.peek() == Some(&'/') {
            chars.next();
            depth -= 1;
            continue;
        }
        if depth == 0 {
            out.push(c);
        }
    }
    if depth > 0 {
        return Err(Error::Parse {
            line: open_line,
            msg: "unterminated /* comment".into(),
        });
    }
    Ok(out)
}

fn typed<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, Error> {
    value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("`set {key} {value}`: value is not a valid {}", std::any::type_name::<T>()),
    })
}

fn typed_bool(key: &str, value: &str, line: usize) -> Result<bool, Error> {
    match value {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        _ => Err(Error::Parse {
            line,
            msg: format!("`set {key} {value}`: expected 0/1"),
        }),
    }
}

/// Parses a settings script, applying defaults for absent keys.
pub fn parse_config(text: &str) -> Result<Config, Error> {
    let mut cfg = Config::default();
    let stripped = strip_comments(text)?;
    for (i, raw) in stripped.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let directive = fields.next().unwrap_or_default();
        if directive != "set" {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("unknown directive `{directive}`; only `set <name> <value>` is accepted"),
            });
        }
        let key = fields.next().ok_or(Error::Parse {
            line: line_no,
            msg: "`set` needs a key and a value".into(),
        })?;
        let value = fields.next().ok_or(Error::Parse {
            line: line_no,
            msg: format!("`set {key}` needs a value"),
        })?;
        if fields.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("`set {key}` has trailing tokens"),
            });
        }
        cfg.apply(key, value, line_no)?;
    }
    cfg.validate(0)?;
    Ok(cfg)
}

impl Config {
    /// Applies one key/value pair, e.g. a `--set key=value` override.
    pub fn apply(&mut self, key: &str, value: &str, line: usize) -> Result<(), Error> {
        match key {
            "session" => self.session = Some(value.to_string()),
            "experiment" => self.experiment = Some(value.to_string()),
            "epsilon" => self.epsilon = typed(key, value, line)?,
            "bepsilon" => self.bepsilon = typed(key, value, line)?,
            "momentum" => self.momentum = typed(key, value, line)?,
            "maxrand" => self.maxrand = typed(key, value, line)?,
            "stoperr" => self.stoperr = typed(key, value, line)?,
            "maxepoch" => self.maxepoch = Some(typed(key, value, line)?),
            "seed" => self.seed = Some(typed(key, value, line)?),
            "seeds" => self.seeds = Some(typed(key, value, line)?),
            "shuffle" => self.shuffle = typed_bool(key, value, line)?,
            "round_off" => self.round_off = typed_bool(key, value, line)?,
            "winner_take_all" => self.winner_take_all = typed_bool(key, value, line)?,
            "reportrate" => self.reportrate = typed(key, value, line)?,
            "subcycle" => self.subcycle = typed(key, value, line)?,
            "jobs" => self.jobs = typed(key, value, line)?,
            "samples" => self.samples = Some(typed(key, value, line)?),
            "paper_scale" => self.paper_scale = typed_bool(key, value, line)?,
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown setting `{key}`"),
                })
            }
        }
        self.validate(line)
    }

    fn validate(&self, line: usize) -> Result<(), Error> {
        let bad = |msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        if self.epsilon <= 0.0 || self.bepsilon <= 0.0 {
            return Err(bad("learning rates must be positive"));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(bad("momentum must be in [0, 1)"));
        }
        if self.maxrand <= 0.0 {
            return Err(bad("maxrand must be positive"));
        }
        if self.stoperr <= 0.0 || self.stoperr > 1.0 {
            return Err(bad("stoperr must be in (0, 1]"));
        }
        if self.jobs == 0 {
            return Err(bad("jobs must be at least 1"));
        }
        Ok(())
    }

    /// Hyperparameters for a run, with per-experiment fallbacks for the
    /// fields the config leaves at their script defaults.
    pub fn hyperparameters(
        &self,
        default_maxepoch: usize,
        default_stoperr: f64,
        default_maxrand: f64,
        default_epsilon: f64,
    ) -> Hyperparameters {
        Hyperparameters {
            epsilon: if self.epsilon == 0.1 { default_epsilon } else { self.epsilon },
            bepsilon: if self.bepsilon == 0.1 { default_epsilon } else { self.bepsilon },
            momentum: self.momentum,
            maxrand: if self.maxrand == 0.003 { default_maxrand } else { self.maxrand },
            stoperr: if self.stoperr == 0.99 { default_stoperr } else { self.stoperr },
            maxepoch: self.maxepoch.unwrap_or(default_maxepoch),
            round_off: self.round_off,
            batch: false,
            seed: self.seed.unwrap_or(1),
            shuffle: self.shuffle,
        }
    }

    /// FNV-1a over the canonical rendering; embedded in artifact headers.
    pub fn hash(&self) -> u64 {
        let text = format!("{self:?}");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The simulator script from the original experiments, with the wiring
    /// directives dropped (the two-step wiring is built in per domain).
    const SCRIPT: &str = "\
/* *****
gridfont settings
*****
*/

set session e01 /* set output filenames */
set winner_take_all 0    /* turn winner take all off */
set stoperr 0.99        /* stop at correct */
set momentum 0.9        /* set weight momentum */
set epsilon 0.1         /* set learning rate */
set bepsilon 0.1        /* set learning rate of biases */
set maxepoch 1000
set reportrate 1
set maxrand 0.003
set round_off 1         /* changes rounding of display only */

set subcycle 2
";

    #[test]
    fn the_reference_script_parses() {
        let cfg = parse_config(SCRIPT).unwrap();
        assert_eq!(cfg.momentum, 0.9);
        assert_eq!(cfg.epsilon, 0.1);
        assert_eq!(cfg.bepsilon, 0.1);
        assert_eq!(cfg.maxrand, 0.003);
        assert_eq!(cfg.stoperr, 0.99);
        assert_eq!(cfg.maxepoch, Some(1000));
        assert_eq!(cfg.session.as_deref(), Some("e01"));
        assert!(!cfg.winner_take_all);
        assert_eq!(cfg.subcycle, 2);
    }

    #[test]
    fn empty_file_gives_all_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, Config::default());
        assert_eq!(cfg.epsilon, 0.1);
        assert_eq!(cfg.momentum, 0.9);
        assert_eq!(cfg.maxrand, 0.003);
        assert_eq!(cfg.stoperr, 0.99);
    }

    #[test]
    fn typed_error_carries_the_line_number() {
        let err = parse_config("set epsilon 0.1\nset momentum nine\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("momentum"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn unknown_keys_and_directives_are_rejected() {
        let err = parse_config("set nonsense 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_config("set epsilon 0.1\nlayer input 153\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn out_of_range_values_are_rejected() {
        assert!(parse_config("set momentum 1.0\n").is_err());
        assert!(parse_config("set epsilon 0\n").is_err());
        assert!(parse_config("set stoperr 1.5\n").is_err());
    }

    #[test]
    fn unterminated_comment_is_an_error() {
        assert!(parse_config("set epsilon 0.1 /* oops\n").is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = parse_config("set momentum 0.9\n").unwrap();
        let b = parse_config("set momentum 0.9\n").unwrap();
        let c = parse_config("set momentum 0.8\n").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
    }
}
