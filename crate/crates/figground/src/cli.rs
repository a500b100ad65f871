//! Command-line interface. Subcommands: `gen` writes a corpus file,
//! `train` runs training and writes a run report plus a weight snapshot,
//! `eval` scores held-out pairs from saved weights, `analyze` projects a
//! hidden trace through principal components, `render` draws a problem's
//! four panels as a PGM, and `compare` runs the architecture comparison.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 required
//! convergence not reached.

use std::path::{Path, PathBuf};

use crate::analysis::{pca, separation_check, HiddenTrace};
use crate::config::{parse_config, Config};
use crate::corpus::{Corpus, Domain};
use crate::error::Error;
use crate::experiments::{
    collect_step1_trace, compare_architectures, run_hinton_baseline, run_seeds_with_nets,
    ExperimentSpec,
};
use crate::letters::{LETTER_COLS, LETTER_ROWS};
use crate::pgm::{montage, render_grid};
use crate::scene::IconicScene;
use crate::srn::{build_network, infer, EvalMode};
use crate::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

const USAGE: &str = "\
figground <command> [options]

commands:
  gen <id>                          write a corpus file (ids: 1a 1c 2a 2b 2c 2c-nohints 2d 3a 3b)
  train <id|config>                 train and write run report + weight snapshot
  eval <weights> <corpus>           score the corpus test split with saved weights
  analyze <trace>                   principal components of a hidden trace
  render <weights> <corpus> <idx>   four-panel view of one problem as PGM
  compare 1b                        two-step vs feed-forward comparison

options:
  --seed N        base network seed (default 1)
  --seeds N       number of seeds (train/compare; default 1 / 10)
  --jobs N        concurrent seeds (default 1)
  --samples N     sampled-corpus size override
  --paper-scale   restore the original corpus sizes
  --config FILE   settings script (set <key> <value>)
  --out PATH      output file (gen/analyze/render) or directory (train/compare)
  --trace-out F   also write the step-1 hidden trace after training
";

fn usage_err(msg: &str) -> CliError {
    CliError {
        code: EXIT_USAGE,
        msg: format!("{msg}\n\n{USAGE}"),
    }
}

pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError {
            code: EXIT_DATA,
            msg: e.to_string(),
        }
    }
}

struct Args {
    positional: Vec<String>,
    seed: u64,
    seeds: Option<usize>,
    jobs: usize,
    samples: Option<usize>,
    paper_scale: bool,
    config_path: Option<PathBuf>,
    out: Option<PathBuf>,
    trace_out: Option<PathBuf>,
}

fn parse_args(argv: &[String]) -> Result<Args, CliError> {
    let mut args = Args {
        positional: Vec::new(),
        seed: 1,
        seeds: None,
        jobs: 1,
        samples: None,
        paper_scale: false,
        config_path: None,
        out: None,
        trace_out: None,
    };
    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        let mut grab = |name: &str| {
            it.next()
                .cloned()
                .ok_or_else(|| usage_err(&format!("{name} needs a value")))
        };
        match arg.as_str() {
            "--seed" => args.seed = grab("--seed")?.parse().map_err(|_| usage_err("bad --seed"))?,
            "--seeds" => {
                args.seeds = Some(grab("--seeds")?.parse().map_err(|_| usage_err("bad --seeds"))?)
            }
            "--jobs" => args.jobs = grab("--jobs")?.parse().map_err(|_| usage_err("bad --jobs"))?,
            "--samples" => {
                args.samples =
                    Some(grab("--samples")?.parse().map_err(|_| usage_err("bad --samples"))?)
            }
            "--paper-scale" => args.paper_scale = true,
            "--config" => args.config_path = Some(PathBuf::from(grab("--config")?)),
            "--out" => args.out = Some(PathBuf::from(grab("--out")?)),
            "--trace-out" => args.trace_out = Some(PathBuf::from(grab("--trace-out")?)),
            other if other.starts_with("--") => {
                return Err(usage_err(&format!("unknown option `{other}`")))
            }
            other => args.positional.push(other.to_string()),
        }
    }
    if args.jobs == 0 {
        return Err(usage_err("--jobs must be at least 1"));
    }
    Ok(args)
}

fn load_config(args: &Args) -> Result<Config, CliError> {
    let mut cfg = match &args.config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError { code: EXIT_DATA, msg: format!("{}: {e}", path.display()) })?;
            parse_config(&text)?
        }
        None => Config::default(),
    };
    if args.paper_scale {
        cfg.paper_scale = true;
    }
    if let Some(s) = args.samples {
        cfg.samples = Some(s);
    }
    Ok(cfg)
}

fn spec_for(id: &str, cfg: &Config) -> Result<ExperimentSpec, Error> {
    let mut spec = ExperimentSpec::by_id(id, cfg.paper_scale)?;
    if let Some(s) = cfg.samples {
        if spec.samples.is_some() {
            spec.samples = Some(s);
        }
    }
    if let Some(m) = cfg.maxepoch {
        spec.maxepoch = m;
    }
    Ok(spec)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError { code: EXIT_DATA, msg: format!("{}: {e}", parent.display()) })?;
        }
    }
    std::fs::write(path, text)
        .map_err(|e| CliError { code: EXIT_DATA, msg: format!("{}: {e}", path.display()) })?;
    Ok(())
}

fn cmd_gen(args: &Args) -> Result<(), CliError> {
    let id = args
        .positional
        .get(1)
        .ok_or_else(|| usage_err("gen needs a corpus id"))?;
    if id == "1b" || id == "hinton" {
        return Err(usage_err("1b shares the 1a corpus; the tree baseline has no corpus file"));
    }
    let cfg = load_config(args)?;
    let spec = spec_for(id, &cfg).map_err(|e| usage_err(&e.to_string()))?;
    let corpus = spec.make_corpus(args.seed)?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{id}.corpus")));
    corpus.save(&out)?;
    if corpus.domain == Domain::Letter {
        write_contact_sheet(&corpus, &out, &cfg)?;
    }
    println!(
        "wrote {} ({} pairs, {} train / {} test)",
        out.display(),
        corpus.len(),
        corpus.train_idx.len(),
        corpus.test_idx.len()
    );
    Ok(())
}

/// A human-auditable render of every distinct letterform in the corpus.
fn write_contact_sheet(corpus: &Corpus, corpus_path: &Path, cfg: &Config) -> Result<(), CliError> {
    let mut panels: Vec<Vec<f64>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for rec in &corpus.records {
        if let crate::corpus::PairRecord::Letter { source, target, .. } = rec {
            for letter in [source, target] {
                let key = letter.pixels.to_text();
                if seen.insert(key) {
                    panels.push(letter.pixels.to_f64());
                }
            }
        }
    }
    let (values, rows, cols) = montage(&panels, LETTER_ROWS, LETTER_COLS, 10);
    let sheet = corpus_path.with_extension("sheet.pgm");
    let comment = format!(
        "figground {VERSION} contact sheet seed {} config {:016x}",
        corpus.seed,
        cfg.hash()
    );
    render_grid(&values, rows, cols, &comment, &sheet)?;
    Ok(())
}

fn run_paths(out: &Path, id: &str, seed: u64) -> (PathBuf, PathBuf) {
    (
        out.join(format!("run-{id}-seed{seed}.txt")),
        out.join(format!("weights-{id}-seed{seed}.wts")),
    )
}

fn cmd_train(args: &Args) -> Result<(), CliError> {
    let target = args
        .positional
        .get(1)
        .ok_or_else(|| usage_err("train needs an experiment id or a config file"))?;
    let mut cfg = load_config(args)?;
    let id = if Path::new(target).is_file() {
        let text = std::fs::read_to_string(target)
            .map_err(|e| CliError { code: EXIT_DATA, msg: format!("{target}: {e}") })?;
        cfg = parse_config(&text)?;
        if args.paper_scale {
            cfg.paper_scale = true;
        }
        cfg.experiment
            .clone()
            .ok_or_else(|| usage_err("config file must `set experiment <id>`"))?
    } else {
        target.clone()
    };
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let base_seed = cfg.seed.unwrap_or(args.seed);
    if id == "hinton" {
        let report = run_hinton_baseline(base_seed, 4, cfg.maxepoch.unwrap_or(30_000))?;
        let path = out.join(format!("run-hinton-seed{base_seed}.txt"));
        let mut text = format!(
            "# figground {VERSION} seed {} config {:016x}\nexperiment hinton\n",
            base_seed,
            cfg.hash()
        );
        text.push_str(&format!(
            "facts {}\nepochs {}\nconverged {}\ntrain_correct {}/{}\ntest_correct {}/{}\n",
            report.facts_total,
            report.epochs,
            u8::from(report.converged),
            report.train_correct,
            report.train_total,
            report.test_correct,
            report.test_total
        ));
        write_file(&path, &text)?;
        println!("{text}");
        return Ok(());
    }
    let spec = spec_for(&id, &cfg).map_err(|e| usage_err(&e.to_string()))?;
    let n_seeds = cfg.seeds.or(args.seeds).unwrap_or(1);
    let jobs = if cfg.jobs > 1 { cfg.jobs } else { args.jobs };
    let corpus = spec.make_corpus(1)?;
    let seeds: Vec<u64> = (0..n_seeds as u64).map(|i| base_seed + i).collect();
    let results = run_seeds_with_nets(&spec, &corpus, &cfg, &seeds, jobs)?;
    let mut any_required_failure = false;
    for (seed, (run, net)) in seeds.iter().zip(&results) {
        let (report_path, weights_path) = run_paths(&out, &id, *seed);
        write_file(&report_path, &run.to_text(VERSION, cfg.hash()))?;
        net.save_snapshot(&weights_path)?;
        if let Some(trace_path) = &args.trace_out {
            let trace = collect_step1_trace(net, &corpus, &corpus.train_idx)?;
            write_file(trace_path, &trace.to_text())?;
        }
        println!(
            "seed {seed}: epochs {:?} trials {} converged {} test {:?} pixel_errors {:?}",
            run.epochs_to_criterion, run.trials, run.converged, run.test_exact, run.test_pixel_errors
        );
        if spec.require_convergence && !run.converged {
            any_required_failure = true;
        }
    }
    if n_seeds > 1 {
        let runs: Vec<_> = results.iter().map(|(run, _)| run.clone()).collect();
        let report =
            crate::experiments::aggregate(&spec, &corpus, seeds.clone(), runs, cfg.paper_scale);
        let path = out.join(format!("experiment-{id}.txt"));
        write_file(&path, &report.to_text(VERSION, cfg.hash()))?;
    }
    if any_required_failure {
        return Err(CliError {
            code: EXIT_NO_CONVERGENCE,
            msg: format!("experiment {id} did not reach its stop criterion"),
        });
    }
    Ok(())
}

fn cmd_eval(args: &Args) -> Result<(), CliError> {
    let weights = args
        .positional
        .get(1)
        .ok_or_else(|| usage_err("eval needs <weights> <corpus>"))?;
    let corpus_path = args
        .positional
        .get(2)
        .ok_or_else(|| usage_err("eval needs <weights> <corpus>"))?;
    let corpus = Corpus::load(Path::new(corpus_path))?;
    let cfg = load_config(args)?;
    let mut net = build_network(corpus.shape(), cfg.hyperparameters(1, 0.99, 0.003, 0.1))?;
    net.load_snapshot(Path::new(weights))?;
    let mode = EvalMode::for_domain(corpus.domain);
    let summary = crate::srn::evaluate(&net, &corpus, &corpus.test_idx, mode)?;
    println!("test_exact {}/{}", summary.exact, summary.total);
    println!("test_pixel_errors {}", summary.pixel_errors);
    Ok(())
}

fn cmd_analyze(args: &Args) -> Result<(), CliError> {
    let trace_path = args
        .positional
        .get(1)
        .ok_or_else(|| usage_err("analyze needs a trace file"))?;
    let text = std::fs::read_to_string(trace_path)
        .map_err(|e| CliError { code: EXIT_DATA, msg: format!("{trace_path}: {e}") })?;
    let trace = HiddenTrace::parse(&text)?;
    let p = pca(&trace.points)?;
    let cfg = load_config(args)?;
    let mut csv = format!("# figground {VERSION} projections config {:016x}\n", cfg.hash());
    for (label, proj) in trace.labels.iter().zip(&p.projections) {
        csv.push_str(label);
        for v in proj {
            csv.push_str(&format!(",{v:.8e}"));
        }
        csv.push('\n');
    }
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{trace_path}.pca.csv")));
    write_file(&out, &csv)?;
    let top: Vec<String> = p.eigenvalues.iter().take(5).map(|e| format!("{e:.6}")).collect();
    println!("eigenvalues {}", top.join(" "));
    let mut classes: Vec<&String> = Vec::new();
    for l in &trace.labels {
        if !classes.contains(&l) {
            classes.push(l);
        }
    }
    if classes.len() == 2 {
        let (thr, acc) = separation_check(&p.projections, &trace.labels, 0)?;
        println!("pc1_threshold {thr:.6} accuracy {acc:.4}");
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn scene_panel(values: &[f64], corpus: &Corpus) -> Vec<f64> {
    // Channel-max occupancy view for iconic scenes; letters and family
    // patterns are already flat [0,1] grids.
    match corpus.domain {
        Domain::Geometric => {
            let shape = corpus.shape();
            let scene = IconicScene {
                width: 7,
                height: 7,
                channels: shape.scene / 49,
                values: values.to_vec(),
                objects: vec![],
            };
            scene.occupancy()
        }
        _ => values.to_vec(),
    }
}

fn cmd_render(args: &Args) -> Result<(), CliError> {
    let weights = args
        .positional
        .get(1)
        .ok_or_else(|| usage_err("render needs <weights> <corpus> <pair-index>"))?;
    let corpus_path = args
        .positional
        .get(2)
        .ok_or_else(|| usage_err("render needs <weights> <corpus> <pair-index>"))?;
    let index: usize = args
        .positional
        .get(3)
        .ok_or_else(|| usage_err("render needs <weights> <corpus> <pair-index>"))?
        .parse()
        .map_err(|_| usage_err("pair index must be an integer"))?;
    let corpus = Corpus::load(Path::new(corpus_path))?;
    if index >= corpus.len() {
        return Err(CliError {
            code: EXIT_DATA,
            msg: format!("pair index {index} out of range (corpus has {})", corpus.len()),
        });
    }
    let cfg = load_config(args)?;
    let mut net = build_network(corpus.shape(), cfg.hyperparameters(1, 0.99, 0.003, 0.1))?;
    net.load_snapshot(Path::new(weights))?;
    let pair = &corpus.pairs[index];
    let inf = infer(&net, pair)?;
    // Four panels: source, selected figure, target, predicted target figure.
    let panels = vec![
        scene_panel(&pair.source, &corpus),
        pair.source_figure.clone(),
        scene_panel(&pair.target, &corpus),
        inf.predicted_figure.clone(),
    ];
    let (rows, cols) = match corpus.domain {
        Domain::Letter => (LETTER_ROWS, LETTER_COLS),
        Domain::Geometric => (7, 7),
        Domain::Family => (1, corpus.family_bank),
    };
    let (values, mrows, mcols) = montage(&panels, rows, cols, 2);
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("pair-{index}.pgm")));
    let comment = format!(
        "figground {VERSION} render pair {index} seed {} config {:016x}",
        net.hyper.seed,
        cfg.hash()
    );
    render_grid(&values, mrows, mcols, &comment, &out)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_compare(args: &Args) -> Result<(), CliError> {
    let what = args
        .positional
        .get(1)
        .ok_or_else(|| usage_err("compare needs an experiment id (only `1b`)"))?;
    if what != "1b" {
        return Err(usage_err("only `compare 1b` is defined"));
    }
    let cfg = load_config(args)?;
    let seeds = cfg.seeds.or(args.seeds).unwrap_or(10);
    let base_seed = cfg.seed.unwrap_or(args.seed);
    let report = compare_architectures(&cfg, base_seed, seeds, args.jobs)?;
    let text = report.to_text(VERSION, cfg.hash());
    let out = args.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    write_file(&out.join("compare-1b.txt"), &text)?;
    print!("{text}");
    Ok(())
}

/// Entry point; returns the process exit code.
pub fn run(argv: &[String]) -> i32 {
    let args = match parse_args(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("{}", e.msg);
            return e.code;
        }
    };
    let Some(command) = args.positional.first() else {
        eprintln!("{USAGE}");
        return EXIT_USAGE;
    };
    let result = match command.as_str() {
        "gen" => cmd_gen(&args),
        "train" => cmd_train(&args),
        "eval" => cmd_eval(&args),
        "analyze" => cmd_analyze(&args),
        "render" => cmd_render(&args),
        "compare" => cmd_compare(&args),
        other => Err(usage_err(&format!("unknown command `{other}`"))),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.msg);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::EXPERIMENT_IDS;

    #[test]
    fn experiment_ids_cover_the_documented_set() {
        for id in ["1a", "1b", "1c", "2a", "2b", "2c", "2c-nohints", "2d", "3a", "3b", "hinton"] {
            assert!(EXPERIMENT_IDS.contains(&id), "{id} missing");
        }
    }

    #[test]
    fn unknown_flags_are_usage_errors() {
        let code = run(&["train".into(), "2a".into(), "--bogus".into()]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn missing_command_is_a_usage_error() {
        assert_eq!(run(&[]), EXIT_USAGE);
    }
}
