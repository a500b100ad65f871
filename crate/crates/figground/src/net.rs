//! Three-layer feed-forward network with banked layers, logistic units and
//! online backpropagation with momentum.
//!
//! Layers are `input -> hidden -> output`. The input and output layers are
//! subdivided into named, contiguous banks; the hidden layer is a single
//! bank. Weights are stored row-major per destination unit, biases live on
//! hidden and output units only and train with their own learning rate.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;

/// A named, contiguous slice of a layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bank {
    pub name: String,
    pub size: usize,
    /// Start index within the layer.
    pub offset: usize,
}

/// Builds a bank list from `(name, size)` pairs, assigning offsets in order.
pub fn banks(spec: &[(&str, usize)]) -> Vec<Bank> {
    let mut out = Vec::with_capacity(spec.len());
    let mut offset = 0;
    for (name, size) in spec {
        out.push(Bank {
            name: (*name).to_string(),
            size: *size,
            offset,
        });
        offset += size;
    }
    out
}

pub fn banks_total(list: &[Bank]) -> usize {
    list.iter().map(|b| b.size).sum()
}

/// Training hyperparameters, with the simulator-script defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparameters {
    /// Weight learning rate.
    pub epsilon: f64,
    /// Bias learning rate.
    pub bepsilon: f64,
    /// Momentum coefficient on the previous delta.
    pub momentum: f64,
    /// Half-range of the uniform weight initialization.
    pub maxrand: f64,
    /// Stop when the fraction of correct output units reaches this.
    pub stoperr: f64,
    /// Hard cap on training epochs.
    pub maxepoch: usize,
    /// Round outputs to 0/1 when counting correctness.
    pub round_off: bool,
    /// Accumulate gradients over a sweep and apply once per epoch instead of
    /// per trial.
    pub batch: bool,
    /// RNG seed for weight init and pair shuffling.
    pub seed: u64,
    /// Shuffle pair order each epoch.
    pub shuffle: bool,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            epsilon: 0.1,
            bepsilon: 0.1,
            momentum: 0.9,
            maxrand: 0.003,
            stoperr: 0.99,
            maxepoch: 1000,
            round_off: true,
            batch: false,
            seed: 1,
            shuffle: true,
        }
    }
}

impl Hyperparameters {
    pub fn validate(&self) -> Result<(), Error> {
        if self.epsilon <= 0.0 || self.bepsilon <= 0.0 {
            return Err(Error::Contract("learning rates must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Contract("momentum must be in [0, 1)".into()));
        }
        if self.maxrand <= 0.0 {
            return Err(Error::Contract("maxrand must be positive".into()));
        }
        if self.stoperr <= 0.0 && self.stoperr != 0.0 || self.stoperr > 1.0 {
            return Err(Error::Contract("stoperr must be in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Raw error gradients for one trial, before learning rates and momentum.
/// Entries are dE/dw for E = 1/2 * sum((desired - actual)^2).
#[derive(Debug, Clone)]
pub struct Gradients {
    pub w_ih: Vec<f64>,
    pub w_ho: Vec<f64>,
    pub b_h: Vec<f64>,
    pub b_o: Vec<f64>,
}

impl Gradients {
    fn zeros(net: &Network) -> Self {
        Gradients {
            w_ih: vec![0.0; net.w_ih.len()],
            w_ho: vec![0.0; net.w_ho.len()],
            b_h: vec![0.0; net.b_h.len()],
            b_o: vec![0.0; net.b_o.len()],
        }
    }

    fn add(&mut self, other: &Gradients) {
        for (a, b) in self.w_ih.iter_mut().zip(&other.w_ih) {
            *a += b;
        }
        for (a, b) in self.w_ho.iter_mut().zip(&other.w_ho) {
            *a += b;
        }
        for (a, b) in self.b_h.iter_mut().zip(&other.b_h) {
            *a += b;
        }
        for (a, b) in self.b_o.iter_mut().zip(&other.b_o) {
            *a += b;
        }
    }
}

/// A 3-layer network. Exclusively owned by one training run.
#[derive(Debug, Clone)]
pub struct Network {
    pub input_banks: Vec<Bank>,
    pub hidden_size: usize,
    pub output_banks: Vec<Bank>,
    /// hidden_size rows of input_size weights.
    pub w_ih: Vec<f64>,
    /// output_size rows of hidden_size weights.
    pub w_ho: Vec<f64>,
    pub b_h: Vec<f64>,
    pub b_o: Vec<f64>,
    prev_dw_ih: Vec<f64>,
    prev_dw_ho: Vec<f64>,
    prev_db_h: Vec<f64>,
    prev_db_o: Vec<f64>,
    pub hyper: Hyperparameters,
}

/// Net input of a single unit: bias plus the activation/weight dot product.
pub fn net_input(activations: &[f64], weights: &[f64], bias: f64) -> Result<f64, Error> {
    if activations.len() != weights.len() {
        return Err(Error::Contract(format!(
            "net_input length mismatch: {} activations vs {} weights",
            activations.len(),
            weights.len()
        )));
    }
    let mut sum = bias;
    for (a, w) in activations.iter().zip(weights) {
        sum += a * w;
    }
    Ok(sum)
}

/// The logistic squashing function, mapping any net input into (0, 1).
pub fn logistic(sigma: f64) -> f64 {
    1.0 / (1.0 + (-sigma).exp())
}

/// Rounds an activation to 0 or 1, ties at 0.5 going up.
pub fn round_half_up(x: f64) -> u8 {
    if x >= 0.5 {
        1
    } else {
        0
    }
}

/// How output units are marked correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreMode {
    /// Unit correct iff round(actual) == desired.
    Rounded,
    /// Bank correct iff the argmax unit within the bank is the desired one.
    /// Used for localist banks holding exactly one entity.
    BankArgmax,
}

/// Per-unit (or per-bank in argmax mode) correctness counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Score {
    pub correct: usize,
    pub total: usize,
    pub exact: bool,
}

/// Scores actual outputs against a binary desired pattern.
///
/// In `Rounded` mode `banks` may be empty; in `BankArgmax` mode each bank is
/// one scoring unit and the desired pattern must be one-hot within the bank.
pub fn score_outputs(
    actual: &[f64],
    desired: &[f64],
    mode: ScoreMode,
    banks: &[Bank],
) -> Result<Score, Error> {
    if actual.len() != desired.len() {
        return Err(Error::Contract("score_outputs length mismatch".into()));
    }
    if desired.iter().any(|&d| d != 0.0 && d != 1.0) {
        return Err(Error::Contract("desired pattern must be binary".into()));
    }
    match mode {
        ScoreMode::Rounded => {
            let correct = actual
                .iter()
                .zip(desired)
                .filter(|(a, d)| f64::from(round_half_up(**a)) == **d)
                .count();
            Ok(Score {
                correct,
                total: actual.len(),
                exact: correct == actual.len(),
            })
        }
        ScoreMode::BankArgmax => {
            if banks.is_empty() {
                return Err(Error::Contract("argmax scoring requires bank boundaries".into()));
            }
            let mut correct = 0;
            for bank in banks {
                let a = &actual[bank.offset..bank.offset + bank.size];
                let d = &desired[bank.offset..bank.offset + bank.size];
                let want = d.iter().position(|&x| x == 1.0).ok_or_else(|| {
                    Error::Contract(format!("bank {} has no desired unit", bank.name))
                })?;
                let got = argmax(a);
                if got == want {
                    correct += 1;
                }
            }
            Ok(Score {
                correct,
                total: banks.len(),
                exact: correct == banks.len(),
            })
        }
    }
}

fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if *x > xs[best] {
            best = i;
        }
    }
    best
}

impl Network {
    /// Builds a network with all weights and accumulators at zero.
    pub fn new(
        input_banks: Vec<Bank>,
        hidden_size: usize,
        output_banks: Vec<Bank>,
        hyper: Hyperparameters,
    ) -> Result<Network, Error> {
        hyper.validate()?;
        if input_banks.is_empty() || output_banks.is_empty() || hidden_size == 0 {
            return Err(Error::Contract("network layers must be non-empty".into()));
        }
        let input_size = banks_total(&input_banks);
        let output_size = banks_total(&output_banks);
        Ok(Network {
            input_banks,
            hidden_size,
            output_banks,
            w_ih: vec![0.0; hidden_size * input_size],
            w_ho: vec![0.0; output_size * hidden_size],
            b_h: vec![0.0; hidden_size],
            b_o: vec![0.0; output_size],
            prev_dw_ih: vec![0.0; hidden_size * input_size],
            prev_dw_ho: vec![0.0; output_size * hidden_size],
            prev_db_h: vec![0.0; hidden_size],
            prev_db_o: vec![0.0; output_size],
            hyper,
        })
    }

    pub fn input_size(&self) -> usize {
        banks_total(&self.input_banks)
    }

    pub fn output_size(&self) -> usize {
        banks_total(&self.output_banks)
    }

    pub fn input_bank(&self, name: &str) -> Option<&Bank> {
        self.input_banks.iter().find(|b| b.name == name)
    }

    pub fn output_bank(&self, name: &str) -> Option<&Bank> {
        self.output_banks.iter().find(|b| b.name == name)
    }

    /// Draws every weight and bias uniformly from (-maxrand, +maxrand),
    /// reproducibly from the seed, which is recorded on the network.
    /// Momentum accumulators reset to zero.
    ///
    /// Draw order is fixed: w_ih row-major, w_ho row-major, b_h, b_o.
    pub fn init_weights(&mut self, maxrand: f64, seed: u64) -> Result<(), Error> {
        if maxrand <= 0.0 {
            return Err(Error::Contract("maxrand must be positive".into()));
        }
        self.hyper.seed = seed;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for w in self
            .w_ih
            .iter_mut()
            .chain(self.w_ho.iter_mut())
            .chain(self.b_h.iter_mut())
            .chain(self.b_o.iter_mut())
        {
            *w = rng.gen_range(-maxrand..maxrand);
        }
        for d in self
            .prev_dw_ih
            .iter_mut()
            .chain(self.prev_dw_ho.iter_mut())
            .chain(self.prev_db_h.iter_mut())
            .chain(self.prev_db_o.iter_mut())
        {
            *d = 0.0;
        }
        Ok(())
    }

    /// Propagation phase: returns (hidden, output) activations.
    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, Vec<f64>), Error> {
        let nin = self.input_size();
        if input.len() != nin {
            return Err(Error::Contract(format!(
                "forward: input length {} != input layer size {}",
                input.len(),
                nin
            )));
        }
        let mut hidden = vec![0.0; self.hidden_size];
        for (j, h) in hidden.iter_mut().enumerate() {
            let row = &self.w_ih[j * nin..(j + 1) * nin];
            *h = logistic(net_input(input, row, self.b_h[j])?);
        }
        let nout = self.output_size();
        let mut output = vec![0.0; nout];
        for (k, o) in output.iter_mut().enumerate() {
            let row = &self.w_ho[k * self.hidden_size..(k + 1) * self.hidden_size];
            *o = logistic(net_input(&hidden, row, self.b_o[k])?);
        }
        Ok((hidden, output))
    }

    /// Computes dE/dw for E = 1/2 * sum((desired - actual)^2) at the current
    /// weights, without applying any update. Also returns the forward pass.
    pub fn gradients(
        &self,
        input: &[f64],
        desired: &[f64],
    ) -> Result<(Gradients, Vec<f64>, Vec<f64>), Error> {
        let (hidden, output) = self.forward(input)?;
        if desired.len() != output.len() {
            return Err(Error::Contract(format!(
                "gradients: desired length {} != output layer size {}",
                desired.len(),
                output.len()
            )));
        }
        let nin = self.input_size();
        let nh = self.hidden_size;

        // delta_o = -(d - y) * y * (1 - y), so that dE/dw_ho[k][j] = delta_o[k] * h[j]
        let mut delta_o = vec![0.0; output.len()];
        for (k, d) in delta_o.iter_mut().enumerate() {
            *d = -(desired[k] - output[k]) * output[k] * (1.0 - output[k]);
        }
        let mut g = Gradients::zeros(self);
        for (k, dk) in delta_o.iter().enumerate() {
            let row = &mut g.w_ho[k * nh..(k + 1) * nh];
            for (j, gw) in row.iter_mut().enumerate() {
                *gw = dk * hidden[j];
            }
            g.b_o[k] = *dk;
        }
        // Back-propagate to the hidden layer.
        let mut delta_h = vec![0.0; nh];
        for (j, dh) in delta_h.iter_mut().enumerate() {
            let mut sum = 0.0;
            for (k, dk) in delta_o.iter().enumerate() {
                sum += dk * self.w_ho[k * nh + j];
            }
            *dh = sum * hidden[j] * (1.0 - hidden[j]);
        }
        for (j, dj) in delta_h.iter().enumerate() {
            let row = &mut g.w_ih[j * nin..(j + 1) * nin];
            for (i, gw) in row.iter_mut().enumerate() {
                *gw = dj * input[i];
            }
            g.b_h[j] = *dj;
        }
        Ok((g, hidden, output))
    }

    fn apply_gradients(&mut self, g: &Gradients) {
        let eps = self.hyper.epsilon;
        let beps = self.hyper.bepsilon;
        let mu = self.hyper.momentum;
        for ((w, gw), prev) in self.w_ih.iter_mut().zip(&g.w_ih).zip(self.prev_dw_ih.iter_mut()) {
            let delta = -eps * gw + mu * *prev;
            *w += delta;
            *prev = delta;
        }
        for ((w, gw), prev) in self.w_ho.iter_mut().zip(&g.w_ho).zip(self.prev_dw_ho.iter_mut()) {
            let delta = -eps * gw + mu * *prev;
            *w += delta;
            *prev = delta;
        }
        for ((b, gb), prev) in self.b_h.iter_mut().zip(&g.b_h).zip(self.prev_db_h.iter_mut()) {
            let delta = -beps * gb + mu * *prev;
            *b += delta;
            *prev = delta;
        }
        for ((b, gb), prev) in self.b_o.iter_mut().zip(&g.b_o).zip(self.prev_db_o.iter_mut()) {
            let delta = -beps * gb + mu * *prev;
            *b += delta;
            *prev = delta;
        }
    }

    /// One online trial: forward pass, error, and a single weight update.
    /// Returns (error vector, hidden, output) from the forward pass.
    pub fn backprop_trial(
        &mut self,
        input: &[f64],
        desired: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), Error> {
        let (g, hidden, output) = self.gradients(input, desired)?;
        if output.iter().chain(hidden.iter()).any(|x| !x.is_finite()) {
            return Err(Error::TrainingDiverged);
        }
        self.apply_gradients(&g);
        let error: Vec<f64> = desired.iter().zip(&output).map(|(d, y)| d - y).collect();
        Ok((error, hidden, output))
    }

    /// Batch variant: one sweep accumulating gradients over all patterns,
    /// with a single momentum-smoothed update at the end of the sweep.
    pub fn batch_sweep(&mut self, patterns: &[(Vec<f64>, Vec<f64>)]) -> Result<(), Error> {
        let mut acc = Gradients::zeros(self);
        for (input, desired) in patterns {
            let (g, hidden, output) = self.gradients(input, desired)?;
            if output.iter().chain(hidden.iter()).any(|x| !x.is_finite()) {
                return Err(Error::TrainingDiverged);
            }
            acc.add(&g);
        }
        self.apply_gradients(&acc);
        Ok(())
    }

    /// FNV-1a hash over the exact weight bits; used to verify that
    /// evaluation passes never mutate a network.
    pub fn weight_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: f64| {
            for b in x.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for w in self.w_ih.iter().chain(&self.w_ho).chain(&self.b_h).chain(&self.b_o) {
            eat(*w);
        }
        h
    }

    /// Writes the plain-text weight snapshot.
    ///
    /// Format: header `WTS <inputSize> <hiddenSize> <outputSize> <seed>`,
    /// then one row per hidden unit (input->hidden weights), one row per
    /// output unit (hidden->output weights), one row of hidden biases, one
    /// row of output biases. 17 significant digits, locale-independent.
    pub fn snapshot_string(&self) -> String {
        let nin = self.input_size();
        let nh = self.hidden_size;
        let nout = self.output_size();
        let mut s = String::new();
        let _ = writeln!(s, "WTS {} {} {} {}", nin, nh, nout, self.hyper.seed);
        let row = |vals: &[f64], s: &mut String| {
            let mut first = true;
            for v in vals {
                if !first {
                    s.push(' ');
                }
                let _ = write!(s, "{:.16e}", v);
                first = false;
            }
            s.push('\n');
        };
        for j in 0..nh {
            row(&self.w_ih[j * nin..(j + 1) * nin], &mut s);
        }
        for k in 0..nout {
            row(&self.w_ho[k * nh..(k + 1) * nh], &mut s);
        }
        row(&self.b_h, &mut s);
        row(&self.b_o, &mut s);
        s
    }

    pub fn save_snapshot(&self, path: &Path) -> Result<(), Error> {
        std::fs::write(path, self.snapshot_string())
            .map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))
    }

    /// Loads weights from a snapshot into this network. Sizes must match.
    pub fn load_snapshot_str(&mut self, text: &str) -> Result<(), Error> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty weight snapshot".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "WTS" {
            return Err(Error::Parse {
                line: 1,
                msg: "expected `WTS <in> <hidden> <out> <seed>` header".into(),
            });
        }
        let nin: usize = parse_field(fields[1], 1)?;
        let nh: usize = parse_field(fields[2], 1)?;
        let nout: usize = parse_field(fields[3], 1)?;
        let seed: u64 = parse_field(fields[4], 1)?;
        if nin != self.input_size() || nh != self.hidden_size || nout != self.output_size() {
            return Err(Error::Data(format!(
                "snapshot shape {}-{}-{} does not match network {}-{}-{}",
                nin,
                nh,
                nout,
                self.input_size(),
                self.hidden_size,
                self.output_size()
            )));
        }
        let mut read_row = |expected: usize, lineno: usize| -> Result<Vec<f64>, Error> {
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "snapshot truncated".into(),
            })?;
            let vals: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
            let vals = vals.map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad weight value: {e}"),
            })?;
            if vals.len() != expected {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {} values, found {}", expected, vals.len()),
                });
            }
            Ok(vals)
        };
        let mut lineno = 1;
        for j in 0..nh {
            lineno += 1;
            let row = read_row(nin, lineno)?;
            self.w_ih[j * nin..(j + 1) * nin].copy_from_slice(&row);
        }
        for k in 0..nout {
            lineno += 1;
            let row = read_row(nh, lineno)?;
            self.w_ho[k * nh..(k + 1) * nh].copy_from_slice(&row);
        }
        lineno += 1;
        self.b_h = read_row(nh, lineno)?;
        lineno += 1;
        self.b_o = read_row(nout, lineno)?;
        self.hyper.seed = seed;
        Ok(())
    }

    pub fn load_snapshot(&mut self, path: &Path) -> Result<(), Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
        self.load_snapshot_str(&text)
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, Error>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e| Error::Parse {
        line,
        msg: format!("bad header field `{s}`: {e}"),
    })
}
