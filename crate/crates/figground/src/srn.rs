//! The recurrent figure-ground associating procedure.
//!
//! Step 1 places a scene and its figure mask on the input layer and trains
//! the network to segregate figure from ground on the output banks. Step 2
//! places the target scene on the same scene bank, loads the context bank
//! with the hidden activations captured from the step-1 forward pass, and
//! trains toward the analogous figure and ground. Nothing carries across
//! pairs: the next pair's figure mask overwrites the context bank.
//!
//! A plain feed-forward baseline that sees source, figure and target all at
//! once lives here too, for the architecture comparisons.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{AnalogyPair, Corpus, Domain, NetShape, PairRecord};
use crate::error::Error;
use crate::net::{banks, score_outputs, Bank, Hyperparameters, Network, Score, ScoreMode};

/// Activations recorded from one training or inference step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub step: u8,
    pub hidden: Vec<f64>,
    pub output: Vec<f64>,
    pub error: Vec<f64>,
}

/// Builds the SRN for a corpus: scene (+hints) and context on the input
/// layer, figure and ground banks on the output layer, hidden sized to the
/// context bank.
pub fn build_network(shape: NetShape, hyper: Hyperparameters) -> Result<Network, Error> {
    let mut input = vec![("scene", shape.scene)];
    if shape.hints > 0 {
        input.push(("hints", shape.hints));
    }
    input.push(("context", shape.context));
    let net = Network::new(
        banks(&input),
        shape.context,
        banks(&[("figure", shape.out_bank), ("ground", shape.out_bank)]),
        hyper,
    )?;
    let ctx = net.input_bank("context").expect("context bank exists");
    if ctx.size != net.hidden_size {
        return Err(Error::Contract(
            "context bank and hidden layer must be the same size".into(),
        ));
    }
    Ok(net)
}

/// The feed-forward comparison network: source, figure and target side by
/// side on the input layer, no context bank, no recurrence.
pub fn build_ff_network(shape: NetShape, hidden: usize, hyper: Hyperparameters) -> Result<Network, Error> {
    Network::new(
        banks(&[
            ("source", shape.scene),
            ("figure", shape.context),
            ("target", shape.scene),
        ]),
        hidden,
        banks(&[("figure", shape.out_bank), ("ground", shape.out_bank)]),
        hyper,
    )
}

fn assemble(scene: &[f64], hints: Option<&Vec<f64>>, context: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(scene.len() + hints.map_or(0, |h| h.len()) + context.len());
    v.extend_from_slice(scene);
    if let Some(h) = hints {
        v.extend_from_slice(h);
    }
    v.extend_from_slice(context);
    v
}

fn desired(figure: &[f64], ground: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(figure.len() + ground.len());
    v.extend_from_slice(figure);
    v.extend_from_slice(ground);
    v
}

fn check_sizes(net: &Network, pair: &AnalogyPair, input: &[f64]) -> Result<(), Error> {
    if input.len() != net.input_size() {
        return Err(Error::Contract(format!(
            "pair banks ({} units) do not fit the input layer ({} units)",
            input.len(),
            net.input_size()
        )));
    }
    if pair.source_figure.len() + pair.source_ground.len() != net.output_size() {
        return Err(Error::Contract("desired banks do not fit the output layer".into()));
    }
    Ok(())
}

/// Step 1: segregate the source figure and ground, with the figure mask on
/// the context bank. One forward pass and one weight update; the returned
/// trace carries the forward-pass hidden activations.
pub fn train_step1(net: &mut Network, pair: &AnalogyPair) -> Result<StepTrace, Error> {
    let input = assemble(&pair.source, pair.hints.as_ref(), &pair.source_figure_mask);
    check_sizes(net, pair, &input)?;
    let want = desired(&pair.source_figure, &pair.source_ground);
    let (error, hidden, output) = net.backprop_trial(&input, &want)?;
    Ok(StepTrace {
        step: 1,
        hidden,
        output,
        error,
    })
}

/// Step 2: produce the analogous figure and ground for the target scene,
/// with the step-1 hidden activations copied onto the context bank.
pub fn train_step2(
    net: &mut Network,
    pair: &AnalogyPair,
    step1_hidden: &[f64],
) -> Result<StepTrace, Error> {
    if step1_hidden.len() != net.hidden_size {
        return Err(Error::Contract(format!(
            "context copy needs {} hidden activations, got {}",
            net.hidden_size,
            step1_hidden.len()
        )));
    }
    let input = assemble(&pair.target, pair.hints.as_ref(), step1_hidden);
    check_sizes(net, pair, &input)?;
    let want = desired(&pair.target_figure, &pair.target_ground);
    let (error, hidden, output) = net.backprop_trial(&input, &want)?;
    Ok(StepTrace {
        step: 2,
        hidden,
        output,
        error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochReport {
    pub percent_correct: f64,
    pub step1_correct: usize,
    pub step2_correct: usize,
    pub total_units: usize,
}

/// One sweep through the given pairs in (optionally shuffled) order:
/// step 1, hidden copy, step 2 for each pair, counting rounded output
/// correctness across both steps.
pub fn train_epoch(
    net: &mut Network,
    corpus: &Corpus,
    order: &mut [usize],
    rng: &mut ChaCha8Rng,
) -> Result<EpochReport, Error> {
    if order.is_empty() {
        return Err(Error::Contract("train_epoch needs a non-empty corpus".into()));
    }
    if net.hyper.shuffle {
        order.shuffle(rng);
    }
    let mut step1_correct = 0;
    let mut step2_correct = 0;
    let mut total = 0;
    for &i in order.iter() {
        let pair = &corpus.pairs[i];
        let t1 = train_step1(net, pair)?;
        let t2 = train_step2(net, pair, &t1.hidden)?;
        let want1 = desired(&pair.source_figure, &pair.source_ground);
        let want2 = desired(&pair.target_figure, &pair.target_ground);
        let s1 = score_outputs(&t1.output, &want1, ScoreMode::Rounded, &[])?;
        let s2 = score_outputs(&t2.output, &want2, ScoreMode::Rounded, &[])?;
        step1_correct += s1.correct;
        step2_correct += s2.correct;
        total += s1.total + s2.total;
    }
    Ok(EpochReport {
        percent_correct: (step1_correct + step2_correct) as f64 / total as f64,
        step1_correct,
        step2_correct,
        total_units: total,
    })
}

/// One run's record: the learning curve, stopping data and test scores.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub experiment: String,
    pub seed: u64,
    pub shuffle: bool,
    pub per_epoch: Vec<f64>,
    pub epochs_to_criterion: Option<usize>,
    pub trials: usize,
    pub converged: bool,
    pub plateau: bool,
    pub test_exact: Option<(usize, usize)>,
    pub test_pixel_errors: Option<usize>,
}

/// True when the curve's trailing `window` epochs never gained more than
/// `min_gain` from one epoch to the next.
pub fn detect_plateau(curve: &[f64], window: usize, min_gain: f64) -> bool {
    if curve.len() < window + 1 {
        return false;
    }
    curve
        .windows(2)
        .rev()
        .take(window)
        .all(|w| w[1] - w[0] <= min_gain)
}

/// Trains until the per-epoch correct fraction reaches `stoperr` or the
/// epoch cap is hit. Non-convergence is reported, never raised.
pub fn train_until(net: &mut Network, corpus: &Corpus, experiment: &str) -> Result<RunReport, Error> {
    let mut order: Vec<usize> = corpus.train_idx.clone();
    // The shuffle stream is separated from the weight-init stream so the
    // two never alias even though both derive from the run seed.
    let mut rng = ChaCha8Rng::seed_from_u64(net.hyper.seed ^ 0x5348_5546_464c_4531);
    let mut per_epoch = Vec::new();
    let mut epochs_to_criterion = None;
    let mut trials = 0;
    for epoch in 1..=net.hyper.maxepoch {
        let report = train_epoch(net, corpus, &mut order, &mut rng)?;
        trials += order.len();
        per_epoch.push(report.percent_correct);
        if report.percent_correct >= net.hyper.stoperr {
            epochs_to_criterion = Some(epoch);
            break;
        }
    }
    let converged = epochs_to_criterion.is_some();
    let plateau = !converged && detect_plateau(&per_epoch, 50, 0.001);
    Ok(RunReport {
        experiment: experiment.to_string(),
        seed: net.hyper.seed,
        shuffle: net.hyper.shuffle,
        per_epoch,
        epochs_to_criterion,
        trials,
        converged,
        plateau,
        test_exact: None,
        test_pixel_errors: None,
    })
}

/// Evaluation-mode pass: step-1 forward, hidden copy, step-2 forward, no
/// weight updates anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub step1: StepTrace,
    pub step2: StepTrace,
    pub predicted_figure: Vec<f64>,
    pub predicted_ground: Vec<f64>,
}

pub fn infer(net: &Network, pair: &AnalogyPair) -> Result<Inference, Error> {
    let input1 = assemble(&pair.source, pair.hints.as_ref(), &pair.source_figure_mask);
    check_sizes(net, pair, &input1)?;
    let (h1, o1) = net.forward(&input1)?;
    let input2 = assemble(&pair.target, pair.hints.as_ref(), &h1);
    let (h2, o2) = net.forward(&input2)?;
    let bank = net.output_bank("figure").expect("figure bank exists").size;
    let predicted_figure = o2[..bank].to_vec();
    let predicted_ground = o2[bank..].to_vec();
    let err1: Vec<f64> = desired(&pair.source_figure, &pair.source_ground)
        .iter()
        .zip(&o1)
        .map(|(d, y)| d - y)
        .collect();
    let err2: Vec<f64> = desired(&pair.target_figure, &pair.target_ground)
        .iter()
        .zip(&o2)
        .map(|(d, y)| d - y)
        .collect();
    Ok(Inference {
        step1: StepTrace {
            step: 1,
            hidden: h1,
            output: o1,
            error: err1,
        },
        step2: StepTrace {
            step: 2,
            hidden: h2,
            output: o2,
            error: err2,
        },
        predicted_figure,
        predicted_ground,
    })
}

/// How held-out pairs are marked correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Every step-2 output unit must round to its desired value.
    RoundedExact,
    /// The argmax of the figure bank must be the desired figure unit;
    /// used for localist person banks.
    FigureArgmax,
    /// The candidate object region with the highest mean figure-bank
    /// activation must be the answer object; used for iconic scenes,
    /// where a problem is solved by selecting the right object.
    ObjectSelect,
}

impl EvalMode {
    pub fn for_domain(domain: Domain) -> EvalMode {
        match domain {
            Domain::Family => EvalMode::FigureArgmax,
            Domain::Geometric => EvalMode::ObjectSelect,
            Domain::Letter => EvalMode::RoundedExact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalSummary {
    pub exact: usize,
    pub total: usize,
    /// Wrong rounded output units, step 1 plus step 2.
    pub pixel_errors: usize,
}

fn figure_bank(net: &Network) -> Bank {
    net.output_bank("figure").expect("figure bank exists").clone()
}

/// Mean figure-bank activation over each candidate object's cells; the
/// selected object is the highest-scoring one.
pub fn select_object(figure_out: &[f64], corpus: &Corpus, idx: usize) -> Option<usize> {
    let PairRecord::Geometric { target, .. } = &corpus.records[idx] else {
        return None;
    };
    let side = crate::corpus::SCENE_SIDE;
    let mut best = (0, f64::NEG_INFINITY);
    for (j, obj) in target.iter().enumerate() {
        let cells = obj.where_mask(side, side).cells();
        let mean: f64 =
            cells.iter().map(|&(r, c)| figure_out[r * side + c]).sum::<f64>() / cells.len() as f64;
        if mean > best.1 {
            best = (j, mean);
        }
    }
    Some(best.0)
}

/// Scores the given pairs through `infer` only; the network is untouched.
pub fn evaluate(
    net: &Network,
    corpus: &Corpus,
    idx: &[usize],
    mode: EvalMode,
) -> Result<EvalSummary, Error> {
    let bank = figure_bank(net);
    let mut exact = 0;
    let mut pixel_errors = 0;
    for &i in idx {
        let pair = &corpus.pairs[i];
        let inf = infer(net, pair)?;
        let want1 = desired(&pair.source_figure, &pair.source_ground);
        let want2 = desired(&pair.target_figure, &pair.target_ground);
        let s1 = score_outputs(&inf.step1.output, &want1, ScoreMode::Rounded, &[])?;
        let s2 = score_outputs(&inf.step2.output, &want2, ScoreMode::Rounded, &[])?;
        pixel_errors += (s1.total - s1.correct) + (s2.total - s2.correct);
        let hit = match mode {
            EvalMode::RoundedExact => s2.exact,
            EvalMode::FigureArgmax => {
                let s: Score = score_outputs(
                    &inf.step2.output[..bank.size],
                    &pair.target_figure,
                    ScoreMode::BankArgmax,
                    &[Bank {
                        name: "figure".into(),
                        size: bank.size,
                        offset: 0,
                    }],
                )?;
                s.exact
            }
            EvalMode::ObjectSelect => {
                let PairRecord::Geometric { answer, .. } = &corpus.records[i] else {
                    return Err(Error::Contract(
                        "object selection needs iconic-scene records".into(),
                    ));
                };
                select_object(&inf.predicted_figure, corpus, i) == Some(*answer)
            }
        };
        if hit {
            exact += 1;
        }
    }
    Ok(EvalSummary {
        exact,
        total: idx.len(),
        pixel_errors,
    })
}

/// Supervised single-step training of the feed-forward baseline: source,
/// figure mask and target are all placed on the input layer at once.
pub fn ff_input(pair: &AnalogyPair) -> Vec<f64> {
    let mut v =
        Vec::with_capacity(pair.source.len() + pair.source_figure_mask.len() + pair.target.len());
    v.extend_from_slice(&pair.source);
    v.extend_from_slice(&pair.source_figure_mask);
    v.extend_from_slice(&pair.target);
    v
}

pub fn train_ff_until(net: &mut Network, corpus: &Corpus, experiment: &str) -> Result<RunReport, Error> {
    let mut order: Vec<usize> = corpus.train_idx.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(net.hyper.seed ^ 0x5348_5546_464c_4531);
    let mut per_epoch = Vec::new();
    let mut epochs_to_criterion = None;
    let mut trials = 0;
    for epoch in 1..=net.hyper.maxepoch {
        if net.hyper.shuffle {
            order.shuffle(&mut rng);
        }
        let mut correct = 0;
        let mut total = 0;
        for &i in order.iter() {
            let pair = &corpus.pairs[i];
            let input = ff_input(pair);
            let want = desired(&pair.target_figure, &pair.target_ground);
            let (_, _, output) = net.backprop_trial(&input, &want)?;
            let s = score_outputs(&output, &want, ScoreMode::Rounded, &[])?;
            correct += s.correct;
            total += s.total;
        }
        trials += order.len();
        let pct = correct as f64 / total as f64;
        per_epoch.push(pct);
        if pct >= net.hyper.stoperr {
            epochs_to_criterion = Some(epoch);
            break;
        }
    }
    let converged = epochs_to_criterion.is_some();
    let plateau = !converged && detect_plateau(&per_epoch, 50, 0.001);
    Ok(RunReport {
        experiment: experiment.to_string(),
        seed: net.hyper.seed,
        shuffle: net.hyper.shuffle,
        per_epoch,
        epochs_to_criterion,
        trials,
        converged,
        plateau,
        test_exact: None,
        test_pixel_errors: None,
    })
}

/// Scores held-out pairs for the feed-forward baseline. Pixel errors count
/// its single output step.
pub fn evaluate_ff(net: &Network, corpus: &Corpus, idx: &[usize]) -> Result<EvalSummary, Error> {
    let mut exact = 0;
    let mut pixel_errors = 0;
    for &i in idx {
        let pair = &corpus.pairs[i];
        let input = ff_input(pair);
        let (_, output) = net.forward(&input)?;
        let want = desired(&pair.target_figure, &pair.target_ground);
        let s = score_outputs(&output, &want, ScoreMode::Rounded, &[])?;
        pixel_errors += s.total - s.correct;
        if s.exact {
            exact += 1;
        }
    }
    Ok(EvalSummary {
        exact,
        total: idx.len(),
        pixel_errors,
    })
}

impl RunReport {
    /// Plain-text record with a stable field order.
    pub fn to_text(&self, version: &str, config_hash: u64) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# figground {version} seed {} config {:016x}",
            self.seed, config_hash
        );
        let _ = writeln!(s, "experiment {}", self.experiment);
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "shuffle {}", u8::from(self.shuffle));
        let _ = writeln!(s, "momentum_stream continuous");
        for (i, pct) in self.per_epoch.iter().enumerate() {
            let _ = writeln!(s, "epoch {} percent {:.6}", i + 1, pct);
        }
        match self.epochs_to_criterion {
            Some(e) => {
                let _ = writeln!(s, "epochs_to_criterion {e}");
            }
            None => {
                let _ = writeln!(s, "epochs_to_criterion -");
            }
        }
        let _ = writeln!(s, "trials {}", self.trials);
        let _ = writeln!(s, "converged {}", u8::from(self.converged));
        let _ = writeln!(s, "plateau {}", u8::from(self.plateau));
        match self.test_exact {
            Some((hit, total)) => {
                let _ = writeln!(s, "test_exact {hit}/{total}");
            }
            None => {
                let _ = writeln!(s, "test_exact -");
            }
        }
        match self.test_pixel_errors {
            Some(e) => {
                let _ = writeln!(s, "test_pixel_errors {e}");
            }
            None => {
                let _ = writeln!(s, "test_pixel_errors -");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{compile_record, PairRecord};

    fn family_corpus() -> Corpus {
        // Four tiny family-style pairs over a 6-person bank.
        let records: Vec<PairRecord> = vec![
            PairRecord::Family { src_figure: 0, src_ground: 1, tgt_figure: 2, tgt_ground: 3 },
            PairRecord::Family { src_figure: 2, src_ground: 3, tgt_figure: 0, tgt_ground: 1 },
            PairRecord::Family { src_figure: 4, src_ground: 5, tgt_figure: 2, tgt_ground: 1 },
            PairRecord::Family { src_figure: 1, src_ground: 0, tgt_figure: 3, tgt_ground: 2 },
        ];
        Corpus::new(
            Domain::Family,
            1,
            6,
            records,
            vec![0, 1, 2],
            vec![3],
            String::new(),
        )
        .unwrap()
    }

    fn small_net(corpus: &Corpus, seed: u64) -> Network {
        let mut hyper = Hyperparameters {
            seed,
            maxepoch: 400,
            ..Hyperparameters::default()
        };
        hyper.epsilon = 0.3;
        let mut net = build_network(corpus.shape(), hyper).unwrap();
        net.init_weights(0.003, seed).unwrap();
        net
    }

    #[test]
    fn context_bank_must_match_hidden_size() {
        let shape = NetShape { scene: 10, hints: 0, context: 5, out_bank: 10 };
        // build_network sizes hidden to the context bank, so this succeeds;
        // the constructor enforces the equality itself.
        let net = build_network(shape, Hyperparameters::default()).unwrap();
        assert_eq!(net.hidden_size, 5);
        assert_eq!(net.input_bank("context").unwrap().size, 5);
    }

    #[test]
    fn untrained_outputs_sit_near_one_half() {
        let corpus = family_corpus();
        let mut net = small_net(&corpus, 3);
        net.init_weights(0.003, 3).unwrap();
        let pair = &corpus.pairs[0];
        let inf = infer(&net, pair).unwrap();
        // |logistic(s) - 0.5| <= 0.25 |s|; bound the net inputs from the
        // init range and the at-most-(inputs+1) active units.
        let hid_bound = 0.25 * 0.003 * (net.input_size() as f64 + 1.0);
        let out_bound = 0.25 * 0.003 * ((0.5 + hid_bound) * net.hidden_size as f64 + 1.0);
        for &o in &inf.step2.output {
            assert!((o - 0.5).abs() <= out_bound, "output {o} outside bound {out_bound}");
        }
    }

    #[test]
    fn step2_ablation_with_zero_context_is_well_formed() {
        let corpus = family_corpus();
        let mut net = small_net(&corpus, 4);
        let pair = &corpus.pairs[0];
        let zeros = vec![0.0; net.hidden_size];
        let trace = train_step2(&mut net, pair, &zeros).unwrap();
        assert_eq!(trace.output.len(), net.output_size());
        assert!(trace.output.iter().all(|o| o.is_finite()));
    }

    #[test]
    fn step2_rejects_wrong_context_size() {
        let corpus = family_corpus();
        let mut net = small_net(&corpus, 4);
        let pair = &corpus.pairs[0];
        assert!(train_step2(&mut net, pair, &[0.0; 3]).is_err());
    }

    #[test]
    fn fixed_seed_training_is_bit_reproducible() {
        let corpus = family_corpus();
        let run = |seed: u64| {
            let mut net = small_net(&corpus, seed);
            let pair = &corpus.pairs[0];
            let t1 = train_step1(&mut net, pair).unwrap();
            let t2 = train_step2(&mut net, pair, &t1.hidden).unwrap();
            (t1, t2, net.weight_hash())
        };
        let (a1, a2, ah) = run(9);
        let (b1, b2, bh) = run(9);
        assert_eq!(a1, b1);
        assert_eq!(a2, b2);
        assert_eq!(ah, bh);
    }

    #[test]
    fn copied_hidden_is_the_step1_forward_hidden() {
        // The step-1 trace must hold the forward-pass hidden computed with
        // the pre-update weights, not a recomputation.
        let corpus = family_corpus();
        let mut net = small_net(&corpus, 11);
        let pair = &corpus.pairs[0];
        let input1 = assemble(&pair.source, None, &pair.source_figure_mask);
        let (expect_hidden, _) = net.forward(&input1).unwrap();
        let t1 = train_step1(&mut net, pair).unwrap();
        assert_eq!(t1.hidden, expect_hidden);
        let (post_hidden, _) = net.forward(&input1).unwrap();
        assert_ne!(t1.hidden, post_hidden);
    }

    #[test]
    fn infer_never_mutates_the_network() {
        let corpus = family_corpus();
        let net = small_net(&corpus, 5);
        let before = net.weight_hash();
        for pair in &corpus.pairs {
            infer(&net, pair).unwrap();
        }
        assert_eq!(net.weight_hash(), before);
    }

    #[test]
    fn infer_is_idempotent() {
        let corpus = family_corpus();
        let net = small_net(&corpus, 6);
        let a = infer(&net, &corpus.pairs[1]).unwrap();
        let b = infer(&net, &corpus.pairs[1]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mastered_single_pair_epoch_reports_full_credit() {
        let mut corpus = family_corpus();
        corpus.train_idx = vec![0];
        corpus.test_idx = vec![1, 2, 3];
        let mut net = small_net(&corpus, 7);
        net.hyper.maxepoch = 2000;
        net.hyper.stoperr = 1.0;
        let report = train_until(&mut net, &corpus, "unit").unwrap();
        assert!(report.converged, "single pair should be mastered");
        assert_eq!(*report.per_epoch.last().unwrap(), 1.0);
        // One more epoch on the mastered pair stays at 1.0.
        let mut order = vec![0usize];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let er = train_epoch(&mut net, &corpus, &mut order, &mut rng).unwrap();
        assert_eq!(er.percent_correct, 1.0);
    }

    #[test]
    fn epoch_percent_matches_trace_recount() {
        let corpus = family_corpus();
        let mut net = small_net(&corpus, 8);
        net.hyper.shuffle = false;
        let mut order: Vec<usize> = corpus.train_idx.clone();
        // Recount by replaying the same deterministic order on a clone.
        let mut replica = net.clone();
        let mut recount_correct = 0;
        let mut recount_total = 0;
        for &i in &order.clone() {
            let pair = &corpus.pairs[i];
            let t1 = train_step1(&mut replica, pair).unwrap();
            let t2 = train_step2(&mut replica, pair, &t1.hidden).unwrap();
            for (t, want) in [
                (&t1, desired(&pair.source_figure, &pair.source_ground)),
                (&t2, desired(&pair.target_figure, &pair.target_ground)),
            ] {
                let s = score_outputs(&t.output, &want, ScoreMode::Rounded, &[]).unwrap();
                recount_correct += s.correct;
                recount_total += s.total;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let er = train_epoch(&mut net, &corpus, &mut order, &mut rng).unwrap();
        assert_eq!(er.percent_correct, recount_correct as f64 / recount_total as f64);
        assert_eq!(er.total_units, recount_total);
    }

    #[test]
    fn stoperr_zero_stops_after_first_epoch() {
        let corpus = family_corpus();
        let mut net = small_net(&corpus, 12);
        net.hyper.stoperr = 0.0;
        let report = train_until(&mut net, &corpus, "unit").unwrap();
        assert_eq!(report.epochs_to_criterion, Some(1));
        assert_eq!(report.trials, corpus.train_idx.len());
    }

    #[test]
    fn trials_are_epochs_times_corpus_size() {
        let corpus = family_corpus();
        let mut net = small_net(&corpus, 13);
        net.hyper.maxepoch = 5;
        net.hyper.stoperr = 1.1; // unreachable, runs all epochs
        net.hyper.stoperr = 1.0;
        let report = train_until(&mut net, &corpus, "unit").unwrap();
        let epochs = report.per_epoch.len();
        assert_eq!(report.trials, epochs * corpus.train_idx.len());
    }

    #[test]
    fn plateau_detector_on_synthetic_curves() {
        let flat = vec![0.9; 60];
        assert!(detect_plateau(&flat, 50, 0.001));
        let mut rising: Vec<f64> = (0..60).map(|i| 0.5 + 0.005 * i as f64).collect();
        assert!(!detect_plateau(&rising, 50, 0.001));
        rising.truncate(10);
        assert!(!detect_plateau(&rising, 50, 0.001));
    }

    #[test]
    fn report_text_is_stable() {
        let report = RunReport {
            experiment: "unit".into(),
            seed: 7,
            shuffle: true,
            per_epoch: vec![0.5, 0.75],
            epochs_to_criterion: Some(2),
            trials: 8,
            converged: true,
            plateau: false,
            test_exact: Some((3, 4)),
            test_pixel_errors: Some(11),
        };
        let text = report.to_text("0.1.0", 0xabcd);
        assert!(text.contains("epoch 1 percent 0.500000"));
        assert!(text.contains("epochs_to_criterion 2"));
        assert!(text.contains("test_exact 3/4"));
        assert!(text.contains("test_pixel_errors 11"));
        assert_eq!(text, report.to_text("0.1.0", 0xabcd));
    }

    #[test]
    fn ff_with_zeroed_target_cannot_depend_on_the_target() {
        // Structural information argument: zeroing the target bank makes
        // the baseline's output a function of source and figure alone.
        let corpus = family_corpus();
        let mut net = build_ff_network(corpus.shape(), 6, Hyperparameters::default()).unwrap();
        net.init_weights(0.3, 21).unwrap();
        let zap = |pair: &AnalogyPair| {
            let mut p = pair.clone();
            p.target = vec![0.0; p.target.len()];
            p
        };
        // Pairs 0 and 2 share nothing; rebuild them to share source/figure.
        let a = compile_record(
            &PairRecord::Family { src_figure: 0, src_ground: 1, tgt_figure: 2, tgt_ground: 3 },
            6,
        )
        .unwrap();
        let b = compile_record(
            &PairRecord::Family { src_figure: 0, src_ground: 1, tgt_figure: 4, tgt_ground: 5 },
            6,
        )
        .unwrap();
        let (_, out_a) = net.forward(&ff_input(&zap(&a))).unwrap();
        let (_, out_b) = net.forward(&ff_input(&zap(&b))).unwrap();
        assert_eq!(out_a, out_b);
    }
}
