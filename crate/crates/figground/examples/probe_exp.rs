use figground::config::Config;
use figground::corpora::build_letterpart_corpus;
use figground::experiments::{run_seeds, ExperimentSpec};

fn main() {
    let mr: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let arm = std::env::args().nth(2).unwrap_or_else(|| "1a".into());
    let cfg = Config::default();
    let corpus = build_letterpart_corpus(229, 3, 1).unwrap();
    let seeds: Vec<u64> = (1..=4).collect();
    let mut spec = ExperimentSpec::by_id(&arm, true).unwrap();
    spec.maxrand = mr;
    let runs = run_seeds(&spec, &corpus, &cfg, &seeds, 2).unwrap();
    let ep: Vec<usize> = runs.iter().map(|r| r.epochs_to_criterion.unwrap_or(999)).collect();
    let px: Vec<usize> = runs.iter().map(|r| r.test_pixel_errors.unwrap()).collect();
    println!("{arm} mr {mr}: epochs {ep:?} px {px:?}");
}
