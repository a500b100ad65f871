//! Python bindings: corpus generation, training, evaluation and analysis
//! driven from Python, mirroring the CLI surface.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use figground::analysis;
use figground::config::Config;
use figground::corpus::Corpus;
use figground::experiments::{
    collect_step1_trace, run_hinton_baseline, run_single, ExperimentSpec,
};
use figground::net::logistic as logistic_fn;
use figground::scene::{decode_at, encode_scene, Alphabet, SceneObject};
use figground::srn::{evaluate, EvalMode};
use figground::grid::Grid;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A generated corpus handle.
#[pyclass(name = "Corpus")]
struct PyCorpus {
    inner: Corpus,
    spec: ExperimentSpec,
}

#[pymethods]
impl PyCorpus {
    #[getter]
    fn n_pairs(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn n_train(&self) -> usize {
        self.inner.train_idx.len()
    }

    #[getter]
    fn n_test(&self) -> usize {
        self.inner.test_idx.len()
    }

    #[getter]
    fn domain(&self) -> String {
        self.inner.domain.as_str().to_string()
    }

    fn content_hash(&self) -> u64 {
        self.inner.content_hash()
    }

    fn save(&self, path: &str) -> PyResult<()> {
        self.inner.save(std::path::Path::new(path)).map_err(err)
    }
}

/// One training run's outcome.
#[pyclass(name = "RunReport")]
struct PyRunReport {
    #[pyo3(get)]
    experiment: String,
    #[pyo3(get)]
    seed: u64,
    #[pyo3(get)]
    epochs_to_criterion: Option<usize>,
    #[pyo3(get)]
    trials: usize,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    per_epoch: Vec<f64>,
    #[pyo3(get)]
    test_exact: Option<(usize, usize)>,
    #[pyo3(get)]
    test_pixel_errors: Option<usize>,
}

/// Generates an experiment's corpus (`1a`, `1c`, `2a`, `2b`, `2c`,
/// `2c-nohints`, `2d`, `3a`, `3b`).
#[pyfunction]
#[pyo3(signature = (experiment, seed=1, paper_scale=false, samples=None))]
fn generate_corpus(
    experiment: &str,
    seed: u64,
    paper_scale: bool,
    samples: Option<usize>,
) -> PyResult<PyCorpus> {
    let mut spec = ExperimentSpec::by_id(experiment, paper_scale).map_err(err)?;
    if let Some(s) = samples {
        if spec.samples.is_some() {
            spec.samples = Some(s);
        }
    }
    let inner = spec.make_corpus(seed).map_err(err)?;
    Ok(PyCorpus { inner, spec })
}

/// Trains one network on the corpus and scores the held-out pairs.
#[pyfunction]
#[pyo3(signature = (corpus, seed=1, maxepoch=None))]
fn train(corpus: &PyCorpus, seed: u64, maxepoch: Option<usize>) -> PyResult<PyRunReport> {
    let mut spec = corpus.spec.clone();
    if let Some(m) = maxepoch {
        spec.maxepoch = m;
    }
    let (run, _) = run_single(&spec, &corpus.inner, &Config::default(), seed).map_err(err)?;
    Ok(PyRunReport {
        experiment: run.experiment,
        seed: run.seed,
        epochs_to_criterion: run.epochs_to_criterion,
        trials: run.trials,
        converged: run.converged,
        per_epoch: run.per_epoch,
        test_exact: run.test_exact,
        test_pixel_errors: run.test_pixel_errors,
    })
}

/// Trains, then returns (held-out exact, total, PC1 separation accuracy of
/// the step-1 hidden trace over the training pairs).
#[pyfunction]
#[pyo3(signature = (corpus, seed=1))]
fn train_and_analyze(corpus: &PyCorpus, seed: u64) -> PyResult<(usize, usize, f64)> {
    let (run, net) = run_single(&corpus.spec, &corpus.inner, &Config::default(), seed).map_err(err)?;
    let _ = run;
    let summary = evaluate(
        &net,
        &corpus.inner,
        &corpus.inner.test_idx,
        EvalMode::for_domain(corpus.inner.domain),
    )
    .map_err(err)?;
    let trace = collect_step1_trace(&net, &corpus.inner, &corpus.inner.train_idx).map_err(err)?;
    let p = analysis::pca(&trace.points).map_err(err)?;
    let mut classes: Vec<&String> = Vec::new();
    for l in &trace.labels {
        if !classes.contains(&l) {
            classes.push(l);
        }
    }
    let acc = if classes.len() == 2 {
        analysis::separation_check(&p.projections, &trace.labels, 0)
            .map_err(err)?
            .1
    } else {
        f64::NAN
    };
    Ok((summary.exact, summary.total, acc))
}

/// The logistic squashing function.
#[pyfunction]
fn logistic(x: f64) -> f64 {
    logistic_fn(x)
}

/// Principal components of labeled points: returns (eigenvalues,
/// projections).
#[pyfunction]
fn pca(points: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let p = analysis::pca(&points).map_err(err)?;
    Ok((p.eigenvalues, p.projections))
}

/// Encodes 2x2 objects (row, col, color, shape) into the 7x7x6 scene
/// tensor and reads one object's attribute vector back from its cells.
#[pyfunction]
fn bind_and_decode(objects: Vec<(usize, usize, usize, usize)>) -> PyResult<Vec<Vec<f64>>> {
    let ab = Alphabet::rgb();
    let objs: Vec<SceneObject> = objects
        .iter()
        .map(|&(r, c, color, shape)| {
            if color >= 3 || shape >= 3 {
                return Err(PyValueError::new_err("color and shape must be in 0..3"));
            }
            Ok(SceneObject::new(r, c, ab.what(color, shape)))
        })
        .collect::<PyResult<_>>()?;
    let scene = encode_scene(&objs, 7, 7, &ab).map_err(err)?;
    objs.iter()
        .map(|o| {
            let mask: Grid = o.where_mask(7, 7);
            decode_at(&scene, &mask).map_err(err)
        })
        .collect()
}

/// The question-answering baseline on the embedded family trees. Returns
/// (epochs, train_correct, test_correct, test_total).
#[pyfunction]
#[pyo3(signature = (seed=1, holdout=4, maxepoch=30_000))]
fn hinton_baseline(seed: u64, holdout: usize, maxepoch: usize) -> PyResult<(usize, usize, usize, usize)> {
    let r = run_hinton_baseline(seed, holdout, maxepoch).map_err(err)?;
    Ok((r.epochs, r.train_correct, r.test_correct, r.test_total))
}

#[pymodule]
fn figground_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", figground::VERSION)?;
    m.add_class::<PyCorpus>()?;
    m.add_class::<PyRunReport>()?;
    m.add_function(wrap_pyfunction!(generate_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(train_and_analyze, m)?)?;
    m.add_function(wrap_pyfunction!(logistic, m)?)?;
    m.add_function(wrap_pyfunction!(pca, m)?)?;
    m.add_function(wrap_pyfunction!(bind_and_decode, m)?)?;
    m.add_function(wrap_pyfunction!(hinton_baseline, m)?)?;
    Ok(())
}
