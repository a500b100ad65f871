//! Hidden-layer analysis: principal component analysis from scratch and a
//! single-threshold separation check on a chosen component.

use std::fmt::Write as _;

use crate::error::Error;

/// Labeled hidden-activation points collected from training or inference.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HiddenTrace {
    pub labels: Vec<String>,
    pub points: Vec<Vec<f64>>,
}

impl HiddenTrace {
    pub fn push(&mut self, label: &str, point: Vec<f64>) {
        self.labels.push(label.to_string());
        self.points.push(point);
    }

    /// CSV-like export: `label,v1,v2,...` one line per point.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (label, point) in self.labels.iter().zip(&self.points) {
            s.push_str(label);
            for v in point {
                let _ = write!(s, ",{:.17e}", v);
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<HiddenTrace, Error> {
        let mut trace = HiddenTrace::default();
        let mut dim = None;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let label = fields.next().unwrap_or_default().to_string();
            let point: Vec<f64> = fields
                .map(|f| {
                    f.parse().map_err(|e| Error::Parse {
                        line: i + 1,
                        msg: format!("bad value `{f}`: {e}"),
                    })
                })
                .collect::<Result<_, _>>()?;
            if point.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "trace line has no values".into(),
                });
            }
            match dim {
                None => dim = Some(point.len()),
                Some(d) if d != point.len() => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "trace dimensions differ between lines".into(),
                    })
                }
                _ => {}
            }
            trace.labels.push(label);
            trace.points.push(point);
        }
        Ok(trace)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pca {
    pub mean: Vec<f64>,
    /// Orthonormal components, strongest first.
    pub components: Vec<Vec<f64>>,
    /// Non-increasing eigenvalues of the covariance matrix.
    pub eigenvalues: Vec<f64>,
    /// Centered data projected onto every component, one row per point.
    pub projections: Vec<Vec<f64>>,
    /// Set when the data had no variance at all.
    pub degenerate: bool,
}

/// Mean-centered covariance (1/(n-1) normalization) eigendecomposition via
/// cyclic Jacobi rotations. Component signs follow the convention that the
/// entry of largest magnitude is positive, so projections are stable.
pub fn pca(points: &[Vec<f64>]) -> Result<Pca, Error> {
    if points.len() < 2 {
        return Err(Error::Contract("pca needs at least two points".into()));
    }
    let d = points[0].len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(Error::Contract("pca points must share a non-zero dimension".into()));
    }
    let n = points.len();
    let mut mean = vec![0.0; d];
    for p in points {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let centered: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();
    // Covariance, symmetric d x d.
    let mut cov = vec![0.0; d * d];
    for p in &centered {
        for i in 0..d {
            let pi = p[i];
            if pi == 0.0 {
                continue;
            }
            for j in i..d {
                cov[i * d + j] += pi * p[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            let v = cov[i * d + j] / (n as f64 - 1.0);
            cov[i * d + j] = v;
            cov[j * d + i] = v;
        }
    }
    let degenerate = cov.iter().all(|&v| v == 0.0);
    let (mut eigenvalues, mut components) = if degenerate {
        // No variance anywhere: all eigenvalues zero, any orthonormal basis.
        let mut basis = vec![vec![0.0; d]; d];
        for (i, b) in basis.iter_mut().enumerate() {
            b[i] = 1.0;
        }
        (vec![0.0; d], basis)
    } else {
        jacobi_eigen(&cov, d)
    };
    // Sort by eigenvalue, descending; fix signs.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eigenvalues[b].partial_cmp(&eigenvalues[a]).unwrap());
    eigenvalues = order.iter().map(|&i| eigenvalues[i]).collect();
    components = order.iter().map(|&i| components[i].clone()).collect();
    for comp in &mut components {
        let mut max_i = 0;
        for (i, v) in comp.iter().enumerate() {
            if v.abs() > comp[max_i].abs() {
                max_i = i;
            }
        }
        if comp[max_i] < 0.0 {
            for v in comp.iter_mut() {
                *v = -*v;
            }
        }
    }
    let projections: Vec<Vec<f64>> = centered
        .iter()
        .map(|p| {
            components
                .iter()
                .map(|c| c.iter().zip(p).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    Ok(Pca {
        mean,
        components,
        eigenvalues,
        projections,
        degenerate,
    })
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// (eigenvalues, eigenvectors-as-rows), unsorted.
fn jacobi_eigen(matrix: &[f64], d: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut a = matrix.to_vec();
    // v starts as identity; columns accumulate the rotations.
    let mut v = vec![0.0; d * d];
    for i in 0..d {
        v[i * d + i] = 1.0;
    }
    let max_sweeps = 100;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                off += a[i * d + j] * a[i * d + j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&a, d)) {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[p * d + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * d + p];
                let aqq = a[q * d + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigenvalues: Vec<f64> = (0..d).map(|i| a[i * d + i]).collect();
    let vectors: Vec<Vec<f64>> = (0..d)
        .map(|col| (0..d).map(|row| v[row * d + col]).collect())
        .collect();
    (eigenvalues, vectors)
}

fn frobenius(a: &[f64], d: usize) -> f64 {
    (0..d * d).map(|i| a[i] * a[i]).sum::<f64>().sqrt()
}

/// Best single-threshold classifier on one projection component for binary
/// labels. Returns (threshold, accuracy), accuracy taken over both
/// orientations.
pub fn separation_check(
    projections: &[Vec<f64>],
    labels: &[String],
    component: usize,
) -> Result<(f64, f64), Error> {
    if projections.len() != labels.len() || projections.is_empty() {
        return Err(Error::Contract("separation_check needs labeled projections".into()));
    }
    let mut classes: Vec<&String> = Vec::new();
    for l in labels {
        if !classes.contains(&l) {
            classes.push(l);
        }
    }
    if classes.len() != 2 {
        return Err(Error::Contract(format!(
            "separation_check needs exactly 2 label classes, found {}",
            classes.len()
        )));
    }
    if component >= projections[0].len() {
        return Err(Error::Contract("component index out of range".into()));
    }
    let mut values: Vec<(f64, bool)> = projections
        .iter()
        .zip(labels)
        .map(|(p, l)| (p[component], l == classes[0]))
        .collect();
    values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let n = values.len();
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut candidates = vec![values[0].0 - 1.0];
    for w in values.windows(2) {
        candidates.push((w[0].0 + w[1].0) / 2.0);
    }
    candidates.push(values[n - 1].0 + 1.0);
    for thr in candidates {
        // class0 below the threshold...
        let hits = values
            .iter()
            .filter(|(v, is0)| (*v <= thr) == *is0)
            .count();
        // ...or class0 above it.
        let acc = hits.max(n - hits) as f64 / n as f64;
        if acc > best.1 {
            best = (thr, acc);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn line_in_2d_has_one_dominant_component() {
        // Points on a line: the first component runs along it and the
        // second eigenvalue is ~0.
        let points: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                let t = i as f64;
                vec![1.0 + 2.0 * t, 0.5 + 1.0 * t]
            })
            .collect();
        let p = pca(&points).unwrap();
        assert!(p.eigenvalues[1].abs() < 1e-10);
        let dir = &p.components[0];
        let slope = dir[1] / dir[0];
        assert!((slope - 0.5).abs() < 1e-10);
    }

    #[test]
    fn isotropic_data_has_equal_eigenvalues() {
        // Four unit points on the axes: covariance is isotropic.
        let points = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let p = pca(&points).unwrap();
        assert!((p.eigenvalues[0] - p.eigenvalues[1]).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_data_is_flagged() {
        let points = vec![vec![2.0, 3.0], vec![2.0, 3.0], vec![2.0, 3.0]];
        let p = pca(&points).unwrap();
        assert!(p.degenerate);
        assert!(p.eigenvalues.iter().all(|&e| e == 0.0));
        // Basis still orthonormal.
        for (i, a) in p.components.iter().enumerate() {
            for (j, b) in p.components.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    /// Independent eigensolver oracle: power iteration with deflation.
    fn power_iteration_eigen(cov: &[f64], d: usize, count: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut mat = cov.to_vec();
        let mut values = Vec::new();
        let mut vectors: Vec<Vec<f64>> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..count {
            let mut v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for _ in 0..20_000 {
                let mut next = vec![0.0; d];
                for i in 0..d {
                    for j in 0..d {
                        next[i] += mat[i * d + j] * v[j];
                    }
                }
                let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    break;
                }
                for x in &mut next {
                    *x /= norm;
                }
                v = next;
            }
            let mut av = vec![0.0; d];
            for i in 0..d {
                for j in 0..d {
                    av[i] += mat[i * d + j] * v[j];
                }
            }
            let lambda: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
            // Deflate.
            for i in 0..d {
                for j in 0..d {
                    mat[i * d + j] -= lambda * v[i] * v[j];
                }
            }
            values.push(lambda);
            vectors.push(v);
        }
        (values, vectors)
    }

    #[test]
    fn matches_power_iteration_oracle_on_random_5d_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let points: Vec<Vec<f64>> = (0..60)
            .map(|_| {
                let base: f64 = rng.gen_range(-1.0..1.0);
                vec![
                    base + rng.gen_range(-0.1..0.1),
                    rng.gen_range(-1.0..1.0),
                    2.0 * base + rng.gen_range(-0.2..0.2),
                    rng.gen_range(-0.5..0.5),
                    rng.gen_range(-0.01..0.01),
                ]
            })
            .collect();
        let p = pca(&points).unwrap();
        // Rebuild the covariance for the oracle.
        let d = 5;
        let n = points.len();
        let mut mean = vec![0.0; d];
        for pt in &points {
            for (m, v) in mean.iter_mut().zip(pt) {
                *m += v / n as f64;
            }
        }
        let mut cov = vec![0.0; d * d];
        for pt in &points {
            for i in 0..d {
                for j in 0..d {
                    cov[i * d + j] += (pt[i] - mean[i]) * (pt[j] - mean[j]) / (n as f64 - 1.0);
                }
            }
        }
        let (oracle_vals, oracle_vecs) = power_iteration_eigen(&cov, d, d);
        for k in 0..d {
            assert!(
                (p.eigenvalues[k] - oracle_vals[k]).abs() < 1e-8,
                "eigenvalue {k}: {} vs oracle {}",
                p.eigenvalues[k],
                oracle_vals[k]
            );
            // Up to sign.
            let dot: f64 = p.components[k].iter().zip(&oracle_vecs[k]).map(|(a, b)| a * b).sum();
            assert!(dot.abs() > 1.0 - 1e-6, "component {k} misaligned: |dot| = {}", dot.abs());
        }
    }

    #[test]
    fn orthonormal_components_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let points: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..6).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let p = pca(&points).unwrap();
        for (i, a) in p.components.iter().enumerate() {
            for (j, b) in p.components.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-10);
            }
        }
        // Projection variance along component k equals eigenvalue k.
        for k in 0..6 {
            let proj: Vec<f64> = p.projections.iter().map(|row| row[k]).collect();
            let var = proj.iter().map(|x| x * x).sum::<f64>() / (proj.len() as f64 - 1.0);
            assert!((var - p.eigenvalues[k]).abs() < 1e-8);
        }
        // Reconstruction from all components recovers the centered data.
        for (pt, proj) in points.iter().zip(&p.projections) {
            for i in 0..6 {
                let rebuilt: f64 = (0..6).map(|k| proj[k] * p.components[k][i]).sum();
                assert!((rebuilt - (pt[i] - p.mean[i])).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn pca_is_deterministic() {
        let points = vec![
            vec![1.0, 2.0, 0.1],
            vec![2.0, 1.0, -0.3],
            vec![3.0, 5.0, 0.2],
            vec![-1.0, 0.5, 0.0],
        ];
        assert_eq!(pca(&points).unwrap(), pca(&points).unwrap());
    }

    #[test]
    fn separation_on_clean_and_identical_clusters() {
        let proj: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![if i < 10 { -1.0 - 0.01 * i as f64 } else { 1.0 + 0.01 * i as f64 }])
            .collect();
        let labels: Vec<String> = (0..20)
            .map(|i| if i < 10 { "a".to_string() } else { "b".to_string() })
            .collect();
        let (_, acc) = separation_check(&proj, &labels, 0).unwrap();
        assert_eq!(acc, 1.0);
        // Fully overlapping clusters: best threshold is no better than the
        // larger class share (here exactly 0.5).
        let same: Vec<Vec<f64>> = (0..20).map(|i| vec![(i % 10) as f64]).collect();
        let (_, acc) = separation_check(&same, &labels, 0).unwrap();
        assert!(acc <= 0.6);
    }

    #[test]
    fn trace_round_trips() {
        let mut t = HiddenTrace::default();
        t.push("brim", vec![0.25, 0.5]);
        t.push("body", vec![1.0, -0.125]);
        let back = HiddenTrace::parse(&t.to_text()).unwrap();
        assert_eq!(t, back);
    }
}
