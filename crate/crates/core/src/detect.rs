//! Fit a finite point cloud by a finite union of full-rank lattice cosets.
//!
//! The fitter is greedy: candidate lattices come from difference vectors of
//! each anchor point to its nearest neighbors (reduced to short, pairwise
//! size-reduced bases), every candidate coset is scored by how many of the
//! still-unclaimed points it covers within `dist_tol`, and the best
//! candidate is selected round by round. Ties break toward larger coverage,
//! then larger determinant (coarser lattice), then lexicographic basis, so
//! runs are reproducible.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::{Coset, Lattice};
use crate::linalg::{f_det, f_inverse, f_mul_vec};
use crate::scalar::Vector;
use crate::Result;

/// Observed points, optionally with complex amplitudes, plus the bounding box.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub amplitudes: Option<Vec<(f64, f64)>>,
    pub box_lo: Vec<f64>,
    pub box_hi: Vec<f64>,
}

impl PointCloud {
    pub fn new(
        dim: usize,
        points: Vec<Vec<f64>>,
        amplitudes: Option<Vec<(f64, f64)>>,
    ) -> Result<PointCloud> {
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: points.iter().map(|p| p.len()).find(|&l| l != dim).unwrap_or(0),
            });
        }
        if let Some(a) = &amplitudes {
            if a.len() != points.len() {
                return Err(Error::Document(
                    "amplitude count does not match point count".into(),
                ));
            }
        }
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in &points {
            for i in 0..dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        Ok(PointCloud {
            dim,
            points,
            amplitudes,
            box_lo: lo,
            box_hi: hi,
        })
    }

    /// CSV ingestion: one point per line, coordinates first, optionally
    /// followed by the amplitude as re,im. Columns <= 3 are taken as pure
    /// coordinates; with more columns the final two are the amplitude.
    pub fn from_csv(text: &str) -> Result<PointCloud> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|t| t.trim().parse::<f64>()).collect();
            match row {
                Ok(r) => rows.push(r),
                Err(e) => {
                    return Err(Error::Document(format!(
                        "csv line {}: {e}",
                        lineno + 1
                    )))
                }
            }
        }
        if rows.is_empty() {
            return Err(Error::Document("empty point cloud".into()));
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Document("ragged csv rows".into()));
        }
        let (dim, has_amp) = if ncols <= 3 { (ncols, false) } else { (ncols - 2, true) };
        let mut points = Vec::with_capacity(rows.len());
        let mut amps = Vec::new();
        for r in rows {
            points.push(r[..dim].to_vec());
            if has_amp {
                amps.push((r[dim], r[dim + 1]));
            }
        }
        PointCloud::new(dim, points, has_amp.then_some(amps))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Result of the greedy fit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetFit {
    pub cosets: Vec<Coset>,
    /// Claimed coset per cloud point (greedy assignment; each point belongs
    /// to exactly one coset or is listed uncovered).
    pub assignment: Vec<Option<usize>>,
    pub uncovered: Vec<Vec<f64>>,
    /// Coset points inside the margin-deflated box with no cloud point near.
    pub overcover: Vec<Vec<f64>>,
    pub j: usize,
    /// Amplitude clusters per coset (value, count), present when the cloud
    /// carried amplitudes.
    pub amplitude_clusters: Option<Vec<Vec<((f64, f64), usize)>>>,
}

struct Candidate {
    basis: Vec<Vec<f64>>, // rows[i][j]: coordinate i of generator j
    inv: Vec<Vec<f64>>,
    anchor: Vec<f64>,
    det_abs: f64,
    key: Vec<i64>,
}

fn coset_covers(inv: &[Vec<f64>], basis: &[Vec<f64>], offset: &[f64], p: &[f64], tol: f64) -> bool {
    let diff: Vec<f64> = p.iter().zip(offset).map(|(a, b)| a - b).collect();
    let r = f_mul_vec(inv, &diff);
    let e: Vec<f64> = r.iter().map(|x| x - x.round()).collect();
    let err = f_mul_vec(basis, &e);
    err.iter().map(|x| x * x).sum::<f64>().sqrt() <= tol
}

/// Pairwise Lagrange size reduction plus deterministic ordering, so equal
/// lattices produce equal dedup keys.
fn reduce_basis(gens: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut gens = crate::linalg::f_size_reduce(gens);
    // Sign normalization and deterministic order.
    for g in &mut gens {
        if let Some(first) = g.iter().find(|x| x.abs() > 1e-9) {
            if *first < 0.0 {
                for x in g.iter_mut() {
                    *x = -*x;
                }
            }
        }
    }
    gens.sort_by(|a, b| {
        let (na, nb) = (
            a.iter().map(|x| x * x).sum::<f64>(),
            b.iter().map(|x| x * x).sum::<f64>(),
        );
        na.total_cmp(&nb).then_with(|| {
            for (x, y) in a.iter().zip(b) {
                let c = x.total_cmp(y);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    gens
}

fn candidate_from_gens(gens: Vec<Vec<f64>>, anchor: &[f64], dist_tol: f64) -> Option<Candidate> {
    let d = anchor.len();
    let gens = reduce_basis(gens);
    // A generator at the tolerance scale means the candidate cannot be
    // resolved from noise (and would cover everything spuriously).
    if gens
        .iter()
        .any(|g| g.iter().map(|x| x * x).sum::<f64>().sqrt() <= 2.0 * dist_tol)
    {
        return None;
    }
    // rows[i][j] = coordinate i of generator j
    let basis: Vec<Vec<f64>> = (0..d).map(|i| gens.iter().map(|g| g[i]).collect()).collect();
    let det = f_det(&basis);
    let scale: f64 = gens.iter().flat_map(|g| g.iter()).map(|x| x.abs()).fold(0.0, f64::max);
    if det.abs() < 1e-9 * scale.powi(d as i32).max(1e-12) {
        return None;
    }
    let inv = f_inverse(&basis)?;
    let key: Vec<i64> = gens
        .iter()
        .flat_map(|g| g.iter())
        .map(|&x| (x * 1e6).round() as i64)
        .collect();
    Some(Candidate {
        basis,
        inv,
        anchor: anchor.to_vec(),
        det_abs: det.abs(),
        key,
    })
}

/// d-subsets of the shortest difference vectors around the anchors.
fn generate_candidates(cloud: &PointCloud, remaining: &[usize], dist_tol: f64) -> Vec<Candidate> {
    let d = cloud.dim;
    let n = remaining.len();
    let max_anchors = if d >= 3 { 12 } else { 24 };
    let stride = (n / max_anchors).max(1);
    let mut anchor_idx: Vec<usize> = remaining.iter().copied().step_by(stride).collect();
    anchor_idx.truncate(max_anchors);

    let mut out: Vec<Candidate> = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<i64>> = std::collections::BTreeSet::new();
    for &ai in &anchor_idx {
        let a = &cloud.points[ai];
        // Nearest neighbors of the anchor among remaining points.
        let mut dists: Vec<(f64, usize)> = remaining
            .iter()
            .filter(|&&i| i != ai)
            .map(|&i| {
                let p = &cloud.points[i];
                let d2: f64 = p.iter().zip(a).map(|(x, y)| (x - y) * (x - y)).sum();
                (d2, i)
            })
            .collect();
        dists.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let neighbors: Vec<Vec<f64>> = dists
            .iter()
            .take(12)
            .map(|&(_, i)| {
                cloud.points[i]
                    .iter()
                    .zip(a)
                    .map(|(x, y)| x - y)
                    .collect()
            })
            .collect();
        let short: Vec<&Vec<f64>> = neighbors.iter().take(8).collect();
        // All d-subsets of the shortest differences.
        let m = short.len();
        let mut pick = vec![0usize; d];
        fn subsets(
            start: usize,
            depth: usize,
            d: usize,
            m: usize,
            pick: &mut Vec<usize>,
            f: &mut impl FnMut(&[usize]),
        ) {
            if depth == d {
                f(pick);
                return;
            }
            for i in start..m {
                pick[depth] = i;
                subsets(i + 1, depth + 1, d, m, pick, f);
            }
        }
        let mut add = |sel: &[usize]| {
            let gens: Vec<Vec<f64>> = sel.iter().map(|&i| short[i].clone()).collect();
            if let Some(c) = candidate_from_gens(gens, a, dist_tol) {
                if seen.insert(c.key.clone()) {
                    out.push(c);
                }
            }
        };
        subsets(0, 0, d, m, &mut pick, &mut add);
    }
    out
}

/// Least-squares refit of basis and offset over the points the candidate
/// currently covers: solve min sum |B n_i + t - p_i|^2 with n_i the rounded
/// lattice coordinates. Tames the box-scale drift of bases built from local
/// difference vectors of jittered points.
fn refine_candidate(
    points: &[Vec<f64>],
    remaining: &[usize],
    mut basis: Vec<Vec<f64>>,
    mut inv: Vec<Vec<f64>>,
    mut anchor: Vec<f64>,
    dist_tol: f64,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>, usize) {
    let d = anchor.len();
    let mut coverage = remaining
        .iter()
        .filter(|&&i| coset_covers(&inv, &basis, &anchor, &points[i], dist_tol))
        .count();
    for _ in 0..3 {
        let covered: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| coset_covers(&inv, &basis, &anchor, &points[i], dist_tol))
            .collect();
        if covered.len() < d + 1 {
            break;
        }
        // Normal equations over predictors (n, 1).
        let k = d + 1;
        let mut m = vec![vec![0.0f64; k]; k];
        let mut rhs = vec![vec![0.0f64; k]; d];
        for &i in &covered {
            let p = &points[i];
            let diff: Vec<f64> = p.iter().zip(&anchor).map(|(a, b)| a - b).collect();
            let mut z: Vec<f64> = f_mul_vec(&inv, &diff).iter().map(|x| x.round()).collect();
            z.push(1.0);
            for r in 0..k {
                for c in 0..k {
                    m[r][c] += z[r] * z[c];
                }
                for a in 0..d {
                    rhs[a][r] += p[a] * z[r];
                }
            }
        }
        let Some(minv) = f_inverse(&m) else { break };
        let mut new_basis = vec![vec![0.0f64; d]; d];
        let mut new_anchor = vec![0.0f64; d];
        for a in 0..d {
            let sol = f_mul_vec(&minv, &rhs[a]);
            for j in 0..d {
                new_basis[a][j] = sol[j];
            }
            new_anchor[a] = sol[d];
        }
        let Some(new_inv) = f_inverse(&new_basis) else { break };
        let new_coverage = remaining
            .iter()
            .filter(|&&i| coset_covers(&new_inv, &new_basis, &new_anchor, &points[i], dist_tol))
            .count();
        if new_coverage <= coverage {
            break;
        }
        basis = new_basis;
        inv = new_inv;
        anchor = new_anchor;
        coverage = new_coverage;
    }
    (basis, inv, anchor, coverage)
}

fn thread_budget() -> usize {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("QUASICOMB_THREADS") {
        Ok(v) => v.parse::<usize>().ok().filter(|&n| n > 0).unwrap_or(1).min(avail),
        Err(_) => avail,
    }
}

/// Greedy coset fit; see module docs for the tie-break order.
pub fn fit_cosets(cloud: &PointCloud, max_j: usize, dist_tol: f64) -> Result<CosetFit> {
    if cloud.is_empty() {
        return Err(Error::NoFit);
    }
    assert!(max_j >= 1);
    let mut remaining: Vec<usize> = (0..cloud.len()).collect();
    let mut assignment: Vec<Option<usize>> = vec![None; cloud.len()];
    let mut cosets: Vec<Coset> = Vec::new();

    while cosets.len() < max_j && remaining.len() >= 2 {
        let candidates = generate_candidates(cloud, &remaining, dist_tol);
        if candidates.is_empty() {
            break;
        }
        // Score every candidate in parallel chunks: coverage of remaining
        // points, plus coverage of the full cloud for the overcover gate.
        let threads = thread_budget().min(candidates.len()).max(1);
        let chunk = candidates.len().div_ceil(threads);
        let scores: Vec<(usize, usize)> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for ch in candidates.chunks(chunk) {
                let remaining = &remaining;
                let points = &cloud.points;
                handles.push(scope.spawn(move || {
                    ch.iter()
                        .map(|c| {
                            let covers = |p: &Vec<f64>| {
                                coset_covers(&c.inv, &c.basis, &c.anchor, p, dist_tol)
                            };
                            let cov = remaining
                                .iter()
                                .filter(|&&i| covers(&points[i]))
                                .count();
                            let full = points.iter().filter(|p| covers(p)).count();
                            (cov, full)
                        })
                        .collect::<Vec<(usize, usize)>>()
                }));
            }
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("scoring thread"))
                .collect()
        });
        // Overcover gate: of the box points a candidate lattice predicts
        // (box volume / det), essentially all must be cloud points; a finer
        // lattice that merely contains the cloud covers at most (n-1)/n of
        // its own points. When nothing qualifies (subset-style clouds) fall
        // back to the best fill instead of raw coverage, which would
        // re-select a fine superlattice.
        let box_vol: f64 = (0..cloud.dim)
            .map(|i| (cloud.box_hi[i] - cloud.box_lo[i]).max(0.0))
            .product();
        let fill = |full_cov: usize, det: f64| {
            if box_vol > 0.0 {
                full_cov as f64 * det / box_vol
            } else {
                1.0
            }
        };
        let mut by_coverage: Vec<usize> = (0..candidates.len()).collect();
        by_coverage.sort_by(|&x, &y| {
            let (a, b) = (&candidates[x], &candidates[y]);
            scores[y]
                .0
                .cmp(&scores[x].0)
                .then_with(|| b.det_abs.total_cmp(&a.det_abs))
                .then_with(|| a.key.cmp(&b.key))
        });
        let mut by_fill = by_coverage.clone();
        by_fill.sort_by(|&x, &y| {
            let fx = fill(scores[x].1, candidates[x].det_abs);
            let fy = fill(scores[y].1, candidates[y].det_abs);
            fy.total_cmp(&fx)
                .then_with(|| scores[y].0.cmp(&scores[x].0))
                .then_with(|| candidates[x].key.cmp(&candidates[y].key))
        });
        // Refinement pool: leaders by coverage plus leaders by fill, so a
        // drifty true-lattice basis (good fill after refinement) is seen
        // even when superlattice candidates dominate raw coverage.
        let mut pool: Vec<usize> = Vec::new();
        for &i in by_coverage.iter().take(12).chain(by_fill.iter().take(12)) {
            if !pool.contains(&i) {
                pool.push(i);
            }
        }
        struct Refined {
            coverage: usize,
            det_abs: f64,
            full_fill: f64,
            key: Vec<i64>,
            basis: Vec<Vec<f64>>,
            inv: Vec<Vec<f64>>,
            anchor: Vec<f64>,
        }
        let mut refined: Vec<Refined> = Vec::new();
        for &i in &pool {
            if scores[i].0 < 2 {
                continue;
            }
            let cand = &candidates[i];
            let (basis, inv, anchor, coverage) = refine_candidate(
                &cloud.points,
                &remaining,
                cand.basis.clone(),
                cand.inv.clone(),
                cand.anchor.clone(),
                dist_tol,
            );
            let det = f_det(&basis).abs();
            let full_cov = cloud
                .points
                .iter()
                .filter(|p| coset_covers(&inv, &basis, &anchor, p, dist_tol))
                .count();
            refined.push(Refined {
                coverage,
                det_abs: det,
                full_fill: fill(full_cov, det),
                key: cand.key.clone(),
                basis,
                inv,
                anchor,
            });
        }
        if refined.is_empty() {
            break;
        }
        refined.sort_by(|a, b| {
            b.coverage
                .cmp(&a.coverage)
                .then_with(|| b.det_abs.total_cmp(&a.det_abs))
                .then_with(|| a.key.cmp(&b.key))
        });
        let pick = match refined.iter().position(|r| r.full_fill >= 0.9) {
            Some(i) => i,
            None => refined
                .iter()
                .enumerate()
                .max_by(|(_, a), (_, b)| {
                    a.full_fill
                        .total_cmp(&b.full_fill)
                        .then_with(|| a.coverage.cmp(&b.coverage))
                        .then_with(|| a.det_abs.total_cmp(&b.det_abs))
                        .then_with(|| b.key.cmp(&a.key))
                })
                .map(|(i, _)| i)
                .unwrap_or(0),
        };
        let Refined {
            coverage: best_cover,
            basis,
            inv,
            anchor,
            ..
        } = refined.swap_remove(pick);
        if best_cover < 2 {
            break;
        }
        let gens: Vec<Vec<f64>> = (0..cloud.dim)
            .map(|j| (0..cloud.dim).map(|i| basis[i][j]).collect())
            .collect();
        let lattice = Lattice::from_numeric_generators(&gens)?;
        let coset = Coset::new(lattice, Vector::Numeric(anchor.clone()))?;
        let idx = cosets.len();
        remaining.retain(|&i| {
            if coset_covers(&inv, &basis, &anchor, &cloud.points[i], dist_tol) {
                assignment[i] = Some(idx);
                false
            } else {
                true
            }
        });
        cosets.push(coset);
    }

    if cosets.is_empty() {
        return Err(Error::NoFit);
    }
    let uncovered: Vec<Vec<f64>> = remaining.iter().map(|&i| cloud.points[i].clone()).collect();
    let overcover = compute_overcover(cloud, &cosets, dist_tol);
    let amplitude_clusters = cloud.amplitudes.as_ref().map(|amps| {
        cosets
            .iter()
            .enumerate()
            .map(|(j, _)| {
                let mut clusters: Vec<((f64, f64), usize)> = Vec::new();
                for (i, a) in amps.iter().enumerate() {
                    if assignment[i] != Some(j) {
                        continue;
                    }
                    match clusters.iter_mut().find(|(v, _)| {
                        Complex64::new(v.0 - a.0, v.1 - a.1).norm() <= 1e-6
                    }) {
                        Some((_, n)) => *n += 1,
                        None => clusters.push((*a, 1)),
                    }
                }
                clusters.sort_by(|a, b| b.1.cmp(&a.1));
                clusters
            })
            .collect()
    });
    Ok(CosetFit {
        j: cosets.len(),
        cosets,
        assignment,
        uncovered,
        overcover,
        amplitude_clusters,
    })
}

/// Coset points inside the box (deflated by dist_tol at the boundary) that
/// match no cloud point within dist_tol.
fn compute_overcover(cloud: &PointCloud, cosets: &[Coset], dist_tol: f64) -> Vec<Vec<f64>> {
    let d = cloud.dim;
    let center: Vec<f64> = (0..d)
        .map(|i| (cloud.box_lo[i] + cloud.box_hi[i]) / 2.0)
        .collect();
    let radius = (0..d)
        .map(|i| (cloud.box_hi[i] - cloud.box_lo[i]) / 2.0)
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        + 1.0;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for coset in cosets {
        for p in coset.enumerate_in_ball(&Vector::Numeric(center.clone()), radius) {
            let x = p.to_f64s();
            let inside = (0..d).all(|i| {
                x[i] >= cloud.box_lo[i] + dist_tol && x[i] <= cloud.box_hi[i] - dist_tol
            });
            if !inside {
                continue;
            }
            let matched = cloud.points.iter().any(|q| {
                q.iter()
                    .zip(&x)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    <= dist_tol
            });
            if !matched && !out.iter().any(|q| q == &x) {
                out.push(x);
            }
        }
    }
    out.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            let c = x.total_cmp(y);
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    });
    out
}

/// Fresh recomputation of coverage; confirms the fit invariant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitReport {
    pub uncovered: Vec<Vec<f64>>,
    pub overcover: Vec<Vec<f64>>,
    /// Cloud points matching more than one fitted coset.
    pub multiply_covered: Vec<Vec<f64>>,
    pub fully_covered: bool,
}

pub fn verify_fit(cloud: &PointCloud, fit: &CosetFit, dist_tol: f64) -> FitReport {
    let mut uncovered = Vec::new();
    let mut multiply_covered = Vec::new();
    for p in &cloud.points {
        let mut hits = 0;
        for c in &fit.cosets {
            let inv = c.lattice().inv_f64();
            let basis = c.lattice().basis_f64();
            if coset_covers(&inv, &basis, &c.offset().to_f64s(), p, dist_tol) {
                hits += 1;
            }
        }
        if hits == 0 {
            uncovered.push(p.clone());
        } else if hits > 1 {
            multiply_covered.push(p.clone());
        }
    }
    let overcover = compute_overcover(cloud, &fit.cosets, dist_tol);
    FitReport {
        fully_covered: uncovered.is_empty(),
        uncovered,
        overcover,
        multiply_covered,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_cloud(gens: &[Vec<f64>], offset: &[f64], half: f64) -> Vec<Vec<f64>> {
        let d = offset.len();
        let lattice = Lattice::from_numeric_generators(&gens.to_vec()).unwrap();
        let coset = Coset::new(lattice, Vector::Numeric(offset.to_vec())).unwrap();
        let center = Vector::Numeric(vec![0.0; d]);
        coset
            .enumerate_in_ball(&center, half * (d as f64).sqrt() + 1.0)
            .into_iter()
            .map(|p| p.to_f64s())
            .filter(|p| p.iter().all(|&x| x.abs() <= half))
            .collect()
    }

    #[test]
    fn recovers_standard_lattice() {
        let pts = grid_cloud(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[0.0, 0.0], 20.0);
        let cloud = PointCloud::new(2, pts, None).unwrap();
        let fit = fit_cosets(&cloud, 4, 1e-6).unwrap();
        assert_eq!(fit.j, 1);
        assert!(fit.uncovered.is_empty());
        assert!(fit.overcover.is_empty());
        assert!((fit.cosets[0].lattice().det_abs().to_f64().abs() - 1.0).abs() < 1e-9);
        let rep = verify_fit(&cloud, &fit, 1e-6);
        assert!(rep.fully_covered && rep.overcover.is_empty());
    }

    #[test]
    fn half_shifted_union_collapses_to_single_coarser_cover() {
        let mut pts = grid_cloud(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[0.0, 0.0], 10.0);
        pts.extend(grid_cloud(
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            &[0.5, 0.5],
            10.0,
        ));
        let cloud = PointCloud::new(2, pts, None).unwrap();
        let fit = fit_cosets(&cloud, 4, 1e-6).unwrap();
        // The determinant-1/2 lattice generated by (1/2,1/2),(1/2,-1/2)
        // covers everything in one coset.
        assert_eq!(fit.j, 1, "cosets: {:?}", fit.cosets);
        assert!((fit.cosets[0].lattice().det_abs().to_f64().abs() - 0.5).abs() < 1e-9);
        assert!(fit.uncovered.is_empty());
        assert!(fit.overcover.is_empty());
    }

    #[test]
    fn incommensurable_union_needs_two_cosets() {
        let s = 2f64.sqrt();
        let mut pts = grid_cloud(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[0.0, 0.0], 12.0);
        for p in grid_cloud(&[vec![s, 0.0], vec![0.0, s]], &[0.0, 0.0], 12.0) {
            if !pts.iter().any(|q| {
                q.iter()
                    .zip(&p)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
                    < 1e-9
            }) {
                pts.push(p);
            }
        }
        let cloud = PointCloud::new(2, pts, None).unwrap();
        let fit = fit_cosets(&cloud, 3, 1e-6).unwrap();
        assert_eq!(fit.j, 2, "fit: {:?}", fit.cosets);
        assert!(fit.uncovered.is_empty());
        let dets: Vec<f64> = fit
            .cosets
            .iter()
            .map(|c| c.lattice().det_abs().to_f64())
            .collect();
        assert!(dets.iter().any(|&d| (d - 1.0).abs() < 1e-6));
        assert!(dets.iter().any(|&d| (d - 2.0).abs() < 1e-6));
    }

    #[test]
    fn verify_fit_flags_removed_point() {
        let mut pts = grid_cloud(&[vec![1.0]], &[0.0], 10.0);
        let cloud_full = PointCloud::new(1, pts.clone(), None).unwrap();
        let fit = fit_cosets(&cloud_full, 2, 1e-6).unwrap();
        // Remove an interior point: it must show up as overcover.
        pts.retain(|p| (p[0] - 3.0).abs() > 1e-9);
        let cloud = PointCloud::new(1, pts, None).unwrap();
        let rep = verify_fit(&cloud, &fit, 1e-6);
        assert!(rep
            .overcover
            .iter()
            .any(|p| (p[0] - 3.0).abs() < 1e-9));
    }

    #[test]
    fn jitter_below_half_tol_still_verifies() {
        let pts = grid_cloud(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[0.25, 0.0], 8.0);
        let jittered: Vec<Vec<f64>> = pts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let eps = 1e-4 * ((i % 7) as f64 - 3.0) / 3.0;
                vec![p[0] + eps, p[1] - eps / 2.0]
            })
            .collect();
        let cloud = PointCloud::new(2, jittered, None).unwrap();
        let fit = fit_cosets(&cloud, 2, 1e-3).unwrap();
        assert_eq!(fit.j, 1);
        let rep = verify_fit(&cloud, &fit, 1e-3);
        assert!(rep.fully_covered);
    }

    #[test]
    fn no_fit_for_single_point() {
        let cloud = PointCloud::new(2, vec![vec![0.0, 0.0]], None).unwrap();
        assert!(matches!(fit_cosets(&cloud, 2, 1e-6), Err(Error::NoFit)));
    }

    #[test]
    fn csv_round_trip_with_amplitudes() {
        let text = "0,0,1,0\n1,0,0.5,0\n0,1,1,0\n1,1,0.5,0\n";
        let cloud = PointCloud::from_csv(text).unwrap();
        assert_eq!(cloud.dim, 2);
        assert_eq!(cloud.len(), 4);
        let fit = fit_cosets(&cloud, 2, 1e-6).unwrap();
        let clusters = fit.amplitude_clusters.as_ref().unwrap();
        let total: usize = clusters[0].iter().map(|(_, n)| n).sum();
        assert_eq!(total, 4);
        assert_eq!(clusters[0].len(), 2);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(PointCloud::from_csv("1,2\n1,oops\n").is_err());
        assert!(PointCloud::from_csv("").is_err());
    }
}
