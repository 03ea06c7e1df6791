//! Schwartz test functions closed under the Fourier transform, numerical
//! pairings <f, phi> with certified truncation bounds, Poisson-formula
//! checks and almost-periodicity diagnostics.
//!
//! A test function is a finite sum of atoms
//!     p(x - c) e^{-pi a |x - c|^2} e^{2 pi i <x, b>},
//! polynomial times Gaussian times modulation. The class is closed under
//! differentiation, monomial multiplication, translation, reflection and
//! both Fourier transforms, all in closed form, which is what makes the
//! pairing tails certifiable: coset sums are truncated where an explicit
//! Gaussian-shell bound (Voronoi covering counts times the atom envelope)
//! drops below the requested tolerance.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::comb::{CombDistribution, CombSupport, CombTerm};
use crate::error::Error;
use crate::fourier;
use crate::lattice::{Coset, Lattice};
use crate::scalar::{multi_norm, MultiIndex, Vector};
use crate::wfunc::WFunction;
use crate::Result;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

/// One polynomial-Gaussian-modulation atom.
#[derive(Clone, Debug)]
pub struct GaussAtom {
    dim: usize,
    /// Polynomial in u = x - c: multi-index -> complex coefficient.
    poly: BTreeMap<MultiIndex, Complex64>,
    /// Gaussian width a > 0 in e^{-pi a |u|^2}.
    width: f64,
    center: Vec<f64>,
    modulation: Vec<f64>,
}

impl GaussAtom {
    pub fn new(
        poly: BTreeMap<MultiIndex, Complex64>,
        width: f64,
        center: Vec<f64>,
        modulation: Vec<f64>,
    ) -> GaussAtom {
        assert!(width > 0.0, "Gaussian width must be positive");
        let dim = center.len();
        assert_eq!(modulation.len(), dim);
        let mut a = GaussAtom {
            dim,
            poly,
            width,
            center,
            modulation,
        };
        a.prune();
        a
    }

    fn prune(&mut self) {
        self.poly.retain(|_, c| c.norm() != 0.0);
        if self.poly.is_empty() {
            self.poly.insert(vec![0; self.dim], Complex64::new(0.0, 0.0));
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let u: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let r2: f64 = u.iter().map(|v| v * v).sum();
        let mut p = Complex64::new(0.0, 0.0);
        for (m, q) in &self.poly {
            let mono: f64 = u
                .iter()
                .zip(m)
                .map(|(v, &e)| v.powi(e as i32))
                .product();
            p += q * mono;
        }
        let phase = TAU * x.iter().zip(&self.modulation).map(|(a, b)| a * b).sum::<f64>();
        p * (-PI * self.width * r2).exp() * Complex64::new(phase.cos(), phase.sin())
    }

    /// d/dx_j of the atom, still a single atom:
    /// p <- dp/du_j - 2 pi a u_j p + 2 pi i b_j p.
    fn derivative(&self, j: usize) -> GaussAtom {
        let mut poly: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        let mut add = |m: MultiIndex, c: Complex64| {
            *poly.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        };
        for (m, q) in &self.poly {
            if m[j] > 0 {
                let mut md = m.clone();
                md[j] -= 1;
                add(md, q * m[j] as f64);
            }
            let mut mu = m.clone();
            mu[j] += 1;
            add(mu, -q * TAU * self.width); // 2 pi a = tau * a
            add(
                m.clone(),
                q * Complex64::new(0.0, TAU * self.modulation[j]),
            );
        }
        GaussAtom::new(poly, self.width, self.center.clone(), self.modulation.clone())
    }

    /// Multiply by the ambient coordinate x_j = u_j + c_j.
    fn mul_xj(&self, j: usize) -> GaussAtom {
        let mut poly: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        let mut add = |m: MultiIndex, c: Complex64| {
            *poly.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        };
        for (m, q) in &self.poly {
            let mut mu = m.clone();
            mu[j] += 1;
            add(mu, *q);
            add(m.clone(), q * self.center[j]);
        }
        GaussAtom::new(poly, self.width, self.center.clone(), self.modulation.clone())
    }

    fn scale(&self, c: Complex64) -> GaussAtom {
        let poly = self.poly.iter().map(|(m, q)| (m.clone(), q * c)).collect();
        GaussAtom::new(poly, self.width, self.center.clone(), self.modulation.clone())
    }

    /// Closed-form transform; `inverse` flips the kernel sign.
    fn transform(&self, inverse: bool) -> GaussAtom {
        let d = self.dim;
        let a = self.width;
        let out_width = 1.0 / a;
        // q(v) = p((s i / 2 pi) d/dv) applied to a^{-d/2} e^{-pi |v|^2 / a},
        // with s = +1 forward and -1 inverse.
        let s = if inverse { -1.0 } else { 1.0 };
        let mut q: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        q.insert(vec![0; d], Complex64::new(a.powf(-(d as f64) / 2.0), 0.0));
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (m, pm) in &self.poly {
            // Apply ((s i / 2 pi) d/dv_j)^{m_j} to the running Gaussian poly.
            let mut cur = q.clone();
            for (j, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    let mut next: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
                    let mut add = |mm: MultiIndex, c: Complex64| {
                        *next.entry(mm).or_insert(Complex64::new(0.0, 0.0)) += c;
                    };
                    for (mm, qq) in &cur {
                        // d/dv_j (r e^{-pi |v|^2 / a}) =
                        //   (dr/dv_j - (2 pi / a) v_j r) e^{...}
                        if mm[j] > 0 {
                            let mut md = mm.clone();
                            md[j] -= 1;
                            add(md, qq * mm[j] as f64);
                        }
                        let mut mu = mm.clone();
                        mu[j] += 1;
                        add(mu, -qq * TAU / a);
                    }
                    let factor = Complex64::new(0.0, s / TAU);
                    cur = next
                        .into_iter()
                        .map(|(mm, qq)| (mm, qq * factor))
                        .collect();
                }
            }
            for (mm, qq) in cur {
                *acc.entry(mm).or_insert(Complex64::new(0.0, 0.0)) += qq * pm;
            }
        }
        // Phase e^{2 pi i <c, b>} folds into the polynomial (same sign in
        // both directions).
        let cb: f64 = self
            .center
            .iter()
            .zip(&self.modulation)
            .map(|(x, y)| x * y)
            .sum();
        let phase = Complex64::new(0.0, TAU * cb).exp();
        let poly = acc.into_iter().map(|(m, c)| (m, c * phase)).collect();
        let (center, modulation) = if inverse {
            (
                self.modulation.iter().map(|x| -x).collect(),
                self.center.clone(),
            )
        } else {
            (
                self.modulation.clone(),
                self.center.iter().map(|x| -x).collect(),
            )
        };
        GaussAtom::new(poly, out_width, center, modulation)
    }

    /// Envelope bound |atom(x)| <= Q(s) e^{-pi a s^2} for s = |x - c|, with
    /// Q evaluated crudely via sum |coef| s^{||m||}.
    fn envelope(&self, s: f64) -> f64 {
        let q: f64 = self
            .poly
            .iter()
            .map(|(m, c)| c.norm() * s.powi(multi_norm(m) as i32))
            .sum();
        q * (-PI * self.width * s * s).exp()
    }
}

/// A finite sum of Gaussian atoms.
#[derive(Clone, Debug)]
pub struct TestFunction {
    dim: usize,
    atoms: Vec<GaussAtom>,
}

impl TestFunction {
    pub fn new(atoms: Vec<GaussAtom>) -> TestFunction {
        let dim = atoms.first().map_or(0, |a| a.dim);
        assert!(atoms.iter().all(|a| a.dim == dim));
        TestFunction { dim, atoms }
    }

    /// The standard Gaussian e^{-pi |x|^2}.
    pub fn gaussian(dim: usize) -> TestFunction {
        Self::gaussian_with(1.0, &vec![0.0; dim], &vec![0.0; dim])
    }

    /// e^{-pi a |x - c|^2} e^{2 pi i <x, b>}.
    pub fn gaussian_with(width: f64, center: &[f64], modulation: &[f64]) -> TestFunction {
        let mut poly = BTreeMap::new();
        poly.insert(vec![0; center.len()], Complex64::new(1.0, 0.0));
        TestFunction::new(vec![GaussAtom::new(
            poly,
            width,
            center.to_vec(),
            modulation.to_vec(),
        )])
    }

    /// (x - c)^m e^{-pi a |x - c|^2} e^{2 pi i <x, b>}.
    pub fn hermite_atom(
        m: &[u32],
        width: f64,
        center: &[f64],
        modulation: &[f64],
    ) -> TestFunction {
        let mut poly = BTreeMap::new();
        poly.insert(m.to_vec(), Complex64::new(1.0, 0.0));
        TestFunction::new(vec![GaussAtom::new(
            poly,
            width,
            center.to_vec(),
            modulation.to_vec(),
        )])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[GaussAtom] {
        &self.atoms
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.atoms.iter().map(|a| a.eval(x)).sum()
    }

    pub fn add(&self, other: &TestFunction) -> TestFunction {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.clone());
        TestFunction::new(atoms)
    }

    pub fn scale(&self, c: Complex64) -> TestFunction {
        TestFunction::new(self.atoms.iter().map(|a| a.scale(c)).collect())
    }

    /// D^k phi in closed form (atom count preserved).
    pub fn deriv_multi(&self, k: &[u32]) -> TestFunction {
        let mut atoms = self.atoms.clone();
        for (j, &e) in k.iter().enumerate() {
            for _ in 0..e {
                atoms = atoms.iter().map(|a| a.derivative(j)).collect();
            }
        }
        TestFunction::new(atoms)
    }

    /// x^m phi.
    pub fn mul_monomial(&self, m: &[u32]) -> TestFunction {
        let mut atoms = self.atoms.clone();
        for (j, &e) in m.iter().enumerate() {
            for _ in 0..e {
                atoms = atoms.iter().map(|a| a.mul_xj(j)).collect();
            }
        }
        TestFunction::new(atoms)
    }

    /// phi(t - x) as a function of x.
    pub fn reflect_translate(&self, t: &[f64]) -> TestFunction {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                // Reflection: p(u) -> p(-u), c -> -c, b -> -b;
                // then translation by t: c -> c + t, amplitude e^{-2 pi i <t, b>}.
                let poly: BTreeMap<MultiIndex, Complex64> = a
                    .poly
                    .iter()
                    .map(|(m, q)| {
                        let sign = if multi_norm(m) % 2 == 0 { 1.0 } else { -1.0 };
                        (m.clone(), q * sign)
                    })
                    .collect();
                let center: Vec<f64> = a.center.iter().zip(t).map(|(c, ti)| ti - c).collect();
                let modulation: Vec<f64> = a.modulation.iter().map(|b| -b).collect();
                let tb: f64 = t.iter().zip(&modulation).map(|(x, y)| x * y).sum();
                let amp = Complex64::new(0.0, TAU * tb).exp();
                GaussAtom::new(poly, a.width, center, modulation).scale(amp)
            })
            .collect();
        TestFunction::new(atoms)
    }

    /// phi(y) e^{2 pi i <y, t>}.
    pub fn modulate(&self, t: &[f64]) -> TestFunction {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                let modulation: Vec<f64> =
                    a.modulation.iter().zip(t).map(|(b, ti)| b + ti).collect();
                GaussAtom::new(a.poly.clone(), a.width, a.center.clone(), modulation)
            })
            .collect();
        TestFunction::new(atoms)
    }
}

/// Closed-form Fourier transform of a test function.
pub fn fourier_testfn(phi: &TestFunction) -> TestFunction {
    TestFunction::new(phi.atoms.iter().map(|a| a.transform(false)).collect())
}

/// Closed-form inverse Fourier transform.
pub fn inverse_fourier_testfn(phi: &TestFunction) -> TestFunction {
    TestFunction::new(phi.atoms.iter().map(|a| a.transform(true)).collect())
}

/// A pairing value with its certified truncation bound.
#[derive(Clone, Copy, Debug)]
pub struct Pairing {
    pub value: Complex64,
    pub certified_bound: f64,
}

/// <f, phi> = sum over terms and support points of
/// (-1)^{||k||} lambda^m W(lambda) (D^k phi)(lambda), with coset sums
/// truncated at a radius where the Gaussian shell bound certifies the tail
/// below `tail_tol`.
pub fn pair(f: &CombDistribution, phi: &TestFunction, tail_tol: f64) -> Result<Pairing> {
    assert_eq!(f.dim(), phi.dim(), "dimension mismatch");
    let mut value = Complex64::new(0.0, 0.0);
    let mut certified = 0.0f64;
    let term_count = f.terms().len().max(1);
    for term in f.terms() {
        match term {
            CombTerm::Atoms {
                support,
                poly,
                deriv,
                coeff,
            } => {
                let psi = phi.deriv_multi(deriv);
                let sign = if multi_norm(deriv) % 2 == 0 { 1.0 } else { -1.0 };
                match support {
                    CombSupport::Points(pts) => {
                        for p in pts {
                            let x = p.to_f64s();
                            let mono: f64 = x
                                .iter()
                                .zip(poly)
                                .map(|(v, &e)| v.powi(e as i32))
                                .product();
                            value += sign
                                * mono
                                * coeff.eval(&x)
                                * psi.eval(&x);
                        }
                        certified += 1e-14 * pts.len() as f64 * coeff.norm();
                    }
                    CombSupport::Coset(c) => {
                        let share = tail_tol / (term_count * psi.atoms.len().max(1)) as f64;
                        for atom in &psi.atoms {
                            let (sum, bound) =
                                coset_atom_sum(c, poly, coeff, atom, share)?;
                            value += sign * sum;
                            certified += bound;
                        }
                    }
                }
            }
            CombTerm::Dense { poly, density } => {
                // <y^m W, phi> = sum_n a_n (IFT(y^m phi))(s_n), closed form.
                let lifted = inverse_fourier_testfn(&phi.mul_monomial(poly));
                for (a, s) in density.terms() {
                    value += a.to_complex() * lifted.eval(&s.to_f64s());
                }
                certified += 1e-13 * density.norm();
            }
        }
    }
    Ok(Pairing {
        value,
        certified_bound: certified,
    })
}

/// Truncated sum of lambda^m W(lambda) atom(lambda) over a coset, with a
/// certified Gaussian-shell tail bound below `tol`.
fn coset_atom_sum(
    coset: &Coset,
    poly: &[u32],
    coeff: &WFunction,
    atom: &GaussAtom,
    tol: f64,
) -> Result<(Complex64, f64)> {
    let d = coset.dim();
    let det = coset.lattice().det_abs().to_f64().abs();
    // Covering radius bound: half the sum of generator lengths, taken on a
    // size-reduced basis (the bound holds for any basis of the lattice).
    let gens: Vec<Vec<f64>> = (0..d)
        .map(|j| coset.lattice().generator(j).to_f64s())
        .collect();
    let reduced = crate::linalg::f_size_reduce(gens);
    let rho: f64 = reduced.iter().map(|g| {
        g.iter().map(|x| x * x).sum::<f64>().sqrt()
    }).sum::<f64>() / 2.0;
    let w_norm = coeff.norm();
    let p_norm = multi_norm(poly);
    let center_norm: f64 = atom.center.iter().map(|x| x * x).sum::<f64>().sqrt();

    // Shell bound: points with s <= |lambda - c| < s+1 number at most
    // vol(B(s+1+rho) \ B(s-rho)) / det, each contributing at most
    // (|c| + s + 1)^{||m||} ||W|| envelope(s).
    let shell_bound = |s: f64| -> f64 {
        let outer = s + 1.0 + rho;
        let inner = (s - rho).max(0.0);
        let count = unit_ball_volume(d) * (outer.powi(d as i32) - inner.powi(d as i32)) / det;
        count.max(0.0)
            * (center_norm + s + 1.0).powi(p_norm as i32)
            * w_norm
            * atom.envelope(s)
    };
    let tail_from = |r: f64| -> f64 {
        let mut total = 0.0;
        let mut s = r;
        let mut prev = shell_bound(s);
        for _ in 0..100_000 {
            total += prev;
            let next = shell_bound(s + 1.0);
            if next <= prev * 0.5 && next <= tol * 1e-3 {
                // Remaining shells are dominated by a geometric series.
                total += next * 2.0;
                return total;
            }
            prev = next;
            s += 1.0;
            if s > r + 1e5 {
                break;
            }
        }
        f64::INFINITY
    };

    let mut radius = rho + 2.0;
    let mut bound = tail_from(radius);
    let mut iterations = 0;
    while bound > tol {
        radius = radius * 1.3 + 1.0;
        bound = tail_from(radius);
        iterations += 1;
        if iterations > 60 {
            return Err(Error::NonconvergentTail {
                bound,
                tol,
                radius,
            });
        }
    }

    let center = Vector::Numeric(atom.center.clone());
    let mut sum = Complex64::new(0.0, 0.0);
    for lambda in coset.enumerate_in_ball(&center, radius) {
        let x = lambda.to_f64s();
        let mono: f64 = x
            .iter()
            .zip(poly)
            .map(|(v, &e)| v.powi(e as i32))
            .product();
        sum += mono * coeff.eval(&x) * atom.eval(&x);
    }
    Ok((sum, bound))
}

fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * TAU / d as f64,
    }
}

/// Both sides of Poisson's formula for a lattice and a test function.
#[derive(Clone, Copy, Debug)]
pub struct PoissonReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub certified_bound: f64,
    pub passes: bool,
}

/// sum_{lambda in L} phi(lambda) against |det T|^{-1} sum_{gamma in L*}
/// phi-hat(gamma), with certified tails.
pub fn poisson_check(l: &Lattice, phi: &TestFunction, tol: f64) -> Result<PoissonReport> {
    let comb = CombDistribution::dirac(Coset::from_lattice(l.clone()));
    let lhs = pair(&comb, phi, tol / 4.0)?;
    let dual_comb = CombDistribution::dirac(Coset::from_lattice(l.dual()));
    let phi_hat = fourier_testfn(phi);
    let rhs_sum = pair(&dual_comb, &phi_hat, tol / 4.0)?;
    let det_inv = 1.0 / l.det_abs().to_f64().abs();
    let rhs = rhs_sum.value * det_inv;
    let residual = (lhs.value - rhs).norm();
    let certified = lhs.certified_bound + rhs_sum.certified_bound * det_inv;
    Ok(PoissonReport {
        lhs: lhs.value,
        rhs,
        residual,
        certified_bound: certified,
        passes: residual <= tol,
    })
}

/// One sample of psi * mu computed two ways.
#[derive(Clone, Copy, Debug)]
pub struct SmoothedSample {
    pub t: f64,
    pub direct: Complex64,
    pub spectral: Complex64,
    pub discrepancy: f64,
}

/// Evaluate the convolution psi * mu at the given 1-d sample positions
/// (t e_1 in higher dimension), both as a direct support sum and as the
/// spectral trigonometric sum sum_gamma mu-hat(gamma) psi-hat(gamma)
/// e^{2 pi i <gamma, t>}.
pub fn smoothed_transform_samples(
    mu: &CombDistribution,
    psi: &TestFunction,
    t_samples: &[f64],
    tol: f64,
) -> Result<Vec<SmoothedSample>> {
    if mu.order_k() != 0 {
        return Err(Error::UnsupportedTerm(
            "smoothed samples need a measure (derivative order zero)".into(),
        ));
    }
    let d = mu.dim();
    let mu_hat = fourier::fourier(mu)?;
    let psi_hat = fourier_testfn(psi);
    let mut out = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let mut tv = vec![0.0; d];
        tv[0] = t;
        // Direct: sum_x p(x) psi(t - x) = <mu, psi(t - .)>.
        let direct = pair(mu, &psi.reflect_translate(&tv), tol)?.value;
        // Spectral: <mu_hat, psi_hat e^{2 pi i <., t>}> by Eq-style exchange.
        let spectral = pair(&mu_hat, &psi_hat.modulate(&tv), tol)?.value;
        out.push(SmoothedSample {
            t,
            direct,
            spectral,
            discrepancy: (direct - spectral).norm(),
        });
    }
    Ok(out)
}

/// Scan parameters for the epsilon-almost-period search.
#[derive(Clone, Debug)]
pub struct AlmostPeriodScan {
    pub epsilon: f64,
    /// Scanned interval of shifts tau.
    pub window: (f64, f64),
    pub scan_pitch: f64,
    /// Scan direction for dim > 1 (tau moves along this unit direction).
    pub direction: Option<Vec<f64>>,
    /// Discrepancies are measured on t in [0, sample_window].
    pub sample_window: f64,
    pub sample_count: usize,
}

impl AlmostPeriodScan {
    pub fn new(epsilon: f64, window: (f64, f64), scan_pitch: f64) -> AlmostPeriodScan {
        AlmostPeriodScan {
            epsilon,
            window,
            scan_pitch,
            direction: None,
            sample_window: 20.0,
            sample_count: 256,
        }
    }
}

/// Result of the grid scan: each reported tau has sup-over-sample-grid
/// discrepancy below epsilon. Both pitches are recorded; the scan is a grid
/// search, not a true sup over R^d.
#[derive(Clone, Debug)]
pub struct AlmostPeriodReport {
    pub epsilon: f64,
    pub window: (f64, f64),
    pub scan_pitch: f64,
    pub sample_pitch: f64,
    pub periods_found: Vec<f64>,
    /// Largest gap between consecutive findings, including the window edges;
    /// infinite when nothing was found. An empirical relative-density bound.
    pub max_gap: f64,
}

/// Grid search for epsilon-almost periods of a W-function along a line.
pub fn almost_periods(g: &WFunction, scan: &AlmostPeriodScan) -> AlmostPeriodReport {
    let d = g.dim();
    let dir: Vec<f64> = match (&scan.direction, d) {
        (Some(e), _) => {
            assert_eq!(e.len(), d);
            let n: f64 = e.iter().map(|x| x * x).sum::<f64>().sqrt();
            e.iter().map(|x| x / n).collect()
        }
        (None, 1) => vec![1.0],
        (None, _) => panic!("scan direction required for dim > 1"),
    };
    let sample_pitch = scan.sample_window / scan.sample_count.max(1) as f64;
    let samples: Vec<f64> = (0..scan.sample_count)
        .map(|i| i as f64 * sample_pitch)
        .collect();
    let eval_line = |t: f64| -> Complex64 {
        let x: Vec<f64> = dir.iter().map(|e| e * t).collect();
        g.eval(&x)
    };
    let base: Vec<Complex64> = samples.iter().map(|&t| eval_line(t)).collect();

    let mut periods = Vec::new();
    let steps = ((scan.window.1 - scan.window.0) / scan.scan_pitch).floor() as usize;
    for i in 0..=steps {
        let tau = scan.window.0 + i as f64 * scan.scan_pitch;
        let mut disc = 0.0f64;
        for (j, &t) in samples.iter().enumerate() {
            disc = disc.max((eval_line(t + tau) - base[j]).norm());
            if disc >= scan.epsilon {
                break;
            }
        }
        if disc < scan.epsilon {
            periods.push(tau);
        }
    }
    let max_gap = if periods.is_empty() {
        f64::INFINITY
    } else {
        let mut gap: f64 = (periods[0] - scan.window.0)
            .max(scan.window.1 - periods[periods.len() - 1]);
        for w in periods.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        gap
    };
    AlmostPeriodReport {
        epsilon: scan.epsilon,
        window: scan.window,
        scan_pitch: scan.scan_pitch,
        sample_pitch,
        periods_found: periods,
        max_gap,
    }
}

// --- serde: atom lists ---

mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct AtomDoc {
        poly: Vec<(MultiIndex, (f64, f64))>,
        width: f64,
        center: Vec<f64>,
        modulation: Vec<f64>,
    }

    #[derive(Serialize, Deserialize)]
    struct TestFnDoc {
        atoms: Vec<AtomDoc>,
    }

    impl Serialize for TestFunction {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            TestFnDoc {
                atoms: self
                    .atoms
                    .iter()
                    .map(|a| AtomDoc {
                        poly: a
                            .poly
                            .iter()
                            .map(|(m, c)| (m.clone(), (c.re, c.im)))
                            .collect(),
                        width: a.width,
                        center: a.center.clone(),
                        modulation: a.modulation.clone(),
                    })
                    .collect(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for TestFunction {
        fn deserialize<D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<TestFunction, D::Error> {
            let doc = TestFnDoc::deserialize(d)?;
            Ok(TestFunction::new(
                doc.atoms
                    .into_iter()
                    .map(|a| {
                        GaussAtom::new(
                            a.poly
                                .into_iter()
                                .map(|(m, (re, im))| (m, Complex64::new(re, im)))
                                .collect(),
                            a.width,
                            a.center,
                            a.modulation,
                        )
                    })
                    .collect(),
            ))
        }
    }
}
