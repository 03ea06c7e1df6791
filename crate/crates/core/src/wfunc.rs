//! Finite trigonometric sums f(t) = sum_n a_n e^{2 pi i <t, s_n>}.
//!
//! Frequencies are deduplicated and kept lexicographically sorted, exact
//! rationals with a float fallback (the class includes irrational
//! frequencies like 1/sqrt(5)). The W-norm is sum |a_n|; products multiply
//! within the class with frequencies adding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{unit_phase, CScalar, Rat, Vector};
use crate::Result;

/// Frequency dedup tolerance for float components.
const FREQ_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct WFunction {
    dim: usize,
    terms: Vec<(CScalar, Vector)>,
}

fn freq_close(a: &Vector, b: &Vector) -> bool {
    match (a, b) {
        (Vector::Exact(_), Vector::Exact(_)) => a == b,
        _ => a.approx_eq(b, FREQ_TOL),
    }
}

impl WFunction {
    pub fn zero(dim: usize) -> WFunction {
        WFunction {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn constant(dim: usize, c: CScalar) -> WFunction {
        Self::from_terms(dim, vec![(c, Vector::zero(dim))])
    }

    pub fn one(dim: usize) -> WFunction {
        Self::constant(dim, CScalar::one())
    }

    /// Single term a e^{2 pi i <t, s>}.
    pub fn single(amp: CScalar, freq: Vector) -> WFunction {
        let dim = freq.dim();
        Self::from_terms(dim, vec![(amp, freq)])
    }

    pub fn from_terms(dim: usize, terms: Vec<(CScalar, Vector)>) -> WFunction {
        let mut w = WFunction { dim, terms };
        w.canonicalize();
        w
    }

    fn canonicalize(&mut self) {
        self.terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut merged: Vec<(CScalar, Vector)> = Vec::with_capacity(self.terms.len());
        for (amp, freq) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((acc, f)) if freq_close(f, &freq) => *acc = acc.add(&amp),
                _ => merged.push((amp, freq)),
            }
        }
        merged.retain(|(a, _)| !a.is_zero());
        self.terms = merged;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(CScalar, Vector)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at the zero frequency.
    pub fn constant_term(&self) -> CScalar {
        self.terms
            .iter()
            .find(|(_, f)| f.is_zero())
            .map(|(a, _)| a.clone())
            .unwrap_or_else(CScalar::zero)
    }

    pub fn add(&self, other: &WFunction) -> WFunction {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.clone());
        Self::from_terms(self.dim, terms)
    }

    pub fn scale(&self, c: &CScalar) -> WFunction {
        Self::from_terms(
            self.dim,
            self.terms
                .iter()
                .map(|(a, f)| (a.mul(c), f.clone()))
                .collect(),
        )
    }

    pub fn neg(&self) -> WFunction {
        self.scale(&CScalar::one().neg())
    }

    /// Product in W: frequencies add, ||f g||_W <= ||f||_W ||g||_W.
    pub fn mul(&self, other: &WFunction) -> WFunction {
        assert_eq!(self.dim, other.dim);
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, s) in &self.terms {
            for (b, t) in &other.terms {
                terms.push((a.mul(b), s.add(t)));
            }
        }
        Self::from_terms(self.dim, terms)
    }

    /// Pointwise evaluation in floating point.
    pub fn eval(&self, t: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, s) in &self.terms {
            let phase: f64 = s
                .to_f64s()
                .iter()
                .zip(t)
                .map(|(si, ti)| si * ti)
                .sum::<f64>()
                * std::f64::consts::TAU;
            acc += a.to_complex() * Complex64::new(phase.cos(), phase.sin());
        }
        acc
    }

    /// Evaluation with the exact fast path: stays exact when every phase
    /// <t, s_n> is rational with denominator dividing 4.
    pub fn eval_vector(&self, t: &Vector) -> CScalar {
        let mut acc = CScalar::zero();
        for (a, s) in &self.terms {
            acc = acc.add(&a.mul(&unit_phase(&t.dot(s))));
        }
        acc
    }

    /// W-norm sum |a_n|.
    pub fn norm(&self) -> f64 {
        self.terms.iter().map(|(a, _)| a.abs()).sum()
    }

    /// Exact W-norm when every |a_n| is rational.
    pub fn norm_exact(&self) -> Option<Rat> {
        let mut acc = Rat::from_integer(0.into());
        for (a, _) in &self.terms {
            acc += a.abs_exact()?;
        }
        Some(acc)
    }

    /// Frequencies shifted by v (modulation by e^{2 pi i <t, v>}).
    pub fn shift_frequencies(&self, v: &Vector) -> WFunction {
        Self::from_terms(
            self.dim,
            self.terms
                .iter()
                .map(|(a, f)| (a.clone(), f.add(v)))
                .collect(),
        )
    }

    /// Frequencies negated (t -> -t reflection).
    pub fn reflect(&self) -> WFunction {
        Self::from_terms(
            self.dim,
            self.terms
                .iter()
                .map(|(a, f)| (a.clone(), f.neg()))
                .collect(),
        )
    }

    pub fn approx_eq(&self, other: &WFunction, tol: f64) -> bool {
        self.dim == other.dim
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((a, s), (b, t))| a.approx_eq(b, tol) && s.approx_eq(t, tol))
    }
}

/// Constructive reciprocal: Neumann series around the dominant constant
/// term c, truncated when the W-norm tail bound drops below `tol`, so
/// sup |g - 1/f| <= tol on all of R^d. Demands ||f - c||_W < |c| strictly.
/// The series runs in float amplitudes; exact coefficients would grow
/// without bound for slowly converging inputs.
pub fn w_reciprocal(f: &WFunction, c: &CScalar, tol: f64) -> Result<WFunction> {
    let c_abs = c.abs();
    let remainder = f.add(&WFunction::constant(f.dim(), c.neg()));
    let rho = remainder.norm();
    if !(rho < c_abs) {
        return Err(Error::NotDominated {
            tail_norm: rho,
            center_abs: c_abs,
        });
    }
    let to_float = |w: &WFunction| {
        WFunction::from_terms(
            w.dim(),
            w.terms()
                .iter()
                .map(|(a, f)| (CScalar::Float(a.to_complex()), f.clone()))
                .collect(),
        )
    };
    let inv_c = CScalar::Float(Complex64::new(1.0, 0.0) / c.to_complex());
    // base = -(f - c)/c, ratio rho/|c| < 1.
    let base = to_float(&remainder.scale(&inv_c.neg()));
    let ratio = rho / c_abs;
    let mut g = WFunction::constant(f.dim(), inv_c.clone());
    let mut pow = WFunction::one(f.dim());
    let mut n = 0u32;
    loop {
        // With powers 0..=n included, ||g - 1/f||_sup <= ratio^{n+1}/(|c|-rho)
        // and f g - 1 = -(-(f-c)/c)^{n+1}, so ||f g - 1||_sup <= ratio^{n+1}.
        // Stop when both drop below the tolerance (with margin for the float
        // accumulation of the series itself).
        let geom = ratio.powi(n as i32 + 1);
        let tail = geom * (1.0f64).max(1.0 / (c_abs - rho));
        if tail <= tol * 0.5 {
            break;
        }
        pow = pow.mul(&base);
        g = g.add(&pow.scale(&inv_c));
        n += 1;
    }
    Ok(g)
}

// --- serde: [{"a": [re, im], "s": [freq components]}] ---

#[derive(Serialize, Deserialize)]
struct WTermDoc {
    a: CScalar,
    s: Vector,
}

impl Serialize for WFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let docs: Vec<WTermDoc> = self
            .terms
            .iter()
            .map(|(a, f)| WTermDoc {
                a: a.clone(),
                s: f.clone(),
            })
            .collect();
        docs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WFunction {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<WFunction, D::Error> {
        let docs = Vec::<WTermDoc>::deserialize(d)?;
        let dim = docs.first().map_or(0, |t| t.s.dim());
        Ok(WFunction::from_terms(
            dim,
            docs.into_iter().map(|t| (t.a, t.s)).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Scalar};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn exp1(freq: f64) -> WFunction {
        WFunction::single(CScalar::one(), Vector::Numeric(vec![freq]))
    }

    #[test]
    fn product_adds_frequencies() {
        let a = WFunction::single(CScalar::one(), Vector::Exact(vec![rat(1, 3)]));
        let b = WFunction::single(CScalar::one(), Vector::Exact(vec![rat(1, 6)]));
        let p = a.mul(&b);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].1, Vector::Exact(vec![rat(1, 2)]));
    }

    #[test]
    fn binomial_square() {
        // (1 + e^{2 pi i t})^2 = 1 + 2 e^{2 pi i t} + e^{4 pi i t}
        let f = WFunction::one(1).add(&WFunction::single(
            CScalar::one(),
            Vector::Exact(vec![rat_int(1)]),
        ));
        let sq = f.mul(&f);
        assert_eq!(sq.terms().len(), 3);
        assert_eq!(sq.terms()[0].0, CScalar::one());
        assert_eq!(sq.terms()[1].0, CScalar::from_int(2));
        assert_eq!(sq.terms()[2].0, CScalar::one());
        assert_eq!(sq.terms()[2].1, Vector::Exact(vec![rat_int(2)]));
    }

    #[test]
    fn mul_matches_pointwise_oracle() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let mk = |rng: &mut StdRng| {
                let terms: Vec<(CScalar, Vector)> = (0..4)
                    .map(|_| {
                        (
                            CScalar::from_f64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                            Vector::Numeric(vec![
                                rng.gen_range(-2.0..2.0),
                                rng.gen_range(-2.0..2.0),
                            ]),
                        )
                    })
                    .collect();
                WFunction::from_terms(2, terms)
            };
            let f = mk(&mut rng);
            let g = mk(&mut rng);
            let p = f.mul(&g);
            for _ in 0..100 {
                let t = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
                let direct = f.eval(&t) * g.eval(&t);
                assert!((p.eval(&t) - direct).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(WFunction::one(1).eval(&[0.37]), Complex64::new(1.0, 0.0));

        // sin(2 pi t / sqrt 5) at t = sqrt(5)/4 is sin(pi/2) = 1.
        let alpha = 1.0 / 5f64.sqrt();
        let half_over_i = CScalar::from_f64(0.0, -0.5); // 1/(2i)
        let sine = WFunction::from_terms(
            1,
            vec![
                (half_over_i.clone(), Vector::Numeric(vec![alpha])),
                (half_over_i.neg(), Vector::Numeric(vec![-alpha])),
            ],
        );
        let t = 5f64.sqrt() / 4.0;
        assert!((sine.eval(&[t]) - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        // 2 + e^{2 pi i t} at t = 1/2 is 2 - 1 = 1.
        let f = WFunction::constant(1, CScalar::from_int(2)).add(&WFunction::single(
            CScalar::one(),
            Vector::Exact(vec![rat_int(1)]),
        ));
        assert_eq!(
            f.eval_vector(&Vector::Exact(vec![rat(1, 2)])),
            CScalar::one()
        );
    }

    #[test]
    fn norm_submultiplicative_exact() {
        let f = WFunction::from_terms(
            1,
            vec![
                (CScalar::from_rat(rat(1, 2)), Vector::Exact(vec![rat_int(0)])),
                (CScalar::from_rat(rat(-1, 3)), Vector::Exact(vec![rat_int(1)])),
            ],
        );
        let g = WFunction::from_terms(
            1,
            vec![
                (CScalar::from_rat(rat(2, 5)), Vector::Exact(vec![rat_int(0)])),
                (CScalar::from_rat(rat(1, 7)), Vector::Exact(vec![rat_int(2)])),
            ],
        );
        let lhs = f.mul(&g).norm_exact().unwrap();
        let rhs = f.norm_exact().unwrap() * g.norm_exact().unwrap();
        assert!(lhs <= rhs);
    }

    #[test]
    fn reciprocal_constant() {
        let f = WFunction::constant(1, CScalar::from_int(2));
        let g = w_reciprocal(&f, &CScalar::from_int(2), 1e-8).unwrap();
        assert_eq!(g.terms().len(), 1);
        assert!(g.terms()[0].0.approx_eq(&CScalar::from_rat(rat(1, 2)), 1e-15));
    }

    #[test]
    fn reciprocal_geometric_series() {
        // 1/(2 + e^{2 pi i t}): coefficients (-1)^n 2^{-n-1} at frequency n.
        let f = WFunction::constant(1, CScalar::from_int(2)).add(&WFunction::single(
            CScalar::one(),
            Vector::Exact(vec![rat_int(1)]),
        ));
        let g = w_reciprocal(&f, &CScalar::from_int(2), 1e-8).unwrap();
        for (n, (a, s)) in g.terms().iter().enumerate() {
            assert!((s.to_f64s()[0] - n as f64).abs() < 1e-12);
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 } * 0.5f64.powi(n as i32 + 1);
            assert!((a.to_complex() - Complex64::new(expect, 0.0)).norm() < 1e-15);
        }
        assert!((26..=29).contains(&g.terms().len()), "{}", g.terms().len());
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..1000 {
            let t = [rng.gen_range(0.0..1.0)];
            assert!((f.eval(&t) * g.eval(&t) - Complex64::new(1.0, 0.0)).norm() <= 1e-8);
        }
    }

    #[test]
    fn reciprocal_domination_boundary() {
        let boundary = WFunction::one(1).add(&exp1(1.0));
        assert!(matches!(
            w_reciprocal(&boundary, &CScalar::one(), 1e-6),
            Err(Error::NotDominated { .. })
        ));

        let slow = WFunction::one(1).add(&exp1(1.0).scale(&CScalar::from_f64(0.99, 0.0)));
        let g = w_reciprocal(&slow, &CScalar::one(), 1e-6).unwrap();
        let t = [0.123];
        assert!((slow.eval(&t) * g.eval(&t) - Complex64::new(1.0, 0.0)).norm() <= 1e-6);
    }

    #[test]
    fn rational_and_float_frequency_dedup() {
        let f = WFunction::from_terms(
            1,
            vec![
                (CScalar::one(), Vector::Exact(vec![rat(1, 2)])),
                (CScalar::one(), Vector::Numeric(vec![0.5])),
            ],
        );
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].0, CScalar::from_int(2));
        // The surviving frequency is the exact one.
        assert!(f.terms()[0].1.is_exact());
    }

    #[test]
    fn serde_round_trip() {
        let f = WFunction::from_terms(
            2,
            vec![
                (
                    CScalar::Exact {
                        re: rat(1, 2),
                        im: rat(-1, 3),
                    },
                    Vector::Exact(vec![rat_int(1), rat(1, 4)]),
                ),
                (
                    CScalar::from_f64(0.25, 0.0),
                    Vector::Numeric(vec![1.0 / 5f64.sqrt(), 0.0]),
                ),
            ],
        );
        let s = serde_json::to_string(&f).unwrap();
        let back: WFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn eval_vector_exact_path() {
        let f = WFunction::single(
            CScalar::from_rat(rat(3, 4)),
            Vector::Exact(vec![rat(1, 2)]),
        );
        // phase 1/2 * 1 = 1/2 -> e^{pi i} = -1 exactly
        let v = f.eval_vector(&Vector::Exact(vec![rat_int(1)]));
        assert_eq!(v, CScalar::from_rat(rat(-3, 4)));
        let s = Scalar::Rational(rat(1, 2));
        assert!(s.is_rational());
    }
}
