//! Comb distributions: finite sums of terms
//! sum_{lambda in support} lambda^m * W(lambda) * D^k delta_lambda
//! over coset or explicit-point supports, plus "dense" terms y^m W(y)
//! (functions produced by transforming finite point masses).
//!
//! The monomial factor is evaluated pointwise at the support points, so the
//! coefficient of D^k delta_lambda in the canonical representation is just
//! lambda^m W(lambda), the component measures strip and restore derivative
//! orders structurally, and f = sum_k D^k mu_k holds term by term.
//!
//! Coefficient frequencies on a coset support are stored reduced modulo the
//! dual of the support lattice, with the phase at the offset folded into the
//! amplitude; on the coset the function is unchanged, and the transform
//! round trip becomes a structural identity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::{reduce_offset, Coset, Point};
use crate::scalar::{multi_norm, CScalar, MultiIndex, Scalar, Vector};
use crate::wfunc::WFunction;
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum CombSupport {
    Coset(Coset),
    Points(Vec<Point>),
}

impl CombSupport {
    pub fn dim(&self) -> usize {
        match self {
            CombSupport::Coset(c) => c.dim(),
            CombSupport::Points(p) => p.first().map_or(0, |q| q.dim()),
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            CombSupport::Coset(_) => 0,
            CombSupport::Points(_) => 1,
        }
    }

    fn total_cmp(&self, other: &CombSupport) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        self.kind_rank()
            .cmp(&other.kind_rank())
            .then_with(|| match (self, other) {
                (CombSupport::Coset(a), CombSupport::Coset(b)) => a.total_cmp(b),
                (CombSupport::Points(a), CombSupport::Points(b)) => {
                    for (p, q) in a.iter().zip(b) {
                        let c = p.total_cmp(q);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    a.len().cmp(&b.len())
                }
                _ => unreachable!(),
            })
    }

    /// Points of the support within |p - center| <= radius.
    pub fn points_in_ball(&self, center: &Point, radius: f64) -> Vec<Point> {
        match self {
            CombSupport::Coset(c) => c.enumerate_in_ball(center, radius),
            CombSupport::Points(pts) => pts
                .iter()
                .filter(|p| p.dist(center) <= radius)
                .cloned()
                .collect(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            CombSupport::Coset(c) => {
                if c.is_exact() && p.is_exact() {
                    c.contains(p).unwrap_or(false)
                } else {
                    // Numeric membership: lattice coordinates near integers.
                    let inv = crate::linalg::f_mul_vec(
                        &c.lattice().inv_f64(),
                        &p.sub(c.offset()).to_f64s(),
                    );
                    inv.iter().all(|x| (x - x.round()).abs() <= 1e-9)
                }
            }
            CombSupport::Points(pts) => pts.iter().any(|q| q.approx_eq(p, 1e-12)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CombTerm {
    /// sum_{lambda in support} lambda^poly W(lambda) D^deriv delta_lambda.
    Atoms {
        support: CombSupport,
        poly: MultiIndex,
        deriv: MultiIndex,
        coeff: WFunction,
    },
    /// The locally integrable function y^poly * density(y).
    Dense {
        poly: MultiIndex,
        density: WFunction,
    },
}

impl CombTerm {
    pub fn atoms(support: CombSupport, poly: MultiIndex, deriv: MultiIndex, coeff: WFunction) -> CombTerm {
        CombTerm::Atoms {
            support,
            poly,
            deriv,
            coeff,
        }
    }

    pub fn measure(support: CombSupport, coeff: WFunction) -> CombTerm {
        let d = support.dim();
        CombTerm::Atoms {
            support,
            poly: vec![0; d],
            deriv: vec![0; d],
            coeff,
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            CombTerm::Atoms { .. } => 0,
            CombTerm::Dense { .. } => 1,
        }
    }

    fn total_cmp(&self, other: &CombTerm) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        self.kind_rank()
            .cmp(&other.kind_rank())
            .then_with(|| match (self, other) {
                (
                    CombTerm::Atoms {
                        support: sa,
                        poly: pa,
                        deriv: da,
                        ..
                    },
                    CombTerm::Atoms {
                        support: sb,
                        poly: pb,
                        deriv: db,
                        ..
                    },
                ) => sa
                    .total_cmp(sb)
                    .then_with(|| pa.cmp(pb))
                    .then_with(|| da.cmp(db)),
                (CombTerm::Dense { poly: pa, .. }, CombTerm::Dense { poly: pb, .. }) => pa.cmp(pb),
                _ => Ordering::Equal,
            })
    }
}

/// A finite sum of comb terms in one ambient dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct CombDistribution {
    dim: usize,
    terms: Vec<CombTerm>,
}

impl CombDistribution {
    pub fn new(dim: usize, terms: Vec<CombTerm>) -> CombDistribution {
        let mut f = CombDistribution { dim, terms };
        f.canonicalize();
        f
    }

    pub fn zero(dim: usize) -> CombDistribution {
        CombDistribution {
            dim,
            terms: Vec::new(),
        }
    }

    /// The Dirac comb delta_C over a coset.
    pub fn dirac(coset: Coset) -> CombDistribution {
        let d = coset.dim();
        CombDistribution::new(
            d,
            vec![CombTerm::measure(CombSupport::Coset(coset), WFunction::one(d))],
        )
    }

    /// Finite purely point measure sum c_j delta_{p_j}.
    pub fn from_weighted_points(dim: usize, weighted: Vec<(Point, CScalar)>) -> CombDistribution {
        let terms = weighted
            .into_iter()
            .map(|(p, c)| {
                CombTerm::measure(
                    CombSupport::Points(vec![p]),
                    WFunction::constant(dim, c),
                )
            })
            .collect();
        CombDistribution::new(dim, terms)
    }

    fn canonicalize(&mut self) {
        let dim = self.dim;
        for t in &mut self.terms {
            match t {
                CombTerm::Atoms {
                    support,
                    poly,
                    deriv,
                    coeff,
                } => {
                    assert_eq!(poly.len(), dim, "poly multi-index dimension");
                    assert_eq!(deriv.len(), dim, "deriv multi-index dimension");
                    if let CombSupport::Coset(c) = support {
                        *coeff = reduce_frequencies(c, coeff);
                    }
                    if let CombSupport::Points(pts) = support {
                        pts.sort_by(|a, b| a.total_cmp(b));
                    }
                }
                CombTerm::Dense { .. } => {}
            }
        }
        self.terms.retain(|t| match t {
            CombTerm::Atoms { support, coeff, .. } => {
                let nonempty = match support {
                    CombSupport::Points(p) => !p.is_empty(),
                    CombSupport::Coset(_) => true,
                };
                nonempty && !coeff.is_zero()
            }
            CombTerm::Dense { density, .. } => !density.is_zero(),
        });
        self.terms.sort_by(|a, b| a.total_cmp(b));
        // Merge terms with identical support and indices.
        let mut merged: Vec<CombTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            let mergeable = match (merged.last(), &t) {
                (
                    Some(CombTerm::Atoms {
                        support: sa,
                        poly: pa,
                        deriv: da,
                        ..
                    }),
                    CombTerm::Atoms {
                        support: sb,
                        poly: pb,
                        deriv: db,
                        ..
                    },
                ) => sa == sb && pa == pb && da == db,
                (Some(CombTerm::Dense { poly: pa, .. }), CombTerm::Dense { poly: pb, .. }) => {
                    pa == pb
                }
                _ => false,
            };
            if mergeable {
                match (merged.last_mut().unwrap(), t) {
                    (
                        CombTerm::Atoms { coeff, .. },
                        CombTerm::Atoms { coeff: other, .. },
                    ) => *coeff = coeff.add(&other),
                    (
                        CombTerm::Dense { density, .. },
                        CombTerm::Dense { density: other, .. },
                    ) => *density = density.add(&other),
                    _ => unreachable!(),
                }
            } else {
                merged.push(t);
            }
        }
        merged.retain(|t| match t {
            CombTerm::Atoms { coeff, .. } => !coeff.is_zero(),
            CombTerm::Dense { density, .. } => !density.is_zero(),
        });
        self.terms = merged;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[CombTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max derivative order ||k|| over terms.
    pub fn order_k(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| match t {
                CombTerm::Atoms { deriv, .. } => multi_norm(deriv),
                CombTerm::Dense { .. } => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Max monomial order ||m|| over terms.
    pub fn order_m(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| match t {
                CombTerm::Atoms { poly, .. } => multi_norm(poly),
                CombTerm::Dense { poly, .. } => multi_norm(poly),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &CombDistribution) -> CombDistribution {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.clone());
        CombDistribution::new(self.dim, terms)
    }

    pub fn scale(&self, c: &CScalar) -> CombDistribution {
        CombDistribution::new(
            self.dim,
            self.terms
                .iter()
                .map(|t| match t {
                    CombTerm::Atoms {
                        support,
                        poly,
                        deriv,
                        coeff,
                    } => CombTerm::Atoms {
                        support: support.clone(),
                        poly: poly.clone(),
                        deriv: deriv.clone(),
                        coeff: coeff.scale(c),
                    },
                    CombTerm::Dense { poly, density } => CombTerm::Dense {
                        poly: poly.clone(),
                        density: density.scale(c),
                    },
                })
                .collect(),
        )
    }

    /// The component measure mu_k: terms with derivative multi-index k,
    /// derivative stripped, monomial and coefficient retained. Dense terms
    /// belong to the k = 0 component.
    pub fn component_measure(&self, k: &[u32]) -> CombDistribution {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| match t {
                CombTerm::Atoms {
                    support,
                    poly,
                    deriv,
                    coeff,
                } if deriv == k => Some(CombTerm::Atoms {
                    support: support.clone(),
                    poly: poly.clone(),
                    deriv: vec![0; self.dim],
                    coeff: coeff.clone(),
                }),
                CombTerm::Dense { .. } if multi_norm(k) == 0 => Some(t.clone()),
                _ => None,
            })
            .collect();
        CombDistribution::new(self.dim, terms)
    }

    /// All derivative multi-indices present.
    pub fn deriv_indices(&self) -> Vec<MultiIndex> {
        let mut set: BTreeSet<MultiIndex> = BTreeSet::new();
        for t in &self.terms {
            if let CombTerm::Atoms { deriv, .. } = t {
                set.insert(deriv.clone());
            }
            if let CombTerm::Dense { .. } = t {
                set.insert(vec![0; self.dim]);
            }
        }
        set.into_iter().collect()
    }

    /// Termwise D^k applied to a measure (all derivative orders zero).
    pub fn derivative_applied(&self, k: &[u32]) -> Result<CombDistribution> {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                CombTerm::Atoms {
                    support,
                    poly,
                    deriv,
                    coeff,
                } if multi_norm(deriv) == 0 => Ok(CombTerm::Atoms {
                    support: support.clone(),
                    poly: poly.clone(),
                    deriv: k.to_vec(),
                    coeff: coeff.clone(),
                }),
                CombTerm::Dense { .. } if multi_norm(k) == 0 => Ok(t.clone()),
                _ => Err(Error::UnsupportedTerm(
                    "derivative_applied needs measure terms".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CombDistribution::new(self.dim, terms))
    }

    /// Total coefficient of D^k delta_lambda: sum over matching atom terms
    /// of lambda^m W(lambda). Zero off the support.
    pub fn coefficient_at(&self, lambda: &Point, k: &[u32]) -> CScalar {
        let mut acc = CScalar::zero();
        for t in &self.terms {
            if let CombTerm::Atoms {
                support,
                poly,
                deriv,
                coeff,
            } = t
            {
                if deriv != k || !support.contains(lambda) {
                    continue;
                }
                let mono = lambda.pow_multi(poly);
                let w = coeff.eval_vector(lambda);
                let mono_c = match mono {
                    Scalar::Rational(r) => CScalar::from_rat(r),
                    Scalar::Float(x) => CScalar::from_f64(x, 0.0),
                };
                acc = acc.add(&mono_c.mul(&w));
            }
        }
        acc
    }

    /// Distinct support points within |p| <= radius of the center, over all
    /// atom terms.
    pub fn support_points_in_ball(&self, center: &Point, radius: f64) -> Vec<Point> {
        let mut pts: Vec<Point> = Vec::new();
        for t in &self.terms {
            if let CombTerm::Atoms { support, .. } = t {
                pts.extend(support.points_in_ball(center, radius));
            }
        }
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup_by(|a, b| a.approx_eq(b, 1e-9));
        pts
    }

    /// Enumerates the support in a ball around the origin and reports the
    /// range of sum_k |p_k(lambda)| and, given exponents h(k), of
    /// max_k |p_k(lambda)| (1+|lambda|)^{-h(k)}; points violating the
    /// supplied bounds are flagged.
    pub fn check_coefficient_bounds(
        &self,
        ball_radius: f64,
        h: Option<&std::collections::BTreeMap<MultiIndex, u32>>,
        c_lower: Option<f64>,
        c_upper: Option<f64>,
    ) -> BoundsReport {
        let center = Vector::Numeric(vec![0.0; self.dim]);
        let points = self.support_points_in_ball(&center, ball_radius);
        let ks = self.deriv_indices();
        let mut report = BoundsReport {
            points_checked: points.len(),
            sum_min: f64::INFINITY,
            sum_max: f64::NEG_INFINITY,
            weighted_min: h.map(|_| f64::INFINITY),
            weighted_max: h.map(|_| f64::NEG_INFINITY),
            lower_violations: Vec::new(),
            upper_violations: Vec::new(),
        };
        for p in points {
            let mut sum = 0.0;
            let mut weighted: f64 = 0.0;
            for k in &ks {
                let a = self.coefficient_at(&p, k).abs();
                sum += a;
                if let Some(hmap) = h {
                    let hk = hmap.get(k).copied().unwrap_or(0);
                    weighted = weighted.max(a * (1.0 + p.norm()).powi(-(hk as i32)));
                }
            }
            report.sum_min = report.sum_min.min(sum);
            report.sum_max = report.sum_max.max(sum);
            let judged = if h.is_some() {
                report.weighted_min = report.weighted_min.map(|m| m.min(weighted));
                report.weighted_max = report.weighted_max.map(|m| m.max(weighted));
                weighted
            } else {
                sum
            };
            if let Some(c) = c_lower {
                if judged < c {
                    report.lower_violations.push(p.clone());
                }
            }
            if let Some(c) = c_upper {
                if judged > c {
                    report.upper_violations.push(p.clone());
                }
            }
        }
        report
    }

    /// Least-squares slope of log(partial coefficient sum) against log r,
    /// a diagnostic estimate of d + M.
    pub fn growth_exponent(&self, radii: &[f64]) -> Result<f64> {
        assert!(radii.len() >= 3, "need at least 3 radii");
        assert!(
            radii.windows(2).all(|w| w[0] < w[1]),
            "radii must increase"
        );
        let center = Vector::Numeric(vec![0.0; self.dim]);
        let ks = self.deriv_indices();
        let mut sums = Vec::with_capacity(radii.len());
        for &r in radii {
            let mut s = 0.0;
            for p in self.support_points_in_ball(&center, r) {
                for k in &ks {
                    s += self.coefficient_at(&p, k).abs();
                }
            }
            sums.push(s);
        }
        if sums.iter().any(|&s| s <= 0.0) {
            return Err(Error::DegenerateData);
        }
        let first = sums[0];
        if sums.iter().all(|&s| (s - first).abs() <= f64::EPSILON * first) {
            return Err(Error::DegenerateData);
        }
        let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
        let ys: Vec<f64> = sums.iter().map(|s| s.ln()).collect();
        let n = xs.len() as f64;
        let xbar = xs.iter().sum::<f64>() / n;
        let ybar = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
        let sxy: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - xbar) * (y - ybar))
            .sum();
        Ok(sxy / sxx)
    }

    /// The point reflection x -> -x applied structurally: supports negate,
    /// coefficient frequencies negate, and each term picks up
    /// (-1)^{||m|| + ||k||} from the monomial and derivative parities.
    pub fn reflect(&self) -> CombDistribution {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                CombTerm::Atoms {
                    support,
                    poly,
                    deriv,
                    coeff,
                } => {
                    let sign = if (multi_norm(poly) + multi_norm(deriv)) % 2 == 0 {
                        CScalar::one()
                    } else {
                        CScalar::one().neg()
                    };
                    let support = match support {
                        CombSupport::Coset(c) => CombSupport::Coset(c.negate()),
                        CombSupport::Points(p) => {
                            CombSupport::Points(p.iter().map(|q| q.neg()).collect())
                        }
                    };
                    CombTerm::Atoms {
                        support,
                        poly: poly.clone(),
                        deriv: deriv.clone(),
                        coeff: coeff.reflect().scale(&sign),
                    }
                }
                CombTerm::Dense { poly, density } => {
                    let sign = if multi_norm(poly) % 2 == 0 {
                        CScalar::one()
                    } else {
                        CScalar::one().neg()
                    };
                    CombTerm::Dense {
                        poly: poly.clone(),
                        density: density.reflect().scale(&sign),
                    }
                }
            })
            .collect();
        CombDistribution::new(self.dim, terms)
    }

    /// Structural comparison at float tolerance; exact parts compare exactly.
    pub fn approx_eq(&self, other: &CombDistribution, tol: f64) -> bool {
        if self.dim != other.dim || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms.iter().zip(&other.terms).all(|(a, b)| match (a, b) {
            (
                CombTerm::Atoms {
                    support: sa,
                    poly: pa,
                    deriv: da,
                    coeff: ca,
                },
                CombTerm::Atoms {
                    support: sb,
                    poly: pb,
                    deriv: db,
                    coeff: cb,
                },
            ) => {
                pa == pb
                    && da == db
                    && ca.approx_eq(cb, tol)
                    && match (sa, sb) {
                        (CombSupport::Coset(x), CombSupport::Coset(y)) => {
                            let bx = x.lattice().basis_f64();
                            let by = y.lattice().basis_f64();
                            bx.iter().flatten().zip(by.iter().flatten()).all(
                                |(p, q)| (p - q).abs() <= tol,
                            ) && x.offset().approx_eq(y.offset(), tol)
                        }
                        (CombSupport::Points(x), CombSupport::Points(y)) => {
                            x.len() == y.len()
                                && x.iter().zip(y).all(|(p, q)| p.approx_eq(q, tol))
                        }
                        _ => false,
                    }
            }
            (
                CombTerm::Dense {
                    poly: pa,
                    density: da,
                },
                CombTerm::Dense {
                    poly: pb,
                    density: db,
                },
            ) => pa == pb && da.approx_eq(db, tol),
            _ => false,
        })
    }
}

/// Report from [`CombDistribution::check_coefficient_bounds`].
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub points_checked: usize,
    /// Range of sum_k |p_k(lambda)| over the scanned ball.
    pub sum_min: f64,
    pub sum_max: f64,
    /// Range of max_k |p_k(lambda)| (1+|lambda|)^{-h(k)}, when h was given.
    pub weighted_min: Option<f64>,
    pub weighted_max: Option<f64>,
    pub lower_violations: Vec<Point>,
    pub upper_violations: Vec<Point>,
}

/// Reduce coefficient frequencies modulo the dual of the support lattice,
/// folding the phase at the offset into the amplitude: on the coset,
/// e^{2 pi i <lambda, s>} = e^{2 pi i <offset, s - beta>} e^{2 pi i <lambda, beta>}
/// for beta the representative of s in the dual fundamental domain.
fn reduce_frequencies(coset: &Coset, coeff: &WFunction) -> WFunction {
    let dual = coset.lattice().dual();
    let terms = coeff
        .terms()
        .iter()
        .map(|(a, s)| {
            let beta = reduce_offset(&dual, s);
            let shift = s.sub(&beta);
            if shift.is_zero() {
                (a.clone(), s.clone())
            } else {
                let phase = crate::scalar::unit_phase(&coset.offset().dot(&shift));
                (a.mul(&phase), beta)
            }
        })
        .collect();
    WFunction::from_terms(coeff.dim(), terms)
}

// --- presets used across tests and the CLI example corpus ---

pub mod presets {
    //! Ready-made combs: the standard Dirac combs and the two signed-measure
    //! examples with closed-form transforms.

    use super::*;
    use crate::lattice::Lattice;

    /// delta_{Z^d}.
    pub fn dirac_standard(d: usize) -> CombDistribution {
        CombDistribution::dirac(Coset::from_lattice(Lattice::standard(d)))
    }

    /// sum_{x in Z^2} x_1 delta_x (the unbounded-coefficient measure).
    pub fn x1_weighted_z2() -> CombDistribution {
        CombDistribution::new(
            2,
            vec![CombTerm::atoms(
                CombSupport::Coset(Coset::from_lattice(Lattice::standard(2))),
                vec![1, 0],
                vec![0, 0],
                WFunction::one(2),
            )],
        )
    }

    /// Its transform: (i / 2 pi) sum_{lambda in Z^2} d/d lambda_1 delta_lambda.
    pub fn d1_comb_z2() -> CombDistribution {
        let amp = CScalar::from_f64(0.0, 1.0 / std::f64::consts::TAU);
        CombDistribution::new(
            2,
            vec![CombTerm::atoms(
                CombSupport::Coset(Coset::from_lattice(Lattice::standard(2))),
                vec![0, 0],
                vec![1, 0],
                WFunction::constant(2, amp),
            )],
        )
    }

    /// sum_{n in Z^2} sin(2 pi n_1 / sqrt 5) delta_n (masses not separated
    /// from zero).
    pub fn sine_z2() -> CombDistribution {
        let alpha = 1.0 / 5f64.sqrt();
        let half_over_i = CScalar::from_f64(0.0, -0.5); // 1/(2i)
        let coeff = WFunction::from_terms(
            2,
            vec![
                (half_over_i.clone(), Vector::Numeric(vec![alpha, 0.0])),
                (half_over_i.neg(), Vector::Numeric(vec![-alpha, 0.0])),
            ],
        );
        CombDistribution::new(
            2,
            vec![CombTerm::measure(
                CombSupport::Coset(Coset::from_lattice(Lattice::standard(2))),
                coeff,
            )],
        )
    }

    /// Its transform: (1/2i)(delta_{Z^2 + alpha} - delta_{Z^2 - alpha}),
    /// alpha = (1/sqrt 5, 0).
    pub fn sine_transform_z2() -> CombDistribution {
        let alpha = 1.0 / 5f64.sqrt();
        let half_over_i = CScalar::from_f64(0.0, -0.5);
        let plus = Coset::new(
            Lattice::standard(2),
            Vector::Numeric(vec![alpha, 0.0]),
        )
        .unwrap();
        let minus = Coset::new(
            Lattice::standard(2),
            Vector::Numeric(vec![-alpha, 0.0]),
        )
        .unwrap();
        CombDistribution::new(
            2,
            vec![
                CombTerm::measure(
                    CombSupport::Coset(plus),
                    WFunction::constant(2, half_over_i.clone()),
                ),
                CombTerm::measure(
                    CombSupport::Coset(minus),
                    WFunction::constant(2, half_over_i.neg()),
                ),
            ],
        )
    }
}

// --- serde: {"dim": d, "terms": [{"support": ..., "m": [...], "k": [...], "coeff": [...]}]} ---

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SupportDoc {
    Tag(String), // "dense"
    Coset { coset: Coset },
    Points { points: Vec<Vector> },
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    support: SupportDoc,
    m: MultiIndex,
    k: MultiIndex,
    coeff: WFunction,
}

#[derive(Serialize, Deserialize)]
struct CombDoc {
    dim: usize,
    terms: Vec<TermDoc>,
}

impl Serialize for CombDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms
            .iter()
            .map(|t| match t {
                CombTerm::Atoms {
                    support,
                    poly,
                    deriv,
                    coeff,
                } => TermDoc {
                    support: match support {
                        CombSupport::Coset(c) => SupportDoc::Coset { coset: c.clone() },
                        CombSupport::Points(p) => SupportDoc::Points { points: p.clone() },
                    },
                    m: poly.clone(),
                    k: deriv.clone(),
                    coeff: coeff.clone(),
                },
                CombTerm::Dense { poly, density } => TermDoc {
                    support: SupportDoc::Tag("dense".into()),
                    m: poly.clone(),
                    k: vec![0; self.dim],
                    coeff: density.clone(),
                },
            })
            .collect();
        CombDoc {
            dim: self.dim,
            terms,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CombDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<CombDistribution, D::Error> {
        let doc = CombDoc::deserialize(d)?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let term = match t.support {
                SupportDoc::Tag(tag) if tag == "dense" => CombTerm::Dense {
                    poly: t.m,
                    density: t.coeff,
                },
                SupportDoc::Tag(other) => {
                    return Err(serde::de::Error::custom(format!(
                        "unknown support tag {other:?}"
                    )))
                }
                SupportDoc::Coset { coset } => CombTerm::Atoms {
                    support: CombSupport::Coset(coset),
                    poly: t.m,
                    deriv: t.k,
                    coeff: t.coeff,
                },
                SupportDoc::Points { points } => CombTerm::Atoms {
                    support: CombSupport::Points(points),
                    poly: t.m,
                    deriv: t.k,
                    coeff: t.coeff,
                },
            };
            terms.push(term);
        }
        Ok(CombDistribution::new(doc.dim, terms))
    }
}
