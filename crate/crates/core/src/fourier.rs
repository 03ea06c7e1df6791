//! Symbolic Fourier transform, closed on [`CombDistribution`].
//!
//! Forward kernel e^{-2 pi i <x,y>}. The four exchange rules:
//!   comb       FT(delta_{L+tau}) = |det T|^-1 e^{-2 pi i <tau, .>} delta_{L*}
//!   derivative FT(D^k g) = (2 pi i y)^k FT(g)
//!   monomial   FT(x_j g) = (i / 2 pi) d/dy_j FT(g)
//!   modulation FT(e^{2 pi i <x,beta>} g) = FT(g)(. - beta)
//!
//! A coset term sum lambda^P W(lambda) D^K delta_lambda factors as
//! D^K (x^P mu) with mu the W-weighted comb, so its transform is
//! (2 pi i y)^K (i/2 pi)^{||P||} D^P FT(mu). Multiplication by y^K re-enters
//! the pointwise form through
//!   y^K D^P delta_g = sum_{j <= min(K,P)} (-1)^{||j||} C(P,j) K!/(K-j)!
//!                     g^{K-j} D^{P-j} delta_g,
//! which keeps the class closed. Powers of 2 pi stay symbolic until the end,
//! so round trips cancel them exactly and determinant bookkeeping stays
//! rational.
//!
//! Finite explicit-point terms transform to "dense" terms y^K W(y): those
//! are functions, not combs, and support pairing and the inverse transform
//! only.

use crate::comb::{CombDistribution, CombSupport, CombTerm};
use crate::coset_ring::CosetExpression;
use crate::lattice::{Coset, Point};
use crate::scalar::{
    multi_min, multi_norm, unit_phase, CScalar, MultiIndex, PhaseScalar, Scalar,
};
use crate::wfunc::WFunction;
use crate::Result;

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Inverse,
}

/// The distributional Fourier transform of a comb distribution.
pub fn fourier(f: &CombDistribution) -> Result<CombDistribution> {
    transform(f, Direction::Forward)
}

/// The inverse transform; `inverse_fourier(fourier(f)) = f` structurally.
pub fn inverse_fourier(f: &CombDistribution) -> Result<CombDistribution> {
    transform(f, Direction::Inverse)
}

fn transform(f: &CombDistribution, dir: Direction) -> Result<CombDistribution> {
    let d = f.dim();
    let mut out: Vec<CombTerm> = Vec::new();
    for term in f.terms() {
        match term {
            CombTerm::Atoms {
                support: CombSupport::Coset(c),
                poly,
                deriv,
                coeff,
            } => coset_term(c, poly, deriv, coeff, dir, &mut out),
            CombTerm::Atoms {
                support: CombSupport::Points(pts),
                poly,
                deriv,
                coeff,
            } => points_term(d, pts, poly, deriv, coeff, dir, &mut out),
            CombTerm::Dense { poly, density } => dense_term(d, poly, density, dir, &mut out),
        }
    }
    Ok(CombDistribution::new(d, out))
}

/// Transform of sum_{lambda in L+tau} lambda^P W(lambda) D^K delta_lambda.
fn coset_term(
    c: &Coset,
    poly: &MultiIndex,
    deriv: &MultiIndex,
    coeff: &WFunction,
    dir: Direction,
    out: &mut Vec<CombTerm>,
) {
    let dual = c.lattice().dual();
    let det_inv = match c.lattice().det_abs() {
        Scalar::Rational(r) => CScalar::from_rat(r.recip()),
        Scalar::Float(x) => CScalar::from_f64(1.0 / x, 0.0),
    };
    let tau = c.offset();
    // Output coefficient frequency: -tau forward, +tau inverse.
    let out_freq = match dir {
        Direction::Forward => tau.neg(),
        Direction::Inverse => tau.clone(),
    };
    // Overall scalar (i/2pi)^{||P||} (2pi i)^{||K||}, with inverse-direction
    // signs (-1)^{||P||+||K||}.
    let p_norm = multi_norm(poly);
    let k_norm = multi_norm(deriv);
    let mut prefactor = PhaseScalar::i_over_two_pi_pow(p_norm)
        .mul(&PhaseScalar::two_pi_i_pow(k_norm))
        .mul_cscalar(&det_inv);
    if dir == Direction::Inverse {
        prefactor = prefactor.mul(&PhaseScalar::sign_pow(p_norm + k_norm));
    }
    for (amp, freq) in coeff.terms() {
        // Modulation moves the frequency into the support offset.
        let offset = match dir {
            Direction::Forward => freq.clone(),
            Direction::Inverse => freq.neg(),
        };
        let support = Coset::new(dual.clone(), offset).expect("dimension preserved");
        let phase = unit_phase(&tau.dot(freq));
        let base = prefactor.mul_cscalar(amp).mul_cscalar(&phase);
        // y^K D^P delta expansion.
        let jmax = multi_min(deriv, poly);
        for j in multi_range(&jmax) {
            let comb_factor = crate::scalar::multi_binom(poly, &j)
                * crate::scalar::multi_falling(deriv, &j);
            let scalar = base
                .mul(&PhaseScalar::sign_pow(multi_norm(&j)))
                .mul_rat(&comb_factor);
            let poly_out: MultiIndex = deriv.iter().zip(&j).map(|(k, j)| k - j).collect();
            let deriv_out: MultiIndex = poly.iter().zip(&j).map(|(p, j)| p - j).collect();
            out.push(CombTerm::Atoms {
                support: CombSupport::Coset(support.clone()),
                poly: poly_out,
                deriv: deriv_out,
                coeff: WFunction::single(scalar.resolve(), out_freq.clone()),
            });
        }
    }
}

/// Transform of a finite point-mass term: a dense trigonometric density.
fn points_term(
    d: usize,
    pts: &[Point],
    poly: &MultiIndex,
    deriv: &MultiIndex,
    coeff: &WFunction,
    dir: Direction,
    out: &mut Vec<CombTerm>,
) {
    let k_norm = multi_norm(deriv);
    let mut prefactor = PhaseScalar::two_pi_i_pow(k_norm);
    if dir == Direction::Inverse {
        prefactor = prefactor.mul(&PhaseScalar::sign_pow(k_norm));
    }
    let mut density_terms = Vec::with_capacity(pts.len());
    for p in pts {
        let mono = match p.pow_multi(poly) {
            Scalar::Rational(r) => CScalar::from_rat(r),
            Scalar::Float(x) => CScalar::from_f64(x, 0.0),
        };
        let mass = mono.mul(&coeff.eval_vector(p));
        let freq = match dir {
            Direction::Forward => p.neg(),
            Direction::Inverse => p.clone(),
        };
        density_terms.push((prefactor.mul_cscalar(&mass).resolve(), freq));
    }
    out.push(CombTerm::Dense {
        poly: deriv.clone(),
        density: WFunction::from_terms(d, density_terms),
    });
}

/// Transform of the function y^P W(y): point masses with derivatives.
fn dense_term(
    d: usize,
    poly: &MultiIndex,
    density: &WFunction,
    dir: Direction,
    out: &mut Vec<CombTerm>,
) {
    let p_norm = multi_norm(poly);
    let mut prefactor = PhaseScalar::i_over_two_pi_pow(p_norm);
    if dir == Direction::Inverse {
        prefactor = prefactor.mul(&PhaseScalar::sign_pow(p_norm));
    }
    for (amp, freq) in density.terms() {
        let point = match dir {
            Direction::Forward => freq.clone(),
            Direction::Inverse => freq.neg(),
        };
        out.push(CombTerm::Atoms {
            support: CombSupport::Points(vec![point]),
            poly: vec![0; d],
            deriv: poly.clone(),
            coeff: WFunction::constant(d, prefactor.mul_cscalar(amp).resolve()),
        });
    }
}

/// All multi-indices j with 0 <= j <= bound componentwise.
fn multi_range(bound: &[u32]) -> Vec<MultiIndex> {
    let mut out = vec![vec![0; bound.len()]];
    for (i, &b) in bound.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
        for j in out {
            for v in 0..=b {
                let mut jj = j.clone();
                jj[i] = v;
                next.push(jj);
            }
        }
        out = next;
    }
    out
}

/// Support description of the transform, without coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSupport {
    /// Dual-lattice cosets carrying comb terms of the transform.
    pub cosets: Vec<Coset>,
    /// Isolated spectrum points (transforms of dense terms).
    pub points: Vec<Point>,
    /// True when the transform has a dense (function) part, i.e. the source
    /// had finite explicit-point terms.
    pub has_dense_part: bool,
}

impl SpectrumSupport {
    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty() && self.points.is_empty() && !self.has_dense_part
    }

    /// The coset part as a union expression, when present.
    pub fn to_expression(&self) -> Option<CosetExpression> {
        if self.cosets.is_empty() {
            return None;
        }
        Some(CosetExpression::Union(
            self.cosets
                .iter()
                .cloned()
                .map(CosetExpression::Coset)
                .collect(),
        ))
    }
}

/// Where the spectrum of f lives (support of fourier(f)).
pub fn spectrum_support(f: &CombDistribution) -> SpectrumSupport {
    let mut cosets: Vec<Coset> = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    let mut has_dense_part = false;
    for term in f.terms() {
        match term {
            CombTerm::Atoms {
                support: CombSupport::Coset(c),
                coeff,
                ..
            } => {
                let dual = c.lattice().dual();
                for (_, freq) in coeff.terms() {
                    let coset = Coset::new(dual.clone(), freq.clone()).expect("same dimension");
                    if !cosets.contains(&coset) {
                        cosets.push(coset);
                    }
                }
            }
            CombTerm::Atoms {
                support: CombSupport::Points(_),
                ..
            } => has_dense_part = true,
            CombTerm::Dense { density, .. } => {
                for (_, freq) in density.terms() {
                    let p = freq.clone();
                    if !points.iter().any(|q| q == &p) {
                        points.push(p);
                    }
                }
            }
        }
    }
    cosets.sort_by(|a, b| a.total_cmp(b));
    points.sort_by(|a, b| a.total_cmp(b));
    SpectrumSupport {
        cosets,
        points,
        has_dense_part,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::presets;
    use crate::lattice::Lattice;
    use crate::scalar::{rat, rat_int, Rat, Vector};

    #[test]
    fn standard_comb_is_self_dual() {
        for d in 1..=3 {
            let f = presets::dirac_standard(d);
            assert_eq!(fourier(&f).unwrap(), f);
            assert_eq!(inverse_fourier(&f).unwrap(), f);
        }
    }

    #[test]
    fn scaled_comb_determinant_bookkeeping_exact() {
        // FT(delta_{2Z}) = (1/2) delta_{(1/2)Z}, exactly rational.
        let f = CombDistribution::dirac(Coset::from_lattice(
            Lattice::from_int_generators(&[&[2]]).unwrap(),
        ));
        let ft = fourier(&f).unwrap();
        assert_eq!(ft.terms().len(), 1);
        match &ft.terms()[0] {
            CombTerm::Atoms { support, coeff, .. } => {
                match support {
                    CombSupport::Coset(c) => {
                        assert_eq!(
                            c.lattice(),
                            &Lattice::from_rat_generators(&[vec![rat(1, 2)]]).unwrap()
                        );
                        assert!(c.offset().is_zero());
                    }
                    _ => panic!("coset support expected"),
                }
                assert_eq!(coeff.constant_term(), CScalar::from_rat(rat(1, 2)));
            }
            _ => panic!("atoms expected"),
        }
        // Round trip restores the unit mass exactly.
        assert_eq!(inverse_fourier(&ft).unwrap(), f);
    }

    #[test]
    fn x1_weighted_comb_transforms_to_derivative_comb() {
        let ft = fourier(&presets::x1_weighted_z2()).unwrap();
        assert!(ft.approx_eq(&presets::d1_comb_z2(), 1e-15));
        let back = inverse_fourier(&ft).unwrap();
        assert!(back.approx_eq(&presets::x1_weighted_z2(), 1e-12));
    }

    #[test]
    fn sine_comb_transforms_to_shifted_combs() {
        let ft = fourier(&presets::sine_z2()).unwrap();
        let expect = presets::sine_transform_z2();
        assert!(
            ft.approx_eq(&expect, 1e-12),
            "got {ft:?}, expected {expect:?}"
        );
        let back = inverse_fourier(&ft).unwrap();
        assert!(back.approx_eq(&presets::sine_z2(), 1e-12));
    }

    #[test]
    fn shifted_comb_round_trip_exact() {
        let coset = Coset::new(
            Lattice::from_int_generators(&[&[1, 1], &[-1, 1]]).unwrap(),
            Vector::Exact(vec![rat(1, 2), rat(1, 4)]),
        )
        .unwrap();
        let f = CombDistribution::dirac(coset);
        let ft = fourier(&f).unwrap();
        assert_eq!(inverse_fourier(&ft).unwrap(), f);
    }

    #[test]
    fn derivative_and_monomial_round_trip() {
        // f = sum lambda^(1,0) W(lambda) D^(0,1) delta on Z^2 + (1/2, 0).
        let coset = Coset::new(
            Lattice::standard(2),
            Vector::Exact(vec![rat(1, 2), rat_int(0)]),
        )
        .unwrap();
        let coeff = WFunction::from_terms(
            2,
            vec![
                (CScalar::from_int(2), Vector::zero(2)),
                (
                    CScalar::from_rat(rat(1, 3)),
                    Vector::Exact(vec![rat(1, 2), rat(1, 2)]),
                ),
            ],
        );
        let f = CombDistribution::new(
            2,
            vec![CombTerm::Atoms {
                support: CombSupport::Coset(coset),
                poly: vec![1, 0],
                deriv: vec![0, 1],
                coeff,
            }],
        );
        let ft = fourier(&f).unwrap();
        let back = inverse_fourier(&ft).unwrap();
        assert_eq!(back, f, "exact structural round trip");
        let fwd_again = fourier(&back).unwrap();
        assert_eq!(fwd_again, ft);
    }

    #[test]
    fn finite_points_transform_to_dense() {
        let f = CombDistribution::from_weighted_points(
            1,
            vec![
                (Vector::Exact(vec![rat_int(0)]), CScalar::from_int(1)),
                (Vector::Exact(vec![rat_int(2)]), CScalar::from_int(-3)),
            ],
        );
        let ft = fourier(&f).unwrap();
        assert!(ft
            .terms()
            .iter()
            .all(|t| matches!(t, CombTerm::Dense { .. })));
        let back = inverse_fourier(&ft).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn fourier_twice_is_reflection() {
        let f = presets::sine_z2()
            .add(&presets::x1_weighted_z2())
            .add(&CombDistribution::from_weighted_points(
                2,
                vec![(Vector::from_ints(&[1, 2]), CScalar::from_int(5))],
            ));
        let twice = fourier(&fourier(&f).unwrap()).unwrap();
        assert!(twice.approx_eq(&f.reflect(), 1e-10));
    }

    #[test]
    fn linearity_structural() {
        let f = presets::dirac_standard(2);
        let g = presets::sine_z2();
        let alpha = CScalar::from_rat(rat(2, 3));
        let beta = CScalar::from_f64(0.0, -1.5);
        let lhs = fourier(&f.scale(&alpha).add(&g.scale(&beta))).unwrap();
        let rhs = fourier(&f)
            .unwrap()
            .scale(&alpha)
            .add(&fourier(&g).unwrap().scale(&beta));
        assert!(lhs.approx_eq(&rhs, 1e-14));
    }

    #[test]
    fn spectrum_support_examples() {
        // delta_{2Z} -> (1/2) Z.
        let f = CombDistribution::dirac(Coset::from_lattice(
            Lattice::from_int_generators(&[&[2]]).unwrap(),
        ));
        let spec = spectrum_support(&f);
        assert_eq!(spec.cosets.len(), 1);
        assert_eq!(
            spec.cosets[0].lattice().det_abs(),
            Scalar::Rational(rat(1, 2))
        );

        // Sine example: two cosets of Z^2.
        let spec = spectrum_support(&presets::sine_z2());
        assert_eq!(spec.cosets.len(), 2);
        let offs: Vec<f64> = spec.cosets.iter().map(|c| c.offset().to_f64s()[0]).collect();
        let a = 1.0 / 5f64.sqrt();
        assert!((offs[0] - a).abs() < 1e-12);
        assert!((offs[1] - (1.0 - a)).abs() < 1e-12);
        assert!(spec.to_expression().is_some());

        let empty = spectrum_support(&CombDistribution::zero(2));
        assert!(empty.is_empty());
    }

    #[test]
    fn dual_det_product_is_one() {
        let l = Lattice::from_int_generators(&[&[3, 1], &[0, 2]]).unwrap();
        let (a, b) = (l.det_abs(), l.dual().det_abs());
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => {
                assert_eq!(x * y, Rat::from_integer(1.into()))
            }
            _ => panic!("exact"),
        }
    }
}
