//! Mode-tagged scalars: exact rationals with a floating-point fallback.
//!
//! Exact values stay exact under arithmetic as long as every operand is
//! rational; any operation touching a float degrades to float. Complex
//! scalars follow the same rule, which is what keeps determinant and
//! Poisson-comb bookkeeping exactly rational while still admitting
//! irrational data such as the frequency `1/sqrt(5)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number.
pub type Rat = BigRational;

/// Shorthand for building a rational from machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A real scalar, either exact rational or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(Rat),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(rat_int(n))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => Scalar::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => Scalar::Float(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }

    /// Total order: exact comparison when both rational, float comparison
    /// otherwise, with rationals sorting before floats on numeric ties.
    pub fn total_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .total_cmp(&other.to_f64())
                .then_with(|| match (self, other) {
                    (Scalar::Rational(_), Scalar::Float(_)) => Ordering::Less,
                    (Scalar::Float(_), Scalar::Rational(_)) => Ordering::Greater,
                    _ => Ordering::Equal,
                }),
        }
    }

    /// Equality at tolerance: exact when both rational, |a-b| <= tol otherwise.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => serializer.serialize_str(&r.to_string()),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational string \"p/q\" or a float")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        Rat::from_str(v)
            .map(Scalar::Rational)
            .map_err(|_| E::custom(format!("invalid rational: {v:?}")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::Float(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::Float(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::Float(v as f64))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// A complex scalar with the same exact/float mode split as [`Scalar`].
#[derive(Clone, Debug, PartialEq)]
pub enum CScalar {
    Exact { re: Rat, im: Rat },
    Float(Complex64),
}

impl CScalar {
    pub fn zero() -> Self {
        CScalar::Exact {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        CScalar::Exact {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }

    pub fn i() -> Self {
        CScalar::Exact {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    pub fn from_rat(re: Rat) -> Self {
        CScalar::Exact {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CScalar::Float(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CScalar::Exact { .. })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            CScalar::Exact { re, im } => re.is_zero() && im.is_zero(),
            CScalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            CScalar::Exact { re, im } => Complex64::new(
                re.to_f64().unwrap_or(f64::NAN),
                im.to_f64().unwrap_or(f64::NAN),
            ),
            CScalar::Float(z) => *z,
        }
    }

    pub fn add(&self, other: &CScalar) -> CScalar {
        match (self, other) {
            (CScalar::Exact { re: a, im: b }, CScalar::Exact { re: c, im: d }) => CScalar::Exact {
                re: a + c,
                im: b + d,
            },
            _ => CScalar::Float(self.to_complex() + other.to_complex()),
        }
    }

    pub fn mul(&self, other: &CScalar) -> CScalar {
        match (self, other) {
            (CScalar::Exact { re: a, im: b }, CScalar::Exact { re: c, im: d }) => CScalar::Exact {
                re: a * c - b * d,
                im: a * d + b * c,
            },
            _ => CScalar::Float(self.to_complex() * other.to_complex()),
        }
    }

    pub fn neg(&self) -> CScalar {
        match self {
            CScalar::Exact { re, im } => CScalar::Exact { re: -re, im: -im },
            CScalar::Float(z) => CScalar::Float(-z),
        }
    }

    pub fn conj(&self) -> CScalar {
        match self {
            CScalar::Exact { re, im } => CScalar::Exact {
                re: re.clone(),
                im: -im,
            },
            CScalar::Float(z) => CScalar::Float(z.conj()),
        }
    }

    pub fn scale_rat(&self, s: &Rat) -> CScalar {
        self.mul(&CScalar::from_rat(s.clone()))
    }

    pub fn abs(&self) -> f64 {
        match self {
            CScalar::Exact { .. } => match self.abs_exact() {
                Some(a) => a.to_f64().unwrap_or(f64::NAN),
                None => self.to_complex().norm(),
            },
            CScalar::Float(z) => z.norm(),
        }
    }

    /// |z| as an exact rational, when re^2 + im^2 is the square of a rational.
    pub fn abs_exact(&self) -> Option<Rat> {
        match self {
            CScalar::Exact { re, im } => {
                let s = re * re + im * im;
                let n = s.numer().sqrt();
                let d = s.denom().sqrt();
                if &(&n * &n) == s.numer() && &(&d * &d) == s.denom() {
                    Some(Rat::new(n, d))
                } else {
                    None
                }
            }
            CScalar::Float(_) => None,
        }
    }

    /// i^k, exactly.
    pub fn i_pow(k: u32) -> CScalar {
        match k % 4 {
            0 => CScalar::one(),
            1 => CScalar::i(),
            2 => CScalar::one().neg(),
            _ => CScalar::i().neg(),
        }
    }

    pub fn approx_eq(&self, other: &CScalar, tol: f64) -> bool {
        (self.to_complex() - other.to_complex()).norm() <= tol
    }
}

impl Serialize for CScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = match self {
            CScalar::Exact { re, im } => {
                (Scalar::Rational(re.clone()), Scalar::Rational(im.clone()))
            }
            CScalar::Float(z) => (Scalar::Float(z.re), Scalar::Float(z.im)),
        };
        (re, im).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CScalar {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<CScalar, D::Error> {
        let (re, im) = <(Scalar, Scalar)>::deserialize(deserializer)?;
        Ok(match (re, im) {
            (Scalar::Rational(re), Scalar::Rational(im)) => CScalar::Exact { re, im },
            (re, im) => CScalar::Float(Complex64::new(re.to_f64(), im.to_f64())),
        })
    }
}

/// e^{2 pi i x}. Exact for rational x with denominator dividing 4, float
/// otherwise.
pub fn unit_phase(x: &Scalar) -> CScalar {
    match x {
        Scalar::Rational(r) => {
            let f = r - r.floor();
            let four_f = &f * rat_int(4);
            if four_f.is_integer() {
                match four_f.to_integer().to_i64().unwrap_or(-1) {
                    0 => CScalar::one(),
                    1 => CScalar::i(),
                    2 => CScalar::one().neg(),
                    3 => CScalar::i().neg(),
                    _ => unreachable!("fractional part lies in [0,1)"),
                }
            } else {
                let theta = std::f64::consts::TAU * f.to_f64().unwrap_or(f64::NAN);
                CScalar::Float(Complex64::new(theta.cos(), theta.sin()))
            }
        }
        Scalar::Float(x) => {
            let theta = std::f64::consts::TAU * x;
            CScalar::Float(Complex64::new(theta.cos(), theta.sin()))
        }
    }
}

/// A complex scalar times an integer power of 2*pi, kept symbolic so that
/// transform round trips cancel the transcendental factor exactly.
#[derive(Clone, Debug)]
pub struct PhaseScalar {
    pub coef: CScalar,
    pub two_pi_pow: i32,
}

impl PhaseScalar {
    pub fn one() -> Self {
        PhaseScalar {
            coef: CScalar::one(),
            two_pi_pow: 0,
        }
    }

    pub fn from_cscalar(c: CScalar) -> Self {
        PhaseScalar {
            coef: c,
            two_pi_pow: 0,
        }
    }

    /// (2 pi i)^k.
    pub fn two_pi_i_pow(k: u32) -> Self {
        PhaseScalar {
            coef: CScalar::i_pow(k),
            two_pi_pow: k as i32,
        }
    }

    /// (i / 2 pi)^k.
    pub fn i_over_two_pi_pow(k: u32) -> Self {
        PhaseScalar {
            coef: CScalar::i_pow(k),
            two_pi_pow: -(k as i32),
        }
    }

    /// (-1)^k.
    pub fn sign_pow(k: u32) -> Self {
        PhaseScalar {
            coef: if k % 2 == 0 {
                CScalar::one()
            } else {
                CScalar::one().neg()
            },
            two_pi_pow: 0,
        }
    }

    pub fn mul(&self, other: &PhaseScalar) -> PhaseScalar {
        PhaseScalar {
            coef: self.coef.mul(&other.coef),
            two_pi_pow: self.two_pi_pow + other.two_pi_pow,
        }
    }

    pub fn mul_cscalar(&self, c: &CScalar) -> PhaseScalar {
        PhaseScalar {
            coef: self.coef.mul(c),
            two_pi_pow: self.two_pi_pow,
        }
    }

    pub fn mul_rat(&self, r: &Rat) -> PhaseScalar {
        self.mul_cscalar(&CScalar::from_rat(r.clone()))
    }

    /// Collapse to a plain complex scalar; exact when the 2*pi power is zero.
    pub fn resolve(&self) -> CScalar {
        if self.two_pi_pow == 0 {
            self.coef.clone()
        } else {
            let f = std::f64::consts::TAU.powi(self.two_pi_pow);
            CScalar::Float(self.coef.to_complex() * f)
        }
    }
}

/// A point/offset/frequency vector, exact or numeric as a whole.
#[derive(Clone, Debug, PartialEq)]
pub enum Vector {
    Exact(Vec<Rat>),
    Numeric(Vec<f64>),
}

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector::Exact(vec![Rat::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector::Exact(coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn from_f64s(coords: &[f64]) -> Self {
        Vector::Numeric(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        match self {
            Vector::Exact(v) => v.len(),
            Vector::Numeric(v) => v.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Vector::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Exact(v) => v.iter().all(|c| c.is_zero()),
            Vector::Numeric(v) => v.iter().all(|&c| c == 0.0),
        }
    }

    pub fn as_exact(&self) -> Option<&Vec<Rat>> {
        match self {
            Vector::Exact(v) => Some(v),
            Vector::Numeric(_) => None,
        }
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        match self {
            Vector::Exact(v) => v.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect(),
            Vector::Numeric(v) => v.clone(),
        }
    }

    pub fn component(&self, i: usize) -> Scalar {
        match self {
            Vector::Exact(v) => Scalar::Rational(v[i].clone()),
            Vector::Numeric(v) => Scalar::Float(v[i]),
        }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        match (self, other) {
            (Vector::Exact(a), Vector::Exact(b)) => {
                Vector::Exact(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => {
                let (a, b) = (self.to_f64s(), other.to_f64s());
                Vector::Numeric(a.iter().zip(&b).map(|(x, y)| x + y).collect())
            }
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        match (self, other) {
            (Vector::Exact(a), Vector::Exact(b)) => {
                Vector::Exact(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => {
                let (a, b) = (self.to_f64s(), other.to_f64s());
                Vector::Numeric(a.iter().zip(&b).map(|(x, y)| x - y).collect())
            }
        }
    }

    pub fn neg(&self) -> Vector {
        match self {
            Vector::Exact(v) => Vector::Exact(v.iter().map(|c| -c).collect()),
            Vector::Numeric(v) => Vector::Numeric(v.iter().map(|c| -c).collect()),
        }
    }

    /// Inner product, exact when both vectors are exact.
    pub fn dot(&self, other: &Vector) -> Scalar {
        match (self, other) {
            (Vector::Exact(a), Vector::Exact(b)) => {
                Scalar::Rational(a.iter().zip(b).map(|(x, y)| x * y).sum())
            }
            _ => {
                let (a, b) = (self.to_f64s(), other.to_f64s());
                Scalar::Float(a.iter().zip(&b).map(|(x, y)| x * y).sum())
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_f64s().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }

    /// Lexicographic total order using [`Scalar::total_cmp`] per component.
    pub fn total_cmp(&self, other: &Vector) -> Ordering {
        let n = self.dim().min(other.dim());
        for i in 0..n {
            let c = self.component(i).total_cmp(&other.component(i));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.dim().cmp(&other.dim())
    }

    /// Componentwise equality at tolerance (exact components compare exactly).
    pub fn approx_eq(&self, other: &Vector, tol: f64) -> bool {
        self.dim() == other.dim()
            && (0..self.dim()).all(|i| self.component(i).approx_eq(&other.component(i), tol))
    }

    /// lambda^m for a multi-index m, exact for exact vectors.
    pub fn pow_multi(&self, m: &[u32]) -> Scalar {
        match self {
            Vector::Exact(v) => {
                let mut acc = Rat::one();
                for (c, &e) in v.iter().zip(m) {
                    for _ in 0..e {
                        acc *= c;
                    }
                }
                Scalar::Rational(acc)
            }
            Vector::Numeric(v) => {
                let mut acc = 1.0;
                for (c, &e) in v.iter().zip(m) {
                    acc *= c.powi(e as i32);
                }
                Scalar::Float(acc)
            }
        }
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let comps: Vec<Scalar> = (0..self.dim()).map(|i| self.component(i)).collect();
        comps.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Vector, D::Error> {
        let comps = Vec::<Scalar>::deserialize(deserializer)?;
        if comps.iter().all(|c| c.is_rational()) {
            Ok(Vector::Exact(
                comps
                    .into_iter()
                    .map(|c| match c {
                        Scalar::Rational(r) => r,
                        Scalar::Float(_) => unreachable!(),
                    })
                    .collect(),
            ))
        } else {
            Ok(Vector::Numeric(comps.iter().map(|c| c.to_f64()).collect()))
        }
    }
}

/// Multi-index over d coordinates.
pub type MultiIndex = Vec<u32>;

/// ||k|| = k_1 + ... + k_d.
pub fn multi_norm(k: &[u32]) -> u32 {
    k.iter().sum()
}

/// Componentwise min of two multi-indices.
pub fn multi_min(a: &[u32], b: &[u32]) -> MultiIndex {
    a.iter().zip(b).map(|(x, y)| *x.min(y)).collect()
}

/// Product of componentwise binomial coefficients, as an exact rational.
pub fn multi_binom(n: &[u32], k: &[u32]) -> Rat {
    let mut acc = Rat::one();
    for (&ni, &ki) in n.iter().zip(k) {
        acc *= Rat::from_integer(binom(ni, ki));
    }
    acc
}

/// Product of componentwise falling factorials n_i (n_i - 1) ... (n_i - k_i + 1).
pub fn multi_falling(n: &[u32], k: &[u32]) -> Rat {
    let mut acc = Rat::one();
    for (&ni, &ki) in n.iter().zip(k) {
        for j in 0..ki {
            acc *= rat_int((ni - j) as i64);
        }
    }
    acc
}

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::Rational(rat(1, 3));
        let b = Scalar::Rational(rat(1, 6));
        assert_eq!(a.add(&b), Scalar::Rational(rat(1, 2)));
        assert!(a.mul(&b).is_rational());
        assert!(!a.add(&Scalar::Float(0.5)).is_rational());
    }

    #[test]
    fn unit_phase_quarter_turns_exact() {
        assert_eq!(unit_phase(&Scalar::Rational(rat_int(3))), CScalar::one());
        assert_eq!(
            unit_phase(&Scalar::Rational(rat(1, 2))),
            CScalar::one().neg()
        );
        assert_eq!(unit_phase(&Scalar::Rational(rat(1, 4))), CScalar::i());
        assert_eq!(
            unit_phase(&Scalar::Rational(rat(-1, 4))),
            CScalar::i().neg()
        );
        let z = unit_phase(&Scalar::Rational(rat(1, 3)));
        assert!(!z.is_exact());
        assert!((z.to_complex() - Complex64::new(-0.5, 0.75f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn cscalar_abs_exact_perfect_square() {
        let z = CScalar::Exact {
            re: rat(3, 5),
            im: rat(4, 5),
        };
        assert_eq!(z.abs_exact(), Some(rat_int(1)));
        let w = CScalar::Exact {
            re: rat_int(1),
            im: rat_int(1),
        };
        assert_eq!(w.abs_exact(), None);
        assert!((w.abs() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn phase_scalar_round_trip_cancels_two_pi() {
        let fwd = PhaseScalar::two_pi_i_pow(2);
        let bwd = PhaseScalar::i_over_two_pi_pow(2);
        let prod = fwd.mul(&bwd);
        assert_eq!(prod.two_pi_pow, 0);
        assert_eq!(prod.resolve(), CScalar::one());
    }

    #[test]
    fn scalar_serde_modes() {
        let r = Scalar::Rational(rat(-7, 3));
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"-7/3\"");
        assert_eq!(serde_json::from_str::<Scalar>(&s).unwrap(), r);
        let f = Scalar::Float(0.25);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<Scalar>(&s).unwrap(), f);
    }

    #[test]
    fn vector_dot_and_pow() {
        let a = Vector::from_ints(&[2, -3]);
        let b = Vector::Exact(vec![rat(1, 2), rat(1, 3)]);
        assert_eq!(a.dot(&b), Scalar::Rational(rat_int(0)));
        assert_eq!(a.pow_multi(&[2, 1]), Scalar::Rational(rat_int(-12)));
    }

    #[test]
    fn multi_index_helpers() {
        assert_eq!(multi_binom(&[3, 2], &[1, 2]), rat_int(3));
        assert_eq!(multi_falling(&[3, 2], &[2, 1]), rat_int(12));
        assert_eq!(multi_norm(&[1, 0, 4]), 5);
    }
}
