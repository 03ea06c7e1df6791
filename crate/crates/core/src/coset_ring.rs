//! Finite set algebra over lattice cosets.
//!
//! Expressions are trees of union / difference / intersection over coset
//! leaves. Normalization refines every full-rank piece to a common
//! finite-index sublattice (the intersection of all leaf lattices), merges,
//! and returns pairwise-disjoint full-rank cosets plus a signed residue of
//! lower-rank cosets. The signed-comb calculus behind it is
//! delta_{A \ A'} = delta_A - delta_{A cap A'} and
//! delta_{A u A'} = delta_A + delta_{A'} - delta_{A cap A'}.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::{intersect_generator_matrices, reduce_offset, Coset, Lattice, Point};
use crate::linalg::{column_hnf, rational_hnf, solve_integer, RatMat};
use crate::scalar::{Rat, Vector};
use crate::Result;

/// A coset of a rational subgroup of rank r <= d: offset + Z-span of the
/// generator columns. Rank-deficient cosets appear as expression leaves and
/// in normalization residues; full-rank ones upgrade to [`Coset`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubCoset {
    /// d x r generator matrix in canonical staircase HNF.
    gens: RatMat,
    /// Offset, reduced canonically modulo the generator span.
    offset: Vec<Rat>,
}

impl SubCoset {
    pub fn new(generators: &[Vec<Rat>], offset: Vec<Rat>) -> SubCoset {
        let d = offset.len();
        let mut m = RatMat::zero(d, generators.len());
        for (j, g) in generators.iter().enumerate() {
            assert_eq!(g.len(), d, "generator dimension mismatch");
            for (i, x) in g.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Self::from_parts(rational_hnf(&m), offset)
    }

    fn from_parts(gens: RatMat, offset: Vec<Rat>) -> SubCoset {
        let offset = reduce_mod_span(&gens, &offset);
        SubCoset { gens, offset }
    }

    pub fn from_coset(c: &Coset) -> SubCoset {
        let basis = c
            .lattice()
            .basis_rat()
            .expect("exact coset required")
            .clone();
        let offset = c.offset().as_exact().expect("exact coset required").clone();
        SubCoset {
            gens: basis,
            offset,
        }
    }

    pub fn dim(&self) -> usize {
        self.gens.rows
    }

    pub fn rank(&self) -> usize {
        self.gens.cols
    }

    pub fn generators(&self) -> Vec<Vec<Rat>> {
        (0..self.gens.cols).map(|j| self.gens.column(j)).collect()
    }

    pub fn offset(&self) -> &[Rat] {
        &self.offset
    }

    /// Upgrade to a full-rank coset when rank == d.
    pub fn to_coset(&self) -> Option<Coset> {
        if self.rank() != self.dim() {
            return None;
        }
        let lattice = Lattice::from_generator_matrix(&self.gens).ok()?;
        Coset::new(lattice, Vector::Exact(self.offset.clone())).ok()
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        let v: Vec<Rat> = p.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        solve_integer(&self.gens, &v).is_some()
    }

    /// Intersection of two sub-cosets: a coset of the intersection subgroup,
    /// or None when the offsets are incompatible.
    pub fn intersect(&self, other: &SubCoset) -> Option<SubCoset> {
        let gens = rational_hnf(&intersect_generator_matrices(&self.gens, &other.gens));
        // Solve tau2 - tau1 = G1 a + G2 b over the integers.
        let d = self.dim();
        let (n1, n2) = (self.gens.cols, other.gens.cols);
        let mut m = RatMat::zero(d, n1 + n2);
        for i in 0..d {
            for j in 0..n1 {
                m[(i, j)] = self.gens[(i, j)].clone();
            }
            for j in 0..n2 {
                m[(i, n1 + j)] = other.gens[(i, j)].clone();
            }
        }
        let diff: Vec<Rat> = other
            .offset
            .iter()
            .zip(&self.offset)
            .map(|(a, b)| a - b)
            .collect();
        let sol = solve_integer(&m, &diff)?;
        // x0 = tau1 + G1 a lies in both cosets.
        let x0: Vec<Rat> = (0..d)
            .map(|i| {
                let mut acc = self.offset[i].clone();
                for j in 0..n1 {
                    acc += &self.gens[(i, j)] * Rat::from_integer(sol[j].clone());
                }
                acc
            })
            .collect();
        Some(SubCoset::from_parts(gens, x0))
    }

    fn sort_key(&self) -> (usize, Vec<Rat>, Vec<Rat>) {
        let mut flat = Vec::with_capacity(self.gens.rows * self.gens.cols);
        for j in 0..self.gens.cols {
            flat.extend(self.gens.column(j));
        }
        (self.rank(), flat, self.offset.clone())
    }
}

/// Reduce an offset modulo the column span of a staircase generator matrix:
/// subtract G * floor(c) where c are the span coordinates of the projection.
fn reduce_mod_span(gens: &RatMat, offset: &[Rat]) -> Vec<Rat> {
    if gens.cols == 0 {
        return offset.to_vec();
    }
    let gt = gens.transpose();
    let gram = gt.mul(gens);
    let inv = gram
        .inverse()
        .expect("HNF generator matrix has full column rank");
    let coords = inv.mul_vec(&gt.mul_vec(offset));
    let shift: Vec<Rat> = coords.iter().map(|c| c.floor()).collect();
    (0..gens.rows)
        .map(|i| {
            let mut acc = offset[i].clone();
            for (j, s) in shift.iter().enumerate() {
                acc -= &gens[(i, j)] * s;
            }
            acc
        })
        .collect()
}

/// Expression tree over coset leaves, all in one ambient dimension.
#[derive(Clone, Debug, PartialEq)]
pub enum CosetExpression {
    /// Full-rank coset leaf.
    Coset(Coset),
    /// Degenerate leaf: a coset of a rank < d subgroup.
    Degenerate(SubCoset),
    Union(Vec<CosetExpression>),
    Intersect(Vec<CosetExpression>),
    /// args[0] minus the union of the remaining args.
    Diff(Vec<CosetExpression>),
}

impl CosetExpression {
    pub fn coset(c: Coset) -> CosetExpression {
        CosetExpression::Coset(c)
    }

    pub fn lattice(l: Lattice) -> CosetExpression {
        CosetExpression::Coset(Coset::from_lattice(l))
    }

    pub fn union(args: Vec<CosetExpression>) -> CosetExpression {
        CosetExpression::Union(args)
    }

    pub fn intersect(args: Vec<CosetExpression>) -> CosetExpression {
        CosetExpression::Intersect(args)
    }

    pub fn diff(a: CosetExpression, b: CosetExpression) -> CosetExpression {
        CosetExpression::Diff(vec![a, b])
    }

    pub fn dim(&self) -> usize {
        match self {
            CosetExpression::Coset(c) => c.dim(),
            CosetExpression::Degenerate(s) => s.dim(),
            CosetExpression::Union(a) | CosetExpression::Intersect(a) | CosetExpression::Diff(a) => {
                a.first().map_or(0, |e| e.dim())
            }
        }
    }

    /// Direct membership evaluation by leaf containment.
    pub fn membership(&self, p: &Point) -> Result<bool> {
        let coords = p
            .as_exact()
            .ok_or(Error::NumericModeUnsupported)?
            .clone();
        self.membership_rat(&coords)
    }

    fn membership_rat(&self, p: &[Rat]) -> Result<bool> {
        match self {
            CosetExpression::Coset(c) => c.contains(&Vector::Exact(p.to_vec())),
            CosetExpression::Degenerate(s) => Ok(s.contains(p)),
            CosetExpression::Union(args) => {
                for a in args {
                    if a.membership_rat(p)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            CosetExpression::Intersect(args) => {
                for a in args {
                    if !a.membership_rat(p)? {
                        return Ok(false);
                    }
                }
                Ok(!args.is_empty())
            }
            CosetExpression::Diff(args) => {
                let Some((head, rest)) = args.split_first() else {
                    return Ok(false);
                };
                if !head.membership_rat(p)? {
                    return Ok(false);
                }
                for a in rest {
                    if a.membership_rat(p)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Signed integer combination of cosets whose indicator sum equals the
/// expression's indicator, split by rank.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SignedCombs {
    pub full_rank: Vec<(Coset, i64)>,
    pub residue: Vec<(SubCoset, i64)>,
}

/// Expand an expression into its signed-comb coefficients; duplicates merged.
pub fn comb_coefficients(expr: &CosetExpression) -> Result<SignedCombs> {
    let signed = signed_expand(expr)?;
    let mut full_rank = Vec::new();
    let mut residue = Vec::new();
    for (sc, m) in signed {
        if m == 0 {
            continue;
        }
        match sc.to_coset() {
            Some(c) => full_rank.push((c, m)),
            None => residue.push((sc, m)),
        }
    }
    Ok(SignedCombs { full_rank, residue })
}

type SignedList = Vec<(SubCoset, i64)>;

fn merge(mut items: SignedList) -> SignedList {
    items.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    let mut out: SignedList = Vec::new();
    for (sc, m) in items {
        match out.last_mut() {
            Some((last, acc)) if *last == sc => *acc += m,
            _ => out.push((sc, m)),
        }
    }
    out.retain(|(_, m)| *m != 0);
    out
}

fn product(a: &SignedList, b: &SignedList) -> SignedList {
    let mut out = Vec::new();
    for (sa, ma) in a {
        for (sb, mb) in b {
            if let Some(s) = sa.intersect(sb) {
                out.push((s, ma * mb));
            }
        }
    }
    merge(out)
}

fn union2(a: SignedList, b: SignedList) -> SignedList {
    let cross = product(&a, &b);
    let mut out = a;
    out.extend(b);
    out.extend(cross.into_iter().map(|(s, m)| (s, -m)));
    merge(out)
}

fn signed_expand(expr: &CosetExpression) -> Result<SignedList> {
    match expr {
        CosetExpression::Coset(c) => {
            if !c.is_exact() {
                return Err(Error::IncommensurableLeaves);
            }
            Ok(vec![(SubCoset::from_coset(c), 1)])
        }
        CosetExpression::Degenerate(s) => Ok(vec![(s.clone(), 1)]),
        CosetExpression::Union(args) => {
            let mut acc: Option<SignedList> = None;
            for a in args {
                let s = signed_expand(a)?;
                acc = Some(match acc {
                    None => s,
                    Some(prev) => union2(prev, s),
                });
            }
            Ok(acc.unwrap_or_default())
        }
        CosetExpression::Intersect(args) => {
            let mut acc: Option<SignedList> = None;
            for a in args {
                let s = signed_expand(a)?;
                acc = Some(match acc {
                    None => s,
                    Some(prev) => product(&prev, &s),
                });
            }
            Ok(acc.unwrap_or_default())
        }
        CosetExpression::Diff(args) => {
            let Some((head, rest)) = args.split_first() else {
                return Ok(Vec::new());
            };
            let a = signed_expand(head)?;
            if rest.is_empty() {
                return Ok(a);
            }
            let b = signed_expand(&CosetExpression::Union(rest.to_vec()))?;
            let cross = product(&a, &b);
            let mut out = a;
            out.extend(cross.into_iter().map(|(s, m)| (s, -m)));
            Ok(merge(out))
        }
    }
}

/// Disjoint full-rank cosets (all of the common refinement lattice) plus a
/// signed lower-rank residue. The membership function of the source
/// expression equals the indicator of the coset union adjusted by the
/// residue, pointwise.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedSystem {
    pub full_rank_cosets: Vec<Coset>,
    pub residue: Vec<(SubCoset, i64)>,
}

impl NormalizedSystem {
    /// Indicator of the full-rank part plus signed residue contributions.
    pub fn indicator(&self, p: &[Rat]) -> i64 {
        let pv = Vector::Exact(p.to_vec());
        let mut acc = 0i64;
        for c in &self.full_rank_cosets {
            if c.contains(&pv).unwrap_or(false) {
                acc += 1;
            }
        }
        for (s, m) in &self.residue {
            if s.contains(p) {
                acc += m;
            }
        }
        acc
    }

    pub fn is_empty(&self) -> bool {
        self.full_rank_cosets.is_empty() && self.residue.is_empty()
    }
}

/// Normalize an expression into disjoint cosets of the common refinement
/// lattice plus a signed lower-rank residue.
pub fn normalize(expr: &CosetExpression) -> Result<NormalizedSystem> {
    let combs = comb_coefficients(expr)?;
    if combs.full_rank.is_empty() {
        return Ok(NormalizedSystem {
            full_rank_cosets: Vec::new(),
            residue: combs.residue,
        });
    }

    // Common refinement: the intersection of all distinct full-rank lattices.
    let mut lattices: Vec<Lattice> = Vec::new();
    for (c, _) in &combs.full_rank {
        if !lattices.contains(c.lattice()) {
            lattices.push(c.lattice().clone());
        }
    }
    let mut refined = lattices[0].clone();
    for l in &lattices[1..] {
        refined = refined.intersect(l)?;
    }

    // Split every signed coset into cosets of the refinement and accumulate
    // multiplicities per reduced offset.
    let mut acc: BTreeMap<Vec<Rat>, i64> = BTreeMap::new();
    for (c, m) in &combs.full_rank {
        for rep in quotient_representatives(c.lattice(), &refined) {
            let off = c
                .offset()
                .as_exact()
                .expect("full-rank combs are exact")
                .iter()
                .zip(&rep)
                .map(|(a, b)| a + b)
                .collect::<Vec<Rat>>();
            let reduced = reduce_offset(&refined, &Vector::Exact(off));
            let key = reduced.as_exact().unwrap().clone();
            *acc.entry(key).or_insert(0) += m;
        }
    }

    let mut full_rank_cosets = Vec::new();
    for (off, m) in acc {
        match m {
            0 => {}
            1 => full_rank_cosets.push(Coset::new(refined.clone(), Vector::Exact(off))?),
            _ => unreachable!("set expressions have indicator 0 or 1 off lower-rank sets"),
        }
    }
    Ok(NormalizedSystem {
        full_rank_cosets,
        residue: combs.residue,
    })
}

/// Representatives of L / L_sub as ambient vectors: images of the residue box
/// of the column HNF of the coordinate matrix.
fn quotient_representatives(l: &Lattice, l_sub: &Lattice) -> Vec<Vec<Rat>> {
    let basis = l.basis_rat().expect("exact lattice");
    let coords = l
        .inv_rat()
        .expect("exact lattice")
        .mul(l_sub.basis_rat().expect("exact lattice"));
    let (mut im, q) = coords.to_scaled_int();
    debug_assert!(q == num_bigint::BigInt::from(1), "sublattice coords are integral");
    column_hnf(&mut im, None);
    let diag: Vec<i64> = (0..im.cols)
        .map(|i| {
            let v = &im[(i, i)];
            num_traits::ToPrimitive::to_i64(&v.abs()).expect("desk-scale index")
        })
        .collect();
    let d = l.dim();
    let mut out = Vec::new();
    let mut r = vec![0i64; d];
    loop {
        let rep: Vec<Rat> = (0..d)
            .map(|i| {
                let mut acc = Rat::from_integer(0.into());
                for (j, &rj) in r.iter().enumerate() {
                    acc += &basis[(i, j)] * crate::scalar::rat_int(rj);
                }
                acc
            })
            .collect();
        out.push(rep);
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            r[i] += 1;
            if r[i] < diag[i] {
                break;
            }
            r[i] = 0;
            i += 1;
        }
    }
}

// --- serde: {"op": ..., "args": [...]} with coset leaves ---

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExprDoc {
    Node { op: String, args: Vec<ExprDoc> },
    Degenerate { generators: Vec<Vector>, offset: Vector },
    Leaf(Coset),
}

fn to_doc(e: &CosetExpression) -> ExprDoc {
    match e {
        CosetExpression::Coset(c) => ExprDoc::Leaf(c.clone()),
        CosetExpression::Degenerate(s) => ExprDoc::Degenerate {
            generators: s
                .generators()
                .into_iter()
                .map(Vector::Exact)
                .collect(),
            offset: Vector::Exact(s.offset().to_vec()),
        },
        CosetExpression::Union(a) => ExprDoc::Node {
            op: "union".into(),
            args: a.iter().map(to_doc).collect(),
        },
        CosetExpression::Intersect(a) => ExprDoc::Node {
            op: "intersect".into(),
            args: a.iter().map(to_doc).collect(),
        },
        CosetExpression::Diff(a) => ExprDoc::Node {
            op: "diff".into(),
            args: a.iter().map(to_doc).collect(),
        },
    }
}

fn from_doc(doc: ExprDoc) -> std::result::Result<CosetExpression, String> {
    Ok(match doc {
        ExprDoc::Leaf(c) => CosetExpression::Coset(c),
        ExprDoc::Degenerate { generators, offset } => {
            let gens: Option<Vec<Vec<Rat>>> =
                generators.iter().map(|g| g.as_exact().cloned()).collect();
            let off = offset.as_exact().cloned();
            match (gens, off) {
                (Some(g), Some(o)) => CosetExpression::Degenerate(SubCoset::new(&g, o)),
                _ => return Err("degenerate leaves must be exact".into()),
            }
        }
        ExprDoc::Node { op, args } => {
            let args = args
                .into_iter()
                .map(from_doc)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            match op.as_str() {
                "union" => CosetExpression::Union(args),
                "intersect" => CosetExpression::Intersect(args),
                "diff" => CosetExpression::Diff(args),
                other => return Err(format!("unknown op {other:?}")),
            }
        }
    })
}

impl Serialize for CosetExpression {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_doc(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CosetExpression {
    fn deserialize<D: serde::Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<CosetExpression, D::Error> {
        let doc = ExprDoc::deserialize(d)?;
        from_doc(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Scalar};

    fn z2() -> Lattice {
        Lattice::standard(2)
    }

    fn two_z2() -> Lattice {
        Lattice::from_int_generators(&[&[2, 0], &[0, 2]]).unwrap()
    }

    fn pt(x: i64, y: i64) -> Vec<Rat> {
        vec![rat_int(x), rat_int(y)]
    }

    /// Membership oracle comparison over an integer box.
    fn check_box_equivalence(expr: &CosetExpression, b: i64) {
        let sys = normalize(expr).unwrap();
        for x in -b..=b {
            for y in -b..=b {
                let p = pt(x, y);
                let member = expr
                    .membership(&Vector::Exact(p.clone()))
                    .unwrap();
                let ind = sys.indicator(&p);
                assert_eq!(
                    ind,
                    member as i64,
                    "disagreement at ({x},{y}) for normalized {sys:?}"
                );
            }
        }
    }

    #[test]
    fn z2_minus_2z2_splits_into_three_cosets() {
        let expr = CosetExpression::diff(
            CosetExpression::lattice(z2()),
            CosetExpression::lattice(two_z2()),
        );
        let sys = normalize(&expr).unwrap();
        assert_eq!(sys.full_rank_cosets.len(), 3);
        assert!(sys.residue.is_empty());
        let offsets: Vec<Vec<f64>> = sys
            .full_rank_cosets
            .iter()
            .map(|c| c.offset().to_f64s())
            .collect();
        assert!(offsets.contains(&vec![1.0, 0.0]));
        assert!(offsets.contains(&vec![0.0, 1.0]));
        assert!(offsets.contains(&vec![1.0, 1.0]));
        check_box_equivalence(&expr, 8);
    }

    #[test]
    fn union_idempotent() {
        let expr = CosetExpression::union(vec![
            CosetExpression::lattice(z2()),
            CosetExpression::lattice(z2()),
        ]);
        let sys = normalize(&expr).unwrap();
        assert_eq!(sys.full_rank_cosets.len(), 1);
        assert_eq!(sys.full_rank_cosets[0], Coset::from_lattice(z2()));
        assert!(sys.residue.is_empty());
    }

    #[test]
    fn degenerate_difference_lands_in_residue() {
        // Z^2 minus the x-axis subgroup Z x {0}.
        let axis = SubCoset::new(&[vec![rat_int(1), rat_int(0)]], pt(0, 0));
        let expr = CosetExpression::diff(
            CosetExpression::lattice(z2()),
            CosetExpression::Degenerate(axis.clone()),
        );
        let sys = normalize(&expr).unwrap();
        assert_eq!(sys.full_rank_cosets.len(), 1);
        assert_eq!(sys.residue.len(), 1);
        assert_eq!(sys.residue[0].1, -1);
        assert_eq!(sys.residue[0].0.rank(), 1);
        check_box_equivalence(&expr, 6);
    }

    #[test]
    fn comb_coefficients_examples() {
        // A \ A' with A' inside A.
        let expr = CosetExpression::diff(
            CosetExpression::lattice(z2()),
            CosetExpression::lattice(two_z2()),
        );
        let combs = comb_coefficients(&expr).unwrap();
        assert_eq!(combs.full_rank.len(), 2);
        let mults: Vec<i64> = combs.full_rank.iter().map(|(_, m)| *m).collect();
        assert!(mults.contains(&1) && mults.contains(&-1));

        // Disjoint union of Z^2 and Z^2 + (1/2, 1/2).
        let shifted = Coset::new(z2(), Vector::Exact(vec![rat(1, 2), rat(1, 2)])).unwrap();
        let expr = CosetExpression::union(vec![
            CosetExpression::lattice(z2()),
            CosetExpression::coset(shifted),
        ]);
        let combs = comb_coefficients(&expr).unwrap();
        assert_eq!(combs.full_rank.len(), 2);
        assert!(combs.full_rank.iter().all(|(_, m)| *m == 1));
        assert!(combs.residue.is_empty());
    }

    #[test]
    fn membership_examples() {
        let expr = CosetExpression::diff(
            CosetExpression::lattice(z2()),
            CosetExpression::lattice(two_z2()),
        );
        assert!(expr.membership(&Vector::from_ints(&[1, 1])).unwrap());
        assert!(!expr.membership(&Vector::from_ints(&[2, 2])).unwrap());
    }

    #[test]
    fn incompatible_offsets_yield_empty() {
        let a = Coset::new(two_z2(), Vector::from_ints(&[0, 0])).unwrap();
        let b = Coset::new(two_z2(), Vector::from_ints(&[1, 0])).unwrap();
        let expr = CosetExpression::intersect(vec![
            CosetExpression::coset(a),
            CosetExpression::coset(b),
        ]);
        let sys = normalize(&expr).unwrap();
        assert!(sys.is_empty());
    }

    #[test]
    fn normalize_is_idempotent() {
        let checker = Lattice::from_int_generators(&[&[1, 1], &[-1, 1]]).unwrap();
        let expr = CosetExpression::union(vec![
            CosetExpression::lattice(z2()),
            CosetExpression::diff(
                CosetExpression::lattice(checker),
                CosetExpression::lattice(two_z2()),
            ),
        ]);
        let sys = normalize(&expr).unwrap();
        let again = normalize(&CosetExpression::Union(
            sys.full_rank_cosets
                .iter()
                .cloned()
                .map(CosetExpression::Coset)
                .collect(),
        ))
        .unwrap();
        assert_eq!(sys.full_rank_cosets, again.full_rank_cosets);
        check_box_equivalence(&expr, 6);
    }

    #[test]
    fn density_matches_det_sum() {
        // Indicator density of Z^2 \ 2Z^2 is 1 - 1/4 = 3/4; the normalized
        // cosets all have det 4, so the 1/det sum must be 3/4.
        let expr = CosetExpression::diff(
            CosetExpression::lattice(z2()),
            CosetExpression::lattice(two_z2()),
        );
        let sys = normalize(&expr).unwrap();
        let density: Rat = sys
            .full_rank_cosets
            .iter()
            .map(|c| match c.lattice().det_abs() {
                Scalar::Rational(r) => r.recip(),
                _ => unreachable!(),
            })
            .sum();
        assert_eq!(density, rat(3, 4));
    }

    #[test]
    fn expression_serde_round_trip() {
        let shifted = Coset::new(z2(), Vector::Exact(vec![rat(1, 2), rat(1, 2)])).unwrap();
        let expr = CosetExpression::diff(
            CosetExpression::union(vec![
                CosetExpression::lattice(z2()),
                CosetExpression::coset(shifted),
            ]),
            CosetExpression::lattice(two_z2()),
        );
        let s = serde_json::to_string(&expr).unwrap();
        let back: CosetExpression = serde_json::from_str(&s).unwrap();
        assert_eq!(expr, back);
        assert!(s.contains("\"op\":\"diff\""));
    }

    #[test]
    fn subcoset_canonical_offset() {
        let axis = SubCoset::new(&[vec![rat_int(1), rat_int(0)]], pt(5, 3));
        assert_eq!(axis.offset(), &[rat_int(0), rat_int(3)]);
        let same = SubCoset::new(&[vec![rat_int(-1), rat_int(0)]], pt(-2, 3));
        assert_eq!(axis, same);
    }
}
