//! Small exact linear algebra: rational matrices, integer column Hermite
//! normal form with transform tracking, integer kernels and integer linear
//! solves. Everything here is sized for ambient dimensions d <= 3 or so and
//! favors clarity over asymptotics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rat;

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::scalar::rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else {
                return Rat::zero();
            };
            if p != col {
                for j in 0..n {
                    let tmp = m[(p, j)].clone();
                    m[(p, j)] = m[(col, j)].clone();
                    m[(col, j)] = tmp;
                }
                det = -det;
            }
            let pv = m[(col, col)].clone();
            det *= &pv;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pv;
                for j in col..n {
                    let sub = &f * &m[(col, j)];
                    m[(r, j)] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !m[(r, col)].is_zero())?;
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                    inv.data.swap(p * n + j, col * n + j);
                }
            }
            let pv = m[(col, col)].clone();
            for j in 0..n {
                m[(col, j)] /= &pv;
                inv[(col, j)] /= &pv;
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let f = m[(r, col)].clone();
                for j in 0..n {
                    let a = &f * &m[(col, j)];
                    m[(r, j)] -= a;
                    let b = &f * &inv[(col, j)];
                    inv[(r, j)] -= b;
                }
            }
        }
        Some(inv)
    }

    /// Least common multiple of all entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut q = BigInt::one();
        for e in &self.data {
            q = q.lcm(e.denom());
        }
        q
    }

    /// Scale by the denominator lcm to an integer matrix; returns (matrix, q).
    pub fn to_scaled_int(&self) -> (IMat, BigInt) {
        let q = self.denominator_lcm();
        let mut m = IMat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = &self[(i, j)];
                m[(i, j)] = e.numer() * (&q / e.denom());
            }
        }
        (m, q)
    }

    pub fn scale(&self, s: &Rat) -> RatMat {
        let mut out = self.clone();
        for e in &mut out.data {
            *e *= s;
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn to_rat(&self) -> RatMat {
        let mut m = RatMat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = Rat::from_integer(self[(i, j)].clone());
            }
        }
        m
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// col_dst += c * col_src.
    fn addmul_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = &self[(i, src)] * c;
            self[(i, dst)] += add;
        }
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Column Hermite normal form, in place. Unimodular column operations only,
/// so the column span over Z is preserved.
///
/// Output shape: pivot columns come first, in staircase order with strictly
/// increasing pivot rows; pivot entries are positive; entries to the left of
/// a pivot in its row are reduced into [0, pivot); entries above each pivot
/// are zero. Columns after the last pivot are identically zero.
///
/// If `transform` is given it must be an n x n identity and receives the same
/// column operations; its columns over zero output columns span the integer
/// kernel.
///
/// Returns the pivot positions (row, col).
pub fn column_hnf(a: &mut IMat, mut transform: Option<&mut IMat>) -> Vec<(usize, usize)> {
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pc = 0usize;
    for r in 0..rows {
        if pc == cols {
            break;
        }
        // Euclid across row r, columns pc..: leave a single nonzero at pc.
        loop {
            let jmin = (pc..cols)
                .filter(|&j| !a[(r, j)].is_zero())
                .min_by_key(|&j| a[(r, j)].abs());
            let Some(jmin) = jmin else {
                break;
            };
            a.swap_cols(pc, jmin);
            if let Some(u) = transform.as_deref_mut() {
                u.swap_cols(pc, jmin);
            }
            let mut clean = true;
            let pivot = a[(r, pc)].clone();
            for j in pc + 1..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let q = a[(r, j)].div_floor(&pivot);
                a.addmul_col(j, pc, &-q.clone());
                if let Some(u) = transform.as_deref_mut() {
                    u.addmul_col(j, pc, &-q);
                }
                if !a[(r, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[(r, pc)].is_zero() {
            continue; // no pivot in this row
        }
        if a[(r, pc)].is_negative() {
            a.negate_col(pc);
            if let Some(u) = transform.as_deref_mut() {
                u.negate_col(pc);
            }
        }
        let pivot = a[(r, pc)].clone();
        for j in 0..pc {
            let q = a[(r, j)].div_floor(&pivot);
            if !q.is_zero() {
                a.addmul_col(j, pc, &-q.clone());
                if let Some(u) = transform.as_deref_mut() {
                    u.addmul_col(j, pc, &-q);
                }
            }
        }
        pivots.push((r, pc));
        pc += 1;
    }
    pivots
}

/// Canonical rational column HNF of a generator matrix (columns generate a
/// subgroup of Q^d). Returns the staircase matrix restricted to its pivot
/// columns, so the column count equals the rank.
pub fn rational_hnf(generators: &RatMat) -> RatMat {
    let (mut m, q) = generators.to_scaled_int();
    let pivots = column_hnf(&mut m, None);
    let rank = pivots.len();
    let mut out = RatMat::zero(generators.rows, rank);
    let qr = Rat::from_integer(q);
    for (t, &(_, c)) in pivots.iter().enumerate() {
        for i in 0..generators.rows {
            out[(i, t)] = Rat::from_integer(m[(i, c)].clone()) / &qr;
        }
    }
    out
}

/// Basis of the integer kernel {x in Z^n : M x = 0} for a rational matrix M.
pub fn integer_kernel(m: &RatMat) -> Vec<Vec<BigInt>> {
    let (mut a, _) = m.to_scaled_int();
    let n = a.cols;
    let mut u = IMat::identity(n);
    let pivots = column_hnf(&mut a, Some(&mut u));
    let rank = pivots.len();
    (rank..n).map(|j| u.column(j)).collect()
}

/// Integer solution x of M x = v for rational M (d x n) and v, if one exists.
pub fn solve_integer(m: &RatMat, v: &[Rat]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, v.len());
    // Common scaling keeps the system equivalent.
    let mut q = m.denominator_lcm();
    for e in v {
        q = q.lcm(e.denom());
    }
    let mut a = IMat::zero(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let e = &m[(i, j)];
            a[(i, j)] = e.numer() * (&q / e.denom());
        }
    }
    let w: Vec<BigInt> = v.iter().map(|e| e.numer() * (&q / e.denom())).collect();

    let n = a.cols;
    let mut u = IMat::identity(n);
    let pivots = column_hnf(&mut a, Some(&mut u));

    let mut residual = w;
    let mut y = vec![BigInt::zero(); n];
    for &(r, c) in &pivots {
        let p = &a[(r, c)];
        let (quot, rem) = residual[r].div_rem(p);
        if !rem.is_zero() {
            return None;
        }
        for i in 0..a.rows {
            let sub = &a[(i, c)] * &quot;
            residual[i] -= sub;
        }
        y[c] = quot;
    }
    if residual.iter().any(|e| !e.is_zero()) {
        return None;
    }
    // x = U y.
    let x = (0..n)
        .map(|i| (0..n).map(|j| &u[(i, j)] * &y[j]).sum())
        .collect();
    Some(x)
}

/// Floating-point determinant by Gaussian elimination (small d).
pub fn f_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[p][col] == 0.0 {
            return 0.0;
        }
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for j in col..n {
                a[r][j] -= f * a[col][j];
            }
        }
    }
    det
}

/// Floating-point inverse (small d); None when near-singular.
pub fn f_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[p][col].abs() < 1e-300 {
            return None;
        }
        a.swap(p, col);
        inv.swap(p, col);
        let pv = a[col][col];
        for j in 0..n {
            a[col][j] /= pv;
            inv[col][j] /= pv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    Some(inv)
}

pub fn f_mul_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Pairwise Lagrange size reduction over the rationals: columns of the
/// result generate the same lattice as the input columns but are short
/// enough for tight enumeration boxes. Exact, deterministic.
pub fn rat_size_reduce(m: &RatMat) -> RatMat {
    let mut g = m.clone();
    let (rows, cols) = (g.rows, g.cols);
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    for _ in 0..16 {
        let mut changed = false;
        for i in 0..cols {
            for j in 0..cols {
                if i == j {
                    continue;
                }
                let mut dot = Rat::zero();
                let mut nj = Rat::zero();
                for r in 0..rows {
                    dot += &g[(r, i)] * &g[(r, j)];
                    nj += &g[(r, j)] * &g[(r, j)];
                }
                if nj.is_zero() {
                    continue;
                }
                let q = (&dot / &nj + &half).floor();
                if !q.is_zero() {
                    for r in 0..rows {
                        let sub = &g[(r, j)] * &q;
                        g[(r, i)] -= sub;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    g
}

/// Pairwise Lagrange size reduction of a float generator list (one vector
/// per entry). Preserves the generated lattice; shortens skewed bases enough
/// for covering-radius bounds and dedup keys.
pub fn f_size_reduce(mut gens: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = gens.len();
    for _ in 0..16 {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dot: f64 = gens[i].iter().zip(&gens[j]).map(|(a, b)| a * b).sum();
                let nj: f64 = gens[j].iter().map(|x| x * x).sum();
                if nj == 0.0 {
                    continue;
                }
                let q = (dot / nj).round();
                if q != 0.0 {
                    for k in 0..gens[i].len() {
                        gens[i][k] -= q * gens[j][k];
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn imat(rows: &[&[i64]]) -> IMat {
        let mut m = IMat::zero(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    #[test]
    fn hnf_checkerboard() {
        // Columns (1,1) and (-1,1) generate {x in Z^2 : x1 + x2 even}.
        let mut m = imat(&[&[1, -1], &[1, 1]]);
        let pivots = column_hnf(&mut m, None);
        assert_eq!(pivots, vec![(0, 0), (1, 1)]);
        assert_eq!(m, imat(&[&[1, 0], &[1, 2]]));
    }

    #[test]
    fn hnf_is_basis_independent() {
        // Columns (2,2),(0,4) and the sheared pair (2,6),(2,2) generate the
        // same lattice; both canonicalize to columns (2,2),(0,4).
        let mut m1 = imat(&[&[2, 0], &[2, 4]]);
        let mut m2 = imat(&[&[2, 2], &[6, 2]]);
        column_hnf(&mut m1, None);
        column_hnf(&mut m2, None);
        assert_eq!(m1, m2);
        assert_eq!(m1, imat(&[&[2, 0], &[2, 4]]));
    }

    #[test]
    fn hnf_zero_column_and_kernel() {
        let m = RatMat::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = integer_kernel(&m);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let vk: Vec<Rat> = k.iter().map(|x| Rat::from_integer(x.clone())).collect();
            assert!(m.mul_vec(&vk).iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn solve_integer_basic() {
        // 2x + 3y = 7 has integer solutions.
        let m = RatMat::from_int_rows(&[&[2, 3]]);
        let x = solve_integer(&m, &[rat_int(7)]).unwrap();
        assert_eq!(
            &x[0] * BigInt::from(2) + &x[1] * BigInt::from(3),
            BigInt::from(7)
        );
        // 2x + 4y = 7 has none.
        let m = RatMat::from_int_rows(&[&[2, 4]]);
        assert!(solve_integer(&m, &[rat_int(7)]).is_none());
    }

    #[test]
    fn solve_integer_rational_entries() {
        // x * 1/2 = 3/2 -> x = 3.
        let m = RatMat::from_rows(vec![vec![rat(1, 2)]]);
        let x = solve_integer(&m, &[rat(3, 2)]).unwrap();
        assert_eq!(x[0], BigInt::from(3));
        // x * 1/2 = 1/3 has no integer solution.
        assert!(solve_integer(&m, &[rat(1, 3)]).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let m = RatMat::from_int_rows(&[&[1, 1], &[0, 2]]);
        assert_eq!(m.det(), rat_int(2));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMat::identity(2));
        let sing = RatMat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.det(), rat_int(0));
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn rational_hnf_drops_dependent_columns() {
        let g = RatMat::from_int_rows(&[&[1, 2, 1], &[0, 0, 3]]);
        let h = rational_hnf(&g);
        assert_eq!(h.cols, 2);
        assert_eq!(h.rows, 2);
        assert!(!h.det().is_zero());
    }

    #[test]
    fn float_helpers() {
        let m = vec![vec![2.0, 0.0], vec![1.0, 3.0]];
        assert!((f_det(&m) - 6.0).abs() < 1e-12);
        let inv = f_inverse(&m).unwrap();
        let v = f_mul_vec(&inv, &[2.0, 7.0]);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 2.0).abs() < 1e-12);
    }
}
