//! Named verification presets: each runs a computable identity end to end,
//! prints both sides and the residual, and exits 0 only within tolerance.

use std::process::ExitCode;

use num_complex::Complex64;
use quasicomb_core::comb::{presets, CombDistribution};
use quasicomb_core::error::Error;
use quasicomb_core::fourier::fourier;
use quasicomb_core::lattice::{Coset, Lattice};
use quasicomb_core::linalg::RatMat;
use quasicomb_core::scalar::rat_int;
use quasicomb_core::testfn::{fourier_testfn, pair, poisson_check, TestFunction};
use quasicomb_core::{coset_ring, CosetExpression, Vector};

/// Deterministic splitmix64, so verification runs are reproducible.
struct Rng(u64);

impl Rng {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as i64
    }
}

pub fn run(name: &str) -> Result<ExitCode, Error> {
    match name {
        "poisson-gaussian" => poisson_gaussian(),
        "ex-unbounded" => ex_unbounded(),
        "ex-sine" => ex_sine(),
        "coset-split" => coset_split(),
        other => Err(Error::Document(format!(
            "unknown example {other:?}; known: poisson-gaussian, ex-unbounded, ex-sine, coset-split"
        ))),
    }
}

fn random_lattice(rng: &mut Rng, d: usize) -> Lattice {
    loop {
        let mut m = RatMat::zero(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = rat_int(rng.int_in(-3, 3));
            }
        }
        if let Ok(l) = Lattice::canonicalize(m) {
            return l;
        }
    }
}

fn poisson_gaussian() -> Result<ExitCode, Error> {
    let tol = 1e-8;
    let mut rng = Rng(0x5eed);
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    for case in 0..50 {
        let d = 1 + (case % 3);
        let l = random_lattice(&mut rng, d);
        let rep = poisson_check(&l, &TestFunction::gaussian(d), tol)?;
        worst = worst.max(rep.residual);
        if !rep.passes {
            failures += 1;
            eprintln!("lattice case {case}: residual {}", rep.residual);
        }
    }
    println!("poisson-gaussian: 50 lattices, max residual {worst:.3e}, tol {tol:.0e}");
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn five_test_functions() -> Vec<TestFunction> {
    vec![
        TestFunction::gaussian(2),
        TestFunction::hermite_atom(&[1, 0], 1.0, &[0.0, 0.0], &[0.0, 0.0]),
        TestFunction::hermite_atom(&[0, 2], 0.8, &[0.3, -0.2], &[0.0, 0.0]),
        TestFunction::gaussian_with(1.5, &[0.5, 0.5], &[0.25, 0.0]),
        TestFunction::hermite_atom(&[1, 1], 0.6, &[-0.4, 0.1], &[0.0, 0.5]),
    ]
}

fn ex_unbounded() -> Result<ExitCode, Error> {
    let tol = 1e-8;
    let f = presets::x1_weighted_z2();
    let ft = fourier(&f)?;
    if !ft.approx_eq(&presets::d1_comb_z2(), 1e-12) {
        eprintln!("symbolic transform does not match the derivative comb");
        return Ok(ExitCode::from(4));
    }
    let mut worst = 0.0f64;
    for phi in five_test_functions() {
        let lhs = pair(&ft, &phi, tol / 10.0)?.value;
        // Direct side: sum over Z^2 of x_1 phi-hat(x), raw summation.
        let phi_hat = fourier_testfn(&phi);
        let mut rhs = Complex64::new(0.0, 0.0);
        for x1 in -14i64..=14 {
            for x2 in -14i64..=14 {
                rhs += x1 as f64 * phi_hat.eval(&[x1 as f64, x2 as f64]);
            }
        }
        let residual = (lhs - rhs).norm();
        worst = worst.max(residual);
        println!("  <FT(sum x1 delta), phi> = {lhs:.12}  direct = {rhs:.12}  residual {residual:.3e}");
    }
    println!("ex-unbounded: max residual {worst:.3e}, tol {tol:.0e}");
    Ok(if worst < tol {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn ex_sine() -> Result<ExitCode, Error> {
    let tol = 1e-8;
    let f = presets::sine_z2();
    let ft = fourier(&f)?;
    if !ft.approx_eq(&presets::sine_transform_z2(), 1e-12) {
        eprintln!("symbolic transform does not match the shifted-comb pair");
        return Ok(ExitCode::from(4));
    }
    let alpha = 1.0 / 5f64.sqrt();
    let mut worst = 0.0f64;
    for phi in five_test_functions() {
        let lhs = pair(&ft, &phi, tol / 10.0)?.value;
        // Direct side: sum over Z^2 of sin(2 pi n1 / sqrt5) phi-hat(n).
        let phi_hat = fourier_testfn(&phi);
        let mut rhs = Complex64::new(0.0, 0.0);
        for n1 in -14i64..=14 {
            for n2 in -14i64..=14 {
                let mass = (std::f64::consts::TAU * n1 as f64 * alpha).sin();
                rhs += mass * phi_hat.eval(&[n1 as f64, n2 as f64]);
            }
        }
        let residual = (lhs - rhs).norm();
        worst = worst.max(residual);
        println!("  <FT(sine comb), phi> = {lhs:.12}  direct = {rhs:.12}  residual {residual:.3e}");
    }
    println!("ex-sine: max residual {worst:.3e}, tol {tol:.0e}");
    Ok(if worst < tol {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn coset_split() -> Result<ExitCode, Error> {
    let z2 = Lattice::standard(2);
    let two_z2 = Lattice::from_int_generators(&[&[2, 0], &[0, 2]]).unwrap();
    let expr = CosetExpression::diff(
        CosetExpression::lattice(z2),
        CosetExpression::lattice(two_z2.clone()),
    );
    let sys = coset_ring::normalize(&expr)?;
    println!(
        "coset-split: Z^2 \\ 2Z^2 -> {} cosets, {} residue entries",
        sys.full_rank_cosets.len(),
        sys.residue.len()
    );
    for c in &sys.full_rank_cosets {
        println!("  offset {:?}", c.offset().to_f64s());
    }
    let expected: Vec<Coset> = [[1i64, 0], [0, 1], [1, 1]]
        .iter()
        .map(|off| Coset::new(two_z2.clone(), Vector::from_ints(off)).unwrap())
        .collect();
    let structure_ok = sys.full_rank_cosets.len() == 3
        && sys.residue.is_empty()
        && expected.iter().all(|c| sys.full_rank_cosets.contains(c));
    // Pointwise oracle on the box [-8, 8]^2, zero tolerance.
    let mut mismatches = 0usize;
    for x in -8i64..=8 {
        for y in -8i64..=8 {
            let p = vec![rat_int(x), rat_int(y)];
            let member = expr.membership(&Vector::Exact(p.clone()))? as i64;
            if sys.indicator(&p) != member {
                mismatches += 1;
            }
        }
    }
    println!("  box oracle mismatches: {mismatches} (zero tolerance)");
    Ok(if structure_ok && mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

/// Build a dirac comb document for ad-hoc CLI experiments.
#[allow(dead_code)]
pub fn dirac_comb_z(d: usize) -> CombDistribution {
    presets::dirac_standard(d)
}
