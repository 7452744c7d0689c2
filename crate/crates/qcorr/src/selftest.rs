//! Algebraic identity suite behind the CLI `selftest` subcommand.
//!
//! Each check verifies one structural identity of the library at a
//! fixed tolerance and reports a pass/fail line. The suite is the
//! cheap end-to-end sanity net: generator algebra, operator algebra,
//! the two density-matrix constructions, the closed-form square root,
//! the explicit two-qutrit curves and a closed-form-vs-oracle spot
//! check.

use crate::linalg::{hs_norm, psd_sqrt, C64, CMatrix};
use crate::measures;
use crate::oracles::{oracle_lqu, OptimizerConfig};
use crate::ortho;
use crate::random::rng_from_seed;
use crate::sun;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Residual or deviation that was compared against the tolerance.
    pub worst: f64,
    pub tolerance: f64,
}

fn check(name: impl Into<String>, worst: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed: worst <= tolerance,
        worst,
        tolerance,
    }
}

fn commutator_residual(n: usize) -> f64 {
    let gs = sun::GeneratorSet::new(n).unwrap();
    let sc = sun::structure_constants(&gs).unwrap();
    let m = gs.len();
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let prod = gs.lambda(i).mul(gs.lambda(j));
            let comm = prod.sub(&gs.lambda(j).mul(gs.lambda(i)));
            let mut rhs = CMatrix::zeros(n);
            for k in 0..m {
                rhs = rhs.add(&gs.lambda(k).scale(C64::new(0.0, 2.0 * sc.f.at(i, j, k))));
            }
            worst = worst.max(hs_norm(&comm.sub(&rhs)));
        }
    }
    worst
}

fn product_identity_residual(n: usize) -> f64 {
    let gs = sun::GeneratorSet::new(n).unwrap();
    let sc = sun::structure_constants(&gs).unwrap();
    let m = gs.len();
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let mut rhs = CMatrix::zeros(n);
            for k in 0..m {
                rhs = rhs.add(&gs.lambda(k).scale(C64::new(sc.d.at(i, j, k), sc.f.at(i, j, k))));
            }
            if i == j {
                rhs = rhs.add(&CMatrix::identity(n).scale_re(2.0 / n as f64));
            }
            worst = worst.max(hs_norm(&gs.lambda(i).mul(gs.lambda(j)).sub(&rhs)));
        }
    }
    worst
}

fn operator_algebra_residual(n: usize) -> f64 {
    let id = CMatrix::identity(n * n);
    let f = ortho::flip_op(n);
    let fh = ortho::fhat_op(n);
    let mut worst = hs_norm(&f.mul(&f).sub(&id));
    worst = worst.max(hs_norm(&f.mul(&fh).sub(&fh)));
    worst = worst.max(hs_norm(&fh.mul(&f).sub(&fh)));
    worst = worst.max(hs_norm(&fh.mul(&fh).sub(&fh.scale_re(n as f64))));
    worst
}

fn density_construction_residual(n: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let (u, v, w) = ortho::projectors_uvw(n);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let s = ortho::sample_physical(n, &mut rng);
        let (eu, ev, ew) = s.spectral_weights();
        let spectral = u.scale_re(eu).add(&v.scale_re(ev)).add(&w.scale_re(ew));
        worst = worst.max(hs_norm(&s.operator_matrix().sub(&spectral)));
    }
    worst
}

fn sqrt_closed_form_residual(n: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let s = ortho::sample_physical(n, &mut rng);
        let sc = s.sqrt_coeffs().unwrap();
        let closed = CMatrix::identity(n * n)
            .scale_re(sc.a1)
            .add(&ortho::flip_op(n).scale_re(sc.b1))
            .add(&ortho::fhat_op(n).scale_re(sc.c1));
        let direct = psd_sqrt(&s.density_matrix().unwrap()).unwrap();
        worst = worst.max(hs_norm(&closed.sub(&direct)));
    }
    worst
}

fn explicit_curve_residual() -> f64 {
    let mut worst = 0.0f64;
    for i in 0..=80 {
        let b = -1.0 / 6.0 + i as f64 * 0.25 / 80.0;
        let diff = (measures::lqu_werner(b).unwrap()
            - measures::lqu_ortho(&ortho::werner(3, b).unwrap()).unwrap())
        .abs();
        worst = worst.max(diff);
        let c = -1.0 / 24.0 + i as f64 * (1.0 / 24.0 + 1.0 / 3.0) / 80.0;
        let diff = (measures::lqu_isotropic(c).unwrap()
            - measures::lqu_ortho(&ortho::isotropic(3, c).unwrap()).unwrap())
        .abs();
        worst = worst.max(diff);
    }
    worst
}

fn theta_reconstruction_residual(d: usize) -> f64 {
    let wb = sun::weyl_basis(d).unwrap();
    let mut worst = 0.0f64;
    for j in 0..d {
        worst = worst.max(hs_norm(&sun::theta_from_weyl(&wb, j).sub(wb.theta(j))));
    }
    worst
}

fn oracle_spot_check(points: usize, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    let cfg = OptimizerConfig {
        seeds: 12,
        rng_seed: seed,
        max_iters: 1200,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    for _ in 0..points {
        let s = ortho::sample_physical(3, &mut rng);
        let rho = s.density_matrix().unwrap();
        let closed = measures::lqu_ortho(&s).unwrap();
        let oracle = oracle_lqu(&rho, &[-1.0, 0.0, 1.0], &cfg).unwrap();
        worst = worst.max((oracle.value - closed).abs());
    }
    worst
}

/// Run the full identity suite; deterministic for a fixed seed.
pub fn run(seed: u64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for n in [2, 3, 4] {
        out.push(check(
            format!("generator commutation identity (n={n})"),
            commutator_residual(n),
            1e-11,
        ));
        out.push(check(
            format!("generator product identity (n={n})"),
            product_identity_residual(n),
            1e-11,
        ));
        out.push(check(
            format!("flip operator algebra (n={n})"),
            operator_algebra_residual(n),
            1e-12,
        ));
        out.push(check(
            format!("spectral vs linear state construction (n={n})"),
            density_construction_residual(n, 25, seed ^ n as u64),
            1e-12,
        ));
        out.push(check(
            format!("square-root closed form vs matrix root (n={n})"),
            sqrt_closed_form_residual(n, 25, seed ^ (n as u64) << 8),
            1e-10,
        ));
    }
    out.push(check(
        "explicit two-qutrit curves vs generic pipeline",
        explicit_curve_residual(),
        1e-12,
    ));
    for d in [2, 3, 4, 5] {
        out.push(check(
            format!("diagonal projector Fourier reconstruction (d={d})"),
            theta_reconstruction_residual(d),
            1e-12,
        ));
    }
    out.push(check(
        "uncertainty oracle vs closed form (20 points)",
        oracle_spot_check(20, seed),
        1e-4,
    ));
    out
}
