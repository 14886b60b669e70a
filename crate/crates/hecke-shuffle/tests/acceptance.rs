//! Acceptance gate: ten numbered criteria, each printing a single
//! PASS/FAIL line with its measured quantity and pinned tolerance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

use hecke_shuffle::harmonic::{BPoint, TestBump, TorusForm};
use hecke_shuffle::intertwiner::{
    fourier_intertwiner_identity_check, IdentityCheckConfig,
};
use hecke_shuffle::lfunction::{
    l_dirichlet, l_euler, LContext, SpectralPoint, TruncationPolicy,
};
use hecke_shuffle::numberfield::{
    make_field, unit_lattice, IMAGINARY_WHITELIST, REAL_WHITELIST_DEFAULT,
};
use hecke_shuffle::shuffle::Permutation;
use hecke_shuffle::verify::{self, VerifyConfig};

fn report(criterion: u32, passed: bool, detail: &str) {
    println!(
        "{} criterion {:02}: {}",
        if passed { "PASS" } else { "FAIL" },
        criterion,
        detail
    );
    assert!(passed, "criterion {criterion:02} failed: {detail}");
}

fn all_whitelisted() -> Vec<i64> {
    let mut ds = vec![0];
    ds.extend_from_slice(&IMAGINARY_WHITELIST);
    ds.extend_from_slice(&REAL_WHITELIST_DEFAULT);
    ds
}

fn context(d: i64, x: u64) -> LContext {
    let field = make_field(d).unwrap();
    let lattice = unit_lattice(&field);
    LContext::new(field, lattice, x, None).unwrap()
}

#[test]
fn criterion_01_euler_dirichlet_agreement() {
    let start = Instant::now();
    let x = 10_000u64;
    let policy = TruncationPolicy {
        norm_bound: x,
        tail_tolerance: 1e12,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst_margin = f64::INFINITY;
    let mut ok = true;
    for d in all_whitelisted() {
        let ctx = context(d, x);
        let rank = ctx.lattice.rank;
        for _ in 0..50 {
            let lambda: Vec<i64> = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
            let s = Complex64::new(rng.gen_range(1.5..4.0), rng.gen_range(-3.0..3.0));
            let z = SpectralPoint::new(lambda, s);
            let a = l_euler(&ctx, &z, &policy).unwrap();
            let b = l_dirichlet(&ctx, &z, &policy).unwrap();
            let diff = (a.value - b.value).norm();
            let budget = a.tail_bound + b.tail_bound;
            if diff > budget {
                ok = false;
            }
            worst_margin = worst_margin.min(budget - diff);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        ok && elapsed <= 60.0,
        &format!(
            "Euler/Dirichlet agree within combined tail bounds on 50 points x {} fields, X=10^4, {:.1}s (limit 60s), slimmest margin {:.3e}",
            all_whitelisted().len(),
            elapsed,
            worst_margin
        ),
    );
}

#[test]
fn criterion_02_functional_equation() {
    let mut worst = 0.0f64;
    for d in [0, -1, 2] {
        let cfg = VerifyConfig {
            d,
            functional_points: 20,
            ..VerifyConfig::default()
        };
        let rep = verify::functional_suite(&cfg).unwrap();
        for c in &rep.checks {
            worst = worst.max(c.residual);
            assert!(c.passed, "{}", c.detail);
        }
    }
    report(
        2,
        worst <= 1e-7,
        &format!(
            "completed functional equation |L*(s) - L*(1-s)| <= 1e-7 over Q, Q(i), Q(sqrt2); worst {worst:.3e}"
        ),
    );
}

#[test]
fn criterion_03_local_closed_forms() {
    let mut worst_arch = 0.0f64;
    let mut worst_padic = 0.0f64;
    for d in [0, -1, 2] {
        let cfg = VerifyConfig {
            d,
            norm_bound: 2_000,
            local_draws: 20,
            ..VerifyConfig::default()
        };
        let rep = verify::local_suite(&cfg).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
            if c.name == "padic_oracle" {
                worst_padic = worst_padic.max(c.residual);
            } else {
                worst_arch = worst_arch.max(c.residual);
            }
        }
    }
    report(
        3,
        worst_arch <= 1e-6 && worst_padic <= 1e-10,
        &format!(
            "local oracles on 20 draws per place per field: archimedean {worst_arch:.3e} (tol 1e-6), p-adic {worst_padic:.3e} (tol 1e-10)"
        ),
    );
}

#[test]
fn criterion_04_rank2_assembly() {
    let cfg_q = VerifyConfig {
        d: 0,
        norm_bound: 10_000,
        assembly_points: 10,
        ..VerifyConfig::default()
    };
    let rep_q = verify::assembly_suite(&cfg_q).unwrap();
    assert!(rep_q.passed, "{:?}", rep_q.checks);
    let mut constants = Vec::new();
    let mut ok = rep_q.passed;
    for d in [-1, 2] {
        let cfg = VerifyConfig {
            d,
            norm_bound: 20_000,
            assembly_points: 10,
            assembly_ratio_tol: 1e-6,
            ..VerifyConfig::default()
        };
        let rep = verify::assembly_suite(&cfg).unwrap();
        ok &= rep.passed;
        constants.push(format!("d={d}: {}", rep.checks[0].detail));
    }
    report(
        4,
        ok,
        &format!(
            "assembly = Phi over Q within tail bounds (10 pts, Re in [1.2,3]); ratio constant to 1e-6 — {}",
            constants.join("; ")
        ),
    );
}

#[test]
fn criterion_05_cocycle_identity() {
    let mut worst = 0.0f64;
    for d in [0, 2] {
        let cfg = VerifyConfig {
            d,
            norm_bound: 2_000,
            cocycle_n_max: 4,
            cocycle_points: 10,
            cocycle_tol: 1e-9,
            ..VerifyConfig::default()
        };
        let rep = verify::cocycle_suite(&cfg).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{}: residual {:e}", c.name, c.residual);
            worst = worst.max(c.residual);
        }
    }
    report(
        5,
        worst <= 1e-9,
        &format!(
            "cocycle identity for all pairs in S_n^2, n <= 4, 10 generic points each, two fields; worst relative residual {worst:.3e}"
        ),
    );
}

#[test]
fn criterion_06_combinatorics() {
    let cfg = VerifyConfig {
        bijection_total: 7,
        inversion_total: 6,
        ..VerifyConfig::default()
    };
    let bij = verify::bijection_suite(&cfg);
    let inv = verify::inversion_suite(&cfg);
    let ok = bij.passed && inv.passed;
    report(
        6,
        ok,
        &format!(
            "decomposition bijection exhaustive m+n <= 7 ({}), inversion-set additivity and setwise refinement exhaustive m+n <= 6",
            bij.checks.last().map(|c| c.detail.as_str()).unwrap_or("")
        ),
    );
}

#[test]
fn criterion_07_shuffle_associativity() {
    let mut worst = 0.0f64;
    let cfg = VerifyConfig {
        d: 0,
        norm_bound: 2_000,
        assoc_points: 10,
        assoc_tol: 1e-8,
        ..VerifyConfig::default()
    };
    let rep = verify::assoc_suite(&cfg).unwrap();
    for c in &rep.checks {
        assert!(c.passed, "{}: residual {:e}", c.name, c.residual);
        worst = worst.max(c.residual);
    }
    report(
        7,
        worst <= 1e-8,
        &format!(
            "shuffle associativity up to arity (2,2,1) and ch-symmetrization vs iterated product (n <= 3), 10 seeded points; worst relative residual {worst:.3e}"
        ),
    );
}

#[test]
fn criterion_08_fourier_round_trips() {
    let mut details = Vec::new();
    let mut ok = true;
    for d in [0, -1, 2] {
        let cfg = VerifyConfig {
            d,
            roundtrip_points: 5,
            ..VerifyConfig::default()
        };
        let rep = verify::roundtrip_suite(&cfg).unwrap();
        ok &= rep.passed;
        let rt = &rep.checks[0];
        details.push(format!("d={d}: {:.3e} (tol {:.0e})", rt.residual, rt.tolerance));
        assert!(rep.checks[1].passed, "Paley-Wiener verdict failed for d={d}");
    }
    report(
        8,
        ok,
        &format!(
            "Fourier round trips G(F f) = f with Paley-Wiener decay of F(bump): {}",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_09_intertwiner_fourier_identity() {
    let cfg = IdentityCheckConfig::default();
    let w = Permutation::from_images(vec![1, 0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut details = Vec::new();
    let mut ok = true;
    for (d, x, mode, tol) in [(0i64, 2_000u64, vec![], 1e-4), (2, 2_000, vec![1], 1e-3)] {
        let ctx = context(d, x);
        let policy = TruncationPolicy {
            norm_bound: x,
            tail_tolerance: 1e12,
        };
        let places = ctx.field.places();
        let bump = TestBump {
            center: BPoint::raw(vec![1.0; places]),
            log_width: 0.5,
            torus_mode: mode,
            form: TorusForm::Phase,
        };
        let bumps = [bump.clone(), bump];
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let s = [
                Complex64::new(cfg.sigma.1, rng.gen_range(-0.4..0.4)),
                Complex64::new(cfg.sigma.0, rng.gen_range(-0.4..0.4)),
            ];
            let res =
                fourier_intertwiner_identity_check(&ctx, &bumps, &w, &s, &cfg, &policy).unwrap();
            worst = worst.max(res);
        }
        ok &= worst <= tol;
        details.push(format!("d={d}: {worst:.3e} (tol {tol:.0e})"));
    }
    report(
        9,
        ok,
        &format!(
            "F(M_w phi)(l,s) = F(phi)(w(l),w(s)) Phi_w(l,s) at n=2, 5 seeded points: {}",
            details.join(", ")
        ),
    );
}

#[test]
fn criterion_10_determinism() {
    let bin = env!("CARGO_BIN_EXE_hecke-shuffle");
    let run = || {
        std::process::Command::new(bin)
            .args(["verify", "all", "--seed", "42", "--d", "0", "--X", "2000"])
            .env_remove("HECKE_SHUFFLE_CACHE")
            .output()
            .expect("spawn verify all")
    };
    let a = run();
    let b = run();
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout;
    report(
        10,
        ok,
        &format!(
            "verify all --seed 42 is byte-identical across two runs ({} bytes, exit {:?}/{:?})",
            a.stdout.len(),
            a.status.code(),
            b.status.code()
        ),
    );
}
