//! Complex Gamma and the completed archimedean factor Γ_K.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numberfield::{NumberField, UnitLattice};

// Lanczos coefficients for g = 607/128, 15 terms (Godfrey). Relative error
// below 1e-13 in the right half-plane for moderate |z|.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

fn lanczos_gamma(z: Complex64) -> Complex64 {
    // valid for Re z >= 0.5
    let zm1 = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(zm1 + 0.5) * (-t).exp() * series
}

/// Γ(s) for complex s, with the reflection formula applied for Re s < 1/2.
///
/// Values in the lower half-plane are computed as conjugates of the upper
/// half-plane so that Γ(conj s) = conj Γ(s) holds bit-exactly.
pub fn complex_gamma(s: Complex64) -> Result<Complex64> {
    if s.im < 0.0 {
        return complex_gamma(s.conj()).map(|v| v.conj());
    }
    if s.im == 0.0 && s.re <= 0.5 {
        let n = s.re.round();
        if n <= 0.0 && (s.re - n).abs() < 1e-12 {
            return Err(Error::PoleAt(n as i64));
        }
    }
    if s.re < 0.5 {
        // Γ(s) Γ(1−s) = π / sin(πs)
        let denom = (PI * s).sin() * complex_gamma(Complex64::new(1.0, 0.0) - s)?;
        Ok(PI / denom)
    } else {
        Ok(lanczos_gamma(s))
    }
}

/// Γ_K(λ*, s) = ∏_{ν real} Γ(s/2 + πi λ^∨_ν) · ∏_{ν complex} Γ(s + πi λ^∨_ν),
/// where λ^∨_ν are the coordinates of Σ λ*_i · dual_basis[i] in R^{r1+r2}.
pub fn gamma_k(
    field: &NumberField,
    lattice: &UnitLattice,
    lambda: &[i64],
    s: Complex64,
) -> Result<Complex64> {
    let vee = lattice.lambda_vee(lambda);
    let mut out = Complex64::new(1.0, 0.0);
    for (nu, &coord) in vee.iter().enumerate() {
        let arg = if nu < field.r1 {
            s / 2.0 + Complex64::new(0.0, PI * coord)
        } else {
            s + Complex64::new(0.0, PI * coord)
        };
        out *= complex_gamma(arg)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{make_field, unit_lattice};

    // Independent oracle: argument shift plus the Stirling asymptotic series.
    // Good to ~1e-14 relative for |s| <= 60.
    fn gamma_oracle(z: Complex64) -> Complex64 {
        if z.re < 0.5 {
            let denom = (PI * z).sin() * gamma_oracle(Complex64::new(1.0, 0.0) - z);
            return PI / denom;
        }
        let mut shift = Complex64::new(1.0, 0.0);
        let mut w = z;
        while w.norm() < 40.0 {
            shift *= w;
            w += 1.0;
        }
        // Bernoulli numbers B_2..B_18 over 2k(2k-1)
        const B: [f64; 9] = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
            43867.0 / 798.0,
        ];
        let mut lg = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
        let w2 = w * w;
        let mut pow = w;
        for (k, b) in B.iter().enumerate() {
            let kk = (k + 1) as f64;
            lg += b / (2.0 * kk * (2.0 * kk - 1.0)) / pow;
            pow *= w2;
        }
        lg.exp() / shift
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn classical_values() {
        let one = complex_gamma(Complex64::new(1.0, 0.0)).unwrap();
        assert!(rel(one, Complex64::new(1.0, 0.0)) < 1e-14);
        let half = complex_gamma(Complex64::new(0.5, 0.0)).unwrap();
        assert!(rel(half, Complex64::new(PI.sqrt(), 0.0)) < 1e-14);
        let g32 = complex_gamma(Complex64::new(1.5, 0.0)).unwrap();
        assert!(rel(g32, Complex64::new(PI.sqrt() / 2.0, 0.0)) < 1e-14);
    }

    #[test]
    fn poles_reported() {
        for n in [0i64, -1, -2, -7] {
            let err = complex_gamma(Complex64::new(n as f64, 0.0)).unwrap_err();
            match err {
                Error::PoleAt(m) => assert_eq!(m, n),
                other => panic!("unexpected error {other:?}"),
            }
        }
    }

    #[test]
    fn matches_oracle_at_3_plus_4i() {
        let z = Complex64::new(3.0, 4.0);
        let got = complex_gamma(z).unwrap();
        assert!(rel(got, gamma_oracle(z)) < 1e-12);
    }

    #[test]
    fn matches_oracle_on_grid() {
        // deterministic grid over |s| <= 50, avoiding the pole line
        let mut worst = 0.0f64;
        for i in 0..20 {
            for j in 0..20 {
                let re = -45.0 + 90.0 * (i as f64 + 0.37) / 20.0;
                let im = -45.0 + 90.0 * (j as f64 + 0.41) / 20.0;
                let z = Complex64::new(re, im);
                if z.norm() > 50.0 || (z.im.abs() < 0.3 && z.re < 0.5) {
                    continue;
                }
                let got = complex_gamma(z).unwrap();
                worst = worst.max(rel(got, gamma_oracle(z)));
            }
        }
        assert!(worst < 1e-12, "worst relative error {worst:e}");
    }

    #[test]
    fn recurrence_on_random_grid() {
        // Γ(s+1) = s Γ(s) to 1e-11 relative on 1000 points in |s| <= 20
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut checked = 0;
        while checked < 1000 {
            let re = -20.0 + 40.0 * next();
            let im = -20.0 + 40.0 * next();
            let s = Complex64::new(re, im);
            if s.norm() > 20.0 || (s.im.abs() < 1e-2 && s.re < 0.6) {
                continue;
            }
            let a = complex_gamma(s + 1.0).unwrap();
            let b = s * complex_gamma(s).unwrap();
            assert!(rel(a, b) < 1e-11, "at {s}: {:e}", rel(a, b));
            checked += 1;
        }
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        for &(re, im) in &[(2.3, 4.5), (-1.7, 0.9), (0.2, 17.0), (10.0, -3.0)] {
            let s = Complex64::new(re, im);
            let a = complex_gamma(s.conj()).unwrap();
            let b = complex_gamma(s).unwrap().conj();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gamma_k_specializations() {
        let q = make_field(0).unwrap();
        let lq = unit_lattice(&q);
        let s = Complex64::new(1.7, 0.3);
        let got = gamma_k(&q, &lq, &[], s).unwrap();
        let want = complex_gamma(s / 2.0).unwrap();
        assert!(rel(got, want) < 1e-14);

        let qi = make_field(-1).unwrap();
        let li = unit_lattice(&qi);
        let got = gamma_k(&qi, &li, &[], s).unwrap();
        let want = complex_gamma(s).unwrap();
        assert!(rel(got, want) < 1e-14);
    }

    #[test]
    fn gamma_k_real_quadratic_with_character() {
        let f = make_field(2).unwrap();
        let l = unit_lattice(&f);
        let s = Complex64::new(2.0, 0.0);
        let got = gamma_k(&f, &l, &[1], s).unwrap();
        let c = l.dual_basis[0][0];
        let a = complex_gamma(Complex64::new(1.0, PI * c)).unwrap();
        let b = complex_gamma(Complex64::new(1.0, -PI * c)).unwrap();
        assert!(rel(got, a * b) < 1e-13);
    }

    #[test]
    fn gamma_k_trivial_character_factorization() {
        for d in [0i64, -1, 2, 5] {
            let f = make_field(d).unwrap();
            let l = unit_lattice(&f);
            let lam = vec![0i64; l.rank];
            let s = Complex64::new(1.3, 0.8);
            let got = gamma_k(&f, &l, &lam, s).unwrap();
            let want = complex_gamma(s / 2.0).unwrap().powu(f.r1 as u32)
                * complex_gamma(s).unwrap().powu(f.r2 as u32);
            assert!(rel(got, want) < 1e-13, "d={d}");
        }
    }
}
