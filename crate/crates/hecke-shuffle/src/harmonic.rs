//! The space B = (R^{r1+r2−1}/Λ) × R₊^×: norm, characters,
//! fundamental-domain reduction, the Fourier transform 𝓕 and its inverse
//! 𝓖, and the Iwasawa Jacobian δ.
//!
//! All quadrature happens in log coordinates y = log a, split as
//! y = Σ θ_i v_i + β·u with v_i the unit-lattice basis, u = m/(m·m)
//! (m the place multiplicities) and β = log|a|_B. The Haar measure
//! dx/|x|_B is Lebesgue in y, which is J·dθ·dβ with
//! J = |det[v₁, …, v_rank, u]|.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numberfield::{NumberField, UnitLattice};
use crate::quadrature::{gauss_legendre_cached, trapezoid_periodic};

/// A point of B, one positive coordinate per archimedean place.
#[derive(Debug, Clone, PartialEq)]
pub struct BPoint {
    pub coords: Vec<f64>,
    pub reduced: bool,
}

impl BPoint {
    pub fn raw(coords: Vec<f64>) -> Self {
        BPoint {
            coords,
            reduced: false,
        }
    }
}

/// |a|_B = ∏_real a_i ∏_complex a_j² (complex norms squared).
pub fn norm_b(field: &NumberField, a: &BPoint) -> f64 {
    field
        .multiplicities()
        .iter()
        .zip(&a.coords)
        .map(|(m, c)| c.powf(*m))
        .product()
}

/// Λ-coordinates θ of the H-projection of log a, and β = log|a|_B.
pub fn theta_beta(lattice: &UnitLattice, a: &BPoint) -> (Vec<f64>, f64) {
    let y: Vec<f64> = a.coords.iter().map(|c| c.ln()).collect();
    let theta = lattice.lattice_coords(&y);
    let beta: f64 = lattice.mults.iter().zip(&y).map(|(m, yi)| m * yi).sum();
    (theta, beta)
}

/// Multiply by a unit power so the Λ-coordinates land in [0,1);
/// |a|_B is unchanged because the unit logs lie in H.
pub fn reduce(lattice: &UnitLattice, raw: &[f64]) -> BPoint {
    let y: Vec<f64> = raw.iter().map(|c| c.ln()).collect();
    let theta = lattice.lattice_coords(&y);
    let mut shifted = y;
    for (t, basis) in theta.iter().zip(&lattice.basis) {
        let k = t.floor();
        for (yi, bi) in shifted.iter_mut().zip(basis) {
            *yi -= k * bi;
        }
    }
    BPoint {
        coords: shifted.iter().map(|yi| yi.exp()).collect(),
        reduced: true,
    }
}

/// 𝓒(λ*, s)(a) = |a|_B^s · exp(2πi⟨λ*, log a⟩).
pub fn character(lattice: &UnitLattice, lambda: &[i64], s: Complex64, a: &BPoint) -> Complex64 {
    let (theta, beta) = theta_beta(lattice, a);
    let phase: f64 = lambda.iter().zip(&theta).map(|(l, t)| *l as f64 * t).sum();
    (s * beta).exp() * Complex64::from_polar(1.0, 2.0 * PI * phase)
}

/// Iwasawa Jacobian δ(a) = ∏_{i<j} |a_j|_B / |a_i|_B.
pub fn delta(field: &NumberField, a: &[BPoint]) -> f64 {
    let norms: Vec<f64> = a.iter().map(|p| norm_b(field, p)).collect();
    let mut prod = 1.0;
    for i in 0..norms.len() {
        for j in i + 1..norms.len() {
            prod *= norms[j] / norms[i];
        }
    }
    prod
}

/// J = |det[v₁, …, v_rank, m/(m·m)]|: the Jacobian relating dθ·dβ to
/// Lebesgue measure in log coordinates.
pub fn measure_jacobian(lattice: &UnitLattice) -> f64 {
    let k = lattice.mults.len();
    let mm: f64 = lattice.mults.iter().map(|m| m * m).sum();
    let u: Vec<f64> = lattice.mults.iter().map(|m| m / mm).collect();
    let mut cols: Vec<&[f64]> = lattice.basis.iter().map(|b| b.as_slice()).collect();
    cols.push(&u);
    debug_assert_eq!(cols.len(), k);
    match k {
        1 => cols[0][0].abs(),
        2 => (cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0]).abs(),
        _ => unreachable!("degree ≤ 2 fields have at most 2 places"),
    }
}

/// Torus profile of a test bump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusForm {
    /// exp(2πi⟨mode, θ − θ_c⟩): a single Fourier mode (complex-valued).
    Phase,
    /// cos(2π⟨mode, θ − θ_c⟩): real-valued.
    Cosine,
}

/// A smooth compactly supported test function on one copy of B:
/// Gaussian in β = log|a|_B (truncated at half-width 8·logWidth, where it
/// has decayed to e^{−32}) times a trigonometric factor on the torus.
#[derive(Debug, Clone)]
pub struct TestBump {
    pub center: BPoint,
    pub log_width: f64,
    pub torus_mode: Vec<i64>,
    pub form: TorusForm,
}

impl TestBump {
    pub const SUPPORT_HALF_WIDTHS: f64 = 8.0;

    pub fn support(&self, lattice: &UnitLattice) -> (f64, f64) {
        let (_, bc) = theta_beta(lattice, &self.center);
        let h = Self::SUPPORT_HALF_WIDTHS * self.log_width;
        (bc - h, bc + h)
    }

    pub fn value(&self, lattice: &UnitLattice, a: &BPoint) -> Complex64 {
        let (theta, beta) = theta_beta(lattice, a);
        let (tc, bc) = theta_beta(lattice, &self.center);
        let u = beta - bc;
        if u.abs() > Self::SUPPORT_HALF_WIDTHS * self.log_width {
            return Complex64::new(0.0, 0.0);
        }
        let radial = (-u * u / (2.0 * self.log_width * self.log_width)).exp();
        let phase: f64 = self
            .torus_mode
            .iter()
            .zip(theta.iter().zip(&tc))
            .map(|(m, (t, c))| *m as f64 * (t - c))
            .sum();
        let angular = match self.form {
            TorusForm::Phase => Complex64::from_polar(1.0, 2.0 * PI * phase),
            TorusForm::Cosine => Complex64::new((2.0 * PI * phase).cos(), 0.0),
        };
        radial * angular
    }
}

/// Default quadrature grid for 𝓕 (per the module's design: torus step
/// 1/64, 128 radial Gauss points, doubled on demand by the guard).
#[derive(Debug, Clone, Copy)]
pub struct FourierGrid {
    pub torus_points: usize,
    pub radial_points: usize,
    pub tolerance: f64,
}

impl Default for FourierGrid {
    fn default() -> Self {
        FourierGrid {
            torus_points: 64,
            radial_points: 128,
            tolerance: 1e-9,
        }
    }
}

fn fourier_once<F>(
    lattice: &UnitLattice,
    f: &F,
    support: (f64, f64),
    lambda: &[i64],
    s: Complex64,
    torus_n: usize,
    radial_n: usize,
) -> Complex64
where
    F: Fn(&[f64], f64) -> Complex64,
{
    // ∫_{[0,1)^rank} dθ ∫ dβ f(θ, β) e^{sβ} e^{2πi⟨λ*,θ⟩}, times J
    let j = measure_jacobian(lattice);
    let rule = gauss_legendre_cached(radial_n);
    let (nodes, weights) = (&rule.0, &rule.1);
    let mid = 0.5 * (support.0 + support.1);
    let half = 0.5 * (support.1 - support.0);
    let radial_for = |theta: &[f64]| {
        let mut sum = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let beta = mid + half * x;
            sum += *w * f(theta, beta) * (s * beta).exp();
        }
        sum * half
    };
    match lattice.rank {
        0 => j * radial_for(&[]),
        1 => {
            let l = lambda[0] as f64;
            j * trapezoid_periodic(
                |t| radial_for(&[t]) * Complex64::from_polar(1.0, 2.0 * PI * l * t),
                torus_n,
            )
        }
        _ => unreachable!("degree ≤ 2 fields have unit rank ≤ 1"),
    }
}

/// 𝓕 on one copy of B for an arbitrary function given in (θ, β)
/// coordinates with the stated β-support, with a grid-doubling guard.
pub fn fourier_fn<F>(
    lattice: &UnitLattice,
    f: &F,
    support: (f64, f64),
    lambda: &[i64],
    s: Complex64,
    grid: &FourierGrid,
) -> Result<Complex64>
where
    F: Fn(&[f64], f64) -> Complex64,
{
    if lambda.len() != lattice.rank {
        return Err(Error::PreconditionViolated(format!(
            "λ* length {} ≠ unit rank {}",
            lambda.len(),
            lattice.rank
        )));
    }
    let mut tn = grid.torus_points;
    let mut rn = grid.radial_points;
    let mut prev = fourier_once(lattice, f, support, lambda, s, tn, rn);
    for _ in 0..3 {
        tn *= 2;
        rn *= 2;
        let cur = fourier_once(lattice, f, support, lambda, s, tn, rn);
        if (cur - prev).norm() <= grid.tolerance * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged(grid.tolerance))
}

fn bump_fourier_once(
    lattice: &UnitLattice,
    bump: &TestBump,
    lambda: &[i64],
    s: Complex64,
    torus_n: usize,
    radial_n: usize,
) -> Complex64 {
    // a TestBump is separable in (θ, β), so 𝓕 factors into a torus
    // integral times a radial integral
    let j = measure_jacobian(lattice);
    let (tc, bc) = theta_beta(lattice, &bump.center);
    let w = bump.log_width;
    let h = TestBump::SUPPORT_HALF_WIDTHS * w;
    let radial = crate::quadrature::integrate_gl(
        |beta| {
            let u = beta - bc;
            (-u * u / (2.0 * w * w)).exp() * (s * beta).exp()
        },
        bc - h,
        bc + h,
        radial_n,
    );
    let torus = match lattice.rank {
        0 => Complex64::new(1.0, 0.0),
        1 => {
            let m = bump.torus_mode[0] as f64;
            let l = lambda[0] as f64;
            let form = bump.form;
            let tc0 = tc[0];
            trapezoid_periodic(
                |t| {
                    let angular = match form {
                        TorusForm::Phase => Complex64::from_polar(1.0, 2.0 * PI * m * (t - tc0)),
                        TorusForm::Cosine => {
                            Complex64::new((2.0 * PI * m * (t - tc0)).cos(), 0.0)
                        }
                    };
                    angular * Complex64::from_polar(1.0, 2.0 * PI * l * t)
                },
                torus_n,
            )
        }
        _ => unreachable!("degree ≤ 2 fields have unit rank ≤ 1"),
    };
    j * torus * radial
}

/// 𝓕 of a tensor product of test bumps on B^n: the fundamental domain and
/// measure factor over the copies, so the transform is the product of the
/// per-copy transforms.
pub fn fourier(
    lattice: &UnitLattice,
    bumps: &[TestBump],
    lambda: &[Vec<i64>],
    s: &[Complex64],
    grid: &FourierGrid,
) -> Result<Complex64> {
    if bumps.len() != lambda.len() || bumps.len() != s.len() {
        return Err(Error::PreconditionViolated(
            "bump/λ*/s arity mismatch".to_string(),
        ));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for ((bump, lam), si) in bumps.iter().zip(lambda).zip(s) {
        if lam.len() != lattice.rank {
            return Err(Error::PreconditionViolated(format!(
                "λ* length {} ≠ unit rank {}",
                lam.len(),
                lattice.rank
            )));
        }
        let mut tn = grid.torus_points;
        let mut rn = grid.radial_points;
        let mut prev = bump_fourier_once(lattice, bump, lam, *si, tn, rn);
        let mut ok = false;
        for _ in 0..3 {
            tn *= 2;
            rn *= 2;
            let cur = bump_fourier_once(lattice, bump, lam, *si, tn, rn);
            let converged = (cur - prev).norm() <= grid.tolerance * cur.norm().max(1.0);
            prev = cur;
            if converged {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::QuadratureNotConverged(grid.tolerance));
        }
        prod *= prev;
    }
    Ok(prod)
}

/// Truncation parameters for 𝓖.
#[derive(Debug, Clone, Copy)]
pub struct InverseTransformConfig {
    /// Real part of the integration line (per copy).
    pub sigma0: f64,
    /// λ*-sum truncated to coordinates in [−λ*Bound, λ*Bound].
    pub lambda_bound: i64,
    /// Line integral truncated to |Im s| ≤ imagBound.
    pub imag_bound: f64,
    /// Trapezoid step along the line.
    pub grid_step: f64,
}

impl Default for InverseTransformConfig {
    fn default() -> Self {
        InverseTransformConfig {
            sigma0: 0.0,
            lambda_bound: 8,
            imag_bound: 16.0,
            grid_step: 0.125,
        }
    }
}

/// 𝓖 on B^n (n ≤ 2): truncated λ*-sum and vertical-line quadrature of
///   (1/J)^n (1/2πi)^n Σ_{λ*} ∫ F(λ*, s) |r|_B^{−s} r^{−2πiλ*} ds.
///
/// The normalization inverts 𝓕 exactly: one factor 1/(2πi) per
/// integration line and one factor 1/J per copy of B.
pub fn inverse_fourier<F>(
    lattice: &UnitLattice,
    f: &F,
    a: &[BPoint],
    cfg: &InverseTransformConfig,
) -> Result<Complex64>
where
    F: Fn(&[Vec<i64>], &[Complex64]) -> Result<Complex64>,
{
    let n = a.len();
    if n == 0 || n > 2 {
        return Err(Error::PreconditionViolated(format!(
            "inverse transform implemented for 1 ≤ n ≤ 2, got {n}"
        )));
    }
    let rank = lattice.rank;
    let j = measure_jacobian(lattice);
    let coords: Vec<(Vec<f64>, f64)> = a.iter().map(|p| theta_beta(lattice, p)).collect();

    // enumerate λ* tuples: rank·n integer coordinates in [−L, L]
    let dims = rank * n;
    let l = cfg.lambda_bound;
    let side = (2 * l + 1) as usize;
    let count = side.pow(dims as u32);

    let steps = (cfg.imag_bound / cfg.grid_step).ceil() as i64;
    let t_of = |k: i64| k as f64 * cfg.grid_step;

    let mut total = Complex64::new(0.0, 0.0);
    let mut boundary = 0.0f64; // magnitude collected on truncation edges
    for flat in 0..count {
        let mut rem = flat;
        let mut lam: Vec<Vec<i64>> = Vec::with_capacity(n);
        let mut on_lambda_edge = false;
        for _ in 0..n {
            let mut per = Vec::with_capacity(rank);
            for _ in 0..rank {
                let c = (rem % side) as i64 - l;
                rem /= side;
                if c.abs() == l && l > 0 {
                    on_lambda_edge = true;
                }
                per.push(c);
            }
            lam.push(per);
        }
        // torus phase ∏ exp(−2πi⟨λ*_c, θ_c⟩)
        let mut phase = 0.0;
        for (per, (theta, _)) in lam.iter().zip(&coords) {
            phase -= per
                .iter()
                .zip(theta)
                .map(|(li, t)| *li as f64 * t)
                .sum::<f64>();
        }
        let torus = Complex64::from_polar(1.0, 2.0 * PI * phase);

        // line integral(s): trapezoid in t over [−T, T] per copy
        let mut line = Complex64::new(0.0, 0.0);
        let mut edge_mag = 0.0f64;
        if n == 1 {
            for k in -steps..=steps {
                let s = Complex64::new(cfg.sigma0, t_of(k));
                let v = f(&lam, &[s])? * (-s * coords[0].1).exp();
                line += v;
                if k.abs() == steps {
                    edge_mag = edge_mag.max(v.norm());
                }
            }
            line *= cfg.grid_step / (2.0 * PI);
        } else {
            for k1 in -steps..=steps {
                let s1 = Complex64::new(cfg.sigma0, t_of(k1));
                for k2 in -steps..=steps {
                    let s2 = Complex64::new(cfg.sigma0, t_of(k2));
                    let v = f(&lam, &[s1, s2])?
                        * (-s1 * coords[0].1 - s2 * coords[1].1).exp();
                    line += v;
                    if k1.abs() == steps || k2.abs() == steps {
                        edge_mag = edge_mag.max(v.norm());
                    }
                }
            }
            line *= (cfg.grid_step / (2.0 * PI)).powi(2);
        }
        let term = torus * line / j.powi(n as i32);
        total += term;
        if on_lambda_edge {
            boundary += term.norm();
        }
        boundary += edge_mag;
    }
    if boundary > 1e-5 * total.norm().max(1e-9) {
        return Err(Error::TruncationNotConverged(boundary));
    }
    Ok(total)
}
