//! Field data for class-number-1 fields of degree at most 2: signature,
//! discriminant, unit lattice, and prime ideals with archimedean generator
//! magnitudes.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::hexfloat;

/// Imaginary quadratic fields with class number 1 (Baker–Heegner–Stark).
pub const IMAGINARY_WHITELIST: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

/// Default real quadratic whitelist. All of these have class number 1 and a
/// fundamental unit small enough for the brute-force search below.
pub const REAL_WHITELIST_DEFAULT: [i64; 12] = [2, 3, 5, 6, 7, 11, 13, 17, 19, 21, 29, 33];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Quadratic { d: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumberField {
    pub kind: FieldKind,
    pub discriminant: i64,
    pub r1: usize,
    pub r2: usize,
}

impl NumberField {
    pub fn degree(&self) -> usize {
        self.r1 + 2 * self.r2
    }

    /// Number of archimedean places.
    pub fn places(&self) -> usize {
        self.r1 + self.r2
    }

    /// Place multiplicities: 1 at real places, 2 at complex places.
    pub fn multiplicities(&self) -> Vec<f64> {
        let mut m = vec![1.0; self.r1];
        m.extend(std::iter::repeat(2.0).take(self.r2));
        m
    }

    pub fn d(&self) -> i64 {
        match self.kind {
            FieldKind::Rational => 0,
            FieldKind::Quadratic { d } => d,
        }
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        while n % k == 0 {
            n /= k;
        }
        k += 1;
    }
    true
}

/// Builds the field for `d` (0 means the rationals) against the default
/// class-number-1 whitelists.
pub fn make_field(d: i64) -> Result<NumberField> {
    make_field_with_whitelist(d, &REAL_WHITELIST_DEFAULT)
}

pub fn make_field_with_whitelist(d: i64, real_whitelist: &[i64]) -> Result<NumberField> {
    if d == 0 {
        return Ok(NumberField {
            kind: FieldKind::Rational,
            discriminant: 1,
            r1: 1,
            r2: 0,
        });
    }
    if d == 1 || !is_squarefree(d) {
        return Err(Error::NotWhitelisted(d));
    }
    let whitelisted = if d < 0 {
        IMAGINARY_WHITELIST.contains(&d)
    } else {
        real_whitelist.contains(&d)
    };
    if !whitelisted {
        return Err(Error::NotWhitelisted(d));
    }
    let discriminant = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let (r1, r2) = if d > 0 { (2, 0) } else { (0, 1) };
    Ok(NumberField {
        kind: FieldKind::Quadratic { d },
        discriminant,
        r1,
        r2,
    })
}

/// The unit lattice Λ = O_K^× in the trace-zero hyperplane H, with its dual
/// basis and regulator. Rank is r1 + r2 − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitLattice {
    pub rank: usize,
    /// Log-absolute-value embeddings of fundamental units, as vectors in H.
    pub basis: Vec<Vec<f64>>,
    /// Vectors λ^∨ in H with ⟨dual[i], basis[j]⟩ = δ_ij under the dot product.
    pub dual_basis: Vec<Vec<f64>>,
    pub regulator: f64,
    /// Place multiplicities (1 real, 2 complex), defining H and |·|_B.
    pub mults: Vec<f64>,
}

impl UnitLattice {
    /// Orthogonal projection of a log vector onto the hyperplane H
    /// (kernel of the multiplicity-weighted coordinate sum).
    pub fn project_h(&self, y: &[f64]) -> Vec<f64> {
        let m = &self.mults;
        let mm: f64 = m.iter().map(|x| x * x).sum();
        let my: f64 = m.iter().zip(y).map(|(a, b)| a * b).sum();
        y.iter()
            .zip(m)
            .map(|(yi, mi)| yi - my / mm * mi)
            .collect()
    }

    /// λ^∨ = Σ λ*_i · dual_basis[i], a vector in H ⊂ R^{r1+r2}.
    pub fn lambda_vee(&self, lambda: &[i64]) -> Vec<f64> {
        assert_eq!(lambda.len(), self.rank, "λ* length must equal lattice rank");
        let places = self.mults.len();
        let mut v = vec![0.0; places];
        for (li, dual) in lambda.iter().zip(&self.dual_basis) {
            for (vi, di) in v.iter_mut().zip(dual) {
                *vi += *li as f64 * di;
            }
        }
        v
    }

    /// ⟨λ*, y⟩ for y ∈ R^{r1+r2}: project onto H, then pair with λ^∨.
    pub fn pairing(&self, lambda: &[i64], y: &[f64]) -> f64 {
        let v = self.lambda_vee(lambda);
        let p = self.project_h(y);
        v.iter().zip(&p).map(|(a, b)| a * b).sum()
    }

    /// Coordinates of the H-projection of `y` in the lattice basis.
    pub fn lattice_coords(&self, y: &[f64]) -> Vec<f64> {
        let p = self.project_h(y);
        self.dual_basis
            .iter()
            .map(|d| d.iter().zip(&p).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn isqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    if r * r == n {
        Some(r)
    } else {
        None
    }
}

/// Fundamental unit ε > 1 of the real quadratic field Q(√d), returned as
/// (a, b, den) with ε = (a + b√d)/den, den ∈ {1, 2}.
fn fundamental_unit(d: i64) -> (i128, i128, i128) {
    const BOUND: i128 = 1_000_000;
    let d = d as i128;
    let half = d.rem_euclid(4) == 1;
    for b in 1..=BOUND {
        // Half-integer units (a + b√d)/2 need a² − db² = ±4 with a ≡ b (mod 2).
        if half {
            for sign in [-4i128, 4] {
                if let Some(a) = isqrt_exact(d * b * b + sign) {
                    if (a - b).rem_euclid(2) == 0 {
                        return (a, b, 2);
                    }
                }
            }
        }
        for sign in [-1i128, 1] {
            if let Some(a) = isqrt_exact(d * b * b + sign) {
                return (a, b, 1);
            }
        }
    }
    panic!("fundamental unit search for d = {d} exhausted coefficient bound {BOUND}");
}

/// Unit lattice of `field`. Rank 0 for Q and imaginary quadratic fields.
pub fn unit_lattice(field: &NumberField) -> UnitLattice {
    let mults = field.multiplicities();
    match field.kind {
        FieldKind::Quadratic { d } if d > 0 => {
            let (a, b, den) = fundamental_unit(d);
            let sq = (d as f64).sqrt();
            let eps = (a as f64 + b as f64 * sq) / den as f64;
            let log_eps = eps.ln();
            let basis = vec![vec![log_eps, -log_eps]];
            let dual = vec![vec![0.5 / log_eps, -0.5 / log_eps]];
            UnitLattice {
                rank: 1,
                basis,
                dual_basis: dual,
                regulator: log_eps,
                mults,
            }
        }
        _ => UnitLattice {
            rank: 0,
            basis: Vec::new(),
            dual_basis: Vec::new(),
            regulator: 1.0,
            mults,
        },
    }
}

/// A prime ideal of O_K, carried as its rational prime, residue degree,
/// norm, and the archimedean magnitudes of a fixed generator (reduced into
/// the fundamental domain of the unit lattice).
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub f: u32,
    pub norm: u64,
    pub magnitudes: Vec<f64>,
}

fn modpow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Kronecker symbol (disc / p) for a rational prime p.
fn kronecker(disc: i64, p: u64) -> i64 {
    if p == 2 {
        return match disc.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let a = disc.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if modpow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn rational_primes_up_to(x: u64) -> Vec<u64> {
    if x < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; (x + 1) as usize];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2u64;
    while p * p <= x {
        if sieve[p as usize] {
            let mut q = p * p;
            while q <= x {
                sieve[q as usize] = false;
                q += p;
            }
        }
        p += 1;
    }
    (2..=x).filter(|&n| sieve[n as usize]).collect()
}

/// Reduce generator magnitudes by a unit power so the Λ-coordinate of the
/// H-projection of the log vector lands in [0, 1).
fn reduce_magnitudes(lattice: &UnitLattice, mags: &mut [f64]) {
    if lattice.rank == 0 {
        return;
    }
    let logs: Vec<f64> = mags.iter().map(|m| m.ln()).collect();
    let coords = lattice.lattice_coords(&logs);
    for (i, c) in coords.iter().enumerate() {
        let k = c.floor();
        if k != 0.0 {
            for (m, v) in mags.iter_mut().zip(&lattice.basis[i]) {
                *m *= (-k * v).exp();
            }
        }
    }
}

/// Search for a generator of a prime ideal of norm p over the quadratic
/// field with parameter d. Returns the embedding magnitudes of the two
/// conjugates (equal ideals when ramified).
fn quadratic_generator(d: i64, p: u64, eps_hint: f64, bound: i64) -> Result<(Vec<f64>, Vec<f64>)> {
    let sq = (d.abs() as f64).sqrt();
    let half = d.rem_euclid(4) == 1;
    if d < 0 {
        // norm (a² + |d|b²)/den² = p
        for den in if half { [2i64, 1] } else { [1i64, 1] } {
            let target = p as i128 * (den * den) as i128;
            let ad = -(d as i128);
            let bmax = ((target / ad) as f64).sqrt() as i128 + 1;
            for b in 0..=bmax {
                if let Some(a) = isqrt_exact(target - ad * b * b) {
                    if den == 2 && (a - b).rem_euclid(2) != 0 {
                        continue;
                    }
                    let _ = a;
                    let mag = (p as f64).sqrt();
                    return Ok((vec![mag], vec![mag]));
                }
            }
            if !half {
                break;
            }
        }
        Err(Error::GeneratorSearchFailed { p, bound })
    } else {
        // |a² − db²|/den² = p
        let bmax_f = ((p as f64) * (eps_hint + 2.0) / d as f64).sqrt().ceil() as i64 + 2;
        let bmax = bmax_f.min(bound);
        for den in if half { [2i64, 1] } else { [1i64, 1] } {
            let target = p as i128 * (den * den) as i128;
            for b in 0..=(bmax as i128 * den as i128) {
                for sign in [1i128, -1] {
                    if let Some(a) = isqrt_exact(sign * target + d as i128 * b * b) {
                        if den == 2 && (a - b).rem_euclid(2) != 0 {
                            continue;
                        }
                        let denf = den as f64;
                        let v1 = ((a as f64 + b as f64 * sq) / denf).abs();
                        let v2 = ((a as f64 - b as f64 * sq) / denf).abs();
                        if v1 == 0.0 || v2 == 0.0 {
                            continue;
                        }
                        return Ok((vec![v1, v2], vec![v2, v1]));
                    }
                }
            }
            if !half {
                break;
            }
        }
        Err(Error::GeneratorSearchFailed { p, bound })
    }
}

/// All prime ideals of norm ≤ X, each exactly once, deterministically
/// ordered by (norm, magnitude vector).
pub fn prime_ideals_up_to(
    field: &NumberField,
    lattice: &UnitLattice,
    x: u64,
) -> Result<Vec<PrimeIdeal>> {
    if x < 2 {
        return Err(Error::DomainError("norm bound X must be at least 2".into()));
    }
    const SEARCH_BOUND: i64 = 1_000_000;
    let mut out = Vec::new();
    let eps_hint = if lattice.rank > 0 {
        lattice.regulator.exp()
    } else {
        1.0
    };
    for p in rational_primes_up_to(x) {
        match field.kind {
            FieldKind::Rational => {
                out.push(PrimeIdeal {
                    p,
                    f: 1,
                    norm: p,
                    magnitudes: vec![p as f64],
                });
            }
            FieldKind::Quadratic { d } => {
                let k = kronecker(field.discriminant, p);
                if k == -1 {
                    if p * p <= x {
                        let mags = if d < 0 {
                            vec![p as f64]
                        } else {
                            vec![p as f64, p as f64]
                        };
                        out.push(PrimeIdeal {
                            p,
                            f: 2,
                            norm: p * p,
                            magnitudes: mags,
                        });
                    }
                } else {
                    let (mut m1, mut m2) = quadratic_generator(d, p, eps_hint, SEARCH_BOUND)?;
                    reduce_magnitudes(lattice, &mut m1);
                    reduce_magnitudes(lattice, &mut m2);
                    out.push(PrimeIdeal {
                        p,
                        f: 1,
                        norm: p,
                        magnitudes: m1,
                    });
                    if k == 1 {
                        out.push(PrimeIdeal {
                            p,
                            f: 1,
                            norm: p,
                            magnitudes: m2,
                        });
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| {
        a.norm
            .cmp(&b.norm)
            .then_with(|| a.magnitudes.partial_cmp(&b.magnitudes).unwrap())
    });
    Ok(out)
}

const CACHE_VERSION: u32 = 1;

pub fn cache_file_name(d: i64, x: u64) -> String {
    format!("primes_d{d}_X{x}.txt")
}

/// Write the prime table in the line format
/// `p f norm mag_1 ... mag_k` with hexadecimal floating-point magnitudes.
pub fn write_prime_cache(path: &Path, d: i64, x: u64, primes: &[PrimeIdeal]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::CacheIo(e.to_string()))?;
    writeln!(f, "# hecke-shuffle primes d={d} X={x} version={CACHE_VERSION}")
        .map_err(|e| Error::CacheIo(e.to_string()))?;
    for pr in primes {
        let mags: Vec<String> = pr.magnitudes.iter().map(|m| hexfloat::format(*m)).collect();
        writeln!(f, "{} {} {} {}", pr.p, pr.f, pr.norm, mags.join(" "))
            .map_err(|e| Error::CacheIo(e.to_string()))?;
    }
    Ok(())
}

pub fn read_prime_cache(path: &Path, d: i64, x: u64) -> Result<Vec<PrimeIdeal>> {
    let f = std::fs::File::open(path).map_err(|e| Error::CacheIo(e.to_string()))?;
    let mut lines = std::io::BufReader::new(f).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::CacheIo("empty cache file".into()))?
        .map_err(|e| Error::CacheIo(e.to_string()))?;
    let expected = format!("# hecke-shuffle primes d={d} X={x} version={CACHE_VERSION}");
    if header != expected {
        return Err(Error::CacheIo(format!(
            "cache header mismatch: got `{header}`, expected `{expected}`"
        )));
    }
    let mut out = Vec::new();
    for line in lines {
        let line = line.map_err(|e| Error::CacheIo(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(' ');
        let parse_int = |s: Option<&str>| -> Result<u64> {
            s.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::CacheIo(format!("bad cache line: {line}")))
        };
        let p = parse_int(it.next())?;
        let f_deg = parse_int(it.next())? as u32;
        let norm = parse_int(it.next())?;
        let mut mags = Vec::new();
        for tok in it {
            mags.push(
                hexfloat::parse(tok)
                    .ok_or_else(|| Error::CacheIo(format!("bad hex float `{tok}`")))?,
            );
        }
        out.push(PrimeIdeal {
            p,
            f: f_deg,
            norm,
            magnitudes: mags,
        });
    }
    Ok(out)
}

/// Load the prime table from `cache_dir` if present, otherwise compute and
/// persist it.
pub fn load_or_compute_primes(
    field: &NumberField,
    lattice: &UnitLattice,
    x: u64,
    cache_dir: Option<&Path>,
) -> Result<Vec<PrimeIdeal>> {
    let d = field.d();
    if let Some(dir) = cache_dir {
        let path = dir.join(cache_file_name(d, x));
        if path.exists() {
            if let Ok(primes) = read_prime_cache(&path, d, x) {
                return Ok(primes);
            }
        }
        let primes = prime_ideals_up_to(field, lattice, x)?;
        std::fs::create_dir_all(dir).map_err(|e| Error::CacheIo(e.to_string()))?;
        write_prime_cache(&path, d, x, &primes)?;
        Ok(primes)
    } else {
        prime_ideals_up_to(field, lattice, x)
    }
}

/// One ideal in a truncated multiplicative enumeration: its norm and the
/// Λ*-basis pairing coordinates of the log magnitudes of a generator.
#[derive(Debug, Clone)]
pub struct IdealEntry {
    pub norm: u64,
    pub theta: Vec<f64>,
}

/// Enumerate all (nonzero) ideals of norm ≤ X multiplicatively from the
/// prime table. Includes the unit ideal.
pub fn enumerate_ideals(
    primes: &[PrimeIdeal],
    lattice: &UnitLattice,
    x: u64,
) -> Vec<IdealEntry> {
    let rank = lattice.rank;
    let coords: Vec<Vec<f64>> = primes
        .iter()
        .map(|pr| {
            let logs: Vec<f64> = pr.magnitudes.iter().map(|m| m.ln()).collect();
            lattice.lattice_coords(&logs)
        })
        .collect();
    let mut out = Vec::new();
    let mut theta = vec![0.0; rank];
    fn rec(
        primes: &[PrimeIdeal],
        coords: &[Vec<f64>],
        idx: usize,
        norm: u64,
        theta: &mut Vec<f64>,
        x: u64,
        out: &mut Vec<IdealEntry>,
    ) {
        if idx == primes.len() {
            out.push(IdealEntry {
                norm,
                theta: theta.clone(),
            });
            return;
        }
        // exponent 0
        rec(primes, coords, idx + 1, norm, theta, x, out);
        let pnorm = primes[idx].norm;
        let mut n = norm;
        let mut k = 0u32;
        while n <= x / pnorm {
            n *= pnorm;
            k += 1;
            for (t, c) in theta.iter_mut().zip(&coords[idx]) {
                *t += c;
            }
            rec(primes, coords, idx + 1, n, theta, x, out);
        }
        for (t, c) in theta.iter_mut().zip(&coords[idx]) {
            *t -= k as f64 * c;
        }
    }
    rec(primes, &coords, 0, 1, &mut theta, x, &mut out);
    out.sort_by(|a, b| {
        a.norm
            .cmp(&b.norm)
            .then_with(|| a.theta.partial_cmp(&b.theta).unwrap())
    });
    out
}
