//! The shuffle algebra: permutation combinatorics, the kernels Φ_{K,w},
//! lazy evaluator expression trees, the shuffle product, and the
//! ch-symmetrization map.

use num_complex::Complex64;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::lfunction::{phi_k, LContext, SpectralPoint, TruncationPolicy};

/// A permutation of {0, …, n−1}, stored in one-line notation:
/// `images[i] = w(i)`. Permutations act on coordinate tuples by
/// `w(s)_i = s_{w^{-1}(i)}`, so that `(w∘w')(s) = w(w'(s))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::PreconditionViolated(format!(
                    "not a permutation: {images:?}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// self ∘ other: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n(), other.n());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &wi) in self.images.iter().enumerate() {
            inv[wi] = i;
        }
        Permutation { images: inv }
    }

    /// Inversion set I_w = {(i, j) : i < j, w(i) > w(j)}.
    pub fn inversion_set(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut inv = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    inv.push((i, j));
                }
            }
        }
        inv
    }

    pub fn length(&self) -> usize {
        self.inversion_set().len()
    }

    /// Coordinate action: `w(v)_i = v_{w^{-1}(i)}`.
    pub fn act<T: Clone>(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.n());
        let mut out = v.to_vec();
        for (i, &wi) in self.images.iter().enumerate() {
            out[wi] = v[i].clone();
        }
        out
    }

    /// Block sum w × w' acting on the first m and last n coordinates.
    pub fn block_sum(&self, other: &Permutation) -> Permutation {
        let m = self.n();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|&i| i + m));
        Permutation { images }
    }

    /// All n! permutations, in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = (0..n).collect::<Vec<_>>();
        loop {
            out.push(Permutation {
                images: cur.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }
}

/// Sh(m, n): permutations of {0, …, m+n−1} increasing on the first m and
/// on the last n positions, in lexicographic order of one-line notation.
pub fn enumerate_shuffles(m: usize, n: usize) -> Vec<Permutation> {
    let total = m + n;
    let mut out = Vec::new();
    // choose the image positions of the first block
    let mut comb: Vec<usize> = (0..m).collect();
    loop {
        let in_first = {
            let mut mask = vec![false; total];
            for &c in &comb {
                mask[c] = true;
            }
            mask
        };
        let mut images = vec![0; total];
        let mut a = 0;
        let mut b = 0;
        for pos in 0..total {
            if in_first[pos] {
                images[a] = pos;
                a += 1;
            } else {
                images[m + b] = pos;
                b += 1;
            }
        }
        out.push(Permutation { images });
        if m == 0 {
            break;
        }
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if comb[i] < total - (m - i) {
                comb[i] += 1;
                for j in i + 1..m {
                    comb[j] = comb[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                comb.clear();
                break;
            }
        }
        if comb.is_empty() {
            break;
        }
    }
    out.sort_by(|a, b| a.images.cmp(&b.images));
    out
}

/// Decompose σ ∈ Perm_{m+n} uniquely as σ = (w₁ × w₂) ∘ w with
/// w₁ ∈ Perm_m, w₂ ∈ Perm_n and w⁻¹ ∈ Sh(m, n).
pub fn decompose(sigma: &Permutation, m: usize, n: usize) -> (Permutation, Permutation, Permutation) {
    assert_eq!(sigma.n(), m + n);
    let mut w = vec![0usize; m + n];
    let mut w1 = Vec::with_capacity(m);
    let mut w2 = Vec::with_capacity(n);
    let mut a = 0;
    let mut b = 0;
    for i in 0..m + n {
        if sigma.images[i] < m {
            w[i] = a;
            w1.push(sigma.images[i]);
            a += 1;
        } else {
            w[i] = m + b;
            w2.push(sigma.images[i] - m);
            b += 1;
        }
    }
    (
        Permutation { images: w1 },
        Permutation { images: w2 },
        Permutation { images: w },
    )
}

/// Φ_{K,w}(z) = ∏_{(i,j) ∈ I_w} Φ_K(λ*_j − λ*_i, s_j − s_i).
pub fn phi_w(
    ctx: &LContext,
    w: &Permutation,
    z: &[SpectralPoint],
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    debug_assert_eq!(w.n(), z.len());
    let mut prod = Complex64::new(1.0, 0.0);
    for (i, j) in w.inversion_set() {
        let lambda: Vec<i64> = z[j]
            .lambda
            .iter()
            .zip(&z[i].lambda)
            .map(|(a, b)| a - b)
            .collect();
        let diff = SpectralPoint::new(lambda, z[j].s - z[i].s);
        prod *= phi_k(ctx, &diff, policy)?.value;
    }
    Ok(prod)
}

/// Genericity guard: all pairwise Re(s_i − s_j) stay away from {0, ±1}.
pub fn is_generic(z: &[SpectralPoint], margin: f64) -> bool {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = z[i].s - z[j].s;
            if d.norm() < margin || (d - 1.0).norm() < margin || (d + 1.0).norm() < margin {
                return false;
            }
        }
    }
    true
}

pub type GenFn = dyn Fn(&SpectralPoint) -> Result<Complex64>;

/// A lazy element of the shuffle algebra: an expression tree over named
/// generators (arity-1 evaluators), combined by the shuffle product.
#[derive(Clone)]
pub enum Evaluator {
    /// The unit (arity 0), evaluating to 1 on the empty tuple.
    One,
    Gen { id: String, f: Rc<GenFn> },
    Shuffle(Box<Evaluator>, Box<Evaluator>),
}

impl Evaluator {
    pub fn one() -> Self {
        Evaluator::One
    }

    pub fn generator<F>(id: &str, f: F) -> Self
    where
        F: Fn(&SpectralPoint) -> Result<Complex64> + 'static,
    {
        Evaluator::Gen {
            id: id.to_string(),
            f: Rc::new(f),
        }
    }

    pub fn shuffle(a: Evaluator, b: Evaluator) -> Self {
        Evaluator::Shuffle(Box::new(a), Box::new(b))
    }

    pub fn arity(&self) -> usize {
        match self {
            Evaluator::One => 0,
            Evaluator::Gen { .. } => 1,
            Evaluator::Shuffle(a, b) => a.arity() + b.arity(),
        }
    }

    /// Canonical text form, e.g. `shuffle(gen:f, shuffle(gen:g, one))`.
    pub fn canonical(&self) -> String {
        match self {
            Evaluator::One => "one".to_string(),
            Evaluator::Gen { id, .. } => format!("gen:{id}"),
            Evaluator::Shuffle(a, b) => format!("shuffle({}, {})", a.canonical(), b.canonical()),
        }
    }

    /// Evaluate at z ∈ (Λ* × C)^arity. Shuffle nodes expand as
    /// Σ_{w ∈ Sh(m,n)} f((w⁻¹z)_{1..m}) g((w⁻¹z)_{m+1..m+n}) Φ_{K,w⁻¹}(z).
    pub fn eval(
        &self,
        ctx: &LContext,
        z: &[SpectralPoint],
        policy: &TruncationPolicy,
    ) -> Result<Complex64> {
        if z.len() != self.arity() {
            return Err(Error::PreconditionViolated(format!(
                "arity {} evaluator applied to {} points",
                self.arity(),
                z.len()
            )));
        }
        match self {
            Evaluator::One => Ok(Complex64::new(1.0, 0.0)),
            Evaluator::Gen { f, .. } => f(&z[0]),
            Evaluator::Shuffle(a, b) => {
                let m = a.arity();
                let n = b.arity();
                let mut sum = Complex64::new(0.0, 0.0);
                for w in enumerate_shuffles(m, n) {
                    let w_inv = w.inverse();
                    let perm = w_inv.act(z);
                    let fa = a.eval(ctx, &perm[..m], policy)?;
                    let fb = b.eval(ctx, &perm[m..], policy)?;
                    sum += fa * fb * phi_w(ctx, &w_inv, z, policy)?;
                }
                Ok(sum)
            }
        }
    }
}

/// ch-symmetrization: (ch f)(z) = Σ_{σ ∈ Perm_n} f(σ(z)) Φ_{K,σ}(z).
pub fn ch_symmetrize(
    ctx: &LContext,
    f: &Evaluator,
    z: &[SpectralPoint],
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let n = f.arity();
    if z.len() != n {
        return Err(Error::PreconditionViolated(format!(
            "ch of arity {n} applied to {} points",
            z.len()
        )));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for sigma in Permutation::all(n) {
        sum += f.eval(ctx, &sigma.act(z), policy)? * phi_w(ctx, &sigma, z, policy)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::{make_field, unit_lattice};
    use std::collections::HashSet;

    fn ctx_q() -> LContext {
        let f = make_field(0).unwrap();
        let l = unit_lattice(&f);
        LContext::new(f, l, 100, None).unwrap()
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy {
            norm_bound: 100,
            tail_tolerance: 1.0,
        }
    }

    fn sp(s: Complex64) -> SpectralPoint {
        SpectralPoint::new(vec![], s)
    }

    #[test]
    fn shuffles_2_1() {
        let sh = enumerate_shuffles(2, 1);
        let images: Vec<&[usize]> = sh.iter().map(|w| w.images()).collect();
        assert_eq!(images, vec![&[0, 1, 2][..], &[0, 2, 1], &[1, 2, 0]]);
    }

    #[test]
    fn shuffle_counts_are_binomial() {
        for m in 0..=4 {
            for n in 0..=4 {
                let count = enumerate_shuffles(m, n).len();
                let binom = (1..=m + n).product::<usize>()
                    / ((1..=m).product::<usize>() * (1..=n).product::<usize>());
                assert_eq!(count, binom, "Sh({m},{n})");
            }
        }
    }

    #[test]
    fn permutation_action_convention() {
        // w = (0 1 2) as images [1, 2, 0]: w(s)_i = s_{w^{-1}(i)}
        let w = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let s = vec!["a", "b", "c"];
        assert_eq!(w.act(&s), vec!["c", "a", "b"]);
        let w2 = Permutation::from_images(vec![0, 2, 1]).unwrap();
        let lhs = w.compose(&w2).act(&s);
        let rhs = w.act(&w2.act(&s));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn decomposition_bijection_exhaustive() {
        for total in 0..=7usize {
            for m in 0..=total {
                let n = total - m;
                let shuffles: HashSet<Vec<usize>> = enumerate_shuffles(m, n)
                    .into_iter()
                    .map(|w| w.images().to_vec())
                    .collect();
                let mut seen = HashSet::new();
                for sigma in Permutation::all(total) {
                    let (w1, w2, w) = decompose(&sigma, m, n);
                    // reconstruction
                    let rec = w1.block_sum(&w2).compose(&w);
                    assert_eq!(rec, sigma);
                    // w⁻¹ is a shuffle
                    assert!(shuffles.contains(w.inverse().images()));
                    // injectivity
                    assert!(seen.insert((
                        w1.images().to_vec(),
                        w2.images().to_vec(),
                        w.images().to_vec()
                    )));
                }
            }
        }
    }

    #[test]
    fn decomposition_inversions_are_setwise_disjoint_union() {
        for total in 0..=6usize {
            for m in 0..=total {
                let n = total - m;
                for sigma in Permutation::all(total) {
                    let (w1, w2, w) = decompose(&sigma, m, n);
                    let u = w1.block_sum(&w2);
                    let w_inv = w.inverse();
                    let mut expected: HashSet<(usize, usize)> =
                        w.inversion_set().into_iter().collect();
                    for (i, j) in u.inversion_set() {
                        let (a, b) = (w_inv.apply(i), w_inv.apply(j));
                        let pair = (a.min(b), a.max(b));
                        assert!(expected.insert(pair), "overlap in σ={:?}", sigma.images());
                    }
                    let actual: HashSet<(usize, usize)> =
                        sigma.inversion_set().into_iter().collect();
                    assert_eq!(expected, actual);
                }
            }
        }
    }

    #[test]
    fn cocycle_identity_n3() {
        let ctx = ctx_q();
        let p = pol();
        let z = vec![
            sp(Complex64::new(2.8, 0.31)),
            sp(Complex64::new(1.4, -0.47)),
            sp(Complex64::new(0.0, 0.11)),
        ];
        assert!(is_generic(&z, 1e-3));
        for w in Permutation::all(3) {
            let wz = w.act(&z);
            let phi_w_z = phi_w(&ctx, &w, &z, &p).unwrap();
            for wp in Permutation::all(3) {
                let lhs = phi_w(&ctx, &wp, &wz, &p).unwrap() * phi_w_z;
                let rhs = phi_w(&ctx, &wp.compose(&w), &z, &p).unwrap();
                assert!(
                    (lhs - rhs).norm() < 1e-9 * rhs.norm().max(1.0),
                    "w={:?} w'={:?}: {lhs} vs {rhs}",
                    w.images(),
                    wp.images()
                );
            }
        }
    }

    #[test]
    fn phi_w_inverse_relation() {
        let ctx = ctx_q();
        let p = pol();
        let z = vec![
            sp(Complex64::new(3.1, 0.21)),
            sp(Complex64::new(1.6, -0.33)),
            sp(Complex64::new(0.2, 0.57)),
        ];
        for w in Permutation::all(3) {
            let lhs = phi_w(&ctx, &w.inverse(), &w.act(&z), &p).unwrap();
            let rhs = phi_w(&ctx, &w, &z, &p).unwrap();
            assert!((lhs * rhs - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn shuffle_product_associates() {
        let ctx = ctx_q();
        let p = pol();
        let f = Evaluator::generator("f", |z| Ok((0.3 * z.s).exp()));
        let g = Evaluator::generator("g", |z| Ok((-0.2 * z.s + Complex64::new(0.0, 0.1)).exp()));
        let h = Evaluator::generator("h", |z| Ok(1.0 / (z.s + 5.0)));
        let z3 = vec![
            sp(Complex64::new(3.0, 0.23)),
            sp(Complex64::new(1.7, -0.41)),
            sp(Complex64::new(0.4, 0.65)),
        ];
        let left = Evaluator::shuffle(Evaluator::shuffle(f.clone(), g.clone()), h.clone());
        let right = Evaluator::shuffle(f, Evaluator::shuffle(g, h));
        let l = left.eval(&ctx, &z3, &p).unwrap();
        let r = right.eval(&ctx, &z3, &p).unwrap();
        assert!((l - r).norm() < 1e-8 * l.norm().max(1.0), "{l} vs {r}");
    }

    #[test]
    fn unit_is_neutral_for_shuffle() {
        let ctx = ctx_q();
        let p = pol();
        let f = Evaluator::generator("f", |z| Ok((0.1 * z.s).exp()));
        let fe = Evaluator::shuffle(f.clone(), Evaluator::one());
        let z = vec![sp(Complex64::new(1.9, 0.27))];
        let a = f.eval(&ctx, &z, &p).unwrap();
        let b = fe.eval(&ctx, &z, &p).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn ch_of_generator_pair_matches_shuffle() {
        // For f ⊗ g viewed through the decomposition bijection with
        // m = n = 1, ch(f·g) coincides with the shuffle product f ⧢ g.
        let ctx = ctx_q();
        let p = pol();
        let f = Evaluator::generator("f", |z| Ok((0.25 * z.s).exp()));
        let g = Evaluator::generator("g", |z| Ok(1.0 / (z.s + 4.0)));
        let z = vec![
            sp(Complex64::new(2.7, 0.35)),
            sp(Complex64::new(1.1, -0.21)),
        ];
        let fg = Evaluator::shuffle(f.clone(), g.clone());
        let direct = fg.eval(&ctx, &z, &p).unwrap();
        // ch of the plain tensor product f(z₁)g(z₂)
        let mut sym = Complex64::new(0.0, 0.0);
        for sigma in Permutation::all(2) {
            let sz = sigma.act(&z);
            let val = f.eval(&ctx, &sz[..1], &p).unwrap() * g.eval(&ctx, &sz[1..], &p).unwrap();
            sym += val * phi_w(&ctx, &sigma, &z, &p).unwrap();
        }
        assert!((direct - sym).norm() < 1e-10 * direct.norm().max(1.0));
    }

    #[test]
    fn canonical_serialization() {
        let f = Evaluator::generator("a", |_| Ok(Complex64::new(1.0, 0.0)));
        let g = Evaluator::generator("b", |_| Ok(Complex64::new(1.0, 0.0)));
        let e = Evaluator::shuffle(f, Evaluator::shuffle(g, Evaluator::one()));
        assert_eq!(e.canonical(), "shuffle(gen:a, shuffle(gen:b, one))");
    }
}
