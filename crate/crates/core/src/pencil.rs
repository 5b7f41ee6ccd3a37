//! Matrix pencils X₁t₁ + X₂t₂ over an exact field and their Kronecker
//! decomposition.
//!
//! Block vocabulary: A(n) = t₁I + t₂N (eigenvalue 0), B(n) = t₂I + t₁N
//! (eigenvalue ∞), C(n) the n×(n+1) bidiagonal block with t₁ on the
//! diagonal and t₂ above it, D(n) = C(n)ᵀ, and Regular(α, n) = t₁I + t₂(αI + N)
//! for α ≠ 0. Here N is the nilpotent shift with ones on the superdiagonal.

use crate::field::{rank, Field, Rationals};
use crate::poly::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PencilError {
    #[error("block size must be at least 1")]
    BadSize,
    #[error("Regular block needs an eigenvalue")]
    MissingEigenvalue,
    #[error("X1 and X2 have different shapes")]
    ShapeMismatch,
    #[error("regular part has eigenvalues outside {0}")]
    EigenvalueNotInField(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil<E> {
    pub rows: usize,
    pub cols: usize,
    pub x1: Vec<Vec<E>>,
    pub x2: Vec<Vec<E>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    A,
    B,
    C,
    D,
    Regular,
}

/// Canonical order: kind, then size, then eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PencilBlock<E> {
    pub kind: BlockKind,
    pub n: usize,
    pub alpha: Option<E>,
}

impl<E> PencilBlock<E> {
    pub fn simple(kind: BlockKind, n: usize) -> Self {
        PencilBlock { kind, n, alpha: None }
    }

    /// Regular block with eigenvalue α; α = 0 is the block A(n).
    pub fn regular<F: Field<Elem = E>>(k: &F, alpha: E, n: usize) -> Self {
        if k.is_zero(&alpha) {
            PencilBlock::simple(BlockKind::A, n)
        } else {
            PencilBlock { kind: BlockKind::Regular, n, alpha: Some(alpha) }
        }
    }

    pub fn display<F: Field<Elem = E>>(&self, k: &F) -> String {
        match (&self.kind, &self.alpha) {
            (BlockKind::Regular, Some(a)) => format!("Regular({}; {})", self.n, k.format(a)),
            (kind, _) => format!("{kind:?}({})", self.n),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self.kind {
            BlockKind::C => (self.n, self.n + 1),
            BlockKind::D => (self.n + 1, self.n),
            _ => (self.n, self.n),
        }
    }
}

impl<E: Clone> Pencil<E> {
    pub fn new(x1: Vec<Vec<E>>, x2: Vec<Vec<E>>) -> Result<Self, PencilError> {
        let rows = x1.len();
        let cols = x1.first().map_or(0, Vec::len);
        let shaped = |m: &Vec<Vec<E>>| m.len() == rows && m.iter().all(|r| r.len() == cols);
        if !shaped(&x1) || !shaped(&x2) {
            return Err(PencilError::ShapeMismatch);
        }
        Ok(Pencil { rows, cols, x1, x2 })
    }

    pub fn transpose(&self) -> Self {
        let tr = |m: &Vec<Vec<E>>| -> Vec<Vec<E>> {
            (0..self.cols).map(|j| (0..self.rows).map(|i| m[i][j].clone()).collect()).collect()
        };
        Pencil { rows: self.cols, cols: self.rows, x1: tr(&self.x1), x2: tr(&self.x2) }
    }
}

fn zeros<F: Field>(k: &F, r: usize, c: usize) -> Vec<Vec<F::Elem>> {
    vec![vec![k.zero(); c]; r]
}

/// Constructor for the canonical blocks.
pub fn block<F: Field>(
    k: &F,
    kind: BlockKind,
    n: usize,
    alpha: Option<F::Elem>,
) -> Result<Pencil<F::Elem>, PencilError> {
    if n == 0 {
        return Err(PencilError::BadSize);
    }
    block_unchecked(k, kind, n, alpha)
}

fn block_unchecked<F: Field>(
    k: &F,
    kind: BlockKind,
    n: usize,
    alpha: Option<F::Elem>,
) -> Result<Pencil<F::Elem>, PencilError> {
    let (r, c) = PencilBlock::<F::Elem>::simple(kind, n).shape();
    let mut x1 = zeros(k, r, c);
    let mut x2 = zeros(k, r, c);
    match kind {
        BlockKind::A | BlockKind::Regular => {
            let a = match kind {
                BlockKind::Regular => alpha.ok_or(PencilError::MissingEigenvalue)?,
                _ => k.zero(),
            };
            for i in 0..n {
                x1[i][i] = k.one();
                x2[i][i] = a.clone();
                if i + 1 < n {
                    x2[i][i + 1] = k.one();
                }
            }
        }
        BlockKind::B => {
            for i in 0..n {
                x2[i][i] = k.one();
                if i + 1 < n {
                    x1[i][i + 1] = k.one();
                }
            }
        }
        BlockKind::C => {
            for i in 0..n {
                x1[i][i] = k.one();
                x2[i][i + 1] = k.one();
            }
        }
        BlockKind::D => {
            return Ok(block_unchecked(k, BlockKind::C, n, None)?.transpose());
        }
    }
    Ok(Pencil { rows: r, cols: c, x1, x2 })
}

pub fn block_pencil<F: Field>(k: &F, b: &PencilBlock<F::Elem>) -> Pencil<F::Elem> {
    block_unchecked(k, b.kind, b.n, b.alpha.clone()).expect("well-formed block")
}

pub fn direct_sum<F: Field>(k: &F, parts: &[Pencil<F::Elem>]) -> Pencil<F::Elem> {
    let rows = parts.iter().map(|p| p.rows).sum();
    let cols = parts.iter().map(|p| p.cols).sum();
    let mut x1 = zeros(k, rows, cols);
    let mut x2 = zeros(k, rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for p in parts {
        for i in 0..p.rows {
            for j in 0..p.cols {
                x1[r0 + i][c0 + j] = p.x1[i][j].clone();
                x2[r0 + i][c0 + j] = p.x2[i][j].clone();
            }
        }
        r0 += p.rows;
        c0 += p.cols;
    }
    Pencil { rows, cols, x1, x2 }
}

fn matmul<F: Field>(k: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>], inner: usize, cols: usize) -> Vec<Vec<F::Elem>> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&row[t], &b[t][j])))
                })
                .collect()
        })
        .collect()
}

/// S·P·T for square S (rows×rows) and T (cols×cols).
pub fn transform<F: Field>(
    k: &F,
    s: &[Vec<F::Elem>],
    p: &Pencil<F::Elem>,
    t: &[Vec<F::Elem>],
) -> Pencil<F::Elem> {
    let side = |m: &Vec<Vec<F::Elem>>| {
        let sm = matmul(k, s, m, p.rows, p.cols);
        matmul(k, &sm, t, p.cols, p.cols)
    };
    Pencil { rows: p.rows, cols: p.cols, x1: side(&p.x1), x2: side(&p.x2) }
}

/// a·X₁ + b·X₂.
pub fn evaluate<F: Field>(k: &F, p: &Pencil<F::Elem>, a: &F::Elem, b: &F::Elem) -> Vec<Vec<F::Elem>> {
    (0..p.rows)
        .map(|i| {
            (0..p.cols)
                .map(|j| k.add(&k.mul(a, &p.x1[i][j]), &k.mul(b, &p.x2[i][j])))
                .collect()
        })
        .collect()
}

/// Uniformly random invertible matrix (rejection sampling).
pub fn random_invertible<F: Field, R: Rng>(
    k: &F,
    n: usize,
    rng: &mut R,
    sample: impl Fn(&mut R) -> F::Elem,
) -> Vec<Vec<F::Elem>> {
    loop {
        let m: Vec<Vec<F::Elem>> = (0..n).map(|_| (0..n).map(|_| sample(rng)).collect()).collect();
        if rank(k, &m) == n {
            return m;
        }
    }
}

/// Block-bidiagonal stacking: `diag` on the diagonal blocks and `sub` one
/// block below, `k` block columns and `k + extra` block rows.
fn stack<F: Field>(
    k: &F,
    diag: &[Vec<F::Elem>],
    sub: &[Vec<F::Elem>],
    r: usize,
    c: usize,
    blocks: usize,
    extra: usize,
) -> Vec<Vec<F::Elem>> {
    let mut m = zeros(k, (blocks + extra) * r, blocks * c);
    for b in 0..blocks {
        for i in 0..r {
            for j in 0..c {
                m[b * r + i][b * c + j] = diag[i][j].clone();
                if b + 1 < blocks + extra {
                    m[(b + 1) * r + i][b * c + j] = sub[i][j].clone();
                }
            }
        }
    }
    m
}

/// Rank over the function field k(t₁, t₂).
fn normal_rank<F: Field>(k: &F, p: &Pencil<F::Elem>) -> usize {
    // A nonzero ρ×ρ minor is a binary form of degree ρ, so it survives at
    // one of any ρ + 2 distinct points of P¹.
    let bound = p.rows.min(p.cols);
    let mut best = rank(k, &p.x1);
    let mut a = 0i64;
    let mut tried = 0;
    let elems = k.elements();
    while tried <= bound {
        let alpha = match &elems {
            Some(e) if (a as usize) < e.len() => e[a as usize].clone(),
            Some(_) => break,
            None => k.from_i64(a),
        };
        best = best.max(rank(k, &evaluate(k, p, &alpha, &k.one())));
        a += 1;
        tried += 1;
    }
    if tried <= bound {
        // field too small to certify by evaluation: count the C blocks
        // directly, which is exact but slower
        return p.cols - column_minimal_indices(k, p, None).len();
    }
    best
}

/// Right minimal indices, i.e. the sizes ε of the C(ε) blocks (with
/// multiplicity). Homogeneous kernel vectors of degree d of the pencil form
/// the kernel of a block-bidiagonal matrix; a C(ε) block contributes
/// d − ε + 1 of them, every other block none.
fn column_minimal_indices<F: Field>(k: &F, p: &Pencil<F::Elem>, count: Option<usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut n1, mut n2) = (0usize, 0usize); // N_{d-1}, N_{d-2}
    for d in 0..p.cols {
        if count == Some(out.len()) {
            break;
        }
        let m = stack(k, &p.x1, &p.x2, p.rows, p.cols, d + 1, 1);
        let nd = (d + 1) * p.cols - rank(k, &m);
        let m_eps = nd + n2 - 2 * n1;
        out.extend(std::iter::repeat_n(d, m_eps));
        n2 = n1;
        n1 = nd;
    }
    out
}

/// Sizes of the Jordan blocks of the pencil at one point of P¹, given the
/// local expansion E₀ + s·E₁. The truncated operator on k[s]/sᵏ has kernel
/// dimension k·#C + Σ min(k, size), from which sizes are read off.
fn jordan_sizes<F: Field>(
    k: &F,
    e0: &[Vec<F::Elem>],
    e1: &[Vec<F::Elem>],
    r: usize,
    c: usize,
    num_c: usize,
    bound: usize,
) -> Vec<usize> {
    let mut ge = vec![0usize]; // ge[k] = number of blocks of size >= k, ge[0] unused
    let mut g_prev = 0usize;
    for kk in 1..=bound + 1 {
        let t = stack(k, e0, e1, r, c, kk, 0);
        let g = kk * c - rank(k, &t) - kk * num_c;
        let at_least = g - g_prev;
        ge.push(at_least);
        g_prev = g;
        if at_least == 0 {
            break;
        }
    }
    ge.push(0);
    let mut sizes = Vec::new();
    for s in 1..ge.len() - 1 {
        let exact = ge[s] - ge[s + 1];
        sizes.extend(std::iter::repeat_n(s, exact));
    }
    sizes
}

/// Field-specific search for the finite eigenvalues of the regular part.
pub trait EigenSearch: Field {
    /// A finite set of elements containing every finite eigenvalue.
    fn eigen_candidates(&self, p: &Pencil<Self::Elem>, normal_rank: usize) -> Vec<Self::Elem>;
}

impl EigenSearch for crate::field::PrimeField {
    fn eigen_candidates(&self, _: &Pencil<u64>, _: usize) -> Vec<u64> {
        self.elements().expect("small prime field")
    }
}

impl EigenSearch for Rationals {
    fn eigen_candidates(&self, p: &Pencil<Rational>, rho: usize) -> Vec<Rational> {
        // Every ρ×ρ minor of X₂ − αX₁ is a multiple of the characteristic
        // polynomial of the regular part, and so is det(U(X₂ − αX₁)V) for
        // any projections U, V (Cauchy–Binet). The gcd of a few random ones
        // has the right roots plus possibly spurious ones, which the rank
        // test in `decompose` discards.
        if rho == 0 {
            return Vec::new();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e36);
        let mut g: Option<Vec<Rational>> = None;
        let mut found = 0;
        for _ in 0..16 {
            if found == 3 {
                break;
            }
            let u: Vec<Vec<Rational>> = (0..rho)
                .map(|_| (0..p.rows).map(|_| self.from_i64(rng.gen_range(-3..=3))).collect())
                .collect();
            let v: Vec<Vec<Rational>> = (0..p.cols)
                .map(|_| (0..rho).map(|_| self.from_i64(rng.gen_range(-3..=3))).collect())
                .collect();
            let ux1 = matmul(self, &matmul(self, &u, &p.x1, p.rows, p.cols), &v, p.cols, rho);
            let ux2 = matmul(self, &matmul(self, &u, &p.x2, p.rows, p.cols), &v, p.cols, rho);
            let pts: Vec<Rational> = (0..=rho as i64).map(|a| self.from_i64(a)).collect();
            let vals: Vec<Rational> = pts
                .iter()
                .map(|a| {
                    let m: Vec<Vec<Rational>> = (0..rho)
                        .map(|i| (0..rho).map(|j| &ux2[i][j] - a * &ux1[i][j]).collect())
                        .collect();
                    crate::field::det(self, &m)
                })
                .collect();
            let f = interpolate(&pts, &vals);
            if f.is_empty() {
                continue;
            }
            found += 1;
            g = Some(match g {
                None => f,
                Some(h) => upoly_gcd(&h, &f),
            });
        }
        match g {
            Some(f) => rational_roots(&f),
            None => Vec::new(),
        }
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Newton interpolation; coefficients low to high.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // out = out·(α − xᵢ) + ddᵢ
        let mut next = vec![Rational::zero(); n];
        for (e, c) in out.iter().enumerate() {
            if e + 1 < n {
                next[e + 1] += c;
            }
            next[e] -= c * &xs[i];
        }
        next[0] += &dd[i];
        out = next;
    }
    trim(out)
}

fn upoly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    use crate::poly::uni::UniPoly;
    UniPoly::gcd(&UniPoly::new(a.to_vec()), &UniPoly::new(b.to_vec()))
        .coeffs()
        .to_vec()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n && d < BigInt::from(10_000_000) {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for q in &out {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(q * &pw);
                pw *= &p;
            }
        }
        out = next;
    }
    out
}

/// Rational roots by the rational root theorem.
fn rational_roots(f: &[Rational]) -> Vec<Rational> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    let den = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let ints = &ints[low..];
    if ints.len() > 1 {
        let eval = |x: &Rational| {
            ints.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
        };
        for p in divisors(&ints[0]) {
            for q in divisors(ints.last().unwrap()) {
                for s in [1, -1] {
                    let cand = Rational::new(&p * s, q.clone());
                    if !roots.contains(&cand) && eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Kronecker canonical form of `p`, as a sorted block multiset.
pub fn decompose<F: EigenSearch>(k: &F, p: &Pencil<F::Elem>) -> Result<Vec<PencilBlock<F::Elem>>, PencilError> {
    let (r, c) = (p.rows, p.cols);
    let rho = normal_rank(k, p);
    let cs = column_minimal_indices(k, p, Some(c - rho));
    let ds = column_minimal_indices(k, &p.transpose(), Some(r - rho));
    let mut blocks: Vec<PencilBlock<F::Elem>> = cs
        .iter()
        .map(|&e| PencilBlock::simple(BlockKind::C, e))
        .chain(ds.iter().map(|&e| PencilBlock::simple(BlockKind::D, e)))
        .collect();
    let regular = r - cs.iter().sum::<usize>() - ds.iter().map(|e| e + 1).sum::<usize>();
    let mut found = 0;
    if regular > 0 {
        // ∞: local parameter t₂ at (1 : 0)
        for n in jordan_sizes(k, &p.x1, &p.x2, r, c, cs.len(), regular) {
            blocks.push(PencilBlock::simple(BlockKind::B, n));
            found += n;
        }
        for alpha in k.eigen_candidates(p, rho) {
            if found == regular {
                break;
            }
            let e0: Vec<Vec<F::Elem>> = (0..r)
                .map(|i| (0..c).map(|j| k.sub(&p.x2[i][j], &k.mul(&alpha, &p.x1[i][j]))).collect())
                .collect();
            for n in jordan_sizes(k, &e0, &p.x1, r, c, cs.len(), regular) {
                blocks.push(PencilBlock::regular(k, alpha.clone(), n));
                found += n;
            }
        }
    }
    if found != regular {
        return Err(PencilError::EigenvalueNotInField(k.descriptor()));
    }
    blocks.sort();
    Ok(blocks)
}

impl<E: fmt::Debug> fmt::Display for PencilBlock<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.alpha {
            Some(a) => write!(f, "Regular({}; {:?})", self.n, a),
            None => write!(f, "{:?}({})", self.kind, self.n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn gf() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn constructors() {
        let k = gf();
        let a2 = block(&k, BlockKind::A, 2, None).unwrap();
        assert_eq!(a2.x1, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(a2.x2, vec![vec![0, 1], vec![0, 0]]);
        let c1 = block(&k, BlockKind::C, 1, None).unwrap();
        assert_eq!((c1.x1.clone(), c1.x2.clone()), (vec![vec![1, 0]], vec![vec![0, 1]]));
        assert_eq!(block(&k, BlockKind::D, 1, None).unwrap(), c1.transpose());
        assert_eq!(block(&k, BlockKind::B, 0, None), Err(PencilError::BadSize));
        let s = direct_sum(&k, &[block(&k, BlockKind::A, 1, None).unwrap(), block(&k, BlockKind::B, 1, None).unwrap()]);
        assert_eq!(s.x1, vec![vec![1, 0], vec![0, 0]]);
        assert_eq!(s.x2, vec![vec![0, 0], vec![0, 1]]);
        let e = direct_sum::<PrimeField>(&k, &[]);
        assert_eq!((e.rows, e.cols), (0, 0));
    }

    #[test]
    fn one_by_one() {
        let k = gf();
        for a in [0u64, 1, 5, 100] {
            let p = Pencil::new(vec![vec![1]], vec![vec![a]]).unwrap();
            let got = decompose(&k, &p).unwrap();
            assert_eq!(got, vec![PencilBlock::regular(&k, a, 1)]);
        }
        let p = Pencil::new(vec![vec![0]], vec![vec![1]]).unwrap();
        assert_eq!(decompose(&k, &p).unwrap(), vec![PencilBlock::simple(BlockKind::B, 1)]);
    }

    #[test]
    fn canonical_inputs() {
        let k = gf();
        for kind in [BlockKind::A, BlockKind::B, BlockKind::C, BlockKind::D] {
            for n in 1..5 {
                let p = block(&k, kind, n, None).unwrap();
                assert_eq!(decompose(&k, &p).unwrap(), vec![PencilBlock::simple(kind, n)]);
            }
        }
    }

    #[test]
    fn rational_field_and_missing_eigenvalues() {
        let k = Rationals;
        let q = |v: i64| k.from_i64(v);
        // companion-like 2x2 regular block with eigenvalues ±1/2 and 3
        let p = Pencil::new(
            vec![vec![q(2), q(0)], vec![q(0), q(1)]],
            vec![vec![q(1), q(0)], vec![q(0), q(3)]],
        )
        .unwrap();
        let got = decompose(&k, &p).unwrap();
        let names: Vec<String> = got.iter().map(|b| b.display(&k)).collect();
        assert_eq!(names, vec!["Regular(1; 1/2)", "Regular(1; 3)"]);
        // x^2 + 1 has no rational root
        let p = Pencil::new(
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
            vec![vec![q(0), q(1)], vec![q(-1), q(0)]],
        )
        .unwrap();
        assert!(matches!(decompose(&k, &p), Err(PencilError::EigenvalueNotInField(_))));
        // same over GF(101): -1 is not a square mod 101? 101 = 1 mod 4, so it is.
        let g = gf();
        let p = Pencil::new(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![100, 0]]).unwrap();
        assert_eq!(decompose(&g, &p).unwrap().len(), 2);
        let f7 = PrimeField::new(7).unwrap();
        let p = Pencil::new(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![6, 0]]).unwrap();
        assert!(decompose(&f7, &p).is_err());
    }
}
