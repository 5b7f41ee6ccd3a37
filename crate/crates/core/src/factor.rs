//! Closed-form Q-matrices for every word, and the complementary factor ψ.
//!
//! Each family is an explicit block recipe. Generators are listed as the
//! R₂/R₁ row generators, then the R′₁₂ row generators u₁, u₂, …, then the
//! column generators v_j (in descending order for c, d, c′, d′). Diagonal
//! entries are annihilators (z, x, xz) for row generators and xz′ for
//! column generators; off-diagonal coupling is −xy (or ±xy, −x, −xyz′),
//! coming from the y·u terms that survive elimination.

use crate::curve::CurveData;
use crate::poly::{Poly, PolyError, PolyMatrix};
use crate::words::{Family, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("not a matrix factorization: {0}")]
    NotFactorization(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub q: PolyMatrix,
    pub word: Word,
    pub labels: Vec<String>,
}

struct Builder {
    m: Vec<Vec<Poly>>,
}

impl Builder {
    fn new(n: usize) -> Builder {
        Builder { m: vec![vec![Poly::zero(); n]; n] }
    }

    fn set(&mut self, i: usize, j: usize, p: &Poly) {
        self.m[i][j] = p.clone();
    }
}

fn labels(head: &[&str], us: usize, vs: impl Iterator<Item = usize>) -> Vec<String> {
    head.iter()
        .map(|s| s.to_string())
        .chain((1..=us).map(|k| format!("u{k}")))
        .chain(vs.map(|j| format!("v{j}")))
        .collect()
}

/// Q for the untruncated word of the given family and size.
fn recipe(family: Family, n: usize, c: &CurveData) -> (PolyMatrix, Vec<String>) {
    let x = Poly::x();
    let z = c.z.clone();
    let xz = c.xz();
    let xzp = c.xzp();
    let xy = &x * &Poly::y();
    let mxy = -&xy;
    let (b, lab) = match family {
        Family::A => {
            let mut b = Builder::new(2 * n + 2);
            b.set(0, 0, &z);
            for k in 1..=n {
                b.set(k, k, &xz);
            }
            for k in 0..=n {
                b.set(n + 1 + k, n + 1 + k, &xzp);
                b.set(n + 1 + k, k, &mxy);
            }
            (b, labels(&["u^2"], n, 1..=n + 1))
        }
        Family::B => {
            let size = 2 * n + 2;
            let mut b = Builder::new(size);
            b.set(0, 0, &x);
            for k in 1..=n {
                b.set(k, k, &xz);
            }
            b.set(n + 1, 0, &mxy);
            b.set(n + 1, 1, &mxy);
            b.set(n + 1, n + 1, &xzp);
            for k in 2..=n {
                b.set(n + k, k, &xy);
                b.set(n + k, n + k, &xzp);
            }
            // the last column generator couples to everything
            let zy = &z * &Poly::y();
            let last = size - 1;
            b.set(last, 0, &-&zy);
            b.set(last, 1, &-&zy);
            for k in 2..=n {
                b.set(last, k, &zy);
            }
            for j in n + 1..size {
                b.set(last, j, &c.zzp());
            }
            (b, labels(&["u^1"], n, 1..=n + 1))
        }
        Family::C => {
            let mut b = Builder::new(2 * n + 2);
            b.set(0, 0, &z);
            for k in 1..=n {
                b.set(k, k, &xz);
            }
            for (idx, j) in (1..=n + 1).rev().enumerate() {
                let r = n + 1 + idx;
                b.set(r, r, &xzp);
                b.set(r, j - 1, &mxy);
            }
            (b, labels(&["u^2"], n, (1..=n + 1).rev()))
        }
        Family::D => {
            let mut b = Builder::new(2 * n + 4);
            b.set(0, 0, &z);
            for k in 1..=n + 1 {
                b.set(k, k, &xz);
            }
            let base = n + 2;
            b.set(base, base, &xzp);
            b.set(base, 0, &-&x);
            b.set(base + 1, base + 1, &xzp);
            b.set(base + 1, n + 1, &mxy);
            for (idx, j) in (1..=n).rev().enumerate() {
                let r = base + 2 + idx;
                b.set(r, r, &xzp);
                b.set(r, j + 1, &mxy);
            }
            (b, labels(&["u^2"], n + 1, (1..=n + 2).rev()))
        }
        Family::CPrime => {
            let size = 2 * n + 4;
            let mut b = Builder::new(size);
            b.set(0, 0, &x);
            b.set(1, 1, &z);
            for k in 1..=n {
                b.set(1 + k, 1 + k, &xz);
            }
            let base = n + 2;
            b.set(base, base, &(&xz * &c.zp));
            for (idx, j) in (2..=n + 1).rev().enumerate() {
                let r = base + 1 + idx;
                b.set(r, r, &xzp);
                b.set(r, j, &mxy);
            }
            let last = size - 1;
            b.set(last, last, &xzp);
            b.set(last, 0, &mxy);
            b.set(last, 1, &mxy);
            b.set(last, base, &-&(&xy * &c.zp));
            (b, labels(&["u^1", "u^2"], n, (1..=n + 2).rev()))
        }
        Family::DPrime => {
            let mut b = Builder::new(2 * n + 5);
            b.set(0, 0, &z);
            for k in 1..=n + 1 {
                b.set(k, k, &xz);
            }
            let base = n + 2;
            let xzzp = &xz * &c.zp;
            b.set(base, base, &xzp);
            b.set(base, 0, &-&x);
            b.set(base + 1, base, &xzzp);
            b.set(base + 1, base + 1, &-&xzzp);
            b.set(base + 2, base + 2, &xzp);
            b.set(base + 2, n + 1, &mxy);
            for (idx, j) in (1..=n).rev().enumerate() {
                let r = base + 3 + idx;
                b.set(r, r, &xzp);
                b.set(r, j + 1, &mxy);
            }
            (b, labels(&["u^2"], n + 1, (1..=n + 3).rev()))
        }
    };
    (PolyMatrix::from_rows(b.m).expect("square recipe"), lab)
}

/// Generator dropped by a left / right cut.
fn cut_labels(family: Family, n: usize) -> (String, String) {
    let v = |k: usize| format!("v{k}");
    match family {
        Family::A => ("u^2".into(), v(n + 1)),
        Family::B => ("u^1".into(), v(n + 1)),
        Family::C => (v(n + 1), "u^2".into()),
        Family::D => (v(n + 2), v(n + 1)),
        Family::CPrime => ("u^1".into(), "u^2".into()),
        Family::DPrime => (v(n + 3), v(n + 1)),
    }
}

/// The Q-matrix of a word; cuts delete the row and column of the
/// generator contributed by the dropped end letter.
pub fn build_q(w: &Word, curve: &CurveData) -> QMatrix {
    let (m, lab) = recipe(w.family, w.n, curve);
    let (l, r) = cut_labels(w.family, w.n);
    let mut drop = Vec::new();
    if w.left_cut {
        drop.push(l);
    }
    if w.right_cut {
        drop.push(r);
    }
    let keep: Vec<usize> = (0..lab.len()).filter(|&i| !drop.contains(&lab[i])).collect();
    QMatrix {
        q: m.select(&keep, &keep),
        word: *w,
        labels: keep.iter().map(|&i| lab[i].clone()).collect(),
    }
}

/// ψ = F·adj(Q)/det(Q), so that Qψ = ψQ = F·I.
pub fn complement(q: &PolyMatrix, curve: &CurveData) -> Result<PolyMatrix, FactorError> {
    let fail = |e: PolyError| FactorError::NotFactorization(e.to_string());
    if !q.is_square() {
        return Err(FactorError::NotFactorization(format!("{}×{} is not square", q.rows(), q.cols())));
    }
    let det = q.det().map_err(fail)?;
    if det.is_zero() {
        return Err(FactorError::NotFactorization("det(Q) = 0".into()));
    }
    q.adjugate().map_err(fail)?.scale(&curve.f).exact_div(&det).map_err(fail)
}
