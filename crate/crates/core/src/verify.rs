//! Checking matrix factorizations: the complementary factor, determinant
//! exponents, minimality, and Smith-form invariants along the branches.

use crate::curve::{branch_eval, CurveData, LambdaMode};
use crate::factor::complement;
use crate::poly::uni::UniPoly;
use crate::poly::{Poly, PolyMatrix, Rational};
use num_traits::{One, Signed};
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MFPair {
    pub q: PolyMatrix,
    pub psi: PolyMatrix,
    pub f: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetExponents {
    pub x: u32,
    pub z: u32,
    pub zp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MFReport {
    /// ψ exists and Qψ = ψQ = F·I
    pub ok: bool,
    pub size: usize,
    pub det_exponents: Option<DetExponents>,
    /// every entry of Q lies in (x, y)
    pub minimal: bool,
    /// additionally every entry of ψ lies in (x, y)
    pub reduced: bool,
    pub pair: Option<MFPair>,
    pub detail: Option<String>,
}

impl MFReport {
    pub fn passed(&self) -> bool {
        self.ok && self.minimal
    }
}

fn in_max_ideal(m: &PolyMatrix) -> bool {
    m.entries().iter().all(|e| e.at_origin().is_zero())
}

/// det = c·x^a·z^b·z′^c with c a nonzero constant, if it has that shape.
pub fn det_exponents(det: &Poly, curve: &CurveData) -> Option<DetExponents> {
    if det.is_zero() {
        return None;
    }
    let mut rest = det.clone();
    let mut strip = |f: &Poly| {
        let mut k = 0;
        while let Ok(q) = rest.exact_div(f) {
            rest = q;
            k += 1;
        }
        k
    };
    let x = strip(&Poly::x());
    let z = strip(&curve.z);
    let zp = strip(&curve.zp);
    rest.as_constant().map(|_| DetExponents { x, z, zp })
}

pub fn is_mf(q: &PolyMatrix, curve: &CurveData) -> MFReport {
    let size = q.rows();
    let minimal = q.is_square() && in_max_ideal(q);
    let fail = |detail: String, det_exponents| MFReport {
        ok: false,
        size,
        det_exponents,
        minimal,
        reduced: false,
        pair: None,
        detail: Some(detail),
    };
    if !q.is_square() {
        return fail(format!("{}×{} is not square", q.rows(), q.cols()), None);
    }
    let det = match q.det() {
        Ok(d) => d,
        Err(e) => return fail(e.to_string(), None),
    };
    let exps = det_exponents(&det, curve);
    let psi = match complement(q, curve) {
        Ok(p) => p,
        Err(e) => return fail(e.to_string(), exps),
    };
    let target = PolyMatrix::scalar(size, curve.f.clone());
    let left = q.mul(&psi).ok();
    let right = psi.mul(q).ok();
    if left.as_ref() != Some(&target) || right.as_ref() != Some(&target) {
        return fail("Qψ or ψQ differs from F·I".into(), exps);
    }
    let detail = (!minimal).then(|| "Q has unit entries".to_string());
    MFReport {
        ok: true,
        size,
        det_exponents: exps,
        minimal,
        reduced: minimal && in_max_ideal(&psi),
        pair: Some(MFPair { q: q.clone(), psi, f: curve.f.clone() }),
        detail,
    }
}

/// Elementary divisors over ℚ[t], monic, dᵢ | dᵢ₊₁, zeros last.
pub fn snf_univariate(m: &[Vec<UniPoly>]) -> Vec<UniPoly> {
    let small = m.len().max(m.first().map_or(0, Vec::len)) <= MINORS_MAX;
    if small {
        snf_minors(m)
    } else {
        snf_elimination(m)
    }
}

/// Size up to which `snf_univariate` uses the gcd-of-minors formula.
pub const MINORS_MAX: usize = 6;

fn shape(m: &[Vec<UniPoly>]) -> (usize, usize) {
    (m.len(), m.first().map_or(0, Vec::len))
}

/// Smith form by row and column operations.
pub fn snf_elimination(m: &[Vec<UniPoly>]) -> Vec<UniPoly> {
    let (rows, cols) = shape(m);
    let mut a: Vec<Vec<UniPoly>> = m.to_vec();
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        loop {
            let pivot = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| (a[i][j].degree(), i, j));
            let Some((pi, pj)) = pivot else {
                out.resize(rows.min(cols), UniPoly::zero());
                return out;
            };
            a.swap(k, pi);
            for r in a.iter_mut() {
                r.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = a[i][k].divrem(&a[k][k]);
                clean &= r.is_zero();
                for j in k..cols {
                    let v = q.mul(&a[k][j]);
                    a[i][j] = a[i][j].sub(&v);
                }
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let (q, r) = a[k][j].divrem(&a[k][k]);
                clean &= r.is_zero();
                for i in k..rows {
                    let v = q.mul(&a[i][k]);
                    a[i][j] = a[i][j].sub(&v);
                }
            }
            if !clean {
                continue;
            }
            let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !a[k][k].divides(&a[i][j])));
            match bad {
                Some(i) => {
                    for j in k..cols {
                        a[k][j] = a[k][j].add(&a[i][j]);
                    }
                }
                None => break,
            }
        }
        out.push(a[k][k].monic());
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Fraction-free determinant over ℚ[t].
pub fn det_univariate(m: &[Vec<UniPoly>]) -> UniPoly {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return UniPoly::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                let (q, r) = v.divrem(&prev);
                debug_assert!(r.is_zero());
                a[i][j] = q;
            }
            a[i][k] = UniPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = if n == 0 { UniPoly::one() } else { a[n - 1][n - 1].clone() };
    if sign { d.neg() } else { d }
}

/// Smith form from dᵢ = gᵢ / gᵢ₋₁, gᵢ the gcd of the i×i minors.
pub fn snf_minors(m: &[Vec<UniPoly>]) -> Vec<UniPoly> {
    let (rows, cols) = shape(m);
    let mut out = Vec::new();
    let mut prev = UniPoly::one();
    for k in 1..=rows.min(cols) {
        let mut g = UniPoly::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<UniPoly>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                g = UniPoly::gcd(&g, &det_univariate(&sub));
                if g.degree() == Some(0) {
                    break;
                }
            }
        }
        if g.is_zero() {
            out.resize(rows.min(cols), UniPoly::zero());
            return out;
        }
        out.push(g.divrem(&prev).0.monic());
        prev = g;
    }
    out
}

/// t-adic valuations of the elementary divisors on each branch; `None`
/// stands for a zero divisor (valuation ∞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchInvariant {
    pub lambda0: Rational,
    pub valuations: [Vec<Option<usize>>; 3],
}

impl BranchInvariant {
    pub fn to_json(&self) -> serde_json::Value {
        let v: Vec<Vec<serde_json::Value>> = self
            .valuations
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| match v {
                        Some(k) => serde_json::json!(k),
                        None => serde_json::json!("inf"),
                    })
                    .collect()
            })
            .collect();
        serde_json::json!(v)
    }
}

pub const DEFAULT_LAMBDA0: i64 = 2;

pub fn to_univariate(m: &PolyMatrix) -> Option<Vec<Vec<UniPoly>>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| UniPoly::from_poly(m.get(i, j))).collect())
        .collect()
}

/// Valuations on the three branches; symbolic λ is instantiated by λ₀.
pub fn branch_invariants(q: &PolyMatrix, curve: &CurveData, lambda0: &Rational) -> BranchInvariant {
    let lambda0 = match &curve.mode {
        LambdaMode::Symbolic => lambda0.clone(),
        LambdaMode::Rational(v) => v.clone(),
    };
    let branches = curve.branches(&lambda0);
    let valuations = branches.map(|b| {
        let m = to_univariate(&branch_eval(q, &b)).expect("branch images are polynomials in t");
        let mut v: Vec<Option<usize>> = snf_univariate(&m).iter().map(UniPoly::valuation).collect();
        v.sort_by_key(|v| v.unwrap_or(usize::MAX));
        v
    });
    BranchInvariant { lambda0, valuations }
}

/// `p mod tⁿ`.
fn truncated(p: &UniPoly, n: usize) -> UniPoly {
    UniPoly::new(p.coeffs().iter().take(n).cloned().collect())
}

/// `a / b mod tⁿ`, assuming v(a) ≥ v(b).
fn series_div(a: &UniPoly, b: &UniPoly, n: usize) -> UniPoly {
    let vb = b.valuation().expect("nonzero divisor");
    let a = &a.coeffs()[vb.min(a.coeffs().len())..];
    let b = &b.coeffs()[vb..];
    let b0_inv = b[0].recip();
    let mut inv: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = if k == 0 { Rational::one() } else { Rational::from_integer(0.into()) };
        for i in 1..=k.min(b.len() - 1) {
            acc -= &b[i] * &inv[k - i];
        }
        inv.push(acc * &b0_inv);
    }
    truncated(&UniPoly::new(a.iter().take(n).cloned().collect()).mul(&UniPoly::new(inv)), n)
}

/// Valuations of the elementary divisors, computed over ℚ[t]/tⁿ: exact
/// below `precision`, anything at or above it is reported as `None`.
/// Sorted ascending, `None` last. Unlike Euclidean elimination over ℚ[t]
/// the coefficient sizes stay bounded, so this copes with dense matrices.
pub fn local_valuations(m: &[Vec<UniPoly>], precision: usize) -> Vec<Option<usize>> {
    let (rows, cols) = shape(m);
    let n = precision;
    let mut a: Vec<Vec<UniPoly>> = m.iter().map(|r| r.iter().map(|p| truncated(p, n)).collect()).collect();
    let mut out = Vec::new();
    for k in 0..rows.min(cols) {
        let pivot = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .filter_map(|(i, j)| a[i][j].valuation().map(|v| (v, i, j)))
            .min();
        let Some((v, pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for r in a.iter_mut() {
            r.swap(k, pj);
        }
        for i in k + 1..rows {
            if a[i][k].is_zero() {
                continue;
            }
            let f = series_div(&a[i][k], &a[k][k], n);
            for j in k..cols {
                let d = truncated(&f.mul(&a[k][j]), n);
                a[i][j] = a[i][j].sub(&d);
            }
        }
        // column operations only touch row k now
        out.push(Some(v));
    }
    out.resize(rows.min(cols), None);
    out
}

/// Clamp valuations to the precision `local_valuations` works at.
pub fn cap_valuations(v: &[Option<usize>], precision: usize) -> Vec<Option<usize>> {
    v.iter().map(|x| x.filter(|&k| k < precision)).collect()
}

/// Random unimodular n×n matrix over ℚ[t]: a product of elementary
/// operations with small random polynomial multipliers and ±1 scalings.
pub fn random_unimodular<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<UniPoly>> {
    let mut m: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { UniPoly::one() } else { UniPoly::zero() }).collect())
        .collect();
    if n < 2 {
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let deg = rng.gen_range(0..3);
        let f = UniPoly::new(
            (0..=deg).map(|_| Rational::from_integer(rng.gen_range(-3i64..=3).into())).collect(),
        );
        // row_i += f·row_j
        for c in 0..n {
            let v = f.mul(&m[j][c]);
            m[i][c] = m[i][c].add(&v);
        }
        if rng.gen_bool(0.2) {
            m[i] = m[i].iter().map(UniPoly::neg).collect();
        }
    }
    m
}

pub fn mul_univariate(a: &[Vec<UniPoly>], b: &[Vec<UniPoly>]) -> Vec<Vec<UniPoly>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| (0..inner).fold(UniPoly::zero(), |acc, k| acc.add(&r[k].mul(&b[k][j]))))
                .collect()
        })
        .collect()
}

/// p or −p, whichever has a positive leading coefficient.
fn up_to_sign(p: &Poly) -> Poly {
    match p.leading() {
        Some((_, c)) if c.is_negative() => -p,
        _ => p.clone(),
    }
}

fn key(p: &Poly) -> String {
    p.to_string()
}

/// Whether B = P·A·Q for a permutation matrix P and a signed permutation
/// matrix Q (row signs are absorbed by comparing rows up to sign).
pub fn signed_permutation_equivalent(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return false;
    }
    let (n, m) = (a.rows(), a.cols());
    let col_sig = |x: &PolyMatrix, j: usize| {
        let mut v: Vec<String> = (0..n).map(|i| key(&up_to_sign(x.get(i, j)))).collect();
        v.sort();
        v
    };
    let sa: Vec<Vec<String>> = (0..m).map(|j| col_sig(a, j)).collect();
    let sb: Vec<Vec<String>> = (0..m).map(|j| col_sig(b, j)).collect();
    {
        let mut x = sa.clone();
        let mut y = sb.clone();
        x.sort();
        y.sort();
        if x != y {
            return false;
        }
    }
    // multiset of rows restricted to the first k columns, up to row sign
    let row_keys = |rows: Vec<Vec<Poly>>| -> BTreeMap<Vec<String>, usize> {
        let mut out = BTreeMap::new();
        for r in rows {
            let pos: Vec<String> = r.iter().map(key).collect();
            let neg: Vec<String> = r.iter().map(|p| key(&-p)).collect();
            *out.entry(pos.min(neg)).or_insert(0) += 1;
        }
        out
    };
    let b_keys: Vec<BTreeMap<Vec<String>, usize>> = (0..=m)
        .map(|k| row_keys((0..n).map(|i| (0..k).map(|j| b.get(i, j).clone()).collect()).collect()))
        .collect();

    fn rec(
        a: &PolyMatrix,
        assign: &mut Vec<(usize, bool)>,
        used: &mut Vec<bool>,
        sa: &[Vec<String>],
        sb: &[Vec<String>],
        b_keys: &[BTreeMap<Vec<String>, usize>],
        row_keys: &dyn Fn(Vec<Vec<Poly>>) -> BTreeMap<Vec<String>, usize>,
    ) -> bool {
        let k = assign.len();
        let partial: Vec<Vec<Poly>> = (0..a.rows())
            .map(|i| {
                assign
                    .iter()
                    .map(|&(c, neg)| if neg { -a.get(i, c) } else { a.get(i, c).clone() })
                    .collect()
            })
            .collect();
        if row_keys(partial) != b_keys[k] {
            return false;
        }
        if k == sa.len() {
            return true;
        }
        for c in 0..sa.len() {
            if used[c] || sa[c] != sb[k] {
                continue;
            }
            used[c] = true;
            for neg in [false, true] {
                assign.push((c, neg));
                if rec(a, assign, used, sa, sb, b_keys, row_keys) {
                    return true;
                }
                assign.pop();
            }
            used[c] = false;
        }
        false
    }
    rec(a, &mut Vec::new(), &mut vec![false; m], &sa, &sb, &b_keys, &row_keys)
}

/// Equivalence after the same greedy row cleanup on both sides: the
/// cleanup is an invertible row transformation, so this still certifies
/// isomorphic cokernels.
pub fn presentation_equivalent(a: &PolyMatrix, b: &PolyMatrix) -> bool {
    let clean = |m: &PolyMatrix| {
        let mut rows = m.to_rows();
        crate::present::sparsify(&mut rows);
        PolyMatrix::from_rows(rows).unwrap_or_else(|_| m.clone())
    };
    signed_permutation_equivalent(&clean(a), &clean(b))
}

/// Serializable verification report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub word: Option<String>,
    pub size: usize,
    pub ok: bool,
    pub det_exponents: Option<DetExponents>,
    pub minimal: bool,
    pub reduced: bool,
    pub branch_valuations: Option<serde_json::Value>,
    pub lambda0: Option<String>,
    pub lambda_mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Full report: MF check, and branch invariants when the check passes.
pub fn report(word: Option<String>, q: &PolyMatrix, curve: &CurveData) -> (MFReport, ReportJson) {
    let r = is_mf(q, curve);
    let inv = r.ok.then(|| branch_invariants(q, curve, &Rational::from_integer(DEFAULT_LAMBDA0.into())));
    let json = ReportJson {
        word,
        size: r.size,
        ok: r.ok,
        det_exponents: r.det_exponents.clone(),
        minimal: r.minimal,
        reduced: r.reduced,
        branch_valuations: inv.as_ref().map(BranchInvariant::to_json),
        lambda0: inv.as_ref().map(|i| i.lambda0.to_string()),
        lambda_mode: curve.mode.to_string(),
        detail: r.detail.clone(),
    };
    (r, json)
}

/// dᵢ | dᵢ₊₁, every nonzero dᵢ monic, zeros only at the end.
pub fn divisor_chain_ok(d: &[UniPoly]) -> bool {
    d.windows(2).all(|w| w[1].is_zero() || (!w[0].is_zero() && w[0].divides(&w[1])))
        && d.iter().all(|p| p.is_zero() || p.lc().is_some_and(One::is_one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::build_q;

    fn u(s: &str) -> UniPoly {
        UniPoly::from_poly(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn local_matches_exact() {
        let c = CurveData::symbolic();
        let two = Rational::from_integer(2.into());
        for w in ["a:2", "b:1:l", "d:1", "cp:1:r"] {
            let q = crate::factor::build_q(&w.parse().unwrap(), &c).q;
            for b in c.branches(&two) {
                let m = to_univariate(&branch_eval(&q, &b)).unwrap();
                let mut exact: Vec<Option<usize>> = snf_univariate(&m).iter().map(UniPoly::valuation).collect();
                exact.sort_by_key(|v| v.unwrap_or(usize::MAX));
                for prec in [1, 3, 12] {
                    assert_eq!(local_valuations(&m, prec), cap_valuations(&exact, prec), "{w} {prec}");
                }
            }
        }
    }

    #[test]
    fn qa2_report() {
        let c = CurveData::symbolic();
        let q = build_q(&"a:2".parse().unwrap(), &c).q;
        let r = is_mf(&q, &c);
        assert!(r.ok && r.minimal && r.reduced);
        assert_eq!(r.det_exponents, Some(DetExponents { x: 5, z: 3, zp: 3 }));
    }

    #[test]
    fn trivial_factorizations() {
        let c = CurveData::symbolic();
        let fi = PolyMatrix::scalar(2, c.f.clone());
        let r = is_mf(&fi, &c);
        assert!(r.ok && r.minimal && !r.reduced);
        assert_eq!(r.pair.unwrap().psi, PolyMatrix::identity(2));
        let r = is_mf(&PolyMatrix::identity(2), &c);
        assert!(!r.minimal && !r.passed());
        let r = is_mf(&PolyMatrix::zeros(2, 2), &c);
        assert!(!r.ok);
    }

    #[test]
    fn snf_examples() {
        let m = vec![vec![u("t"), u("1")], vec![u("0"), u("t")]];
        assert_eq!(snf_minors(&m), vec![u("1"), u("t^2")]);
        assert_eq!(snf_elimination(&m), vec![u("1"), u("t^2")]);
        let d = vec![vec![u("t"), u("0")], vec![u("0"), u("t")]];
        assert_eq!(snf_univariate(&d), vec![u("t"), u("t")]);
        let z = vec![vec![u("0"); 2]; 2];
        assert_eq!(snf_univariate(&z), vec![UniPoly::zero(), UniPoly::zero()]);
        assert_eq!(snf_elimination(&z), vec![UniPoly::zero(), UniPoly::zero()]);
    }

    #[test]
    fn branch_valuations_of_x() {
        let c = CurveData::symbolic();
        let q = PolyMatrix::from_rows(vec![vec![Poly::x()]]).unwrap();
        let inv = branch_invariants(&q, &c, &Rational::from_integer(2.into()));
        assert_eq!(inv.valuations, [vec![None], vec![Some(2)], vec![Some(2)]]);
    }

    #[test]
    fn equivalence() {
        let c = CurveData::symbolic();
        let q = build_q(&"a:2".parse().unwrap(), &c).q;
        let perm = [5, 3, 0, 1, 4, 2];
        let shuffled = PolyMatrix::from_fn(6, 6, |i, j| {
            let e = q.get(perm[i], perm[(j + 2) % 6]).clone();
            if j == 1 { -&e } else { e }
        });
        assert!(signed_permutation_equivalent(&q, &shuffled));
        let other = build_q(&"c:2".parse().unwrap(), &c).q;
        assert!(!signed_permutation_equivalent(&q, &other.transpose()));
    }
}
