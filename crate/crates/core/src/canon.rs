//! Canonical striped matrices: the free-term form A₀ and the P-matrices
//! attached to each word family.

use crate::curve::StripeKind;
use crate::pencil::BlockKind;
use crate::poly::{PolyError, PolyMatrix, Poly};
use crate::words::{Family, Word};
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

/// Entries allowed in a striped matrix: 0, 1, t₁, t₂ and t₁₂ = t₁ + t₂.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Zero,
    One,
    T1,
    T2,
    T12,
}

impl Entry {
    /// (constant, t₁-coefficient, t₂-coefficient).
    pub fn parts(self) -> (i64, i64, i64) {
        match self {
            Entry::Zero => (0, 0, 0),
            Entry::One => (1, 0, 0),
            Entry::T1 => (0, 1, 0),
            Entry::T2 => (0, 0, 1),
            Entry::T12 => (0, 1, 1),
        }
    }

    pub fn is_zero(self) -> bool {
        self == Entry::Zero
    }

    fn latex(self) -> &'static str {
        match self {
            Entry::Zero => "0",
            Entry::One => "1",
            Entry::T1 => "t_1",
            Entry::T2 => "t_2",
            Entry::T12 => "t_{12}",
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entry::Zero => "0",
            Entry::One => "1",
            Entry::T1 => "t1",
            Entry::T2 => "t2",
            Entry::T12 => "t12",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripe {
    pub kind: StripeKind,
    pub rows: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripedMatrix {
    rows: usize,
    cols: usize,
    body: Vec<Entry>,
    stripes: Vec<Stripe>,
    col_labels: Vec<String>,
    /// Positions of t₁₂ entries standing for the unit 1₁₂ of the target
    /// stripe (the preimage under multiplication by t₁₂, R′₁₂ → R₁₂).
    embedded_units: BTreeSet<(usize, usize)>,
}

impl StripedMatrix {
    /// `row_kinds[i]` is the stripe of row i; consecutive equal kinds
    /// merge into one stripe.
    pub fn new(
        rows: Vec<Vec<Entry>>,
        row_kinds: &[StripeKind],
        cols: usize,
    ) -> Result<StripedMatrix, PolyError> {
        if rows.len() != row_kinds.len() {
            return Err(PolyError::ShapeMismatch(format!(
                "{} rows but {} stripe labels",
                rows.len(),
                row_kinds.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(PolyError::ShapeMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        let mut stripes: Vec<Stripe> = Vec::new();
        for (i, &kind) in row_kinds.iter().enumerate() {
            match stripes.last_mut() {
                Some(s) if s.kind == kind => s.rows.end = i + 1,
                _ => stripes.push(Stripe { kind, rows: i..i + 1 }),
            }
        }
        Ok(StripedMatrix {
            rows: rows.len(),
            cols,
            body: rows.into_iter().flatten().collect(),
            stripes,
            col_labels: (1..=cols).map(|j| format!("v{j}")).collect(),
            embedded_units: BTreeSet::new(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Entry {
        self.body[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Entry] {
        &self.body[i * self.cols..(i + 1) * self.cols]
    }

    pub fn stripes(&self) -> &[Stripe] {
        &self.stripes
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn row_kind(&self, i: usize) -> StripeKind {
        self.stripes
            .iter()
            .find(|s| s.rows.contains(&i))
            .map(|s| s.kind)
            .expect("stripes partition the rows")
    }

    pub fn row_kinds(&self) -> Vec<StripeKind> {
        (0..self.rows).map(|i| self.row_kind(i)).collect()
    }

    pub fn is_embedded_unit(&self, i: usize, j: usize) -> bool {
        self.embedded_units.contains(&(i, j))
    }

    pub fn embedded_units(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.embedded_units.iter().copied()
    }

    /// Drop rows and columns (sorted or not); stripes, labels and marks follow.
    pub fn delete(&self, rows: &[usize], cols: &[usize]) -> StripedMatrix {
        let keep_r: Vec<usize> = (0..self.rows).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|j| !cols.contains(j)).collect();
        let body = keep_r
            .iter()
            .map(|&i| keep_c.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        let kinds: Vec<StripeKind> = keep_r.iter().map(|&i| self.row_kind(i)).collect();
        let mut out = StripedMatrix::new(body, &kinds, keep_c.len()).expect("consistent shape");
        out.col_labels = keep_c.iter().map(|&j| self.col_labels[j].clone()).collect();
        out.embedded_units = self
            .embedded_units
            .iter()
            .filter_map(|&(i, j)| {
                let ni = keep_r.iter().position(|&r| r == i)?;
                let nj = keep_c.iter().position(|&c| c == j)?;
                Some((ni, nj))
            })
            .collect();
        out
    }

    /// Entrywise t₁ ↦ a, t₂ ↦ b (t₁₂ ↦ a + b).
    pub fn to_poly_matrix(&self, t1: &Poly, t2: &Poly) -> PolyMatrix {
        PolyMatrix::from_fn(self.rows, self.cols, |i, j| {
            let (c, a, b) = self.get(i, j).parts();
            &(&Poly::int(c) + &(t1 * &Poly::int(a))) + &(t2 * &Poly::int(b))
        })
    }

    /// Window as a pair of 0/1 coefficient matrices (X₁, X₂) for t₁, t₂.
    pub fn coefficients(&self, rows: Range<usize>, cols: Range<usize>) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let pick = |which: usize| {
            rows.clone()
                .map(|i| {
                    cols.clone()
                        .map(|j| {
                            let (_, a, b) = self.get(i, j).parts();
                            if which == 1 { a } else { b }
                        })
                        .collect()
                })
                .collect()
        };
        (pick(1), pick(2))
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let e = self.get(i, j).to_string();
                        if self.is_embedded_unit(i, j) { format!("{e}*") } else { e }
                    })
                    .collect()
            })
            .collect();
        let mut width = vec![0; self.cols];
        for j in 0..self.cols {
            width[j] = cells
                .iter()
                .map(|r| r[j].chars().count())
                .chain(std::iter::once(self.col_labels[j].len()))
                .max()
                .unwrap_or(1);
        }
        let tag = self.stripes.iter().map(|s| s.kind.label().len()).max().unwrap_or(0);
        let line = |lead: &str, items: Vec<String>| -> String {
            let body: Vec<String> = items
                .iter()
                .zip(&width)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            format!("{lead:<tag$} | {}\n", body.join("  "))
        };
        let mut out = line("", self.col_labels.clone());
        let rule_len = tag + 3 + width.iter().sum::<usize>() + 2 * self.cols.saturating_sub(1);
        for s in &self.stripes {
            out.push_str(&"-".repeat(rule_len));
            out.push('\n');
            for i in s.rows.clone() {
                let lead = if i == s.rows.start { s.kind.label() } else { "" };
                out.push_str(&line(lead, cells[i].clone()));
            }
        }
        if !self.embedded_units.is_empty() {
            out.push_str("(* = t12 read as the unit 1_12)\n");
        }
        out
    }

    /// LaTeX `array` with a horizontal rule between stripes.
    pub fn to_latex(&self) -> String {
        let mut out = format!("\\left(\\begin{{array}}{{{}}}\n", "c".repeat(self.cols.max(1)));
        for (k, s) in self.stripes.iter().enumerate() {
            if k > 0 {
                out.push_str("\\hline\n");
            }
            for i in s.rows.clone() {
                let row: Vec<&str> = self.row(i).iter().map(|e| e.latex()).collect();
                out.push_str(&row.join(" & "));
                out.push_str(" \\\\\n");
            }
        }
        out.push_str("\\end{array}\\right)");
        out
    }
}

impl fmt::Display for StripedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Sizes for the free-term form A₀. Identity blocks sit at
/// (row group, column group): I₁ at (0,3) and (1,1), I₂ at (3,2) and
/// (4,1), I₁₂ at (6,4) and (8,5); column group 0 and row groups
/// 2, 5, 7, 9 are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BlockSpec {
    pub i1_a: usize,
    pub i1_b: usize,
    pub i2_a: usize,
    pub i2_b: usize,
    pub i12_a: usize,
    pub i12_b: usize,
    pub zero_cols: usize,
    /// heights of the zero row groups 2, 5, 7, 9
    pub zero_rows: [usize; 4],
}

impl BlockSpec {
    pub fn uniform(k: usize) -> BlockSpec {
        BlockSpec {
            i1_a: k,
            i1_b: k,
            i2_a: k,
            i2_b: k,
            i12_a: k,
            i12_b: k,
            zero_cols: k,
            zero_rows: [k; 4],
        }
    }

    pub fn row_groups(&self) -> [usize; 10] {
        let z = self.zero_rows;
        [self.i1_a, self.i1_b, z[0], self.i2_a, self.i2_b, z[1], self.i12_a, z[2], self.i12_b, z[3]]
    }

    pub fn col_groups(&self) -> Result<[usize; 6], PolyError> {
        // column group 1 carries both I₁ (row group 1) and I₂ (row group 4)
        if self.i1_b != self.i2_b {
            return Err(PolyError::ShapeMismatch(format!(
                "column group 1 is shared by I1 ({}) and I2 ({})",
                self.i1_b, self.i2_b
            )));
        }
        Ok([self.zero_cols, self.i1_b, self.i2_a, self.i1_a, self.i12_a, self.i12_b])
    }
}

const A0_ROW_KINDS: [StripeKind; 10] = [
    StripeKind::R1,
    StripeKind::R1,
    StripeKind::R1,
    StripeKind::R2,
    StripeKind::R2,
    StripeKind::R2,
    StripeKind::R12Prime,
    StripeKind::R12Prime,
    StripeKind::R12,
    StripeKind::R12,
];

// (row group, column group) of each identity block
const A0_IDENTITIES: [(usize, usize); 6] = [(0, 3), (1, 1), (3, 2), (4, 1), (6, 4), (8, 5)];

pub fn build_a0(spec: &BlockSpec) -> Result<StripedMatrix, PolyError> {
    let cg = spec.col_groups()?;
    let rg = spec.row_groups();
    let offsets = |g: &[usize]| {
        g.iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect::<Vec<_>>()
    };
    let (ro, co) = (offsets(&rg), offsets(&cg));
    let rows: usize = rg.iter().sum();
    let cols: usize = cg.iter().sum();
    let mut body = vec![vec![Entry::Zero; cols]; rows];
    for (r, c) in A0_IDENTITIES {
        debug_assert_eq!(rg[r], cg[c]);
        for k in 0..rg[r] {
            body[ro[r] + k][co[c] + k] = Entry::One;
        }
    }
    let kinds: Vec<StripeKind> = (0..10)
        .flat_map(|g| std::iter::repeat(A0_ROW_KINDS[g]).take(rg[g]))
        .collect();
    StripedMatrix::new(body, &kinds, cols)
}

fn grid(rows: usize, cols: usize) -> Vec<Vec<Entry>> {
    vec![vec![Entry::Zero; cols]; rows]
}

/// t₁ on the diagonal, t₂ on the superdiagonal (`swap` exchanges them).
fn bidiagonal(n: usize, cols: usize, swap: bool) -> Vec<Vec<Entry>> {
    let (d, s) = if swap { (Entry::T2, Entry::T1) } else { (Entry::T1, Entry::T2) };
    let mut m = grid(n, cols);
    for i in 0..n {
        m[i][i] = d;
        if i + 1 < cols {
            m[i][i + 1] = s;
        }
    }
    m
}

fn transpose(m: &[Vec<Entry>]) -> Vec<Vec<Entry>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn square(n: usize, swap: bool) -> Vec<Vec<Entry>> {
    bidiagonal(n, n, swap)
}

/// The P-matrix of the word's family at size n. Cuts are ignored here:
/// truncation happens on presentations.
pub fn build_p(w: &Word) -> StripedMatrix {
    use StripeKind::*;
    let n = w.n;
    assert!(n >= 1, "word size must be positive");
    let mut units = BTreeSet::new();
    let (rows, kinds): (Vec<Vec<Entry>>, Vec<StripeKind>) = match w.family {
        Family::A | Family::B => {
            let b = w.family == Family::B;
            let mut rows = grid(2, n + 1);
            if b {
                rows[0][0] = Entry::T1;
                rows[1][n] = Entry::One;
            } else {
                rows[0][n] = Entry::One;
                rows[1][0] = Entry::T2;
            }
            let mut blk = square(n, b);
            for (i, r) in blk.iter_mut().enumerate() {
                r.push(if i + 1 == n { if b { Entry::T1 } else { Entry::T2 } } else { Entry::Zero });
            }
            rows.extend(blk);
            (rows, [vec![R1, R2], vec![R12Prime; n]].concat())
        }
        Family::C => {
            let mut rows = grid(2, n + 1);
            rows[0][0] = Entry::T1;
            rows[1][0] = Entry::T2;
            rows.extend(bidiagonal(n, n + 1, false));
            (rows, [vec![R1, R2], vec![R12Prime; n]].concat())
        }
        Family::D => {
            let mut rows = grid(2, n + 2);
            rows[0][n] = Entry::One;
            rows[1][n + 1] = Entry::One;
            for (i, mut r) in transpose(&bidiagonal(n, n + 1, false)).into_iter().enumerate() {
                let last = i == n;
                r.push(if last { Entry::T2 } else { Entry::Zero });
                r.push(if last { Entry::T1 } else { Entry::Zero });
                rows.push(r);
            }
            (rows, [vec![R1, R2], vec![R12Prime; n + 1]].concat())
        }
        Family::CPrime => {
            let mut rows = grid(2, n + 2);
            rows[0][0] = Entry::T1;
            rows[1][0] = Entry::T2;
            for (i, mut r) in transpose(&square(n + 1, true)).into_iter().enumerate() {
                r.push(if i == 0 { Entry::T12 } else { Entry::Zero });
                rows.push(r);
            }
            units.insert((2, n + 1));
            (rows, [vec![R1, R2], vec![R12Prime; n + 1]].concat())
        }
        Family::DPrime => {
            let mut rows = grid(2, n + 3);
            rows[0][n + 1] = Entry::One;
            rows[1][n + 2] = Entry::One;
            for (i, mut r) in transpose(&square(n + 1, false)).into_iter().enumerate() {
                let last = i == n;
                r.push(if last { Entry::T2 } else { Entry::Zero });
                r.push(if last { Entry::T1 } else { Entry::Zero });
                rows.push(r);
            }
            let mut tail = vec![Entry::Zero; n + 3];
            tail[n] = Entry::T12;
            rows.push(tail);
            units.insert((n + 3, n));
            (rows, [vec![R1, R2], vec![R12Prime; n + 1], vec![R12]].concat())
        }
    };
    let cols = rows[0].len();
    let mut out = StripedMatrix::new(rows, &kinds, cols).expect("builders produce consistent shapes");
    out.embedded_units = units;
    out
}

/// Where the pencil part sits in `build_p` output, and what it is:
/// (rows, cols, block kind, block size, transposed).
pub fn pencil_window(family: Family, n: usize) -> (Range<usize>, Range<usize>, BlockKind, usize, bool) {
    match family {
        Family::A => (2..n + 2, 0..n, BlockKind::A, n, false),
        Family::B => (2..n + 2, 0..n, BlockKind::B, n, false),
        Family::C => (2..n + 2, 0..n + 1, BlockKind::C, n, false),
        Family::D => (2..n + 3, 0..n, BlockKind::D, n, false),
        Family::CPrime => (2..n + 3, 0..n + 1, BlockKind::B, n + 1, true),
        Family::DPrime => (2..n + 3, 0..n + 1, BlockKind::A, n + 1, true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Entry::*;

    fn p(code: &str) -> StripedMatrix {
        build_p(&code.parse().unwrap())
    }

    fn body(m: &StripedMatrix) -> Vec<Vec<Entry>> {
        (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
    }

    #[test]
    fn p_a2() {
        let m = p("a:2");
        assert_eq!(
            body(&m),
            vec![vec![Zero, Zero, One], vec![T2, Zero, Zero], vec![T1, T2, Zero], vec![Zero, T1, T2]]
        );
        let kinds: Vec<_> = m.stripes().iter().map(|s| (s.kind, s.rows.clone())).collect();
        assert_eq!(
            kinds,
            vec![(StripeKind::R1, 0..1), (StripeKind::R2, 1..2), (StripeKind::R12Prime, 2..4)]
        );
    }

    #[test]
    fn p_c1_and_dp1() {
        assert_eq!(body(&p("c:1")), vec![vec![T1, Zero], vec![T2, Zero], vec![T1, T2]]);
        let m = p("dp:1");
        assert_eq!((m.rows(), m.cols()), (5, 4));
        assert_eq!(m.row(4), &[Zero, T12, Zero, Zero]);
        assert!(m.is_embedded_unit(4, 1));
        assert_eq!(m.row_kind(4), StripeKind::R12);
    }

    #[test]
    fn shapes() {
        for n in 1..=5 {
            let dims = |c: &str| {
                let m = p(&format!("{c}:{n}"));
                (m.rows(), m.cols())
            };
            assert_eq!(dims("a"), (n + 2, n + 1));
            assert_eq!(dims("b"), (n + 2, n + 1));
            assert_eq!(dims("c"), (n + 2, n + 1));
            assert_eq!(dims("d"), (n + 3, n + 2));
            assert_eq!(dims("cp"), (n + 3, n + 2));
            assert_eq!(dims("dp"), (n + 4, n + 3));
        }
    }

    #[test]
    fn a0_layout() {
        assert_eq!(build_a0(&BlockSpec::default()).unwrap().rows(), 0);
        let m = build_a0(&BlockSpec::uniform(1)).unwrap();
        assert_eq!((m.rows(), m.cols()), (10, 6));
        let ones: Vec<(usize, usize)> = (0..10)
            .flat_map(|i| (0..6).map(move |j| (i, j)))
            .filter(|&(i, j)| m.get(i, j) == One)
            .collect();
        assert_eq!(ones, A0_IDENTITIES.to_vec());
        let bad = BlockSpec { i1_b: 2, ..BlockSpec::uniform(1) };
        assert!(build_a0(&bad).is_err());
        let grown = build_a0(&BlockSpec { i1_a: 2, ..BlockSpec::uniform(1) }).unwrap();
        assert_eq!((grown.rows(), grown.cols()), (11, 7));
    }

    #[test]
    fn emitters() {
        let m = p("cp:1");
        let t = m.to_text();
        assert!(t.contains("R12'") && t.contains("t12*"));
        let l = m.to_latex();
        assert_eq!(l.matches("\\hline").count(), 2);
    }
}
