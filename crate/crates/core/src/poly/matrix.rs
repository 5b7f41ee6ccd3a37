use super::{Poly, PolyError, Rational, Var};
use std::fmt;

/// Dense row-major matrix of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self, PolyError> {
        if entries.len() != rows * cols {
            return Err(PolyError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(PolyMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Poly::one())
    }

    pub fn scalar(n: usize, p: Poly) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self, PolyError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(PolyError::ShapeMismatch("ragged rows".into()));
        }
        Ok(PolyMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn substitute(&self, bindings: &[(Var, Poly)]) -> Self {
        self.map(|p| p.substitute(bindings))
    }

    pub fn scale(&self, p: &Poly) -> Self {
        self.map(|e| e * p)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> Result<Self, PolyError> {
        if self.cols != rhs.rows {
            return Err(PolyError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<Self, PolyError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(PolyError::ShapeMismatch("sum of differently shaped matrices".into()));
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        })
    }

    /// Keep the listed rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Delete row `r` and column `c`.
    pub fn minor_matrix(&self, r: usize, c: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.select(&rows, &cols)
    }

    fn require_square(&self) -> Result<usize, PolyError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(PolyError::NotSquare(self.rows, self.cols))
        }
    }

    /// Determinant. The matrix is first split along its structural
    /// block-triangular form (perfect matching + strongly connected
    /// components of the sparsity pattern); each diagonal block is then
    /// handled by fraction-free elimination. For the mostly triangular
    /// matrices of this crate that keeps intermediate growth negligible.
    pub fn det(&self) -> Result<Poly, PolyError> {
        let n = self.require_square()?;
        let pattern: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| !self.get(i, j).is_zero()).collect())
            .collect();
        let Some(blocks) = block_triangular(&pattern) else {
            return Ok(Poly::zero());
        };
        let mut acc = Poly::int(blocks.sign);
        for (rows, cols) in &blocks.blocks {
            let d = bareiss(self.select(rows, cols));
            if d.is_zero() {
                return Ok(d);
            }
            acc = &acc * &d;
        }
        Ok(acc)
    }

    /// Plain fraction-free (Bareiss) determinant, no structural splitting.
    pub fn det_bareiss(&self) -> Result<Poly, PolyError> {
        self.require_square()?;
        Ok(bareiss(self.clone()))
    }

    /// Classical adjugate, entry (i, j) = (-1)^(i+j) det(minor(j, i)).
    pub fn adjugate(&self) -> Result<Self, PolyError> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(Self::zeros(0, 0));
        }
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let d = self.minor_matrix(j, i).det()?;
                out.set(i, j, if (i + j) % 2 == 0 { d } else { -d });
            }
        }
        Ok(out)
    }

    /// Divide every entry exactly by `d`.
    pub fn exact_div(&self, d: &Poly) -> Result<Self, PolyError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.exact_div(d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|e| e.scale(c))
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        let mut widths = vec![0; self.cols];
        for (k, c) in cells.iter().enumerate() {
            widths[k % self.cols.max(1)] = widths[k % self.cols.max(1)].max(c.len());
        }
        for i in 0..self.rows {
            f.write_str("[ ")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{:>w$}", cells[i * self.cols + j], w = widths[j])?;
            }
            f.write_str(" ]\n")?;
        }
        Ok(())
    }
}

fn bareiss(mut m: PolyMatrix) -> Poly {
    let n = m.rows;
    if n == 0 {
        return Poly::one();
    }
    let mut sign = 1i64;
    let mut prev = Poly::one();
    for k in 0..n {
        // prefer the sparsest nonzero pivot in the column
        let piv = (k..n)
            .filter(|&i| !m.get(i, k).is_zero())
            .min_by_key(|&i| m.get(i, k).num_terms());
        let Some(p) = piv else {
            return Poly::zero();
        };
        if p != k {
            for j in 0..n {
                m.entries.swap(p * n + j, k * n + j);
            }
            sign = -sign;
        }
        let pivot = m.get(k, k).clone();
        for i in k + 1..n {
            let lead = m.get(i, k).clone();
            for j in k + 1..n {
                let num = &(&pivot * m.get(i, j)) - &(&lead * m.get(k, j));
                // Sylvester's identity makes this division exact.
                let v = num.exact_div(&prev).expect("Bareiss step must divide exactly");
                m.set(i, j, v);
            }
            m.set(i, k, Poly::zero());
        }
        prev = pivot;
    }
    let d = m.get(n - 1, n - 1).clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub(crate) struct BlockForm {
    /// Sign of the column permutation that puts a perfect matching on the
    /// diagonal.
    pub sign: i64,
    /// Diagonal blocks as (rows, matched columns), in a block-triangular order.
    pub blocks: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Structural block-triangular form of a square sparsity pattern, or `None`
/// if the pattern admits no perfect matching (structurally singular).
pub(crate) fn block_triangular(pattern: &[Vec<bool>]) -> Option<BlockForm> {
    let n = pattern.len();
    // Kuhn's augmenting paths: match_col[c] = row
    let mut match_col: Vec<Option<usize>> = vec![None; n];
    fn augment(
        r: usize,
        pattern: &[Vec<bool>],
        seen: &mut [bool],
        match_col: &mut [Option<usize>],
    ) -> bool {
        for c in 0..pattern.len() {
            if pattern[r][c] && !seen[c] {
                seen[c] = true;
                if match_col[c].is_none_or(|r2| augment(r2, pattern, seen, match_col)) {
                    match_col[c] = Some(r);
                    return true;
                }
            }
        }
        false
    }
    for r in 0..n {
        let mut seen = vec![false; n];
        if !augment(r, pattern, &mut seen, &mut match_col) {
            return None;
        }
    }
    let mut col_of_row = vec![0; n];
    for (c, r) in match_col.iter().enumerate() {
        col_of_row[r.unwrap()] = c;
    }
    let sign = perm_sign(&col_of_row);

    // Tarjan on rows: i -> k when row i touches the column matched to k.
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&k| k != i && pattern[i][col_of_row[k]]).collect())
        .collect();
    let sccs = tarjan(&succ);
    let blocks = sccs
        .into_iter()
        .map(|mut comp| {
            comp.sort_unstable();
            let cols = comp.iter().map(|&r| col_of_row[r]).collect();
            (comp, cols)
        })
        .collect();
    Some(BlockForm { sign, blocks })
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn tarjan(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct St<'a> {
        succ: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn visit(s: &mut St, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for k in 0..s.succ[v].len() {
            let w = s.succ[v][k];
            match s.index[w] {
                None => {
                    visit(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(iw) if s.on[w] => s.low[v] = s.low[v].min(iw),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = s.stack.pop().unwrap();
                s.on[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            s.out.push(comp);
        }
    }
    let n = succ.len();
    let mut s = St {
        succ,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if s.index[v].is_none() {
            visit(&mut s, v);
        }
    }
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn small_dets() {
        assert_eq!(PolyMatrix::identity(4).det().unwrap(), Poly::one());
        assert_eq!(PolyMatrix::zeros(0, 0).det().unwrap(), Poly::one());
        let rep = m(&[&["x", "y", "1"], &["x", "y", "1"], &["l", "0", "t"]]);
        assert!(rep.det().unwrap().is_zero());
        assert!(rep.det_bareiss().unwrap().is_zero());
        let a = m(&[&["0", "x"], &["y", "0"]]);
        assert_eq!(a.det().unwrap(), p("-x*y"));
        assert_eq!(a.det_bareiss().unwrap(), p("-x*y"));
        assert!(matches!(
            PolyMatrix::zeros(2, 3).det(),
            Err(PolyError::NotSquare(2, 3))
        ));
    }

    #[test]
    fn adjugate_closed_forms() {
        assert_eq!(PolyMatrix::identity(3).adjugate().unwrap(), PolyMatrix::identity(3));
        let d = m(&[&["x", "0"], &["0", "y"]]);
        assert_eq!(d.adjugate().unwrap(), m(&[&["y", "0"], &["0", "x"]]));
        let g = m(&[&["x", "y"], &["l", "t"]]);
        let adj = g.adjugate().unwrap();
        let det = g.det().unwrap();
        assert_eq!(g.mul(&adj).unwrap(), PolyMatrix::scalar(2, det.clone()));
        assert_eq!(adj.mul(&g).unwrap(), PolyMatrix::scalar(2, det));
    }

    #[test]
    fn permutation_sign() {
        // anti-diagonal 3x3 of ones: det = -1
        let a = m(&[&["0", "0", "1"], &["0", "1", "0"], &["1", "0", "0"]]);
        assert_eq!(a.det().unwrap(), Poly::int(-1));
    }
}
