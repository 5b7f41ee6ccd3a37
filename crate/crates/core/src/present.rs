//! From a striped P-matrix to generators and relations over R, and from
//! there to a minimal presentation by eliminating unit pivots.

use crate::canon::{build_p, Entry, StripedMatrix};
use crate::curve::{CurveData, StripeKind};
use crate::poly::{Poly, PolyMatrix, Rational};
use crate::words::{Family, Word};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PresentError {
    #[error("entry {entry} at ({row}, {col}) is outside the alphabet 0, 1, t1, t2, t12")]
    UnknownSymbol { row: usize, col: usize, entry: String },
    #[error("unit {0} is not a rational constant")]
    NonConstantUnit(String),
    #[error("elimination did not terminate within {0} steps")]
    NonTerminating(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// u for a row of the given stripe
    Row(StripeKind),
    /// ū = t₁·u on an R′₁₂ row, killed by x
    Companion,
    /// v for a column
    Column,
}

impl GenKind {
    /// Pivot preference: companions first, then R₁₂-type rows, then R₁ rows.
    fn rank(self) -> u8 {
        match self {
            GenKind::Companion => 0,
            GenKind::Row(StripeKind::R12 | StripeKind::R12Prime) => 1,
            GenKind::Row(StripeKind::R1) => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub kind: GenKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Generator>,
    /// rows are relations, columns follow `generators`
    pub relations: PolyMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPresentation {
    pub q: PolyMatrix,
    pub labels: Vec<String>,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.generators.iter().map(|g| g.label.as_str()).collect();
        writeln!(f, "generators: {}", names.join(", "))?;
        write!(f, "{}", self.relations)
    }
}

fn row_labels(kinds: &[StripeKind]) -> Vec<Generator> {
    let mut out = Vec::new();
    let mut k12p = 0;
    let mut k12 = 0;
    for &kind in kinds {
        match kind {
            StripeKind::R1 => out.push(Generator { label: "u^1".into(), kind: GenKind::Row(kind) }),
            StripeKind::R2 => out.push(Generator { label: "u^2".into(), kind: GenKind::Row(kind) }),
            StripeKind::R12Prime => {
                k12p += 1;
                out.push(Generator { label: format!("u{k12p}"), kind: GenKind::Row(kind) });
                out.push(Generator { label: format!("ub{k12p}"), kind: GenKind::Companion });
            }
            StripeKind::R12 => {
                k12 += 1;
                out.push(Generator { label: format!("w{k12}"), kind: GenKind::Row(kind) });
            }
        }
    }
    out
}

/// Generators: per row u (and ū on R′₁₂ rows), then one v per column.
/// Relations: ann·g = 0 for each row generator, then for each column
/// z′·v_j − Σᵢ lift(P_ij) = 0, where on R′₁₂ rows 1 ↦ u, t₁ ↦ ū,
/// t₂ ↦ y·u − ū, and on other rows any t acts as y. Marked t₁₂ entries
/// count as 1.
pub fn relations_from_p(p: &StripedMatrix, curve: &CurveData) -> Result<Presentation, PresentError> {
    let kinds = p.row_kinds();
    let mut generators = row_labels(&kinds);
    // (u, ū) column index per row
    let mut row_gen = Vec::with_capacity(kinds.len());
    let mut g = 0;
    for &kind in &kinds {
        let companion = kind.has_companion().then_some(g + 1);
        row_gen.push((g, companion));
        g += if companion.is_some() { 2 } else { 1 };
    }
    let vstart = generators.len();
    generators.extend((1..=p.cols()).map(|j| Generator { label: format!("v{j}"), kind: GenKind::Column }));
    let ng = generators.len();

    let mut rows: Vec<Vec<Poly>> = Vec::new();
    for (gi, gen) in generators[..vstart].iter().enumerate() {
        let ann = match gen.kind {
            GenKind::Row(kind) => kind.annihilator(curve),
            GenKind::Companion => Poly::x(),
            GenKind::Column => unreachable!(),
        };
        let mut r = vec![Poly::zero(); ng];
        r[gi] = ann;
        rows.push(r);
    }
    let y = Poly::y();
    for j in 0..p.cols() {
        let mut r = vec![Poly::zero(); ng];
        r[vstart + j] = curve.zp.clone();
        for i in 0..kinds.len() {
            let mut e = p.get(i, j);
            if e.is_zero() {
                continue;
            }
            if p.is_embedded_unit(i, j) {
                if e != Entry::T12 {
                    return Err(PresentError::UnknownSymbol { row: i, col: j, entry: format!("{e}*") });
                }
                e = Entry::One;
            }
            let (a, b, c) = e.parts();
            let (u, ub) = row_gen[i];
            match ub {
                Some(ub) => {
                    r[u] = &r[u] - &(&Poly::int(a) + &(&y * &Poly::int(c)));
                    r[ub] = &r[ub] - &Poly::int(b - c);
                }
                None => {
                    r[u] = &r[u] - &(&Poly::int(a) + &(&y * &Poly::int(b + c)));
                }
            }
        }
        rows.push(r);
    }
    let relations = PolyMatrix::from_rows(rows).unwrap_or_else(|_| PolyMatrix::zeros(0, ng));
    Ok(Presentation { generators, relations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotOrder {
    /// fewest unit occurrences in the generator's column, then generator
    /// kind, then position
    #[default]
    Canonical,
    /// uniformly random among unit entries, reproducible from the seed
    Random(u64),
}

fn unit_value(p: &Poly) -> Result<Option<Rational>, PresentError> {
    if p.at_origin().is_zero() {
        return Ok(None);
    }
    match p.as_constant() {
        Some(c) => Ok(Some(c)),
        None => Err(PresentError::NonConstantUnit(p.to_string())),
    }
}

/// Substitute away every generator that some relation expresses with a
/// unit coefficient, then sparsify. The result has no unit entries.
pub fn eliminate_units(p: &Presentation, order: PivotOrder) -> Result<MinimalPresentation, PresentError> {
    let mut rows = p.relations.to_rows();
    let mut gens: Vec<Generator> = p.generators.clone();
    let mut rng = match order {
        PivotOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        PivotOrder::Canonical => None,
    };
    let guard = gens.len() + 1;
    let mut steps = 0;
    loop {
        let mut cands = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (g, e) in r.iter().enumerate() {
                if let Some(c) = unit_value(e)? {
                    cands.push((i, g, c));
                }
            }
        }
        if cands.is_empty() {
            break;
        }
        steps += 1;
        if steps > guard {
            return Err(PresentError::NonTerminating(guard));
        }
        let (i, g, c) = match rng.as_mut() {
            Some(rng) => cands.choose(rng).cloned().expect("nonempty"),
            None => {
                let mut count: BTreeMap<usize, usize> = BTreeMap::new();
                for &(_, g, _) in &cands {
                    *count.entry(g).or_default() += 1;
                }
                cands
                    .iter()
                    .min_by_key(|&&(i, g, _)| (count[&g], gens[g].kind.rank(), g, i))
                    .cloned()
                    .expect("nonempty")
            }
        };
        let pivot_row = rows[i].clone();
        for (k, r) in rows.iter_mut().enumerate() {
            if k == i || r[g].is_zero() {
                continue;
            }
            let f = r[g].scale(&c.recip());
            for (a, b) in r.iter_mut().zip(&pivot_row) {
                if !b.is_zero() {
                    *a = &*a - &(&f * b);
                }
            }
        }
        rows.remove(i);
        for r in rows.iter_mut() {
            r.remove(g);
        }
        gens.remove(g);
    }
    sparsify(&mut rows);
    let n = gens.len();
    let q = PolyMatrix::from_rows(rows).unwrap_or_else(|_| PolyMatrix::zeros(0, n));
    Ok(MinimalPresentation { q, labels: gens.into_iter().map(|g| g.label).collect() })
}

fn row_terms(r: &[Poly]) -> usize {
    r.iter().map(Poly::num_terms).sum()
}

/// Greedy cleanup: subtract q·row_i from row_k whenever some entry of
/// row_i divides the matching entry of row_k and the total term count of
/// row_k strictly drops. Repeats until stable.
pub fn sparsify(rows: &mut [Vec<Poly>]) {
    let mut changed = true;
    while changed {
        changed = false;
        for k in 0..rows.len() {
            for i in 0..rows.len() {
                if i == k {
                    continue;
                }
                for g in 0..rows[k].len() {
                    if rows[i][g].is_zero() || rows[k][g].is_zero() {
                        continue;
                    }
                    let Ok(q) = rows[k][g].exact_div(&rows[i][g]) else {
                        continue;
                    };
                    let new: Vec<Poly> =
                        rows[k].iter().zip(&rows[i]).map(|(a, b)| a - &(&q * b)).collect();
                    if row_terms(&new) < row_terms(&rows[k]) {
                        rows[k] = new;
                        changed = true;
                    }
                }
            }
        }
    }
}

/// Row and column of the unit entry in row `row`, if any.
fn unit_col(p: &StripedMatrix, row: usize) -> Option<usize> {
    (0..p.cols()).find(|&j| p.get(row, j) == Entry::One)
}

/// Cut the P-matrix for a truncated word. The end letters map to P as
/// r₃ ↦ the R₂ row, r₄ ↦ the R₁ row, c₃ ↦ the R₁ row with its unit
/// column, c₄ ↦ the R₂ row with its unit column.
pub fn truncate_p(p: &StripedMatrix, w: &Word) -> StripedMatrix {
    #[derive(Clone, Copy)]
    enum Cut {
        R3,
        R4,
        C3,
        C4,
    }
    let (left, right) = match w.family {
        Family::A => (Cut::R3, Cut::C3),
        Family::B => (Cut::R4, Cut::C4),
        Family::C | Family::CPrime => (Cut::R4, Cut::R3),
        Family::D | Family::DPrime => (Cut::C4, Cut::C3),
    };
    let r1 = p.row_kinds().iter().position(|&k| k == StripeKind::R1);
    let r2 = p.row_kinds().iter().position(|&k| k == StripeKind::R2);
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    for (on, cut) in [(w.left_cut, left), (w.right_cut, right)] {
        if !on {
            continue;
        }
        let (row, with_col) = match cut {
            Cut::R3 => (r2, false),
            Cut::R4 => (r1, false),
            Cut::C3 => (r1, true),
            Cut::C4 => (r2, true),
        };
        if let Some(row) = row {
            rows.push(row);
            if with_col {
                cols.extend(unit_col(p, row));
            }
        }
    }
    p.delete(&rows, &cols)
}

/// build_p → (truncate) → relations → elimination.
pub fn present_word(w: &Word, curve: &CurveData, order: PivotOrder) -> Result<MinimalPresentation, PresentError> {
    let p = build_p(w);
    let p = if w.is_full() { p } else { truncate_p(&p, w) };
    eliminate_units(&relations_from_p(&p, curve)?, order)
}
