//! JSON formats: polynomial matrices and pencils.

use crate::curve::LambdaMode;
use crate::field::{parse_rational, Field, FieldError, PrimeField, Rationals};
use crate::pencil::Pencil;
use crate::poly::{Poly, PolyMatrix, Rational, Var};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("entry ({row}, {col}): {msg}")]
    Entry { row: usize, col: usize, msg: String },
    #[error("lambda: {0}")]
    Lambda(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
    #[serde(default = "symbolic")]
    lambda: String,
    /// free-form provenance, ignored
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn symbolic() -> String {
    "symbolic".into()
}

pub fn parse_lambda(s: &str) -> Result<LambdaMode, IoError> {
    let s = s.trim();
    if s == "symbolic" {
        return Ok(LambdaMode::Symbolic);
    }
    let q = parse_rational(s).ok_or_else(|| IoError::Lambda(format!("{s:?} is neither \"symbolic\" nor p/q")))?;
    if q.is_zero() || q.is_one() {
        return Err(IoError::Lambda(format!("λ must avoid 0 and 1, got {q}")));
    }
    Ok(LambdaMode::Rational(q))
}

/// `{"rows": N, "cols": M, "entries": [[poly, …], …], "lambda": "symbolic" | "p/q"}`
pub fn parse_matrix_json(s: &str) -> Result<(PolyMatrix, LambdaMode), IoError> {
    let f: MatrixFile = serde_json::from_str(s).map_err(|e| IoError::Json(e.to_string()))?;
    let mode = parse_lambda(&f.lambda)?;
    if f.entries.len() != f.rows {
        return Err(IoError::Shape(format!("{} rows declared, {} given", f.rows, f.entries.len())));
    }
    let mut out = Vec::with_capacity(f.rows * f.cols);
    for (i, r) in f.entries.iter().enumerate() {
        if r.len() != f.cols {
            return Err(IoError::Shape(format!("row {i} has {} entries, expected {}", r.len(), f.cols)));
        }
        for (j, e) in r.iter().enumerate() {
            let p: Poly = e.parse().map_err(|err| IoError::Entry { row: i, col: j, msg: format!("{err}") })?;
            if matches!(mode, LambdaMode::Rational(_)) && p.contains_var(Var::L) {
                return Err(IoError::Entry { row: i, col: j, msg: "l occurs but λ is fixed".into() });
            }
            out.push(p);
        }
    }
    let m = PolyMatrix::new(f.rows, f.cols, out).map_err(|e| IoError::Shape(e.to_string()))?;
    Ok((m, mode))
}

pub fn matrix_to_json(m: &PolyMatrix, mode: &LambdaMode) -> String {
    let f = MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.to_rows().iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect(),
        lambda: mode.to_string(),
        note: None,
    };
    serde_json::to_string_pretty(&f).expect("serializable")
}

/// `x^2*y*l` → `x^{2}y\\lambda`.
pub fn poly_latex(p: &Poly) -> String {
    let s = p.to_string();
    let mut out = String::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '*' => {}
            'l' => out.push_str("\\lambda"),
            '^' => {
                out.push_str("^{");
                while let Some(d) = chars.next_if(char::is_ascii_digit) {
                    out.push(d);
                }
                out.push('}');
            }
            c => {
                if c.is_ascii_alphabetic() && out.ends_with("\\lambda") {
                    out.push(' ');
                }
                out.push(c);
            }
        }
    }
    out
}

/// LaTeX array with a rule after row `split` and column `split`.
pub fn matrix_to_latex(m: &PolyMatrix, split: Option<usize>) -> String {
    let spec: String = (0..m.cols())
        .map(|j| if split == Some(j) && j > 0 { "|c" } else { "c" })
        .collect();
    let mut out = format!("\\left(\\begin{{array}}{{{spec}}}\n");
    for i in 0..m.rows() {
        if split == Some(i) && i > 0 {
            out.push_str("\\hline\n");
        }
        let row: Vec<String> = m.row(i).iter().map(poly_latex).collect();
        out.push_str(&row.join(" & "));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{array}\\right)");
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PencilFile {
    field: String,
    x1: Vec<Vec<String>>,
    x2: Vec<Vec<String>>,
}

/// A pencil over whichever field the file names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyPencil {
    Q(Pencil<Rational>),
    Fp(PrimeField, Pencil<u64>),
}

fn read_matrix<F: Field>(k: &F, m: &[Vec<String>]) -> Result<Vec<Vec<F::Elem>>, IoError> {
    m.iter()
        .map(|r| r.iter().map(|e| k.parse(e).map_err(IoError::from)).collect())
        .collect()
}

fn build<F: Field>(k: &F, f: &PencilFile) -> Result<Pencil<F::Elem>, IoError> {
    let x1 = read_matrix(k, &f.x1)?;
    let x2 = read_matrix(k, &f.x2)?;
    Pencil::new(x1, x2).map_err(|e| IoError::Shape(e.to_string()))
}

/// `{"field": "Q" | "Fp:<prime>", "x1": [[elem, …], …], "x2": [[…]]}`
pub fn parse_pencil_json(s: &str) -> Result<AnyPencil, IoError> {
    let f: PencilFile = serde_json::from_str(s).map_err(|e| IoError::Json(e.to_string()))?;
    let desc = f.field.trim();
    if desc == "Q" {
        return Ok(AnyPencil::Q(build(&Rationals, &f)?));
    }
    let p = desc
        .strip_prefix("Fp:")
        .and_then(|p| p.parse::<u64>().ok())
        .and_then(PrimeField::new)
        .ok_or_else(|| FieldError::BadDescriptor(desc.to_string()))?;
    Ok(AnyPencil::Fp(p, build(&p, &f)?))
}

pub fn pencil_to_json<F: Field>(k: &F, p: &Pencil<F::Elem>) -> String {
    let fmt = |m: &[Vec<F::Elem>]| m.iter().map(|r| r.iter().map(|e| k.format(e)).collect()).collect();
    let f = PencilFile { field: k.descriptor(), x1: fmt(&p.x1), x2: fmt(&p.x2) };
    serde_json::to_string_pretty(&f).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let m = PolyMatrix::from_rows(vec![
            vec!["x - y^2".parse().unwrap(), Poly::zero()],
            vec!["-x*y".parse().unwrap(), "x^2 - l*x*y^2".parse().unwrap()],
        ])
        .unwrap();
        let s = matrix_to_json(&m, &LambdaMode::Symbolic);
        let (back, mode) = parse_matrix_json(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(mode, LambdaMode::Symbolic);
        assert_eq!(matrix_to_json(&back, &mode), s);
    }

    #[test]
    fn matrix_errors() {
        assert!(matches!(parse_matrix_json("{"), Err(IoError::Json(_))));
        let bad_shape = r#"{"rows": 2, "cols": 1, "entries": [["x"]]}"#;
        assert!(matches!(parse_matrix_json(bad_shape), Err(IoError::Shape(_))));
        let bad_entry = r#"{"rows": 1, "cols": 1, "entries": [["x +"]]}"#;
        assert!(matches!(parse_matrix_json(bad_entry), Err(IoError::Entry { .. })));
        let fixed = r#"{"rows": 1, "cols": 1, "entries": [["l*x"]], "lambda": "2"}"#;
        assert!(parse_matrix_json(fixed).is_err());
        let bad_l = r#"{"rows": 1, "cols": 1, "entries": [["x"]], "lambda": "1"}"#;
        assert!(matches!(parse_matrix_json(bad_l), Err(IoError::Lambda(_))));
    }

    #[test]
    fn latex() {
        assert_eq!(poly_latex(&"-l*x*y^2 + x^2".parse().unwrap()), "-xy^{2}\\lambda + x^{2}");
        let m = PolyMatrix::from_rows(vec![vec![Poly::x(), Poly::zero()], vec![Poly::y(), Poly::x()]]).unwrap();
        let t = matrix_to_latex(&m, Some(1));
        assert!(t.contains("{c|c}") && t.contains("\\hline"));
    }

    #[test]
    fn pencil_round_trip() {
        let s = r#"{"field": "Fp:101", "x1": [["1", "0"]], "x2": [["0", "-1"]]}"#;
        let AnyPencil::Fp(k, p) = parse_pencil_json(s).unwrap() else { panic!() };
        assert_eq!(p.x2, vec![vec![0, 100]]);
        let again = pencil_to_json(&k, &p);
        assert_eq!(parse_pencil_json(&again).unwrap(), AnyPencil::Fp(k, p));
        assert!(parse_pencil_json(r#"{"field": "Fp:100", "x1": [], "x2": []}"#).is_err());
        assert!(parse_pencil_json(r#"{"field": "Q", "x1": [["1"]], "x2": [["1", "2"]]}"#).is_err());
        assert!(matches!(parse_pencil_json(r#"{"field": "Q", "x1": [["1/2"]], "x2": [["3"]]}"#), Ok(AnyPencil::Q(_))));
    }
}
