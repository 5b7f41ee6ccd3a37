//! The bunch of chains behind first-level modules and its 24 word types.

use crate::pencil::{BlockKind, PencilBlock};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    CPrime,
    DPrime,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::CPrime,
        Family::DPrime,
    ];

    /// Name in the word syntax: `a b c d cp dp`.
    pub fn code(self) -> &'static str {
        match self {
            Family::A => "a",
            Family::B => "b",
            Family::C => "c",
            Family::D => "d",
            Family::CPrime => "cp",
            Family::DPrime => "dp",
        }
    }

    fn from_code(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.code() == s)
    }

    /// The outer letters (left, right) of the full word.
    pub fn ends(self) -> (Symbol, Symbol) {
        use Symbol::*;
        match self {
            Family::A => (R3, C3),
            Family::B => (R4, C4),
            Family::C | Family::CPrime => (R4, R3),
            Family::D | Family::DPrime => (C4, C3),
        }
    }
}

/// Symbols of the chains; indexed families carry the word size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    R3,
    R4,
    C3,
    C4,
    /// the untilded letter of a family (aᵢ, bᵢ, …, d′ᵢ)
    Plain(Family, usize),
    /// the tilded partner (ãᵢ, b̃ᵢ, …)
    Tilde(Family, usize),
}

/// One of the four chain pairs (ℰᵢ, ℱᵢ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Side {
    pub pair: u8,
    /// false: ℰ, true: ℱ
    pub f_side: bool,
}

impl Symbol {
    /// Where the symbol lives in the bunch.
    pub fn side(self) -> Side {
        use Family::*;
        let (pair, f_side) = match self {
            Symbol::C3 => (1, true),
            Symbol::C4 => (2, true),
            Symbol::R3 => (3, false),
            Symbol::R4 => (4, false),
            Symbol::Plain(A | D | DPrime, _) => (1, false),
            Symbol::Plain(B, _) => (2, false),
            Symbol::Plain(C | CPrime, _) => (3, true),
            Symbol::Tilde(D | DPrime, _) => (2, false),
            Symbol::Tilde(A, _) => (3, true),
            Symbol::Tilde(B | C | CPrime, _) => (4, true),
        };
        Side { pair, f_side }
    }

    /// The ∼ partner, if any.
    pub fn partner(self) -> Option<Symbol> {
        match self {
            Symbol::Plain(f, i) => Some(Symbol::Tilde(f, i)),
            Symbol::Tilde(f, i) => Some(Symbol::Plain(f, i)),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = |fam: Family| match fam {
            Family::A | Family::B | Family::C | Family::D => (fam.code(), ""),
            Family::CPrime => ("c", "′"),
            Family::DPrime => ("d", "′"),
        };
        match self {
            Symbol::R3 => f.write_str("r3"),
            Symbol::R4 => f.write_str("r4"),
            Symbol::C3 => f.write_str("c3"),
            Symbol::C4 => f.write_str("c4"),
            Symbol::Plain(fam, i) => {
                let (b, p) = base(*fam);
                write!(f, "{b}{p}{i}")
            }
            Symbol::Tilde(fam, i) => {
                let (b, p) = base(*fam);
                write!(f, "{b}\u{303}{p}{i}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    /// incidence inside one chain pair
    Dash,
    /// the pairing relation
    Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    Sym(Symbol),
    Link(Connective),
}

/// The chain-pair data: ℰᵢ/ℱᵢ membership (via [`Symbol::side`]) and ∼.
pub struct ChainBunch;

impl ChainBunch {
    /// Symbols of ℰ and ℱ for pair `pair` (1..=4) at index `i`.
    pub fn pair(pair: u8, i: usize) -> (Vec<Symbol>, Vec<Symbol>) {
        let mut all = vec![Symbol::R3, Symbol::R4, Symbol::C3, Symbol::C4];
        for f in Family::ALL {
            all.push(Symbol::Plain(f, i));
            all.push(Symbol::Tilde(f, i));
        }
        let pick = |fs: bool| {
            all.iter()
                .copied()
                .filter(|s| s.side() == Side { pair, f_side: fs })
                .collect::<Vec<_>>()
        };
        (pick(false), pick(true))
    }

    /// A '−' edge joins the two sides of one pair.
    pub fn dash_ok(a: Symbol, b: Symbol) -> bool {
        let (sa, sb) = (a.side(), b.side());
        sa.pair == sb.pair && sa.f_side != sb.f_side
    }

    pub fn tilde_ok(a: Symbol, b: Symbol) -> bool {
        a.partner() == Some(b)
    }

    /// Alternating symbol/connective sequence with every edge legal and
    /// '−' and '∼' alternating.
    pub fn is_valid(letters: &[Letter]) -> bool {
        if letters.is_empty() || letters.len() % 2 == 0 {
            return false;
        }
        let mut last_link = None;
        for w in (0..letters.len() - 1).step_by(2) {
            let (Letter::Sym(a), Letter::Link(l), Letter::Sym(b)) =
                (letters[w], letters[w + 1], letters[w + 2])
            else {
                return false;
            };
            let ok = match l {
                Connective::Dash => Self::dash_ok(a, b),
                Connective::Tilde => Self::tilde_ok(a, b),
            };
            if !ok || last_link == Some(l) {
                return false;
            }
            last_link = Some(l);
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct Word {
    pub family: Family,
    pub n: usize,
    pub left_cut: bool,
    pub right_cut: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("bad word {0:?} (expected family:size[:l|r|lr] with family in a b c d cp dp)")]
    Parse(String),
    #[error("block {0} has no word")]
    UnsupportedBlock(String),
}

impl Word {
    pub fn new(family: Family, n: usize) -> Word {
        Word { family, n, left_cut: false, right_cut: false }
    }

    pub fn with_cuts(self, left_cut: bool, right_cut: bool) -> Word {
        Word { left_cut, right_cut, ..self }
    }

    pub fn is_full(&self) -> bool {
        !self.left_cut && !self.right_cut
    }

    pub fn full(&self) -> Word {
        self.with_cuts(false, false)
    }

    pub fn letters(&self) -> Vec<Letter> {
        use Connective::*;
        let (l, r) = self.family.ends();
        let mut out = Vec::new();
        if !self.left_cut {
            out.push(Letter::Sym(l));
            out.push(Letter::Link(Dash));
        }
        out.push(Letter::Sym(Symbol::Tilde(self.family, self.n)));
        out.push(Letter::Link(Tilde));
        out.push(Letter::Sym(Symbol::Plain(self.family, self.n)));
        if !self.right_cut {
            out.push(Letter::Link(Dash));
            out.push(Letter::Sym(r));
        }
        out
    }

    pub fn letters_string(&self) -> String {
        self.letters()
            .iter()
            .map(|l| match l {
                Letter::Sym(s) => s.to_string(),
                Letter::Link(Connective::Dash) => "−".into(),
                Letter::Link(Connective::Tilde) => "∼".into(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.code(), self.n)?;
        match (self.left_cut, self.right_cut) {
            (false, false) => Ok(()),
            (true, false) => f.write_str(":l"),
            (false, true) => f.write_str(":r"),
            (true, true) => f.write_str(":lr"),
        }
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Word, WordError> {
        let bad = || WordError::Parse(s.to_string());
        let mut parts = s.trim().split(':');
        let family = parts.next().and_then(Family::from_code).ok_or_else(bad)?;
        let n_str = parts.next().ok_or_else(bad)?;
        if n_str.is_empty() || !n_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: usize = n_str.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let (left_cut, right_cut) = match parts.next() {
            None => (false, false),
            Some("l") => (true, false),
            Some("r") => (false, true),
            Some("lr") => (true, true),
            Some(_) => return Err(bad()),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Word { family, n, left_cut, right_cut })
    }
}

// (left, right), in the derived `Ord` order of `Word`
const CUTS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

/// All 24·max_n words in ascending order: family, size, then cuts
/// (none, right, left, both).
pub fn enumerate(max_n: usize) -> Vec<Word> {
    let mut out = Vec::with_capacity(24 * max_n);
    for family in Family::ALL {
        for n in 1..=max_n {
            for (l, r) in CUTS {
                out.push(Word::new(family, n).with_cuts(l, r));
            }
        }
    }
    out
}

/// One full word per pencil block; `decorated[i]` turns a C or D block
/// into the primed family.
pub fn blocks_to_words<E: fmt::Debug>(
    blocks: &[PencilBlock<E>],
    decorated: &[bool],
) -> Result<Vec<Word>, WordError> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let deco = decorated.get(i).copied().unwrap_or(false);
            let family = match (b.kind, deco) {
                (BlockKind::A, false) => Family::A,
                (BlockKind::B, false) => Family::B,
                (BlockKind::C, false) => Family::C,
                (BlockKind::D, false) => Family::D,
                (BlockKind::C, true) => Family::CPrime,
                (BlockKind::D, true) => Family::DPrime,
                _ => return Err(WordError::UnsupportedBlock(b.to_string())),
            };
            if b.n == 0 {
                return Err(WordError::UnsupportedBlock(b.to_string()));
            }
            Ok(Word::new(family, b.n))
        })
        .collect()
}
