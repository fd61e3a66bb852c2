//! Finitely presented groups, free-group words and Fox calculus.

mod abelian;
mod fox;
mod parse;

pub use abelian::Abelianization;
pub use fox::{fox_derivative, GroupRingElement};
pub use parse::parse_presentation;

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown generator `{name}` at byte {position}")]
    UnknownGenerator { name: String, position: usize },
    #[error("duplicate generator `{name}`")]
    DuplicateGenerator { name: String },
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("presentation has no generators")]
    EmptyGenerators,
    #[error("generator index {index} out of range for {count} generators")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("exponent must be +1 or -1, got {0}")]
    BadExponent(i64),
}

/// One letter `x_i^{+-1}` of a free-group word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(usize, i8)", try_from = "(usize, i64)")]
pub struct Letter {
    pub generator: usize,
    pub exponent: i8,
}

impl Letter {
    pub fn new(generator: usize, exponent: i8) -> Self {
        assert!(exponent == 1 || exponent == -1, "exponent must be +-1");
        Self { generator, exponent }
    }

    pub fn inverse(self) -> Self {
        Self { generator: self.generator, exponent: -self.exponent }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.exponent == -other.exponent
    }
}

impl From<Letter> for (usize, i8) {
    fn from(l: Letter) -> Self {
        (l.generator, l.exponent)
    }
}

impl TryFrom<(usize, i64)> for Letter {
    type Error = PresentationError;
    fn try_from((g, e): (usize, i64)) -> Result<Self, Self::Error> {
        match e {
            1 | -1 => Ok(Letter { generator: g, exponent: e as i8 }),
            _ => Err(PresentationError::BadExponent(e)),
        }
    }
}

/// A word in the free group; not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The single-letter word `x_g`.
    pub fn generator(g: usize) -> Self {
        Self::new(vec![Letter::new(g, 1)])
    }

    /// Build from `(generator, exponent)` pairs. Exponents other than +-1 are
    /// expanded into repeated letters.
    pub fn from_pairs(pairs: &[(usize, i32)]) -> Self {
        let mut letters = Vec::new();
        for &(g, e) in pairs {
            let s = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                letters.push(Letter::new(g, s));
            }
        }
        Self::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Free reduction.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last().is_some_and(|&p| p.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word::new(out)
    }

    pub fn invert(&self) -> Word {
        Word::new(self.letters.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self * other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        Word::new(v).reduce()
    }

    /// Reduced power `self^k` (negative `k` allowed).
    pub fn pow(&self, k: i32) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Render with generator names, using `*` and `^-1`.
    pub fn format(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| {
                let n = names.get(l.generator).cloned().unwrap_or_else(|| format!("x{}", l.generator));
                if l.exponent < 0 {
                    format!("{n}^-1")
                } else {
                    n
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Free reduction of `w`.
pub fn word_reduce(w: &Word) -> Word {
    w.reduce()
}

/// Formal inverse of `w`.
pub fn word_invert(w: &Word) -> Word {
    w.invert()
}

/// Reduced concatenation of `u` and `v`.
pub fn word_concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

/// All reduced words of length `1..=max_len` over `n` generators.
///
/// The order is by length, then lexicographic in the letter order
/// `x_0, x_0^-1, x_1, x_1^-1, ...`.
pub fn enumerate_reduced_words(n: usize, max_len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (0..n).flat_map(|g| [Letter::new(g, 1), Letter::new(g, -1)]).collect();
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &alphabet {
                if w.letters.last().is_some_and(|&p| p.cancels(l)) {
                    continue;
                }
                let mut v = w.letters.clone();
                v.push(l);
                next.push(Word::new(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A finitely presented group `<x_1..x_n | r_1..r_m>` with reduced relators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

#[derive(Deserialize)]
struct RawPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl TryFrom<RawPresentation> for GroupPresentation {
    type Error = PresentationError;
    fn try_from(r: RawPresentation) -> Result<Self, Self::Error> {
        GroupPresentation::new(r.generators, r.relators)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut ch = s.chars();
    matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GroupPresentation {
    /// Validate names and indices, and reduce all relators.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if generators.is_empty() {
            return Err(PresentationError::EmptyGenerators);
        }
        for (i, g) in generators.iter().enumerate() {
            if !is_identifier(g) {
                return Err(PresentationError::InvalidName(g.clone()));
            }
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator { name: g.clone() });
            }
        }
        let n = generators.len();
        for r in &relators {
            if let Some(m) = r.max_generator() {
                if m >= n {
                    return Err(PresentationError::IndexOutOfRange { index: m, count: n });
                }
            }
        }
        let relators = relators.iter().map(Word::reduce).collect();
        Ok(Self { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    /// Index of the generator called `name`.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Text form accepted by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let rels: Vec<String> = self.relators.iter().map(|r| r.format(&self.generators)).collect();
        format!("<{} | {}>", self.generators.join(", "), rels.join("; "))
    }

    /// `fox[i][j] = d r_i / d x_j`.
    pub fn fox_matrix(&self) -> Vec<Vec<GroupRingElement>> {
        let n = self.num_generators();
        self.relators
            .iter()
            .map(|r| (0..n).map(|j| fox_derivative(r, j, n).expect("validated indices")).collect())
            .collect()
    }

    /// Exponent-sum matrix of the relators (rows) in the generators (columns).
    pub fn exponent_sum_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.num_generators();
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; n];
                for l in r.letters() {
                    row[l.generator] += l.exponent as i64;
                }
                row
            })
            .collect()
    }

    pub fn abelianization(&self) -> Abelianization {
        Abelianization::from_relation_matrix(&self.exponent_sum_matrix(), self.num_generators())
    }

    /// True when the abelianization is trivial (the relation matrix is unimodular).
    pub fn is_homology_sphere(&self) -> bool {
        self.abelianization().is_trivial()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: &[(usize, i32)]) -> Word {
        Word::from_pairs(p)
    }

    #[test]
    fn reduce_cancels() {
        assert!(w(&[(0, 1), (0, -1)]).reduce().is_empty());
    }

    #[test]
    fn invert_reverses() {
        assert_eq!(w(&[(0, 1), (1, 1)]).invert(), w(&[(1, -1), (0, -1)]));
    }

    #[test]
    fn concat_reduces_join() {
        assert_eq!(w(&[(0, 1), (1, 1)]).concat(&w(&[(1, -1), (2, 1)])), w(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn enumeration_counts() {
        // 4 + 4*3 + 4*9 reduced words of length <= 3 in F_2.
        assert_eq!(enumerate_reduced_words(2, 3).len(), 4 + 12 + 36);
    }

    #[test]
    fn letter_json() {
        let s = serde_json::to_string(&w(&[(0, 1), (1, -1)])).unwrap();
        assert_eq!(s, "[[0,1],[1,-1]]");
        assert!(serde_json::from_str::<Word>("[[0,2]]").is_err());
    }
}
