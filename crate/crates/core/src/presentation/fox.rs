use super::{PresentationError, Word};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Element `sum c_k w_k` of the integral group ring of the free group, with
/// prefixes compared after free reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRingElement {
    terms: Vec<(i64, Word)>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 * w`.
    pub fn word(w: &Word) -> Self {
        Self::from_terms([(1, w.clone())])
    }

    /// Collect terms: reduce prefixes, merge equal ones and drop zeros.
    pub fn from_terms<I: IntoIterator<Item = (i64, Word)>>(terms: I) -> Self {
        let mut map: BTreeMap<Word, i64> = BTreeMap::new();
        for (c, w) in terms {
            *map.entry(w.reduce()).or_insert(0) += c;
        }
        Self { terms: map.into_iter().filter(|(_, c)| *c != 0).map(|(w, c)| (c, w)).collect() }
    }

    pub fn terms(&self) -> &[(i64, Word)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).cloned())
    }

    /// `u * self`.
    pub fn left_mul(&self, u: &Word) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, w)| (*c, u.concat(w))))
    }

    /// Augmentation: the sum of coefficients.
    pub fn augmentation(&self) -> i64 {
        self.terms.iter().map(|(c, _)| c).sum()
    }

    /// `sum c_k action(w_k)` for a linear representation of the free group of
    /// dimension `dim`.
    pub fn evaluate<F: FnMut(&Word) -> DMatrix<f64>>(&self, dim: usize, mut action: F) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(dim, dim);
        for (c, w) in &self.terms {
            out += action(w) * (*c as f64);
        }
        out
    }
}

/// Fox derivative `d r / d x_j` in a free group on `n_generators` letters.
pub fn fox_derivative(r: &Word, j: usize, n_generators: usize) -> Result<GroupRingElement, PresentationError> {
    if j >= n_generators {
        return Err(PresentationError::IndexOutOfRange { index: j, count: n_generators });
    }
    if let Some(m) = r.max_generator().filter(|&m| m >= n_generators) {
        return Err(PresentationError::IndexOutOfRange { index: m, count: n_generators });
    }
    let letters = r.letters();
    let mut terms = Vec::new();
    for (p, l) in letters.iter().enumerate() {
        if l.generator != j {
            continue;
        }
        if l.exponent > 0 {
            terms.push((1, Word::new(letters[..p].to_vec())));
        } else {
            terms.push((-1, Word::new(letters[..=p].to_vec())));
        }
    }
    Ok(GroupRingElement::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: &[(usize, i32)]) -> Word {
        Word::from_pairs(p)
    }

    #[test]
    fn single_letter() {
        let d = fox_derivative(&w(&[(0, 1)]), 0, 1).unwrap();
        assert_eq!(d.terms(), &[(1, Word::empty())]);
    }

    #[test]
    fn xyx() {
        let d = fox_derivative(&w(&[(0, 1), (1, 1), (0, 1)]), 0, 2).unwrap();
        assert_eq!(d, GroupRingElement::from_terms([(1, Word::empty()), (1, w(&[(0, 1), (1, 1)]))]));
    }

    #[test]
    fn cancelling_pair_is_zero() {
        let d = fox_derivative(&w(&[(0, 1), (0, -1)]), 0, 1).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn out_of_range() {
        assert!(fox_derivative(&w(&[(0, 1)]), 3, 2).is_err());
    }
}
