use super::Representation;
use crate::presentation::enumerate_reduced_words;
use crate::C64;
use serde::{Deserialize, Serialize};

/// One conjugacy class found by [`deduplicate`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConjugacyClass {
    pub representative: Representation,
    pub fingerprint: Vec<C64>,
    /// Number of input representations assigned to this class.
    pub members: usize,
}

/// Traces of `rho` on all reduced words of length `1..=word_len`, in the
/// order of [`enumerate_reduced_words`].
pub fn fingerprint(rho: &Representation, word_len: usize) -> Vec<C64> {
    enumerate_reduced_words(rho.presentation().num_generators(), word_len)
        .iter()
        .map(|w| rho.word_holonomy(w).trace())
        .collect()
}

/// Sup-norm distance between fingerprints of equal length.
pub fn fingerprint_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Greedy clustering by fingerprint distance at most `tol`; the first member
/// of each cluster is its representative.
pub fn deduplicate(reps: &[Representation], tol: f64, word_len: usize) -> Vec<ConjugacyClass> {
    let mut classes: Vec<ConjugacyClass> = Vec::new();
    for r in reps {
        let fp = fingerprint(r, word_len);
        match classes.iter_mut().find(|c| fingerprint_distance(&c.fingerprint, &fp) <= tol) {
            Some(c) => c.members += 1,
            None => classes.push(ConjugacyClass { representative: r.clone(), fingerprint: fp, members: 1 }),
        }
    }
    classes
}
