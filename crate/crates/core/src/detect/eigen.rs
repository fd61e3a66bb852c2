use super::search::noncentral;
use super::DetectError;
use crate::presentation::{enumerate_reduced_words, Word};
use crate::repvariety::Representation;
use crate::su3::{eigenvalue_gap, fro, UnitaryMatrix3};
use serde::{Deserialize, Serialize};

/// Pairwise eigenvalue gap required of a three-eigenvalue element.
pub const EIGEN_GAP_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenBranch {
    Generator,
    /// `LM` with `L` noncentral and `M` not commuting with `L`.
    Product,
    WordScan,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenWitness {
    pub word: Word,
    pub branch: EigenBranch,
    pub gap: f64,
}

/// A word whose image has three distinct eigenvalues.
///
/// Tries the generators, then the product `LM` for the first noncentral
/// `L` and the first `M` not commuting with it, then all reduced words up
/// to `max_len`.
pub fn three_eigenvalue_element(rho: &Representation, max_len: usize) -> Result<EigenWitness, DetectError> {
    let n = rho.images().len();
    let mut tested = 0;
    for g in 0..n {
        tested += 1;
        let w = Word::generator(g);
        let gap = eigenvalue_gap(&rho.images()[g]);
        if gap > EIGEN_GAP_TOL {
            return Ok(EigenWitness { word: w, branch: EigenBranch::Generator, gap });
        }
    }
    let words = enumerate_reduced_words(n, max_len.max(1));
    let hol: Vec<UnitaryMatrix3> = words.iter().map(|w| rho.word_holonomy(w)).collect();
    if let Some(li) = hol.iter().position(noncentral) {
        let l = &hol[li];
        let commutes = |m: &UnitaryMatrix3| fro(&(l.matrix() * m.matrix() - m.matrix() * l.matrix())) <= 1e-8;
        if let Some(mi) = hol.iter().position(|m| !commutes(m)) {
            tested += 1;
            let w = words[li].concat(&words[mi]);
            let gap = eigenvalue_gap(&(*l * hol[mi]));
            if gap > EIGEN_GAP_TOL {
                return Ok(EigenWitness { word: w, branch: EigenBranch::Product, gap });
            }
        }
    }
    for (w, g) in words.iter().zip(&hol) {
        tested += 1;
        let gap = eigenvalue_gap(g);
        if gap > EIGEN_GAP_TOL {
            return Ok(EigenWitness { word: w.clone(), branch: EigenBranch::WordScan, gap });
        }
    }
    Err(DetectError::NoThreeEigenvalueElement { tested })
}
