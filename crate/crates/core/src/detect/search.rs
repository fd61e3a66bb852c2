use super::{three_eigenvalue_element, trace_derivative, CrossedHom, DetectError};
use crate::presentation::{enumerate_reduced_words, Word};
use crate::repvariety::Representation;
use crate::su3::{fro, CMat3, UnitaryMatrix3};
use crate::C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Bounds for [`find_detecting_loop`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    /// Longest reduced word in the exhaustive scan.
    pub short_word_len: usize,
    /// Largest power `k` in the families `L^k M` and `L^k M L^-k M^-1`.
    pub family_k: usize,
    /// Longest word used as `L` or `M` inside the families.
    pub family_base_len: usize,
    /// A word detects `z` when `|d/dt tr rho_t(w)| > tol`.
    pub tol: f64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self { short_word_len: 4, family_k: 12, family_base_len: 2, tol: 1e-8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectBranch {
    Generator,
    ShortWord,
    /// `L^k M`.
    PowerFamily,
    /// `L^k M L^-k M^-1`.
    CommutatorFamily,
    /// The two families with `M` replaced by `M1 M2` or `M1^-1 M2`.
    ProductFamily,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub word: Word,
    pub branch: DetectBranch,
    pub derivative: C64,
    /// Number of words evaluated, including the detecting one.
    pub tested: usize,
}

/// Search for a word `w` with `d/dt tr rho_t(w) != 0`.
///
/// Branches are tried in order: generators, reduced words up to
/// `short_word_len`, then the word families. The first passing word in
/// each branch's fixed enumeration order is returned.
pub fn find_detecting_loop(rho: &Representation, z: &CrossedHom, cfg: &DetectConfig) -> Result<Detection, DetectError> {
    z.check(rho)?;
    let images = rho.images();
    let n = images.len();
    let mut tested = 0;
    let mut max_derivative = 0.0f64;

    let gens: Vec<Word> = (0..n).map(Word::generator).collect();
    let short: Vec<Word> = enumerate_reduced_words(n, cfg.short_word_len).into_iter().filter(|w| w.len() > 1).collect();
    let branches = [(DetectBranch::Generator, gens), (DetectBranch::ShortWord, short)];
    for (branch, words) in branches {
        if let Some(d) = scan(images, z, &words, branch, cfg.tol, &mut tested, &mut max_derivative) {
            return Ok(d);
        }
    }

    let bases = family_bases(rho, cfg);
    let (ls, ms): (Vec<&Word>, Vec<&Word>) = (bases.iter().filter(|w| noncentral(&rho.word_holonomy(w))).collect(), bases.iter().collect());
    let power: Vec<Word> = family(&ls, &ms, cfg.family_k, false);
    let comm: Vec<Word> = family(&ls, &ms, cfg.family_k, true);
    for (branch, words) in [(DetectBranch::PowerFamily, power), (DetectBranch::CommutatorFamily, comm)] {
        if let Some(d) = scan(images, z, &words, branch, cfg.tol, &mut tested, &mut max_derivative) {
            return Ok(d);
        }
    }

    let products: Vec<Word> = ms
        .iter()
        .flat_map(|m1| ms.iter().flat_map(move |m2| [m1.concat(m2), m1.invert().concat(m2)]))
        .filter(|w| !w.is_empty())
        .collect();
    let prod_refs: Vec<&Word> = products.iter().collect();
    let mut words = family(&ls, &prod_refs, cfg.family_k, false);
    words.extend(family(&ls, &prod_refs, cfg.family_k, true));
    if let Some(d) = scan(images, z, &words, DetectBranch::ProductFamily, cfg.tol, &mut tested, &mut max_derivative) {
        return Ok(d);
    }
    Err(DetectError::NotFound { tested, max_derivative })
}

fn scan(
    images: &[UnitaryMatrix3],
    z: &CrossedHom,
    words: &[Word],
    branch: DetectBranch,
    tol: f64,
    tested: &mut usize,
    max_derivative: &mut f64,
) -> Option<Detection> {
    let derivs: Vec<C64> = words.par_iter().map(|w| trace_derivative(images, z, w)).collect();
    match derivs.iter().position(|d| d.norm() > tol) {
        Some(k) => {
            *tested += k + 1;
            Some(Detection { word: words[k].clone(), branch, derivative: derivs[k], tested: *tested })
        }
        None => {
            *tested += words.len();
            *max_derivative = derivs.iter().map(|d| d.norm()).fold(*max_derivative, f64::max);
            None
        }
    }
}

fn family_bases(rho: &Representation, cfg: &DetectConfig) -> Vec<Word> {
    let n = rho.images().len();
    let mut out = enumerate_reduced_words(n, cfg.family_base_len);
    if let Ok(w) = three_eigenvalue_element(rho, cfg.short_word_len.max(2)) {
        if !out.contains(&w.word) {
            out.push(w.word);
        }
    }
    out
}

pub(crate) fn noncentral(g: &UnitaryMatrix3) -> bool {
    fro(&(g.matrix() - CMat3::identity() * (g.trace() / 3.0))) > 1e-8
}

fn family(ls: &[&Word], ms: &[&Word], kmax: usize, commutator: bool) -> Vec<Word> {
    let mut out = Vec::new();
    for k in 1..=kmax as i32 {
        for l in ls {
            let lk = l.pow(k);
            for m in ms {
                let w = if commutator { lk.concat(m).concat(&lk.invert()).concat(&m.invert()) } else { lk.concat(m) };
                if !w.is_empty() {
                    out.push(w);
                }
            }
        }
    }
    out
}
