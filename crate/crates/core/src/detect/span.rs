use super::{crossed_extend, CrossedHom, DetectError};
use crate::foxcoh::{h1_basis, CoefficientModule, ModuleTag};
use crate::holcalc::{hessian_closed_form, HessianCase};
use crate::linalg::singular_values;
use crate::presentation::{enumerate_reduced_words, Word};
use crate::repvariety::{classify_stabilizer, Representation, StabilizerTag};
use crate::su3::{HperpVector, UnitaryMatrix3};
use crate::C64;
use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

/// The three real 4x4 matrices attached to `[[alpha, beta], [-conj beta, conj alpha]]`
/// with `alpha = r + is`, `beta = t + iu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiPhi {
    pub psi_diag: Matrix4<f64>,
    pub phi: Matrix4<f64>,
    pub psi_off: Matrix4<f64>,
}

pub fn psi_phi_matrices(l: &Matrix2<C64>) -> PsiPhi {
    let (r, s, t, u) = (l[(0, 0)].re, l[(0, 0)].im, l[(0, 1)].re, l[(0, 1)].im);
    #[rustfmt::skip]
    let psi_diag = Matrix4::new(
        s, 0.0, -u, t,
        0.0, s, -t, -u,
        -u, -t, -s, 0.0,
        t, -u, 0.0, -s,
    ) * 2.0;
    #[rustfmt::skip]
    let phi = Matrix4::new(
        r, -s, t, -u,
        s, r, u, t,
        -t, -u, r, s,
        u, -t, -s, r,
    );
    #[rustfmt::skip]
    let psi_off = Matrix4::new(
        s, 1.0 - r, u, t,
        r - 1.0, s, -t, u,
        u, -t, -s, 1.0 - r,
        t, u, r - 1.0, -s,
    );
    PsiPhi { psi_diag, phi, psi_off }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanReport {
    pub uii_ok: bool,
    pub uij_ok: bool,
    pub uii_rank: usize,
    pub phi_rank: usize,
    pub psi_rank: usize,
    pub combined_rank: usize,
    pub uii_singular_values: Vec<f64>,
    pub uij_singular_values: Vec<f64>,
}

fn stacked_rank(ms: &[Matrix4<f64>], tol: f64) -> (usize, Vec<f64>) {
    let m = DMatrix::from_fn(ms.len(), 16, |i, k| ms[i][(k / 4, k % 4)]);
    let sv = singular_values(&m);
    (sv.iter().filter(|&&s| s > tol).count(), sv)
}

/// Linear independence tests for the diagonal and off-diagonal Hessian blocks.
pub fn span_checks(x: &Matrix2<C64>, y: &Matrix2<C64>, tol: f64) -> SpanReport {
    let xy = x * y;
    let (px, py, pxy) = (psi_phi_matrices(x), psi_phi_matrices(y), psi_phi_matrices(&xy));
    let pi = psi_phi_matrices(&Matrix2::identity());
    let px2 = psi_phi_matrices(&(x * x));
    let (uii_rank, uii_sv) = stacked_rank(&[Matrix4::identity() * -2.0, px.psi_diag, py.psi_diag, pxy.psi_diag], tol);
    let phis = [pi.phi, px.phi, py.phi, pxy.phi];
    let psis = [px.psi_off, px2.psi_off, py.psi_off, pxy.psi_off];
    let (phi_rank, _) = stacked_rank(&phis, tol);
    let (psi_rank, _) = stacked_rank(&psis, tol);
    let all: Vec<Matrix4<f64>> = phis.iter().chain(&psis).copied().collect();
    let (combined_rank, uij_sv) = stacked_rank(&all, tol);
    SpanReport {
        uii_ok: uii_rank == 4,
        uij_ok: phi_rank == 4 && psi_rank == 4 && combined_rank == 8,
        uii_rank,
        phi_rank,
        psi_rank,
        combined_rank,
        uii_singular_values: uii_sv,
        uij_singular_values: uij_sv,
    }
}

/// Rank of the diagonal-block Hessian forms `Re tr(xi zeta + zeta xi)` and
/// `Im tr(L (xi zeta + zeta xi))` for `L` in `{x, y, xy}`, from the closed forms.
pub fn closed_form_diagonal_rank(x: &Matrix2<C64>, y: &Matrix2<C64>, tol: f64) -> usize {
    let e: Vec<HperpVector> = (0..4).map(|k| HperpVector::from_real(&std::array::from_fn::<f64, 4, _>(|i| f64::from(i == k)))).collect();
    let form = |l: &Matrix2<C64>, imag: bool| -> Matrix4<f64> {
        let lu = UnitaryMatrix3::from_su2_block(l).expect("SU(2) block");
        let z = HperpVector::zero();
        Matrix4::from_fn(|a, b| {
            let v = hessian_closed_form(HessianCase::LoopGamma, &lu, &e[a], &e[b], &z, &z).expect("block form");
            if imag { v.im } else { v.re }
        })
    };
    let ms = [form(&Matrix2::identity(), false), form(x, true), form(y, true), form(&(x * y), true)];
    stacked_rank(&ms, tol).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanMode {
    Vacuous,
    Synthetic,
    Search,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRank {
    pub i: usize,
    pub j: usize,
    pub expected: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HessianSpanReport {
    pub mode: SpanMode,
    /// Quaternionic dimension of `H^1` with `h_perp` coefficients.
    pub blocks: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub ok: bool,
    pub deficient: Vec<(usize, usize)>,
    pub block_ranks: Vec<BlockRank>,
    pub closed_form_rank: Option<usize>,
    pub kernel_words: Vec<Word>,
    /// `sigma_min / sigma_max` of the selected pairing matrix.
    pub pairing_condition: Option<f64>,
    pub x_word: Option<Word>,
    pub y_word: Option<Word>,
}

/// Span verification for `blocks` quaternionic dual curves whose Hessian
/// data come from the SU(2) elements `x` and `y`.
pub fn hessian_span_synthetic(blocks: usize, x: &Matrix2<C64>, y: &Matrix2<C64>, tol: f64) -> HessianSpanReport {
    let sc = span_checks(x, y, tol);
    let mut block_ranks = Vec::new();
    for i in 0..blocks {
        for j in i..blocks {
            let (expected, rank) = if i == j { (4, sc.uii_rank) } else { (8, sc.combined_rank) };
            block_ranks.push(BlockRank { i, j, expected, rank });
        }
    }
    let target_dim = block_ranks.iter().map(|b| b.expected).sum();
    let rank = block_ranks.iter().map(|b| b.rank).sum();
    let deficient: Vec<(usize, usize)> = block_ranks.iter().filter(|b| b.rank < b.expected).map(|b| (b.i, b.j)).collect();
    HessianSpanReport {
        mode: if blocks == 0 { SpanMode::Vacuous } else { SpanMode::Synthetic },
        blocks,
        target_dim,
        rank,
        ok: deficient.is_empty(),
        deficient,
        block_ranks,
        closed_form_rank: (blocks > 0).then(|| closed_form_diagonal_rank(x, y, tol)),
        kernel_words: Vec::new(),
        pairing_condition: None,
        x_word: None,
        y_word: None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanSearchConfig {
    /// Longest reduced word searched for trivial holonomy.
    pub max_len: usize,
    /// Largest power tried on words of length up to 3.
    pub max_power: i32,
    pub tol: f64,
}

impl Default for SpanSearchConfig {
    fn default() -> Self {
        Self { max_len: 6, max_power: 12, tol: 1e-8 }
    }
}

fn su2_part(m: &nalgebra::Matrix3<C64>) -> Matrix2<C64> {
    let b = m.fixed_view::<2, 2>(0, 0).into_owned();
    b / b.determinant().sqrt()
}

/// Best-effort search for dual curves at a reducible `rho` and span verification.
///
/// Kernel words (trivial image) are collected among reduced words up to
/// `max_len` and powers of short words; a subset pairing nondegenerately
/// with `H^1(h_perp)` is selected greedily. The SU(2) parts of the first
/// two words with noncommuting images supply the Hessian data.
pub fn hessian_span_search(rho: &Representation, cfg: &SpanSearchConfig) -> Result<HessianSpanReport, DetectError> {
    let info = classify_stabilizer(rho, 1e-8)?;
    if info.class.tag != StabilizerTag::ReducibleU1 {
        return Err(DetectError::NotReducibleU1);
    }
    let frame = info.frame.ok_or(DetectError::NotReducibleU1)?;
    let module = CoefficientModule::new(ModuleTag::HperpPart, Some(frame.clone()))?;
    let basis = h1_basis(rho, &module, cfg.tol)?;
    let dim = basis.len();
    if dim == 0 {
        return Ok(hessian_span_synthetic(0, &Matrix2::identity(), &Matrix2::identity(), cfg.tol));
    }
    let n = rho.images().len();
    let words = enumerate_reduced_words(n, cfg.max_len);
    let mut candidates: Vec<Word> = words.iter().filter(|w| is_kernel(rho, w)).cloned().collect();
    for w in words.iter().take_while(|w| w.len() <= 3) {
        for k in 2..=cfg.max_power {
            let p = w.pow(k);
            if is_kernel(rho, &p) && !candidates.contains(&p) {
                candidates.push(p);
                break;
            }
        }
    }
    let zs: Vec<CrossedHom> = basis.iter().map(|c| CrossedHom::from_cocycle(c, &module)).collect();
    let pairing = |w: &Word| -> DMatrix<f64> {
        let cols: Vec<Vec<f64>> = zs.iter().map(|z| module.coords(&crossed_extend(rho.images(), z, w))).collect();
        DMatrix::from_fn(4, dim, |i, k| cols[k][i])
    };
    let mut chosen: Vec<Word> = Vec::new();
    let mut stacked = DMatrix::<f64>::zeros(0, dim);
    let mut current = 0;
    for w in &candidates {
        let p = pairing(w);
        let trial = crate::linalg::vstack(&[stacked.clone(), p], dim);
        let r = crate::linalg::rank(&trial, cfg.tol).rank;
        if r > current {
            current = r;
            stacked = trial;
            chosen.push(w.clone());
            if current == dim {
                break;
            }
        }
    }
    if current < dim {
        return Err(DetectError::KernelWordsNotFound { rank: current, needed: dim, candidates: candidates.len() });
    }
    let sv = singular_values(&stacked);
    let condition = sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);

    let short = enumerate_reduced_words(n, 2);
    let blocks: Vec<Matrix2<C64>> = short.iter().map(|w| su2_part(&frame.to_frame(rho.word_holonomy(w).matrix()))).collect();
    let pair = (0..short.len())
        .flat_map(|a| (a + 1..short.len()).map(move |b| (a, b)))
        .find(|&(a, b)| fro3(&(blocks[a] * blocks[b] - blocks[b] * blocks[a])) > 1e-8);
    let (a, b) = pair.ok_or(DetectError::CommutingImages)?;
    let mut report = hessian_span_synthetic(dim / 4, &blocks[a], &blocks[b], cfg.tol);
    report.mode = SpanMode::Search;
    report.kernel_words = chosen;
    report.pairing_condition = Some(condition);
    report.x_word = Some(short[a].clone());
    report.y_word = Some(short[b].clone());
    Ok(report)
}

fn fro3(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn is_kernel(rho: &Representation, w: &Word) -> bool {
    !w.is_empty() && rho.word_holonomy(w).distance(&UnitaryMatrix3::identity()) < 1e-8
}

