use super::BifError;
use serde::{Deserialize, Serialize};

/// Values below this are treated as touching the crossing segment.
const ZERO_TOL: f64 = 1e-13;
const MAX_REFINE: usize = 8;

/// One eigenvalue branch sampled on the common grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenBranch {
    pub values: Vec<f64>,
    pub multiplicity: usize,
}

/// Eigenvalue branches sampled at increasing parameters from 0 to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPath {
    pub s: Vec<f64>,
    pub branches: Vec<EigenBranch>,
}

impl EigenPath {
    pub fn from_fn(f: &dyn Fn(f64) -> Vec<(f64, usize)>, n: usize) -> Result<Self, BifError> {
        let s: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        let vals: Vec<Vec<(f64, usize)>> = s.iter().map(|&x| f(x)).collect();
        let m = vals[0].len();
        if vals.iter().any(|v| v.len() != m || v.iter().zip(&vals[0]).any(|(a, b)| a.1 != b.1)) {
            return Err(BifError::Validation("branch count or multiplicity changes along the path".into()));
        }
        let branches = (0..m)
            .map(|i| EigenBranch { values: vals.iter().map(|v| v[i].0).collect(), multiplicity: vals[0][i].1 })
            .collect();
        Ok(Self { s, branches })
    }
}

fn check_delta(path: &EigenPath, delta: f64) -> Result<(), BifError> {
    let ends = path.branches.iter().flat_map(|b| [b.values[0], *b.values.last().unwrap()]);
    let floor = ends.map(f64::abs).filter(|&x| x > ZERO_TOL).fold(f64::INFINITY, f64::min);
    if !(delta > 0.0 && delta < floor) {
        return Err(BifError::BadDelta { delta, floor });
    }
    Ok(())
}

/// Signed crossings of each branch with the segment `(0, -delta) -> (1, delta)`
/// plus the number of sign changes (for refinement).
fn count(path: &EigenPath, delta: f64) -> Result<(i64, usize), BifError> {
    check_delta(path, delta)?;
    let n = path.s.len();
    let mut total = 0;
    let mut events = 0;
    for b in &path.branches {
        let g: Vec<f64> = path.s.iter().zip(&b.values).map(|(s, v)| v - (-delta + 2.0 * delta * s)).collect();
        if let Some(k) = (1..n - 1).find(|&k| g[k].abs() < ZERO_TOL) {
            return Err(BifError::NonTransverse { s: path.s[k] });
        }
        for k in 0..n - 1 {
            let (a, c) = (g[k] > 0.0, g[k + 1] > 0.0);
            if a != c {
                events += b.multiplicity;
                total += if c { b.multiplicity as i64 } else { -(b.multiplicity as i64) };
            }
        }
    }
    Ok((total, events))
}

/// Spectral flow of a sampled path: signed, multiplicity-weighted crossings
/// with the tilted segment, upward crossings positive.
pub fn spectral_flow(path: &EigenPath, delta: f64) -> Result<i64, BifError> {
    count(path, delta).map(|c| c.0)
}

/// Spectral flow of `f` on `[0, 1]`; the grid is refined until the
/// crossing pattern is stable, failing on non-transverse crossings.
pub fn spectral_flow_fn(f: &dyn Fn(f64) -> Vec<(f64, usize)>, delta: f64, n0: usize) -> Result<i64, BifError> {
    let mut n = n0.max(8);
    let mut prev: Option<(i64, usize)> = None;
    let mut last_err = None;
    for _ in 0..MAX_REFINE {
        match count(&EigenPath::from_fn(f, n)?, delta) {
            Ok(c) => {
                if prev == Some(c) {
                    return Ok(c.0);
                }
                prev = Some(c);
            }
            Err(e @ BifError::BadDelta { .. }) => return Err(e),
            Err(e) => {
                last_err = Some(e);
                prev = None;
            }
        }
        n = 2 * n + 1;
    }
    Err(last_err.unwrap_or(BifError::NonTransverse { s: f64::NAN }))
}
