use super::sf::spectral_flow_fn;
use super::BifError;
use serde::{Deserialize, Serialize};

const ROOT_SAMPLES: usize = 64;
const TANGENT_TOL: f64 = 1e-9;

/// Coefficient data of one `h_perp` mode: `a(s)` through knots, constant `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub a_knots: Vec<f64>,
    pub b: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    Many(Vec<Vec<T>>),
    One(Vec<T>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Scalars {
    Many(Vec<f64>),
    One(f64),
}

#[derive(Clone, Debug, Deserialize)]
struct RawArc {
    t_knots: Vec<f64>,
    a_knots: OneOrMany<f64>,
    b: Scalars,
    #[serde(default)]
    closed: bool,
    #[serde(default)]
    sf_h_base: i64,
    #[serde(default)]
    cs_value: f64,
    #[serde(default)]
    sf_hperp_offset: i64,
}

/// A component of the reducible stratum over `t in [-1, 1]`.
///
/// `t(s)` is piecewise linear through `t_knots`; each mode's `a(s)` is a
/// Catmull-Rom spline through its knots, both on uniform grids in `s`.
/// The local model at `s` is `f_s(z) = sum_k a_k(s)|z_k|^2 + b_k|z_k|^4`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(try_from = "RawArc")]
pub struct ReducibleArc {
    pub t_knots: Vec<f64>,
    pub modes: Vec<Mode>,
    pub closed: bool,
    /// Parity input: spectral flow of the `h` part from the product connection to `s = 0`.
    pub sf_h_base: i64,
    pub cs_value: f64,
    /// `h_perp` spectral flow from the product connection to `s = 0`; even.
    pub sf_hperp_offset: i64,
}

impl TryFrom<RawArc> for ReducibleArc {
    type Error = BifError;

    fn try_from(r: RawArc) -> Result<Self, BifError> {
        let a: Vec<Vec<f64>> = match r.a_knots {
            OneOrMany::Many(v) => v,
            OneOrMany::One(v) => vec![v],
        };
        let b: Vec<f64> = match r.b {
            Scalars::Many(v) => v,
            Scalars::One(x) => vec![x; a.len()],
        };
        if a.len() != b.len() {
            return Err(BifError::Validation(format!("{} a-knot lists but {} b values", a.len(), b.len())));
        }
        let modes = a.into_iter().zip(b).map(|(a_knots, b)| Mode { a_knots, b }).collect();
        ReducibleArc::new(r.t_knots, modes, r.closed, r.sf_h_base, r.cs_value, r.sf_hperp_offset)
    }
}

impl Serialize for ReducibleArc {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("ReducibleArc", 7)?;
        st.serialize_field("t_knots", &self.t_knots)?;
        st.serialize_field("a_knots", &self.modes.iter().map(|m| &m.a_knots).collect::<Vec<_>>())?;
        st.serialize_field("b", &self.modes.iter().map(|m| m.b).collect::<Vec<_>>())?;
        st.serialize_field("closed", &self.closed)?;
        st.serialize_field("sf_h_base", &self.sf_h_base)?;
        st.serialize_field("cs_value", &self.cs_value)?;
        st.serialize_field("sf_hperp_offset", &self.sf_hperp_offset)?;
        st.end()
    }
}

/// Segment index, local coordinate and segment count on a uniform grid.
fn segment(knots: &[f64], s: f64) -> (usize, f64, usize) {
    let m = knots.len() - 1;
    let x = s.clamp(0.0, 1.0) * m as f64;
    let i = (x.floor() as usize).min(m - 1);
    (i, x - i as f64, m)
}

fn catmull_rom(knots: &[f64], closed: bool, s: f64) -> (f64, f64) {
    let (i, u, m) = segment(knots, s);
    let at = |j: isize| -> f64 {
        if closed {
            knots[j.rem_euclid(m as isize) as usize]
        } else if j < 0 {
            2.0 * knots[0] - knots[1]
        } else if j as usize > m {
            2.0 * knots[m] - knots[m - 1]
        } else {
            knots[j as usize]
        }
    };
    let i = i as isize;
    let (p0, p1, p2, p3) = (at(i - 1), at(i), at(i + 1), at(i + 2));
    let c1 = -p0 + p2;
    let c2 = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
    let c3 = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
    let v = 0.5 * (2.0 * p1 + c1 * u + c2 * u * u + c3 * u * u * u);
    let dv = 0.5 * (c1 + 2.0 * c2 * u + 3.0 * c3 * u * u) * m as f64;
    (v, dv)
}

impl ReducibleArc {
    pub fn new(
        t_knots: Vec<f64>,
        modes: Vec<Mode>,
        closed: bool,
        sf_h_base: i64,
        cs_value: f64,
        sf_hperp_offset: i64,
    ) -> Result<Self, BifError> {
        let arc = Self { t_knots, modes, closed, sf_h_base, cs_value, sf_hperp_offset };
        arc.validate()?;
        Ok(arc)
    }

    fn validate(&self) -> Result<(), BifError> {
        let bad = |m: &str| Err(BifError::Validation(m.into()));
        let t = &self.t_knots;
        if t.len() < 2 || self.modes.iter().any(|m| m.a_knots.len() < 2) {
            return bad("need at least two knots");
        }
        if t.iter().chain(self.modes.iter().flat_map(|m| &m.a_knots)).any(|x| !x.is_finite()) {
            return bad("non-finite knot");
        }
        if t.windows(2).any(|w| w[0] == w[1]) {
            return bad("t(s) must not be constant on a segment");
        }
        if self.modes.iter().any(|m| m.b == 0.0 || !m.b.is_finite()) {
            return bad("quartic coefficient b must be nonzero");
        }
        if self.sf_hperp_offset % 2 != 0 {
            return bad("h_perp spectral flow offset must be even");
        }
        let last = t.len() - 1;
        if self.closed {
            if t[0] != t[last] || self.modes.iter().any(|m| m.a_knots[0] != m.a_knots[m.a_knots.len() - 1]) {
                return bad("closed arc data must match at s = 0 and s = 1");
            }
            if t.len() < 3 {
                return bad("closed arc needs at least three knots");
            }
            if t.iter().any(|x| x.abs() >= 1.0) {
                return bad("closed arc must lie in (-1, 1)");
            }
        } else {
            if t[0].abs() != 1.0 || t[last].abs() != 1.0 {
                return bad("open arc must start and end at t = -1 or t = +1");
            }
            if t[1..last].iter().any(|x| x.abs() >= 1.0) {
                return bad("interior knots must lie in (-1, 1)");
            }
        }
        if self.fold_indices().len() % 2 == 1 && self.closed {
            return bad("closed arc has an odd number of folds");
        }
        for (k, m) in self.modes.iter().enumerate() {
            if m.a_knots[0] == 0.0 || (!self.closed && m.a_knots[m.a_knots.len() - 1] == 0.0) {
                return Err(BifError::NonRegular { t: self.t_knots[0], detail: format!("mode {k} vanishes at an end") });
            }
        }
        let n = 4096;
        for i in 0..=n {
            let s = i as f64 / n as f64;
            let active = self.modes.iter().filter(|m| self.a(m, s).0 * m.b < 0.0).count();
            if active > 1 {
                return Err(BifError::NonGeneric(format!("two modes carry irreducibles at s = {s:.4}")));
            }
        }
        self.bifurcation_points().map(|_| ())
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn t(&self, s: f64) -> f64 {
        let (i, u, _) = segment(&self.t_knots, s);
        self.t_knots[i] + u * (self.t_knots[i + 1] - self.t_knots[i])
    }

    /// Sign of `t'(s)`.
    pub fn t_direction(&self, s: f64) -> f64 {
        let (i, _, _) = segment(&self.t_knots, s);
        (self.t_knots[i + 1] - self.t_knots[i]).signum()
    }

    /// `(a_k(s), a_k'(s))`.
    pub fn a(&self, mode: &Mode, s: f64) -> (f64, f64) {
        catmull_rom(&mode.a_knots, self.closed, s)
    }

    pub fn a_mode(&self, k: usize, s: f64) -> (f64, f64) {
        self.a(&self.modes[k], s)
    }

    /// Knot indices where `t'` changes sign; index 0 counts for closed arcs.
    pub fn fold_indices(&self) -> Vec<usize> {
        let t = &self.t_knots;
        let m = t.len() - 1;
        let slope = |j: usize| (t[j + 1] - t[j]).signum();
        let mut out = Vec::new();
        if self.closed && slope(m - 1) != slope(0) {
            out.push(0);
        }
        out.extend((1..m).filter(|&j| slope(j - 1) != slope(j)));
        out
    }

    /// Number of folds strictly inside `(0, s)`.
    pub fn folds_before(&self, s: f64) -> usize {
        let m = (self.t_knots.len() - 1) as f64;
        self.fold_indices().iter().filter(|&&j| j > 0 && (j as f64) / m < s).count()
    }

    /// `(-1)^{Sf(theta, A(s))}`.
    pub fn parity(&self, s: f64) -> i64 {
        if (self.sf_h_base + self.folds_before(s) as i64).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Orientation of the arc relative to increasing `s`; constant along the arc.
    pub fn orientation(&self) -> i64 {
        let s = 0.5 / (self.t_knots.len() - 1) as f64;
        self.parity(s) * self.t_direction(s) as i64
    }

    /// Zeros of the mode coefficients with the signs of `a'`.
    pub fn bifurcation_points(&self) -> Result<Vec<BifurcationPoint>, BifError> {
        let mut out = Vec::new();
        for (k, m) in self.modes.iter().enumerate() {
            let segs = m.a_knots.len() - 1;
            let n = segs * ROOT_SAMPLES;
            let f = |s: f64| self.a(m, s);
            let mut prev = f(0.0);
            for i in 1..=n {
                let s1 = i as f64 / n as f64;
                let s0 = (i - 1) as f64 / n as f64;
                let cur = f(s1);
                if (prev.0 > 0.0) != (cur.0 > 0.0) {
                    let (mut lo, mut hi) = (s0, s1);
                    for _ in 0..80 {
                        let mid = 0.5 * (lo + hi);
                        if (f(mid).0 > 0.0) == (prev.0 > 0.0) {
                            lo = mid
                        } else {
                            hi = mid
                        }
                    }
                    let s = 0.5 * (lo + hi);
                    let d = f(s).1;
                    if d.abs() < TANGENT_TOL {
                        return Err(BifError::Tangential { mode: k, s });
                    }
                    out.push(BifurcationPoint { mode: k, s, t: self.t(s), sign: d.signum() as i64 });
                } else if prev.0.abs() < TANGENT_TOL && prev.1.abs() < TANGENT_TOL {
                    return Err(BifError::Tangential { mode: k, s: s0 });
                }
                prev = cur;
            }
        }
        out.sort_by(|a, b| a.s.total_cmp(&b.s));
        Ok(out)
    }

    /// All `s` with `t(s) = t`, one per crossing.
    pub fn preimages(&self, t: f64) -> Vec<f64> {
        let k = &self.t_knots;
        let m = k.len() - 1;
        let mut out = Vec::new();
        for j in 0..m {
            let (a, b) = (k[j], k[j + 1]);
            let u = (t - a) / (b - a);
            let lower_ok = if j == 0 && !self.closed { u >= 0.0 } else { u > 0.0 };
            if lower_ok && u <= 1.0 {
                out.push((j as f64 + u) / m as f64);
            }
        }
        out
    }

    /// Multiplicity-two `h_perp` eigenvalues `2 a_k(s)` at `s`.
    pub fn hperp_eigenvalues(&self, s: f64) -> Vec<(f64, usize)> {
        self.modes.iter().map(|m| (2.0 * self.a(m, s).0, 2)).collect()
    }

    /// `h_perp` spectral flow along the arc from `s0` to `s1`.
    pub fn hperp_flow(&self, s0: f64, s1: f64, delta: f64) -> Result<i64, BifError> {
        let ends = self.hperp_eigenvalues(s0).into_iter().chain(self.hperp_eigenvalues(s1));
        let floor = ends.map(|e| e.0.abs()).fold(f64::INFINITY, f64::min);
        let d = delta.min(0.5 * floor);
        let segs = self.modes.iter().map(|m| m.a_knots.len()).max().unwrap_or(2) * ROOT_SAMPLES;
        spectral_flow_fn(&|u| self.hperp_eigenvalues(s0 + u * (s1 - s0)), d, segs)
    }

    /// `Sf_hperp(theta, A(s))`.
    pub fn sf_hperp(&self, s: f64, delta: f64) -> Result<i64, BifError> {
        if s == 0.0 {
            return Ok(self.sf_hperp_offset);
        }
        Ok(self.sf_hperp_offset + self.hperp_flow(0.0, s, delta)?)
    }
}

/// A zero of one mode coefficient; `sign` is the sign of `a'(s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationPoint {
    pub mode: usize,
    pub s: f64,
    pub t: f64,
    pub sign: i64,
}

/// Spectral flow of the Kuranishi model from the reducible at the origin to
/// the critical circle `|z|^2 = -a / 2b` along the radial path, on the
/// stabilizer direction plus the two real directions of `C`.
pub fn orbit_flow(a: f64, b: f64) -> Result<i64, BifError> {
    let r2 = -a / (2.0 * b);
    if r2 <= 0.0 {
        return Err(BifError::Validation("no critical circle".into()));
    }
    let rs = r2.sqrt();
    let eig = |u: f64| -> Vec<(f64, usize)> {
        let r = u * rs;
        let d = 2.0 * a + 4.0 * b * r * r;
        let e = 2.0 * a + 12.0 * b * r * r;
        let q = (d * d + 4.0 * r * r).sqrt();
        let mut v = vec![((d - q) / 2.0, 1), ((d + q) / 2.0, 1), (e, 1)];
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        v
    };
    let delta = 0.5 * [2.0 * a.abs(), rs, 4.0 * a.abs()].into_iter().fold(f64::INFINITY, f64::min);
    spectral_flow_fn(&eig, delta, 64)
}
