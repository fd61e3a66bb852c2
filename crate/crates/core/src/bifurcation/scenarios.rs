use super::{BifError, ModelFamily, Mode, ReducibleArc};
use rand::Rng;

fn open(t: &[f64], modes: &[(&[f64], f64)], sf_h_base: i64, cs: f64) -> Result<ReducibleArc, BifError> {
    let modes = modes.iter().map(|(a, b)| Mode { a_knots: a.to_vec(), b: *b }).collect();
    ReducibleArc::new(t.to_vec(), modes, false, sf_h_base, cs, 0)
}

/// One arc from `t = -1` to `t = +1` with `a = t` and `b = -1`.
pub fn pitchfork() -> ModelFamily {
    let arc = open(&[-1.0, 1.0], &[(&[-1.0, 1.0], -1.0)], 0, 0.0).expect("valid");
    ModelFamily { arcs: vec![arc], delta: 0.05 }
}

/// A closed arc, an open arc with one crossing, and an open arc with two
/// crossings of distinct modes.
pub fn figure_one() -> ModelFamily {
    let closed = ReducibleArc::new(
        vec![-0.5, 0.3, -0.5],
        vec![Mode { a_knots: vec![1.0, -1.0, 0.5, 1.0], b: -1.0 }],
        true,
        0,
        0.5,
        0,
    )
    .expect("valid");
    let top = open(&[-1.0, 1.0], &[(&[-0.5, 0.8], -1.0)], 0, 0.25).expect("valid");
    let bottom = open(&[-1.0, 1.0], &[(&[0.3, -0.7], -1.0), (&[0.7, -0.3], 1.0)], 1, 0.0).expect("valid");
    ModelFamily { arcs: vec![closed, top, bottom], delta: 0.05 }
}

fn interior<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-0.9..0.9)).collect()
}

fn coefficient<R: Rng>(rng: &mut R, n: usize, closed: bool) -> Vec<f64> {
    let end = |rng: &mut R| {
        let x: f64 = rng.random_range(0.2..1.0);
        if rng.random_bool(0.5) {
            x
        } else {
            -x
        }
    };
    let mut a = vec![end(rng)];
    a.extend((1..n - 1).map(|_| rng.random_range(-1.0..1.0)));
    a.push(if closed { a[0] } else { end(rng) });
    a
}

fn random_arc<R: Rng>(rng: &mut R) -> Result<ReducibleArc, BifError> {
    let closed = rng.random_bool(0.25);
    let t_knots = if closed {
        let n = rng.random_range(2..=4);
        let mut t = interior(rng, n);
        t.push(t[0]);
        t
    } else {
        let side = |rng: &mut R| if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let mut t = vec![side(rng)];
        let n = rng.random_range(0..=3);
        t.extend(interior(rng, n));
        t.push(side(rng));
        t
    };
    let n = rng.random_range(2..=6);
    let a_knots = coefficient(rng, n, closed);
    let b = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let arc = ReducibleArc::new(
        t_knots,
        vec![Mode { a_knots, b }],
        closed,
        rng.random_range(0..4),
        rng.random_range(-4..=4) as f64 * 0.25,
        2 * rng.random_range(-2..=2),
    )?;
    let pts = arc.bifurcation_points()?;
    let knots = arc.t_knots.len() - 1;
    let near_knot = |s: f64| ((s * knots as f64) - (s * knots as f64).round()).abs() < 1e-3;
    if pts.windows(2).any(|w| w[1].s - w[0].s < 1e-2) || pts.iter().any(|p| near_knot(p.s)) {
        return Err(BifError::NonGeneric("bifurcation points too close".into()));
    }
    Ok(arc)
}

/// A random generic family of one to three single-mode arcs.
pub fn random_family<R: Rng>(rng: &mut R) -> ModelFamily {
    loop {
        let n = rng.random_range(1..=3);
        let arcs: Result<Vec<_>, _> = (0..n).map(|_| random_arc(rng)).collect();
        let Ok(arcs) = arcs else { continue };
        let fam = ModelFamily { arcs, delta: 0.05 };
        let Ok(crit) = fam.critical_values() else { continue };
        if crit.windows(2).all(|w| w[1] - w[0] > 1e-6) {
            return fam;
        }
    }
}
