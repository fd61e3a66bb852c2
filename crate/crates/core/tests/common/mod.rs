#![allow(dead_code)]

use nalgebra::Matrix2;
use su3casson::presentation::{parse_presentation, GroupPresentation};
use su3casson::repvariety::{GroupKind, Representation};
use su3casson::su3::UnitaryMatrix3;
use su3casson::C64;
use std::f64::consts::PI;

pub const SIGMA235: &str = "<s,t | (s*t)^2 = s^3; s^3 = t^5>";
pub const TREFOIL: &str = "<x,y | x*y*x = y*x*y>";

pub fn sigma235() -> GroupPresentation {
    parse_presentation(SIGMA235).unwrap()
}

/// Unit quaternion `cos a + sin a (n . (i, j, k))` as an SU(2) matrix.
pub fn su2_rotation(a: f64, n: [f64; 3]) -> Matrix2<C64> {
    let (w, x, y, z) = (a.cos(), a.sin() * n[0], a.sin() * n[1], a.sin() * n[2]);
    Matrix2::new(C64::new(w, x), C64::new(y, z), C64::new(-y, z), C64::new(w, -x))
}

/// Pair of unit axes with prescribed inner product.
pub fn axes(dot: f64) -> ([f64; 3], [f64; 3]) {
    assert!(dot.abs() < 1.0);
    ([1.0, 0.0, 0.0], [dot, (1.0 - dot * dot).sqrt(), 0.0])
}

/// SU(2) pair with rotation angles `a`, `b` and `Re(q_x q_y) = cos c`.
pub fn su2_pair(a: f64, b: f64, c: f64) -> (Matrix2<C64>, Matrix2<C64>) {
    let dot = (a.cos() * b.cos() - c.cos()) / (a.sin() * b.sin());
    let (n1, n2) = axes(dot);
    (su2_rotation(a, n1), su2_rotation(b, n2))
}

pub fn embed(m: &Matrix2<C64>) -> UnitaryMatrix3 {
    UnitaryMatrix3::from_su2_block(m).unwrap()
}

/// Irreducible SU(2) representation of the binary icosahedral group with
/// `tr s = 2 cos(pi/3)`, `tr t = 2 cos(k pi/5)` (`k` = 1 or 3), `tr st = 0`.
pub fn sigma235_rep(k: u32) -> Representation {
    let (s, t) = su2_pair(PI / 3.0, k as f64 * PI / 5.0, PI / 2.0);
    Representation::new(sigma235(), GroupKind::Su2InSu3, vec![embed(&s), embed(&t)]).unwrap()
}

/// Irreducible SU(2) representation of the trefoil group with meridian angle `theta`.
pub fn trefoil_rep(theta: f64) -> Representation {
    let c = theta.cos();
    let s2 = theta.sin().powi(2);
    let dot = (2.0 * c * c - 1.0) / (2.0 * s2);
    let (n1, n2) = axes(dot);
    let x = su2_rotation(theta, n1);
    let y = su2_rotation(theta, n2);
    Representation::new(parse_presentation(TREFOIL).unwrap(), GroupKind::Su2InSu3, vec![embed(&x), embed(&y)]).unwrap()
}
