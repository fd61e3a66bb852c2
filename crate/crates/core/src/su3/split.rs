use super::{c, CMat3, LieAlg3, Su3Error, UnitaryMatrix3, FRAME_TOL};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Conjugator `g` bringing a reducible image set into `S(U(2) x U(1))` block
/// form: `g^-1 M g` is block diagonal for every image `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionFrame {
    pub g: UnitaryMatrix3,
}

impl ReductionFrame {
    /// The standard frame: images are already block diagonal.
    pub fn standard() -> Self {
        Self { g: UnitaryMatrix3::identity() }
    }

    pub fn new(g: UnitaryMatrix3) -> Self {
        Self { g }
    }

    /// Frame built from a generator `v` of a U(1) stabilizer.
    ///
    /// `v` has eigenvalues `i(a, a, -2a)`. The columns of `g` are eigenvectors
    /// of `v` with the two-dimensional eigenspace first.
    pub fn from_u1_generator(v: &LieAlg3) -> Result<Self, Su3Error> {
        let h = v.matrix() * c(0.0, -1.0);
        let h = (h + h.adjoint()) * c(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(h);
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let e: Vec<f64> = idx.iter().map(|&k| eig.eigenvalues[k]).collect();
        let spread = (e[2] - e[0]).abs();
        if spread < 1e-12 {
            return Err(Su3Error::InvalidFrame("generator is zero".into()));
        }
        let order = if (e[1] - e[0]).abs() <= (e[2] - e[1]).abs() {
            [idx[0], idx[1], idx[2]]
        } else {
            [idx[1], idx[2], idx[0]]
        };
        let mut g = CMat3::from_columns(&[
            eig.eigenvectors.column(order[0]).into_owned(),
            eig.eigenvectors.column(order[1]).into_owned(),
            eig.eigenvectors.column(order[2]).into_owned(),
        ]);
        let phase = g.determinant().arg();
        let fix = C64::from_polar(1.0, -phase);
        for r in 0..3 {
            g[(r, 2)] *= fix;
        }
        Ok(Self { g: UnitaryMatrix3::new(g)? })
    }

    /// `g^-1 m g`.
    pub fn to_frame(&self, m: &CMat3) -> CMat3 {
        self.g.matrix().adjoint() * m * self.g.matrix()
    }

    /// `g m g^-1`.
    pub fn from_frame(&self, m: &CMat3) -> CMat3 {
        self.g.matrix() * m * self.g.matrix().adjoint()
    }

    /// Largest corner entry of the images in this frame.
    pub fn block_defect(&self, images: &[UnitaryMatrix3]) -> f64 {
        images
            .iter()
            .map(|m| {
                let mf = self.to_frame(m.matrix());
                [mf[(0, 2)], mf[(1, 2)], mf[(2, 0)], mf[(2, 1)]].iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Whether the images are block diagonal in this frame to [`FRAME_TOL`].
    pub fn fits(&self, images: &[UnitaryMatrix3]) -> bool {
        self.block_defect(images) <= FRAME_TOL
    }
}

/// Standard coordinates `(z1, z2)` of `h_perp`, the corner entries
/// `x[0][2], x[1][2]` in a reduction frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HperpVector {
    pub z1: C64,
    pub z2: C64,
}

impl HperpVector {
    pub fn new(z1: C64, z2: C64) -> Self {
        Self { z1, z2 }
    }

    pub fn zero() -> Self {
        Self::new(c(0.0, 0.0), c(0.0, 0.0))
    }

    /// The matrix `[[0,0,z1],[0,0,z2],[-conj z1,-conj z2,0]]`.
    pub fn to_matrix(&self) -> CMat3 {
        let z = c(0.0, 0.0);
        CMat3::new(z, z, self.z1, z, z, self.z2, -self.z1.conj(), -self.z2.conj(), z)
    }

    /// Read the corner coordinates of a matrix in standard form.
    pub fn from_matrix(m: &CMat3) -> Self {
        Self::new(m[(0, 2)], m[(1, 2)])
    }

    /// Real coordinates `(Re z1, Im z1, Re z2, Im z2)`.
    pub fn to_real(&self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    pub fn from_real(x: &[f64]) -> Self {
        Self::new(c(x[0], x[1]), c(x[2], x[3]))
    }

    /// Hermitian product `z1 conj(w1) + z2 conj(w2)`.
    pub fn hermitian(&self, w: &Self) -> C64 {
        self.z1 * w.z1.conj() + self.z2 * w.z2.conj()
    }

    /// `tr(xi zeta)` of the matrix forms.
    pub fn trace_pairing(&self, w: &Self) -> C64 {
        (self.to_matrix() * w.to_matrix()).trace()
    }

    pub fn norm(&self) -> f64 {
        self.hermitian(self).re.sqrt()
    }
}

/// Split `v` into its `s(u(2)+u(1))` part (in original coordinates) and the
/// `h_perp` coordinates relative to `frame`.
pub fn split_h_hperp(v: &LieAlg3, frame: &ReductionFrame) -> Result<(LieAlg3, HperpVector), Su3Error> {
    UnitaryMatrix3::new(*frame.g.matrix()).map_err(|e| Su3Error::InvalidFrame(e.to_string()))?;
    let vf = frame.to_frame(v.matrix());
    let perp = HperpVector::from_matrix(&vf);
    let hf = vf - perp.to_matrix();
    Ok((LieAlg3::new_unchecked(frame.from_frame(&hf)), perp))
}

/// The element of su(3) (original coordinates) with frame coordinates `p`.
pub fn hperp_to_lie(p: &HperpVector, frame: &ReductionFrame) -> LieAlg3 {
    LieAlg3::new_unchecked(frame.from_frame(&p.to_matrix()))
}

/// The complex structure `J x = [u, x]` with `u = diag(i/3, i/3, -2i/3)`.
pub fn j_action(p: &HperpVector) -> HperpVector {
    let u = CMat3::from_diagonal(&nalgebra::Vector3::new(c(0.0, 1.0 / 3.0), c(0.0, 1.0 / 3.0), c(0.0, -2.0 / 3.0)));
    let x = p.to_matrix();
    HperpVector::from_matrix(&(u * x - x * u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3::fro;

    #[test]
    fn diag_generator_is_pure_h() {
        let v = LieAlg3::new(CMat3::from_diagonal(&nalgebra::Vector3::new(c(0.0, 1.0), c(0.0, 1.0), c(0.0, -2.0)))).unwrap();
        let (h, p) = split_h_hperp(&v, &ReductionFrame::standard()).unwrap();
        assert_eq!(h, v);
        assert_eq!(p, HperpVector::zero());
    }

    #[test]
    fn corner_is_pure_perp() {
        let p0 = HperpVector::new(c(1.0, 0.0), c(0.0, 0.0));
        let v = LieAlg3::new(p0.to_matrix()).unwrap();
        let (h, p) = split_h_hperp(&v, &ReductionFrame::standard()).unwrap();
        assert!(fro(h.matrix()) < 1e-15);
        assert_eq!(p, p0);
    }

    #[test]
    fn j_examples() {
        let j = j_action(&HperpVector::new(c(1.0, 0.0), c(0.0, 0.0)));
        assert!((j.z1 - c(0.0, 1.0)).norm() < 1e-15 && j.z2.norm() < 1e-15);
        assert_eq!(j_action(&HperpVector::zero()), HperpVector::zero());
    }

    #[test]
    fn frame_from_standard_generator() {
        let v = LieAlg3::new(CMat3::from_diagonal(&nalgebra::Vector3::new(c(0.0, -2.0), c(0.0, 1.0), c(0.0, 1.0)))).unwrap();
        let f = ReductionFrame::from_u1_generator(&v).unwrap();
        let vf = f.to_frame(v.matrix());
        assert!((vf[(2, 2)] - c(0.0, -2.0)).norm() < 1e-12);
        assert!((vf[(0, 0)] - c(0.0, 1.0)).norm() < 1e-12);
    }
}
