use std::fmt;

use serde::{Deserialize, Serialize};

use super::RingScalar;
use crate::error::{Error, Result};

/// An exact point or direction in R³.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[RingScalar; 3]", into = "[RingScalar; 3]")]
pub struct Vec3E {
    pub x: RingScalar,
    pub y: RingScalar,
    pub z: RingScalar,
}

impl From<[RingScalar; 3]> for Vec3E {
    fn from([x, y, z]: [RingScalar; 3]) -> Self {
        Vec3E { x, y, z }
    }
}

impl From<Vec3E> for [RingScalar; 3] {
    fn from(v: Vec3E) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Vec3E {
    pub fn new(x: RingScalar, y: RingScalar, z: RingScalar) -> Self {
        Vec3E { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Vec3E::new(x.into(), y.into(), z.into())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coords(&self) -> [&RingScalar; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn add(&self, o: &Vec3E) -> Vec3E {
        Vec3E::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn sub(&self, o: &Vec3E) -> Vec3E {
        Vec3E::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn neg(&self) -> Vec3E {
        Vec3E::new(-&self.x, -&self.y, -&self.z)
    }

    pub fn scale(&self, s: &RingScalar) -> Vec3E {
        Vec3E::new(s * &self.x, s * &self.y, s * &self.z)
    }

    pub fn dot(&self, o: &Vec3E) -> RingScalar {
        &(&self.x * &o.x + &self.y * &o.y) + &(&self.z * &o.z)
    }

    pub fn cross(&self, o: &Vec3E) -> Vec3E {
        Vec3E::new(
            &self.y * &o.z - &self.z * &o.y,
            &self.z * &o.x - &self.x * &o.z,
            &self.x * &o.y - &self.y * &o.x,
        )
    }

    pub fn norm_sq(&self) -> RingScalar {
        self.dot(self)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }
}

impl fmt::Display for Vec3E {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl fmt::Debug for Vec3E {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Row-major exact 3×3 matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat3E {
    pub rows: [[RingScalar; 3]; 3],
}

impl Mat3E {
    pub fn new(rows: [[RingScalar; 3]; 3]) -> Self {
        Mat3E { rows }
    }

    pub fn identity() -> Self {
        Self::diag(RingScalar::one())
    }

    pub fn diag(s: RingScalar) -> Self {
        let z = RingScalar::zero;
        Mat3E::new([[s.clone(), z(), z()], [z(), s.clone(), z()], [z(), z(), s]])
    }

    pub fn get(&self, i: usize, j: usize) -> &RingScalar {
        &self.rows[i][j]
    }

    pub fn mul(&self, o: &Mat3E) -> Mat3E {
        let r = |i: usize, j: usize| {
            let s = &(&self.rows[i][0] * &o.rows[0][j]) + &(&self.rows[i][1] * &o.rows[1][j]);
            &s + &(&self.rows[i][2] * &o.rows[2][j])
        };
        Mat3E::new([[r(0, 0), r(0, 1), r(0, 2)], [r(1, 0), r(1, 1), r(1, 2)], [r(2, 0), r(2, 1), r(2, 2)]])
    }

    pub fn transpose(&self) -> Mat3E {
        let m = &self.rows;
        Mat3E::new([
            [m[0][0].clone(), m[1][0].clone(), m[2][0].clone()],
            [m[0][1].clone(), m[1][1].clone(), m[2][1].clone()],
            [m[0][2].clone(), m[1][2].clone(), m[2][2].clone()],
        ])
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> RingScalar {
        let m = &self.rows;
        let minor = |r1: usize, c1: usize, r2: usize, c2: usize| &m[r1][c1] * &m[r2][c2] - &m[r1][c2] * &m[r2][c1];
        let t0 = &m[0][0] * &minor(1, 1, 2, 2);
        let t1 = &m[0][1] * &minor(1, 0, 2, 2);
        let t2 = &m[0][2] * &minor(1, 0, 2, 1);
        &(&t0 - &t1) + &t2
    }

    /// `M·Mᵀ = I` and `det M = 1`, both exactly.
    pub fn is_rotation(&self) -> bool {
        self.mul(&self.transpose()) == Mat3E::identity() && self.det().is_one()
    }

    pub fn apply(&self, v: &Vec3E) -> Vec3E {
        let row = |i: usize| {
            let r = &self.rows[i];
            &(&(&r[0] * &v.x) + &(&r[1] * &v.y)) + &(&r[2] * &v.z)
        };
        Vec3E::new(row(0), row(1), row(2))
    }

    pub fn pow(&self, e: u32) -> Mat3E {
        (0..e).fold(Mat3E::identity(), |acc, _| acc.mul(self))
    }
}

impl fmt::Debug for Mat3E {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(
            f,
            "[[{}, {}, {}], [{}, {}, {}], [{}, {}, {}]]",
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]
        )
    }
}

/// A rigid motion `x ↦ linear·x + translation` with `linear ∈ SO(3)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct IsometryE {
    linear: Mat3E,
    translation: Vec3E,
}

impl IsometryE {
    pub fn new(linear: Mat3E, translation: Vec3E) -> Result<Self> {
        if !linear.is_rotation() {
            return Err(Error::Precondition(format!("linear part {linear:?} is not a rotation")));
        }
        Ok(IsometryE { linear, translation })
    }

    pub fn identity() -> Self {
        IsometryE {
            linear: Mat3E::identity(),
            translation: Vec3E::zero(),
        }
    }

    pub fn rotation(linear: Mat3E) -> Result<Self> {
        Self::new(linear, Vec3E::zero())
    }

    pub fn translation(v: Vec3E) -> Self {
        IsometryE {
            linear: Mat3E::identity(),
            translation: v,
        }
    }

    pub fn linear(&self) -> &Mat3E {
        &self.linear
    }

    pub fn offset(&self) -> &Vec3E {
        &self.translation
    }

    pub fn apply(&self, x: &Vec3E) -> Vec3E {
        self.linear.apply(x).add(&self.translation)
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &IsometryE) -> IsometryE {
        IsometryE {
            linear: self.linear.mul(&inner.linear),
            translation: self.linear.apply(&inner.translation).add(&self.translation),
        }
    }

    pub fn invert(&self) -> IsometryE {
        let lt = self.linear.transpose();
        let t = lt.apply(&self.translation).neg();
        IsometryE { linear: lt, translation: t }
    }

    /// `x ↦ rot(x + shift) − shift`.
    pub fn conjugate_by_translation(rot: &Mat3E, shift: &Vec3E) -> Result<IsometryE> {
        let r = IsometryE::rotation(rot.clone())?;
        Ok(IsometryE::translation(shift.neg())
            .compose(&r)
            .compose(&IsometryE::translation(shift.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn third(p: i64, q: i64) -> RingScalar {
        RingScalar::new(p, q, 0, 1)
    }

    /// Counterclockwise rotation about z by arccos(1/3).
    fn phi() -> Mat3E {
        let z = RingScalar::zero;
        Mat3E::new([
            [third(1, 0), third(0, -2), z()],
            [third(0, 2), third(1, 0), z()],
            [z(), z(), RingScalar::one()],
        ])
    }

    fn rho() -> Mat3E {
        let z = RingScalar::zero;
        Mat3E::new([
            [RingScalar::one(), z(), z()],
            [z(), third(1, 0), third(0, -2)],
            [z(), third(0, 2), third(1, 0)],
        ])
    }

    #[test]
    fn identity_is_neutral() {
        assert_eq!(Mat3E::identity().mul(&phi()), phi());
        assert_eq!(phi().mul(&Mat3E::identity()), phi());
    }

    #[test]
    fn phi_is_rotation() {
        assert!(phi().is_rotation());
        assert!(rho().is_rotation());
        assert!(!Mat3E::diag(RingScalar::from_int(-1)).is_rotation());
        assert!(!Mat3E::diag(RingScalar::from_int(2)).is_rotation());
    }

    #[test]
    fn determinant_of_product() {
        assert!(phi().mul(&rho()).det().is_one());
        // a reflection
        let mut m = Mat3E::identity();
        m.rows[2][2] = RingScalar::from_int(-1);
        assert_eq!(m.det(), RingScalar::from_int(-1));
    }

    #[test]
    fn isometry_identity_and_inverse() {
        let v = Vec3E::new(third(1, 1), RingScalar::half(), RingScalar::from_int(-2));
        assert_eq!(IsometryE::identity().apply(&v), v);
        let g = IsometryE::new(phi().mul(&rho()), v.clone()).unwrap();
        assert_eq!(g.compose(&g.invert()), IsometryE::identity());
        assert_eq!(g.invert().compose(&g), IsometryE::identity());
    }

    #[test]
    fn composition_matches_sequential_application() {
        let g = IsometryE::new(phi(), Vec3E::from_ints(1, 0, 0)).unwrap();
        let h = IsometryE::new(rho(), Vec3E::new(RingScalar::half(), third(0, 1), RingScalar::zero())).unwrap();
        let x = Vec3E::new(third(2, -1), RingScalar::one(), RingScalar::half());
        assert_eq!(g.compose(&h).apply(&x), g.apply(&h.apply(&x)));
    }

    #[test]
    fn conjugated_rotation_moves_origin() {
        // rho fixes the x-axis, so rho(u/2) - u/2 = 0 for u = e_x; use phi instead
        let u = Vec3E::from_ints(1, 0, 0);
        let half_u = u.scale(&RingScalar::half());
        let r = IsometryE::conjugate_by_translation(&phi(), &half_u).unwrap();
        let expect = phi().apply(&half_u).sub(&half_u);
        assert_eq!(r.apply(&Vec3E::zero()), expect);
        // (1/6 - 1/2, 2√2/6, 0)
        assert_eq!(expect, Vec3E::new(third(-1, 0), third(0, 1), RingScalar::zero()));
        let r_rho = IsometryE::conjugate_by_translation(&rho(), &half_u).unwrap();
        assert_eq!(r_rho.apply(&Vec3E::zero()), Vec3E::zero());
    }

    #[test]
    fn non_rotation_rejected() {
        assert!(IsometryE::rotation(Mat3E::diag(RingScalar::from_int(2))).is_err());
    }

    #[test]
    fn vec_json_shape() {
        let v = Vec3E::new(third(1, 0), third(0, 2), RingScalar::zero());
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(j, r#"[["1","0","0","1"],["0","2","0","1"],["0","0","0","0"]]"#);
        assert_eq!(serde_json::from_str::<Vec3E>(&j).unwrap(), v);
    }
}
