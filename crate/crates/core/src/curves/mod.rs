//! Weierstrass models over the rationals: invariants, minimal models,
//! reduction types, conductors, Szpiro ratios and torsion subgroups.

mod conductor;
pub mod fixtures;
mod minimal;
mod tate;
mod torsion;

pub use conductor::{
    conductor, conductor_with_hints, reduction_type, szpiro, ConductorResult, Goodness,
    Reduction, SzpiroAssessment,
};
pub use minimal::{minimal_model, minimal_model_with, model_from_c4c6, not_isomorphic, MinimalModel};
pub use tate::{tate, Kodaira, TateResult};
pub use torsion::{
    division_polynomial, has_rational_root, psi2_c5, psi2_has_rational_root, torsion_points, torsion_subgroup,
    Point,
};

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveModel {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

/// `c4`, `c6` and the discriminant, with `1728 disc = c4^3 - c6^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveInvariants {
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

impl CurveInvariants {
    /// `max(|c4|^3, c6^2)`.
    pub fn szpiro_numerator(&self) -> BigInt {
        let c43 = self.c4.pow(3u32);
        let c43 = if c43 < BigInt::zero() { -c43 } else { c43 };
        c43.max(self.c6.pow(2u32))
    }
}

impl CurveModel {
    /// Builds a model, rejecting singular curves.
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Result<Self> {
        let m = CurveModel { a1, a2, a3, a4, a6 };
        if m.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(m)
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
        CurveModel::new(a1, a2, a3, a4, a6)
    }

    pub fn from_coefficients(a: [BigInt; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        CurveModel::new(a1, a2, a3, a4, a6)
    }

    pub fn coefficients(&self) -> [BigInt; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + a2 * 4;
        let b4 = a4 * 2 + a1 * a3;
        let b6 = a3 * a3 + a6 * 4;
        let b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2 * &b8) - BigInt::from(8) * b4.pow(3) - BigInt::from(27) * &b6 * &b6
            + BigInt::from(9) * &b2 * &b4 * &b6
    }

    pub fn invariants(&self) -> CurveInvariants {
        invariants(self)
    }

    /// True when `(x, y)` satisfies the equation.
    pub fn contains(&self, x: &BigRational, y: &BigRational) -> bool {
        let r = |v: &BigInt| BigRational::from_integer(v.clone());
        let lhs = y * y + r(&self.a1) * x * y + r(&self.a3) * y;
        let rhs = x * x * x + r(&self.a2) * x * x + r(&self.a4) * x + r(&self.a6);
        lhs == rhs
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

/// `c4`, `c6` and the discriminant of a model.
pub fn invariants(m: &CurveModel) -> CurveInvariants {
    let (b2, b4, b6, _) = m.b_invariants();
    let c4 = &b2 * &b2 - &b4 * 24;
    let c6 = -(&b2 * &b2 * &b2) + &b2 * &b4 * 36 - &b6 * 216;
    CurveInvariants {
        c4,
        c6,
        disc: m.discriminant(),
    }
}

/// Change of variables `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub u: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub w: BigRational,
}

impl Isomorphism {
    pub fn identity() -> Self {
        Isomorphism {
            u: BigRational::one(),
            r: BigRational::zero(),
            s: BigRational::zero(),
            w: BigRational::zero(),
        }
    }

    pub fn scaling(u: BigInt) -> Self {
        Isomorphism {
            u: BigRational::from_integer(u),
            ..Isomorphism::identity()
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Isomorphism::identity()
    }

    /// Transformed coefficients, possibly non-integral.
    pub fn apply_rational(&self, m: &CurveModel) -> [BigRational; 5] {
        let q = |v: &BigInt| BigRational::from_integer(v.clone());
        let (a1, a2, a3, a4, a6) = (q(&m.a1), q(&m.a2), q(&m.a3), q(&m.a4), q(&m.a6));
        let (u, r, s, t) = (&self.u, &self.r, &self.s, &self.w);
        let two = q(&BigInt::from(2));
        let three = q(&BigInt::from(3));
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let n1 = (&a1 + &two * s) / u;
        let n2 = (&a2 - s * &a1 + &three * r - s * s) / &u2;
        let n3 = (&a3 + r * &a1 + &two * t) / &u3;
        let n4 = (&a4 - s * &a3 + &two * r * &a2 - (t + r * s) * &a1 + &three * r * r
            - &two * s * t)
            / &u4;
        let n6 = (&a6 + r * &a4 + r * r * &a2 + r * r * r - t * &a3 - t * t - r * t * &a1) / &u6;
        [n1, n2, n3, n4, n6]
    }

    /// Transformed model when it is integral.
    pub fn apply(&self, m: &CurveModel) -> Option<CurveModel> {
        let c = self.apply_rational(m);
        if c.iter().all(|v| v.is_integer()) {
            let [a1, a2, a3, a4, a6] = c.map(|v| v.to_integer());
            Some(CurveModel { a1, a2, a3, a4, a6 })
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_1728() {
        let m = CurveModel::from_i64([1, -1, 1, -10, -20]).unwrap();
        let i = invariants(&m);
        assert_eq!(i.disc * 1728, i.c4.pow(3) - i.c6.pow(2));
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(CurveModel::from_i64([0, 0, 0, 0, 0]), Err(Error::SingularCurve)));
    }

    #[test]
    fn fixture_e_invariants() {
        let m = CurveModel::from_i64([1, 0, 0, -2342114817, -46491207963039]).unwrap();
        let i = invariants(&m);
        assert_eq!(i.c4, BigInt::from(19i64 * 53 * 157 * 251 * 2833));
        let d = -(BigInt::from(2).pow(3)
            * BigInt::from(3).pow(6)
            * BigInt::from(7).pow(3)
            * BigInt::from(67).pow(9)
            * BigInt::from(127).pow(3));
        assert_eq!(i.disc, d);
    }

    #[test]
    fn isomorphism_scales_invariants() {
        let m = CurveModel::from_i64([1, 0, 1, 4, -6]).unwrap();
        let iso = Isomorphism {
            u: BigRational::from_integer(BigInt::from(1)) / BigRational::from_integer(2.into()),
            ..Isomorphism::identity()
        };
        let big = iso.apply(&m).unwrap();
        let (i, j) = (invariants(&m), invariants(&big));
        assert_eq!(j.c4, i.c4 * 16);
        assert_eq!(j.c6, i.c6 * 64);
        assert_eq!(j.disc, i.disc * 4096);
    }
}
