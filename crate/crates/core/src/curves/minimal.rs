use super::{invariants, CurveInvariants, CurveModel, Isomorphism};
use crate::arith::{factorize_with_hints, ord, Budget};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A global minimal model with the change of variables that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    pub model: CurveModel,
    pub invariants: CurveInvariants,
    pub transform: Isomorphism,
}

/// Reduced integral model with invariants `(c4, c6)`, if one exists.
///
/// The result has `a1, a3` in `{0, 1}` and `a2` in `{-1, 0, 1}`.
pub fn model_from_c4c6(c4: &BigInt, c6: &BigInt) -> Option<CurveModel> {
    let b2 = {
        let r = (-c6).mod_floor(&BigInt::from(12));
        if r > BigInt::from(6) {
            r - 12
        } else {
            r
        }
    };
    let exact = |n: BigInt, d: i64| {
        let (q, r) = n.div_rem(&BigInt::from(d));
        r.is_zero().then_some(q)
    };
    let b4 = exact(&b2 * &b2 - c4, 24)?;
    let b6 = exact(-(&b2 * &b2 * &b2) + &b2 * &b4 * 36 - c6, 216)?;
    let two = BigInt::from(2);
    let a1 = b2.mod_floor(&two);
    let a3 = b6.mod_floor(&two);
    let a2 = exact(&b2 - &a1, 4)?;
    let a4 = exact(&b4 - &a1 * &a3, 2)?;
    let a6 = exact(&b6 - &a3, 4)?;
    let m = CurveModel::new(a1, a2, a3, a4, a6).ok()?;
    let i = invariants(&m);
    (i.c4 == *c4 && i.c6 == *c6).then_some(m)
}

/// Global minimal model with the default factoring budget.
pub fn minimal_model(m: &CurveModel) -> Result<MinimalModel> {
    minimal_model_with(m, &[], &Budget::default())
}

/// Global minimal model; `hints` are integers sharing factors with the
/// discriminant and only speed up factoring.
///
/// Errors with `IncompleteFactorization` if `gcd(c6^2, disc)` cannot be
/// factored within `budget`.
pub fn minimal_model_with(m: &CurveModel, hints: &[BigInt], budget: &Budget) -> Result<MinimalModel> {
    let inv = invariants(m);
    if inv.disc.is_zero() {
        return Err(Error::SingularCurve);
    }
    let g = inv.c6.pow(2u32).gcd(&inv.disc);
    let mut c4 = inv.c4.clone();
    let mut c6 = inv.c6.clone();
    let mut u = BigInt::one();
    if !g.is_one() {
        let f = factorize_with_hints(&g, hints, budget);
        if !f.is_complete() {
            // cofactor primes exceed the trial bound, so only a large cofactor can hide a 12th power
            let least = (BigUint::from(budget.trial_bound) + 1u32).pow(12);
            if f.cofactor() >= least {
                return Err(Error::IncompleteFactorization(f.cofactor().to_string()));
            }
        }
        for (p, &e) in f.primes() {
            let mut d = e / 12;
            if d == 0 {
                continue;
            }
            let pb = BigInt::from(p.clone());
            if p == &BigUint::from(2u32) {
                let a = (&c4 >> (4 * d) as usize).mod_floor(&BigInt::from(16));
                let b = (&c6 >> (6 * d) as usize).mod_floor(&BigInt::from(32));
                let b4 = &b % 4;
                if b4 != BigInt::from(3)
                    && !(a.is_zero() && (b.is_zero() || b == BigInt::from(8)))
                {
                    d -= 1;
                }
            } else if p == &BigUint::from(3u32) && ord(&c6, p) == 6 * d + 2 {
                d -= 1;
            }
            if d > 0 {
                let pd = pb.pow(d);
                c4 /= pd.pow(4);
                c6 /= pd.pow(6);
                u *= pd;
            }
        }
    }
    let model = model_from_c4c6(&c4, &c6)
        .expect("Kraus conditions hold after removing admissible scalings");
    let transform = find_transform(m, &model, &u).expect("isomorphic models are related by (u, r, s, w)");
    let invariants = invariants(&model);
    Ok(MinimalModel {
        model,
        invariants,
        transform,
    })
}

/// Recovers `(r, s, w)` for a known scale `|u|`, trying both signs.
fn find_transform(from: &CurveModel, to: &CurveModel, u: &BigInt) -> Option<Isomorphism> {
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    for sign in [1i32, -1] {
        let u = q(u) * BigRational::from_integer(sign.into());
        let (a1, a2, a3) = (q(&from.a1), q(&from.a2), q(&from.a3));
        let (b1, b2, b3) = (q(&to.a1), q(&to.a2), q(&to.a3));
        let two = q(&BigInt::from(2));
        let three = q(&BigInt::from(3));
        let s = (&u * &b1 - &a1) / &two;
        let r = (&u * &u * &b2 - &a2 + &s * &a1 + &s * &s) / &three;
        let w = (&u * &u * &u * &b3 - &a3 - &r * &a1) / &two;
        let iso = Isomorphism { u, r, s, w };
        if iso.apply(from).as_ref() == Some(to) {
            return Some(iso);
        }
    }
    None
}

/// True iff the two curves are not isomorphic over the rationals.
pub fn not_isomorphic(m1: &CurveModel, m2: &CurveModel) -> Result<bool> {
    let a = minimal_model(m1)?;
    let b = minimal_model(m2)?;
    Ok(a.invariants.c4 != b.invariants.c4 || a.invariants.c6 != b.invariants.c6)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: [i64; 5]) -> CurveModel {
        CurveModel::from_i64(a).unwrap()
    }

    #[test]
    fn minimal_is_fixed_point() {
        for a in [[0, -1, 1, -10, -20], [1, 0, 1, 4, -6], [0, 0, 1, -1, 0], [0, 0, 0, -1, 0]] {
            let mm = minimal_model(&m(a)).unwrap();
            assert_eq!(mm.model, m(a));
            assert!(mm.transform.is_identity());
        }
    }

    #[test]
    fn rescaled_recovers() {
        let base = m([1, -1, 1, -29, -53]);
        for u in [2i64, 3, 6, 5] {
            let iso = Isomorphism {
                u: BigRational::new(1.into(), u.into()),
                r: BigRational::from_integer(7.into()),
                s: BigRational::from_integer((-3).into()),
                w: BigRational::from_integer(11.into()),
            };
            let big = iso.apply(&base).unwrap();
            let mm = minimal_model(&big).unwrap();
            assert_eq!(mm.invariants, invariants(&base));
            assert_eq!(mm.transform.apply(&big).unwrap(), mm.model);
            assert_eq!(minimal_model(&mm.model).unwrap().model, mm.model);
        }
    }

    #[test]
    fn short_models_with_large_scaling() {
        let big = m([0, 0, 0, -(1i64 << 12) * 5, (1i64 << 18) * 7]);
        let mm = minimal_model(&big).unwrap();
        let q = invariants(&big).disc / &mm.invariants.disc;
        let r = q.magnitude().nth_root(12);
        assert_eq!(r.pow(12), *q.magnitude());
    }

    #[test]
    fn isomorphism_class() {
        let a = m([1, 0, 1, 4, -6]);
        let b = Isomorphism {
            u: BigRational::new(1.into(), 3.into()),
            ..Isomorphism::identity()
        }
        .apply(&a)
        .unwrap();
        assert!(!not_isomorphic(&a, &b).unwrap());
        assert!(not_isomorphic(&a, &m([0, -1, 1, -10, -20])).unwrap());
    }
}
