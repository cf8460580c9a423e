use super::{minimal::model_from_c4c6, tate, CurveInvariants};
use crate::arith::{factorize_with_hints, log_ratio, Budget, Factorization, LogRatio, DEFAULT_PRECISION};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Reduction type at a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    Good,
    Multiplicative,
    Additive,
}

/// Reduction type at `p` from minimal invariants.
pub fn reduction_type(inv: &CurveInvariants, p: &BigUint) -> Reduction {
    let p = BigInt::from(p.clone());
    if !(&inv.disc % &p).is_zero() {
        Reduction::Good
    } else if (&inv.c4 % &p).is_zero() {
        Reduction::Additive
    } else {
        Reduction::Multiplicative
    }
}

/// Conductor, exact or bracketed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorResult {
    pub exact: Option<BigUint>,
    pub lower: BigUint,
    pub upper: BigUint,
    /// Exponents at the primes that were found.
    pub exponents: BTreeMap<BigUint, u32>,
}

/// Conductor from minimal invariants with the default budget.
pub fn conductor(inv: &CurveInvariants, budget: &Budget) -> ConductorResult {
    conductor_with_hints(inv, &[], budget)
}

/// Conductor exponents at 2 and 3 never exceed these.
const MAX_F2: u32 = 8;
const MAX_F3: u32 = 5;

/// Conductor from minimal invariants; `hints` share factors with the
/// discriminant and only speed up factoring.
pub fn conductor_with_hints(inv: &CurveInvariants, hints: &[BigInt], budget: &Budget) -> ConductorResult {
    let f: Factorization = factorize_with_hints(&inv.disc, hints, budget);
    let model = model_from_c4c6(&inv.c4, &inv.c6);
    let mut exponents = BTreeMap::new();
    let mut lower = BigUint::one();
    let mut upper = BigUint::one();
    for p in f.primes().keys() {
        let (lo_e, hi_e) = match reduction_type(inv, p) {
            Reduction::Good => (0, 0),
            Reduction::Multiplicative => (1, 1),
            Reduction::Additive => match p.to_u64() {
                Some(q @ (2 | 3)) => match &model {
                    Some(m) => {
                        let e = tate(m, q).f;
                        (e, e)
                    }
                    None => (2, if q == 2 { MAX_F2 } else { MAX_F3 }),
                },
                _ => (2, 2),
            },
        };
        if lo_e == hi_e && lo_e > 0 {
            exponents.insert(p.clone(), lo_e);
        }
        lower *= p.pow(lo_e);
        upper *= p.pow(hi_e);
    }
    // each unfound prime has exponent 1, or 2 when it divides c4
    lower *= f.cofactor_radical_lower();
    for q in f.composites().keys() {
        upper *= q * q.gcd(inv.c4.magnitude());
    }
    let exact = (lower == upper).then(|| lower.clone());
    ConductorResult {
        exact,
        lower,
        upper,
        exponents,
    }
}

/// Goodness verdict: a curve is good when `N^6 < max(|c4|^3, c6^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Goodness {
    CertifiedGood,
    CertifiedNotGood,
    Unknown,
}

/// Modified Szpiro ratio, exact or bracketed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SzpiroAssessment {
    pub sigma_m: Option<LogRatio>,
    pub sigma_lower: LogRatio,
    pub sigma_upper: LogRatio,
    pub verdict: Goodness,
}

/// `sigma_m = log max(|c4|^3, c6^2) / log N` with the goodness verdict.
pub fn szpiro(inv: &CurveInvariants, cond: &ConductorResult) -> SzpiroAssessment {
    let top = inv.szpiro_numerator();
    let top = top.magnitude();
    let lower_n = cond.lower.clone().max(BigUint::from(2u32));
    let upper_n = cond.upper.clone().max(BigUint::from(2u32));
    let sigma_lower = log_ratio(top, &upper_n, DEFAULT_PRECISION);
    let sigma_upper = log_ratio(top, &lower_n, DEFAULT_PRECISION);
    let sigma_m = cond
        .exact
        .as_ref()
        .map(|n| log_ratio(top, &n.clone().max(BigUint::from(2u32)), DEFAULT_PRECISION));
    let verdict = if cond.upper.pow(6) < *top {
        Goodness::CertifiedGood
    } else if *top <= cond.lower.pow(6) {
        Goodness::CertifiedNotGood
    } else {
        Goodness::Unknown
    };
    SzpiroAssessment {
        sigma_m,
        sigma_lower,
        sigma_upper,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{invariants, CurveModel};

    fn n(a: [i64; 5]) -> BigUint {
        let inv = invariants(&CurveModel::from_i64(a).unwrap());
        conductor(&inv, &Budget::default()).exact.unwrap()
    }

    #[test]
    fn small_conductors() {
        let cases: [([i64; 5], u32); 10] = [
            ([0, -1, 1, 0, 0], 11),
            ([0, 0, 1, -1, 0], 37),
            ([0, 0, 1, 0, 0], 27),
            ([0, 0, 0, 0, 1], 36),
            ([0, 0, 0, -1, 0], 32),
            ([0, 0, 0, 1, 0], 64),
            ([1, 0, 1, 4, -6], 14),
            ([1, 1, 1, -10, -10], 15),
            ([0, -1, 0, -4, 4], 24),
            ([0, 1, 0, 4, 4], 20),
        ];
        for (a, want) in cases {
            assert_eq!(n(a), BigUint::from(want), "{a:?}");
        }
    }

    #[test]
    fn reduction_types() {
        let inv = invariants(&CurveModel::from_i64([0, 0, 0, -1, 0]).unwrap());
        assert_eq!(reduction_type(&inv, &BigUint::from(2u32)), Reduction::Additive);
        assert_eq!(reduction_type(&inv, &BigUint::from(3u32)), Reduction::Good);
        let inv = invariants(&CurveModel::from_i64([0, -1, 1, 0, 0]).unwrap());
        assert_eq!(reduction_type(&inv, &BigUint::from(11u32)), Reduction::Multiplicative);
    }
}
