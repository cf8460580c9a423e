use goodcurves::families::TorsionKind;
use goodcurves::thresholds::{
    c5_radbound_check, compute_thresholds, default_width, delta, thresholds, verify_positivity,
    Positivity, ThresholdSet,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn defined(set: &ThresholdSet, p: Positivity) -> bool {
    match p {
        Positivity::FT | Positivity::GT | Positivity::NegBT => set.delta.is_some(),
        Positivity::ZT => set.xi.is_some(),
        _ => true,
    }
}

#[test]
fn positivity_beyond_every_threshold() {
    for t in TorsionKind::ALL {
        let set = thresholds(t);
        for p in Positivity::ALL {
            assert_eq!(verify_positivity(set, p), defined(set, p), "{t} {p}");
        }
    }
}

#[test]
fn which_thresholds_exist() {
    for t in TorsionKind::ALL {
        let set = thresholds(t);
        let chain_kind = !matches!(t, TorsionKind::C1 | TorsionKind::C2 | TorsionKind::C5);
        assert_eq!(set.delta.is_some(), chain_kind, "{t}");
        assert_eq!(delta(t).is_some(), chain_kind, "{t}");
        assert_eq!(set.xi.is_some(), t != TorsionKind::C5, "{t}");
        assert!(set.theta.interval.width() <= default_width());
    }
    assert!(thresholds(TorsionKind::C10).xi.as_ref().unwrap().interval.lo.is_zero());
}

#[test]
fn narrower_width_nests() {
    let fine = BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
    let set = compute_thresholds(TorsionKind::C7, &fine);
    let coarse = thresholds(TorsionKind::C7);
    let (f, c) = (&set.theta.interval, &coarse.theta.interval);
    assert!(f.width() <= fine);
    assert!(c.lo <= f.lo && f.hi <= c.hi);
}

#[test]
fn is_below_is_strict() {
    let th = &thresholds(TorsionKind::C10).theta;
    // the golden ratio
    assert!(th.is_below(&BigRational::new(BigInt::from(1619), BigInt::from(1000))));
    assert!(!th.is_below(&BigRational::new(BigInt::from(1618), BigInt::from(1000))));
    let xi = thresholds(TorsionKind::C10).xi.as_ref().unwrap();
    assert!(!xi.is_below(&BigRational::zero()));
    assert!(xi.is_below(&BigRational::new(BigInt::one(), BigInt::from(1000))));
}

#[test]
fn c5_radical_bound() {
    assert!(c5_radbound_check());
}
