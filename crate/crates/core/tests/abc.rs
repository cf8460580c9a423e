use goodcurves::abc::{
    c5_triple, certified_seed, certify_by_factoring, chain, h_curve, is_good, next_triple,
    prime_power_triple, quality, seed, AbcTriple, Witness,
};
use goodcurves::arith::Budget;
use goodcurves::families::TorsionKind;
use goodcurves::Error;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;

fn rad(mut n: u64) -> u64 {
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            r *= p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        r *= n;
    }
    r
}

#[test]
fn triple_validation() {
    assert!(AbcTriple::from_i64(1, 2, 4).is_err());
    assert!(AbcTriple::from_i64(2, 4, 6).is_err());
    assert!(AbcTriple::from_i64(-1, 9, 8).is_ok());
}

#[test]
fn quality_of_one_eight_nine() {
    let t = AbcTriple::from_i64(1, 8, 9).unwrap();
    assert_eq!(quality(&t, &Budget::default()).unwrap().display_sig(6), "1.22629");
}

#[test]
fn goodness_matches_brute_force() {
    let budget = Budget::default();
    for c in 3u64..600 {
        for a in 1..(c + 1) / 2 {
            let b = c - a;
            if a.gcd(&b) != 1 {
                continue;
            }
            let t = AbcTriple::from_i64(a as i64, b as i64, c as i64).unwrap();
            let expected = rad(a) * rad(b) * rad(c) < c;
            assert_eq!(is_good(&t, &budget), Some(expected), "{t}");
            assert_eq!(certify_by_factoring(&t, &budget).is_ok(), expected, "{t}");
        }
    }
}

#[test]
fn tampered_certificates_fail() {
    let budget = Budget::default();
    let mut ct = certify_by_factoring(&AbcTriple::from_i64(1, 8, 9).unwrap(), &budget).unwrap();
    ct.verify().unwrap();
    ct.certificate.witness = Witness::Radical(vec![BigUint::from(2u32)]);
    assert!(ct.verify().is_err());

    let p0 = certified_seed(TorsionKind::C8).unwrap();
    let mut p1 = next_triple(TorsionKind::C8, &p0).unwrap();
    p1.verify().unwrap();
    p1.triple = AbcTriple::from_i64(1, 8, 9).unwrap();
    assert!(matches!(p1.verify(), Err(Error::Certificate(_))));
}

#[test]
fn seeds_and_chains() {
    assert!(matches!(seed(TorsionKind::C5), Err(Error::NoSeed(_))));
    let s = seed(TorsionKind::C7).unwrap();
    assert_eq!((s.a0.clone(), s.b0.clone(), s.c0.clone()), (12096.into(), 148955.into(), 161051.into()));
    let ch = chain(TorsionKind::C8, 2).unwrap();
    assert_eq!(ch.len(), 3);
    for p in &ch {
        p.verify().unwrap();
    }
    assert!(ch[2].triple.c() > ch[1].triple.c());
}

#[test]
fn c5_chain_entries() {
    assert!(c5_triple(0).is_err());
    for n in 1..=4 {
        let p = c5_triple(n).unwrap();
        p.verify().unwrap();
        assert!(p.triple.is_positive());
    }
}

#[test]
fn h_curves_certify() {
    for n in 2..=4 {
        h_curve(TorsionKind::C5, n).unwrap().verify_good().unwrap();
    }
    h_curve(TorsionKind::C3, 2).unwrap().verify_good().unwrap();
    assert!(h_curve(TorsionKind::C3, 0).is_err());
}

#[test]
fn prime_power_lemma_inputs() {
    let b = Budget::default();
    assert!(prime_power_triple(2, 1, &b).is_err());
    assert!(prime_power_triple(9, 1, &b).is_err());
    assert!(prime_power_triple(3, 0, &b).is_err());
    let t = prime_power_triple(11, 1, &b).unwrap();
    assert_eq!(t.triple.c(), &BigInt::from(11u64.pow(10)));
}

proptest! {
    #[test]
    fn certificates_agree_with_radicals(a in 1u64..100_000, b in 1u64..100_000) {
        prop_assume!(a.gcd(&b) == 1);
        let t = AbcTriple::from_i64(a as i64, b as i64, (a + b) as i64).unwrap();
        let good = rad(a) * rad(b) * rad(a + b) < a + b;
        prop_assert_eq!(certify_by_factoring(&t, &Budget::default()).is_ok(), good);
    }
}
