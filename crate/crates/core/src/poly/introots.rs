use super::Poly;
use crate::arith::small_primes;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn eval_mod(p: &Poly, x: u64, m: u64) -> u64 {
    let mut acc = 0u128;
    for c in p.coeffs().iter().rev() {
        let cm = c.mod_floor(&BigInt::from(m)).to_u64().unwrap() as u128;
        acc = (acc * x as u128 + cm) % m as u128;
    }
    acc as u64
}

fn reduce(p: &Poly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    p.coeffs()
        .iter()
        .map(|c| c.mod_floor(&mb).to_u64().unwrap())
        .collect()
}

fn eval_small(c: &[u64], x: u64, m: u64) -> u64 {
    c.iter()
        .rev()
        .fold(0u128, |acc, &a| (acc * x as u128 + a as u128) % m as u128) as u64
}

/// Distinct integer roots of a nonzero polynomial.
///
/// Roots modulo a prime where every root is simple are Hensel-lifted past
/// the size bound `|r| <= |p(0)|` and then checked exactly.
pub fn integer_roots(p: &Poly) -> Vec<BigInt> {
    assert!(!p.is_zero(), "integer_roots: zero polynomial");
    let mut f = p.squarefree();
    let mut out = Vec::new();
    if f.coeff(0).is_zero() {
        out.push(BigInt::zero());
        f = f.div_exact(&Poly::x()).expect("x divides f");
    }
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let bound = f.coeff(0).abs();
    let lead = f.lead().clone();
    let deg = f.degree().unwrap() as u64;
    for &ell in small_primes().iter().skip(1) {
        let ell = ell as u64;
        if (&lead % ell).is_zero() {
            continue;
        }
        let fr = reduce(&f, ell);
        let dfr = reduce(&df, ell);
        let mut roots = Vec::new();
        let mut simple = true;
        for x in 0..ell {
            if eval_small(&fr, x, ell) == 0 {
                if eval_small(&dfr, x, ell) == 0 {
                    simple = false;
                    break;
                }
                roots.push(x);
            }
        }
        if !simple {
            continue;
        }
        for r in roots {
            if let Some(z) = hensel_lift(&f, &df, r, ell, &bound) {
                out.push(z);
            }
        }
        out.sort();
        out.dedup();
        return out;
    }
    unreachable!("a squarefree polynomial of degree {deg} has finitely many bad primes")
}

fn hensel_lift(f: &Poly, df: &Poly, r: u64, ell: u64, bound: &BigInt) -> Option<BigInt> {
    let mut m = BigInt::from(ell);
    let mut x = BigInt::from(r);
    let target = bound * 2 + 1;
    let inv0 = {
        let d = eval_mod(df, r, ell);
        BigInt::from(crate::arith::inv_mod_prime(d, ell))
    };
    let mut inv = inv0;
    while m < target {
        let m2 = &m * &m;
        // Newton step with an inverse of f'(x) kept current modulo m
        let fx = f.eval(&x).mod_floor(&m2);
        x = (&x - fx * &inv).mod_floor(&m2);
        let dfx = df.eval(&x).mod_floor(&m2);
        inv = (&inv * (BigInt::from(2) - &dfx * &inv)).mod_floor(&m2);
        m = m2;
    }
    let half = &m / 2;
    let cand = if x > half { x - &m } else { x };
    f.eval(&cand).is_zero().then_some(cand)
}

/// Distinct rational roots, ascending.
pub fn rational_roots(p: &Poly) -> Vec<BigRational> {
    let f = p.squarefree();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let lead = f.lead().clone();
    let d = f.degree().unwrap();
    // lead^(d-1) f(y / lead) is monic
    let mut c = Vec::with_capacity(d + 1);
    let mut pw = BigInt::one();
    let mut pows = vec![BigInt::one(); d];
    for slot in pows.iter_mut().skip(1) {
        pw *= &lead;
        *slot = pw.clone();
    }
    for i in 0..d {
        c.push(f.coeff(i) * &pows[d - 1 - i]);
    }
    c.push(BigInt::one());
    let monic = Poly::new(c);
    let mut out: Vec<BigRational> = integer_roots(&monic)
        .into_iter()
        .map(|y| BigRational::new(y, lead.clone()))
        .collect();
    out.sort();
    out
}
