use super::Poly;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Above this degree root counting prefers Descartes bisection over Sturm.
const STURM_MAX_DEGREE: usize = 80;
const DESCARTES_MAX_DEPTH: u32 = 64;

/// Endpoint of a real interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    At(BigRational),
    PosInf,
}

/// Interval `(lo, hi]` holding exactly one root of its defining polynomial,
/// or the exact root when `lo == hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn exact(x: BigRational) -> Self {
        RootInterval { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        crate::arith::rational_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into())))
    }

    /// True when `x` lies in `[lo, hi]`.
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<Poly>,
}

impl SturmChain {
    pub fn new(p: &Poly) -> Self {
        let p0 = p.squarefree();
        let mut seq = vec![p0.clone()];
        if p0.degree().unwrap_or(0) == 0 {
            return SturmChain { seq };
        }
        let mut a = p0;
        let mut b = a.derivative().primitive();
        while !b.is_zero() {
            let delta = a.degree().unwrap() - b.degree().unwrap();
            let r = a.pseudo_rem(&b);
            // prem multiplies the true remainder by lc(b)^(delta+1)
            let flip = b.lead().is_negative() && (delta + 1) % 2 == 1;
            let next = if flip { r } else { -r }.primitive();
            seq.push(b.clone());
            a = b;
            b = next;
        }
        SturmChain { seq }
    }

    /// The squarefree polynomial the chain is built from.
    pub fn poly(&self) -> &Poly {
        &self.seq[0]
    }

    fn variations(&self, at: &Bound) -> usize {
        let mut last = Sign::NoSign;
        let mut v = 0;
        for q in &self.seq {
            let s = match at {
                Bound::At(x) => q.sign_at(x),
                Bound::PosInf => q.lead().sign(),
                Bound::NegInf => {
                    let s = q.lead().sign();
                    if q.degree().unwrap_or(0) % 2 == 1 {
                        -s
                    } else {
                        s
                    }
                }
            };
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> usize {
        if self.poly().is_zero() {
            return 0;
        }
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Distinct real roots of `p` in `(lo, hi]`.
pub fn count_roots(p: &Poly, lo: &Bound, hi: &Bound) -> usize {
    SturmChain::new(p).count(lo, hi)
}

/// Power of two strictly exceeding every root's absolute value.
fn root_bound(p: &Poly) -> BigInt {
    let lead = p.lead().abs();
    let max = p.coeffs().iter().map(|c| c.abs()).max().unwrap();
    let q = max / &lead + 2;
    let mut b = BigInt::one();
    while b < q {
        b <<= 1;
    }
    b
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// Shrinks a single-root interval of `chain` until its width is at most `width`.
pub fn refine(chain: &SturmChain, iv: &RootInterval, width: &BigRational) -> RootInterval {
    let p = chain.poly();
    let mut iv = iv.clone();
    if iv.is_exact() {
        return iv;
    }
    if p.sign_at(&iv.hi) == Sign::NoSign {
        return RootInterval::exact(iv.hi);
    }
    while &iv.width() > width {
        let mid = (&iv.lo + &iv.hi) * half();
        if p.sign_at(&mid) == Sign::NoSign {
            return RootInterval::exact(mid);
        }
        if chain.count(&Bound::At(iv.lo.clone()), &Bound::At(mid.clone())) == 1 {
            iv.hi = mid;
        } else {
            iv.lo = mid;
        }
    }
    iv
}

/// Isolating intervals for all distinct real roots, ascending, each no wider than `width`.
pub fn real_roots(p: &Poly, width: &BigRational) -> Vec<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let chain = SturmChain::new(p);
    let b = BigRational::from_integer(root_bound(chain.poly()));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count(&Bound::At(lo.clone()), &Bound::At(hi.clone()));
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine(&chain, &RootInterval { lo, hi }, width));
            continue;
        }
        let mid = (&lo + &hi) * half();
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Isolating interval of the largest real root, if there is one.
pub fn largest_root(p: &Poly, width: &BigRational) -> Option<RootInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return None;
    }
    let chain = SturmChain::new(p);
    if chain.count(&Bound::NegInf, &Bound::PosInf) == 0 {
        return None;
    }
    let b = BigRational::from_integer(root_bound(chain.poly()));
    let (mut lo, mut hi) = (-b.clone(), b);
    // invariant: some root in (lo, hi], none above hi
    loop {
        let n = chain.count(&Bound::At(lo.clone()), &Bound::At(hi.clone()));
        if n == 1 {
            return Some(refine(&chain, &RootInterval { lo, hi }, width));
        }
        let mid = (&lo + &hi) * half();
        if chain.count(&Bound::At(mid.clone()), &Bound::At(hi.clone())) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Sign of `q` at the root of `chain` isolated by `iv`.
///
/// Returns the sign together with the (possibly refined) interval.
pub fn sign_at_root(q: &Poly, chain: &SturmChain, iv: &RootInterval) -> (Sign, RootInterval) {
    if q.is_zero() {
        return (Sign::NoSign, iv.clone());
    }
    if iv.is_exact() {
        return (q.sign_at(&iv.lo), iv.clone());
    }
    let g = chain.poly().gcd(q);
    if g.degree().unwrap_or(0) > 0 {
        let gc = SturmChain::new(&g);
        if gc.count(&Bound::At(iv.lo.clone()), &Bound::At(iv.hi.clone())) > 0 {
            return (Sign::NoSign, iv.clone());
        }
    }
    let qc = SturmChain::new(q);
    let mut iv = iv.clone();
    loop {
        if qc.count(&Bound::At(iv.lo.clone()), &Bound::At(iv.hi.clone())) == 0 {
            return (q.sign_at(&iv.hi), iv);
        }
        let w = iv.width() * half();
        iv = refine(chain, &iv, &w);
        if iv.is_exact() {
            return (q.sign_at(&iv.lo), iv);
        }
    }
}

/// Descartes bound on the roots of `p` in the open interval `(a, b)`.
fn descartes_in(p: &Poly, a: &BigRational, b: &BigRational) -> usize {
    let d = a.denom() * b.denom();
    let an = a.numer() * b.denom();
    let hn = b.numer() * a.denom() - &an;
    // s(t) proportional to p(a + (b - a) t)
    let s = p
        .scale_variable_denominator(&d)
        .taylor_shift(&an)
        .scale_variable(&hn);
    s.reversed().taylor_shift(&BigInt::one()).sign_variations()
}

fn certify_rec(p: &Poly, a: &BigRational, b: &BigRational, depth: u32) -> Option<bool> {
    match descartes_in(p, a, b) {
        0 => return Some(true),
        1 => return Some(false),
        _ => {}
    }
    if depth == 0 {
        return None;
    }
    let m = (a + b) * half();
    if p.sign_at(&m) == Sign::NoSign {
        return Some(false);
    }
    match certify_rec(p, a, &m, depth - 1)? {
        false => Some(false),
        true => certify_rec(p, &m, b, depth - 1),
    }
}

/// True iff `p` has no real root in the open interval `(a, b)`.
pub fn certify_no_roots_in(p: &Poly, a: &BigRational, b: &BigRational) -> bool {
    assert!(a < b, "empty interval");
    let sf = p.squarefree();
    if sf.degree().unwrap_or(0) == 0 {
        return !sf.is_zero();
    }
    match certify_rec(&sf, a, b, DESCARTES_MAX_DEPTH) {
        Some(v) => v,
        None => {
            let chain = SturmChain::new(&sf);
            let n = chain.count(&Bound::At(a.clone()), &Bound::At(b.clone()));
            let at_b = usize::from(sf.sign_at(b) == Sign::NoSign);
            n == at_b
        }
    }
}

/// True iff `p` has no real root in `(c, +inf)`.
pub fn no_roots_above(p: &Poly, c: &BigRational) -> bool {
    if p.is_zero() {
        return false;
    }
    if p.degree() == Some(0) {
        return true;
    }
    let b = BigRational::from_integer(root_bound(p));
    if c >= &b {
        return true;
    }
    // p(c + y) with no sign changes has no positive root
    let shifted = p
        .scale_variable_denominator(c.denom())
        .taylor_shift(c.numer());
    if shifted.sign_variations() == 0 {
        return true;
    }
    if p.degree().unwrap() <= STURM_MAX_DEGREE {
        return count_roots(p, &Bound::At(c.clone()), &Bound::PosInf) == 0;
    }
    certify_no_roots_in(p, c, &b)
}
