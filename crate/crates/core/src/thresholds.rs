//! Largest real roots of the auxiliary functions and positivity checks.
//!
//! For a kind `T` with forms `A, B, D, Dhat` (dehomogenised at `a = 1`):
//!
//! * `delta` is the largest root of `B^2 - 1728 x D`;
//! * `theta` is the largest root of `D`;
//! * `xi` is the largest zero of `max(|A^3|, B^2) - Dhat^6` (fixed to 0 for C10).

use crate::families::{family, TorsionKind};
use crate::poly::{
    certify_no_roots_in, count_roots, largest_root, no_roots_above, real_roots, sign_at_root,
    Bound, Poly, RootInterval, SturmChain,
};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// An isolating interval together with the polynomial whose root it brackets.
#[derive(Clone, Debug)]
pub struct Threshold {
    pub interval: RootInterval,
    poly: Poly,
}

impl Threshold {
    fn new(interval: RootInterval, poly: Poly) -> Self {
        Threshold { interval, poly }
    }

    fn fixed(x: BigRational) -> Self {
        Threshold {
            interval: RootInterval::exact(x),
            poly: Poly::zero(),
        }
    }

    /// The polynomial this interval isolates a root of (zero for fixed values).
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Whether `r` is strictly greater than the threshold value.
    pub fn is_below(&self, r: &BigRational) -> bool {
        let iv = &self.interval;
        if r > &iv.hi {
            return true;
        }
        if r <= &iv.lo || iv.is_exact() {
            return false;
        }
        let s = self.poly.sign_at(r);
        if s == Sign::NoSign {
            return false;
        }
        let sh = self.poly.sign_at(&iv.hi);
        sh != Sign::NoSign && s == sh
    }
}

/// Thresholds of one torsion kind.
#[derive(Clone, Debug)]
pub struct ThresholdSet {
    pub torsion: TorsionKind,
    pub delta: Option<Threshold>,
    pub theta: Threshold,
    pub xi: Option<Threshold>,
    pub width: BigRational,
}

/// Positivity claims that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Positivity {
    FT,
    GT,
    NegBT,
    AT,
    DT,
    DhatT,
    HT,
    ZT,
}

impl Positivity {
    pub const ALL: [Positivity; 8] = [
        Positivity::FT,
        Positivity::GT,
        Positivity::NegBT,
        Positivity::AT,
        Positivity::DT,
        Positivity::DhatT,
        Positivity::HT,
        Positivity::ZT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Positivity::FT => "fT",
            Positivity::GT => "gT",
            Positivity::NegBT => "negBT",
            Positivity::AT => "AT",
            Positivity::DT => "DT",
            Positivity::DhatT => "DhatT",
            Positivity::HT => "hT",
            Positivity::ZT => "zT",
        }
    }
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Positivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Positivity::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown function `{s}`"))
    }
}

/// `L * sum r_i P_i` with `L > 0` clearing all denominators.
fn combine(terms: &[(BigRational, Poly)]) -> Poly {
    let l = terms
        .iter()
        .fold(BigInt::one(), |l, (r, _)| l.lcm(r.denom()));
    terms.iter().fold(Poly::zero(), |acc, (r, p)| {
        let k = r.numer() * (&l / r.denom());
        &acc + &p.scale(&k)
    })
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The integer-polynomial building blocks of a kind, sign-correct.
struct Parts {
    a: (BigRational, Poly),
    b: (BigRational, Poly),
    d: (BigRational, Poly),
    dhat: (BigRational, Poly),
}

impl Parts {
    fn new(t: TorsionKind) -> Self {
        let f = family(t);
        Parts {
            a: f.a.at_one(),
            b: f.b.at_one(),
            d: f.d.at_one(),
            dhat: f.dhat.at_one(),
        }
    }

    fn pow(p: &(BigRational, Poly), k: u32) -> (BigRational, Poly) {
        (num_traits::pow(p.0.clone(), k as usize), p.1.pow(k))
    }

    fn mul(p: &(BigRational, Poly), q: &(BigRational, Poly)) -> (BigRational, Poly) {
        (&p.0 * &q.0, &p.1 * &q.1)
    }

    fn neg(p: (BigRational, Poly)) -> (BigRational, Poly) {
        (-p.0, p.1)
    }

    fn single(p: &(BigRational, Poly)) -> Poly {
        combine(std::slice::from_ref(p))
    }

    fn a(&self) -> Poly {
        Self::single(&self.a)
    }

    fn d(&self) -> Poly {
        Self::single(&self.d)
    }

    fn dhat(&self) -> Poly {
        Self::single(&self.dhat)
    }

    fn neg_b(&self) -> Poly {
        -Self::single(&self.b)
    }

    /// `B^2 - 1728 x D`, the numerator of `f_T` up to the positive factor `1728`.
    fn f_numerator(&self) -> Poly {
        let xd = (rat(1728) * &self.d.0, &Poly::x() * &self.d.1);
        combine(&[Self::pow(&self.b, 2), Self::neg(xd)])
    }

    /// `A^2 + B Dhat`.
    fn g(&self) -> Poly {
        combine(&[Self::pow(&self.a, 2), Self::mul(&self.b, &self.dhat)])
    }

    /// `A^3 - Dhat^6`.
    fn h(&self) -> Poly {
        combine(&[Self::pow(&self.a, 3), Self::neg(Self::pow(&self.dhat, 6))])
    }
}

/// Branch polynomials of `z`, with the conditions under which each branch is the maximum.
struct ZBranches {
    a3: Poly,
    b2: Poly,
    dhat6: Poly,
}

impl ZBranches {
    /// Scales all three branches by one positive integer.
    fn new(parts: &Parts) -> Self {
        let l = [&parts.a, &parts.b, &parts.dhat]
            .iter()
            .zip([3u32, 2, 6])
            .fold(BigInt::one(), |l, (p, k)| l.lcm(num_traits::pow(p.0.clone(), k as usize).denom()));
        let scaled = |p: &(BigRational, Poly), k: u32| {
            let r = num_traits::pow(p.0.clone(), k as usize) * BigRational::from_integer(l.clone());
            p.1.pow(k).scale(&r.to_integer())
        };
        ZBranches {
            a3: scaled(&parts.a, 3),
            b2: scaled(&parts.b, 2),
            dhat6: scaled(&parts.dhat, 6),
        }
    }

    /// Candidate polynomials whose roots may be zeros of `z`, with tie conditions:
    /// each `(p, conditions)` where every condition polynomial must be `>= 0` at the root.
    fn candidates(&self) -> Vec<(Poly, Vec<Poly>)> {
        let (a3, b2, d6) = (&self.a3, &self.b2, &self.dhat6);
        let na3 = -a3.clone();
        vec![
            // A^3 = Dhat^6 and B^2 <= A^3
            (a3 - d6, vec![a3 - b2]),
            // -A^3 = Dhat^6 and B^2 <= -A^3
            (&na3 - d6, vec![&na3 - b2]),
            // B^2 = Dhat^6 and |A^3| <= B^2
            (b2 - d6, vec![b2 - a3, b2 + a3]),
        ]
    }

    fn z_sign_at(&self, x: &BigRational) -> Sign {
        let a3 = self.a3.eval_rational(x).abs();
        let b2 = self.b2.eval_rational(x);
        let d6 = self.dhat6.eval_rational(x);
        let m = if a3 > b2 { a3 } else { b2 };
        (m - d6).numer().sign()
    }

    /// All zeros of `z`, ascending by lower endpoint.
    fn zeros(&self, width: &BigRational) -> Vec<Threshold> {
        let mut out = Vec::new();
        for (p, conds) in self.candidates() {
            if p.is_zero() {
                continue;
            }
            let chain = SturmChain::new(&p);
            for iv in real_roots(&p, width) {
                let mut iv = iv;
                let mut ok = true;
                for c in &conds {
                    let (s, refined) = sign_at_root(c, &chain, &iv);
                    iv = refined;
                    if s == Sign::Minus {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    out.push(Threshold::new(iv, chain.poly().clone()));
                }
            }
        }
        out.sort_by(|a, b| a.interval.lo.cmp(&b.interval.lo));
        out
    }
}

fn largest_zero(zs: &[Threshold]) -> Option<&Threshold> {
    zs.iter().max_by(|a, b| {
        let ka = &a.interval.lo + &a.interval.hi;
        let kb = &b.interval.lo + &b.interval.hi;
        ka.cmp(&kb)
    })
}

/// Computes `delta`, `theta`, `xi` for `t` with isolating intervals no wider than `width`.
pub fn compute_thresholds(t: TorsionKind, width: &BigRational) -> ThresholdSet {
    assert!(width.is_positive(), "width must be positive");
    let parts = Parts::new(t);
    let delta = delta_from(&parts, t, width);
    let theta = isolate(parts.d(), width);
    let xi = match t {
        TorsionKind::C5 => None,
        TorsionKind::C10 => Some(Threshold::fixed(BigRational::zero())),
        _ => {
            let zs = ZBranches::new(&parts).zeros(width);
            Some(largest_zero(&zs).cloned().unwrap_or_else(|| Threshold::fixed(BigRational::zero())))
        }
    };
    ThresholdSet {
        torsion: t,
        delta,
        theta,
        xi,
        width: width.clone(),
    }
}

fn isolate(p: Poly, width: &BigRational) -> Threshold {
    let iv = largest_root(&p, width).expect("defining polynomial has a real root");
    Threshold::new(iv, SturmChain::new(&p).poly().clone())
}

fn delta_from(parts: &Parts, t: TorsionKind, width: &BigRational) -> Option<Threshold> {
    match t {
        TorsionKind::C1 | TorsionKind::C2 | TorsionKind::C5 => None,
        _ => Some(isolate(parts.f_numerator(), width)),
    }
}

/// Default isolation width, `2^-20`.
pub fn default_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1u64 << 20))
}

/// Cached thresholds at the default width.
pub fn thresholds(t: TorsionKind) -> &'static ThresholdSet {
    static CACHE: OnceLock<Vec<OnceLock<ThresholdSet>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| (0..15).map(|_| OnceLock::new()).collect());
    let i = TorsionKind::ALL.iter().position(|&k| k == t).unwrap();
    all[i].get_or_init(|| compute_thresholds(t, &default_width()))
}

/// Cached `delta_T` at the default width, without computing `theta` or `xi`.
pub fn delta(t: TorsionKind) -> Option<&'static Threshold> {
    static CACHE: OnceLock<Vec<OnceLock<Option<Threshold>>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| (0..15).map(|_| OnceLock::new()).collect());
    let i = TorsionKind::ALL.iter().position(|&k| k == t).unwrap();
    all[i]
        .get_or_init(|| delta_from(&Parts::new(t), t, &default_width()))
        .as_ref()
}

/// `q` is positive on `(root, inf)` where `root` is the one isolated by `th`.
fn positive_beyond(q: &Poly, th: &Threshold) -> bool {
    if q.is_zero() {
        return false;
    }
    let iv = &th.interval;
    if !no_roots_above(q, &iv.hi) {
        return false;
    }
    let sample = &iv.hi + BigRational::one();
    if q.sign_at(&sample) != Sign::Plus {
        return false;
    }
    if iv.is_exact() || q.degree() == Some(0) {
        return true;
    }
    // roots of q inside (lo, hi] other than the threshold itself
    let chain = SturmChain::new(&th.poly);
    let (at_root, iv2) = sign_at_root(q, &chain, iv);
    if at_root == Sign::NoSign {
        count_roots(q, &Bound::At(iv2.lo.clone()), &Bound::At(iv2.hi.clone())) == 1
    } else {
        q.sign_at(&iv2.hi) != Sign::NoSign && certify_no_roots_in(q, &iv2.lo, &iv2.hi)
    }
}

/// Checks positivity of the named function beyond its threshold.
///
/// `fT, gT, negBT` are checked on `(delta, inf)`, `AT, DT, DhatT, hT` on
/// `(theta, inf)` and `zT` on `(xi, inf)`. Returns `false` when the
/// threshold is not defined for `t`.
pub fn verify_positivity(set: &ThresholdSet, which: Positivity) -> bool {
    let parts = Parts::new(set.torsion);
    match which {
        Positivity::FT => set.delta.as_ref().is_some_and(|d| {
            positive_beyond(&(&parts.f_numerator() * &parts.d()), d)
                && positive_beyond(&parts.d(), d)
        }),
        Positivity::GT => set.delta.as_ref().is_some_and(|d| positive_beyond(&parts.g(), d)),
        Positivity::NegBT => set
            .delta
            .as_ref()
            .is_some_and(|d| positive_beyond(&parts.neg_b(), d)),
        Positivity::AT => positive_beyond(&parts.a(), &set.theta),
        Positivity::DT => positive_beyond(&parts.d(), &set.theta),
        Positivity::DhatT => positive_beyond(&parts.dhat(), &set.theta),
        Positivity::HT => positive_beyond(&parts.h(), &set.theta),
        Positivity::ZT => match &set.xi {
            None => false,
            Some(xi) => {
                let z = ZBranches::new(&parts);
                let sample = &xi.interval.hi + BigRational::one();
                z.z_sign_at(&sample) == Sign::Plus
                    && !z
                        .zeros(&set.width)
                        .iter()
                        .any(|th| th.interval.hi > xi.interval.hi)
            }
        },
    }
}

/// True iff `A^2 - (3/5)|Dhat B|` is positive on `[1, inf)` for C5.
pub fn c5_radbound_check() -> bool {
    let q = c5_radbound_poly();
    let one = BigRational::one();
    q.sign_at(&one) == Sign::Plus && no_roots_above(&q, &one)
}

/// `25 A^4 - 9 Dhat^2 B^2` for C5, cleared of denominators.
pub fn c5_radbound_poly() -> Poly {
    let p = Parts::new(TorsionKind::C5);
    combine(&[
        {
            let (s, q) = Parts::pow(&p.a, 4);
            (s * rat(25), q)
        },
        {
            let (s, q) = Parts::mul(&Parts::pow(&p.dhat, 2), &Parts::pow(&p.b, 2));
            (s * rat(-9), q)
        },
    ])
}

fn fmt_endpoint(x: &BigRational) -> String {
    crate::arith::format_terminating(x).unwrap_or_else(|| x.to_string())
}

impl ThresholdSet {
    pub fn csv_header() -> &'static str {
        "T,delta_lo,delta_hi,theta_lo,theta_hi,xi_lo,xi_hi"
    }

    /// One CSV row with exact decimal endpoints; absent values are empty.
    pub fn csv_row(&self) -> String {
        let pair = |t: Option<&Threshold>| match t {
            Some(t) => format!("{},{}", fmt_endpoint(&t.interval.lo), fmt_endpoint(&t.interval.hi)),
            None => ",".to_string(),
        };
        format!(
            "{},{},{},{}",
            self.torsion,
            pair(self.delta.as_ref()),
            pair(Some(&self.theta)),
            pair(self.xi.as_ref())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(th: &Threshold, v: f64) -> bool {
        (th.interval.midpoint_f64() - v).abs() < 1e-4
    }

    #[test]
    fn combine_clears_denominators() {
        let half = BigRational::new(1.into(), 2.into());
        let p = combine(&[(half, Poly::from_i64(&[1, 1])), (rat(1), Poly::from_i64(&[0, 0, 1]))]);
        assert_eq!(p, Poly::from_i64(&[1, 1, 2]));
    }

    #[test]
    fn golden_ratio_theta() {
        let s = compute_thresholds(TorsionKind::C10, &default_width());
        assert!(close(&s.theta, 1.618034));
        assert!(s.theta.is_below(&rat(2)));
        assert!(!s.theta.is_below(&BigRational::new(161803.into(), 100000.into())));
        assert!(s.theta.is_below(&BigRational::new(161804.into(), 100000.into())));
    }

    #[test]
    fn c3_delta() {
        let s = thresholds(TorsionKind::C3);
        assert!(close(s.delta.as_ref().unwrap(), 43.40329));
        assert!(verify_positivity(s, Positivity::FT));
    }
}
