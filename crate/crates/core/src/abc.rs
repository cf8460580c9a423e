//! ABC triples, quality, goodness certificates and the recursive good-triple chains.

use crate::arith::{
    factorize_with_hints, log_ratio, Budget, Factorization, LogRatio, DEFAULT_PRECISION,
};
use crate::curves::{ConductorResult, CurveInvariants};
use crate::families::{eval_invariants, family, TorsionKind};
use crate::thresholds::thresholds;
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Integers with `a + b = c` and `gcd(a, b, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbcTriple {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl AbcTriple {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if &a + &b != c {
            return Err(Error::PreconditionViolation(format!("{a} + {b} != {c}")));
        }
        if !a.gcd(&b).is_one() {
            return Err(Error::PreconditionViolation(format!(
                "gcd({a}, {b}, {c}) != 1"
            )));
        }
        Ok(AbcTriple { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        AbcTriple::new(a.into(), b.into(), c.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn is_positive(&self) -> bool {
        self.a.is_positive() && self.b.is_positive() && self.c.is_positive()
    }

    /// `max(|a|, |b|, |c|)`.
    pub fn max_abs(&self) -> BigUint {
        [&self.a, &self.b, &self.c]
            .into_iter()
            .map(|x| x.magnitude().clone())
            .max()
            .unwrap()
    }

    pub fn product(&self) -> BigInt {
        &self.a * &self.b * &self.c
    }

    /// Factorisation of `abc`, factoring the entries separately.
    pub fn factor(&self, hints: &[BigInt], budget: &Budget) -> Factorization {
        [&self.a, &self.b, &self.c]
            .into_iter()
            .map(|x| factorize_with_hints(x, hints, budget))
            .reduce(|f, g| f.merge(&g))
            .unwrap()
    }
}

impl fmt::Display for AbcTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn log_of(max: &BigUint, rad: &BigUint) -> LogRatio {
    log_ratio(max, &rad.clone().max(BigUint::from(2u32)), DEFAULT_PRECISION)
}

/// Quality `log max(|a|,|b|,|c|) / log rad(abc)`.
pub fn quality(t: &AbcTriple, budget: &Budget) -> Result<LogRatio> {
    quality_with_hints(t, &[], budget)
}

pub fn quality_with_hints(t: &AbcTriple, hints: &[BigInt], budget: &Budget) -> Result<LogRatio> {
    let f = t.factor(hints, budget);
    let rad = f.radical().ok_or_else(|| {
        Error::IncompleteFactorization(format!("cofactor {} of abc", f.cofactor()))
    })?;
    Ok(log_of(&t.max_abs(), &rad))
}

/// Quality, exact when `rad(abc)` is known, else an enclosing interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QualityEstimate {
    Exact(LogRatio),
    Bounds { lower: LogRatio, upper: LogRatio },
}

impl QualityEstimate {
    pub fn exact(&self) -> Option<&LogRatio> {
        match self {
            QualityEstimate::Exact(q) => Some(q),
            QualityEstimate::Bounds { .. } => None,
        }
    }
}

impl fmt::Display for QualityEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QualityEstimate::Exact(q) => write!(f, "{q}"),
            QualityEstimate::Bounds { lower, upper } => write!(f, "[{lower},{upper}]"),
        }
    }
}

/// Quality, falling back to bounds from the radical bounds.
pub fn quality_estimate(t: &AbcTriple, hints: &[BigInt], budget: &Budget) -> QualityEstimate {
    let f = t.factor(hints, budget);
    let max = t.max_abs();
    match f.radical() {
        Some(rad) => QualityEstimate::Exact(log_of(&max, &rad)),
        None => {
            let known = f.known_radical();
            let lo = &known * f.cofactor_radical_lower();
            let hi = &known * f.cofactor_radical_upper();
            QualityEstimate::Bounds {
                lower: log_of(&max, &hi),
                upper: log_of(&max, &lo),
            }
        }
    }
}

/// Whether `rad(abc) < max`, `None` if the radical is out of budget.
pub fn is_good(t: &AbcTriple, budget: &Budget) -> Option<bool> {
    goodness_from(&t.factor(&[], budget), &t.max_abs())
}

fn goodness_from(f: &Factorization, max: &BigUint) -> Option<bool> {
    let known = f.known_radical();
    if &known * f.cofactor_radical_upper() < *max {
        Some(true)
    } else if &known * f.cofactor_radical_lower() >= *max {
        Some(false)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// `rad(abc)` computed from an explicit factorisation.
    Factored,
    /// One recursion step, certified from the parent triple's goodness.
    DhatBound,
    /// A recursion step of another kind's chain (C1 and C2 reuse the C8 chain).
    Inherited,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::Factored => "factored",
            CertificateKind::DhatBound => "dhat-bound",
            CertificateKind::Inherited => "inherited",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Data a certificate is checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Numbers whose product is divisible by `rad(abc)`; all of `abc` is
    /// made of their prime factors.
    Radical(Vec<BigUint>),
    /// The triple is `(1728 D, B^2, A^3)` of `family` at the parent.
    Step {
        family: TorsionKind,
        parent: Box<CertifiedTriple>,
    },
    /// The triple is `5^-3 (1728 D, B^2, A^3)` of C5 at `(1, 2^(n-1))`.
    C5 { n: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessCertificate {
    pub kind: CertificateKind,
    pub witness: Witness,
}

/// A triple together with the certificate of its goodness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedTriple {
    pub triple: AbcTriple,
    pub certificate: GoodnessCertificate,
}

fn cert_err(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn integral(r: &BigRational, what: &str) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(cert_err(format!("{what} is not integral")))
    }
}

impl CertifiedTriple {
    /// Re-checks the certificate from scratch, without factoring.
    pub fn verify(&self) -> Result<()> {
        let t = &self.triple;
        if &t.a + &t.b != t.c || !t.a.gcd(&t.b).is_one() {
            return Err(cert_err("not an ABC triple"));
        }
        match (&self.certificate.kind, &self.certificate.witness) {
            (CertificateKind::Factored, Witness::Radical(ps)) => verify_radical(t, ps),
            (CertificateKind::DhatBound | CertificateKind::Inherited, Witness::Step { family, parent }) => {
                let inherited = self.certificate.kind == CertificateKind::Inherited;
                if inherited != matches!(family, TorsionKind::C1 | TorsionKind::C2) {
                    return Err(cert_err("inherited certificates belong to C1 and C2 chains"));
                }
                let source = if inherited { TorsionKind::C8 } else { *family };
                verify_step(t, source, parent)
            }
            (CertificateKind::DhatBound, Witness::C5 { n }) => verify_c5(t, *n),
            _ => Err(cert_err("certificate kind does not match its witness")),
        }
    }
}

fn verify_radical(t: &AbcTriple, ps: &[BigUint]) -> Result<()> {
    let mut rest = t.product().magnitude().clone();
    let mut bound = BigUint::one();
    for p in ps {
        if p <= &BigUint::one() {
            return Err(cert_err("radical witness entries must exceed 1"));
        }
        if !(t.product().magnitude() % p).is_zero() {
            return Err(cert_err(format!("{p} does not divide abc")));
        }
        while (&rest % p).is_zero() {
            rest /= p;
        }
        bound *= p;
    }
    if !rest.is_one() {
        return Err(cert_err("radical witness does not exhaust abc"));
    }
    if bound >= t.max_abs() {
        return Err(cert_err("rad(abc) is not below max(|a|, |b|, |c|)"));
    }
    Ok(())
}

fn verify_step(t: &AbcTriple, source: TorsionKind, parent: &CertifiedTriple) -> Result<()> {
    parent.verify()?;
    let p = &parent.triple;
    if !p.is_positive() || p.a.is_odd() {
        return Err(cert_err("parent must be positive with even a"));
    }
    let inv = eval_invariants(source, &p.a, &p.b)?;
    let a_t = integral(&inv.a_t, "A")?;
    let b_t = integral(&inv.b_t, "B")?;
    let d_t = integral(&inv.d_t, "D")?;
    if !(&d_t % BigInt::from(6)).is_zero() {
        return Err(cert_err("6 does not divide D"));
    }
    let expected = (BigInt::from(1728) * &d_t, &b_t * &b_t, a_t.pow(3));
    if (&t.a, &t.b, &t.c) != (&expected.0, &expected.1, &expected.2) {
        return Err(cert_err("triple is not (1728 D, B^2, A^3) at the parent"));
    }
    // rad(a'b'c') = rad(D B A) < |Dhat B| A by the parent's goodness, and |Dhat B| < A^2
    let lhs = (&inv.dhat_t * BigRational::from_integer(b_t)).abs();
    if !a_t.is_positive() || lhs >= BigRational::from_integer(&a_t * &a_t) {
        return Err(cert_err("|Dhat B| < A^2 fails"));
    }
    Ok(())
}

fn c5_values(n: u32) -> Result<(BigInt, BigInt, BigInt, BigRational)> {
    let b = BigInt::one() << (n - 1);
    let inv = eval_invariants(TorsionKind::C5, &BigInt::one(), &b)?;
    let a_t = integral(&inv.a_t, "A")?;
    let b_t = integral(&inv.b_t, "B")?;
    let d_t = integral(&inv.d_t, "D")?;
    Ok((a_t, b_t, d_t, inv.dhat_t))
}

fn verify_c5(t: &AbcTriple, n: u32) -> Result<()> {
    if n == 0 {
        return Err(cert_err("C5 index must be positive"));
    }
    let (a_t, b_t, d_t, dhat) = c5_values(n)?;
    let k = BigInt::from(125);
    let parts = [BigInt::from(1728) * d_t, &b_t * &b_t, a_t.pow(3)];
    for (x, y) in parts.iter().zip([&t.a, &t.b, &t.c]) {
        let (q, r) = x.div_rem(&k);
        if !r.is_zero() || &q != y {
            return Err(cert_err("triple is not 5^-3 (1728 D, B^2, A^3)"));
        }
    }
    // rad(abc) < (3/5)|Dhat B| A and 5 A^2 > 3 |Dhat B|
    let lhs = (dhat * BigRational::from_integer(b_t * 3)).abs();
    if !a_t.is_positive() || lhs >= BigRational::from_integer(a_t.pow(2) * 5) {
        return Err(cert_err("5 A^2 > 3 |Dhat B| fails"));
    }
    Ok(())
}

/// Certifies goodness by factoring `abc`.
pub fn certify_by_factoring(t: &AbcTriple, budget: &Budget) -> Result<CertifiedTriple> {
    let f = t.factor(&[], budget);
    let rad = f.radical().ok_or_else(|| {
        Error::IncompleteFactorization(format!("cofactor {} of abc", f.cofactor()))
    })?;
    if rad >= t.max_abs() {
        return Err(Error::HypothesisViolation(format!("{t} is not good")));
    }
    Ok(CertifiedTriple {
        triple: t.clone(),
        certificate: GoodnessCertificate {
            kind: CertificateKind::Factored,
            witness: Witness::Radical(f.primes().keys().cloned().collect()),
        },
    })
}

/// `(1, p^((p-1)k) - 1, p^((p-1)k))`, certified by factoring.
pub fn prime_power_triple(p: u64, k: u32, budget: &Budget) -> Result<CertifiedTriple> {
    if p < 3 || !crate::arith::is_prime_u64(p) {
        return Err(Error::PreconditionViolation(format!("{p} is not an odd prime")));
    }
    if k == 0 {
        return Err(Error::PreconditionViolation("k must be positive".into()));
    }
    let c = BigInt::from(p).pow((p as u32 - 1) * k);
    let t = AbcTriple::new(BigInt::one(), &c - 1, c)?;
    certify_by_factoring(&t, budget)
}

/// A starting triple of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedRecord {
    pub torsion: TorsionKind,
    pub a0: BigInt,
    pub b0: BigInt,
    pub c0: BigInt,
    pub quality: LogRatio,
}

fn seed_values(t: TorsionKind) -> Result<(u64, u64, u64)> {
    use TorsionKind::*;
    Ok(match t {
        C1 | C2 | C8 | C9 | C12 | C2xC6 | C2xC8 => (192, 2209, 2401),
        C3 | C4 | C6 | C2xC4 => (162, 12005, 12167),
        C7 => (12096, 148955, 161051),
        C10 => (2880, 158171, 161051),
        C2xC2 => (144, 828125, 828269),
        C5 => return Err(Error::NoSeed(t)),
    })
}

/// The kind whose family drives the chain of `t`.
pub fn chain_family(t: TorsionKind) -> TorsionKind {
    match t {
        TorsionKind::C1 | TorsionKind::C2 => TorsionKind::C8,
        _ => t,
    }
}

impl SeedRecord {
    pub fn triple(&self) -> AbcTriple {
        AbcTriple {
            a: self.a0.clone(),
            b: self.b0.clone(),
            c: self.c0.clone(),
        }
    }

    /// `b0 / a0`.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(self.b0.clone(), self.a0.clone())
    }
}

/// The seed triple of the chain for `t` (C1 and C2 use the C8 seed).
pub fn seed(t: TorsionKind) -> Result<SeedRecord> {
    let (a, b, c) = seed_values(t)?;
    let triple = AbcTriple::new(a.into(), b.into(), c.into())?;
    let quality = quality(&triple, &Budget::default())?;
    let rec = SeedRecord {
        torsion: t,
        a0: triple.a.clone(),
        b0: triple.b.clone(),
        c0: triple.c.clone(),
        quality,
    };
    check_running_hypotheses(chain_family(t), &triple)?;
    Ok(rec)
}

/// The seed with its factored certificate.
pub fn certified_seed(t: TorsionKind) -> Result<CertifiedTriple> {
    let rec = seed(t)?;
    certify_by_factoring(&rec.triple(), &Budget::default())
}

/// Positivity, divisibility and `b/a > delta` for a chain member of `source`.
fn check_running_hypotheses(source: TorsionKind, t: &AbcTriple) -> Result<()> {
    let hv = |m: String| Err(Error::HypothesisViolation(m));
    if !t.is_positive() {
        return hv(format!("{t} is not positive"));
    }
    let k = source.required_divisor_of_a();
    if !(&t.a % k).is_zero() {
        return hv(format!("a = {} is not divisible by {k}", t.a));
    }
    let delta = crate::thresholds::delta(source).expect("chain kinds have delta");
    if !delta.is_below(&BigRational::new(t.b.clone(), t.a.clone())) {
        return hv(format!("b/a does not exceed delta_{source}"));
    }
    Ok(())
}

/// The next triple `(1728 D, B^2, A^3)` evaluated at `parent`.
pub fn next_triple(t: TorsionKind, parent: &CertifiedTriple) -> Result<CertifiedTriple> {
    if t == TorsionKind::C5 {
        return Err(Error::NoSeed(t));
    }
    let source = chain_family(t);
    check_running_hypotheses(source, &parent.triple)?;
    parent
        .verify()
        .map_err(|e| Error::HypothesisViolation(format!("parent is not certified good: {e}")))?;
    let p = &parent.triple;
    let inv = eval_invariants(source, &p.a, &p.b)?;
    let (a_t, b_t, d_t) = inv
        .integral()
        .ok_or_else(|| Error::HypothesisViolation("A, B, D are not integral".into()))?;
    let triple = AbcTriple::new(BigInt::from(1728) * d_t, &b_t * &b_t, a_t.pow(3))?;
    let kind = if source == t {
        CertificateKind::DhatBound
    } else {
        CertificateKind::Inherited
    };
    let out = CertifiedTriple {
        triple,
        certificate: GoodnessCertificate {
            kind,
            witness: Witness::Step {
                family: t,
                parent: Box::new(parent.clone()),
            },
        },
    };
    out.verify()?;
    check_running_hypotheses(source, &out.triple)?;
    Ok(out)
}

/// `P_0, ..., P_depth` for `t` (C5 has its own chain, see [`c5_triple`]).
pub fn chain(t: TorsionKind, depth: usize) -> Result<Vec<CertifiedTriple>> {
    let mut out = vec![certified_seed(t)?];
    for _ in 0..depth {
        let next = next_triple(t, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

/// Values of the factor forms at the parent, useful as factoring hints.
pub fn step_hints(t: TorsionKind, parent: &AbcTriple) -> Vec<BigInt> {
    let f = family(chain_family(t));
    let mut out = vec![BigInt::from(2), BigInt::from(3)];
    for form in [&f.a, &f.b, &f.d, &f.dhat] {
        out.extend(form.factor_values(&parent.a, &parent.b).into_iter().map(|(v, _)| v));
    }
    out.retain(|v| v.magnitude() > &BigUint::one());
    out
}

/// `P_n` of the C5 chain, `n >= 1`.
pub fn c5_triple(n: u32) -> Result<CertifiedTriple> {
    if n == 0 {
        return Err(Error::PreconditionViolation("n must be at least 1".into()));
    }
    let (a_t, b_t, d_t, _) = c5_values(n)?;
    let k = BigInt::from(125);
    let div = |x: BigInt| -> Result<BigInt> {
        let (q, r) = x.div_rem(&k);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::HypothesisViolation("125 does not divide the C5 entries".into()))
        }
    };
    let triple = AbcTriple::new(
        div(BigInt::from(1728) * d_t)?,
        div(&b_t * &b_t)?,
        div(a_t.pow(3))?,
    )?;
    let out = CertifiedTriple {
        triple,
        certificate: GoodnessCertificate {
            kind: CertificateKind::DhatBound,
            witness: Witness::C5 { n },
        },
    };
    out.verify()?;
    Ok(out)
}

/// Factoring hints for the C5 triple `P_n`.
pub fn c5_hints(n: u32) -> Vec<BigInt> {
    let f = family(TorsionKind::C5);
    let b = BigInt::one() << (n.max(1) - 1);
    let mut out = vec![BigInt::from(2), BigInt::from(3), BigInt::from(5)];
    for form in [&f.a, &f.b, &f.d, &f.dhat] {
        out.extend(form.factor_values(&BigInt::one(), &b).into_iter().map(|(v, _)| v));
    }
    out.retain(|v| v.magnitude() > &BigUint::one());
    out
}

/// The curve `H_T(n)`: `F_T(a_n, b_n)` at the chain triple `P_n` of `T`, or
/// `F_C5(1, 2^(n-1))` for C5.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HCurve {
    pub torsion: TorsionKind,
    pub n: u32,
    pub a: BigInt,
    pub b: BigInt,
    /// `P_n`, absent for C5.
    pub triple: Option<CertifiedTriple>,
}

/// `H_T(n)` for `n >= 1`, with the chain triple it is built from.
pub fn h_curve(t: TorsionKind, n: u32) -> Result<HCurve> {
    if n == 0 {
        return Err(Error::PreconditionViolation("H_T(n) needs n >= 1".into()));
    }
    if t == TorsionKind::C5 {
        return Ok(HCurve {
            torsion: t,
            n,
            a: BigInt::one(),
            b: BigInt::one() << (n - 1),
            triple: None,
        });
    }
    let p = chain(t, n as usize)?.pop().expect("chain has n + 1 members");
    Ok(HCurve {
        torsion: t,
        n,
        a: p.triple.a.clone(),
        b: p.triple.b.clone(),
        triple: Some(p),
    })
}

impl HCurve {
    pub fn model(&self) -> Result<crate::curves::CurveModel> {
        Ok(crate::families::family_model(self.torsion, &self.a, &self.b)?.model)
    }

    /// Certifies `N^6 < max(|c4|^3, c6^2)` without factoring.
    ///
    /// The curve must have an integral model with invariants `(A, B, D)` and
    /// `gcd(A, D) = 1`, which makes that model minimal and semistable away from 5, so `N = rad(D)` (times 5
    /// for C5). The bound `rad(D) < |Dhat|` then comes from the goodness of
    /// `P_n` with `a_n` even (`5 rad(D) <= |Dhat|` for C5), and `Dhat^6 < A^3`
    /// is checked directly.
    pub fn verify_good(&self) -> Result<()> {
        let t = self.torsion;
        let inv = crate::curves::invariants(&self.model()?);
        let fi = eval_invariants(t, &self.a, &self.b)?;
        let a_t = integral(&fi.a_t, "A")?;
        let b_t = integral(&fi.b_t, "B")?;
        let d_t = integral(&fi.d_t, "D")?;
        if !d_t.is_positive() || !a_t.is_positive() || b_t.is_zero() {
            return Err(cert_err("A and D must be positive and B nonzero"));
        }
        // (c4, c6) = (u^4 A, u^6 B) with u rational, and (A, B) realised integrally
        let u2 = BigRational::new(&inv.c6 * &a_t, &inv.c4 * &b_t);
        let rational_square = |q: &BigRational| {
            let sq = |n: &BigInt| !n.is_negative() && n.sqrt().pow(2) == *n;
            sq(q.numer()) && sq(q.denom())
        };
        let scaled = BigRational::from_integer(a_t.clone()) * u2.pow(2) == BigRational::from_integer(inv.c4.clone())
            && BigRational::from_integer(b_t.clone()) * u2.pow(3) == BigRational::from_integer(inv.c6.clone());
        if !rational_square(&u2) || !scaled || crate::curves::model_from_c4c6(&a_t, &b_t).is_none() {
            return Err(cert_err("curve has no integral model with invariants (A, B, D)"));
        }
        if t == TorsionKind::C5 {
            let g = a_t.gcd(&d_t);
            let five = BigInt::from(5);
            if g != five || (&a_t / &five) % &five == BigInt::zero() {
                return Err(cert_err("gcd(A, D) must be exactly 5 with 5 || A"));
            }
        } else {
            let p = self
                .triple
                .as_ref()
                .ok_or_else(|| cert_err("missing chain triple"))?;
            p.verify()?;
            if (&p.triple.a, &p.triple.b) != (&self.a, &self.b) {
                return Err(cert_err("chain triple does not match the parameters"));
            }
            let k = t.required_divisor_of_a();
            if !(&self.a % k).is_zero() {
                return Err(cert_err(format!("a is not divisible by {k}")));
            }
            let ratio = BigRational::new(self.b.clone(), self.a.clone());
            if !thresholds(t).theta.is_below(&ratio) {
                return Err(cert_err("b/a does not exceed theta"));
            }
            if !a_t.gcd(&d_t).is_one() {
                return Err(cert_err("gcd(A, D) is not 1"));
            }
        }
        let dhat6 = fi.dhat_t.abs().pow(6);
        if dhat6 >= BigRational::from_integer(a_t.pow(3)) {
            return Err(cert_err("Dhat^6 < A^3 fails"));
        }
        Ok(())
    }
}

/// The triple built from a curve's minimal invariants, with its verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveTriple {
    /// Entries `(x, y, z)` with `x + y = z`, all positive.
    pub triple: AbcTriple,
    /// Whether the triple is good; `None` if undecided within budget.
    pub good: Option<bool>,
    /// Hypotheses of the curve-to-triple construction that fail.
    pub violations: Vec<String>,
}

impl CurveTriple {
    pub fn check(&self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(_) => Err(Error::PreconditionViolation(self.violations.join("; "))),
        }
    }
}

/// Arranges `1728 disc + c6^2 = c4^3` as a positive triple and decides its goodness.
///
/// The construction's hypotheses (semistable, `6 | disc`, the curve
/// certified good) are reported in `violations` rather than enforced.
pub fn good_curve_to_triple(inv: &CurveInvariants, cond: &ConductorResult, budget: &Budget) -> Result<CurveTriple> {
    let x = BigInt::from(1728) * &inv.disc;
    let y = &inv.c6 * &inv.c6;
    let z = inv.c4.pow(3);
    let mut v = [x.abs(), y.abs(), z.abs()];
    v.sort();
    let [lo, mid, hi] = v;
    let g = lo.gcd(&mid);
    let mut violations = Vec::new();
    if !g.is_one() {
        violations.push(format!("entries share the factor {g}"));
    }
    let triple = AbcTriple::new(&lo / &g, &mid / &g, &hi / &g)?;
    let semistable = cond.exact.is_some() && cond.exponents.values().all(|&e| e == 1);
    if !semistable {
        violations.push("curve is not certified semistable".into());
    }
    if !(&inv.disc % BigInt::from(6)).is_zero() {
        violations.push("minimal discriminant is not divisible by 6".into());
    }
    if crate::curves::szpiro(inv, cond).verdict != crate::curves::Goodness::CertifiedGood {
        violations.push("curve is not certified good".into());
    }
    let hints = [inv.disc.clone(), inv.c4.clone(), inv.c6.clone()];
    let good = goodness_from(&triple.factor(&hints, budget), &triple.max_abs());
    Ok(CurveTriple {
        triple,
        good,
        violations,
    })
}

/// One line of the triple export: `T n a b c quality_or_bound certificate_kind`.
pub fn export_line(t: TorsionKind, n: usize, ct: &CertifiedTriple, q: &QualityEstimate) -> String {
    let tr = &ct.triple;
    format!(
        "{t} {n} {} {} {} {q} {}",
        tr.a, tr.b, tr.c, ct.certificate.kind
    )
}
