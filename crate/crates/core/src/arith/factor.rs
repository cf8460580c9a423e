use super::primes::{
    gcd_u64, is_probable_prime, mulmod, perfect_power_with_root_above, sieve, small_primes,
    SIEVE_LIMIT,
};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::borrow::Cow;
use std::collections::BTreeMap;

const MR_ROUNDS: u32 = 64;
const BRENT_BATCH: u64 = 128;

/// Work limits for [`factorize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Trial division runs over all primes up to this bound.
    pub trial_bound: u64,
    /// Iteration cap for a single Pollard-rho attempt.
    pub rho_iterations: u64,
    /// Number of rho attempts (polynomials `x^2 + c`, `c = 1, 2, ...`).
    pub rho_attempts: u32,
    /// Seed for rho start values and extra Miller-Rabin bases.
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            trial_bound: SIEVE_LIMIT,
            rho_iterations: 1 << 20,
            rho_attempts: 4,
            seed: 0,
        }
    }
}

impl Budget {
    pub fn with_seed(seed: u64) -> Self {
        Budget {
            seed,
            ..Budget::default()
        }
    }
}

/// A signed factorisation `n = sign * prod p^e * cofactor`.
///
/// A cofactor other than 1 is composite with no prime factor up to the
/// trial bound that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    negative: bool,
    primes: BTreeMap<BigUint, u32>,
    /// Pairwise coprime composite parts that could not be split, with exponents.
    composites: BTreeMap<BigUint, u32>,
    trial_bound: u64,
}

impl Factorization {
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn primes(&self) -> &BTreeMap<BigUint, u32> {
        &self.primes
    }

    /// Product of the unfactored composite parts.
    pub fn cofactor(&self) -> BigUint {
        self.composites.iter().map(|(q, e)| q.pow(*e)).product()
    }

    /// The unfactored parts `q^e`, pairwise coprime.
    pub fn composites(&self) -> &BTreeMap<BigUint, u32> {
        &self.composites
    }

    /// Upper bound for the radical of the cofactor.
    pub fn cofactor_radical_upper(&self) -> BigUint {
        self.composites.keys().product()
    }

    pub fn trial_bound(&self) -> u64 {
        self.trial_bound
    }

    pub fn is_complete(&self) -> bool {
        self.composites.is_empty()
    }

    pub fn exponent(&self, p: &BigUint) -> u32 {
        self.primes.get(p).copied().unwrap_or(0)
    }

    /// Product of the fully factored part with its sign and the cofactor.
    pub fn value(&self) -> BigInt {
        let mut m = self.cofactor();
        for (p, e) in &self.primes {
            m *= p.pow(*e);
        }
        BigInt::from_biguint(if self.negative { Sign::Minus } else { Sign::Plus }, m)
    }

    /// Product of the distinct known primes.
    pub fn known_radical(&self) -> BigUint {
        self.primes.keys().product()
    }

    pub fn radical(&self) -> Option<BigUint> {
        self.is_complete().then(|| self.known_radical())
    }

    /// Certified lower bound for the radical of the cofactor.
    ///
    /// Every prime factor of a composite part `q` exceeds the trial bound, so
    /// `q` has at most `k` prime factors with multiplicity and `rad(q)` is at
    /// least its `k`-th root.
    pub fn cofactor_radical_lower(&self) -> BigUint {
        let base = BigUint::from(self.trial_bound) + 1u32;
        self.composites
            .keys()
            .map(|q| {
                let mut k = 0u32;
                let mut acc = BigUint::one();
                loop {
                    let next = &acc * &base;
                    if &next > q {
                        break;
                    }
                    acc = next;
                    k += 1;
                }
                q.nth_root(k.max(1))
            })
            .product()
    }

    /// Multiplies two factorisations, merging exponents.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut out = Factorization {
            negative: self.negative != other.negative,
            primes: self.primes.clone(),
            composites: self.composites.clone(),
            trial_bound: self.trial_bound.min(other.trial_bound),
        };
        for (p, e) in &other.primes {
            out.add_prime(p.clone(), *e);
        }
        for (q, e) in &other.composites {
            out.add_composite(q.clone(), *e);
        }
        out
    }

    /// Assembles a factorisation from parts; the caller vouches for primality
    /// of the keys.
    pub fn from_parts(sign: i8, primes: BTreeMap<BigUint, u32>, cofactor: BigUint, trial_bound: u64) -> Self {
        assert!(!cofactor.is_zero(), "cofactor must be positive");
        let mut out = Factorization {
            negative: sign < 0,
            primes,
            composites: BTreeMap::new(),
            trial_bound,
        };
        out.add_composite(cofactor, 1);
        out
    }

    fn unit(negative: bool, trial_bound: u64) -> Self {
        Factorization {
            negative,
            primes: BTreeMap::new(),
            composites: BTreeMap::new(),
            trial_bound,
        }
    }

    fn add_prime(&mut self, p: BigUint, e: u32) {
        *self.primes.entry(p).or_insert(0) += e;
    }

    /// Adds `q^e`, splitting against known primes and existing parts so the
    /// composite parts stay pairwise coprime.
    fn add_composite(&mut self, q: BigUint, e: u32) {
        let mut work = vec![(q, e)];
        while let Some((mut q, e)) = work.pop() {
            for (p, k) in self.primes.iter_mut() {
                while (&q % p).is_zero() {
                    q /= p;
                    *k += e;
                }
            }
            if q.is_one() {
                continue;
            }
            if is_probable_prime(&q, MR_ROUNDS, 0) {
                self.add_prime(q, e);
                continue;
            }
            let hit = self.composites.keys().find(|r| !r.gcd(&q).is_one()).cloned();
            match hit {
                None => {
                    self.composites.insert(q, e);
                }
                Some(r) if r == q => {
                    *self.composites.get_mut(&q).unwrap() += e;
                }
                Some(r) => {
                    let f = self.composites.remove(&r).unwrap();
                    let g = r.gcd(&q);
                    work.push((&r / &g, f));
                    work.push((&q / &g, e));
                    work.push((g, e + f));
                }
            }
        }
    }
}

/// Factors a nonzero integer within `budget`.
///
/// # Panics
/// Panics if `n` is zero.
pub fn factorize(n: &BigInt, budget: &Budget) -> Factorization {
    factorize_with_hints(n, &[], budget)
}

/// Like [`factorize`], but first splits `n` along the gcds with `hints`.
///
/// Hints only speed things up and refine the unfactored parts; the primes
/// found are the same for any list once factoring completes.
pub fn factorize_with_hints(n: &BigInt, hints: &[BigInt], budget: &Budget) -> Factorization {
    assert!(!n.is_zero(), "factorize: zero has no factorisation");
    let negative = n.sign() == Sign::Minus;
    let m = n.magnitude().clone();
    let mut pieces = vec![m];
    for h in hints {
        let h = h.magnitude();
        if h <= &BigUint::one() {
            continue;
        }
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for piece in pieces {
            // split off the part of `piece` built from primes of `gcd(piece, h)`
            let g = piece.gcd(h);
            if g.is_one() || g == piece {
                next.push(piece);
                continue;
            }
            let mut part = BigUint::one();
            let mut rest = piece;
            loop {
                let d = rest.gcd(&g);
                if d.is_one() {
                    break;
                }
                rest /= &d;
                part *= d;
            }
            next.push(part);
            if !rest.is_one() {
                next.push(rest);
            }
        }
        pieces = next;
    }
    let mut out = Factorization::unit(negative, budget.trial_bound);
    for piece in pieces {
        out = out.merge(&factor_positive(piece, budget));
    }
    out.negative = negative;
    out
}

fn trial_primes(bound: u64) -> Cow<'static, [u32]> {
    let cached = small_primes();
    if bound <= SIEVE_LIMIT {
        let end = cached.partition_point(|&p| (p as u64) <= bound);
        Cow::Borrowed(&cached[..end])
    } else {
        Cow::Owned(sieve(bound))
    }
}

fn factor_positive(mut m: BigUint, budget: &Budget) -> Factorization {
    let mut out = Factorization::unit(false, budget.trial_bound);
    if m.is_one() {
        return out;
    }
    let primes = trial_primes(budget.trial_bound);
    let mut exhausted = true;
    for &p in primes.iter() {
        let p = p as u64;
        if let Some(small) = m.to_u64() {
            if p.saturating_mul(p) > small {
                exhausted = false;
                break;
            }
            let mut e = 0;
            let mut s = small;
            while s % p == 0 {
                s /= p;
                e += 1;
            }
            if e > 0 {
                out.add_prime(BigUint::from(p), e);
                m = BigUint::from(s);
            }
        } else {
            let pb = BigUint::from(p);
            let mut e = 0;
            loop {
                let (q, r) = m.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                m = q;
                e += 1;
            }
            if e > 0 {
                out.add_prime(pb, e);
            }
        }
    }
    if m.is_one() {
        return out;
    }
    if !exhausted {
        // remaining m has no factor up to sqrt(m)
        out.add_prime(m, 1);
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut work = vec![(m, 1u32)];
    while let Some((q, mult)) = work.pop() {
        if q.is_one() {
            continue;
        }
        if is_probable_prime(&q, MR_ROUNDS, budget.seed) {
            out.add_prime(q, mult);
            continue;
        }
        if let Some((r, k)) = perfect_power_with_root_above(&q, budget.trial_bound) {
            work.push((r, mult * k));
            continue;
        }
        match find_divisor(&q, budget, &mut rng) {
            Some(d) => {
                let rest = &q / &d;
                work.push((d, mult));
                work.push((rest, mult));
            }
            None => out.add_composite(q, mult),
        }
    }
    out
}

fn find_divisor(n: &BigUint, budget: &Budget, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    for attempt in 0..budget.rho_attempts {
        let c = attempt as u64 + 1;
        if let Some(small) = n.to_u64() {
            let x0 = rng.gen_range(0..small);
            if let Some(d) = brent_u64(small, c, x0, budget.rho_iterations) {
                return Some(BigUint::from(d));
            }
        } else {
            let x0 = BigUint::from(rng.gen::<u64>()) % n;
            if let Some(d) = brent_big(n, &BigUint::from(c), x0, budget.rho_iterations) {
                return Some(d);
            }
        }
    }
    None
}

fn brent_u64(n: u64, c: u64, x0: u64, cap: u64) -> Option<u64> {
    let f = |x: u64| ((mulmod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut r, mut q, mut g) = (x0, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (0u64, 0u64);
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BRENT_BATCH.min(r - k) {
                y = f(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += BRENT_BATCH;
            steps += BRENT_BATCH;
        }
        r *= 2;
        if g == 1 && steps > cap {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: &BigUint, x0: BigUint, cap: u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let one = BigUint::one();
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let (mut y, mut r, mut q, mut g) = (x0, 1u64, one.clone(), one.clone());
    let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BRENT_BATCH.min(r - k) {
                y = f(&y);
                q = (&q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BRENT_BATCH;
            steps += BRENT_BATCH;
        }
        r *= 2;
        if g.is_one() && steps > cap {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Radical of a completely factored integer.
pub fn radical(f: &Factorization) -> Result<BigUint> {
    f.radical()
        .ok_or_else(|| Error::IncompleteFactorization(f.cofactor().to_string()))
}

/// Bounds `(known radical, known radical * cofactor)` around the radical.
pub fn radical_bounds(f: &Factorization) -> (BigUint, BigUint) {
    let known = f.known_radical();
    let upper = &known * f.cofactor();
    (known, upper)
}

/// Exponent of the prime `p` in the nonzero integer `n`.
///
/// # Panics
/// Panics if `n` is zero or `p < 2`.
pub fn valuation(n: &BigInt, p: &BigUint) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    ord(n, p)
}

/// Valuation with `u32::MAX` standing in for the valuation of zero.
pub(crate) fn ord(n: &BigInt, p: &BigUint) -> u32 {
    assert!(p > &BigUint::one(), "valuation base must be at least 2");
    if n.is_zero() {
        return u32::MAX;
    }
    let mut m = n.magnitude().clone();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn small_and_signed() {
        let f = factorize(&BigInt::from(-360), &Budget::default());
        assert_eq!(f.sign(), -1);
        assert_eq!(f.exponent(&BigUint::from(2u32)), 3);
        assert_eq!(f.exponent(&BigUint::from(3u32)), 2);
        assert_eq!(f.exponent(&BigUint::from(5u32)), 1);
        assert_eq!(f.value(), BigInt::from(-360));
        assert!(factorize(&BigInt::one(), &Budget::default()).primes().is_empty());
    }

    #[test]
    fn semiprime_beyond_trial_bound() {
        let p = big("1000000007");
        let q = big("998244353");
        let f = factorize(&(&p * &q), &Budget::default());
        assert!(f.is_complete());
        assert_eq!(f.primes().len(), 2);
    }

    #[test]
    fn big_rho() {
        let p = big("4294967311");
        let q = big("18446744073709551629");
        let n = &p * &q * &p;
        let f = factorize(&n, &Budget::default());
        assert!(f.is_complete());
        assert_eq!(f.exponent(p.magnitude()), 2);
        assert_eq!(f.value(), n);
    }

    #[test]
    fn prime_power_cofactor() {
        let p = big("1000000007");
        let n = p.pow(5u32) * 12;
        let f = factorize(&n, &Budget::default());
        assert_eq!(f.exponent(p.magnitude()), 5);
    }

    #[test]
    fn exhausted_budget_leaves_cofactor() {
        let p = big("1000000000000000003");
        let q = big("1000000000000000009");
        let budget = Budget {
            rho_iterations: 256,
            rho_attempts: 1,
            ..Budget::default()
        };
        let n = &p * &q * 6;
        let f = factorize(&n, &budget);
        assert!(!f.is_complete());
        assert_eq!(f.value(), n);
        let (lo, hi) = radical_bounds(&f);
        let true_rad = BigUint::from(6u32) * p.magnitude() * q.magnitude();
        assert!(lo <= true_rad && true_rad <= hi);
        let tighter = f.known_radical() * f.cofactor_radical_lower();
        assert!(lo <= tighter && tighter <= true_rad);
        assert!(radical(&f).is_err());
    }

    #[test]
    fn hints_agree() {
        let n = big("2") * big("1000003").pow(2u32) * big("4294967311") * big("18446744073709551629");
        let plain = factorize(&n, &Budget::default());
        let hinted = factorize_with_hints(&n, &[big("18446744073709551629")], &Budget::default());
        assert_eq!(plain, hinted);
    }

    #[test]
    fn valuations() {
        let two = BigUint::from(2u32);
        assert_eq!(valuation(&BigInt::from(-96), &two), 5);
        assert_eq!(ord(&BigInt::zero(), &two), u32::MAX);
    }
}
