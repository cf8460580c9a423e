use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

/// Default trial-division bound and the extent of the cached sieve.
pub const SIEVE_LIMIT: u64 = 1_000_000;

const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primes up to `limit` inclusive.
pub fn sieve(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Cached primes up to [`SIEVE_LIMIT`].
pub fn small_primes() -> &'static [u32] {
    static CACHE: OnceLock<Vec<u32>> = OnceLock::new();
    CACHE.get_or_init(|| sieve(SIEVE_LIMIT))
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES_U64 {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with `rounds` bases: the twelve smallest primes, then
/// pseudo-random bases drawn from a stream seeded by `seed`.
pub fn is_probable_prime(n: &BigUint, rounds: u32, seed: u64) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES_U64 {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d72_5f62_6173_6573);
    let span = n - 3u32;
    for round in 0..rounds {
        let a = if (round as usize) < MR_BASES_U64.len() {
            BigUint::from(MR_BASES_U64[round as usize])
        } else {
            let bytes = (n.bits() as usize).div_ceil(8) + 8;
            let buf: Vec<u8> = (0..bytes).map(|_| rng.gen()).collect();
            BigUint::from_bytes_le(&buf) % &span + 2u32
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        let mut witness = true;
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                witness = false;
                break;
            }
        }
        if witness {
            return false;
        }
    }
    true
}

/// Returns `(r, k)` with `n = r^k` for the smallest prime `k` that works.
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    perfect_power_with_root_above(n, 1)
}

/// Like [`perfect_power`], for `n` known to have no prime factor up to `bound`.
pub fn perfect_power_with_root_above(n: &BigUint, bound: u64) -> Option<(BigUint, u32)> {
    if n <= &BigUint::from(3u32) {
        return None;
    }
    let bits = n.bits() as u32;
    // r > bound >= 2^(floor_log - 1) gives bits(r^k) > k * (floor_log - 1)
    let floor_log = 64 - bound.max(1).leading_zeros();
    let max_k = if floor_log <= 1 { bits } else { (bits - 1) / (floor_log - 1) };
    let mut k = 2u32;
    while k <= max_k {
        if is_prime_u64(k as u64) {
            let r = n.nth_root(k);
            if r > BigUint::one() && r.pow(k) == *n {
                return Some((r, k));
            }
        }
        k += 1;
    }
    None
}

/// Inverse of `a` modulo the prime `m`.
pub fn inv_mod_prime(a: u64, m: u64) -> u64 {
    assert!(a % m != 0, "no inverse of zero");
    powmod(a, m - 2, m)
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_counts() {
        assert_eq!(sieve(100).len(), 25);
        assert_eq!(small_primes().len(), 78_498);
    }

    #[test]
    fn u64_primality_matches_sieve() {
        let ps = sieve(10_000);
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), ps.binary_search(&(n as u32)).is_ok(), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn big_primality() {
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_probable_prime(&m127, 64, 1));
        let comp = &m127 * BigUint::from(1_000_003u32);
        assert!(!is_probable_prime(&comp, 64, 1));
    }

    #[test]
    fn perfect_powers() {
        let n = BigUint::from(7u32).pow(12);
        let (r, k) = perfect_power(&n).unwrap();
        assert_eq!(r.pow(k), n);
        assert!(perfect_power(&BigUint::from(1_000_003u32 * 3)).is_none());
    }
}
