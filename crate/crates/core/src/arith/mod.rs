//! Integer factorisation, radicals, valuations and certified logarithms.

mod factor;
mod logs;
mod primes;

pub use factor::{
    factorize, factorize_with_hints, radical, radical_bounds, valuation, Budget, Factorization,
};
pub(crate) use factor::ord;
pub use logs::{
    format_sig, format_terminating, ln_fixed, log_ratio, parse_decimal, Fixed, LogRatio,
    DEFAULT_PRECISION,
};
pub(crate) use logs::rational_to_f64;
pub use primes::{
    inv_mod_prime, is_prime_u64, is_probable_prime, perfect_power, perfect_power_with_root_above, sieve,
    small_primes,
};
