use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Default number of fractional bits carried by [`log_ratio`].
pub const DEFAULT_PRECISION: u32 = 128;
const GUARD_BITS: u32 = 32;

/// Fixed-point number `mantissa / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    mantissa: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn new(mantissa: BigInt, bits: u32) -> Self {
        Fixed { mantissa, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.to_rational())
    }

    fn truncate(&self, bits: u32) -> Fixed {
        debug_assert!(bits <= self.bits);
        Fixed::new(&self.mantissa >> (self.bits - bits), bits)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    let shift = 1100i64;
    let n = r.numer() << (shift as usize);
    let q = n / r.denom();
    // q = r * 2^shift, exact up to truncation
    let bits = q.bits() as i64;
    let drop = (bits - 60).max(0);
    let top = (&q >> (drop as usize)).to_f64().unwrap_or(0.0);
    top * 2f64.powi((drop - shift) as i32)
}

/// Natural log of `n >= 1` as a fixed-point mantissa with `bits` fractional bits.
///
/// The absolute error is below `2^-bits` times a small constant.
pub fn ln_fixed(n: &BigUint, bits: u32) -> Fixed {
    assert!(!n.is_zero(), "ln of zero");
    let w = bits + GUARD_BITS;
    let k = n.bits() - 1;
    // m = n / 2^k in [1, 2), scaled by 2^w
    let m: BigInt = if (w as u64) >= k {
        BigInt::from(n.clone()) << (w as u64 - k)
    } else {
        BigInt::from(n >> (k - w as u64))
    };
    let one = BigInt::one() << w;
    let ln_m = atanh_series(&(&m - &one), &(&m + &one), w);
    let ln2 = ln2_fixed(w);
    Fixed::new(ln2 * BigInt::from(k) + ln_m, w).truncate(bits)
}

fn ln2_fixed(w: u32) -> BigInt {
    atanh_series(&BigInt::one(), &BigInt::from(3), w)
}

/// `2 * atanh(num/den) * 2^w` for `0 <= num/den <= 1/3`.
fn atanh_series(num: &BigInt, den: &BigInt, w: u32) -> BigInt {
    if num.is_zero() {
        return BigInt::zero();
    }
    let z = (num << w) / den;
    let z2 = (&z * &z) >> w;
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !power.is_zero() {
        sum += &power / BigInt::from(k);
        power = (&power * &z2) >> w;
        k += 2;
    }
    sum * 2
}

/// Certified ratio `ln(x) / ln(y)` in fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogRatio {
    numerator_log: Fixed,
    denominator_log: Fixed,
    value: Fixed,
}

impl LogRatio {
    pub fn numerator_log(&self) -> &Fixed {
        &self.numerator_log
    }

    pub fn denominator_log(&self) -> &Fixed {
        &self.denominator_log
    }

    pub fn value(&self) -> &Fixed {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Value rounded to `sig` significant digits.
    pub fn display_sig(&self, sig: u32) -> String {
        format_sig(&self.value.to_rational(), sig)
    }

    /// True when the value rounds to `text` at the number of significant
    /// digits `text` itself carries.
    pub fn matches_decimal(&self, text: &str) -> bool {
        let digits = text.chars().filter(|c| c.is_ascii_digit()).count();
        let lead_zeros = text
            .trim_start_matches('-')
            .chars()
            .take_while(|c| *c == '0' || *c == '.')
            .filter(|c| *c == '0')
            .count();
        self.display_sig((digits - lead_zeros) as u32) == text
    }
}

impl fmt::Display for LogRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_sig(6))
    }
}

/// `ln(x) / ln(y)` with `precision` fractional bits.
///
/// # Panics
/// Panics unless `x >= 1` and `y >= 2`.
pub fn log_ratio(x: &BigUint, y: &BigUint, precision: u32) -> LogRatio {
    assert!(!x.is_zero(), "log_ratio: x must be at least 1");
    assert!(y > &BigUint::one(), "log_ratio: y must be at least 2");
    let w = precision + GUARD_BITS;
    let lx = ln_fixed(x, w);
    let ly = ln_fixed(y, w);
    let q = (lx.mantissa() << w) / ly.mantissa();
    LogRatio {
        value: Fixed::new(q, w).truncate(precision),
        numerator_log: lx.truncate(precision),
        denominator_log: ly.truncate(precision),
    }
}

/// Decimal rendering of `v` rounded half-to-even at `sig` significant digits.
pub fn format_sig(v: &BigRational, sig: u32) -> String {
    assert!(sig > 0);
    if v.is_zero() {
        return "0".to_string();
    }
    let neg = v.is_negative();
    let a = v.abs();
    let ten = BigRational::from_integer(BigInt::from(10));
    // exponent e with 10^(e-1) <= a < 10^e
    let mut e: i64 = 0;
    let mut p = BigRational::one();
    while p <= a {
        p *= &ten;
        e += 1;
    }
    while p.clone() / &ten > a {
        p /= &ten;
        e -= 1;
    }
    let shift = sig as i64 - e;
    let scaled = if shift >= 0 {
        &a * ten.pow(shift as i32)
    } else {
        &a / ten.pow((-shift) as i32)
    };
    let mut digits = round_half_even(&scaled);
    let mut point = e;
    if digits == BigInt::from(10).pow(sig) {
        digits /= 10;
        point += 1;
    }
    let s = digits.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.push_str(&"0".repeat((-point) as usize));
        out.push_str(&s);
    } else if point as usize >= s.len() {
        out.push_str(&s);
        out.push_str(&"0".repeat(point as usize - s.len()));
    } else {
        out.push_str(&s[..point as usize]);
        out.push('.');
        out.push_str(&s[point as usize..]);
    }
    out
}

fn round_half_even(r: &BigRational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(r.denom()) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1
            }
        }
    }
}

/// Exact decimal expansion of a rational whose denominator has only the
/// primes 2 and 5; `None` otherwise.
pub fn format_terminating(v: &BigRational) -> Option<String> {
    let mut d = v.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    while d.is_even() {
        d /= 2;
        twos += 1;
    }
    while (&d % 5u32).is_zero() {
        d /= 5;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = v * BigRational::from_integer(BigInt::from(10).pow(places));
    let n = scaled.to_integer();
    if places == 0 {
        return Some(n.to_string());
    }
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{:0>width$}", s, width = places as usize + 1);
    let (int, frac) = s.split_at(s.len() - places as usize);
    Some(format!("{}{}.{}", if neg { "-" } else { "" }, int, frac))
}

/// Parses a plain decimal such as `-6.0275` or `12` exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() || !int.bytes().chain(frac.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let v = BigRational::new(digits, num_traits::pow(BigInt::from(10u32), frac.len()));
    Some(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_matches_f64() {
        for n in [1u64, 2, 3, 10, 1000, 123_456_789, u64::MAX] {
            let got = ln_fixed(&BigUint::from(n), 80).to_f64();
            assert!((got - (n as f64).ln()).abs() < 1e-12, "{n}");
        }
    }

    #[test]
    fn ratio_and_rounding() {
        let r = log_ratio(&BigUint::from(1000u32), &BigUint::from(10u32), 128);
        assert_eq!(r.display_sig(6), "3.00000");
        let r = log_ratio(&BigUint::from(2u32), &BigUint::from(3u32), 128);
        assert_eq!(r.display_sig(6), "0.630930");
        assert!(r.matches_decimal("0.630930"));
    }

    #[test]
    fn sig_formatting() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(format_sig(&q(17285704, 10000), 6), "1728.57");
        assert_eq!(format_sig(&q(-1, 3), 3), "-0.333");
        assert_eq!(format_sig(&q(9999996, 10000000), 6), "1.00000");
        assert_eq!(format_sig(&q(1, 1000), 2), "0.0010");
        assert_eq!(format_sig(&q(123456, 1), 3), "123000");
    }

    #[test]
    fn terminating() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(format_terminating(&q(5, 8)).unwrap(), "0.625");
        assert_eq!(format_terminating(&q(-3, 2)).unwrap(), "-1.5");
        assert_eq!(format_terminating(&q(7, 1)).unwrap(), "7");
        assert!(format_terminating(&q(1, 3)).is_none());
    }
}
