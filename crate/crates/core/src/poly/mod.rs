//! Dense univariate integer polynomials with exact real-root tools.

mod introots;
mod roots;

pub use introots::{integer_roots, rational_roots};
pub use roots::{
    certify_no_roots_in, count_roots, largest_root, no_roots_above, real_roots, refine,
    sign_at_root, Bound, RootInterval, SturmChain,
};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Integer polynomial, coefficients from the constant term upwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn x() -> Self {
        Poly::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("zero polynomial has no degree")
    }

    pub fn lead(&self) -> &BigInt {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Sign of `p(x)` computed from the cleared form `d^deg * p(n/d)`.
    pub fn sign_at(&self, x: &BigRational) -> Sign {
        if self.is_zero() {
            return Sign::NoSign;
        }
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner on the homogenised form
        let deg = self.deg();
        let mut powers = Vec::with_capacity(deg + 1);
        for _ in 0..=deg {
            powers.push(dpow.clone());
            dpow *= d;
        }
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * n + c * &powers[deg - i];
        }
        acc.sign()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(BigInt::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive(&self) -> Poly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        Poly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Primitive part with positive leading coefficient.
    pub fn normalized(&self) -> Poly {
        let p = self.primitive();
        if !p.is_zero() && p.lead().is_negative() {
            -p
        } else {
            p
        }
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Poly) -> Poly {
        assert!(!b.is_zero(), "pseudo-remainder by zero");
        let db = b.deg();
        let lb = b.lead().clone();
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return self.clone();
        }
        let steps = r.len() - db;
        for _ in 0..steps {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[dr - db + i] -= &lr * bc;
            }
            r.pop();
        }
        Poly::new(r)
    }

    /// Exact division over the integers, `None` if it does not divide.
    pub fn div_exact(&self, b: &Poly) -> Option<Poly> {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let db = b.deg();
        let lb = b.lead();
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let (qk, rem) = r[k + db].div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                r[k + i] -= &qk * bc;
            }
            q[k] = qk;
        }
        r.iter().all(|c| c.is_zero()).then(|| Poly::new(q))
    }

    /// Normalised gcd via the primitive remainder sequence.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.normalized();
        let mut b = other.normalized();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let c = a.content().gcd(&b.content());
        a = a.primitive();
        b = b.primitive();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.normalized().scale(&c)
    }

    /// Primitive squarefree part with positive leading coefficient.
    pub fn squarefree(&self) -> Poly {
        let p = self.normalized();
        if p.degree().unwrap_or(0) == 0 {
            return p;
        }
        let g = p.gcd(&p.derivative()).primitive();
        if g.deg() == 0 {
            return p;
        }
        p.div_exact(&g)
            .expect("gcd divides its argument")
            .normalized()
    }

    /// `p(x + c)` by repeated synthetic division.
    pub fn taylor_shift(&self, c: &BigInt) -> Poly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Poly::new(a)
    }

    /// `d^deg * p(x / d)`.
    pub fn scale_variable_denominator(&self, d: &BigInt) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let deg = self.deg();
        let mut out = Vec::with_capacity(deg + 1);
        let mut pw = BigInt::one();
        let mut pows = vec![BigInt::one(); deg + 1];
        for i in 1..=deg {
            pw *= d;
            pows[i] = pw.clone();
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push(c * &pows[deg - i]);
        }
        Poly::new(out)
    }

    /// `p(k x)`.
    pub fn scale_variable(&self, k: &BigInt) -> Poly {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pw);
            pw *= k;
        }
        Poly::new(out)
    }

    /// Reverses coefficients: `x^deg * p(1/x)`.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Writes `p(x) = q(x^k)` with `k` maximal; returns `(q, k)`.
    pub fn deflate(&self) -> (Poly, usize) {
        let k = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0usize, |g, (i, _)| g.gcd(&i));
        if k <= 1 {
            return (self.clone(), 1);
        }
        let q = self.coeffs.iter().step_by(k).cloned().collect();
        (Poly::new(q), k)
    }

    /// Sign changes in the coefficient sequence, zeros skipped.
    pub fn sign_variations(&self) -> usize {
        let mut last = Sign::NoSign;
        let mut v = 0;
        for c in &self.coeffs {
            let s = c.sign();
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
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*x")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}
