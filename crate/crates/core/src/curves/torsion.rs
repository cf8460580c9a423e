use super::{invariants, CurveModel};
use crate::arith::{small_primes, Budget};
use crate::families::TorsionKind;
use crate::poly::{integer_roots, rational_roots, Poly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// Number of good primes whose point counts bound the torsion order.
const COUNT_PRIMES: usize = 12;
/// Point counting is naive, so primes stay below this.
const COUNT_PRIME_LIMIT: u32 = 10_000;

/// Affine point or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine(BigRational, BigRational),
}

fn q(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

fn neg(m: &CurveModel, p: &Point) -> Point {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(x.clone(), -y - q(&m.a1) * x - q(&m.a3)),
    }
}

fn add(m: &CurveModel, p: &Point, r: &Point) -> Point {
    let (x1, y1, x2, y2) = match (p, r) {
        (Point::Infinity, _) => return r.clone(),
        (_, Point::Infinity) => return p.clone(),
        (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    if *r == neg(m, p) {
        return Point::Infinity;
    }
    let (a1, a2, a3, a4) = (q(&m.a1), q(&m.a2), q(&m.a3), q(&m.a4));
    let lambda = if x1 != x2 {
        (y2 - y1) / (x2 - x1)
    } else {
        let three = q(&BigInt::from(3));
        let two = q(&BigInt::from(2));
        (three * x1 * x1 + two.clone() * &a2 * x1 + &a4 - &a1 * y1) / (two * y1 + &a1 * x1 + &a3)
    };
    let nu = y1 - &lambda * x1;
    let x3 = &lambda * &lambda + &a1 * &lambda - &a2 - x1 - x2;
    let y3 = -(&lambda + &a1) * &x3 - nu - a3;
    Point::Affine(x3, y3)
}

/// Order of `p` if it is at most `limit`.
fn order(m: &CurveModel, p: &Point, limit: u32) -> Option<u32> {
    let mut acc = p.clone();
    for k in 1..=limit {
        if acc == Point::Infinity {
            return Some(k);
        }
        acc = add(m, &acc, p);
    }
    None
}

/// `#E(F_p)` for an odd prime of good reduction.
fn count_points(m: &CurveModel, p: u32) -> u64 {
    let (b2, b4, b6, _) = m.b_invariants();
    let pb = BigInt::from(p);
    let r = |v: &BigInt| v.mod_floor(&pb).to_u64().unwrap();
    let (b2, b4, b6) = (r(&b2), r(&b4), r(&b6));
    let p = p as u64;
    let mut chi = vec![-1i64; p as usize];
    chi[0] = 0;
    for y in 1..p {
        chi[(y * y % p) as usize] = 1;
    }
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    let mut total: i64 = 1;
    for x in 0..p {
        let v = (((4 * x % p + b2) % p * x % p + 2 * b4 % p) % p * x % p + b6) % p;
        total += 1 + chi[v as usize];
    }
    total as u64
}

/// Gcd of `#E(F_p)` over small good primes; a multiple of the torsion order.
fn order_bound(m: &CurveModel) -> u64 {
    let disc = invariants(m).disc;
    let primes: Vec<u32> = small_primes()
        .iter()
        .copied()
        .skip(2)
        .take_while(|&p| p < COUNT_PRIME_LIMIT)
        .filter(|&p| !(&disc % p).is_zero())
        .take(COUNT_PRIMES)
        .collect();
    primes
        .par_iter()
        .map(|&p| count_points(m, p))
        .reduce(|| 0, |a, b| a.gcd(&b))
}

/// Division polynomials with the factor `psi_2` removed at even index:
/// `psi_n = g_n` for odd `n`, `psi_n = psi_2 g_n` for even `n`.
fn reduced_division_polys(m: &CurveModel, upto: usize) -> Vec<Poly> {
    let (b2, b4, b6, b8) = m.b_invariants();
    let c = |v: i64| BigInt::from(v);
    let f = Poly::new(vec![b6.clone(), &b4 * 2, b2.clone(), c(4)]);
    let f2 = &f * &f;
    let mut g = vec![
        Poly::zero(),
        Poly::constant(c(1)),
        Poly::constant(c(1)),
        Poly::new(vec![b8.clone(), &b6 * 3, &b4 * 3, b2.clone(), c(3)]),
        Poly::new(vec![
            &b4 * &b8 - &b6 * &b6,
            &b2 * &b8 - &b4 * &b6,
            &b8 * 10,
            &b6 * 10,
            &b4 * 5,
            b2.clone(),
            c(2),
        ]),
    ];
    for n in 5..=upto.max(4) {
        let k = n / 2;
        let next = if n % 2 == 1 {
            let (t1, t2) = (&g[k + 2] * &g[k].pow(3), &g[k - 1] * &g[k + 1].pow(3));
            if k % 2 == 0 {
                &(&f2 * &t1) - &t2
            } else {
                &t1 - &(&f2 * &t2)
            }
        } else {
            let t = &(&g[k + 2] * &g[k - 1].pow(2)) - &(&g[k - 2] * &g[k + 1].pow(2));
            &g[k] * &t
        };
        g.push(next);
    }
    g.truncate(upto + 1);
    g
}

/// Division polynomial `psi_n` as a polynomial in `x` for odd `n`, and
/// `psi_n / psi_2` for even `n`; index 2 gives `psi_2^2`.
pub fn division_polynomial(m: &CurveModel, n: usize) -> Poly {
    assert!(n >= 1);
    if n == 2 {
        let (b2, b4, b6, _) = m.b_invariants();
        return Poly::new(vec![b6, b4 * 2, b2, BigInt::from(4)]);
    }
    reduced_division_polys(m, n).swap_remove(n)
}

/// Rational points whose `x` is a root of `poly`; torsion `x` satisfy `4x` integral.
fn points_over(m: &CurveModel, poly: &Poly) -> Vec<Point> {
    let scaled = poly.scale_variable_denominator(&BigInt::from(4));
    let (b2, b4, b6, _) = m.b_invariants();
    let mut out = Vec::new();
    for xx in integer_roots(&scaled) {
        // 16 (2y + a1 x + a3)^2 = X^3 + b2 X^2 + 8 b4 X + 16 b6 with X = 4x
        let s16: BigInt = &xx * &xx * &xx + &b2 * &xx * &xx + &b4 * &xx * 8 + &b6 * 16;
        if s16.is_negative() {
            continue;
        }
        let root = s16.sqrt();
        if &root * &root != s16 {
            continue;
        }
        let x = BigRational::new(xx.clone(), BigInt::from(4));
        let base = -(q(&m.a1) * &x + q(&m.a3));
        for sgn in [1i64, -1] {
            let y = (&base + BigRational::new(&root * sgn, BigInt::from(4))) / q(&BigInt::from(2));
            debug_assert!(m.contains(&x, &y));
            let pt = Point::Affine(x.clone(), y);
            if !out.contains(&pt) {
                out.push(pt);
            }
        }
    }
    out
}

/// All rational torsion points, the identity included.
pub fn torsion_points(m: &CurveModel) -> Vec<Point> {
    let bound = order_bound(m);
    let wanted: Vec<usize> = (2..=12).filter(|k| bound % *k as u64 == 0).collect();
    let mut pts = vec![Point::Infinity];
    if wanted.is_empty() {
        return pts;
    }
    let top = *wanted.iter().max().unwrap();
    let g = reduced_division_polys(m, top.max(4));
    for &k in &wanted {
        let poly = if k == 2 { division_polynomial(m, 2) } else { g[k].clone() };
        for p in points_over(m, &poly) {
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
    }
    pts.retain(|p| order(m, p, 12).is_some());
    pts
}

/// Torsion subgroup of the curve.
///
/// Errors with `Inconclusive` if the points found do not form one of the
/// fifteen possible groups or disagree with the point-count bound.
pub fn torsion_subgroup(m: &CurveModel, _budget: &Budget) -> Result<TorsionKind> {
    let bound = order_bound(m);
    let pts = torsion_points(m);
    let n = pts.len() as u32;
    if bound % n as u64 != 0 {
        return Err(Error::Inconclusive(format!(
            "found {n} torsion points but point counts give {bound}"
        )));
    }
    let orders: Vec<u32> = pts.iter().filter_map(|p| order(m, p, 12)).collect();
    let twos = orders.iter().filter(|&&o| o == 2).count();
    let max = orders.iter().copied().max().unwrap_or(1);
    let kind = if twos == 3 {
        (n % 2 == 0 && max == n / 2)
            .then(|| TorsionKind::from_invariants(2, n / 2))
            .flatten()
    } else if max == n {
        TorsionKind::from_invariants(1, n)
    } else {
        None
    };
    kind.ok_or_else(|| {
        Error::Inconclusive(format!("{n} points with orders {orders:?} form no admissible group"))
    })
}

/// The 2-division polynomial of the C5 family at `b = 2^n`.
pub fn psi2_c5(n: u32) -> Poly {
    let two = |e: u32| BigInt::one() << e;
    let e1 = 30 + 40 * n;
    let e2 = 16 + 20 * n;
    Poly::new(vec![
        two(e1),
        two(e1 + 1) - two(e2),
        two(e1) - two(e2) * 3 + 1,
        BigInt::from(4),
    ])
}

/// True iff the C5 2-division polynomial at `b = 2^n` has a rational root.
///
/// Candidates are `±2^k / d` with `d | 4` and `2^k` dividing the constant term.
pub fn psi2_has_rational_root(n: u32) -> bool {
    let p = psi2_c5(n);
    let e = 30 + 40 * n;
    for k in 0..=e {
        let num = BigInt::one() << k;
        for d in [1, 2, 4] {
            for s in [1, -1] {
                let x = BigRational::new(&num * s, BigInt::from(d));
                if p.eval_rational(&x).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Generic check used as a control: any rational root at all.
pub fn has_rational_root(p: &Poly) -> bool {
    !rational_roots(p).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: [i64; 5]) -> TorsionKind {
        torsion_subgroup(&CurveModel::from_i64(a).unwrap(), &Budget::default()).unwrap()
    }

    #[test]
    fn known_torsion() {
        assert_eq!(t([0, -1, 1, 0, 0]), TorsionKind::C5); // 11a3
        assert_eq!(t([0, 0, 1, -1, 0]), TorsionKind::C1); // 37a1
        assert_eq!(t([0, 0, 0, -1, 0]), TorsionKind::C2xC2);
        assert_eq!(t([0, 0, 0, 0, 1]), TorsionKind::C6);
        assert_eq!(t([1, 0, 1, 4, -6]), TorsionKind::C6); // 14a1
        assert_eq!(t([1, 1, 1, -10, -10]), TorsionKind::C2xC4); // 15a1
        assert_eq!(t([0, 0, 1, 0, 0]), TorsionKind::C3);
        assert_eq!(t([0, 0, 0, 4, 0]), TorsionKind::C4);
    }

    #[test]
    fn division_polynomial_roots_are_torsion() {
        let m = CurveModel::from_i64([1, 0, 1, 4, -6]).unwrap();
        let g3 = division_polynomial(&m, 3);
        assert!(!points_over(&m, &g3).is_empty());
    }

    #[test]
    fn point_counts() {
        // y^2 = x^3 - x has p + 1 points for p = 3 mod 4
        let m = CurveModel::from_i64([0, 0, 0, -1, 0]).unwrap();
        assert_eq!(count_points(&m, 7), 8);
        assert_eq!(count_points(&m, 11), 12);
    }

    #[test]
    fn psi2() {
        assert!(!psi2_has_rational_root(0));
        assert!(has_rational_root(&Poly::from_i64(&[0, 0, -4, 4])));
    }
}
