//! The fifteen two-parameter families of curves with prescribed torsion.
//!
//! Each family is given by homogeneous forms in `(a, b)`: the model
//! coefficients `v, w1, w2` and the invariant forms `A, B, D, Dhat`, with
//! `A^3 - B^2 = 1728 D`.  The forms ship in factored shape in
//! `data/families.jsonl`.

use crate::curves::CurveModel;
use crate::poly::Poly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// One of the fifteen torsion groups that occur over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TorsionKind {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C12,
    C2xC2,
    C2xC4,
    C2xC6,
    C2xC8,
}

impl TorsionKind {
    pub const ALL: [TorsionKind; 15] = [
        TorsionKind::C1,
        TorsionKind::C2,
        TorsionKind::C3,
        TorsionKind::C4,
        TorsionKind::C5,
        TorsionKind::C6,
        TorsionKind::C7,
        TorsionKind::C8,
        TorsionKind::C9,
        TorsionKind::C10,
        TorsionKind::C12,
        TorsionKind::C2xC2,
        TorsionKind::C2xC4,
        TorsionKind::C2xC6,
        TorsionKind::C2xC8,
    ];

    pub fn name(self) -> &'static str {
        use TorsionKind::*;
        match self {
            C1 => "C1",
            C2 => "C2",
            C3 => "C3",
            C4 => "C4",
            C5 => "C5",
            C6 => "C6",
            C7 => "C7",
            C8 => "C8",
            C9 => "C9",
            C10 => "C10",
            C12 => "C12",
            C2xC2 => "C2xC2",
            C2xC4 => "C2xC4",
            C2xC6 => "C2xC6",
            C2xC8 => "C2xC8",
        }
    }

    /// Invariant factors `(m, n)` with the group `C_m x C_n`, `m | n`.
    pub fn invariants(self) -> (u32, u32) {
        use TorsionKind::*;
        match self {
            C1 => (1, 1),
            C2 => (1, 2),
            C3 => (1, 3),
            C4 => (1, 4),
            C5 => (1, 5),
            C6 => (1, 6),
            C7 => (1, 7),
            C8 => (1, 8),
            C9 => (1, 9),
            C10 => (1, 10),
            C12 => (1, 12),
            C2xC2 => (2, 2),
            C2xC4 => (2, 4),
            C2xC6 => (2, 6),
            C2xC8 => (2, 8),
        }
    }

    pub fn order(self) -> u32 {
        let (m, n) = self.invariants();
        m * n
    }

    pub fn from_invariants(m: u32, n: u32) -> Option<TorsionKind> {
        TorsionKind::ALL
            .into_iter()
            .find(|t| t.invariants() == (m, n))
    }

    /// Degree bound used in the Szpiro estimates; `None` for C5.
    pub fn n_t(self) -> Option<u32> {
        use TorsionKind::*;
        match self {
            C5 => None,
            C7 => Some(24),
            C1 | C3 | C9 | C10 => Some(36),
            _ => Some(48),
        }
    }

    /// Extra divisibility required of `a` for the gcd claim.
    pub fn required_divisor_of_a(self) -> i64 {
        match self {
            TorsionKind::C7 => 42,
            TorsionKind::C10 => 30,
            _ => 6,
        }
    }
}

impl fmt::Display for TorsionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TorsionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .replace('×', "x")
            .replace(['_', '{', '}', ' '], "")
            .to_ascii_uppercase()
            .replace('X', "x");
        TorsionKind::ALL
            .into_iter()
            .find(|t| t.name() == norm)
            .ok_or_else(|| Error::PreconditionViolation(format!("unknown torsion kind '{s}'")))
    }
}

impl From<TorsionKind> for String {
    fn from(t: TorsionKind) -> String {
        t.name().to_string()
    }
}

impl TryFrom<String> for TorsionKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Homogeneous integer form in `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    terms: Vec<(BigInt, u32, u32)>,
}

impl Form {
    pub fn eval(&self, a: &BigInt, b: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|(c, i, j)| c * a.pow(*i) * b.pow(*j))
            .sum()
    }

    /// The dehomogenisation `x -> F(1, x)`.
    pub fn at_one(&self) -> Poly {
        let deg = self.terms.iter().map(|t| t.2).max().unwrap_or(0) as usize;
        let mut c = vec![BigInt::zero(); deg + 1];
        for (k, _, j) in &self.terms {
            c[*j as usize] += k;
        }
        Poly::new(c)
    }

    pub fn terms(&self) -> &[(BigInt, u32, u32)] {
        &self.terms
    }
}

/// `scale * prod factor^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredForm {
    scale: BigRational,
    factors: Vec<(Form, u32)>,
}

impl FactoredForm {
    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn factors(&self) -> &[(Form, u32)] {
        &self.factors
    }

    pub fn eval(&self, a: &BigInt, b: &BigInt) -> BigRational {
        let prod: BigInt = self
            .factors
            .iter()
            .map(|(f, p)| f.eval(a, b).pow(*p))
            .product();
        &self.scale * BigRational::from_integer(prod)
    }

    /// Values of the individual factors, with their powers.
    pub fn factor_values(&self, a: &BigInt, b: &BigInt) -> Vec<(BigInt, u32)> {
        self.factors
            .iter()
            .map(|(f, p)| (f.eval(a, b), *p))
            .collect()
    }

    /// `(s, P)` with `F(1, x) = s * P(x)` and `P` an integer polynomial.
    pub fn at_one(&self) -> (BigRational, Poly) {
        let p = self
            .factors
            .iter()
            .fold(Poly::constant(BigInt::one()), |acc, (f, k)| &acc * &f.at_one().pow(*k));
        (self.scale.clone(), p)
    }

    /// Integer polynomial with the sign of `F(1, x)` everywhere.
    pub fn at_one_signed(&self) -> Poly {
        let (s, p) = self.at_one();
        if s.is_negative() {
            -p
        } else {
            p
        }
    }

    /// Product of the distinct factors of `F(1, x)`, sign-free.
    pub fn at_one_radical(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(BigInt::one()), |acc, (f, _)| &acc * &f.at_one())
    }
}

/// A torsion family: model forms and invariant forms.
#[derive(Clone, Debug)]
pub struct Family {
    pub torsion: TorsionKind,
    pub v: FactoredForm,
    pub w1: FactoredForm,
    pub w2: FactoredForm,
    pub a: FactoredForm,
    pub b: FactoredForm,
    pub d: FactoredForm,
    pub dhat: FactoredForm,
}

#[derive(Deserialize)]
struct Record {
    torsion: String,
    role: String,
    scale: String,
    factors: Vec<FactorRecord>,
}

#[derive(Deserialize)]
struct FactorRecord {
    power: u32,
    terms: Vec<(String, u32, u32)>,
}

const DATA: &str = include_str!("../data/families.jsonl");

fn parse_rational(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse().unwrap(), d.parse().unwrap()),
        None => BigRational::from_integer(s.parse().unwrap()),
    }
}

fn load() -> Vec<Family> {
    let mut slots: Vec<[Option<FactoredForm>; 7]> = vec![Default::default(); 15];
    let roles = ["v", "w1", "w2", "A", "B", "D", "Dhat"];
    for line in DATA.lines().filter(|l| !l.trim().is_empty()) {
        let rec: Record = serde_json::from_str(line).expect("bundled family data is valid JSON");
        let t: TorsionKind = rec.torsion.parse().expect("bundled torsion name");
        let ti = TorsionKind::ALL.iter().position(|&k| k == t).unwrap();
        let ri = roles.iter().position(|&r| r == rec.role).expect("bundled role");
        let factors = rec
            .factors
            .into_iter()
            .map(|f| {
                let terms = f
                    .terms
                    .into_iter()
                    .map(|(c, i, j)| (c.parse().expect("bundled coefficient"), i, j))
                    .collect();
                (Form { terms }, f.power)
            })
            .collect();
        slots[ti][ri] = Some(FactoredForm {
            scale: parse_rational(&rec.scale),
            factors,
        });
    }
    slots
        .into_iter()
        .zip(TorsionKind::ALL)
        .map(|(s, torsion)| {
            let [v, w1, w2, a, b, d, dhat] = s.map(|f| f.expect("complete family data"));
            Family {
                torsion,
                v,
                w1,
                w2,
                a,
                b,
                d,
                dhat,
            }
        })
        .collect()
}

/// The bundled family for `t`.
pub fn family(t: TorsionKind) -> &'static Family {
    static FAMILIES: OnceLock<Vec<Family>> = OnceLock::new();
    let all = FAMILIES.get_or_init(load);
    &all[TorsionKind::ALL.iter().position(|&k| k == t).unwrap()]
}

/// Values of `A, B, D, Dhat` at a parameter pair.
///
/// `A, B, D` are rational because a few families carry a power-of-two
/// denominator; they are integral on the parameter pairs the search uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInvariants {
    pub torsion: TorsionKind,
    pub a: BigInt,
    pub b: BigInt,
    pub a_t: BigRational,
    pub b_t: BigRational,
    pub d_t: BigRational,
    pub dhat_t: BigRational,
    pub n_t: Option<u32>,
}

impl FamilyInvariants {
    /// `(A, B, D)` as integers when all three are integral.
    pub fn integral(&self) -> Option<(BigInt, BigInt, BigInt)> {
        let int = |r: &BigRational| r.is_integer().then(|| r.to_integer());
        Some((int(&self.a_t)?, int(&self.b_t)?, int(&self.d_t)?))
    }
}

fn check_params(t: TorsionKind, a: &BigInt, b: &BigInt) -> Result<()> {
    if t != TorsionKind::C5 && a.is_zero() && b.is_zero() {
        return Err(Error::HypothesisViolation("(a, b) must not both vanish".into()));
    }
    Ok(())
}

/// Evaluates `A_T, B_T, D_T, Dhat_T` at `(a, b)`.
///
/// The C5 forms involve `b` only; `a` is recorded but otherwise ignored.
pub fn eval_invariants(t: TorsionKind, a: &BigInt, b: &BigInt) -> Result<FamilyInvariants> {
    check_params(t, a, b)?;
    let f = family(t);
    Ok(FamilyInvariants {
        torsion: t,
        a: a.clone(),
        b: b.clone(),
        a_t: f.a.eval(a, b),
        b_t: f.b.eval(a, b),
        d_t: f.d.eval(a, b),
        dhat_t: f.dhat.eval(a, b),
        n_t: t.n_t(),
    })
}

/// The family curve at `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyModel {
    pub torsion: TorsionKind,
    pub a: BigInt,
    pub b: BigInt,
    pub model: CurveModel,
}

fn int_form(f: &FactoredForm, a: &BigInt, b: &BigInt) -> BigInt {
    let r = f.eval(a, b);
    assert!(r.is_integer(), "model forms are integral");
    r.to_integer()
}

/// Weierstrass coefficients `[a1, a2, a3, a4, a6]` of the family at `(a, b)`.
pub fn model_coefficients(t: TorsionKind, a: &BigInt, b: &BigInt) -> Result<[BigInt; 5]> {
    check_params(t, a, b)?;
    let f = family(t);
    let v = int_form(&f.v, a, b);
    let w1 = int_form(&f.w1, a, b);
    let w2 = int_form(&f.w2, a, b);
    let z = BigInt::zero;
    Ok(match t {
        TorsionKind::C2 | TorsionKind::C2xC2 => [z(), w1, z(), w2, z()],
        TorsionKind::C3 => [w1, z(), w2, z(), z()],
        TorsionKind::C1 => {
            let g = family(TorsionKind::C9);
            let g1 = int_form(&g.w1, a, b);
            let g2 = int_form(&g.w2, a, b);
            let a3 = &v * &g2;
            [g1, g2, a3, w1, w2]
        }
        _ => {
            let a3 = &v * &w2;
            [w1, w2, a3, z(), z()]
        }
    })
}

/// The family curve at `(a, b)`; errors if the curve is singular there.
pub fn family_model(t: TorsionKind, a: &BigInt, b: &BigInt) -> Result<FamilyModel> {
    let [a1, a2, a3, a4, a6] = model_coefficients(t, a, b)?;
    Ok(FamilyModel {
        torsion: t,
        a: a.clone(),
        b: b.clone(),
        model: CurveModel::new(a1, a2, a3, a4, a6)?,
    })
}

/// Checks the parameter hypotheses and returns `gcd(A^3, B^2)`.
///
/// For `T != C5`: `gcd(a, b) = 1` and `a` divisible by 6 (42 for C7, 30 for
/// C10). For C5: `a = 1` and `b` a power of two.
pub fn check_gcd_claim(t: TorsionKind, a: &BigInt, b: &BigInt) -> Result<BigInt> {
    check_params(t, a, b)?;
    if t == TorsionKind::C5 {
        if !a.is_one() {
            return Err(Error::HypothesisViolation("a must be 1 for C5".into()));
        }
        let m = b.magnitude();
        if !b.is_positive() || (m & (m - 1u32)) != num_bigint::BigUint::zero() {
            return Err(Error::HypothesisViolation("b must be a power of two".into()));
        }
    } else {
        if !a.gcd(b).is_one() {
            return Err(Error::HypothesisViolation("gcd(a, b) must be 1".into()));
        }
        let k = t.required_divisor_of_a();
        if !(a % k).is_zero() {
            return Err(Error::HypothesisViolation(format!("a must be divisible by {k}")));
        }
    }
    let inv = eval_invariants(t, a, b)?;
    let (at, bt, _) = inv
        .integral()
        .ok_or_else(|| Error::HypothesisViolation("invariants not integral".into()))?;
    Ok(at.pow(3).gcd(&bt.pow(2)))
}
