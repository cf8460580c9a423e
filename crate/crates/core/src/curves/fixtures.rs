//! Reference curves with independently stated invariants, used in tests
//! and by `fixtures-verify`.

use super::CurveModel;
use num_bigint::BigInt;
use serde::Deserialize;

const DATA: &str = include_str!("../../data/curves.json");

#[derive(Clone, Debug, Deserialize)]
pub struct Factored {
    pub sign: i8,
    pub factors: Vec<(String, u32)>,
}

impl Factored {
    pub fn value(&self) -> BigInt {
        let v: BigInt = self
            .factors
            .iter()
            .map(|(p, e)| p.parse::<BigInt>().expect("fixture prime").pow(*e))
            .product();
        v * self.sign
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Fixture {
    pub name: String,
    coefficients: [String; 5],
    /// Conductor as `(prime, exponent)` pairs.
    pub conductor: Option<Vec<(u64, u32)>>,
    pub c4: Option<Factored>,
    pub c6: Option<Factored>,
    pub disc: Option<Factored>,
    pub good: bool,
}

impl Fixture {
    pub fn model(&self) -> CurveModel {
        let a = self
            .coefficients
            .clone()
            .map(|c| c.parse::<BigInt>().expect("fixture coefficient"));
        CurveModel::from_coefficients(a).expect("fixture curves are nonsingular")
    }

    pub fn conductor_value(&self) -> Option<BigInt> {
        self.conductor
            .as_ref()
            .map(|ps| ps.iter().map(|&(p, e)| BigInt::from(p).pow(e)).product())
    }
}

/// All bundled fixtures.
pub fn all() -> Vec<Fixture> {
    serde_json::from_str(DATA).expect("bundled fixtures are valid JSON")
}

/// Fixture by name.
pub fn get(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
