//! Serializable report. Rationals are "num/den" strings, integers are bare
//! JSON numbers of any size.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use wporb::Rat;

/// An integer written as an unquoted JSON number, with no size limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(x: BigInt) -> Self {
        JsonInt(x)
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let n =
            serde_json::Number::from_str(&self.0.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(deserializer)?;
        BigInt::from_str(&n.to_string())
            .map(JsonInt)
            .map_err(|_| serde::de::Error::custom(format!("{n} is not an integer")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub weights: WeightsSection,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sectors: Option<Vec<SectorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<BettiSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub three_point: Option<ThreePointSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integral: Option<IntegralSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightsSection {
    pub given: Vec<u64>,
    pub normalized: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSection {
    pub rays: Vec<Vec<JsonInt>>,
    pub c0: Vec<Vec<JsonInt>>,
    pub maximal_cones: Vec<ConeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeEntry {
    pub rays: Vec<usize>,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorEntry {
    pub label: String,
    pub key: String,
    pub carrier: Vec<usize>,
    pub a: Vec<Rat>,
    /// c with a_k = frac(c q_k) on every ray.
    pub phase: Rat,
    pub quotient_weights: Vec<u64>,
    pub order: u64,
    pub iota: Rat,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiSection {
    pub entries: Vec<BettiEntry>,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub degree: Rat,
    pub dim: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSection {
    pub l: Vec<JsonInt>,
    /// Row i holds e_ij for j = 0..n-i.
    pub e: Vec<Vec<Rat>>,
    /// xi_k = c_k D^k with D the sum of all toric divisors.
    pub xi_in_d: Vec<Rat>,
    pub cup: CupSection,
    /// Closed-form products of degree-zero point classes, present when the
    /// weights are pairwise coprime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_relations: Option<Vec<Relation>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CupSection {
    pub basis: Vec<BasisEntry>,
    pub products: Vec<ProductEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub key: String,
    pub power: usize,
    pub degree: Rat,
    /// Pairing with the dual basis vector on the inverse sector.
    pub pairing: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub left: usize,
    pub right: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub basis: usize,
    pub coeff: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub left: String,
    pub right: String,
    /// "0", a sector label, or "e0@p<i>" for the class with integral 1/q_i.
    pub product: String,
    pub pairing: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePointSection {
    pub triple: Vec<String>,
    pub classes: Vec<String>,
    pub value: Rat,
    pub obstruction_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralSection {
    pub sector: String,
    pub class: String,
    pub value: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_stay_unquoted() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let json =
            serde_json::to_string(&vec![JsonInt(big.clone()), JsonInt(BigInt::from(-3))]).unwrap();
        assert_eq!(json, "[123456789012345678901234567890,-3]");
        let back: Vec<JsonInt> = serde_json::from_str(&json).unwrap();
        assert_eq!(back[0].0, big);
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
    }

    #[test]
    fn rationals_are_strings() {
        let e = BettiEntry {
            degree: Rat::frac_of(3, 2),
            dim: 1,
        };
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"degree":"3/2","dim":1}"#
        );
        let whole = BettiEntry {
            degree: Rat::from(2i64),
            dim: 3,
        };
        assert_eq!(
            serde_json::to_string(&whole).unwrap(),
            r#"{"degree":"2/1","dim":3}"#
        );
    }
}
