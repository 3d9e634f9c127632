//! Tower function and the known values of `ES_k(n)`, the least N such
//! that every N-point sequence in k-general position has a kth-order
//! monotone subset of size n.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::combin::binomial;
use crate::error::{Error, Result};

/// Default bit budget for exact tower values.
pub const DEFAULT_MAX_BITS: u64 = 1 << 20;

/// `twr_1(x) = x`, `twr_{i+1}(x) = 2^{twr_i(x)}`; fails once a value would
/// need more than `max_bits` bits.
pub fn tower(k: u32, x: u64, max_bits: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidParameter("tower height must be at least 1".into()));
    }
    let mut value = BigUint::from(x);
    if value.bits() > max_bits {
        return Err(Error::Overflow { max_bits });
    }
    for _ in 1..k {
        // 2^value has value + 1 bits
        let exponent = value.to_u64().filter(|&e| e < max_bits).ok_or(Error::Overflow { max_bits })?;
        value = BigUint::one() << exponent;
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Known(BigUint),
    Unknown,
}

impl Bound {
    pub fn value(&self) -> Option<&BigUint> {
        match self {
            Bound::Known(v) => Some(v),
            Bound::Unknown => None,
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Known(v) => s.serialize_str(&v.to_string()),
            Bound::Unknown => s.serialize_str("unknown"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub k: u64,
    pub n: u64,
    pub known_lower: Bound,
    pub known_upper: Bound,
    pub formula_tags: Vec<String>,
}

impl BoundsReport {
    pub fn is_exact(&self) -> bool {
        matches!((&self.known_lower, &self.known_upper), (Bound::Known(a), Bound::Known(b)) if a == b)
    }
}

/// Known bounds on `ES_k(n)`. Exact for `k <= 2`; a doubly exponential
/// lower bound for `k = 3` and odd `n >= 5`; otherwise unknown, tagged with
/// the tower-type upper bound whose constant is not explicit.
pub fn known_bounds(k: u64, n: u64) -> Result<BoundsReport> {
    if k == 0 || n < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and n >= 2, got k={k}, n={n}")));
    }
    let mut tags = Vec::new();
    let (lower, upper) = match k {
        1 => {
            let v = BigUint::from(n - 1).pow(2) + 1u32;
            tags.push("exact: (n-1)^2 + 1".to_string());
            (Bound::Known(v.clone()), Bound::Known(v))
        }
        2 => {
            let c = if n >= 2 { binomial(2 * n - 4, n - 2) } else { 1 };
            if c == u128::MAX {
                return Err(Error::Overflow { max_bits: 128 });
            }
            let v = BigUint::from(c) + 1u32;
            tags.push("exact: C(2n-4, n-2) + 1".to_string());
            (Bound::Known(v.clone()), Bound::Known(v))
        }
        _ => {
            let mut lower = Bound::Unknown;
            if k == 3 && n % 2 == 1 && n >= 5 {
                let m = (n - 1) / 2;
                let exponent = tower(2, m - 1, DEFAULT_MAX_BITS)?;
                let exponent = exponent.to_u64().expect("bounded by the bit budget");
                if exponent < DEFAULT_MAX_BITS {
                    lower = Bound::Known((BigUint::one() << exponent) + 1u32);
                    tags.push("lower: 2^(2^(m-1)) + 1 for n = 2m + 1".to_string());
                } else {
                    tags.push("lower: 2^(2^(m-1)) + 1 for n = 2m + 1 (exceeds bit budget)".to_string());
                }
            }
            tags.push(format!("upper: twr_{k}(C_{k} * n), asymptotic only, C_{k} unspecified"));
            (lower, Bound::Unknown)
        }
    };
    Ok(BoundsReport { k, n, known_lower: lower, known_upper: upper, formula_tags: tags })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_values() {
        assert_eq!(tower(1, 5, 64).unwrap(), BigUint::from(5u32));
        assert_eq!(tower(2, 3, 64).unwrap(), BigUint::from(8u32));
        assert_eq!(tower(3, 2, 64).unwrap(), BigUint::from(16u32));
        assert_eq!(tower(4, 2, 64).unwrap(), BigUint::from(65536u32));
        assert_eq!(tower(3, 0, 64).unwrap(), BigUint::from(2u32));
        assert_eq!(tower(5, 2, 1 << 17).unwrap().bits(), 65537);
        assert!(matches!(tower(5, 2, 1000), Err(Error::Overflow { .. })));
        assert!(matches!(tower(6, 2, 1 << 20), Err(Error::Overflow { .. })));
        assert!(tower(0, 2, 64).is_err());
    }

    #[test]
    fn bound_values() {
        let r = known_bounds(1, 5).unwrap();
        assert!(r.is_exact());
        assert_eq!(r.known_lower.value().unwrap(), &BigUint::from(17u32));
        assert_eq!(known_bounds(2, 5).unwrap().known_upper.value().unwrap(), &BigUint::from(21u32));
        assert_eq!(known_bounds(2, 2).unwrap().known_upper.value().unwrap(), &BigUint::from(2u32));
        let r = known_bounds(3, 7).unwrap();
        assert_eq!(r.known_lower.value().unwrap(), &BigUint::from(17u32));
        assert_eq!(r.known_upper, Bound::Unknown);
        assert_eq!(known_bounds(3, 5).unwrap().known_lower.value().unwrap(), &BigUint::from(5u32));
        assert_eq!(known_bounds(3, 6).unwrap().known_lower, Bound::Unknown);
        assert_eq!(known_bounds(4, 9).unwrap().known_lower, Bound::Unknown);
        assert!(known_bounds(0, 3).is_err());
    }

    #[test]
    fn report_json() {
        let json = serde_json::to_string(&known_bounds(3, 9).unwrap()).unwrap();
        assert!(json.contains("\"known_lower\":\"257\""));
        assert!(json.contains("\"known_upper\":\"unknown\""));
    }
}
