use crate::error::EngineError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Supported coefficient rings: the integers, the integers modulo n, and
/// the rationals. Module theory for all three is carried out on integer
/// lifts, so ring elements are plain `i64` values reduced where needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoefficientRing {
    Integers,
    IntegersMod(i64),
    Rationals,
}

impl CoefficientRing {
    pub fn integers_mod(n: i64) -> Result<Self, EngineError> {
        if n < 2 {
            return Err(EngineError::BadModulus(n));
        }
        Ok(CoefficientRing::IntegersMod(n))
    }

    /// Parses "Z", "Q" or "Zmod:N".
    pub fn parse(text: &str) -> Result<Self, EngineError> {
        match text {
            "Z" => Ok(CoefficientRing::Integers),
            "Q" => Ok(CoefficientRing::Rationals),
            _ => {
                if let Some(rest) = text.strip_prefix("Zmod:") {
                    let n: i64 = rest.parse().map_err(|_| EngineError::BadModulus(0))?;
                    CoefficientRing::integers_mod(n)
                } else {
                    Err(EngineError::Precondition(format!(
                        "unknown coefficient ring `{text}`"
                    )))
                }
            }
        }
    }

    pub fn modulus(&self) -> Option<i64> {
        match self {
            CoefficientRing::IntegersMod(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            CoefficientRing::Rationals => true,
            CoefficientRing::IntegersMod(n) => is_prime(*n),
            CoefficientRing::Integers => false,
        }
    }

    /// Whether 1 generates an infinite cyclic subgroup of (R, +).
    pub fn identity_has_infinite_order(&self) -> bool {
        !matches!(self, CoefficientRing::IntegersMod(_))
    }

    pub fn is_unit(&self, v: i64) -> bool {
        match self {
            CoefficientRing::Integers => v == 1 || v == -1,
            CoefficientRing::Rationals => v != 0,
            CoefficientRing::IntegersMod(n) => gcd(v, *n) == 1,
        }
    }

    /// Reduces a coordinate sitting over a cyclic summand with the given
    /// invariant factor (0 encodes a free summand).
    pub fn reduce(&self, v: i64, factor: i64) -> i64 {
        match self {
            CoefficientRing::Integers | CoefficientRing::Rationals => {
                if factor == 0 {
                    v
                } else {
                    v.rem_euclid(factor)
                }
            }
            CoefficientRing::IntegersMod(n) => {
                let q = if factor == 0 { *n } else { factor };
                v.rem_euclid(q)
            }
        }
    }

    /// Normalizes a raw cyclic-summand order into the canonical encoding:
    /// 0 for a free summand, q >= 2 for torsion, 1 for the zero module.
    pub fn normalize_factor(&self, q: i64) -> i64 {
        match self {
            CoefficientRing::Integers => q.abs(),
            // Torsion dies over the rationals.
            CoefficientRing::Rationals => {
                if q == 0 {
                    0
                } else {
                    1
                }
            }
            CoefficientRing::IntegersMod(n) => {
                let g = if q == 0 { *n } else { gcd(q, *n) };
                if g == *n {
                    0
                } else {
                    g
                }
            }
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::IntegersMod(n) => write!(f, "Zmod:{n}"),
        }
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b)).checked_mul(b).expect("lcm overflow").abs()
    }
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["Z", "Q", "Zmod:4"] {
            assert_eq!(CoefficientRing::parse(s).unwrap().to_string(), s);
        }
        assert!(CoefficientRing::parse("Zmod:1").is_err());
        assert!(CoefficientRing::parse("GF9").is_err());
    }

    #[test]
    fn units() {
        assert!(CoefficientRing::Integers.is_unit(-1));
        assert!(!CoefficientRing::Integers.is_unit(2));
        assert!(CoefficientRing::Rationals.is_unit(2));
        let z4 = CoefficientRing::integers_mod(4).unwrap();
        assert!(z4.is_unit(3));
        assert!(!z4.is_unit(2));
    }

    #[test]
    fn factor_normalization() {
        let z6 = CoefficientRing::integers_mod(6).unwrap();
        assert_eq!(z6.normalize_factor(4), 2);
        assert_eq!(z6.normalize_factor(6), 0);
        assert_eq!(z6.normalize_factor(0), 0);
        assert_eq!(CoefficientRing::Rationals.normalize_factor(5), 1);
        assert_eq!(CoefficientRing::Integers.normalize_factor(-3), 3);
    }

    #[test]
    fn fields() {
        assert!(CoefficientRing::Rationals.is_field());
        assert!(CoefficientRing::integers_mod(5).unwrap().is_field());
        assert!(!CoefficientRing::integers_mod(6).unwrap().is_field());
        assert!(!CoefficientRing::Integers.is_field());
    }
}
