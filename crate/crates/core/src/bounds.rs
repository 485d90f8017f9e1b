//! Exact-arithmetic bound expressions for variable counts of minimally
//! unsatisfiable k-DNF sets with `m` formulas, and for XOR implications.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

/// A rational rendered as an integer or a reduced `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Exact(BigRational::from_integer(v.into()))
    }

    pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Exact(BigRational::new(n.into(), d.into()))
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Exact {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("not an exact rational: {s:?}");
        match s.split_once('/') {
            None => Ok(Exact::int(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Exact::ratio(n, d))
            }
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn rat(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn one_minus_inv(k: usize) -> BigRational {
    BigRational::one() - rat(1, k)
}

/// Tarsi: `m - 1`.
pub fn tarsi_bound(m: usize) -> Exact {
    Exact::int(BigInt::from(m) - 1)
}

/// `(km)^(k+1)`.
pub fn upper_bound(k: usize, m: usize) -> Exact {
    Exact::int(BigInt::from(k * m).pow(k as u32 + 1))
}

/// `(m/4 · (1 - 1/k))^k`; requires `k >= 1`.
pub fn lower_bound_expr(k: usize, m: usize) -> Exact {
    Exact((rat(m, 4) * one_minus_inv(k)).pow(k as i32))
}

/// `(k+1) · (m/(k+2) · (1 - 1/k))^k`; requires `k >= 1`.
pub fn xor_bound(k: usize, m: usize) -> Exact {
    Exact(rat(k + 1, 1) * (rat(m, k + 2) * one_minus_inv(k)).pow(k as i32))
}

/// `k · (m/(4k))^k`, the weaker closed form of [`xor_bound`].
pub fn xor_bound_floor(k: usize, m: usize) -> Exact {
    Exact(rat(k, 1) * rat(m, 4 * k).pow(k as i32))
}

/// `(m(k-1))^k`: the y-universe size of the minimally unsatisfiable family.
pub fn y_universe(m: usize, k: usize) -> BigInt {
    BigInt::from(m * (k - 1)).pow(k as u32)
}

/// Closed-form sizes of the generated families, in exact integers.
pub mod counts {
    use num_bigint::BigInt;
    use num_traits::Pow;

    pub fn gadget_formulas(m: usize) -> BigInt {
        BigInt::from(2 * m - 1)
    }

    pub fn gadget_vars(m: usize, k: usize) -> BigInt {
        BigInt::from(m * (k - 1) + 2 * (m - 1))
    }

    pub fn min_unsat_formulas(m: usize, k: usize) -> BigInt {
        BigInt::from((k - 1) * (2 * m - 1) + 2 * m * (k - 1) + 1)
    }

    pub fn min_unsat_vars(m: usize, k: usize) -> BigInt {
        let len = m * (k - 1);
        BigInt::from((k - 1) * (len + 2 * (m - 1))) + BigInt::from(len).pow(k as u32) + BigInt::from(len)
    }

    pub fn xor_pair_formulas(m: usize, k: usize) -> BigInt {
        BigInt::from((k - 1) * (2 * m - 1) + m * (k - 1) * (k + 1))
    }

    pub fn xor_pair_g_vars(m: usize, k: usize) -> BigInt {
        BigInt::from(k + 1) * BigInt::from(m * (k - 1)).pow(k as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(upper_bound(2, 8).to_string(), "4096");
        assert_eq!(lower_bound_expr(2, 8).to_string(), "1");
        assert_eq!(tarsi_bound(5).to_string(), "4");
        assert_eq!(xor_bound(2, 2).to_string(), "3/16");
        assert_eq!(lower_bound_expr(1, 5).to_string(), "0");
    }

    #[test]
    fn exact_parse_round_trip() {
        for s in ["0", "-3", "3/16", "4096"] {
            assert_eq!(s.parse::<Exact>().unwrap().to_string(), s);
        }
        assert_eq!("6/4".parse::<Exact>().unwrap().to_string(), "3/2");
        assert!("1/0".parse::<Exact>().is_err());
    }

    #[test]
    fn xor_bound_chain() {
        for k in 2..=8 {
            for m in 1..=40 {
                assert!(xor_bound_floor(k, m) <= xor_bound(k, m), "k={k} m={m}");
            }
        }
    }
}
