use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphaError {
    #[error("alpha must satisfy 0 < p/q <= 1, got {p}/{q}")]
    OutOfRange { p: u64, q: u64 },
    #[error("alpha {0:?} is a decimal; write it as a fraction such as \"1/2\"")]
    Decimal(String),
    #[error("alpha {0:?} is not of the form p/q")]
    Malformed(String),
}

/// Domination threshold `p/q` with `0 < p/q <= 1`, kept in lowest terms.
///
/// All comparisons against neighborhood ratios cross-multiply in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alpha {
    p: u64,
    q: u64,
}

impl Alpha {
    pub const ONE: Alpha = Alpha { p: 1, q: 1 };
    pub const HALF: Alpha = Alpha { p: 1, q: 2 };

    pub fn new(p: u64, q: u64) -> Result<Self, AlphaError> {
        if p == 0 || q == 0 || p > q {
            return Err(AlphaError::OutOfRange { p, q });
        }
        let g = p.gcd(&q);
        Ok(Alpha { p: p / g, q: q / g })
    }

    pub fn numer(self) -> u64 {
        self.p
    }

    pub fn denom(self) -> u64 {
        self.q
    }

    /// `num / den >= alpha` for `den > 0`; `num` may be negative.
    #[inline]
    pub fn is_met_by(self, num: i64, den: i64) -> bool {
        debug_assert!(den > 0);
        i128::from(num) * i128::from(self.q) >= i128::from(self.p) * i128::from(den)
    }

    #[inline]
    pub fn is_met_by_ratio(self, r: &Ratio<i64>) -> bool {
        self.is_met_by(*r.numer(), *r.denom())
    }

    pub fn as_ratio(self) -> Ratio<i64> {
        Ratio::new(self.p as i64, self.q as i64)
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `k/denominator` for `k` in `1..denominator`, e.g. tenths from 1/10 to 9/10.
    pub fn grid(denominator: u64) -> Vec<Alpha> {
        (1..denominator)
            .map(|k| Alpha::new(k, denominator).expect("k < denominator"))
            .collect()
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Alpha {
    type Err = AlphaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let Some((p, q)) = s.split_once('/') else {
            return Err(if s.contains('.') {
                AlphaError::Decimal(s.into())
            } else {
                AlphaError::Malformed(s.into())
            });
        };
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| AlphaError::Malformed(s.into()))
        };
        Alpha::new(parse(p)?, parse(q)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let a = Alpha::new(2, 4).unwrap();
        assert_eq!((a.numer(), a.denom()), (1, 2));
        assert_eq!(a, Alpha::HALF);
        assert_eq!(a.to_string(), "1/2");
    }

    #[test]
    fn bounds() {
        assert!(Alpha::new(0, 3).is_err());
        assert!(Alpha::new(4, 3).is_err());
        assert!(Alpha::new(1, 0).is_err());
        assert_eq!(Alpha::new(3, 3), Ok(Alpha::ONE));
    }

    #[test]
    fn parsing() {
        assert_eq!("2/3".parse(), Alpha::new(2, 3));
        assert_eq!(" 1/4 ".parse(), Alpha::new(1, 4));
        assert!(matches!(
            "3/2".parse::<Alpha>(),
            Err(AlphaError::OutOfRange { .. })
        ));
        assert!(matches!(
            "0.5".parse::<Alpha>(),
            Err(AlphaError::Decimal(_))
        ));
        assert!(matches!(
            "half".parse::<Alpha>(),
            Err(AlphaError::Malformed(_))
        ));
        assert!(matches!(
            "1/x".parse::<Alpha>(),
            Err(AlphaError::Malformed(_))
        ));
        assert!(matches!(
            "-1/2".parse::<Alpha>(),
            Err(AlphaError::Malformed(_))
        ));
    }

    #[test]
    fn boundary_is_inclusive() {
        let third = Alpha::new(1, 3).unwrap();
        assert!(third.is_met_by(1, 3));
        assert!(third.is_met_by(2, 6));
        assert!(!third.is_met_by(0, 3));
        assert!(!third.is_met_by(-1, 3));
        assert!(Alpha::ONE.is_met_by(4, 4));
        assert!(!Alpha::ONE.is_met_by(3, 4));
    }

    #[test]
    fn grid_of_tenths() {
        let g = Alpha::grid(10);
        assert_eq!(g.len(), 9);
        assert_eq!(g[4], Alpha::HALF);
        assert_eq!(g[8].to_string(), "9/10");
    }
}
