//! Prevalence ratings and their probability mappings.
//!
//! Ratings follow the standard 1-4 attestation scale:
//! 1 = attested absence, 2 = exists but rare, 3 = common but not required,
//! 4 = pervasive or obligatory.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prevalence rating in 1..=4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Rating(u8);

impl Rating {
    pub const ABSENT: Rating = Rating(1);
    pub const RARE: Rating = Rating(2);
    pub const COMMON: Rating = Rating(3);
    pub const OBLIGATORY: Rating = Rating(4);

    pub fn new(value: u8) -> Result<Rating> {
        if (1..=4).contains(&value) {
            Ok(Rating(value))
        } else {
            Err(Error::Validation(format!(
                "rating {value} outside the 1..4 scale"
            )))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Rating {
    type Error = Error;
    fn try_from(value: u8) -> Result<Self> {
        Rating::new(value)
    }
}

impl From<Rating> for u8 {
    fn from(r: Rating) -> u8 {
        r.0
    }
}

impl std::fmt::Display for Rating {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Probability that a rule with this rating is injected into a transformation:
/// 4 → 1.0, 3 → 0.6, 2 → 0.3, 1 → 0.0.
pub fn rating_to_injection_prob(rating: Rating) -> f64 {
    match rating.value() {
        4 => 1.0,
        3 => 0.6,
        2 => 0.3,
        _ => 0.0,
    }
}

/// Probability that an applied change with this rating is reverted during
/// quality control: 4 → 0.0, 3 → 0.4, 2 → 0.7, 1 → 1.0.
pub fn rating_to_reversion_prob(rating: Rating) -> f64 {
    match rating.value() {
        4 => 0.0,
        3 => 0.4,
        2 => 0.7,
        _ => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: u8) -> Rating {
        Rating::new(v).unwrap()
    }

    #[test]
    fn injection_table_exact() {
        assert_eq!(rating_to_injection_prob(r(4)), 1.0);
        assert_eq!(rating_to_injection_prob(r(3)), 0.6);
        assert_eq!(rating_to_injection_prob(r(2)), 0.3);
        assert_eq!(rating_to_injection_prob(r(1)), 0.0);
    }

    #[test]
    fn reversion_table_exact() {
        assert_eq!(rating_to_reversion_prob(r(4)), 0.0);
        assert_eq!(rating_to_reversion_prob(r(3)), 0.4);
        assert_eq!(rating_to_reversion_prob(r(2)), 0.7);
        assert_eq!(rating_to_reversion_prob(r(1)), 1.0);
    }

    #[test]
    fn monotone_and_complementary_extremes() {
        let probs: Vec<f64> = (1..=4).map(|v| rating_to_injection_prob(r(v))).collect();
        assert!(probs.windows(2).all(|w| w[0] <= w[1]));
        let revs: Vec<f64> = (1..=4).map(|v| rating_to_reversion_prob(r(v))).collect();
        assert!(revs.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(rating_to_injection_prob(r(1)), 0.0);
        assert_eq!(rating_to_reversion_prob(r(1)), 1.0);
        assert_eq!(rating_to_injection_prob(r(4)), 1.0);
        assert_eq!(rating_to_reversion_prob(r(4)), 0.0);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(Rating::new(0).is_err());
        assert!(Rating::new(5).is_err());
        assert!(Rating::new(7).is_err());
    }
}
