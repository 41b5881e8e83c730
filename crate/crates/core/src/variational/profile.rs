use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::INV_E;

/// Names of the closed-form continuum optimizers.
///
/// `*G` profiles are densities (the continuum version of the LP variables),
/// `*U` and `*V` are their first and second antiderivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProfileTag {
    ToyG,
    BalanceG,
    BalanceU,
    BalanceV,
    RankingG,
    RankingU,
    SecretaryG,
    SecretaryU,
}

impl ProfileTag {
    pub const ALL: [ProfileTag; 8] = [
        ProfileTag::ToyG,
        ProfileTag::BalanceG,
        ProfileTag::BalanceU,
        ProfileTag::BalanceV,
        ProfileTag::RankingG,
        ProfileTag::RankingU,
        ProfileTag::SecretaryG,
        ProfileTag::SecretaryU,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileTag::ToyG => "ToyG",
            ProfileTag::BalanceG => "BalanceG",
            ProfileTag::BalanceU => "BalanceU",
            ProfileTag::BalanceV => "BalanceV",
            ProfileTag::RankingG => "RankingG",
            ProfileTag::RankingU => "RankingU",
            ProfileTag::SecretaryG => "SecretaryG",
            ProfileTag::SecretaryU => "SecretaryU",
        }
    }

    /// The LP family a density profile discretizes into; `None` for
    /// antiderivative profiles.
    pub fn g_family(self) -> Option<FamilyKind> {
        match self {
            ProfileTag::ToyG => Some(FamilyKind::Toy),
            ProfileTag::BalanceG => Some(FamilyKind::Balance),
            ProfileTag::RankingG => Some(FamilyKind::Ranking),
            ProfileTag::SecretaryG => Some(FamilyKind::Secretary),
            _ => None,
        }
    }
}

impl fmt::Display for ProfileTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProfileTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        ProfileTag::ALL
            .into_iter()
            .find(|t| t.as_str().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::invalid(format!("unknown profile `{s}`")))
    }
}

/// A closed-form function on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumProfile {
    pub tag: ProfileTag,
    /// Switch point of the secretary profiles; unused by the others.
    pub threshold: f64,
}

impl ContinuumProfile {
    pub fn new(tag: ProfileTag) -> Self {
        Self { tag, threshold: INV_E }
    }

    /// Evaluate at `t`, rejecting points outside `[0, 1]`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("profile argument {t} is outside [0, 1]")));
        }
        Ok(self.value(t))
    }

    /// Unchecked evaluation for hot loops; callers keep `t` in `[0, 1]`.
    pub fn value(&self, t: f64) -> f64 {
        let c = self.threshold;
        match self.tag {
            ProfileTag::ToyG | ProfileTag::BalanceG | ProfileTag::RankingG => (-t).exp(),
            ProfileTag::BalanceU | ProfileTag::RankingU => -(-t).exp_m1(),
            ProfileTag::BalanceV => (-t).exp_m1() + t,
            // Left-closed: the switch point itself belongs to the flat piece.
            ProfileTag::SecretaryG => {
                if t <= c {
                    0.0
                } else {
                    c / t
                }
            }
            ProfileTag::SecretaryU => {
                if t <= c {
                    0.0
                } else {
                    1.0 - c / t
                }
            }
        }
    }

    /// Points in `(0, 1)` where the profile is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.tag {
            ProfileTag::SecretaryG | ProfileTag::SecretaryU => vec![self.threshold],
            _ => Vec::new(),
        }
    }

    pub fn is_g_profile(&self) -> bool {
        self.tag.g_family().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ONE_MINUS_INV_E;

    fn p(tag: ProfileTag) -> ContinuumProfile {
        ContinuumProfile::new(tag)
    }

    #[test]
    fn endpoint_values() {
        assert!((p(ProfileTag::BalanceV).eval(1.0).unwrap() - INV_E).abs() < 1e-15);
        assert!((p(ProfileTag::RankingU).eval(1.0).unwrap() - ONE_MINUS_INV_E).abs() < 1e-15);
        assert_eq!(p(ProfileTag::SecretaryG).eval(0.2).unwrap(), 0.0);
        assert!((p(ProfileTag::SecretaryG).eval(0.5).unwrap() - 2.0 * INV_E).abs() < 1e-15);
        for tag in [ProfileTag::SecretaryU, ProfileTag::BalanceV, ProfileTag::RankingU, ProfileTag::BalanceU] {
            assert_eq!(p(tag).eval(0.0).unwrap(), 0.0, "{tag}");
        }
    }

    #[test]
    fn secretary_threshold_is_left_closed() {
        let g = p(ProfileTag::SecretaryG);
        assert_eq!(g.eval(INV_E).unwrap(), 0.0);
        assert!(g.eval(INV_E + 1e-12).unwrap() > 0.99);
    }

    #[test]
    fn out_of_domain_rejected() {
        assert!(p(ProfileTag::ToyG).eval(-1e-9).is_err());
        assert!(p(ProfileTag::ToyG).eval(1.0 + 1e-9).is_err());
        assert!(p(ProfileTag::ToyG).eval(f64::NAN).is_err());
    }

    #[test]
    fn antiderivative_chain() {
        // BalanceV' = BalanceU and BalanceU' = BalanceG, by central differences.
        let h = 1e-5;
        for k in 1..10 {
            let t = k as f64 / 10.0;
            let dv = (p(ProfileTag::BalanceV).value(t + h) - p(ProfileTag::BalanceV).value(t - h)) / (2.0 * h);
            let du = (p(ProfileTag::BalanceU).value(t + h) - p(ProfileTag::BalanceU).value(t - h)) / (2.0 * h);
            assert!((dv - p(ProfileTag::BalanceU).value(t)).abs() < 1e-9);
            assert!((du - p(ProfileTag::BalanceG).value(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn secretary_profile_is_bounded() {
        let g = p(ProfileTag::SecretaryG);
        for k in 0..=1000 {
            let v = g.value(k as f64 / 1000.0);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn tag_parsing() {
        assert_eq!("BalanceV".parse::<ProfileTag>().unwrap(), ProfileTag::BalanceV);
        assert_eq!("secretary-g".parse::<ProfileTag>().unwrap(), ProfileTag::SecretaryG);
        assert!("gaussian".parse::<ProfileTag>().is_err());
    }
}
