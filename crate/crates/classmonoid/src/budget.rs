use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::Error;
use crate::Result;

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV_VAR: &str = "CLASSMONOID_MAX_DELTA";

/// Default ceiling on the number of matrices an exhaustive enumeration
/// may visit (`delta = |Omega_0|`).
pub const DEFAULT_MAX_DELTA: u64 = 10_000_000;

/// Resource budget for exhaustive enumerations.
///
/// Every brute-force route checks the budget *before* enumerating and
/// fails with [`Error::BudgetExceeded`] instead of silently truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_delta: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_delta: DEFAULT_MAX_DELTA,
        }
    }
}

impl Budget {
    pub fn new(max_delta: u64) -> Self {
        Budget { max_delta }
    }

    /// Default budget, honoring the `CLASSMONOID_MAX_DELTA` environment
    /// variable when set to a valid integer.
    pub fn from_env() -> Self {
        match std::env::var(BUDGET_ENV_VAR) {
            Ok(s) => match s.trim().parse::<u64>() {
                Ok(v) => Budget::new(v),
                Err(_) => Budget::default(),
            },
            Err(_) => Budget::default(),
        }
    }

    /// Checks that an enumeration of `delta` items is within budget and
    /// returns `delta` as a machine integer.
    pub fn check(&self, delta: &BigUint) -> Result<u64> {
        match delta.to_u64() {
            Some(d) if d <= self.max_delta => Ok(d),
            _ => Err(Error::BudgetExceeded {
                delta: delta.clone(),
                max: self.max_delta,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_accepts_within_budget() {
        let b = Budget::new(100);
        assert_eq!(b.check(&BigUint::from(100u32)).unwrap(), 100);
    }

    #[test]
    fn check_rejects_over_budget() {
        let b = Budget::new(100);
        let err = b.check(&BigUint::from(101u32)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
