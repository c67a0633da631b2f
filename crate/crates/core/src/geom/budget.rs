use crate::error::{Error, Result};

/// Default cap on membership tests for one scan.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "TROPVOL_BUDGET";

/// Upper limit on the number of membership tests a scan may perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_tests: u64,
}

impl Budget {
    pub const fn new(max_tests: u64) -> Self {
        Self { max_tests }
    }

    pub const fn unlimited() -> Self {
        Self { max_tests: u64::MAX }
    }

    /// `TROPVOL_BUDGET` if set and valid, else the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse().ok())
            .map_or(Self::new(DEFAULT_BUDGET), Self::new)
    }

    pub fn check(&self, required: u128) -> Result<()> {
        if required > self.max_tests as u128 {
            Err(Error::BudgetExceeded {
                required,
                budget: self.max_tests,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::from_env()
    }
}
