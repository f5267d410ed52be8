//! Work limits for enumerations whose cost grows exponentially in the
//! dimension (exact star discrepancy, grid cover radius, net verification).

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "SFDESIGN_BUDGET";

/// Default cap on elementary evaluations.
pub const DEFAULT_BUDGET: u128 = 500_000_000;

/// The budget from `SFDESIGN_BUDGET`, or the default when unset or unparsable.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}
