use std::env;

/// Environment variable that overrides every enumeration limit at once.
pub const LIMIT_ENV: &str = "LATCLONE_LIMIT";

/// Caps on the exponential searches. Exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier accepted when constructing a lattice or semilattice.
    pub max_carrier: usize,
    /// Maximum number of tables in a clone slice.
    pub clone_slice: usize,
    /// Maximum number of tables in a centralizer slice.
    pub centralizer: usize,
    /// Maximum number of tuples produced by a closure computation.
    pub closure: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 16,
            clone_slice: 100_000,
            centralizer: 100_000,
            closure: 1_000_000,
        }
    }
}

impl Limits {
    /// Defaults, with the three enumeration limits replaced by `LATCLONE_LIMIT` when it is set.
    pub fn from_env() -> Result<Self, String> {
        let mut limits = Limits::default();
        if let Ok(raw) = env::var(LIMIT_ENV) {
            let value: usize = raw
                .trim()
                .parse()
                .map_err(|_| format!("{LIMIT_ENV} must be a non-negative integer, got {raw:?}"))?;
            limits.clone_slice = value;
            limits.centralizer = value;
            limits.closure = value;
        }
        Ok(limits)
    }
}
