use thiserror::Error;

/// Resource limits for the enumeration kernels.
///
/// Brute force over carriers and search spaces is the whole point of this
/// library, so infeasible inputs must fail fast with a typed error instead
/// of hanging. `max_carrier` bounds the order of any constructed group or
/// groupoid; `max_candidates` bounds the size of a search space (cocycle
/// candidates, homotopy-fixed-point candidates) for the strategy in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_carrier: usize,
    pub max_candidates: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 4096,
            max_candidates: 10_000_000,
        }
    }
}

impl Limits {
    pub fn check_carrier(&self, what: &str, needed: usize) -> Result<(), Error> {
        if needed > self.max_carrier {
            return Err(Error::SizeGuard {
                what: what.to_string(),
                needed: needed as u64,
                limit: self.max_carrier as u64,
            });
        }
        Ok(())
    }

    pub fn check_candidates(&self, what: &str, needed: u64) -> Result<(), Error> {
        if needed > self.max_candidates {
            return Err(Error::SizeGuard {
                what: what.to_string(),
                needed,
                limit: self.max_candidates,
            });
        }
        Ok(())
    }
}

/// Saturating product of a carrier size taken to a power, for guard checks.
pub fn sat_pow(base: usize, exp: u32) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u64);
    }
    acc
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{what} needs {needed} but the guard allows {limit}")]
    SizeGuard { what: String, needed: u64, limit: u64 },

    #[error("subgroup is not normal: conjugation by element {by} moves it")]
    NotNormal { by: usize },

    #[error("subgroup is not stable under the group action: gamma {gamma} moves it")]
    NotStable { gamma: usize },

    #[error("operation requires an abelian group: {0} does not commute")]
    NotAbelian(String),

    #[error("action is not free: {0}")]
    NotFree(String),

    #[error("bad coset representatives: {0}")]
    BadRepresentatives(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
