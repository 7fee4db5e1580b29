//! Process-wide enumeration ceiling.
//!
//! Every exhaustive enumeration (structures, premises, candidate models)
//! checks the number of free ground atoms against this ceiling before it
//! starts, and fails with [`Error::EnumerationTooLarge`] instead of hanging.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_ATOM_CEILING: usize = 24;

/// Environment variable overriding the default ceiling.
pub const CEILING_ENV: &str = "MODSYS_ATOM_CEILING";

// 0 means "not yet initialised from the environment".
static CEILING: AtomicUsize = AtomicUsize::new(0);
static ENV_INIT: OnceLock<usize> = OnceLock::new();

fn from_env() -> usize {
    *ENV_INIT.get_or_init(|| {
        std::env::var(CEILING_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_ATOM_CEILING)
    })
}

pub fn atom_ceiling() -> usize {
    match CEILING.load(Ordering::Relaxed) {
        0 => from_env(),
        n => n,
    }
}

/// Overrides the ceiling for the rest of the process.
pub fn set_atom_ceiling(ceiling: usize) {
    CEILING.store(ceiling.clamp(1, 63), Ordering::Relaxed);
}

pub(crate) fn guard(atoms: usize) -> Result<()> {
    guard_with(atoms, atom_ceiling())
}

pub(crate) fn guard_with(atoms: usize, ceiling: usize) -> Result<()> {
    // 2^64 candidates never fit a u64 counter either.
    let ceiling = ceiling.min(63);
    if atoms > ceiling {
        Err(Error::EnumerationTooLarge { atoms, ceiling })
    } else {
        Ok(())
    }
}
