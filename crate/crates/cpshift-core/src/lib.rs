//! Domain types, SI constants and validation shared by the cpshift crates.

pub mod constants;
pub mod error;
pub mod medium;
pub mod transition;
pub mod vector;

pub use constants::{PhysicalConstants, SI};
pub use error::{Error, Result};
pub use medium::{ChiralParams, Handedness, MediumSpec, MirrorSign, TiParams};
pub use transition::{validate_transversality, AtomKinematics, TransitionSpec};
pub use vector::{contract, mat_transpose, Complex3Vector, Matrix3, ZERO_MATRIX};

pub use num_complex::Complex64;

/// Asymptotic regime of the atom-surface distance relative to the transition wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// ω̃z/c ≫ 1
    Retarded,
    /// ω̃z/c ≪ 1
    Nonretarded,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Retarded => write!(f, "retarded"),
            Regime::Nonretarded => write!(f, "nonretarded"),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "retarded" | "ret" => Ok(Regime::Retarded),
            "nonretarded" | "nret" => Ok(Regime::Nonretarded),
            other => Err(Error::InvalidInput(format!("unknown regime '{other}'"))),
        }
    }
}
