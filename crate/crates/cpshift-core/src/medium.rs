use crate::constants::SI;
use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    pub fn flipped(self) -> Self {
        match self {
            Handedness::Left => Handedness::Right,
            Handedness::Right => Handedness::Left,
        }
    }

    /// +1 for Left, −1 for Right.
    pub fn sign(self) -> f64 {
        match self {
            Handedness::Left => 1.0,
            Handedness::Right => -1.0,
        }
    }
}

/// Sign of the crossed coefficients r_ps = r_sp of a perfectly reflecting nonreciprocal mirror.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MirrorSign {
    Plus,
    Minus,
}

impl MirrorSign {
    pub fn value(self) -> f64 {
        match self {
            MirrorSign::Plus => 1.0,
            MirrorSign::Minus => -1.0,
        }
    }
}

/// Strong 3D topological insulator with real constant ε₂, μ₂ and topological parameter Δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiParams {
    eps2: f64,
    mu2: f64,
    delta: f64,
}

impl TiParams {
    pub fn eps2(&self) -> f64 {
        self.eps2
    }
    pub fn mu2(&self) -> f64 {
        self.mu2
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Isotropic chiral medium with (possibly complex) ε₂, μ₂ and chirality κ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralParams {
    eps2: Complex64,
    mu2: Complex64,
    kappa2: Complex64,
}

impl ChiralParams {
    pub fn eps2(&self) -> Complex64 {
        self.eps2
    }
    pub fn mu2(&self) -> Complex64 {
        self.mu2
    }
    pub fn kappa2(&self) -> Complex64 {
        self.kappa2
    }
    /// Refractive index n = √(ε₂μ₂), principal branch.
    pub fn index(&self) -> Complex64 {
        (self.eps2 * self.mu2).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MediumSpec {
    PerfectConductor,
    NonreciprocalMirror(MirrorSign),
    TopologicalInsulator(TiParams),
    ChiralMirror(Handedness),
    IsotropicChiral(ChiralParams),
}

impl MediumSpec {
    pub fn topological_insulator(eps2: f64, mu2: f64, delta: f64) -> Result<Self> {
        if !(eps2.is_finite() && eps2 >= 1.0) {
            return Err(Error::InvalidMedium(format!("TI eps2 must be >= 1, got {eps2}")));
        }
        if !(mu2.is_finite() && mu2 > 0.0) {
            return Err(Error::InvalidMedium(format!("TI mu2 must be > 0, got {mu2}")));
        }
        if !(delta.is_finite() && delta.abs() < 1.0) {
            return Err(Error::InvalidMedium(format!("TI requires |delta| < 1, got {delta}")));
        }
        Ok(MediumSpec::TopologicalInsulator(TiParams { eps2, mu2, delta }))
    }

    /// Vacuum/strong-TI interface with Δ = α(2m+1).
    pub fn topological_insulator_from_m(eps2: f64, mu2: f64, m: i32) -> Result<Self> {
        let delta = SI.alpha_fs * f64::from(2 * m + 1);
        Self::topological_insulator(eps2, mu2, delta)
    }

    pub fn isotropic_chiral(eps2: Complex64, mu2: Complex64, kappa2: Complex64) -> Result<Self> {
        let finite = |c: Complex64| c.re.is_finite() && c.im.is_finite();
        if !(finite(eps2) && finite(mu2) && finite(kappa2)) {
            return Err(Error::InvalidMedium("non-finite chiral parameter".into()));
        }
        if eps2.re <= 0.0 || mu2.re <= 0.0 {
            return Err(Error::InvalidMedium(
                "chiral medium requires Re eps2 > 0 and Re mu2 > 0".into(),
            ));
        }
        let n = (eps2 * mu2).sqrt();
        if kappa2.norm() >= n.norm() || (n + kappa2).re <= 0.0 || (n - kappa2).re <= 0.0 {
            return Err(Error::InvalidMedium(format!(
                "chiral medium requires |kappa2| < |sqrt(eps2 mu2)| with both indices Re > 0 (kappa2 = {kappa2})"
            )));
        }
        Ok(MediumSpec::IsotropicChiral(ChiralParams { eps2, mu2, kappa2 }))
    }

    pub fn isotropic_chiral_real(eps2: f64, mu2: f64, kappa2: f64) -> Result<Self> {
        Self::isotropic_chiral(eps2.into(), mu2.into(), kappa2.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MediumSpec::PerfectConductor => "perfect-conductor",
            MediumSpec::NonreciprocalMirror(_) => "nonreciprocal-mirror",
            MediumSpec::TopologicalInsulator(_) => "topological-insulator",
            MediumSpec::ChiralMirror(_) => "chiral-mirror",
            MediumSpec::IsotropicChiral(_) => "isotropic-chiral",
        }
    }

    /// Ideal mirrors have (ω, k∥)-independent reflection matrices.
    pub fn is_ideal(&self) -> bool {
        matches!(
            self,
            MediumSpec::PerfectConductor | MediumSpec::NonreciprocalMirror(_) | MediumSpec::ChiralMirror(_)
        )
    }

    /// Whether the medium obeys Lorentz reciprocity.
    pub fn is_reciprocal(&self) -> bool {
        match self {
            MediumSpec::PerfectConductor | MediumSpec::ChiralMirror(_) | MediumSpec::IsotropicChiral(_) => true,
            MediumSpec::NonreciprocalMirror(_) => false,
            MediumSpec::TopologicalInsulator(p) => p.delta == 0.0,
        }
    }

    /// Same medium with the parity-odd parameter reversed (Δ, κ₂, handedness, mirror sign).
    pub fn mirrored(&self) -> Self {
        match *self {
            MediumSpec::PerfectConductor => MediumSpec::PerfectConductor,
            MediumSpec::NonreciprocalMirror(s) => MediumSpec::NonreciprocalMirror(match s {
                MirrorSign::Plus => MirrorSign::Minus,
                MirrorSign::Minus => MirrorSign::Plus,
            }),
            MediumSpec::TopologicalInsulator(p) => {
                MediumSpec::TopologicalInsulator(TiParams { delta: -p.delta, ..p })
            }
            MediumSpec::ChiralMirror(h) => MediumSpec::ChiralMirror(h.flipped()),
            MediumSpec::IsotropicChiral(p) => {
                MediumSpec::IsotropicChiral(ChiralParams { kappa2: -p.kappa2, ..p })
            }
        }
    }
}
