use crate::error::{Error, Result};
use crate::vector::Complex3Vector;

/// Transition n → k: dipole d_nk (C·m, with d_kn = d_nk*) and shifted frequency ω̃_nk (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSpec {
    dipole: Complex3Vector,
    omega_nk: f64,
    pub label: String,
}

impl TransitionSpec {
    pub fn new(dipole: Complex3Vector, omega_nk: f64, label: impl Into<String>) -> Result<Self> {
        if !dipole.is_finite() || dipole.is_zero() {
            return Err(Error::InvalidInput("dipole must be finite and nonzero".into()));
        }
        if !omega_nk.is_finite() {
            return Err(Error::InvalidInput("omega_nk must be finite".into()));
        }
        Ok(Self { dipole, omega_nk, label: label.into() })
    }

    pub fn dipole(&self) -> Complex3Vector {
        self.dipole
    }

    pub fn omega_nk(&self) -> f64 {
        self.omega_nk
    }

    pub fn with_omega(&self, omega_nk: f64) -> Result<Self> {
        Self::new(self.dipole, omega_nk, self.label.clone())
    }
}

/// Atom position above the interface and in-plane velocity (v_z = 0 by construction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomKinematics {
    z_a: f64,
    v_parallel: [f64; 2],
}

impl AtomKinematics {
    pub fn new(z_a: f64, v_parallel: [f64; 2]) -> Result<Self> {
        if !(z_a.is_finite() && z_a > 0.0) {
            return Err(Error::InvalidInput(format!("z_A must be > 0, got {z_a}")));
        }
        if !v_parallel.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("velocity must be finite".into()));
        }
        Ok(Self { z_a, v_parallel })
    }

    pub fn z_a(&self) -> f64 {
        self.z_a
    }

    pub fn v_parallel(&self) -> [f64; 2] {
        self.v_parallel
    }

    pub fn speed(&self) -> f64 {
        self.v_parallel[0].hypot(self.v_parallel[1])
    }

    pub fn velocity(&self) -> Complex3Vector {
        Complex3Vector::from_parallel(self.v_parallel)
    }

    pub fn with_z(&self, z_a: f64) -> Result<Self> {
        Self::new(z_a, self.v_parallel)
    }

    pub fn with_velocity(&self, v_parallel: [f64; 2]) -> Result<Self> {
        Self::new(self.z_a, v_parallel)
    }
}

/// True iff |v∥·d| ≤ tol·|v∥|·|d|; trivially true for v∥ = 0.
pub fn validate_transversality(t: &TransitionSpec, k: &AtomKinematics, tol: f64) -> bool {
    let v = k.velocity();
    let speed = k.speed();
    if speed == 0.0 {
        return true;
    }
    let d = t.dipole();
    v.dot(d).norm() <= tol * speed * d.norm()
}
