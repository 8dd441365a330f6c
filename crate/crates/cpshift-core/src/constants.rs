/// CODATA 2018 values in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// speed of light, m/s
    pub c: f64,
    /// reduced Planck constant, J·s
    pub hbar: f64,
    /// vacuum permittivity, F/m
    pub eps0: f64,
    /// vacuum permeability, derived as 1/(ε₀c²)
    pub mu0: f64,
    /// elementary charge, C
    pub e_charge: f64,
    /// Bohr radius, m
    pub a0: f64,
    /// fine-structure constant
    pub alpha_fs: f64,
}

const C: f64 = 299_792_458.0;
const EPS0: f64 = 8.8541878128e-12;

pub const SI: PhysicalConstants = PhysicalConstants {
    c: C,
    hbar: 1.054_571_817e-34,
    eps0: EPS0,
    mu0: 1.0 / (EPS0 * C * C),
    e_charge: 1.602_176_634e-19,
    a0: 5.291_772_109_03e-11,
    alpha_fs: 7.297_352_569_3e-3,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        SI
    }
}
