//! Closed-form retarded and nonretarded limits of the frequency-shift contributions for
//! the five media, evaluated as published.
//!
//! Departures from the printed expressions are limited to dimensional repairs and one
//! index reading. The retarded velocity terms of both chiral media carry c³ where c² is
//! printed. The retarded resonant |d_z|² term of the chiral medium carries c in the
//! numerator. The rotatory strength R_kn of the chiral-medium velocity term is read as R_nk,
//! which makes the chiral-mirror limit agree with the mirror formula.

use cpshift_atom::{geometric_field_z, rotatory_responses};
use cpshift_core::{AtomKinematics, Error, Handedness, MediumSpec, Regime, Result, TransitionSpec, SI};
use cpshift_fresnel::{reflection_limit, ReflectionMatrix};
use cpshift_greens::{green_closed, moments_constant};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Above this ω̃z/c the retarded forms are considered valid.
pub const RETARDED_THRESHOLD: f64 = 5.0;
/// Below this ω̃z/c the nonretarded forms are considered valid.
pub const NONRETARDED_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contribution {
    Resonant,
    Nonresonant,
    Velocity,
}

impl std::fmt::Display for Contribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Resonant => "resonant",
            Self::Nonresonant => "nonresonant",
            Self::Velocity => "velocity",
        })
    }
}

impl std::str::FromStr for Contribution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "resonant" | "res" => Ok(Self::Resonant),
            "nonresonant" | "nres" => Ok(Self::Nonresonant),
            "velocity" | "v" => Ok(Self::Velocity),
            other => Err(Error::InvalidInput(format!("unknown contribution '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticRequest {
    pub medium: MediumSpec,
    pub regime: Regime,
    pub contribution: Contribution,
    pub transition: TransitionSpec,
    pub kinematics: AtomKinematics,
}

/// A limit value together with an optional regime-validity warning.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitValue {
    pub value: f64,
    pub warning: Option<String>,
}

/// Warning text when ω̃z/c lies outside the window of the requested regime.
pub fn regime_warning(regime: Regime, omega: f64, z: f64) -> Option<String> {
    let x = omega.abs() * z / SI.c;
    match regime {
        Regime::Retarded if x <= RETARDED_THRESHOLD => {
            Some(format!("retarded form used at omega*z/c = {x:.3e} (<= {RETARDED_THRESHOLD})"))
        }
        Regime::Nonretarded if x >= NONRETARDED_THRESHOLD => {
            Some(format!("nonretarded form used at omega*z/c = {x:.3e} (>= {NONRETARDED_THRESHOLD})"))
        }
        _ => None,
    }
}

/// Atomic quantities entering the limit formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomTerms {
    pub d_par_sq: f64,
    pub d_z_sq: f64,
    pub b_z: f64,
    pub s: f64,
    pub t: f64,
    pub r: f64,
    pub omega: f64,
    pub z: f64,
}

impl AtomTerms {
    pub fn new(t: &TransitionSpec, k: &AtomKinematics) -> Self {
        let d = t.dipole();
        let resp = rotatory_responses(d, k.v_parallel());
        Self {
            d_par_sq: d.parallel_norm_sqr(),
            d_z_sq: d.z.norm_sqr(),
            b_z: geometric_field_z(d),
            s: resp.s,
            t: resp.t,
            r: resp.r,
            omega: t.omega_nk(),
            z: k.z_a(),
        }
    }

    pub fn d_sq(&self) -> f64 {
        self.d_par_sq + self.d_z_sq
    }

    fn phase(&self) -> (f64, f64) {
        (2.0 * self.omega * self.z / SI.c).sin_cos()
    }
}

#[allow(non_snake_case)]
fn HB_E() -> f64 {
    SI.hbar * SI.eps0
}

/// Conductor forms.
pub fn conductor(a: &AtomTerms, regime: Regime, c: Contribution) -> f64 {
    let (w, z, cl) = (a.omega, a.z, SI.c);
    let (sin, cos) = a.phase();
    let mu = SI.mu0 / SI.hbar;
    match (regime, c) {
        (Regime::Retarded, Contribution::Resonant) => {
            mu * w * w / (8.0 * PI) * (a.d_par_sq * cos / z - cl * a.d_z_sq * sin / (w * z * z))
        }
        (Regime::Retarded, Contribution::Nonresonant) => cl * a.d_sq() / (32.0 * PI * PI * HB_E() * w * z.powi(4)),
        (Regime::Retarded, Contribution::Velocity) => mu * w * w * a.s / (4.0 * PI * cl * z) * sin,
        (Regime::Nonretarded, Contribution::Resonant) => {
            -(0.5 * a.d_par_sq + a.d_z_sq) / (16.0 * PI * HB_E() * z.powi(3))
        }
        (Regime::Nonretarded, Contribution::Nonresonant) => {
            (0.5 * a.d_par_sq + a.d_z_sq) / (32.0 * PI * PI * HB_E() * z.powi(3))
        }
        (Regime::Nonretarded, Contribution::Velocity) => mu * w * a.s / (8.0 * PI * z * z),
    }
}

/// Nonreciprocal-mirror forms for r_sp = r_ps = −1.
pub fn nonreciprocal(a: &AtomTerms, regime: Regime, c: Contribution) -> f64 {
    let (w, z, cl) = (a.omega, a.z, SI.c);
    let (sin, cos) = a.phase();
    let mu = SI.mu0 / SI.hbar;
    match (regime, c) {
        (Regime::Retarded, Contribution::Resonant) => -mu * w * w * a.b_z / (4.0 * PI * z) * sin,
        (Regime::Retarded, Contribution::Nonresonant) => {
            -3.0 * cl * cl * a.b_z / (32.0 * PI * PI * HB_E() * w * w * z.powi(5))
        }
        (Regime::Retarded, Contribution::Velocity) => mu * w * w / (4.0 * PI * cl * z) * a.t * cos,
        (Regime::Nonretarded, Contribution::Resonant) => -mu * cl * w / (8.0 * PI * z * z) * a.b_z,
        (Regime::Nonretarded, Contribution::Nonresonant) => -a.b_z / (16.0 * PI * PI * HB_E() * z.powi(3)),
        (Regime::Nonretarded, Contribution::Velocity) => -a.t / (16.0 * PI * HB_E() * cl * z.powi(3)),
    }
}

/// TI forms with limit coefficients r (r_sp = r_ps).
pub fn topological_insulator(a: &AtomTerms, r: &ReflectionMatrix, regime: Regime, c: Contribution) -> f64 {
    let (w, z, cl) = (a.omega, a.z, SI.c);
    let (sin, cos) = a.phase();
    let mu = SI.mu0 / SI.hbar;
    let (ss, sp, pp) = (r.ss.re, r.sp.re, r.pp.re);
    match (regime, c) {
        (Regime::Retarded, Contribution::Resonant) => {
            mu * w * w / (4.0 * PI)
                * (a.b_z * sp / z * sin + a.d_par_sq * pp / (2.0 * z) * cos
                    - cl * pp * a.d_z_sq / (2.0 * w * z * z) * sin)
        }
        (Regime::Retarded, Contribution::Nonresonant) => {
            cl / (32.0 * PI * PI * HB_E() * w * z.powi(4)) * (a.b_z * 3.0 * cl * sp / (w * z) + pp * a.d_sq())
        }
        (Regime::Retarded, Contribution::Velocity) => mu * w * w / (4.0 * PI * cl * z) * sp * a.t * cos,
        (Regime::Nonretarded, Contribution::Resonant) => {
            // ω̃² multiplied through so that ω̃ → 0 stays finite
            mu / (8.0 * PI)
                * (a.b_z * sp * cl * w / (z * z)
                    + a.d_par_sq * (ss * w * w / (2.0 * z) + pp * cl * cl / z.powi(3))
                    + cl * cl * pp * a.d_z_sq / (2.0 * z.powi(3)))
        }
        (Regime::Nonretarded, Contribution::Nonresonant) => {
            (a.b_z * sp + pp * PI * (a.d_par_sq / 4.0 + a.d_z_sq / 2.0)) / (16.0 * PI * PI * HB_E() * z.powi(3))
        }
        (Regime::Nonretarded, Contribution::Velocity) => sp * a.t / (16.0 * PI * HB_E() * cl * z.powi(3)),
    }
}

/// Chiral-mirror forms; Left takes the upper sign.
pub fn chiral_mirror(a: &AtomTerms, h: Handedness, regime: Regime, c: Contribution) -> f64 {
    let (w, z, cl) = (a.omega, a.z, SI.c);
    let (_, cos) = a.phase();
    let pm = h.sign();
    match (regime, c) {
        (_, Contribution::Resonant | Contribution::Nonresonant) => 0.0,
        (Regime::Retarded, Contribution::Velocity) => pm * w * w * a.r / (4.0 * PI * HB_E() * cl.powi(3) * z) * cos,
        (Regime::Nonretarded, Contribution::Velocity) => -pm * a.r / (8.0 * PI * HB_E() * cl * z.powi(3)),
    }
}

/// Isotropic chiral-medium forms with limit coefficients r (r_ps = −r_sp).
pub fn chiral_medium(a: &AtomTerms, r: &ReflectionMatrix, regime: Regime, c: Contribution) -> f64 {
    let (w, z, cl) = (a.omega, a.z, SI.c);
    let (sin, cos) = a.phase();
    let mu = SI.mu0 / SI.hbar;
    let (ss, sp, pp) = (r.ss, r.sp, r.pp);
    let diff = pp - ss;
    match (regime, c) {
        (Regime::Retarded, Contribution::Resonant) => {
            mu * w * w * a.d_par_sq / (16.0 * PI * z) * (cos * diff.re + sin * diff.im)
                - mu * w * cl * a.d_z_sq / (8.0 * PI * z * z) * (pp.re * sin + pp.im * cos)
        }
        (Regime::Retarded, Contribution::Nonresonant) => {
            cl * cl / (32.0 * PI * PI * HB_E() * w * w * z.powi(5))
                * (a.d_par_sq / 4.0 * (-diff).im - a.d_z_sq * pp.im)
                - cl / (32.0 * PI * PI * HB_E() * w * z.powi(4)) * (a.d_par_sq / 2.0 * (-diff).re - a.d_z_sq * pp.re)
        }
        (Regime::Retarded, Contribution::Velocity) => {
            w * w * a.r / (4.0 * PI * HB_E() * cl.powi(3) * z) * (sp.re * sin + sp.im * cos)
        }
        (Regime::Nonretarded, Contribution::Resonant) => {
            mu / (8.0 * PI)
                * (a.d_par_sq * (ss.re * w * w / (2.0 * z) + pp.re * cl * cl / z.powi(3))
                    + cl * cl * pp.re * a.d_z_sq / (2.0 * z.powi(3)))
        }
        (Regime::Nonretarded, Contribution::Nonresonant) => {
            pp.re / (16.0 * PI * HB_E() * z.powi(3)) * (a.d_par_sq / 4.0 + a.d_z_sq / 2.0)
        }
        (Regime::Nonretarded, Contribution::Velocity) => a.r * sp.im / (8.0 * PI * HB_E() * cl * z.powi(3)),
    }
}

/// Published limit value of one contribution.
pub fn limit_shift(req: &AsymptoticRequest) -> Result<LimitValue> {
    let a = AtomTerms::new(&req.transition, &req.kinematics);
    let warning = regime_warning(req.regime, a.omega, a.z);
    if req.regime == Regime::Retarded && a.omega == 0.0 {
        return Err(Error::MissingFrequency);
    }
    if req.contribution == Contribution::Resonant && a.omega <= 0.0 {
        return Ok(LimitValue { value: 0.0, warning });
    }
    let (regime, c) = (req.regime, req.contribution);
    let value = match &req.medium {
        MediumSpec::PerfectConductor => conductor(&a, regime, c),
        MediumSpec::NonreciprocalMirror(s) => -s.value() * nonreciprocal(&a, regime, c),
        MediumSpec::TopologicalInsulator(_) => {
            topological_insulator(&a, &reflection_limit(&req.medium, regime)?, regime, c)
        }
        MediumSpec::ChiralMirror(h) => chiral_mirror(&a, *h, regime, c),
        MediumSpec::IsotropicChiral(_) => chiral_medium(&a, &reflection_limit(&req.medium, regime)?, regime, c),
    };
    Ok(LimitValue { value, warning })
}

/// (2μ₀/ħ)ω̃² Im[d·G·d*] with the closed-form tensor of an ideal mirror or the
/// constant-coefficient tensor built from the limit coefficients of a TI or chiral medium.
pub fn limit_decay_rate(req: &AsymptoticRequest) -> Result<LimitValue> {
    let w = req.transition.omega_nk();
    let z = req.kinematics.z_a();
    let warning = regime_warning(req.regime, w, z);
    if w <= 0.0 {
        return Ok(LimitValue { value: 0.0, warning });
    }
    let omega = Complex64::from(w);
    let g = if req.medium.is_ideal() {
        green_closed(&req.medium, z, omega)?.value
    } else {
        moments_constant(&reflection_limit(&req.medium, req.regime)?, z, omega)?.plain()
    };
    let d = req.transition.dipole();
    let q = cpshift_core::contract(d, &g, d.conj());
    Ok(LimitValue { value: 2.0 * SI.mu0 / SI.hbar * w * w * q.im, warning })
}
