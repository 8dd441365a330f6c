//! Atomic response quantities: hydrogenic Rydberg dipoles, the geometric field 𝓑_z,
//! the rotatory scalars S, T, R and the motion-induced magnetic moment.

use cpshift_core::{Complex3Vector, Error, Result, TransitionSpec, SI};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RydbergKind {
    /// |n̄00⟩ → |n̄11⟩, circular dipole orthogonal to the quantization axis
    M1Circular,
    /// |n̄00⟩ → |n̄10⟩, linear dipole along the quantization axis
    M0Linear,
}

impl std::str::FromStr for RydbergKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m1_circular" | "circular" => Ok(Self::M1Circular),
            "m0_linear" | "linear" => Ok(Self::M0Linear),
            other => Err(Error::InvalidInput(format!("unknown transition kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RydbergTransition {
    n_bar: u32,
    kind: RydbergKind,
    axis: [f64; 3],
}

impl RydbergTransition {
    /// The axis is normalised; it must be finite and nonzero.
    pub fn new(n_bar: u32, kind: RydbergKind, axis: [f64; 3]) -> Result<Self> {
        if n_bar < 2 {
            return Err(Error::InvalidInput(format!("n_bar must be >= 2, got {n_bar}")));
        }
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidInput("quantization axis must be finite and nonzero".into()));
        }
        Ok(Self { n_bar, kind, axis: axis.map(|a| a / norm) })
    }

    pub fn n_bar(&self) -> u32 {
        self.n_bar
    }

    pub fn kind(&self) -> RydbergKind {
        self.kind
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }
}

/// |d|² = e²a₀²·(3/4)·n̄²(n̄²−1).
pub fn hydrogen_dipole_sq(n_bar: u32) -> f64 {
    let n2 = f64::from(n_bar).powi(2);
    (SI.e_charge * SI.a0).powi(2) * 0.75 * n2 * (n2 - 1.0)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Right-handed frame (ê₁, ê₂) completing a unit axis; ê₁ is the projection of ẑ
/// (or x̂ when the axis is close to ẑ).
pub fn transverse_frame(axis: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let reference = if axis[2].abs() > 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 0.0, 1.0] };
    let p: f64 = reference.iter().zip(axis).map(|(r, a)| r * a).sum();
    let mut e1 = [0.0; 3];
    for i in 0..3 {
        e1[i] = reference[i] - p * axis[i];
    }
    let n = e1.iter().map(|x| x * x).sum::<f64>().sqrt();
    let e1 = e1.map(|x| x / n);
    (e1, cross(axis, e1))
}

/// Transition dipole of the Rydberg pair with ω̃_nk = 0 (degenerate manifold).
pub fn hydrogen_dipole(t: &RydbergTransition) -> TransitionSpec {
    let d0 = hydrogen_dipole_sq(t.n_bar).sqrt();
    let v = match t.kind {
        RydbergKind::M0Linear => {
            let a = t.axis;
            Complex3Vector::real(d0 * a[0], d0 * a[1], d0 * a[2])
        }
        RydbergKind::M1Circular => {
            let (e1, e2) = transverse_frame(t.axis);
            let s = d0 / 2f64.sqrt();
            Complex3Vector::from_array(std::array::from_fn(|i| Complex64::new(s * e1[i], s * e2[i])))
        }
    };
    let label = format!("n={} {:?}", t.n_bar, t.kind);
    TransitionSpec::new(v, 0.0, label).expect("hydrogenic dipole is finite and nonzero")
}

/// 𝓑_z = Im(d_x d_y*).
pub fn geometric_field_z(d: Complex3Vector) -> f64 {
    (d.x * d.y.conj()).im
}

/// m = −v × d.
pub fn effective_magnetic_moment(d: Complex3Vector, v: [f64; 2]) -> Complex3Vector {
    -Complex3Vector::from_parallel(v).cross(d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatoryResponses {
    pub s: f64,
    pub t: f64,
    pub r: f64,
    pub b_z: f64,
}

pub fn rotatory_responses(d: Complex3Vector, v: [f64; 2]) -> RotatoryResponses {
    let vv = Complex3Vector::from_parallel(v);
    let dz_conj = d.z.conj();
    let s = (dz_conj * d.dot(vv)).im;
    let p = dz_conj * vv.cross(d).z;
    RotatoryResponses { s, t: p.re, r: p.im, b_z: geometric_field_z(d) }
}
