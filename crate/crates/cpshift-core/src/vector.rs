use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

pub type Matrix3 = [[Complex64; 3]; 3];

pub const ZERO_MATRIX: Matrix3 = [[Complex64::new(0.0, 0.0); 3]; 3];

/// Complex Cartesian 3-vector (dipole moments in C·m, magnetic moments in A·m²).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex3Vector {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl Complex3Vector {
    pub const fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { x, y, z }
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new(x.into(), y.into(), z.into())
    }

    pub fn from_array(a: [Complex64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    /// Bilinear product a·b without conjugation.
    pub fn dot(self, o: Self) -> Complex64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sqr(self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// |d_x|² + |d_y|²
    pub fn parallel_norm_sqr(self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr()
    }

    pub fn scale(self, s: Complex64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn is_zero(self) -> bool {
        self.norm_sqr() == 0.0
    }

    /// In-plane velocity (v_x, v_y) lifted to a 3-vector with v_z = 0.
    pub fn from_parallel(v: [f64; 2]) -> Self {
        Self::real(v[0], v[1], 0.0)
    }
}

impl Add for Complex3Vector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Complex3Vector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Complex3Vector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Complex3Vector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// a·M·b with no conjugation on either side.
pub fn contract(a: Complex3Vector, m: &Matrix3, b: Complex3Vector) -> Complex64 {
    let a = a.to_array();
    let b = b.to_array();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            acc += a[i] * m[i][j] * b[j];
        }
    }
    acc
}

pub fn mat_transpose(m: &Matrix3) -> Matrix3 {
    let mut t = ZERO_MATRIX;
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}
