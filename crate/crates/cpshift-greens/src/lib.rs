//! Scattering Green's tensor of a planar interface at coincident points r = r′ = (0, 0, z).
//!
//! The angular part of the k∥ integral is done in closed form, so every block is a
//! linear combination of twenty radial moments
//!
//! ```text
//! M[α][j] = ∫₀^∞ (k∥ dk∥ / k⊥) e^{2ik⊥z} r_α(ω, k∥) w_j,
//! α ∈ {ss, sp, ps, pp},  w_j ∈ {1, u, u², w², u·w²},  u = k⊥/k,  w = k∥/k,  k = ω/c.
//! ```
//!
//! Ideal mirrors have constant coefficients and the moments are elementary functions;
//! the other media are integrated numerically with the light line and the medium branch
//! points as breakpoints.

use cpshift_core::{Complex3Vector, Error, Matrix3, MediumSpec, Result, SI, ZERO_MATRIX};
use cpshift_fresnel::{branch_points, reflection, reflection_ideal, ReflectionMatrix, WaveKinematics};
use cpshift_quad::{integrate_finite, QuadValue, QuadratureConfig};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const SS: usize = 0;
pub const SP: usize = 1;
pub const PS: usize = 2;
pub const PP: usize = 3;

pub const W_ONE: usize = 0;
pub const W_U: usize = 1;
pub const W_U2: usize = 2;
pub const W_W2: usize = 3;
pub const W_UW2: usize = 4;

/// e^{−2κz} cut-off used to truncate the evanescent integrals.
const CUTOFF_EXPONENT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Plain,
    /// ∇×G, curl on the first argument
    CurlLeft,
    /// G×∇⃖′, curl on the second argument
    CurlRight,
    /// (v·∇′)G, lateral derivative on the second argument
    Lateral,
    DOmega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeWeight {
    PlainG,
    OmegaSquaredG,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensBlock {
    pub value: Matrix3,
    pub kind: BlockKind,
    pub omega: Complex64,
    pub z: f64,
    /// Absolute error bound carried over from the quadrature (0 for closed forms).
    pub error: f64,
}

impl GreensBlock {
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.value)
    }
}

pub fn max_abs(m: &Matrix3) -> f64 {
    m.iter().flatten().fold(0.0, |a, c| a.max(c.norm()))
}

/// The twenty radial moments at one (z, ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub m: [[Complex64; 5]; 4],
    /// k = ω/c
    pub k: Complex64,
    pub error: f64,
}

impl Moments {
    fn from_flat(flat: [Complex64; 20], k: Complex64, error: f64) -> Self {
        let m = std::array::from_fn(|a| std::array::from_fn(|j| flat[a * 5 + j]));
        Self { m, k, error }
    }

    /// Moments of a constant reflection matrix with the given radial weights.
    fn from_weights(r: &ReflectionMatrix, w: [Complex64; 5], k: Complex64) -> Self {
        let coef = r.to_array();
        let m = std::array::from_fn(|a| std::array::from_fn(|j| coef[a] * w[j]));
        Self { m, k, error: 0.0 }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let m = self.m.map(|row| row.map(|x| x * s));
        Self { m, k: self.k, error: self.error * s.norm() }
    }

    pub fn plain(&self) -> Matrix3 {
        let m = &self.m;
        let c0 = I / (8.0 * PI);
        let xx = c0 * (m[SS][W_ONE] - m[PP][W_U2]);
        let zz = c0 * 2.0 * m[PP][W_W2];
        let xy = c0 * (m[SP][W_U] + m[PS][W_U]);
        antisym_block(xx, zz, xy)
    }

    pub fn curl_left(&self) -> Matrix3 {
        let m = &self.m;
        let c0 = I * self.k * I / (8.0 * PI);
        let xx = c0 * (m[PS][W_ONE] + m[SP][W_U2]);
        let zz = c0 * (-2.0) * m[SP][W_W2];
        let xy = c0 * (m[PP][W_U] - m[SS][W_U]);
        antisym_block(xx, zz, xy)
    }

    pub fn curl_right(&self) -> Matrix3 {
        let m = &self.m;
        let c0 = -I * self.k * I / (8.0 * PI);
        let xx = c0 * (-m[SP][W_ONE] - m[PS][W_U2]);
        let zz = c0 * 2.0 * m[PS][W_W2];
        let xy = c0 * (m[SS][W_U] - m[PP][W_U]);
        antisym_block(xx, zz, xy)
    }

    /// (v·∇′)G with ∇′ acting on the second argument.
    pub fn lateral(&self, v: [f64; 2]) -> Matrix3 {
        let m = &self.m;
        let c0 = self.k / (8.0 * PI);
        let (vx, vy) = (v[0], v[1]);
        let mut out = ZERO_MATRIX;
        out[0][2] = c0 * (-vx * m[PP][W_UW2] + vy * m[SP][W_W2]);
        out[1][2] = c0 * (-vy * m[PP][W_UW2] - vx * m[SP][W_W2]);
        out[2][0] = c0 * (vx * m[PP][W_UW2] + vy * m[PS][W_W2]);
        out[2][1] = c0 * (vy * m[PP][W_UW2] - vx * m[PS][W_W2]);
        out
    }

    /// (v·∇)G with ∇ acting on the first argument.
    pub fn lateral_first(&self, v: [f64; 2]) -> Matrix3 {
        self.lateral(v).map(|row| row.map(|x| -x))
    }

    pub fn block(&self, kind: BlockKind, v: [f64; 2]) -> Matrix3 {
        match kind {
            BlockKind::Plain | BlockKind::DOmega => self.plain(),
            BlockKind::CurlLeft => self.curl_left(),
            BlockKind::CurlRight => self.curl_right(),
            BlockKind::Lateral => self.lateral(v),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |a, c| a.max(c.norm()))
    }
}

fn antisym_block(xx: Complex64, zz: Complex64, xy: Complex64) -> Matrix3 {
    let mut g = ZERO_MATRIX;
    g[0][0] = xx;
    g[1][1] = xx;
    g[2][2] = zz;
    g[0][1] = xy;
    g[1][0] = -xy;
    g
}

/// Frequencies accepted by the Green's-tensor routines: real positive or imaginary positive.
pub fn check_omega(omega: Complex64) -> Result<()> {
    let real_axis = omega.im == 0.0 && omega.re > 0.0 && omega.re.is_finite();
    let imag_axis = omega.re == 0.0 && omega.im > 0.0 && omega.im.is_finite();
    if real_axis || imag_axis {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("omega must be real > 0 or purely imaginary > 0, got {omega}")))
    }
}

fn check_z(z: f64) -> Result<()> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("z must be > 0, got {z}")))
    }
}

/// ∫_{i∞}^{k} βⁿ e^{2izβ} dβ for n = 0..3.
fn contour_integrals(k: Complex64, z: f64) -> [Complex64; 4] {
    let a = Complex64::new(0.0, 2.0 * z);
    let e = (a * k).exp();
    let (a1, a2, a3, a4) = (a, a * a, a * a * a, a * a * a * a);
    [
        e / a1,
        e * (k / a1 - 1.0 / a2),
        e * (k * k / a1 - 2.0 * k / a2 + 2.0 / a3),
        e * (k * k * k / a1 - 3.0 * k * k / a2 + 6.0 * k / a3 - 6.0 / a4),
    ]
}

/// Radial weights ∫dμ w_j for a constant reflection coefficient.
pub fn constant_weights(z: f64, omega: Complex64) -> [Complex64; 5] {
    let k = omega / SI.c;
    let n = contour_integrals(k, z);
    [n[0], n[1] / k, n[2] / (k * k), n[0] - n[2] / (k * k), n[1] / k - n[3] / (k * k * k)]
}

/// d/dω of [`constant_weights`].
pub fn constant_weights_domega(z: f64, omega: Complex64) -> [Complex64; 5] {
    let k = omega / SI.c;
    let n = contour_integrals(k, z);
    let e = (Complex64::new(0.0, 2.0 * z) * k).exp();
    let k2 = k * k;
    let k3 = k2 * k;
    let k4 = k3 * k;
    let d_u = e - n[1] / k2;
    let d_u2 = e - 2.0 * n[2] / k3;
    let per_k = [e, d_u, d_u2, 2.0 * n[2] / k3, -n[1] / k2 + 3.0 * n[3] / k4];
    per_k.map(|x| x / SI.c)
}

/// Closed-form moments for an ideal mirror.
pub fn moments_ideal(m: &MediumSpec, z: f64, omega: Complex64) -> Result<Moments> {
    check_z(z)?;
    check_omega(omega)?;
    let r = reflection_ideal(m)?;
    Ok(Moments::from_weights(&r, constant_weights(z, omega), omega / SI.c))
}

/// Moments of an arbitrary constant reflection matrix (used for limit-coefficient tensors).
pub fn moments_constant(r: &ReflectionMatrix, z: f64, omega: Complex64) -> Result<Moments> {
    check_z(z)?;
    check_omega(omega)?;
    Ok(Moments::from_weights(r, constant_weights(z, omega), omega / SI.c))
}

fn moments_constant_domega(r: &ReflectionMatrix, z: f64, omega: Complex64) -> Moments {
    Moments::from_weights(r, constant_weights_domega(z, omega), omega / SI.c)
}

type Flat = [Complex64; 20];

fn pack(r: &ReflectionMatrix, jac: Complex64, w: [Complex64; 5]) -> Flat {
    let coef = r.to_array();
    let mut out = [Complex64::new(0.0, 0.0); 20];
    for a in 0..4 {
        let ca = coef[a] * jac;
        for j in 0..5 {
            out[a * 5 + j] = ca * w[j];
        }
    }
    out
}

/// Moments by radial quadrature of the exact reflection matrix of `m`.
pub fn moments_numeric(m: &MediumSpec, z: f64, omega: Complex64, cfg: &QuadratureConfig) -> Result<Moments> {
    check_z(z)?;
    check_omega(omega)?;
    let k = omega / SI.c;
    let mut first_err: Option<Error> = None;
    let mut eval = |k_par: f64| -> Option<ReflectionMatrix> {
        let r = WaveKinematics::new(omega, k_par).and_then(|w| reflection(m, &w));
        match r {
            Ok(r) if r.is_finite() => Some(r),
            Ok(_) => {
                first_err.get_or_insert(Error::DegenerateDenominator);
                None
            }
            Err(e) => {
                first_err.get_or_insert(e);
                None
            }
        }
    };
    let zero = [Complex64::new(0.0, 0.0); 20];
    let mut total = zero;
    let mut error = 0.0;
    let mut add = |est: cpshift_quad::Estimate<Flat>| {
        total = total.add(est.value);
        error += est.error;
    };

    if omega.im == 0.0 {
        let kr = omega.re / SI.c;
        let kz = kr * z;
        let ratios = branch_points(m);
        // propagating part, k∥ = k sin θ
        let mut th_pts = vec![0.0];
        th_pts.extend(ratios.iter().filter(|&&x| x < 1.0).map(|x| x.asin()));
        th_pts.push(FRAC_PI_2);
        for wdw in th_pts.windows(2) {
            let est = integrate_finite(
                |th: f64| {
                    let (s, c) = th.sin_cos();
                    match eval(kr * s) {
                        Some(r) => {
                            let jac = kr * s * Complex64::new(0.0, 2.0 * kz * c).exp();
                            let cc = Complex64::from(c);
                            pack(&r, jac, [1.0.into(), cc, cc * cc, (s * s).into(), cc * s * s])
                        }
                        None => zero,
                    }
                },
                wdw[0],
                wdw[1],
                cfg,
            )?;
            add(est);
        }
        // evanescent part, k∥ = k cosh t
        let t_max = (0.5 * CUTOFF_EXPONENT / kz).asinh();
        let mut t_pts = vec![0.0];
        t_pts.extend(ratios.iter().filter(|&&x| x > 1.0).map(|x| x.acosh()).filter(|&t| t < t_max));
        t_pts.push(t_max);
        for wdw in t_pts.windows(2) {
            let est = integrate_finite(
                |t: f64| {
                    let (sh, ch) = (t.sinh(), t.cosh());
                    match eval(kr * ch) {
                        Some(r) => {
                            let jac = Complex64::new(0.0, -kr * ch) * (-2.0 * kz * sh).exp();
                            let u = Complex64::new(0.0, sh);
                            pack(&r, jac, [1.0.into(), u, u * u, (ch * ch).into(), u * ch * ch])
                        }
                        None => zero,
                    }
                },
                wdw[0],
                wdw[1],
                cfg,
            )?;
            add(est);
        }
    } else {
        let q = omega.im / SI.c;
        let qz = q * z;
        let t_max = (1.0 + 0.5 * CUTOFF_EXPONENT / qz).acosh();
        let est = integrate_finite(
            |t: f64| {
                let (sh, ch) = (t.sinh(), t.cosh());
                match eval(q * sh) {
                    Some(r) => {
                        let jac = Complex64::new(0.0, -q * sh) * (-2.0 * qz * ch).exp();
                        let s2 = -sh * sh;
                        pack(&r, jac, [1.0.into(), ch.into(), (ch * ch).into(), s2.into(), (ch * s2).into()])
                    }
                    None => zero,
                }
            },
            0.0,
            t_max,
            cfg,
        )?;
        add(est);
    }
    if let Some(e) = first_err {
        return Err(e);
    }
    Ok(Moments::from_flat(total, k, error))
}

/// Closed-form moments for ideal mirrors, quadrature otherwise.
pub fn moments(m: &MediumSpec, z: f64, omega: Complex64, cfg: &QuadratureConfig) -> Result<Moments> {
    if m.is_ideal() {
        moments_ideal(m, z, omega)
    } else {
        moments_numeric(m, z, omega, cfg)
    }
}

/// ∂M/∂ω at real ω: analytic for ideal mirrors, otherwise central differences with one
/// Richardson step over h = h_rel·ω and h/2.
pub fn moments_domega(
    m: &MediumSpec,
    z: f64,
    omega: f64,
    cfg: &QuadratureConfig,
    h_rel: f64,
) -> Result<Moments> {
    check_z(z)?;
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidInput(format!("omega must be real > 0, got {omega}")));
    }
    if !(1e-7..=1e-3).contains(&h_rel) {
        return Err(Error::InvalidInput(format!("h_rel must lie in [1e-7, 1e-3], got {h_rel}")));
    }
    let w = Complex64::from(omega);
    if m.is_ideal() {
        let r = reflection_ideal(m)?;
        return Ok(moments_constant_domega(&r, z, w));
    }
    let inner = QuadratureConfig { rel_tol: (cfg.rel_tol * h_rel).max(1e-14), ..*cfg };
    let central = |h: f64| -> Result<(Moments, f64)> {
        let up = moments_numeric(m, z, Complex64::from(omega + h), &inner)?;
        let dn = moments_numeric(m, z, Complex64::from(omega - h), &inner)?;
        let mut d = up;
        let mut diff_norm: f64 = 0.0;
        for a in 0..4 {
            for j in 0..5 {
                let diff = up.m[a][j] - dn.m[a][j];
                diff_norm = diff_norm.max(diff.norm());
                d.m[a][j] = diff / (2.0 * h);
            }
        }
        let noise = up.error + dn.error;
        if diff_norm <= noise {
            return Err(Error::StepTooSmall);
        }
        d.error = noise / (2.0 * h);
        Ok((d, diff_norm))
    };
    let h = h_rel * omega;
    let (d1, _) = central(h)?;
    let (d2, _) = central(0.5 * h)?;
    let mut out = d2;
    let mut trunc: f64 = 0.0;
    for a in 0..4 {
        for j in 0..5 {
            let extrap = (4.0 * d2.m[a][j] - d1.m[a][j]) / 3.0;
            trunc = trunc.max((extrap - d2.m[a][j]).norm());
            out.m[a][j] = extrap;
        }
    }
    out.k = w / SI.c;
    out.error = d2.error * 2.0 + trunc * 1e-2;
    Ok(out)
}

fn make_block(value: Matrix3, kind: BlockKind, omega: Complex64, z: f64, mom: &Moments) -> GreensBlock {
    GreensBlock { value, kind, omega, z, error: mom.error }
}

/// Closed-form coincident-point tensor of an ideal mirror.
pub fn green_closed(m: &MediumSpec, z: f64, omega: Complex64) -> Result<GreensBlock> {
    check_z(z)?;
    check_omega(omega)?;
    let c = SI.c;
    let e = (2.0 * I * omega * z / c).exp();
    let mut g = ZERO_MATRIX;
    match *m {
        MediumSpec::PerfectConductor => {
            let xx = (-1.0 / (8.0 * PI * z) - I * c / (16.0 * PI * omega * z * z)
                + c * c / (32.0 * PI * omega * omega * z.powi(3)))
                * e;
            let zz = (-I * c / (8.0 * PI * omega * z * z) + c * c / (16.0 * PI * omega * omega * z.powi(3))) * e;
            g[0][0] = xx;
            g[1][1] = xx;
            g[2][2] = zz;
        }
        MediumSpec::NonreciprocalMirror(s) => {
            let xy = s.value() * (1.0 / (8.0 * PI * z) + I * c / (16.0 * PI * omega * z * z)) * e;
            g[0][1] = xy;
            g[1][0] = -xy;
        }
        MediumSpec::ChiralMirror(_) => {}
        _ => return Err(Error::WrongMediumKind(m.kind())),
    }
    Ok(GreensBlock { value: g, kind: BlockKind::Plain, omega, z, error: 0.0 })
}

/// Plain coincident-point tensor by radial quadrature (any medium).
pub fn green_numeric(m: &MediumSpec, z: f64, omega: Complex64, cfg: &QuadratureConfig) -> Result<GreensBlock> {
    let mom = moments_numeric(m, z, omega, cfg)?;
    Ok(make_block(mom.plain(), BlockKind::Plain, omega, z, &mom))
}

/// Plain tensor: closed form for ideal mirrors, quadrature otherwise.
pub fn green(m: &MediumSpec, z: f64, omega: Complex64, cfg: &QuadratureConfig) -> Result<GreensBlock> {
    let mom = moments(m, z, omega, cfg)?;
    Ok(make_block(mom.plain(), BlockKind::Plain, omega, z, &mom))
}

pub fn green_curl(
    m: &MediumSpec,
    z: f64,
    omega: Complex64,
    side: Side,
    cfg: &QuadratureConfig,
) -> Result<GreensBlock> {
    let mom = moments(m, z, omega, cfg)?;
    Ok(match side {
        Side::Left => make_block(mom.curl_left(), BlockKind::CurlLeft, omega, z, &mom),
        Side::Right => make_block(mom.curl_right(), BlockKind::CurlRight, omega, z, &mom),
    })
}

pub fn green_lateral(
    m: &MediumSpec,
    z: f64,
    omega: Complex64,
    v: [f64; 2],
    cfg: &QuadratureConfig,
) -> Result<GreensBlock> {
    let mom = moments(m, z, omega, cfg)?;
    Ok(make_block(mom.lateral(v), BlockKind::Lateral, omega, z, &mom))
}

/// ∂G/∂ω or ∂(ω²G)/∂ω of the plain tensor at real ω.
pub fn green_domega(
    m: &MediumSpec,
    z: f64,
    omega: f64,
    weight: DerivativeWeight,
    cfg: &QuadratureConfig,
    h_rel: f64,
) -> Result<GreensBlock> {
    let dm = moments_domega(m, z, omega, cfg, h_rel)?;
    let dg = dm.plain();
    let w = Complex64::from(omega);
    let (value, error) = match weight {
        DerivativeWeight::PlainG => (dg, dm.error),
        DerivativeWeight::OmegaSquaredG => {
            let g = moments(m, z, w, cfg)?;
            let g0 = g.plain();
            let mut out = ZERO_MATRIX;
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = 2.0 * omega * g0[i][j] + omega * omega * dg[i][j];
                }
            }
            (out, omega * omega * dm.error + 2.0 * omega * g.error)
        }
    };
    Ok(GreensBlock { value, kind: BlockKind::DOmega, omega: w, z, error })
}

/// Bilinear contraction a·G·b of a block.
pub fn contract_block(a: Complex3Vector, g: &GreensBlock, b: Complex3Vector) -> Complex64 {
    cpshift_core::contract(a, &g.value, b)
}
