//! Resonant, nonresonant and velocity-dependent Casimir–Polder frequency shifts and the
//! position-dependent decay rate of a single transition n → k.
//!
//! Conventions: d = d_nk, d_kn = d*, and every tensor is the scattering part G⁽¹⁾ at
//! coincident points r = r′ = r_A.

use cpshift_core::{
    contract, validate_transversality, AtomKinematics, Complex3Vector, Error, Matrix3, MediumSpec, Regime, Result,
    TransitionSpec, SI,
};
use cpshift_greens::{moments, moments_domega, Moments};
use cpshift_quad::{integrate_finite, integrate_semiinfinite, Estimate, QuadratureConfig};
use num_complex::Complex64;

/// Numerical settings shared by all shift operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftOptions {
    pub quad: QuadratureConfig,
    /// Relative finite-difference step for ∂/∂ω of dispersive media.
    pub h_rel: f64,
    /// Admissible |v·d| / (|v||d|).
    pub transversality_tol: f64,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        Self { quad: QuadratureConfig::default(), h_rel: 1e-4, transversality_tol: 1e-9 }
    }
}

/// Regime tag from the retardation parameter ω̃z/c (thresholds 5 and 0.2).
pub fn regime_of(omega: f64, z: f64) -> Option<Regime> {
    let x = omega.abs() * z / SI.c;
    if x > 5.0 {
        Some(Regime::Retarded)
    } else if x < 0.2 {
        Some(Regime::Nonretarded)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftMeta {
    pub medium: &'static str,
    /// `None` in the crossover between the two limits.
    pub regime: Option<Regime>,
    /// Sum of absolute quadrature error bounds propagated into the shifts (rad/s).
    pub quad_error: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftBreakdown {
    pub resonant: f64,
    pub nonresonant: f64,
    pub velocity: f64,
    pub decay_rate: f64,
    pub meta: ShiftMeta,
}

impl ShiftBreakdown {
    pub fn total(&self) -> f64 {
        self.resonant + self.nonresonant + self.velocity
    }
}

fn quadratic_form(d: Complex3Vector, g: &Matrix3) -> Complex64 {
    contract(d, g, d.conj())
}

fn moments_at(m: &MediumSpec, z: f64, omega: Complex64, opts: &ShiftOptions) -> Result<Moments> {
    moments(m, z, omega, &opts.quad)
}

/// −(μ₀/ħ)ω̃² Re[d·G⁽¹⁾(ω̃)·d*] for ω̃ > 0, else 0.
pub fn resonant_shift(t: &TransitionSpec, k: &AtomKinematics, m: &MediumSpec, opts: &ShiftOptions) -> Result<f64> {
    Ok(resonant_with_error(t, k, m, opts)?.0)
}

fn resonant_with_error(
    t: &TransitionSpec,
    k: &AtomKinematics,
    m: &MediumSpec,
    opts: &ShiftOptions,
) -> Result<(f64, f64)> {
    let w = t.omega_nk();
    if w <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let mom = moments_at(m, k.z_a(), w.into(), opts)?;
    let pref = SI.mu0 / SI.hbar * w * w;
    let q = quadratic_form(t.dipole(), &mom.plain());
    Ok((-pref * q.re, pref * mom.error * t.dipole().norm_sqr()))
}

/// (2μ₀/ħ)ω̃² Im[d·G⁽¹⁾(ω̃)·d*] for ω̃ > 0, else 0.
pub fn decay_rate(t: &TransitionSpec, k: &AtomKinematics, m: &MediumSpec, opts: &ShiftOptions) -> Result<f64> {
    let w = t.omega_nk();
    if w <= 0.0 {
        return Ok(0.0);
    }
    let mom = moments_at(m, k.z_a(), w.into(), opts)?;
    let q = quadratic_form(t.dipole(), &mom.plain());
    Ok(2.0 * SI.mu0 / SI.hbar * w * w * q.im)
}

/// Imaginary-axis contribution
/// (μ₀/πħ)∫dξ [ξ³/(ξ²+ω̃²) Im q(iξ) − ξ²ω̃/(ξ²+ω̃²) Re q(iξ)], q = d·G⁽¹⁾(iξ)·d*.
pub fn nonresonant_shift(t: &TransitionSpec, k: &AtomKinematics, m: &MediumSpec, opts: &ShiftOptions) -> Result<f64> {
    Ok(nonresonant_with_error(t, k, m, opts)?.0)
}

fn nonresonant_with_error(
    t: &TransitionSpec,
    k: &AtomKinematics,
    m: &MediumSpec,
    opts: &ShiftOptions,
) -> Result<(f64, f64)> {
    let z = k.z_a();
    let d = t.dipole();
    let w = t.omega_nk();
    let xi_c = SI.c / z;
    // integrate in units of the natural size |d|²(c/z)/(8πz) of ξ·q so that abs_tol stays negligible
    let unit = d.norm_sqr() * xi_c / (8.0 * std::f64::consts::PI * z);
    let mut inner_err: Option<Error> = None;
    let mut inner_abs = 0.0;
    let mut integrand = |xi: f64| -> f64 {
        if xi <= 0.0 {
            return 0.0;
        }
        match moments_at(m, z, Complex64::new(0.0, xi), opts) {
            Ok(mom) => {
                let q = quadratic_form(d, &mom.plain());
                let den = xi * xi + w * w;
                let weight = xi * xi / den;
                inner_abs += mom.error * d.norm_sqr() * (xi.abs() + w.abs()) * weight;
                weight * (xi * q.im - w * q.re) / unit
            }
            Err(e) => {
                inner_err.get_or_insert(e);
                0.0
            }
        }
    };

    // geometric breakpoints resolve the Lorentzian of width |ω̃| next to the decay scale c/z
    let w_abs = w.abs();
    let mut pts = vec![0.0];
    if w_abs > 0.0 && w_abs < xi_c {
        let mut x = w_abs;
        pts.push(x);
        while x * 8.0 < xi_c {
            x *= 8.0;
            pts.push(x);
        }
    }
    pts.push(xi_c);
    if w_abs > xi_c {
        // the integrand decays on the scale c/z long before ξ reaches ω̃
        let mut x = xi_c;
        while x * 8.0 < w_abs {
            x *= 8.0;
            pts.push(x);
        }
        pts.push(w_abs);
    }
    let mut est = Estimate { value: 0.0, error: 0.0, subdivisions: 0 };
    for p in pts.windows(2) {
        let e = integrate_finite(&mut integrand, p[0], p[1], &opts.quad)?;
        est.value += e.value;
        est.error += e.error;
    }
    let tail_cfg = opts.quad.with_decay_scale(xi_c.max(w_abs));
    let tail = integrate_semiinfinite(&mut integrand, *pts.last().expect("nonempty"), &tail_cfg)?;
    est.value += tail.value;
    est.error += tail.error;
    if let Some(e) = inner_err {
        return Err(e);
    }
    let pref = SI.mu0 / (std::f64::consts::PI * SI.hbar);
    Ok((pref * unit * est.value, pref * (unit * est.error + inner_abs / xi_c)))
}

/// Which form of the velocity-dependent shift to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityForm {
    /// General expression valid for any medium.
    General,
    /// Reduced form for reciprocal media (lateral derivative on the first argument).
    Reciprocal,
}

/// The individual pieces of the velocity-dependent shift (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityTerms {
    pub lateral: f64,
    pub curl_right: f64,
    pub curl_left: f64,
    pub error: f64,
    /// Largest |a_i X_ij b_j| among the tensor-element products entering the three terms,
    /// with the prefactors applied (rad/s).
    pub constituent: f64,
}

impl VelocityTerms {
    pub fn total(&self) -> f64 {
        self.lateral + self.curl_right + self.curl_left
    }
}

/// d/dω[ω² L(ω)] for the lateral block L = (k/8π)Σ…, k = ω/c.
fn d_omega2_lateral(mom: &Moments, dmom: &Moments, omega: f64, v: [f64; 2]) -> Matrix3 {
    let l = mom.lateral(v);
    let dl = dmom.lateral(v);
    std::array::from_fn(|i| std::array::from_fn(|j| 3.0 * omega * l[i][j] + omega * omega * dl[i][j]))
}

fn largest_product(a: Complex3Vector, m: &Matrix3, b: Complex3Vector) -> f64 {
    let (a, b) = (a.to_array(), b.to_array());
    let mut out: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            out = out.max((a[i] * m[i][j] * b[j]).norm());
        }
    }
    out
}

fn check_transversal(t: &TransitionSpec, k: &AtomKinematics, opts: &ShiftOptions) -> Result<()> {
    if validate_transversality(t, k, opts.transversality_tol) {
        Ok(())
    } else {
        let residual = k.velocity().dot(t.dipole()).norm() / (k.speed() * t.dipole().norm());
        Err(Error::TransversalityViolation { residual })
    }
}

/// Velocity-dependent shift split into its three contributions.
pub fn velocity_terms(
    t: &TransitionSpec,
    k: &AtomKinematics,
    m: &MediumSpec,
    form: VelocityForm,
    opts: &ShiftOptions,
) -> Result<VelocityTerms> {
    check_transversal(t, k, opts)?;
    let zero = VelocityTerms { lateral: 0.0, curl_right: 0.0, curl_left: 0.0, error: 0.0, constituent: 0.0 };
    let w = t.omega_nk();
    if w <= 0.0 || k.speed() == 0.0 {
        return Ok(zero);
    }
    let z = k.z_a();
    let v = k.v_parallel();
    let d = t.dipole();
    let dc = d.conj();
    let vd = Complex3Vector::from_parallel(v).cross(d);
    let vdc = Complex3Vector::from_parallel(v).cross(dc);

    let mom = moments_at(m, z, w.into(), opts)?;
    let dmom = moments_domega(m, z, w, &opts.quad, opts.h_rel)?;
    let lat = d_omega2_lateral(&mom, &dmom, w, v);
    let cl = mom.curl_left();
    let pref = SI.mu0 / SI.hbar;
    let cr = mom.curl_right();
    let (lateral, curl_right, c_lat, c_cr) = match form {
        VelocityForm::General => {
            let a = contract(d, &lat, dc).im;
            let b = contract(d, &cr, vdc).im;
            (pref * a, pref * w * b, largest_product(d, &lat, dc), largest_product(d, &cr, vdc))
        }
        VelocityForm::Reciprocal => {
            // lateral derivative moved to the first argument: (v·∇)G = −(v·∇′)G
            let a = -contract(dc, &lat, d).im;
            let b = -contract(vdc, &cl, d).im;
            (pref * a, pref * w * b, largest_product(dc, &lat, d), largest_product(vdc, &cl, d))
        }
    };
    let curl_left = pref * w * contract(vd, &cl, dc).im;
    // d/dω(ω²L) = 3ωL + ω²L(∂M) is split into its two pieces, which cancel strongly for ω̃z/c ≪ 1
    let (l0, l1) = (mom.lateral(v), dmom.lateral(v));
    let parts: [Matrix3; 2] = [
        std::array::from_fn(|i| std::array::from_fn(|j| 3.0 * w * l0[i][j])),
        std::array::from_fn(|i| std::array::from_fn(|j| w * w * l1[i][j])),
    ];
    let c_parts = match form {
        VelocityForm::General => largest_product(d, &parts[0], dc).max(largest_product(d, &parts[1], dc)),
        VelocityForm::Reciprocal => largest_product(dc, &parts[0], d).max(largest_product(dc, &parts[1], d)),
    };
    let constituent = (pref * c_lat.max(c_parts)).max(pref * w * c_cr).max(pref * w * largest_product(vd, &cl, dc));
    let lat_scale = w / SI.c / (8.0 * std::f64::consts::PI);
    let error = pref * d.norm_sqr() * k.speed() * lat_scale * (w * w * dmom.error + 5.0 * w * mom.error);
    Ok(VelocityTerms { lateral, curl_right, curl_left, error, constituent })
}

/// Velocity-dependent shift; reciprocal media use the reduced form.
pub fn velocity_shift(t: &TransitionSpec, k: &AtomKinematics, m: &MediumSpec, opts: &ShiftOptions) -> Result<f64> {
    let form = if m.is_reciprocal() { VelocityForm::Reciprocal } else { VelocityForm::General };
    Ok(velocity_terms(t, k, m, form, opts)?.total())
}

/// All contributions at the supplied ω̃ (single pass, no self-consistency).
pub fn total_shift(
    t: &TransitionSpec,
    k: &AtomKinematics,
    m: &MediumSpec,
    opts: &ShiftOptions,
) -> Result<ShiftBreakdown> {
    let mut warnings = Vec::new();
    if k.speed() > 1e-3 * SI.c {
        warnings.push(format!("|v| = {:e} m/s exceeds 1e-3 c; first-order velocity theory", k.speed()));
    }
    let (resonant, e_res) = resonant_with_error(t, k, m, opts)?;
    let (nonresonant, e_nres) = nonresonant_with_error(t, k, m, opts)?;
    let form = if m.is_reciprocal() { VelocityForm::Reciprocal } else { VelocityForm::General };
    let vt = velocity_terms(t, k, m, form, opts)?;
    let decay = decay_rate(t, k, m, opts)?;
    Ok(ShiftBreakdown {
        resonant,
        nonresonant,
        velocity: vt.total(),
        decay_rate: decay,
        meta: ShiftMeta {
            medium: m.kind(),
            regime: regime_of(t.omega_nk(), k.z_a()),
            quad_error: e_res + e_nres + vt.error,
            warnings,
        },
    })
}

/// Sums breakdowns over several transitions of one level; the velocity and resonant
/// parts of upward transitions (ω̃ ≤ 0) vanish individually.
pub fn aggregate(
    transitions: &[TransitionSpec],
    k: &AtomKinematics,
    m: &MediumSpec,
    opts: &ShiftOptions,
) -> Result<ShiftBreakdown> {
    let mut acc = ShiftBreakdown {
        resonant: 0.0,
        nonresonant: 0.0,
        velocity: 0.0,
        decay_rate: 0.0,
        meta: ShiftMeta { medium: m.kind(), regime: None, quad_error: 0.0, warnings: Vec::new() },
    };
    for t in transitions {
        let b = total_shift(t, k, m, opts)?;
        acc.resonant += b.resonant;
        acc.nonresonant += b.nonresonant;
        acc.velocity += b.velocity;
        acc.decay_rate += b.decay_rate;
        acc.meta.quad_error += b.meta.quad_error;
        acc.meta.warnings.extend(b.meta.warnings);
    }
    Ok(acc)
}

/// Solves ω̃ = ω₀ + δω(ω̃) by fixed-point iteration (at most 20 steps, relative tolerance 1e-10).
pub fn self_consistent_frequency<F>(omega0: f64, mut shift: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut w = omega0;
    for _ in 0..20 {
        let next = omega0 + shift(w)?;
        if (next - w).abs() <= 1e-10 * next.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        w = next;
    }
    Err(Error::NonConvergence { estimate: w, error: (omega0 + shift(w)? - w).abs() })
}
