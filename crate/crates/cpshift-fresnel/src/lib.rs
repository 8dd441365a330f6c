//! Reflection matrices for the five interface media.
//!
//! Coefficients follow the convention r_pp → +1, r_ss → −1 for a perfect conductor,
//! with r_σσ′ multiplying e_σ+ ⊗ e_σ′− in the scattering Green's tensor.

use cpshift_core::{ChiralParams, Error, MediumSpec, Regime, Result, TiParams, SI};
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionMatrix {
    pub ss: Complex64,
    pub sp: Complex64,
    pub ps: Complex64,
    pub pp: Complex64,
}

impl ReflectionMatrix {
    pub fn new(ss: Complex64, sp: Complex64, ps: Complex64, pp: Complex64) -> Self {
        Self { ss, sp, ps, pp }
    }

    pub fn real(ss: f64, sp: f64, ps: f64, pp: f64) -> Self {
        Self::new(ss.into(), sp.into(), ps.into(), pp.into())
    }

    pub fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        [self.ss, self.sp, self.ps, self.pp].iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn to_array(&self) -> [Complex64; 4] {
        [self.ss, self.sp, self.ps, self.pp]
    }

    /// Singular values of [[r_ss, r_sp], [r_ps, r_pp]], largest first.
    pub fn singular_values(&self) -> [f64; 2] {
        let (a, b, c, d) = (self.ss, self.sp, self.ps, self.pp);
        // eigenvalues of MᴴM = [[p, q], [q*, s]]
        let p = a.norm_sqr() + c.norm_sqr();
        let s = b.norm_sqr() + d.norm_sqr();
        let q = a.conj() * b + c.conj() * d;
        let tr = p + s;
        let disc = ((p - s) * (p - s) + 4.0 * q.norm_sqr()).sqrt();
        let l1 = 0.5 * (tr + disc);
        let l2 = (0.5 * (tr - disc)).max(0.0);
        [l1.sqrt(), l2.sqrt()]
    }
}

/// Frequency and in-plane wave number of a partial wave, plus the vacuum-side k⊥.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveKinematics {
    pub omega: Complex64,
    pub k_par: f64,
    /// k₁ = ω/c
    pub k1: Complex64,
    /// k₁⊥ with Im k₁⊥ ≥ 0
    pub k_perp1: Complex64,
}

impl WaveKinematics {
    pub fn new(omega: Complex64, k_par: f64) -> Result<Self> {
        if !(k_par.is_finite() && k_par >= 0.0) {
            return Err(Error::InvalidInput(format!("k_par must be >= 0, got {k_par}")));
        }
        if omega.norm() == 0.0 || !omega.re.is_finite() || !omega.im.is_finite() {
            return Err(Error::InvalidInput("omega must be finite and nonzero".into()));
        }
        let k1 = omega / SI.c;
        Ok(Self { omega, k_par, k1, k_perp1: perp_branch(k1 * k1, k_par) })
    }

    /// Medium-side perpendicular wave number for a bulk wave number `k2`.
    pub fn k_perp_for(&self, k2: Complex64) -> Complex64 {
        perp_branch(k2 * k2, self.k_par)
    }
}

/// √(k² − k∥²) on the branch Im ≥ 0 (Re ≥ 0 when purely real).
pub fn perp_branch(k_sq: Complex64, k_par: f64) -> Complex64 {
    let arg = k_sq - k_par * k_par;
    let mut r = arg.sqrt();
    if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
        r = -r;
    }
    if r.im == 0.0 && arg.im == 0.0 && arg.re < 0.0 {
        r = Complex64::new(0.0, (-arg.re).sqrt());
    }
    r
}

pub fn reflection_ideal(m: &MediumSpec) -> Result<ReflectionMatrix> {
    match *m {
        MediumSpec::PerfectConductor => Ok(ReflectionMatrix::real(-1.0, 0.0, 0.0, 1.0)),
        MediumSpec::NonreciprocalMirror(s) => {
            let r = s.value();
            Ok(ReflectionMatrix::real(0.0, r, r, 0.0))
        }
        MediumSpec::ChiralMirror(h) => {
            let r_ps = I * h.sign();
            Ok(ReflectionMatrix::new(0.0.into(), -r_ps, r_ps, 0.0.into()))
        }
        MediumSpec::TopologicalInsulator(_) | MediumSpec::IsotropicChiral(_) => {
            Err(Error::WrongMediumKind(m.kind()))
        }
    }
}

pub fn reflection_ti(p: &TiParams, w: &WaveKinematics) -> Result<ReflectionMatrix> {
    let (eps, mu, delta) = (p.eps2(), p.mu2(), p.delta());
    let k1p = w.k_perp1;
    let k2p = w.k_perp_for(w.k1 * (eps * mu).sqrt());
    let cross = delta * delta * k1p * k2p;
    let den = (mu * k1p + k2p) * mu * (eps * k1p + k2p) + cross;
    if den.norm() == 0.0 || !den.re.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    let ss = ((mu * k1p - k2p) * mu * (eps * k1p + k2p) - cross) / den;
    let sp = -2.0 * mu * k1p * k2p * delta / den;
    let pp = ((eps * k1p - k2p) * mu * (mu * k1p + k2p) + cross) / den;
    Ok(ReflectionMatrix::new(ss, sp, sp, pp))
}

/// Isotropic chiral half-space. Implemented with the labelling in which κ₂ = 0 yields the
/// ordinary dielectric s/p coefficients and k∥ → ∞ yields the quasi-static limits.
pub fn reflection_chiral(p: &ChiralParams, w: &WaveKinematics) -> Result<ReflectionMatrix> {
    let (eps, mu, kappa) = (p.eps2(), p.mu2(), p.kappa2());
    let n = p.index();
    let k1 = w.k1;
    let k1p = w.k_perp1;
    let k2r = k1 * (n + kappa);
    let k2l = k1 * (n - kappa);
    let k2pr = w.k_perp_for(k2r);
    let k2pl = w.k_perp_for(k2l);
    let se = eps.sqrt();
    let sm = mu.sqrt();
    // a_P = A_P/k₁⊥ and b_P = B_P/k₁⊥; everything below is scaled by k₁⊥² so the
    // light line k₁⊥ = 0 stays finite
    let tr = k2pr / (n + kappa);
    let tl = k2pl / (n - kappa);
    let (a_r, a_l) = (se / sm * tr, se / sm * tl);
    let (b_r, b_l) = (sm / se * tr, sm / se * tl);
    let q = k1p;
    let den = (q + a_r) * (q + b_l) + (q + a_l) * (q + b_r);
    if den.norm() == 0.0 || !den.re.is_finite() {
        return Err(Error::DegenerateDenominator);
    }
    let s_like = ((q - a_r) * (q + b_l) + (q - a_l) * (q + b_r)) / den;
    let p_like = ((q + a_r) * (q - b_l) + (q + a_l) * (q - b_r)) / den;
    let mixed = -2.0 * I * q * (tl - tr) / den;
    Ok(ReflectionMatrix::new(s_like, -mixed, mixed, p_like))
}

/// Reflection matrix of any medium at the given partial wave.
pub fn reflection(m: &MediumSpec, w: &WaveKinematics) -> Result<ReflectionMatrix> {
    match m {
        MediumSpec::TopologicalInsulator(p) => reflection_ti(p, w),
        MediumSpec::IsotropicChiral(p) => reflection_chiral(p, w),
        _ => reflection_ideal(m),
    }
}

/// Constant retarded or nonretarded coefficients of the TI (μ₂ = 1) and the chiral medium.
pub fn reflection_limit(m: &MediumSpec, regime: Regime) -> Result<ReflectionMatrix> {
    match m {
        MediumSpec::TopologicalInsulator(p) => {
            if p.mu2() != 1.0 {
                return Err(Error::InvalidInput("TI limit coefficients assume mu2 = 1".into()));
            }
            let (eps, d) = (p.eps2(), p.delta());
            match regime {
                Regime::Retarded => {
                    let den = (1.0 + eps.sqrt()).powi(2) + d * d;
                    let ss = (1.0 - eps - d * d) / den;
                    let ps = -2.0 * d / den;
                    Ok(ReflectionMatrix::real(ss, ps, ps, -ss))
                }
                Regime::Nonretarded => {
                    let den = 2.0 * (eps + 1.0) + d * d;
                    let sp = -2.0 * d / den;
                    Ok(ReflectionMatrix::real(-d * d / den, sp, sp, (2.0 * (eps - 1.0) + d * d) / den))
                }
            }
        }
        MediumSpec::IsotropicChiral(p) => {
            let (eps, mu, kappa) = (p.eps2(), p.mu2(), p.kappa2());
            match regime {
                Regime::Retarded => {
                    let nr = p.index();
                    let kr = nr + kappa;
                    let kl = nr - kappa;
                    let (akr, akl) = (kr.norm(), kl.norm());
                    let mix = kl * akr + kr * akl;
                    let prod = kl * kr;
                    let aprod = (kr * kl).norm();
                    let den = 2.0 * (prod + aprod) + (eps + mu) / nr * mix;
                    if den.norm() == 0.0 {
                        return Err(Error::DegenerateDenominator);
                    }
                    let ss = (2.0 * (prod - aprod) - (eps - mu) / nr * mix) / den;
                    let pp = (2.0 * (prod - aprod) + (eps - mu) / nr * mix) / den;
                    let sp_den = 2.0 * ((eps + mu) / nr) * (prod + aprod) + mix;
                    if sp_den.norm() == 0.0 {
                        return Err(Error::DegenerateDenominator);
                    }
                    let sp = 2.0 * I * (kl * akr - kr * akl) / sp_den;
                    Ok(ReflectionMatrix::new(ss, sp, -sp, pp))
                }
                Regime::Nonretarded => {
                    let big_n = eps * mu - kappa * kappa + eps + mu + 1.0;
                    if big_n.norm() == 0.0 {
                        return Err(Error::DegenerateDenominator);
                    }
                    let ss = (eps * mu - kappa * kappa - eps + mu - 1.0) / big_n;
                    let ps = -2.0 * I * kappa / big_n;
                    let pp = (eps * mu - kappa * kappa + eps - mu - 1.0) / big_n;
                    Ok(ReflectionMatrix::new(ss, -ps, ps, pp))
                }
            }
        }
        _ => Err(Error::WrongMediumKind(m.kind())),
    }
}

/// Values of k∥/(ω/c) at which a medium-side k⊥ has a branch point (real ω).
pub fn branch_points(m: &MediumSpec) -> Vec<f64> {
    let mut pts = match m {
        MediumSpec::TopologicalInsulator(p) => vec![(p.eps2() * p.mu2()).sqrt()],
        MediumSpec::IsotropicChiral(p) => {
            let n = p.index();
            vec![(n + p.kappa2()).re, (n - p.kappa2()).re]
        }
        _ => vec![],
    };
    pts.retain(|x| x.is_finite() && *x > 0.0 && (*x - 1.0).abs() > 1e-12);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    pts
}
