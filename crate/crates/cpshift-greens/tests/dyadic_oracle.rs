//! Blocks assembled from moments against a direct dyadic integration: the polarisation
//! dyads are built explicitly on an 8-angle azimuth grid and the radial integral is a
//! composite Simpson rule.

use cpshift_core::{Handedness, Matrix3, MediumSpec, MirrorSign, SI, ZERO_MATRIX};
use cpshift_fresnel::{reflection, WaveKinematics};
use cpshift_greens::{max_abs, moments_numeric, BlockKind, Moments};
use cpshift_quad::QuadratureConfig;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const I: Complex64 = Complex64::new(0.0, 1.0);
const Z: f64 = 50e-9;
const V: [f64; 2] = [0.6, -0.8];
const KINDS: [BlockKind; 4] = [BlockKind::Plain, BlockKind::CurlLeft, BlockKind::CurlRight, BlockKind::Lateral];

fn outer(a: [Complex64; 3], b: [Complex64; 3]) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i] * b[j]))
}

fn cross(a: [Complex64; 3], b: [Complex64; 3]) -> [Complex64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn add_scaled(acc: &mut Matrix3, m: &Matrix3, s: Complex64) {
    for i in 0..3 {
        for j in 0..3 {
            acc[i][j] += s * m[i][j];
        }
    }
}

/// Azimuth-averaged dyads for one radial node, returned as [plain, curl_left, curl_right, lateral].
fn averaged_dyads(m: &MediumSpec, omega: Complex64, k_par: f64, k_perp: Complex64) -> [Matrix3; 4] {
    let k = omega / SI.c;
    // Simpson samples the light line itself, where some formulas are 0/0; step off it
    let r = reflection(m, &WaveKinematics::new(omega, k_par).unwrap())
        .or_else(|_| reflection(m, &WaveKinematics::new(omega, k_par * (1.0 - 1e-12)).unwrap()))
        .unwrap();
    let mut out = [ZERO_MATRIX; 4];
    let n_phi = 8;
    for n in 0..n_phi {
        let phi = 2.0 * PI * (n as f64 + 0.3) / n_phi as f64;
        let (s, c) = phi.sin_cos();
        let kh = [Complex64::from(c), Complex64::from(s), Complex64::from(0.0)];
        let e_s = [Complex64::from(s), Complex64::from(-c), Complex64::from(0.0)];
        let e_p = |sign: f64| -> [Complex64; 3] {
            [-sign * k_perp * kh[0] / k, -sign * k_perp * kh[1] / k, Complex64::from(k_par) / k]
        };
        let (ep_up, ep_dn) = (e_p(1.0), e_p(-1.0));
        let mut d = ZERO_MATRIX;
        add_scaled(&mut d, &outer(e_s, e_s), r.ss);
        add_scaled(&mut d, &outer(e_s, ep_dn), r.sp);
        add_scaled(&mut d, &outer(ep_up, e_s), r.ps);
        add_scaled(&mut d, &outer(ep_up, ep_dn), r.pp);

        let k_up = [k_par * kh[0], k_par * kh[1], k_perp];
        let k_dn = [k_par * kh[0], k_par * kh[1], -k_perp];
        let a = k_up.map(|x| I * x);
        let b = k_dn.map(|x| -I * x);
        let mut cl = ZERO_MATRIX;
        let mut cr = ZERO_MATRIX;
        for j in 0..3 {
            let col = cross(a, [d[0][j], d[1][j], d[2][j]]);
            for i in 0..3 {
                cl[i][j] = col[i];
            }
        }
        for i in 0..3 {
            cr[i] = cross(d[i], b);
        }
        let lat = -I * k_par * (V[0] * c + V[1] * s);
        let w = 1.0 / n_phi as f64;
        add_scaled(&mut out[0], &d, w.into());
        add_scaled(&mut out[1], &cl, w.into());
        add_scaled(&mut out[2], &cr, w.into());
        add_scaled(&mut out[3], &d, lat * w);
    }
    out
}

/// Simpson on [a, b] of a matrix-quadruple valued function.
fn simpson<F: FnMut(f64) -> [Matrix3; 4]>(mut f: F, a: f64, b: f64, n: usize) -> [Matrix3; 4] {
    let h = (b - a) / n as f64;
    let mut acc = [ZERO_MATRIX; 4];
    for i in 0..=n {
        let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let v = f(a + i as f64 * h);
        for q in 0..4 {
            add_scaled(&mut acc[q], &v[q], (w * h / 3.0).into());
        }
    }
    acc
}

fn sum4(a: [Matrix3; 4], b: [Matrix3; 4]) -> [Matrix3; 4] {
    let mut out = a;
    for q in 0..4 {
        add_scaled(&mut out[q], &b[q], 1.0.into());
    }
    out
}

/// Coincident-point blocks (i/4π)∫ k∥dk∥/k⊥ e^{2ik⊥z} ⟨dyad⟩_φ.
fn oracle(m: &MediumSpec, omega: Complex64, breaks: &[f64]) -> [Matrix3; 4] {
    let pref = I / (4.0 * PI);
    let n = 32000;
    let mut acc = [ZERO_MATRIX; 4];
    let scale = |mut v: [Matrix3; 4], s: Complex64| {
        for block in v.iter_mut() {
            for row in block.iter_mut() {
                for x in row.iter_mut() {
                    *x *= s;
                }
            }
        }
        v
    };
    if omega.im > 0.0 {
        let q = omega.im / SI.c;
        let k_max = 80.0 / Z;
        let f = |kp: f64| {
            let kappa = (q * q + kp * kp).sqrt();
            let k_perp = Complex64::new(0.0, kappa);
            let w = kp / k_perp * (-2.0 * kappa * Z).exp();
            scale(averaged_dyads(m, omega, kp, k_perp), w)
        };
        acc = sum4(acc, simpson(f, 0.0, k_max, n));
    } else {
        let k = omega.re / SI.c;
        let mut th = vec![0.0];
        th.extend(breaks.iter().filter(|&&x| x < 1.0).map(|x| x.asin()));
        th.push(FRAC_PI_2);
        for w in th.windows(2) {
            let f = |t: f64| {
                let (s, c) = t.sin_cos();
                let weight = k * s * Complex64::new(0.0, 2.0 * k * Z * c).exp();
                scale(averaged_dyads(m, omega, k * s, Complex64::from(k * c)), weight)
            };
            acc = sum4(acc, simpson(f, w[0], w[1], n));
        }
        let t_max = (60.0 / (k * Z)).asinh();
        let mut ts = vec![0.0];
        ts.extend(breaks.iter().filter(|&&x| x > 1.0).map(|x| x.acosh()));
        ts.push(t_max);
        for w in ts.windows(2) {
            let f = |t: f64| {
                let (sh, ch) = (t.sinh(), t.cosh());
                let weight = -I * k * ch * (-2.0 * k * Z * sh).exp();
                scale(averaged_dyads(m, omega, k * ch, Complex64::new(0.0, k * sh)), weight)
            };
            acc = sum4(acc, simpson(f, w[0], w[1], n));
        }
    }
    scale(acc, pref)
}

fn assert_blocks(mom: &Moments, reference: &[Matrix3; 4], tol: f64, what: &str) {
    for (q, kind) in KINDS.iter().enumerate() {
        let got = mom.block(*kind, V);
        // blocks that vanish identically are compared against the natural scale 1/z or 1/z²
        let floor = if q == 0 { 1e-3 / Z } else { 1e-3 / (Z * Z) };
        let norm = max_abs(&reference[q]).max(max_abs(&got)).max(floor);
        for i in 0..3 {
            for j in 0..3 {
                let d = (got[i][j] - reference[q][i][j]).norm();
                assert!(
                    d <= tol * norm,
                    "{what} {kind:?} [{i}][{j}]: got {} expected {} (block norm {norm:e})",
                    got[i][j],
                    reference[q][i][j]
                );
            }
        }
    }
}

fn media() -> Vec<(MediumSpec, Vec<f64>, &'static str)> {
    let ti = MediumSpec::topological_insulator(4.0, 1.0, 0.3).unwrap();
    let chiral = MediumSpec::isotropic_chiral_real(2.0, 1.0, 0.4).unwrap();
    let n = 2.0f64.sqrt();
    vec![
        (MediumSpec::PerfectConductor, vec![], "conductor"),
        (MediumSpec::NonreciprocalMirror(MirrorSign::Minus), vec![], "nonreciprocal"),
        (MediumSpec::ChiralMirror(Handedness::Left), vec![], "chiral mirror"),
        (ti, vec![2.0], "TI"),
        (chiral, vec![n - 0.4, n + 0.4], "chiral medium"),
    ]
}

#[test]
fn imaginary_frequency_blocks_match_dyadic_oracle() {
    let cfg = QuadratureConfig::default().with_rel_tol(1e-10);
    for (m, breaks, name) in media() {
        for kz in [0.2, 1.5] {
            let omega = Complex64::new(0.0, kz * SI.c / Z);
            let mom = moments_numeric(&m, Z, omega, &cfg).unwrap();
            assert_blocks(&mom, &oracle(&m, omega, &breaks), 1e-6, name);
        }
    }
}

#[test]
fn real_frequency_blocks_match_dyadic_oracle() {
    let cfg = QuadratureConfig::default().with_rel_tol(1e-10);
    for (m, breaks, name) in media() {
        for kz in [0.3, 2.0] {
            let omega = Complex64::from(kz * SI.c / Z);
            let mom = moments_numeric(&m, Z, omega, &cfg).unwrap();
            assert_blocks(&mom, &oracle(&m, omega, &breaks), 1e-5, name);
        }
    }
}

#[test]
fn lateral_derivative_on_first_argument_flips_sign() {
    let cfg = QuadratureConfig::default();
    let m = MediumSpec::topological_insulator(4.0, 1.0, 0.3).unwrap();
    let mom = moments_numeric(&m, Z, Complex64::from(SI.c / Z), &cfg).unwrap();
    let (second, first) = (mom.lateral(V), mom.lateral_first(V));
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(first[i][j], -second[i][j]);
        }
    }
    assert_eq!(second[0][0], Complex64::from(0.0));
    assert!(second[0][2].norm() > 0.0);
}
