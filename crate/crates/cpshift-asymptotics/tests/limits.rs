use cpshift_asymptotics::*;
use cpshift_atom::{hydrogen_dipole, RydbergKind, RydbergTransition};
use cpshift_core::*;
use cpshift_fresnel::reflection_limit;
use cpshift_greens::moments_constant;
use proptest::prelude::*;
use std::f64::consts::PI;

const D0: f64 = 1e-29;
const Z: f64 = 1e-6;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn dipole(a: [(f64, f64); 3]) -> Complex3Vector {
    Complex3Vector::from_array(a.map(|(re, im)| Complex64::new(re, im) * D0))
}

fn request(m: MediumSpec, regime: Regime, c: Contribution, d: Complex3Vector, x: f64, v: [f64; 2]) -> AsymptoticRequest {
    AsymptoticRequest {
        medium: m,
        regime,
        contribution: c,
        transition: TransitionSpec::new(d, x * SI.c / Z, "t").unwrap(),
        kinematics: AtomKinematics::new(Z, v).unwrap(),
    }
}

fn value(m: MediumSpec, regime: Regime, c: Contribution, d: Complex3Vector, x: f64, v: [f64; 2]) -> f64 {
    limit_shift(&request(m, regime, c, d, x, v)).unwrap().value
}

fn ti() -> MediumSpec {
    MediumSpec::topological_insulator(2.0, 1.0, 0.22).unwrap()
}

const CONTRIBUTIONS: [Contribution; 3] = [Contribution::Resonant, Contribution::Nonresonant, Contribution::Velocity];

#[test]
fn table_row_n40() {
    let v = [300.0, 0.0];
    let k = AtomKinematics::new(1e-6, v).unwrap();
    let rq = |m, c, t: &RydbergTransition| AsymptoticRequest {
        medium: m,
        regime: Regime::Nonretarded,
        contribution: c,
        transition: hydrogen_dipole(t),
        kinematics: k,
    };
    let circ_z = RydbergTransition::new(40, RydbergKind::M1Circular, [0.0, 0.0, 1.0]).unwrap();
    let circ_x = RydbergTransition::new(40, RydbergKind::M1Circular, [1.0, 0.0, 0.0]).unwrap();
    let lin = RydbergTransition::new(40, RydbergKind::M0Linear, [0.0, 1.0, 1.0]).unwrap();
    let nrm = MediumSpec::NonreciprocalMirror(MirrorSign::Minus);
    let mut bare = rq(nrm, Contribution::Nonresonant, &circ_z);
    bare.kinematics = k.with_velocity([0.0, 0.0]).unwrap();
    let bare = limit_shift(&bare).unwrap();
    assert!(rel(bare.value, 4.677e8) < 5e-3, "{}", bare.value);
    assert!(bare.warning.is_none());
    let nv = limit_shift(&rq(nrm, Contribution::Velocity, &lin)).unwrap().value;
    assert!(rel(nv.abs(), 1.470e3) < 5e-3, "{nv}");
    let cv = limit_shift(&rq(MediumSpec::ChiralMirror(Handedness::Left), Contribution::Velocity, &circ_x)).unwrap().value;
    assert!(rel(cv, 2.941e3) < 5e-3, "{cv}");
}

#[test]
fn gates_and_warnings() {
    let d = dipole([(0.0, 0.0), (0.7, 0.0), (0.7, 0.0)]);
    let mut rq = request(MediumSpec::PerfectConductor, Regime::Retarded, Contribution::Nonresonant, d, 1.0, [0.0; 2]);
    rq.transition = rq.transition.with_omega(0.0).unwrap();
    assert_eq!(limit_shift(&rq), Err(Error::MissingFrequency));
    rq.regime = Regime::Nonretarded;
    assert!(limit_shift(&rq).unwrap().value > 0.0);
    rq.contribution = Contribution::Resonant;
    assert_eq!(limit_shift(&rq).unwrap().value, 0.0);
    rq.transition = rq.transition.with_omega(-1e14).unwrap();
    assert_eq!(limit_shift(&rq).unwrap().value, 0.0);

    let warn = |regime, x| limit_shift(&request(ti(), regime, Contribution::Nonresonant, d, x, [0.0; 2])).unwrap().warning;
    assert!(warn(Regime::Retarded, 5.0).is_some());
    assert!(warn(Regime::Retarded, 5.01).is_none());
    assert!(warn(Regime::Nonretarded, 0.2).is_some());
    assert!(warn(Regime::Nonretarded, 0.19).is_none());
    assert_eq!("nres".parse::<Contribution>(), Ok(Contribution::Nonresonant));
    assert!("other".parse::<Contribution>().is_err());
}

#[test]
fn conductor_velocity_vanishes_for_transverse_dipoles() {
    let d = dipole([(0.0, 0.0), (0.5, 0.3), (0.1, -0.8)]);
    for regime in [Regime::Retarded, Regime::Nonretarded] {
        let v = value(MediumSpec::PerfectConductor, regime, Contribution::Velocity, d, 10.0, [400.0, 0.0]);
        assert_eq!(v, 0.0);
    }
}

#[test]
fn retarded_velocity_nodes() {
    // cos(2ω̃z/c) = 0
    let d = dipole([(0.0, 0.0), (0.7, 0.0), (0.7, 0.0)]);
    let x = PI / 4.0 * 9.0;
    let at_node = value(MediumSpec::NonreciprocalMirror(MirrorSign::Minus), Regime::Retarded, Contribution::Velocity, d, x, [300.0, 0.0]);
    let off = value(MediumSpec::NonreciprocalMirror(MirrorSign::Minus), Regime::Retarded, Contribution::Velocity, d, x + 0.5, [300.0, 0.0]);
    assert!(at_node.abs() < 1e-13 * off.abs());
    let dc = dipole([(0.0, 0.0), (0.7, 0.0), (0.0, 0.7)]);
    let chiral = value(MediumSpec::ChiralMirror(Handedness::Right), Regime::Retarded, Contribution::Velocity, dc, x, [300.0, 0.0]);
    assert!(chiral.abs() < 1e-13 * off.abs().max(1.0));
}

#[test]
fn chiral_mirror_position_terms_vanish() {
    let d = dipole([(0.3, 0.1), (0.7, -0.2), (0.1, 0.7)]);
    for h in [Handedness::Left, Handedness::Right] {
        for regime in [Regime::Retarded, Regime::Nonretarded] {
            for c in [Contribution::Resonant, Contribution::Nonresonant] {
                assert_eq!(value(MediumSpec::ChiralMirror(h), regime, c, d, 10.0, [0.0; 2]), 0.0);
            }
        }
    }
}

/// The TI forms recombine from the conductor forms (weights r_pp, r_ss) and the
/// nonreciprocal forms (weight −r_sp, since the latter are written for r_sp = −1).
#[test]
fn ti_recomposition_retarded_position_terms() {
    let d = dipole([(0.4, 0.2), (0.1, -0.6), (0.5, 0.3)]);
    let r = reflection_limit(&ti(), Regime::Retarded).unwrap();
    assert!((r.ss.re + r.pp.re).abs() < 1e-15);
    let a = AtomTerms::new(&TransitionSpec::new(d, 30.0 * SI.c / Z, "t").unwrap(), &AtomKinematics::new(Z, [0.0; 2]).unwrap());
    for c in [Contribution::Resonant, Contribution::Nonresonant] {
        let direct = topological_insulator(&a, &r, Regime::Retarded, c);
        let recomposed = r.pp.re * conductor(&a, Regime::Retarded, c) - r.sp.re * nonreciprocal(&a, Regime::Retarded, c);
        assert!(rel(direct, recomposed) < 1e-12, "{c}: {direct} vs {recomposed}");
    }
}

#[test]
fn ti_recomposition_nonretarded_nonresonant_carries_extra_pi() {
    let d = dipole([(0.4, 0.2), (0.1, -0.6), (0.5, 0.3)]);
    let r = reflection_limit(&ti(), Regime::Nonretarded).unwrap();
    let a = AtomTerms::new(&TransitionSpec::new(d, 1e-3 * SI.c / Z, "t").unwrap(), &AtomKinematics::new(Z, [0.0; 2]).unwrap());
    let direct = topological_insulator(&a, &r, Regime::Nonretarded, Contribution::Nonresonant);
    let cond = conductor(&a, Regime::Nonretarded, Contribution::Nonresonant);
    let nrm = nonreciprocal(&a, Regime::Nonretarded, Contribution::Nonresonant);
    assert!(rel(direct, PI * r.pp.re * cond - r.sp.re * nrm) < 1e-12);
}

#[test]
fn ti_velocity_against_nonreciprocal_forms() {
    let d = dipole([(0.0, 0.0), (0.6, 0.1), (0.5, -0.4)]);
    let k = AtomKinematics::new(Z, [250.0, 0.0]).unwrap();
    for (regime, x, sign) in [(Regime::Nonretarded, 1e-3, -1.0), (Regime::Retarded, 20.3, 1.0)] {
        let r = reflection_limit(&ti(), regime).unwrap();
        let a = AtomTerms::new(&TransitionSpec::new(d, x * SI.c / Z, "t").unwrap(), &k);
        assert_eq!(a.s, 0.0);
        let direct = topological_insulator(&a, &r, regime, Contribution::Velocity);
        let nrm = nonreciprocal(&a, regime, Contribution::Velocity);
        // nonretarded: −r_sp weight as for the position terms; retarded: opposite sign
        assert!(rel(direct, sign * r.sp.re * nrm) < 1e-12, "{regime}");
    }
}

#[test]
fn achiral_chiral_medium_matches_dielectric_ti() {
    let chiral = MediumSpec::isotropic_chiral_real(2.0, 1.0, 0.0).unwrap();
    let diel = MediumSpec::topological_insulator(2.0, 1.0, 0.0).unwrap();
    let d = dipole([(0.4, 0.2), (0.1, -0.6), (0.5, 0.3)]);
    for (regime, x) in [(Regime::Retarded, 20.0), (Regime::Nonretarded, 1e-3)] {
        for c in CONTRIBUTIONS {
            let a = value(chiral, regime, c, d, x, [0.0; 2]);
            let b = value(diel, regime, c, d, x, [0.0; 2]);
            assert!((a - b).abs() <= 1e-12 * b.abs(), "{regime} {c}: {a} vs {b}");
        }
    }
}

#[test]
fn chiral_medium_forms_at_mirror_coefficients() {
    let d = dipole([(0.0, 0.0), (0.7, 0.0), (0.0, 0.7)]);
    let k = AtomKinematics::new(Z, [300.0, 0.0]).unwrap();
    for h in [Handedness::Left, Handedness::Right] {
        let r = cpshift_fresnel::reflection_ideal(&MediumSpec::ChiralMirror(h)).unwrap();
        for (regime, x, sign) in [(Regime::Nonretarded, 1e-3, 1.0), (Regime::Retarded, 20.0, -1.0)] {
            let a = AtomTerms::new(&TransitionSpec::new(d, x * SI.c / Z, "t").unwrap(), &k);
            let medium = chiral_medium(&a, &r, regime, Contribution::Velocity);
            let mirror = chiral_mirror(&a, h, regime, Contribution::Velocity);
            assert!(rel(medium, sign * mirror) < 1e-12, "{h:?} {regime}");
        }
    }
}

#[test]
fn chiral_medium_flips_with_kappa_in_velocity_only() {
    let m = MediumSpec::isotropic_chiral_real(2.0, 1.0, 0.3).unwrap();
    let d = dipole([(0.0, 0.0), (0.6, 0.1), (0.2, 0.7)]);
    for (regime, x) in [(Regime::Retarded, 20.0), (Regime::Nonretarded, 1e-3)] {
        for c in CONTRIBUTIONS {
            let a = value(m, regime, c, d, x, [300.0, 0.0]);
            let b = value(m.mirrored(), regime, c, d, x, [300.0, 0.0]);
            let expected = if c == Contribution::Velocity { -a } else { a };
            assert!((b - expected).abs() <= 1e-12 * a.abs(), "{regime} {c}");
        }
    }
}

fn slope(f: impl Fn(f64) -> f64, z: f64) -> f64 {
    let h = 1e-3;
    ((f(z * (1.0 + h)) / f(z * (1.0 - h))).abs().ln()) / ((1.0 + h) / (1.0 - h)).ln()
}

#[test]
fn power_laws() {
    let d = dipole([(0.5, 0.0), (0.0, 0.5), (0.5, 0.2)]);
    let omega = 1e-3 * SI.c / Z;
    let t = TransitionSpec::new(d, omega, "t").unwrap();
    let at = |m: MediumSpec, regime, c, z: f64| {
        limit_shift(&AsymptoticRequest {
            medium: m,
            regime,
            contribution: c,
            transition: t.clone(),
            kinematics: AtomKinematics::new(z, [0.0; 2]).unwrap(),
        })
        .unwrap()
        .value
    };
    for m in [MediumSpec::PerfectConductor, MediumSpec::NonreciprocalMirror(MirrorSign::Minus), ti()] {
        let s = slope(|z| at(m, Regime::Nonretarded, Contribution::Nonresonant, z), Z);
        assert!((s + 3.0).abs() < 1e-6, "{}: {s}", m.kind());
    }
    let s = slope(|z| at(MediumSpec::NonreciprocalMirror(MirrorSign::Minus), Regime::Retarded, Contribution::Nonresonant, z), 1e-2);
    assert!((s + 5.0).abs() < 1e-6, "{s}");
    let s = slope(|z| at(MediumSpec::PerfectConductor, Regime::Retarded, Contribution::Nonresonant, z), 1e-2);
    assert!((s + 4.0).abs() < 1e-6, "{s}");
}

#[test]
fn decay_rate_limits() {
    let d = dipole([(0.4, 0.2), (0.1, -0.6), (0.5, 0.3)]);
    let mut rq = request(MediumSpec::PerfectConductor, Regime::Retarded, Contribution::Resonant, d, 0.0 + 1e-3, [0.0; 2]);
    // close to the surface the conductor's decay rate approaches the doubled (|d_z|²) or
    // cancelled (|d_∥|²) free-space rate ω̃³|d|²/(3πħε₀c³)
    let free = |d_sq: f64, w: f64| w.powi(3) * d_sq / (3.0 * PI * SI.hbar * SI.eps0 * SI.c.powi(3));
    let w = rq.transition.omega_nk();
    let g = limit_decay_rate(&rq).unwrap();
    let dz2 = d.z.norm_sqr();
    assert!(rel(g.value + free(dz2 + d.parallel_norm_sqr(), w), 2.0 * free(dz2, w)) < 1e-5, "{}", g.value);
    assert!(g.warning.is_some());

    rq.transition = rq.transition.with_omega(0.0).unwrap();
    assert_eq!(limit_decay_rate(&rq).unwrap().value, 0.0);

    // TI retarded: decay equals (2μ₀/ħ)ω̃² Im q of the constant-coefficient tensor
    let rq = request(ti(), Regime::Retarded, Contribution::Resonant, d, 40.0, [0.0; 2]);
    let w = rq.transition.omega_nk();
    let g = moments_constant(&reflection_limit(&ti(), Regime::Retarded).unwrap(), Z, w.into()).unwrap().plain();
    let q = contract(d, &g, d.conj());
    assert!(rel(limit_decay_rate(&rq).unwrap().value, 2.0 * SI.mu0 / SI.hbar * w * w * q.im) < 1e-14);
    // and the resonant retarded form reproduces −(μ₀/ħ)ω̃² Re q to O(c/ω̃z)
    let res = limit_shift(&rq).unwrap().value;
    let exact = -SI.mu0 / SI.hbar * w * w * q.re;
    assert!((res - exact).abs() < 0.05 * (SI.mu0 / SI.hbar * w * w * d.norm_sqr() / (8.0 * PI * Z)));
}

proptest! {
    #[test]
    fn mirror_sign_and_linearity(
        re in proptest::array::uniform3(-1.0f64..1.0),
        im in proptest::array::uniform3(-1.0f64..1.0),
        x in 0.001f64..0.1,
        lam in 0.1f64..5.0,
    ) {
        let d = dipole([(re[0], im[0]), (re[1], im[1]), (re[2], im[2])]);
        prop_assume!(d.norm() > 0.1 * D0);
        let ds = d * lam.sqrt();
        for regime in [Regime::Retarded, Regime::Nonretarded] {
            let x = if regime == Regime::Retarded { 1e3 * x } else { x };
            for c in CONTRIBUTIONS {
                let minus = value(MediumSpec::NonreciprocalMirror(MirrorSign::Minus), regime, c, d, x, [0.0; 2]);
                let plus = value(MediumSpec::NonreciprocalMirror(MirrorSign::Plus), regime, c, d, x, [0.0; 2]);
                prop_assert!((plus + minus).abs() <= 1e-14 * minus.abs());
                let a = value(ti(), regime, c, d, x, [0.0; 2]);
                let b = value(ti(), regime, c, ds, x, [0.0; 2]);
                prop_assert!((b - lam * a).abs() <= 1e-12 * (lam * a).abs().max(1e-300));
            }
        }
    }
}
