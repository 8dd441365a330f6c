use crate::config::{GreensMethod, RawConfig, RegimeChoice};
use cpshift_asymptotics::{limit_shift, AsymptoticRequest, Contribution};
use cpshift_atom::{hydrogen_dipole, rotatory_responses, RydbergKind, RydbergTransition};
use cpshift_core::{AtomKinematics, Error, Handedness, MediumSpec, MirrorSign, Regime, Result, TransitionSpec, SI};
use cpshift_fresnel::{reflection, WaveKinematics};
use cpshift_greens::{green_closed, moments, moments_numeric, BlockKind};
use cpshift_shifts::{nonresonant_shift, regime_of, resonant_shift, total_shift, velocity_shift, ShiftOptions};
use rayon::prelude::*;

/// CSV text plus the number of rows flagged as non-converged.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub flagged: usize,
    pub warnings: Vec<String>,
}

pub const NON_CONVERGENCE: &str = "NonConvergence";

/// Scientific notation with 9 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn render(command: &str, raw: &RawConfig, header: &[&str], rows: &[Vec<String>], trailer: &[String]) -> Result<String> {
    let mut out = format!("# cpshift {command}\n");
    for (k, v) in raw.iter() {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    for line in trailer {
        out.push_str(&format!("# {line}\n"));
    }
    Ok(out)
}

/// Values printed in the Rydberg table for n̄ = 20, 40, 60, 80.
pub const TABLE_NBARS: [u32; 4] = [20, 40, 60, 80];
pub const TABLE_PRINTED: [[f64; 4]; 4] = [
    [1.291e-51, 2.918e7, 9.173e1, 1.835e2],
    [2.069e-50, 4.677e8, 1.470e3, 2.941e3],
    [1.048e-49, 2.369e9, 7.446e3, 1.489e4],
    [3.312e-49, 7.487e9, 2.354e4, 4.707e4],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub n_bar: u32,
    pub rotatory_strength: f64,
    pub bare: f64,
    pub v_nonreciprocal: f64,
    pub v_chiral: f64,
}

impl TableRow {
    pub fn values(&self) -> [f64; 4] {
        [self.rotatory_strength, self.bare, self.v_nonreciprocal, self.v_chiral]
    }

    /// Relative deviation of each magnitude from the printed value, if n̄ is tabulated.
    pub fn deviations(&self) -> Option<[f64; 4]> {
        let i = TABLE_NBARS.iter().position(|&n| n == self.n_bar)?;
        let p = TABLE_PRINTED[i];
        let v = self.values();
        Some(std::array::from_fn(|j| (v[j].abs() - p[j]).abs() / p[j]))
    }
}

/// One row of the Rydberg table from the nonretarded limit forms at ω̃ = 0.
///
/// The rotatory strength and the chiral-mirror shift use the circular transition about
/// the velocity axis, the bare shift the circular transition about ẑ, and the
/// nonreciprocal velocity shift the linear transition along ŷ+ẑ.
pub fn table_row(n_bar: u32, v: f64, z: f64) -> Result<TableRow> {
    let vel = [v, 0.0];
    let circ_v = hydrogen_dipole(&RydbergTransition::new(n_bar, RydbergKind::M1Circular, [1.0, 0.0, 0.0])?);
    let circ_z = hydrogen_dipole(&RydbergTransition::new(n_bar, RydbergKind::M1Circular, [0.0, 0.0, 1.0])?);
    let lin = hydrogen_dipole(&RydbergTransition::new(n_bar, RydbergKind::M0Linear, [0.0, 1.0, 1.0])?);
    let k = AtomKinematics::new(z, vel)?;
    let limit = |medium, contribution, transition: &TransitionSpec, kinematics| {
        limit_shift(&AsymptoticRequest {
            medium,
            regime: Regime::Nonretarded,
            contribution,
            transition: transition.clone(),
            kinematics,
        })
        .map(|l| l.value)
    };
    let nrm = MediumSpec::NonreciprocalMirror(MirrorSign::Minus);
    Ok(TableRow {
        n_bar,
        rotatory_strength: rotatory_responses(circ_v.dipole(), vel).r,
        bare: limit(nrm, Contribution::Nonresonant, &circ_z, k.with_velocity([0.0, 0.0])?)?,
        v_nonreciprocal: limit(nrm, Contribution::Velocity, &lin, k)?,
        v_chiral: limit(MediumSpec::ChiralMirror(Handedness::Left), Contribution::Velocity, &circ_v, k)?,
    })
}

pub fn cmd_table(raw: &RawConfig, n_bars: &[u32]) -> Result<Report> {
    let v: f64 = raw.velocity()?[0];
    let z = raw.get("kinematics.z_a").trim().parse::<f64>().map_err(|e| {
        Error::InvalidInput(format!("key 'kinematics.z_a': {e}"))
    })?;
    AtomKinematics::new(z, [v, 0.0]).map_err(|e| Error::InvalidInput(format!("key 'kinematics.z_a': {e}")))?;
    let header = [
        "n_bar", "R_nk", "R_nk_rel_dev", "bare", "bare_rel_dev", "v_nonreciprocal", "v_nonreciprocal_rel_dev",
        "v_chiral", "v_chiral_rel_dev",
    ];
    let mut rows = Vec::new();
    for &n in n_bars {
        let row = table_row(n, v, z)?;
        let dev = row.deviations();
        let mut r = vec![n.to_string()];
        for (j, x) in row.values().into_iter().enumerate() {
            r.push(num(x));
            r.push(dev.map(|d| num(d[j])).unwrap_or_default());
        }
        rows.push(r);
    }
    let trailer = ["deviations compare magnitudes with the printed values (v = 300 m/s, z_A = 1e-6 m)".to_string()];
    Ok(Report { csv: render("table", raw, &header, &rows, &trailer)?, flagged: 0, warnings: vec![] })
}

fn is_nonconvergence(e: &Error) -> bool {
    matches!(e, Error::NonConvergence { .. })
}

pub fn cmd_sweep(raw: &RawConfig) -> Result<Report> {
    let medium = raw.medium()?;
    let t = raw.transition()?;
    let v = raw.velocity()?;
    let zs = raw.z_grid()?;
    let opts = raw.shift_options()?;
    let results: Vec<Result<_>> = zs
        .par_iter()
        .map(|&z| {
            let k = AtomKinematics::new(z, v)?;
            total_shift(&t, &k, &medium, &opts)
        })
        .collect();
    let mut rows = Vec::with_capacity(zs.len());
    let mut flagged = 0;
    let mut warnings = Vec::new();
    for (z, r) in zs.iter().zip(results) {
        match r {
            Ok(b) => {
                for w in &b.meta.warnings {
                    if !warnings.contains(w) {
                        warnings.push(w.clone());
                    }
                }
                rows.push(vec![
                    num(*z),
                    num(b.resonant),
                    num(b.nonresonant),
                    num(b.velocity),
                    num(b.total()),
                    num(b.decay_rate),
                    num(b.meta.quad_error),
                ]);
            }
            Err(e) if is_nonconvergence(&e) => {
                flagged += 1;
                let nan = num(f64::NAN);
                rows.push(vec![num(*z), nan.clone(), nan.clone(), nan.clone(), nan.clone(), nan, NON_CONVERGENCE.into()]);
            }
            Err(e) => return Err(e),
        }
    }
    let header = ["z_A", "resonant", "nonresonant", "velocity", "total", "decay_rate", "quad_err"];
    Ok(Report { csv: render("sweep", raw, &header, &rows, &[])?, flagged, warnings })
}

/// Numeric value of one contribution.
pub fn numeric_contribution(
    c: Contribution,
    t: &TransitionSpec,
    k: &AtomKinematics,
    m: &MediumSpec,
    opts: &ShiftOptions,
) -> Result<f64> {
    match c {
        Contribution::Resonant => resonant_shift(t, k, m, opts),
        Contribution::Nonresonant => nonresonant_shift(t, k, m, opts),
        Contribution::Velocity => velocity_shift(t, k, m, opts),
    }
}

/// Resonant shift −(μ₀/ħ)ω̃² Re[d·G·d*] with G from quadrature or from the closed form.
fn resonant_from_tensor(t: &TransitionSpec, k: &AtomKinematics, m: &MediumSpec, opts: &ShiftOptions, closed: bool) -> Result<f64> {
    let w = t.omega_nk();
    if w <= 0.0 {
        return Ok(0.0);
    }
    let g = if closed {
        green_closed(m, k.z_a(), w.into())?.value
    } else {
        moments_numeric(m, k.z_a(), w.into(), &opts.quad)?.plain()
    };
    let d = t.dipole();
    Ok(-SI.mu0 / SI.hbar * w * w * cpshift_core::contract(d, &g, d.conj()).re)
}

pub fn relative_deviation(numeric: f64, reference: f64) -> f64 {
    if numeric == reference {
        0.0
    } else {
        (numeric - reference).abs() / reference.abs()
    }
}

pub fn cmd_compare_asymptotics(raw: &RawConfig) -> Result<Report> {
    let medium = raw.medium()?;
    let t = raw.transition()?;
    let v = raw.velocity()?;
    let zs = raw.z_grid()?;
    let opts = raw.shift_options()?;
    let choice = raw.regime()?;
    let contribution = raw.contribution()?;
    if choice == RegimeChoice::Full && !(medium.is_ideal() && contribution == Contribution::Resonant) {
        return Err(Error::InvalidInput(
            "key 'compare.regime': 'full' compares the exact closed form and needs an ideal mirror with compare.contribution = resonant".into(),
        ));
    }
    let results: Vec<Result<(f64, f64, Option<String>)>> = zs
        .par_iter()
        .map(|&z| {
            let k = AtomKinematics::new(z, v)?;
            match choice {
                RegimeChoice::Full => {
                    let n = resonant_from_tensor(&t, &k, &medium, &opts, false)?;
                    let a = resonant_from_tensor(&t, &k, &medium, &opts, true)?;
                    Ok((n, a, None))
                }
                RegimeChoice::Retarded | RegimeChoice::Nonretarded => {
                    let regime = if choice == RegimeChoice::Retarded { Regime::Retarded } else { Regime::Nonretarded };
                    let lim = limit_shift(&AsymptoticRequest {
                        medium,
                        regime,
                        contribution,
                        transition: t.clone(),
                        kinematics: k,
                    })?;
                    let n = numeric_contribution(contribution, &t, &k, &medium, &opts)?;
                    Ok((n, lim.value, lim.warning))
                }
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut flagged = 0;
    let mut warnings = Vec::new();
    let mut max_dev: f64 = 0.0;
    let mut in_window = 0usize;
    for (z, r) in zs.iter().zip(results) {
        match r {
            Ok((n, a, w)) => {
                let dev = relative_deviation(n, a);
                let inside = match choice {
                    RegimeChoice::Full => true,
                    RegimeChoice::Retarded => regime_of(t.omega_nk(), *z) == Some(Regime::Retarded),
                    RegimeChoice::Nonretarded => regime_of(t.omega_nk(), *z) == Some(Regime::Nonretarded),
                };
                if inside {
                    in_window += 1;
                    max_dev = max_dev.max(dev);
                }
                if let Some(w) = w {
                    warnings.push(format!("z_A = {}: {w}", num(*z)));
                }
                rows.push(vec![num(*z), num(n), num(a), num(dev)]);
            }
            Err(e) if is_nonconvergence(&e) => {
                flagged += 1;
                rows.push(vec![num(*z), NON_CONVERGENCE.into(), String::new(), String::new()]);
            }
            Err(e) => return Err(e),
        }
    }
    let summary = if in_window > 0 {
        format!("summary: contribution = {contribution}, points in regime window = {in_window}, max rel_dev in window = {}", num(max_dev))
    } else {
        format!("summary: contribution = {contribution}, no points inside the regime window")
    };
    let header = ["z_A", "numeric", "asymptotic", "rel_dev"];
    Ok(Report { csv: render("compare-asymptotics", raw, &header, &rows, &[summary])?, flagged, warnings })
}

const ENTRY: [&str; 3] = ["x", "y", "z"];

pub fn cmd_greens(raw: &RawConfig) -> Result<Report> {
    let medium = raw.medium()?;
    let zs = raw.z_grid()?;
    let v = raw.velocity()?;
    let opts = raw.shift_options()?;
    let omega = raw.frequency("greens")?;
    let block = raw.greens_block()?;
    let method = raw.greens_method()?;
    if method == GreensMethod::Closed && block != BlockKind::Plain {
        return Err(Error::InvalidInput("key 'greens.method': 'closed' is available for the plain block only".into()));
    }
    let results: Vec<Result<(cpshift_core::Matrix3, f64)>> = zs
        .par_iter()
        .map(|&z| match method {
            GreensMethod::Closed => Ok((green_closed(&medium, z, omega)?.value, 0.0)),
            GreensMethod::Numeric | GreensMethod::Auto => {
                let mom = if method == GreensMethod::Numeric {
                    moments_numeric(&medium, z, omega, &opts.quad)?
                } else {
                    moments(&medium, z, omega, &opts.quad)?
                };
                Ok((mom.block(block, v), mom.error))
            }
        })
        .collect();
    let mut header = vec!["z_A".to_string()];
    for a in ENTRY {
        for b in ENTRY {
            header.push(format!("re_{a}{b}"));
            header.push(format!("im_{a}{b}"));
        }
    }
    header.push("quad_err".into());
    let mut rows = Vec::new();
    let mut flagged = 0;
    for (z, r) in zs.iter().zip(results) {
        let mut row = vec![num(*z)];
        match r {
            Ok((g, err)) => {
                for line in g {
                    for e in line {
                        row.push(num(e.re));
                        row.push(num(e.im));
                    }
                }
                row.push(num(err));
            }
            Err(e) if is_nonconvergence(&e) => {
                flagged += 1;
                row.extend(vec![num(f64::NAN); 18]);
                row.push(NON_CONVERGENCE.into());
            }
            Err(e) => return Err(e),
        }
        rows.push(row);
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Ok(Report { csv: render("greens", raw, &header, &rows, &[])?, flagged, warnings: vec![] })
}

pub fn cmd_fresnel(raw: &RawConfig) -> Result<Report> {
    let medium = raw.medium()?;
    let omega = raw.frequency("fresnel")?;
    let qs = raw.fresnel_grid()?;
    let mut rows = Vec::with_capacity(qs.len());
    for q in qs {
        let w = WaveKinematics::new(omega, q * omega.norm() / SI.c)?;
        let r = reflection(&medium, &w)?;
        let mut row = vec![num(q)];
        for c in r.to_array() {
            row.push(num(c.re));
            row.push(num(c.im));
        }
        rows.push(row);
    }
    let header = ["k_par_over_k", "re_ss", "im_ss", "re_sp", "im_sp", "re_ps", "im_ps", "re_pp", "im_pp"];
    Ok(Report { csv: render("fresnel", raw, &header, &rows, &[])?, flagged: 0, warnings: vec![] })
}
