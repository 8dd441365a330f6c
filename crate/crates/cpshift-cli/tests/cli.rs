use clap::Parser;
use cpshift_cli::*;
use std::io::Write;

fn flags() -> Flags {
    Flags::default()
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn with_config(text: &str) -> (Flags, tempfile::NamedTempFile) {
    let f = config_file(text);
    (Flags { config: Some(f.path().to_path_buf()), ..flags() }, f)
}

/// Header row and data rows of the CSV body, skipping `#` lines.
fn body(csv_text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(csv_text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(csv_text: &str, name: &str) -> Vec<f64> {
    let (h, rows) = body(csv_text);
    let i = h.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name} in {h:?}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() - 1;
    (ys[n].abs().ln() - ys[0].abs().ln()) / (xs[n].ln() - xs[0].ln())
}

#[test]
fn unknown_keys_and_bad_values_name_the_key() {
    let mut raw = RawConfig::default();
    let e = raw.set("medium.colour", "red").unwrap_err().to_string();
    assert!(e.contains("medium.colour"), "{e}");
    let e = raw.merge_str("# scenario\nmedium.kind = ti\nmedium.eps2 = 2\nmedium.kind = chiral\n").unwrap_err().to_string();
    assert!(e.contains("medium.kind"), "{e}");
    raw.merge_str("kinematics.z_a = 2e-6   # trailing comment\n").unwrap();
    assert_eq!(raw.get("kinematics.z_a"), "2e-6");
    let mut raw = RawConfig::default();
    let e = raw.merge_str("kinematics.z_a 1e-6\n").unwrap_err().to_string();
    assert!(e.contains("line 1"), "{e}");
    let (f, _keep) = with_config("medium.kind = bogus\n");
    let e = execute(Command::Sweep, &f).unwrap_err().to_string();
    assert!(e.contains("medium.kind"), "{e}");
    let (f, _keep) = with_config("kinematics.z_min = -1\n");
    let e = execute(Command::Sweep, &f).unwrap_err().to_string();
    assert!(e.contains("kinematics.z_min"), "{e}");
}

#[test]
fn invalid_medium_parameters_are_rejected() {
    let (f, _keep) = with_config("medium.kind = topological-insulator\nmedium.delta = 1.5\n");
    assert!(execute(Command::Sweep, &f).unwrap_err().to_string().contains("delta"));
}

#[test]
fn flags_override_the_config_file() {
    let (mut f, _keep) = with_config("medium.kind = chiral-mirror\nkinematics.z_a = 2e-6\n");
    f.medium = Some("perfect-conductor".into());
    f.z = Some(3e-7);
    let raw = resolve_config(Command::Sweep, &f).unwrap();
    assert_eq!(raw.get("medium.kind"), "perfect-conductor");
    assert_eq!(raw.z_grid().unwrap(), vec![3e-7]);
    let table = resolve_config(Command::Table, &flags()).unwrap();
    assert_eq!(table.get("kinematics.v_x"), "300");
    assert_eq!(resolve_config(Command::Sweep, &flags()).unwrap().get("kinematics.v_x"), "0");
}

#[test]
fn table_defaults_and_velocity_scaling() {
    let (r, _) = execute(Command::Table, &flags()).unwrap();
    let (h, rows) = body(&r.csv);
    assert_eq!(h[0], "n_bar");
    assert_eq!(rows.len(), 4);
    for name in ["R_nk_rel_dev", "bare_rel_dev", "v_nonreciprocal_rel_dev", "v_chiral_rel_dev"] {
        assert!(column(&r.csv, name).iter().all(|d| *d < 5e-3), "{name}");
    }
    let f = Flags { velocity: Some(600.0), nbar: Some(40), ..flags() };
    let (fast, _) = execute(Command::Table, &f).unwrap();
    assert_eq!(body(&fast.csv).1.len(), 1);
    let ratio = column(&fast.csv, "v_chiral")[0] / column(&r.csv, "v_chiral")[1];
    assert!((ratio - 2.0).abs() < 1e-7);
    assert_eq!(column(&fast.csv, "bare")[0], column(&r.csv, "bare")[1]);
}

#[test]
fn sweep_breakdowns() {
    let (r, _) = execute(Command::Sweep, &flags()).unwrap();
    assert_eq!(body(&r.csv).1.len(), 31);
    assert!(column(&r.csv, "velocity").iter().all(|v| *v == 0.0));

    let (mut f, _keep) = with_config("transition.omega_nk = 1e10\n");
    f.medium = Some("chiral-mirror".into());
    f.velocity = Some(300.0);
    let (r, _) = execute(Command::Sweep, &f).unwrap();
    assert!(column(&r.csv, "resonant").iter().chain(&column(&r.csv, "nonresonant")).all(|v| *v == 0.0));
    assert!(column(&r.csv, "velocity").iter().all(|v| *v != 0.0));

    let (f, _keep) = with_config(
        "medium.kind = nonreciprocal-mirror\ntransition.axis = 0,0,1\nkinematics.z_max = 1e-6\nkinematics.points = 5\n",
    );
    let (r, _) = execute(Command::Sweep, &f).unwrap();
    let z = column(&r.csv, "z_A");
    assert!((slope(&z, &column(&r.csv, "total")) + 3.0).abs() < 1e-3);
}

#[test]
fn output_is_deterministic() {
    let f = Flags { medium: Some("topological-insulator".into()), velocity: Some(250.0), ..flags() };
    let a = execute(Command::Sweep, &f).unwrap().0.csv;
    let b = execute(Command::Sweep, &f).unwrap().0.csv;
    assert_eq!(a, b);
    assert!(a.starts_with("# cpshift sweep\n"));
    assert!(a.contains("# medium.kind = topological-insulator\n"));
}

#[test]
fn achiral_chiral_medium_matches_dielectric() {
    let common = "medium.eps2 = 3\nmedium.delta = 0\nmedium.kappa2 = 0\ntransition.source = explicit\ntransition.omega_nk = 3e14\nkinematics.points = 6\n";
    let (a, _ka) = with_config(&format!("medium.kind = isotropic-chiral\n{common}"));
    let (b, _kb) = with_config(&format!("medium.kind = topological-insulator\n{common}"));
    let ca = execute(Command::Sweep, &a).unwrap().0.csv;
    let cb = execute(Command::Sweep, &b).unwrap().0.csv;
    for name in ["resonant", "nonresonant", "decay_rate"] {
        for (x, y) in column(&ca, name).iter().zip(column(&cb, name)) {
            assert!((x - y).abs() <= 1e-6 * y.abs(), "{name}: {x} vs {y}");
        }
    }
}

#[test]
fn greens_and_fresnel_shapes() {
    let (f, _keep) = with_config("kinematics.points = 4\n");
    let (g, _) = execute(Command::Greens, &f).unwrap();
    let (h, rows) = body(&g.csv);
    assert_eq!(h.len(), 20);
    assert_eq!(rows.len(), 4);
    assert_eq!((h[0].as_str(), h[19].as_str()), ("z_A", "quad_err"));

    let f = Flags { medium: Some("isotropic-chiral".into()), ..flags() };
    let (r, _) = execute(Command::Fresnel, &f).unwrap();
    let (h, rows) = body(&r.csv);
    assert_eq!(h.len(), 9);
    assert_eq!(rows.len(), 61);
    let sp = column(&r.csv, "im_sp");
    let ps = column(&r.csv, "im_ps");
    assert!(sp.iter().zip(&ps).all(|(a, b)| a == &-b));
}

#[test]
fn compare_full_mode_for_conductor() {
    let (f, _keep) = with_config(
        "compare.regime = full\ncompare.contribution = resonant\ntransition.source = explicit\ntransition.omega_nk = 1e15\nkinematics.points = 7\n",
    );
    let (r, _) = execute(Command::CompareAsymptotics, &f).unwrap();
    assert!(column(&r.csv, "rel_dev").iter().all(|d| *d < 1e-6));
    assert!(r.csv.contains("# summary:"));

    let (f, _keep) = with_config("compare.regime = full\nmedium.kind = ti\n");
    let e = execute(Command::CompareAsymptotics, &f).unwrap_err().to_string();
    assert!(e.contains("compare.regime"), "{e}");
}

#[test]
fn compare_nonretarded_nonreciprocal_static_shift() {
    let (f, _keep) = with_config(
        "medium.kind = nonreciprocal-mirror\ntransition.axis = 0,0,1\ntransition.omega_nk = 1e10\nkinematics.z_max = 1e-6\nkinematics.points = 4\n",
    );
    let (r, _) = execute(Command::CompareAsymptotics, &f).unwrap();
    // the exact quasi-static shift is twice the published nonretarded form
    let ratios: Vec<f64> = column(&r.csv, "numeric").iter().zip(column(&r.csv, "asymptotic")).map(|(n, a)| n / a).collect();
    assert!(ratios.iter().all(|q| (q - 2.0).abs() < 1e-3), "{ratios:?}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let cli = Cli::parse_from(["cpshift", "table", "--nbar", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(run(&cli), 0);
    assert!(std::fs::read_to_string(&out).unwrap().contains("n_bar,R_nk"));
    let cli = Cli::parse_from(["cpshift", "sweep", "--medium", "bogus"]);
    assert_eq!(run(&cli), 2);
    let cfg = config_file("numerics.max_subdivisions = 1\nnumerics.rel_tol = 1e-14\ntransition.source = explicit\ntransition.omega_nk = 1e15\nmedium.kind = ti\nkinematics.points = 2\n");
    let cli = Cli::parse_from(["cpshift", "sweep", "--config", cfg.path().to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run(&cli), 1);
    assert!(std::fs::read_to_string(&out).unwrap().contains(NON_CONVERGENCE));
    let cli = Cli::parse_from(["cpshift", "sweep", "--velocity", "-300", "--z", "1e-7", "--out", out.to_str().unwrap()]);
    assert_eq!(cli.flags.velocity, Some(-300.0));
    assert_eq!(run(&cli), 0);
}
