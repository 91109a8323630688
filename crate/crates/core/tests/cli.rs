use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ductwave::output::Table;

fn ductwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ductwave")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &str = "\
name = small
grid.length = 0.5
grid.cells = 50
geometry.h = 0.005
inflow.kind = velocity
inflow.waveform = sine
inflow.amplitude = 2
inflow.frequency = 1000
run.losses = on
run.periods = 3
probes.x = 0, 0.25, 0.5
output.sampling_exponent = 5
output.window_periods = 1
output.harmonics = 4
";

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("case.cfg");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn run_writes_tables_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = ductwave(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for name in ["probe_0.csv", "probe_2.csv", "window_1.csv", "spectrum_1.csv", "report.txt"] {
        let first = fs::read(a.join(name)).unwrap();
        assert_eq!(first, fs::read(b.join(name)).unwrap(), "{name} differs between runs");
    }
    let probe = fs::read_to_string(a.join("probe_1.csv")).unwrap();
    assert!(probe.starts_with("t_s,rho_kgpm3,u_mps,p_Pa\n"));
    let spectrum = Table::read(&a.join("spectrum_0.csv")).unwrap();
    assert_eq!(spectrum.rows(), 4);
    let u1 = spectrum.column("u_amplitude_mps").unwrap()[0];
    assert!((u1 - 2.0).abs() < 0.05, "inlet fundamental {u1}");
    let report = fs::read_to_string(a.join("report.txt")).unwrap();
    assert!(report.contains("losses = on"));
    assert!(report.contains("kernel_mode = consistent"));
}

#[test]
fn overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("o");
    let o = ductwave(&[
        "run", "--config", &cfg, "--out", out.to_str().unwrap(), "--losses", "off", "--kernel-mode", "as-printed",
        "--cfl", "0.5", "--truncate", "20",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("losses = off"));
    assert!(report.contains("kernel_mode = as-printed"));
    assert!(report.contains("history_truncation = 20"));
}

#[test]
fn emitted_presets_parse_back() {
    for name in ["simple-wave", "kirchhoff", "coupled", "trombone"] {
        let o = ductwave(&["scenario", name, "--emit-config"]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let text = stdout(&o);
        let doc = ductwave::config::ConfigDocument::parse(&text).unwrap();
        assert_eq!(doc.to_text(), text);
    }
    let o = ductwave(&["scenario", "tuba", "--emit-config"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trombone"));
}

#[test]
fn config_errors_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{SMALL}grid.colour = red\n"));
    let o = ductwave(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 15"), "{}", stderr(&o));
    let o = ductwave(&["run", "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.cfg");
    let o = ductwave(&["run", "--config", missing.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn oracle_refuses_the_shock_regime() {
    let o = ductwave(&["oracle-characteristics", "--s", "1.2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("shock"));
}

#[test]
fn kirchhoff_table() {
    let o = ductwave(&["oracle-kirchhoff", "--frequency", "1000", "--h", "0.005"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let corrected: Vec<Vec<&str>> =
        text.lines().skip(1).map(|l| l.split(',').collect::<Vec<_>>()).filter(|c| c[0] == "corrected").collect();
    assert_eq!(corrected.len(), 11);
    let ratio: Vec<f64> = corrected.iter().map(|c| c[5].parse().unwrap()).collect();
    assert_eq!(ratio[0], 1.0);
    assert!(ratio.windows(2).all(|w| w[1] < w[0]));
    assert!((ratio[10] - 0.829).abs() < 0.005);
    let alpha: f64 = corrected[0][3].parse().unwrap();
    assert!((alpha - 0.187).abs() < 0.002);
}

#[test]
fn compare_reports_relative_errors() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let rows: Vec<(f64, f64)> = (0..64).map(|i| (i as f64 * 1e-4, (i as f64 * 0.3).sin() + 2.0)).collect();
    let table = |scale: f64| {
        let mut s = String::from("t_s,u_mps\n");
        for (t, u) in &rows {
            s.push_str(&format!("{t},{}\n", scale * u));
        }
        s
    };
    fs::write(&a, table(1.0)).unwrap();
    fs::write(&b, table(1.05)).unwrap();
    let o = ductwave(&["compare", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("l2_relative_error = 0\n"));
    let o = ductwave(&["compare", b.to_str().unwrap(), a.to_str().unwrap()]);
    let text = stdout(&o);
    let l2: f64 = text.lines().next().unwrap().split(" = ").nth(1).unwrap().parse().unwrap();
    assert!((l2 - 0.05).abs() < 1e-12);
    fs::write(&b, "t_s,u_mps\n0,1\n").unwrap();
    let o = ductwave(&["compare", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simple_wave_run_matches_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let oracle = dir.path().join("oracle");
    let o = ductwave(&["scenario", "simple-wave", "--out", run.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = ductwave(&[
        "oracle-characteristics", "--s", "0.8", "--periods", "2", "--start-period", "3", "--out",
        oracle.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = ductwave(&[
        "compare",
        run.join("window_2.csv").to_str().unwrap(),
        oracle.join("oracle_series.csv").to_str().unwrap(),
        "--frequency",
        "200",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    for line in text.lines().skip_while(|l| !l.starts_with("k,")).skip(1) {
        let ratio: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "{line}");
    }
}
