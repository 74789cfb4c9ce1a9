use std::path::Path;
use std::process::{Command, Output};

fn ciod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ciod-im")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const HEADER: &str = "snr_db,ber_bob,ber_bob_se,ber_eve,ber_eve_se,ber_bound,r_b,r_e,r_s,r_s_se,blocks,bit_errors_bob";

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && *l != HEADER)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn ber_writes_csv_and_seed_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg =
        write(dir.path(), "a.cfg", "n = 4\nm = 4\nsnr_db_grid = 0, 10\nmax_blocks = 2000\nbound = true\nseed = 5\n");
    let out = dir.path().join("res/a.csv");
    let o = ciod(&["ber", "--config", &cfg, "--out", out.to_str().unwrap(), "--seed", "9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# seed = 9\n"));
    assert!(csv.contains("# alpha = 0.5 (default)\n"));
    assert_eq!(csv.lines().filter(|l| *l == HEADER).count(), 1);
    let r = rows(&csv);
    assert_eq!(r.len(), 2);
    for row in &r {
        assert_eq!(row.len(), 12);
        assert!(!row[1].is_empty() && !row[5].is_empty());
        assert!(row[6].is_empty() && row[8].is_empty());
    }
}

#[test]
fn stdout_when_no_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.cfg", "snr_db_grid = 5\n");
    let o = ciod(&["bound", "--config", &cfg]);
    assert!(o.status.success());
    let csv = String::from_utf8(o.stdout).unwrap();
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "5");
    assert!(r[0][5].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn workers_flag_leaves_bytes_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.cfg", "snr_db_grid = 0, 6\nmax_blocks = 5000\n");
    let one = dir.path().join("one.csv");
    let many = dir.path().join("many.csv");
    assert!(ciod(&["ber", "--config", &cfg, "--out", one.to_str().unwrap(), "--workers", "1"]).status.success());
    assert!(ciod(&["ber", "--config", &cfg, "--out", many.to_str().unwrap(), "--workers", "3"]).status.success());
    assert_eq!(std::fs::read(one).unwrap(), std::fs::read(many).unwrap());
}

#[test]
fn sweep_writes_one_file_per_combination() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.cfg",
        "mode = esr\nalpha = 0.3, 0.9\nsnr_db_grid = 10\nchannel_draws = 3\nnoise_samples = 3\n",
    );
    let out = dir.path().join("s.csv");
    let o = ciod(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let a = std::fs::read_to_string(dir.path().join("s.0.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("s.1.csv")).unwrap();
    assert!(a.contains("# alpha = 0.3\n") && b.contains("# alpha = 0.9\n"));
    assert!(!dir.path().join("s.2.csv").exists());
    assert!(!rows(&a)[0][8].is_empty());
}

#[test]
fn invalid_config_fails_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [("n.cfg", "n = 6\n"), ("g.cfg", "snr_db_grid = 10, 0\n"), ("k.cfg", "speed = 3\n")] {
        let cfg = write(dir.path(), name, text);
        let o = ciod(&["ber", "--config", &cfg]);
        assert!(!o.status.success(), "{text}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        assert!(err.starts_with("ciod-im: config:"), "{err}");
    }
    let o = ciod(&["ber", "--config", "/nonexistent/x.cfg"]);
    assert!(!o.status.success());
}
