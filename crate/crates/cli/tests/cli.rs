use std::path::Path;
use std::process::{Command, Output};

use kakutani_cli::error::exit;

fn kakutani(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kakutani")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn level_zero_is_the_unit_interval() {
    let o = kakutani(&["--scheme", "half-sixth-third", "partitions", "--levels", "0"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    assert_eq!(stdout(&o), "level,left,right,length,word\n0,0/1,1/1,1/1,()\n");
}

#[test]
fn lambda_one_counts_a_single_word_and_point() {
    let o = kakutani(&["--scheme", "half-third-sixth", "count", "--grid", "decade:0:0"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("1/1,1,1,1,1/1,1,"), "{row}");
}

#[test]
fn dyadic_discrepancy_column_halves() {
    let o = kakutani(&["discrepancy", "--grid", "ladder:1:10"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    for (n, line) in stdout(&o).lines().skip(1).enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[3], format!("1/{}", 1u64 << (n + 1)));
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        vec!["--scheme", "half-third-tail", "count", "--grid", "decade:0:4"],
        vec!["--scheme", "kakutani-third", "discrepancy", "--grid", "ladder:2:12"],
        vec!["--scheme", "powers-of-half", "analyze"],
        vec!["--scheme", "half-sixth-third", "partitions", "--svg"],
    ] {
        let mut seen = Vec::new();
        for threads in ["1", "4"] {
            let out = dir.path().join(format!("t{threads}"));
            let mut args = cmd.clone();
            let out_s = out.display().to_string();
            args.extend(["--threads", threads, "--out", &out_s]);
            let o = kakutani(&args);
            assert_eq!(o.status.code(), Some(exit::OK), "{}", String::from_utf8_lossy(&o.stderr));
            let mut files: Vec<_> = std::fs::read_dir(&out)
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (e.file_name(), std::fs::read(e.path()).unwrap())
                })
                .collect();
            files.sort();
            std::fs::remove_dir_all(&out).unwrap();
            seen.push(files);
        }
        assert_eq!(seen[0], seen[1], "{cmd:?}");
    }
}

#[test]
fn verify_passes_on_bundled_schemes() {
    let o = kakutani(&["verify"]);
    assert_eq!(o.status.code(), Some(exit::OK));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("PASS enumerate point-count-identity [half-third-tail]"));
}

#[test]
fn verify_reports_mass_not_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.toml",
        "schema_version = 1\nblocks = [ { kind = \"atom\", length = \"1/2\" }, { kind = \"atom\", length = \"1/3\" } ]\n",
    );
    let o = kakutani(&["--scheme", &path, "verify"]);
    assert_eq!(o.status.code(), Some(exit::INVARIANT));
    assert!(stdout(&o).contains("FAIL scheme MassNotOne"));
}

#[test]
fn zero_budget_is_a_budget_error() {
    for cmd in [vec!["points"], vec!["count"], vec!["verify"], vec!["partitions"]] {
        let mut args = vec!["--budget", "0"];
        args.extend(cmd.iter());
        let o = kakutani(&args);
        assert_eq!(o.status.code(), Some(exit::BUDGET), "{cmd:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    }
}

#[test]
fn malformed_configs_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.toml", "schema_version = 1\nbogus = 3\n"),
        ("version.toml", "schema_version = 7\n"),
        ("missing.toml", "precision = 100\n"),
        ("prec.toml", "schema_version = 1\nprecision = 32\n"),
        ("grid.toml", "schema_version = 1\n[count]\ngrid = { kind = \"geometric\", ratio = \"3/2\", from = 0, to = 3 }\n"),
        ("scheme.toml", "schema_version = 1\n[scheme]\nname = \"nope\"\n"),
        ("syntax.toml", "schema_version = = 1\n"),
    ];
    for (name, text) in cases {
        let path = write(dir.path(), name, text);
        let o = kakutani(&["--config", &path, "count"]);
        assert_eq!(o.status.code(), Some(exit::CONFIG), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn malformed_flags_exit_with_config_code() {
    for args in [
        vec!["--precision", "10", "analyze"],
        vec!["--threads", "0", "count"],
        vec!["--scheme", "no-such-scheme", "count"],
        vec!["points", "--lambda", "-1/2"],
        vec!["points", "--lambda", "abc"],
        vec!["count", "--grid", "decade:x"],
        vec!["analyze", "--eps", "3/2"],
        vec!["partitions", "--svg"],
        vec!["--scheme", "half-third-sixth", "discrepancy", "--hypothesis", "geometric"],
        vec!["frobnicate"],
        vec!["/nonexistent/missing.toml"],
    ] {
        let o = kakutani(&args);
        assert_eq!(o.status.code(), Some(exit::CONFIG), "{args:?}");
    }
    let o = kakutani(&["--config", "/nonexistent/missing.toml", "count"]);
    assert_eq!(o.status.code(), Some(exit::CONFIG));
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "run.toml",
        "schema_version = 1\nout = \"results\"\n\n[scheme]\nblocks = [ { kind = \"atom\", length = \"1/2\" }, \
         { kind = \"tail\", first = \"1/4\", ratio = \"1/2\", direction = \"asc\" } ]\n\n\
         [count]\ngrid = { kind = \"geometric\", ratio = \"1/2\", from = 0, to = 6 }\n",
    );
    let o = kakutani(&["--config", &path, "count"]);
    assert_eq!(o.status.code(), Some(exit::OK), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("results/count.csv")).unwrap();
    assert_eq!(csv.lines().count(), 8);
}
