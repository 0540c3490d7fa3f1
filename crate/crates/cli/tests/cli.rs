use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_threesum");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn run_threads(args: &[&str], threads: &str) -> Output {
    Command::new(BIN).args(args).env("THREESUM_THREADS", threads).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn without_timing(s: &str) -> String {
    s.lines().filter(|l| !l.starts_with("time_ms=")).collect::<Vec<_>>().join("\n")
}

fn gen(dir: &Path, name: &str, n: usize, seed: u64, planted: usize) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let o = run(&["gen", "--n", &n.to_string(), "--universe", "1000000", "--seed", &seed.to_string(), "--planted", &planted.to_string(), "--out", &p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn gen_is_deterministic_and_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen(dir.path(), "a.3sum", 64, 1, 2);
    let b = gen(dir.path(), "b.3sum", 64, 1, 2);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("3SUM 64 1000000\n"));
    assert_eq!(text.lines().nth(1).unwrap().split(' ').count(), 64);
    let o = run(&["gen", "--n", "64", "--universe", "1000000", "--seed", "1", "--planted", "2"]);
    assert_eq!(o.stdout, text.as_bytes());
}

#[test]
fn gen_usage_errors() {
    assert_eq!(run(&["gen", "--n", "0", "--universe", "10"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--n", "10", "--universe", "20"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--universe", "20"]).status.code(), Some(2));
}

#[test]
fn every_pipeline_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let yes = gen(dir.path(), "yes.3sum", 48, 3, 2);
    let no = gen(dir.path(), "no.3sum", 48, 4, 0);
    for p in ["cubic", "an-quadratic", "conv-quadratic", "listing", "setdisj", "setint", "monoconv", "witness"] {
        for f in [&yes, &no] {
            let o = run(&["reduce", "--pipeline", p, "--verify", f]);
            assert_eq!(o.status.code(), Some(0), "{p} {f}: {}", String::from_utf8_lossy(&o.stderr));
            let out = stdout(&o);
            assert!(out.contains("verify=agree"), "{out}");
            assert!(out.contains(&format!("pipeline={p}\n")));
        }
    }
}

#[test]
fn setdisj_with_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let f = gen(dir.path(), "a.3sum", 64, 1, 2);
    let o = run(&["reduce", "--pipeline", "setdisj", "--alpha", "0.5", "--rho", "0.25", "--backend", "oracle", "--verify", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("decision=yes"));
}

#[test]
fn parameter_errors() {
    let dir = tempfile::tempdir().unwrap();
    let f = gen(dir.path(), "a.3sum", 32, 1, 0);
    assert_eq!(run(&["reduce", "--pipeline", "cubic", "--mu", "3.5", &f]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "--pipeline", "setdisj", "--alpha", "1.0", &f]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "--pipeline", "cubic", "--backend", "external", "--external-cmd", "true", &f]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "--pipeline", "setint", "--backend", "external", &f]).status.code(), Some(2));
    assert_eq!(run(&["reduce", "--pipeline", "bogus", &f]).status.code(), Some(2));
    let bad = dir.path().join("bad.3sum");
    std::fs::write(&bad, "3SUM 2 10\n1 11\n").unwrap();
    let o = run(&["reduce", "--pipeline", "cubic", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn external_backend_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = gen(dir.path(), "a.3sum", 64, 5, 1);
    let cmd = format!("{BIN} solve-queries");
    for p in ["setdisj", "setint"] {
        let ext = run(&["reduce", "--pipeline", p, "--backend", "external", "--external-cmd", &cmd, "--verify", &f]);
        assert_eq!(ext.status.code(), Some(0), "{}", String::from_utf8_lossy(&ext.stderr));
        let ora = run(&["reduce", "--pipeline", p, "--verify", &f]);
        let strip = |s: String| without_timing(&s).replace("backend=external", "backend=oracle");
        assert_eq!(strip(stdout(&ext)), strip(stdout(&ora)));
    }
}

#[test]
fn external_failures() {
    let dir = tempfile::tempdir().unwrap();
    let f = gen(dir.path(), "a.3sum", 32, 5, 1);
    let base = ["reduce", "--pipeline", "setint", "--bound", "off", "--backend", "external", "--external-cmd"];
    let exec = |cmd: &str| {
        let mut a = base.to_vec();
        a.push(cmd);
        a.push(&f);
        a.push("--verify");
        run(&a).status.code()
    };
    assert_eq!(exec("cat >/dev/null; exit 4"), Some(3));
    assert_eq!(exec("cat >/dev/null; echo nonsense"), Some(2));
    // Every intersection reported empty: the planted solution is lost.
    let liar = format!("{BIN} solve-queries | sed 's/:.*/:/'");
    assert_eq!(exec(&liar), Some(1));
}

#[test]
fn trace_file_matches_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = gen(dir.path(), "a.3sum", 64, 9, 0);
    let trace = dir.path().join("t.txt");
    let o = run(&["reduce", "--pipeline", "cubic", "--trace", trace.to_str().unwrap(), &f]);
    assert!(o.status.success());
    let out = stdout(&o);
    let t = std::fs::read_to_string(&trace).unwrap();
    let rounds: usize = out.lines().find_map(|l| l.strip_prefix("hash_rounds=")).unwrap().parse().unwrap();
    assert_eq!(t.lines().count(), rounds);
    let last_after = t.lines().last().map(|l| l.split(' ').nth(3).unwrap().to_string());
    if let Some(s) = last_after {
        let fin = out.lines().find_map(|l| l.strip_prefix("pseudo_final=")).unwrap();
        assert!(s.parse::<u128>().unwrap() >= fin.parse::<u128>().unwrap());
    }
}

#[test]
fn bench_csv() {
    let o = run(&["bench", "--n-min", "32", "--n-max", "96", "--n-step", "32", "--seed", "7", "--trials", "3"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,S_det,S_random_median,bound_B");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("32,"));
    let again = run_threads(&["bench", "--n-min", "32", "--n-max", "96", "--n-step", "32", "--seed", "7", "--trials", "3"], "1");
    assert_eq!(o.stdout, again.stdout);
    let empty = run(&["bench", "--n-min", "64", "--n-max", "32"]);
    assert_eq!(stdout(&empty), "n,S_det,S_random_median,bound_B\n");
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let f = gen(dir.path(), "a.3sum", 64, 11, 1);
    for p in ["cubic", "setdisj", "monoconv"] {
        let one = run_threads(&["reduce", "--pipeline", p, &f], "1");
        let four = run_threads(&["reduce", "--pipeline", p, &f], "4");
        assert_eq!(without_timing(&stdout(&one)), without_timing(&stdout(&four)));
    }
}
