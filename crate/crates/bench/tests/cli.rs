use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use matchembed::exact::solve_exact;
use matchembed::generators::{gen_lomax, LomaxConfig};
use matchembed::ObjectiveKind;

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchembed"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["--help"], d)), 0);
    assert_eq!(code(&run(&["--version"], d)), 0);
    assert_eq!(code(&run(&["frobnicate"], d)), 1);
    assert_eq!(code(&run(&["gen"], d)), 1);
    assert_eq!(code(&run(&["solve", "--input", "g.txt", "--objective", "best"], d)), 1);
    assert_eq!(code(&run(&["bench", "--trials", "1"], d)), 1);
    assert_eq!(code(&run(&["bench", "--sweep", "t=3,4"], d)), 1);
    assert_eq!(code(&run(&["gen", "--generator", "adversarial", "--t", "99"], d)), 1);
    assert_eq!(code(&run(&["solve", "--input", "missing.txt", "--objective", "mcm"], d)), 2);
    fs::write(d.join("bad.txt"), "n 4\n0 1 oops\n").unwrap();
    assert_eq!(code(&run(&["solve", "--input", "bad.txt", "--objective", "mcm"], d)), 2);
}

#[test]
fn gen_then_solve_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(
        &["gen", "--generator", "lomax", "--alpha", "3", "--n", "20", "--seed", "4", "--out", "g.txt"],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let graph = gen_lomax(&LomaxConfig::new(3.0, 20), 4).unwrap();
    for objective in ["mcm", "bm", "um", "mdm"] {
        let out = run(&["solve", "--input", "g.txt", "--objective", objective], d);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        let value: f64 = text
            .lines()
            .find_map(|l| l.strip_prefix("# value "))
            .unwrap()
            .parse()
            .unwrap();
        let expected = solve_exact(&graph, objective.parse::<ObjectiveKind>().unwrap()).unwrap().value;
        assert_eq!(value, expected, "{objective}");
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 10);
    }
}

#[test]
fn embed_writes_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["gen", "--generator", "adversarial", "--t", "4", "--out", "g.txt"], d)), 0);
    let out = run(
        &["embed", "--input", "g.txt", "--method", "node2vec", "--dimensions", "3", "--walks-per-node", "4", "--out", "e.txt"],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let points = matchembed::embedding::parse_embedding(&fs::read_to_string(d.join("e.txt")).unwrap()).unwrap();
    assert_eq!((points.len(), points.dim()), (8, 3));
    assert_eq!(code(&run(&["embed", "--input", "g.txt", "--p", "-1"], d)), 1);
}

#[test]
fn bench_from_spec_file_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("adv.toml"),
        "id = \"adv\"\ngenerator = \"adversarial\"\nalgorithms = \"exact,greedy\"\nsweep = \"t=3,4\"\ntrials = 2\nseed = 3\nout = \"res\"\n",
    )
    .unwrap();
    let out = run(&["bench", "--spec", "adv.toml", "--format", "svg", "--threads", "2"], d);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["trials.csv", "timings.csv", "summary.csv", "plot.svg"] {
        assert!(d.join("res").join(f).exists(), "{f}");
    }
    let first = fs::read(d.join("res/trials.csv")).unwrap();
    // Flags override the file.
    let out = run(&["bench", "--spec", "adv.toml", "--out", "res2", "--threads", "1"], d);
    assert_eq!(code(&out), 0);
    assert_eq!(first, fs::read(d.join("res2/trials.csv")).unwrap());
    assert!(!d.join("res2/plot.svg").exists());

    let out = run(&["report", "--input", "res/trials.csv", "--out", "rep"], d);
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read(d.join("rep/summary.csv")).unwrap(),
        fs::read(d.join("res/summary.csv")).unwrap()
    );
    assert!(d.join("rep/plot.svg").exists());
}
