use std::path::{Path, PathBuf};

use edm::cli::run;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> (i32, PathBuf) {
    let out = dir.join(name);
    let mut argv = vec!["edm".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--output".into());
    argv.push(out.display().to_string());
    (run(argv), out)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn exact_on_three_site_chain() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run_to(
        dir.path(),
        "exact.json",
        &["exact", "--region", &fixture("chain3.region.json"), "--potential", &fixture("manhattan_1d.potential.json")],
    );
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["Z"].as_f64().unwrap() - 2.25).abs() < 1e-14);
    assert_eq!(v["configurations"], 4);
    assert!((v["F"].as_f64().unwrap() + 2.25f64.ln()).abs() < 1e-14);
}

#[test]
fn moment_agrees_with_exact_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for (region, potential) in [
        ("chain3.region.json", "manhattan_1d.potential.json"),
        ("square2x2.region.json", "domino.potential.json"),
        ("chain5.region.json", "table_1d.potential.json"),
        ("staircase1.region.json", "manhattan_2d.potential.json"),
    ] {
        let (code, out) = run_to(
            dir.path(),
            "moment.json",
            &["moment", "--region", &fixture(region), "--potential", &fixture(potential)],
        );
        assert_eq!(code, 0, "{region}");
        let v = json(&out);
        assert!(v["residual"].as_f64().unwrap() < 1e-9);
        assert_eq!(v["checks"][0]["passed"], true);
    }
}

#[test]
fn surface_has_header_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.dat");
    let (code, out) = run_to(
        dir.path(),
        "surface.csv",
        &["surface", "--mu-grid", "0.5:2:3", "--rho-grid", "0.1:0.9:3", "--emit-plot-data", plot.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mu,rho,lambda,mle,upper_bound,converged,iters");
    assert_eq!(lines.len(), 10);
    assert!(lines[1].starts_with("5.0000000000000000e-1,1.0000000000000001e-1,"));
    assert_eq!(std::fs::read_to_string(plot).unwrap().lines().filter(|l| l.is_empty()).count(), 3);
}

#[test]
fn every_command_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let chain5 = fixture("chain5.region.json");
    let square = fixture("square2x2.region.json");
    let commands: Vec<Vec<&str>> = vec![
        vec!["mc", "--sampler", "pickard", "--region", &chain5, "--mu", "1", "--rho", "0.5", "--n", "20000", "--seed", "9"],
        vec!["mc", "--sampler", "ma", "--region", &square, "--mu", "0", "--rho", "1,1", "--n", "20000", "--seed", "9"],
        vec!["mc", "--sampler", "aar", "--region", &chain5, "--mu", "1", "--rho", "0.4,0.6", "--n", "20000", "--seed", "3"],
        vec!["manhattan2d", "--N", "2", "--rho1", "0.3", "--rho2", "0.6", "--mu", "1"],
        vec!["spectral1d", "--mu", "1", "--rho", "0.5"],
        vec!["pantograph", "--mu", "1", "--rho", "0.5", "--N", "6"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let (a, first) = run_to(dir.path(), &format!("a{i}"), args);
        let (b, second) = run_to(dir.path(), &format!("b{i}"), args);
        assert_eq!(a, 0, "{args:?}");
        assert_eq!(b, 0);
        assert_eq!(std::fs::read(first).unwrap(), std::fs::read(second).unwrap(), "{args:?}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(["edm", "nope"]), 2);
    assert_eq!(run(["edm", "spectral1d", "--mu", "1"]), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(["edm", "exact", "--region", missing.to_str().unwrap(), "--potential", &fixture("domino.potential.json")]),
        2
    );
    assert_eq!(run_to(dir.path(), "s.json", &["spectral1d", "--mu", "0", "--rho", "0.5"]).0, 2);
    assert_eq!(run_to(dir.path(), "g.csv", &["surface", "--mu-grid", "1:2", "--rho-grid", "0.1:0.5:2"]).0, 2);
    let stuck = run_to(dir.path(), "t.json", &["spectral1d", "--mu", "1", "--rho", "0.5", "--max-iter", "3", "--fixed"]);
    assert_eq!(stuck.0, 1);
    assert_eq!(json(&stuck.1)["converged"], false);
    assert_eq!(run(["edm", "--help"]), 0);
}

#[test]
fn manhattan_polynomial_dump() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("r1.json");
    let (code, out) = run_to(
        dir.path(),
        "m.json",
        &["manhattan2d", "--N", "1", "--rho1", "0.3", "--rho2", "0.6", "--mu", "1", "--dump-polynomial", poly.to_str().unwrap()],
    );
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["degree"], 4);
    assert_eq!(v["sites"], 4);
    let p: edm::manhattan2d::SparsePolynomial = serde_json::from_str(&std::fs::read_to_string(poly).unwrap()).unwrap();
    assert_eq!(p.num_variables(), 3);
}
