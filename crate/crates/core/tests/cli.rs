use std::fs;

use stoqi::cli::main_from_args;
use stoqi::report::{read_csv, sha256_hex, RunManifest};

fn run(args: &[&str]) -> i32 {
    main_from_args(std::iter::once("stoqi").chain(args.iter().copied()))
}

const SMALL: &[&str] = &[
    "--set",
    "target=absx",
    "--set",
    "preset=table2",
    "--set",
    "n_grid=16,32,64",
    "--replications",
    "8",
    "--set",
    "test_points=20",
];

#[test]
fn convergence_output_is_reproducible_from_its_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("conv.csv");
    let out_s = out.to_str().unwrap();
    let mut args = vec!["convergence"];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(&["--seed", "42", "--out", out_s]);
    assert_eq!(run(&args), 0);

    let bytes = fs::read(&out).unwrap();
    let manifest = RunManifest::read(&RunManifest::path_for(&out)).unwrap();
    assert_eq!(manifest.command, "convergence");
    assert_eq!(manifest.base_seed, 42);
    assert_eq!(manifest.outputs[0].sha256, sha256_hex(&bytes));
    assert!(manifest.config.contains("h_constant=0.3\n"));

    // re-running from the recorded config reproduces the bytes
    let cfg = dir.path().join("replay.cfg");
    fs::write(&cfg, &manifest.config).unwrap();
    let replay = dir.path().join("replay.csv");
    assert_eq!(
        run(&[
            "convergence",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            replay.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(fs::read(&replay).unwrap(), bytes);

    let (header, rows) = read_csv(&out).unwrap();
    assert_eq!(header, ["n", "h", "emae", "stderr", "empty_rate"]);
    assert_eq!(rows.len(), 3);
    assert!(!bytes.contains(&b'\r'));
}

#[test]
fn json_config_and_probability_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.json");
    fs::write(
        &cfg,
        r#"{"target": "absx", "kernel": "gaussian", "h_constant": 0.2, "n_grid": [8, 64],
            "replications": 10, "test_points": 20, "epsilons": [0.05, 0.1], "metric": "Linf"}"#,
    )
    .unwrap();
    let out = dir.path().join("p.csv");
    assert_eq!(
        run(&[
            "probability",
            "-c",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let (header, rows) = read_csv(&out).unwrap();
    assert_eq!(header, ["n", "epsilon", "probability", "replications"]);
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[3] == "10"));
}

#[test]
fn orders_and_eval_write_their_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("orders.csv");
    let code = run(&[
        "orders",
        "--set",
        "dims=1",
        "--set",
        "kernels=gaussian",
        "--set",
        "n_grid=16,32,64",
        "--replications",
        "10",
        "--threads",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (header, rows) = read_csv(&out).unwrap();
    assert_eq!(header[0], "kernel");
    assert_eq!(rows.len(), 2);

    let pts = dir.path().join("pts.csv");
    fs::write(&pts, "x_1\n-0.5\n0.0\n0.75\n").unwrap();
    let eval = dir.path().join("eval.csv");
    let code = run(&[
        "eval",
        "--set",
        "target=absx",
        "--set",
        "h_constant=0.3",
        "--set",
        "n=512",
        "--points",
        pts.to_str().unwrap(),
        "--out",
        eval.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (header, rows) = read_csv(&eval).unwrap();
    assert_eq!(header, ["x_1", "value", "denominator", "active_centers"]);
    assert_eq!(rows.len(), 3);
    let v: f64 = rows[0][1].parse().unwrap();
    assert!((v - 0.5).abs() < 0.1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["selftest"]), 0);
    // unknown key and missing target are configuration errors
    assert_eq!(run(&["convergence", "--set", "colour=blue"]), 2);
    assert_eq!(run(&["convergence", "--set", "h_constant=0.3"]), 2);
    assert_eq!(
        run(&["convergence", "--set", "target=absx", "--set", "preset=table9"]),
        2
    );
    assert_eq!(run(&["no-such-command"]), 2);
    // tiny compact bandwidth leaves most test points uncovered
    assert_eq!(
        run(&[
            "convergence",
            "--set",
            "target=absx",
            "--set",
            "kernel=compact",
            "--set",
            "h_constant=0.01",
            "--set",
            "n_grid=8",
            "--replications",
            "5"
        ]),
        3
    );
    let mut args = vec!["convergence"];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(&["--out", "/nonexistent-dir/x/out.csv"]);
    assert_eq!(run(&args), 4);
    assert_eq!(run(&["convergence", "--config", "/nonexistent-dir/cfg"]), 4);
}
