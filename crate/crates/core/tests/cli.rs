use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn insdel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_insdel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("insdel-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn path(dir: &std::path::Path, file: &str) -> String {
    dir.join(file).to_str().unwrap().to_string()
}

#[test]
fn johnson_example() {
    let o = insdel(&[
        "bounds", "johnson", "--n", "10", "--d", "12", "--tins", "10", "--tdel", "0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "feasible, bound 6\n");
    let o = insdel(&[
        "--json", "bounds", "johnson", "--n", "10", "--d", "12", "--tins", "10", "--tdel", "0",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["list_bound"], "6");
}

#[test]
fn bound_subcommands() {
    let o = insdel(&[
        "bounds", "lemma1", "--n", "10", "--d", "12", "--tins", "10", "--tdel", "0", "--N", "20",
    ]);
    assert_eq!(stdout(&o), "feasible, bound 6\n");
    let o = insdel(&[
        "bounds", "lemma1", "--n", "10", "--d", "12", "--tins", "10", "--tdel", "0", "--N", "19",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = insdel(&["bounds", "plotkin", "--n", "4", "--d", "6", "--N", "8"]);
    assert_eq!(stdout(&o), "N = 8: feasible, bound 3\n");
    let o = insdel(&["bounds", "equal", "--n", "10", "--d", "12"]);
    assert!(stdout(&o).contains("t = 3: feasible, bound 26/3"));
    let a = stdout(&insdel(&["bounds", "summary", "--n", "10", "--d", "10", "--tins", "1"]));
    let b = stdout(&insdel(&["bounds", "summary", "--delta", "0.5", "--tau-ins", "1/10"]));
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(insdel(&["bounds", "johnson", "--n", "10"]).status.code(), Some(1));
    assert_eq!(insdel(&["nonsense"]).status.code(), Some(1));
    assert_eq!(insdel(&["bounds", "curves", "--figure", "4"]).status.code(), Some(1));
    assert_eq!(
        insdel(&["bounds", "johnson", "--n", "10", "--d", "12", "--tins", "x"])
            .status
            .code(),
        Some(1)
    );
    // rate too small for n = 7
    let o = insdel(&[
        "codec",
        "params",
        "--tau-i",
        "0.2",
        "--tau-d",
        "0.04",
        "--ell-prime",
        "2",
        "--n",
        "7",
        "--m",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at least 565"));
    let o = insdel(&["code", "min-distance", "--in", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(insdel(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_appendix() {
    let o = insdel(&["verify", "appendix"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in [
        "u(1,2)=5 d_L(c1,c2)=6",
        "u(1,3)=4 d_L(c1,c3)=6",
        "u(2,3)=5 d_L(c2,c3)=6",
        "u(4,5)=6 d_L(c4,c5)=12",
    ] {
        assert!(text.contains(line), "{text}");
    }
    let v: Value = serde_json::from_str(&stdout(&insdel(&["--json", "verify", "appendix"]))).unwrap();
    assert_eq!(v["all_refuted"], true);
}

#[test]
fn curves_to_file_match_stdout() {
    let dir = scratch("curves");
    let out = path(&dir, "fig3.csv");
    assert!(insdel(&["bounds", "curves", "--figure", "3", "--out", &out])
        .status
        .success());
    let printed = stdout(&insdel(&["bounds", "curves", "--figure", "3"]));
    assert_eq!(fs::read_to_string(&out).unwrap(), printed);
    assert!(printed.starts_with("delta,rho_or_tau_ins,tau_ID,tau_I,tau_D\n"));
    let threaded = stdout(&insdel(&["--threads", "1", "bounds", "curves", "--figure", "3"]));
    assert_eq!(threaded, printed);
}

#[test]
fn oracle_commands() {
    let dir = scratch("oracle");
    let code = path(&dir, "code.txt");
    fs::write(&code, "q=2 n=6\n000000\n011100\n100011\n").unwrap();
    let o = insdel(&[
        "oracle", "list", "--in", &code, "--word", "01100", "--tins", "2", "--tdel", "3",
    ]);
    assert!(stdout(&o).starts_with("3 codeword(s)"));
    let o = insdel(&[
        "--json", "oracle", "max-list", "--in", &code, "--tins", "0", "--tdel", "1",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["max"], 1);
    let o = insdel(&["code", "min-distance", "--in", &code]);
    assert_eq!(stdout(&o), "min distance 6, normalized 1/2 (~0.500000)\n");
    let o = insdel(&["--json", "oracle", "max-code", "--q", "2", "--n", "4", "--d", "6"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 2);
    let o = insdel(&["oracle", "max-code", "--q", "3", "--n", "6", "--d", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn codec_round_trip() {
    let dir = scratch("codec");
    let (params, inner, word, noisy, ledger) = (
        path(&dir, "params.txt"),
        path(&dir, "inner.txt"),
        path(&dir, "c.txt"),
        path(&dir, "v.txt"),
        path(&dir, "ledger.json"),
    );
    let o = insdel(&[
        "codec",
        "params",
        "--tau-i",
        "0.2",
        "--tau-d",
        "0.04",
        "--ell-prime",
        "2",
        "--n",
        "7",
        "--m",
        "16",
        "--override-rate",
        "2/7",
        "--out",
        &params,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = insdel(&[
        "code",
        "search-inner",
        "--q",
        "4",
        "--m",
        "16",
        "--p",
        "7",
        "--delta",
        "3/8",
        "--seed",
        "1",
        "--out",
        &inner,
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("49 codewords, min distance 12"));
    let o = insdel(&[
        "codec", "encode", "--params", &params, "--inner", &inner, "--msg", "1f", "--out", &word,
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&word).unwrap().trim().len(), 112);
    let o = insdel(&[
        "channel", "corrupt", "--in", &word, "--q", "4", "--tins", "22", "--tdel", "4", "--seed", "3", "--block", "16",
        "--out", &noisy, "--ledger", &ledger,
    ]);
    assert!(o.status.success());
    let l: Value = serde_json::from_str(&fs::read_to_string(&ledger).unwrap()).unwrap();
    assert_eq!(l["output_length"], 130);
    assert_eq!(l["blocks"].as_array().unwrap().len(), 7);
    assert!(l["deletions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d.as_u64().unwrap() >= 1));

    let o = insdel(&[
        "--json", "codec", "decode", "--params", &params, "--inner", &inner, "--in", &noisy, "--mode", "insdel",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["messages"].as_array().unwrap().contains(&Value::from("1f")));
    assert_eq!(v["diagnostics"]["recovery"], "brute-force");

    let o = insdel(&[
        "codec",
        "decode",
        "--params",
        &params,
        "--inner",
        &inner,
        "--in",
        &noisy,
        "--mode",
        "insertions",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = insdel(&["codec", "encode", "--params", &params, "--inner", &inner, "--msg", "31"]);
    assert_eq!(o.status.code(), Some(1), "index 49 is outside F_7^2");
    let tampered = path(&dir, "tampered.txt");
    fs::write(
        &tampered,
        fs::read_to_string(&params).unwrap().replace("ell = 1805/8", "ell = 1"),
    )
    .unwrap();
    let o = insdel(&[
        "codec", "encode", "--params", &tampered, "--inner", &inner, "--msg", "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn channel_is_deterministic() {
    let dir = scratch("channel");
    let input = path(&dir, "x.txt");
    fs::write(&input, "0110100111\n").unwrap();
    let args = [
        "channel", "corrupt", "--in", &input, "--tins", "3", "--tdel", "2", "--seed", "11",
    ];
    let a = stdout(&insdel(&args));
    assert_eq!(a, stdout(&insdel(&args)));
    assert_eq!(a.lines().next().unwrap().len(), 11);
    let o = insdel(&["channel", "corrupt", "--in", &input, "--tins", "0", "--tdel", "11"]);
    assert_eq!(o.status.code(), Some(2));
}
