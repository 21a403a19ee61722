use std::path::Path;
use std::process::{Command, Output};

fn ait(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ait")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = ait(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stderr.is_empty());
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn documented_examples() {
    assert_eq!(
        stdout(&["k", "--machine", "A", "--string", "1010", "--limit", "12"]),
        "{\"k\":8,\"witness\":\"10011100\",\"status\":\"Exact\"}\n"
    );
    let dir = tempfile::tempdir().unwrap();
    let dist = write(dir.path(), "d.csv", "symbol,probability\na,.5\nb,.25\nc,.25\n");
    assert_eq!(stdout(&["entropy", "--dist", &dist]), "{\"entropy_bits\":1.5}\n");
    let p = stdout(&["prob", "--machine", "A", "--string", "", "--limit", "20"]);
    assert!(p.contains("\"probability\":\"349525/2^20\""), "{p}");
}

#[test]
fn default_limits_are_exact() {
    let a = stdout(&["k", "--string", "10101010"]);
    assert!(a.contains("\"k\":10") && a.contains("Exact"), "{a}");
    let b = stdout(&["k", "--machine", "B", "--string", "111"]);
    assert!(b.contains("Exact"), "{b}");
    let short = stdout(&["k", "--string", "10101010", "--limit", "6"]);
    assert_eq!(short, "{\"k\":null,\"witness\":null,\"status\":\"NoProgramWithin\"}\n");
}

#[test]
fn exit_codes_and_streams() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "symbol,probability\na,.5\nb,.6\n");
    let cases: [(&[&str], i32); 7] = [
        (&["entropy", "--dist", &bad], 1),
        (&["twopart", "--string", "001", "--set", "10101010"], 1),
        (&["k", "--string", "1", "--limit", "40"], 2),
        (&["structfn", "--string", "0000"], 2),
        (&["k", "--string", "012"], 3),
        (&["k", "--nope"], 3),
        (&["cond", "--string", "1", "--given", "x"], 3),
    ];
    for (args, code) in cases {
        let out = ait(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?} wrote data on failure");
        assert!(!out.stderr.is_empty());
    }
    let help = ait(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(!help.stdout.is_empty());
}

#[test]
fn malformed_code_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let code = write(dir.path(), "c.hex", "00000009");
    let out = ait(&["lz-decode", "--file", &code, "--hex"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("a.cache");
    let cache = cache.to_str().unwrap();
    let fresh = stdout(&["enumerate", "--machine", "B", "--limit", "12", "--save", cache]);
    let loaded = stdout(&["enumerate", "--load", cache]);
    assert_eq!(fresh, loaded);
    assert_eq!(stdout(&["enumerate", "--machine", "B", "--limit", "12"]), fresh);

    let text = std::fs::read_to_string(cache).unwrap();
    // the first entry is always in the re-executed sample
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[1].push('1');
    let tampered = lines.join("\n") + "\n";
    let bad = write(dir.path(), "bad.cache", &tampered);
    assert_eq!(ait(&["enumerate", "--load", &bad]).status.code(), Some(1));
}

#[test]
fn lz_files_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.txt", "to be or not to be, that is the question");
    let code = dir.path().join("out.lz");
    let code = code.to_str().unwrap();
    assert_eq!(stdout(&["lz-encode", "--file", &input, "--out", code]), "");
    let back = ait(&["lz-decode", "--file", code]);
    assert_eq!(back.stdout, std::fs::read(&input).unwrap());
    assert_eq!(stdout(&["lz-encode", "--string", "AAAA", "--hex-out"]), "0000000441a0a0\n");
}

#[test]
fn estimate_report_fields() {
    let r = stdout(&["estimate", "--string", "AAAA", "--c-dec", "5"]);
    assert_eq!(
        r,
        "{\"input_bytes\":4,\"encoded_bits\":51,\"phrase_count\":3,\"upper_bound_bits\":56}\n"
    );
    let e = stdout(&["estimate", "--string", ""]);
    assert!(e.contains("\"encoded_bits\":32"));
}

#[test]
fn structure_outputs() {
    let tsv = stdout(&["structfn", "--string", "000", "--tsv"]);
    let rows: Vec<&str> = tsv.lines().collect();
    assert_eq!(rows.len(), 19);
    assert_eq!(rows[9], "9\tinf\t-");
    assert_eq!(rows[10], "10\t2\t10101010");
    assert!(rows[18].starts_with("18\t0\t"));
    let mss = stdout(&["mss", "--string", "000"]);
    assert!(mss.starts_with("{\"alpha_star\":10,\"h_at\":2.0,\"set_size\":4,\"witness\":\"10101010\""));
    let tp = stdout(&["twopart", "--string", "000", "--set", "11111111"]);
    assert_eq!(tp, "{\"model_bits\":10,\"data_bits\":3,\"total\":13,\"index\":0}\n");
    let bounded = stdout(&["structfn", "--string", "0110", "--bounded"]);
    assert!(bounded.contains("\"exact\":false"));
}

#[test]
fn shannon_fano_output() {
    let dir = tempfile::tempdir().unwrap();
    let dist = write(dir.path(), "d.csv", "symbol,probability\nx,0.4\ny,0.3\nz,0.2\nw,0.1\n");
    let tsv = stdout(&["sfcode", "--dist", &dist, "--tsv"]);
    assert_eq!(tsv, "x\t00\ny\t01\nz\t100\nw\t1010\n");
}
