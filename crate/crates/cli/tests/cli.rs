use std::path::PathBuf;
use std::process::{Command, Output};

fn ctru(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctru")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

const SEED: &str = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";

#[test]
fn keygen_encaps_decaps_roundtrip() {
    let dir = scratch("roundtrip");
    let a = dir.join("a");
    let b = dir.join("b");
    let o = ctru(&["keygen", "--param", "cntr-768", "--seed", SEED, "--out", s(&a)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(dir.join("a.pk")).unwrap().len(), 1152);
    assert_eq!(std::fs::read(dir.join("a.sk")).unwrap().len(), 384 + 1152 + 32);

    let o = ctru(&["encaps", "--param", "cntr-768", "--pk", s(&dir.join("a.pk")), "--out", s(&b)]);
    assert!(o.status.success());
    let ct = std::fs::read(dir.join("b.ct")).unwrap();
    let ss = std::fs::read(dir.join("b.ss")).unwrap();
    assert_eq!((ct.len(), ss.len()), (960, 32));

    let o = ctru(&["decaps", "--param", "cntr-768", "--sk", s(&dir.join("a.sk")), "--ct", s(&dir.join("b.ct"))]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), hex::encode(&ss));

    // a flipped bit still yields 32 bytes, but not the honest key
    let mut bad = ct.clone();
    bad[5] ^= 0x10;
    std::fs::write(dir.join("bad.ct"), &bad).unwrap();
    let o = ctru(&["decaps", "--param", "cntr-768", "--sk", s(&dir.join("a.sk")), "--ct", s(&dir.join("bad.ct"))]);
    assert!(o.status.success());
    let got = String::from_utf8(o.stdout).unwrap();
    assert_eq!(got.trim().len(), 64);
    assert_ne!(got.trim(), hex::encode(&ss));

    std::fs::write(dir.join("short.ct"), &ct[..ct.len() - 1]).unwrap();
    let o = ctru(&["decaps", "--param", "cntr-768", "--sk", s(&dir.join("a.sk")), "--ct", s(&dir.join("short.ct"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn seeded_commands_are_deterministic() {
    let dir = scratch("determinism");
    for run in ["x", "y"] {
        let k = dir.join(run);
        assert!(ctru(&["keygen", "--param", "ctru-512", "--seed", SEED, "--out", s(&k)]).status.success());
        let pk = format!("{}.pk", s(&k));
        let o = ctru(&["encaps", "--param", "ctru-512", "--pk", &pk, "--seed", SEED, "--out", s(&k)]);
        assert!(o.status.success());
    }
    for ext in ["pk", "sk", "ct", "ss"] {
        let x = std::fs::read(dir.join(format!("x.{ext}"))).unwrap();
        let y = std::fs::read(dir.join(format!("y.{ext}"))).unwrap();
        assert_eq!(x, y, "{ext}");
    }
}

#[test]
fn sizes_match_tables() {
    let dir = scratch("sizes");
    for (name, pk, ct) in [("ctru-1024", 1536, 1408), ("cntr-768", 1152, 960), ("ctru-768-q3457-b3", 1152, 1152)] {
        let k = dir.join(name);
        assert!(ctru(&["keygen", "--param", name, "--seed", SEED, "--out", s(&k)]).status.success());
        let pkf = format!("{}.pk", s(&k));
        assert!(ctru(&["encaps", "--param", name, "--pk", &pkf, "--out", s(&k)]).status.success());
        assert_eq!(std::fs::read(&pkf).unwrap().len(), pk, "{name}");
        assert_eq!(std::fs::read(format!("{}.ct", s(&k))).unwrap().len(), ct, "{name}");
    }
}

#[test]
fn usage_errors_exit_1() {
    let dir = scratch("usage");
    let k = dir.join("k");
    for args in [
        vec!["keygen", "--param", "ctru-768", "--seed", "zz", "--out", s(&k)],
        vec!["keygen", "--param", "ctru-768", "--seed", "0011", "--out", s(&k)],
        vec!["keygen", "--param", "ntru-768", "--out", s(&k)],
        vec!["keygen", "--out", s(&k)],
        vec!["frobnicate"],
    ] {
        let o = ctru(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    // wrong public key length
    std::fs::write(dir.join("short.pk"), [0u8; 100]).unwrap();
    let o = ctru(&["encaps", "--param", "ctru-768", "--pk", s(&dir.join("short.pk")), "--out", s(&k)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn kat_generate_verify_tamper() {
    let dir = scratch("kat");
    let f = dir.join("kat.txt");
    assert!(ctru(&["kat", "--param", "ctru-768", "--count", "3", "--out", s(&f)]).status.success());
    let text = std::fs::read_to_string(&f).unwrap();
    assert!(text.contains("# param = ctru-768"));
    assert_eq!(text.matches("count = ").count(), 3);
    let o = ctru(&["kat", "--param", "ctru-768", "--verify", s(&f)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    // stdout output is byte-identical to the file
    let o = ctru(&["kat", "--param", "ctru-768", "--count", "3"]);
    assert_eq!(o.stdout, text.as_bytes());

    let line = text.lines().find(|l| l.starts_with("ct = ")).unwrap();
    let mut flipped = line.to_string();
    let last = flipped.pop().unwrap();
    flipped.push(if last == '0' { '1' } else { '0' });
    std::fs::write(dir.join("bad.txt"), text.replacen(line, &flipped, 1)).unwrap();
    let o = ctru(&["kat", "--param", "ctru-768", "--verify", s(&dir.join("bad.txt"))]);
    assert_eq!(o.status.code(), Some(2));

    let o = ctru(&["kat", "--param", "ctru-768", "--count", "0"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().lines().all(|l| l.starts_with('#')));
}

#[test]
fn estimate_prints_a_row() {
    let o = ctru(&["estimate", "--param", "ctru-768-q3457-b3"]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    let row = out.lines().find(|l| l.starts_with("ctru-768-q3457-b3")).unwrap();
    let v: f64 = row.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(v < -100.0 && v > -170.0, "{v}");
}

#[test]
fn bench_reports_three_rows() {
    let o = ctru(&["bench", "--param", "cntr-512", "--iters", "1"]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    for op in ["keygen", "encaps", "decaps"] {
        assert!(out.lines().any(|l| l.starts_with(op)), "{out}");
    }
}
