//! Golden-file tests: each case runs the binary from `tests/data` and
//! compares stdout with `tests/golden/<name>.out`. Set `UPDATE_GOLDEN=1` to
//! rewrite the files.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dtt"));
    cmd.args(args).current_dir(dir("data")).env_remove("DTT_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

/// Replaces the wall-time column of `n,l,d1,d2,seconds` rows.
fn mask_seconds(out: &[u8]) -> Vec<u8> {
    let text = String::from_utf8_lossy(out);
    let mut s = String::new();
    for line in text.lines() {
        match line.rsplit_once(',') {
            Some((head, _)) if line.split(',').count() == 5 && !line.starts_with("n,") => {
                s.push_str(head);
                s.push_str(",<seconds>");
            }
            _ => s.push_str(line),
        }
        s.push('\n');
    }
    s.into_bytes()
}

fn golden(name: &str, args: &[&str]) {
    golden_with(name, args, &[], false);
}

fn golden_with(name: &str, args: &[&str], envs: &[(&str, &str)], mask: bool) {
    let out = run(args, envs);
    assert!(out.status.success(), "{name}: exit {:?}\n{}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    let got = if mask { mask_seconds(&out.stdout) } else { out.stdout };
    let path = dir("golden").join(format!("{name}.out"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &got).unwrap();
        return;
    }
    let want = fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        got == want,
        "{name}: output differs from {}\n--- got ---\n{}",
        path.display(),
        String::from_utf8_lossy(&got)
    );
}

#[test]
fn dtt_small_n() {
    golden("dtt_harmonic", &["dtt", "--gamma-seq", "harmonic", "--n", "4", "--input", "f.json"]);
    golden("dtt_catalan", &["dtt", "--gamma-seq", "catalan-shifted", "--input", "f.json"]);
    golden("dtt_t2", &["dtt", "--gamma-file", "nodes.json", "--input", "f.json", "--t", "2"]);
}

#[test]
fn dttmi_small_n() {
    golden("dttmi_harmonic", &["dttmi", "--input", "g.json"]);
}

#[test]
fn idtt_system_unity() {
    golden("idtt_system_unity", &["idtt-system", "--gamma-seq", "unity", "--n", "4"]);
}

#[test]
fn vand_inv() {
    golden("vand_inv", &["vand-inv", "--gamma-file", "nodes.json"]);
}

#[test]
fn vand_mc_table_row() {
    let args = ["vand-mc", "--n", "5", "--l", "1000000", "--seed", "1", "--nodes", "inv-shift2"];
    golden_with("vand_mc", &args, &[], true);
    // The environment supplies the default seed.
    golden_with("vand_mc", &args[..args.len() - 4].iter().chain(&["--nodes", "inv-shift2"]).copied().collect::<Vec<_>>(), &[("DTT_SEED", "1")], true);
}

#[test]
fn dft_check() {
    golden("dft_check", &["dft-check", "--n", "1,2,4,8", "--trials", "10", "--seed", "3"]);
}

#[test]
fn ntt() {
    golden("ntt_forward", &["ntt", "--p", "17", "--root", "4", "--input", "ntt.json"]);
}

#[test]
fn series() {
    golden("series_zeta2", &["series", "--kind", "zeta", "--z", "2"]);
    golden("series_eta1", &["series", "--kind", "eta", "--z", "1"]);
    golden("series_hyper", &["series", "--kind", "hyper", "--a", "1,1", "--b", "1", "--x", "0.5", "--cutoff", "200", "--tol", "1e-12"]);
    golden("series_totient", &["series", "--kind", "totient", "--n", "10"]);
}

#[test]
fn codec() {
    golden("encode_math", &["encode", "--message", "Math rules!", "--block-len", "11", "--book", "book.txt"]);
    golden("decode_math", &["decode", "--input", "math.wire", "--block-len", "11", "--book", "book.txt"]);
}

#[test]
fn images() {
    golden("img_dtt", &["img-dtt", "--input", "small.pgm", "--n", "10"]);
    golden("img_filter_sobel", &["img-filter", "--input", "small.pgm", "--kernel", "sobel"]);
    golden("img_filter_raw", &["img-filter", "--input", "small.pgm", "--kernel", "file", "--kernel-file", "sobel.kernel", "--raw"]);
    golden("img_blend", &["img-blend", "--input", "small.pgm", "--other", "other.pgm", "--w", "0.7"]);
    golden("img_noise", &["img-noise", "--input", "small.pgm", "--sigma", "0.2", "--seed", "5"]);
    golden("img_smooth", &["img-smooth", "--input", "small.pgm"]);
}

#[test]
fn image_round_trip_through_files() {
    let tmp = std::env::temp_dir().join(format!("dtt-cli-{}", std::process::id()));
    fs::create_dir_all(&tmp).unwrap();
    let seq = tmp.join("g.json");
    let back = tmp.join("back.pgm");
    let out = run(&["img-dtt", "--input", "small.pgm", "--output", seq.to_str().unwrap()], &[]);
    assert!(out.status.success());
    let out = run(
        &["img-idtt", "--input", seq.to_str().unwrap(), "--rows", "6", "--cols", "8", "--output", back.to_str().unwrap()],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = dtt_core::imagelab::pgm_decode(&fs::read(dir("data").join("small.pgm")).unwrap()).unwrap();
    let b = dtt_core::imagelab::pgm_decode(&fs::read(&back).unwrap()).unwrap();
    assert_eq!(a, b);
    fs::remove_dir_all(&tmp).unwrap();
}

#[test]
fn exit_codes() {
    let none = run(&[], &[]);
    assert_eq!(none.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&none.stderr).contains("Usage"));
    assert_eq!(run(&["frobnicate"], &[]).status.code(), Some(2));
    assert_eq!(run(&["dtt", "--input", "f.json", "--bogus"], &[]).status.code(), Some(2));
    assert_eq!(run(&["img-filter", "--input", "small.pgm", "--kernel", "file"], &[]).status.code(), Some(2));
    assert_eq!(run(&["dtt", "--input", "missing.json"], &[]).status.code(), Some(1));
    assert_eq!(run(&["series", "--kind", "zeta", "--z", "1"], &[]).status.code(), Some(1));
    assert_eq!(run(&["idtt-system", "--gamma-seq", "harmonic", "--n", "4"], &[]).status.code(), Some(1));
    assert_eq!(run(&["ntt", "--p", "15", "--root", "2", "--input", "ntt.json"], &[]).status.code(), Some(1));
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"], &[]);
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in [
        "dtt", "dttmi", "idtt-system", "vand-inv", "vand-mc", "dft-check", "ntt", "series", "encode", "decode", "img-dtt",
        "img-idtt", "img-filter", "img-blend", "img-noise", "img-smooth",
    ] {
        assert!(text.contains(sub), "{sub} missing from --help");
    }
}
