//! Oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::Value;

use ihs::arith::{Int, Rat};
use ihs::matrix::IntMatrix;

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// A unimodular matrix and its inverse, built from random elementary row
/// operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> (IntMatrix, IntMatrix) {
    let mut u = ihs::matrix::identity(n);
    let mut inv = ihs::matrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            u[0][0] = -Int::one();
            inv[0][0] = -Int::one();
        }
        return (u, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => {
                // row_i += c row_j ; inverse: column_j -= c column_i
                let c = Int::from(rng.gen_range(-2i64..=2));
                for k in 0..n {
                    let add = &c * &u[j][k];
                    u[i][k] += add;
                }
                for row in inv.iter_mut() {
                    let sub = &c * &row[i];
                    row[j] -= sub;
                }
            }
            1 => {
                u.swap(i, j);
                for row in inv.iter_mut() {
                    row.swap(i, j);
                }
            }
            _ => {
                for x in u[i].iter_mut() {
                    *x = -x.clone();
                }
                for row in inv.iter_mut() {
                    row[i] = -row[i].clone();
                }
            }
        }
    }
    (u, inv)
}

/// `U G U^T`
pub fn congruent(g: &IntMatrix, u: &IntMatrix) -> IntMatrix {
    let n = g.len();
    let mut ug = vec![vec![Int::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if u[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                ug[i][j] += &u[i][k] * &g[k][j];
            }
        }
    }
    let mut out = vec![vec![Int::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = Int::zero();
            for k in 0..n {
                s += &ug[i][k] * &u[j][k];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, range: i64, even: bool) -> IntMatrix {
    let mut m = vec![vec![Int::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut x = rng.gen_range(-range..=range);
            if i == j && even {
                x *= 2;
            }
            m[i][j] = Int::from(x);
            m[j][i] = Int::from(x);
        }
    }
    m
}

/// Determinant by Gaussian elimination over Q.
pub fn rational_det(a: &IntMatrix) -> Int {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Int::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let f = &m[r][c] / &pivot;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] -= t;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

/// Signature from the signs of the leading principal minors (Jacobi).
/// `None` when some minor vanishes.
pub fn minors_signature(g: &IntMatrix) -> Option<(usize, usize)> {
    let n = g.len();
    let mut prev = Int::one();
    let mut neg = 0;
    for k in 1..=n {
        let sub: IntMatrix = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        let d = rational_det(&sub);
        if d.is_zero() {
            return None;
        }
        if d.is_negative() != prev.is_negative() {
            neg += 1;
        }
        prev = d;
    }
    Some((n - neg, neg))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors `d_k / d_{k-1}`, with `d_k` the gcd of the `k x k`
/// minors; trailing zeros for the rank deficiency.
pub fn determinantal_invariants(a: &IntMatrix) -> Vec<Int> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut prev = Int::one();
    for k in 1..=rows.min(cols) {
        let mut g = Int::zero();
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: IntMatrix = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c].clone()).collect()).collect();
                g = g.gcd(&rational_det(&sub));
            }
        }
        if g.is_zero() {
            out.push(Int::zero());
            prev = Int::zero();
        } else {
            out.push(&g / &prev);
            prev = g;
        }
    }
    out
}

/// Smallest node count with a pencil at geometric genus `g`, by scanning.
pub fn brute_delta_min(g: i64, kind: ihs::curves::SurfaceKind, n: i64) -> i64 {
    (0..).find(|&d| ihs::curves::g1_exists(kind, n, g + d, d).unwrap().exists).unwrap()
}

/// Right-hand side of the genus identity, computed over Q.
pub fn genus_identity_rhs(g: i64, eps: i64, n: i64, k: i64) -> BigRational {
    let m = n - 1 + 2 * eps;
    let s = BigInt::from(g + eps + n - 1);
    let kk = BigInt::from(k);
    BigRational::new(&s * &s - &kk * &kk, BigInt::from(4 * m)) - BigRational::new(BigInt::from(m - 2 * k), BigInt::from(4))
        + BigRational::from_integer(BigInt::from(eps))
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests").join("golden").join(name)
}

pub enum GoldenStatus {
    Matched,
    Pinned,
}

/// Compares `value` with the stored golden file; writes it when the file is
/// missing or `UPDATE_GOLDEN=1`.
pub fn check_golden(name: &str, value: &Value) -> Result<GoldenStatus, String> {
    let path = golden_path(name);
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    if update || !path.exists() {
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        let text = serde_json::to_string_pretty(value).unwrap() + "\n";
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        return Ok(GoldenStatus::Pinned);
    }
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    if &stored == value {
        Ok(GoldenStatus::Matched)
    } else {
        Err(format!(
            "{} differs:\nstored: {}\ngot:    {}",
            path.display(),
            serde_json::to_string(&stored).unwrap(),
            serde_json::to_string(value).unwrap()
        ))
    }
}

pub struct CliRun {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str]) -> CliRun {
    let out = Command::new(env!("CARGO_BIN_EXE_ihs"))
        .args(args)
        .current_dir(manifest_dir().join("tests").join("golden"))
        .output()
        .expect("spawn ihs");
    CliRun {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Canonical invocations pinned as golden files (run from `tests/golden`).
pub const GOLDEN_INVOCATIONS: [(&str, &[&str]); 12] = [
    ("lattice_info_k3n2", &["lattice", "info", "--name", "K3n(2)"]),
    ("lattice_info_kum3", &["lattice", "info", "--name", "Kum(3)"]),
    ("lattice_complement", &["lattice", "complement", "--name", "U+rank1(-2)", "--vectors", "1,1,0"]),
    ("lattice_hyperbolic", &["lattice", "hyperbolic", "--name", "U+rank1(-6)", "--bound", "2"]),
    ("nl_check_k3n2", &["nl", "check", "--query-file", "queries/nl_k3n2.json"]),
    ("orbit_k3n2", &["orbit", "--query-file", "queries/orbit_k3n2.json"]),
    ("curves_class_example", &["curves", "class", "--g", "4", "--r", "5", "--eps", "0", "--n", "5"]),
    ("curves_delta_min", &["curves", "delta-min", "--g", "16", "--eps", "0", "--n", "2"]),
    ("curves_cover", &["curves", "cover", "--square", "2", "--t", "1", "--eps", "0", "--n", "2", "--g-max", "30"]),
    ("cubic_necessary_8", &["cubic", "necessary", "--d", "8", "--a-bound", "100"]),
    ("cubic_density_14", &["cubic", "density", "--d", "14", "--e0", "3"]),
    ("mori_rank3", &["mori", "enumerate", "--query-file", "queries/mori_rank3.json"]),
];

/// One invocation per documented subcommand.
pub const ALL_SUBCOMMANDS: [&[&str]; 18] = [
    &["lattice", "info", "--name", "K3n(2)"],
    &["lattice", "complement", "--name", "U+rank1(-2)", "--vectors", "1,1,0"],
    &["lattice", "enumerate", "--name", "U+rank1(-2)", "--bound", "1", "--min-square", "-2", "--max-square", "-2"],
    &["lattice", "hyperbolic", "--name", "U+rank1(-6)", "--bound", "2"],
    &["nl", "check", "--query-file", "queries/nl_k3n2.json"],
    &["nl", "orbit-squares", "--query-file", "queries/orbit_k3n2.json", "--depth", "2"],
    &["orbit", "--query-file", "queries/orbit_k3n2.json"],
    &["curves", "exists", "--eps", "0", "--n", "5", "--p", "9", "--delta", "5"],
    &["curves", "delta-min", "--g", "5", "--eps", "0", "--n", "5"],
    &["curves", "class", "--g", "16", "--r", "0", "--eps", "0", "--n", "2"],
    &["curves", "divisibility", "--g", "5", "--eps", "0", "--n", "5"],
    &["curves", "cover", "--square", "2", "--t", "1", "--eps", "1", "--n", "2", "--g-max", "30"],
    &["cubic", "admissible", "--d", "8"],
    &["cubic", "necessary", "--d", "14"],
    &["cubic", "sufficient", "--d", "14"],
    &["cubic", "density", "--d", "8", "--e0", "1"],
    &["cubic", "replay", "--d", "8", "--certificate-file", "queries/certificate_d8_m16.json"],
    &["mori", "enumerate", "--query-file", "queries/mori_diag.json"],
];

/// Integer tokens not glued to a preceding letter, digit or underscore.
pub fn integer_tokens(s: &str) -> Vec<String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let glued = i > 0 && (chars[i - 1].is_alphanumeric() || chars[i - 1] == '_');
        let neg = chars[i] == '-' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit();
        if !glued && (chars[i].is_ascii_digit() || neg) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else {
            i += 1;
        }
    }
    out
}

/// The integers a JSON value shows in text form: rationals with `den = 1`
/// contribute only their numerator.
pub fn json_integer_tokens(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(n.to_string()),
        Value::String(s) => out.extend(integer_tokens(s)),
        Value::Array(xs) => xs.iter().for_each(|x| json_integer_tokens(x, out)),
        Value::Object(m) => {
            if m.len() == 2 && m.contains_key("num") && m.contains_key("den") {
                json_integer_tokens(&m["num"], out);
                if m["den"] != Value::from(1) {
                    json_integer_tokens(&m["den"], out);
                }
            } else {
                m.values().for_each(|x| json_integer_tokens(x, out));
            }
        }
        _ => {}
    }
}

/// Text output with the `key:` prefixes removed.
pub fn text_value_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for line in text.lines() {
        out.extend(integer_tokens(line));
    }
    out
}
