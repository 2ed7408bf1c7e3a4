#![allow(dead_code)]

use std::path::PathBuf;

use lpduet::model::{build_model, Constraint, LpModel, Relation, Sense};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_140_765;

/// Reads `LPDUET_SEED`, falling back to a fixed default.
pub fn seed() -> u64 {
    std::env::var("LPDUET_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// One independent stream per suite so suites do not shift each other.
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn coeff(rng: &mut impl Rng) -> f64 {
    // quarter steps keep arithmetic exact-ish and produce some zeros
    (rng.gen_range(-20..=20) as f64) * 0.25
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|j| format!("x{j}")).collect()
}

/// Numerical rank by Gaussian elimination with partial pivoting.
pub fn rank(rows: &[Vec<f64>]) -> usize {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else {
            break;
        };
        if a[p][c].abs() <= 1e-9 {
            continue;
        }
        a.swap(r, p);
        let pivot = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            let f = row[c] / pivot[c];
            for (v, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *v -= f * p;
            }
        }
        r += 1;
    }
    r
}

/// A maximization LP with `n` variables and `m` rows (`m >= 1`) that has a
/// strictly interior feasible point and is bounded by a final
/// `sum x <= U` row. Equality rows are kept linearly independent so the
/// equality form has full row rank.
pub fn random_feasible_bounded(rng: &mut impl Rng, n: usize, m: usize) -> LpModel {
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..5.0)).collect();
    let mut rows = Vec::with_capacity(m);
    let mut equalities: Vec<Vec<f64>> = Vec::new();
    for i in 0..m - 1 {
        let a: Vec<f64> = (0..n).map(|_| coeff(rng)).collect();
        let ax: f64 = a.iter().zip(&x0).map(|(a, x)| a * x).sum();
        let slack = rng.gen_range(0.5..4.0);
        let mut pick = rng.gen_range(0..5);
        if pick == 4 {
            equalities.push(a.clone());
            if rank(&equalities) < equalities.len() {
                equalities.pop();
                pick = 0;
            }
        }
        let (rel, b) = match pick {
            0 | 1 => (Relation::Le, ax + slack),
            2 | 3 => (Relation::Ge, ax - slack),
            _ => (Relation::Eq, ax),
        };
        rows.push(Constraint::new(format!("r{i}"), a, rel, b));
    }
    let total: f64 = x0.iter().sum();
    rows.push(Constraint::new(
        "bound",
        vec![1.0; n],
        Relation::Le,
        total + rng.gen_range(1.0..10.0),
    ));
    let c: Vec<f64> = (0..n).map(|_| coeff(rng)).collect();
    build_model(Sense::Maximize, names(n), c, rows).expect("generated model is valid")
}

/// Infeasible by construction: `a·x <= b` and `a·x >= b + gap` share a row
/// vector, embedded among random feasible-looking rows.
pub fn random_infeasible(rng: &mut impl Rng) -> LpModel {
    let n = rng.gen_range(1..=4);
    let a: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=4) as f64).collect();
    let b = rng.gen_range(1.0..10.0);
    let gap = rng.gen_range(0.5..5.0);
    let mut rows = vec![
        Constraint::new("upper", a.clone(), Relation::Le, b),
        Constraint::new("lower", a, Relation::Ge, b + gap),
    ];
    for i in 0..rng.gen_range(0..3) {
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=3) as f64).collect();
        rows.push(Constraint::new(
            format!("extra{i}"),
            a,
            Relation::Le,
            rng.gen_range(5.0..20.0),
        ));
    }
    // a row that is impossible on its own about half the time
    if rng.gen_bool(0.5) {
        let a: Vec<f64> = (0..n).map(|_| -(rng.gen_range(0..=3) as f64)).collect();
        rows.push(Constraint::new("negative", a, Relation::Ge, rng.gen_range(1.0..5.0)));
    }
    let c: Vec<f64> = (0..n).map(|_| coeff(rng)).collect();
    build_model(Sense::Maximize, names(n), c, rows).expect("generated model is valid")
}

/// Unbounded by construction: a free direction `x_k` that only appears with
/// nonpositive coefficients in `<=` rows and has a positive objective.
pub fn random_unbounded(rng: &mut impl Rng) -> LpModel {
    let n = rng.gen_range(2..=4);
    let k = rng.gen_range(0..n);
    let mut rows = Vec::new();
    for i in 0..rng.gen_range(1..=4) {
        let mut a: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=3) as f64).collect();
        a[k] = -(rng.gen_range(0..=2) as f64);
        rows.push(Constraint::new(
            format!("r{i}"),
            a,
            Relation::Le,
            rng.gen_range(1.0..10.0),
        ));
    }
    if rng.gen_bool(0.5) {
        // a >= row forces artificials into the start
        let mut a = vec![0.0; n];
        a[k] = 1.0;
        rows.push(Constraint::new("floor", a, Relation::Ge, rng.gen_range(0.5..3.0)));
    }
    let mut c: Vec<f64> = (0..n).map(|_| coeff(rng)).collect();
    c[k] = rng.gen_range(1..=8) as f64 * 0.5;
    build_model(Sense::Maximize, names(n), c, rows).expect("generated model is valid")
}

fn random_value(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..6) {
        0 => 0.0,
        1 => rng.gen_range(-10..=10) as f64,
        2 => rng.gen_range(-1.0..1.0),
        3 => rng.gen_range(-1e6..1e6),
        4 => rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-30..30)),
        _ => f64::from_bits(rng.gen::<u64>() >> 2 | 0x3000_0000_0000_0000) * if rng.gen() { 1.0 } else { -1.0 },
    }
}

fn random_ident(rng: &mut impl Rng, prefix: &str, i: usize) -> String {
    const TAIL: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
    let len = rng.gen_range(0..6);
    let tail: String = (0..len).map(|_| TAIL[rng.gen_range(0..TAIL.len())] as char).collect();
    format!("{prefix}{tail}_{i}")
}

/// Arbitrary well-formed model with identifier names and coefficients
/// spanning many magnitudes, for serialization round trips.
pub fn random_text_model(rng: &mut impl Rng) -> LpModel {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=8);
    let names = (0..n).map(|j| random_ident(rng, "v", j)).collect();
    let objective = (0..n).map(|_| random_value(rng)).collect();
    let rows = (0..m)
        .map(|i| {
            let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
            Constraint::new(
                random_ident(rng, "C", i),
                (0..n).map(|_| random_value(rng)).collect(),
                rel,
                random_value(rng),
            )
        })
        .collect();
    let sense = if rng.gen() { Sense::Maximize } else { Sense::Minimize };
    build_model(sense, names, objective, rows).unwrap()
}
