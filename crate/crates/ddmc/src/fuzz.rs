//! Seeded generators of random instances, emitted as JSON specs so every
//! instance can be replayed through the parser.

use ddmc_core::classify::{is_ddm_convex, Classifier};
use ddmc_core::continuous::ContinuousFunction;
use ddmc_core::{LatticeBox, LatticeFunction};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::spec::{parse_value, ParsedSpec};

pub type FuzzRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FuzzRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Table,
    Quadratic,
    TwoSeparable,
}

impl Family {
    pub fn key(self) -> &'static str {
        match self {
            Family::Table => "table",
            Family::Quadratic => "quadratic",
            Family::TwoSeparable => "2sep",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub spec: Value,
    pub function: LatticeFunction,
}

fn lattice(spec: Value) -> Instance {
    match parse_value(&spec) {
        Ok(ParsedSpec::Lattice(function)) => Instance { spec, function },
        other => panic!("generator produced an invalid spec {spec}: {other:?}"),
    }
}

fn box_json(lo: &[i64], hi: &[i64]) -> Value {
    json!({ "lo": lo, "hi": hi })
}

fn quarter(rng: &mut FuzzRng, lo: f64, hi: f64) -> f64 {
    let (a, b) = ((lo * 4.0).ceil() as i64, (hi * 4.0).floor() as i64);
    rng.random_range(a..=b) as f64 / 4.0
}

/// Table on `[0, s]^n` with `n ≤ max_dim`, `s ≤ max_side`, finite values in
/// `0..=9` and `+∞` holes with probability `hole_rate`. At least one value is
/// finite.
pub fn random_table(rng: &mut FuzzRng, max_dim: usize, max_side: i64, hole_rate: f64) -> Instance {
    let n = rng.random_range(1..=max_dim);
    let side = rng.random_range(1..=max_side);
    random_table_on(rng, n, side, hole_rate)
}

/// Table on `[0, side]^n`; see [`random_table`].
pub fn random_table_on(rng: &mut FuzzRng, n: usize, side: i64, hole_rate: f64) -> Instance {
    let bx = LatticeBox::cube(n, 0, side).expect("valid box");
    let mut values = Vec::new();
    for x in bx.points() {
        if !rng.random_bool(hole_rate) {
            values.push(json!({ "x": x.coords(), "v": rng.random_range(0..=9) }));
        }
    }
    if values.is_empty() {
        let x = bx.point_at(rng.random_range(0..bx.cardinality() as usize));
        values.push(json!({ "x": x.coords(), "v": rng.random_range(0..=9) }));
    }
    lattice(json!({
        "dim": n,
        "family": "table",
        "sparse": true,
        "box": box_json(bx.lo(), bx.hi()),
        "values": values,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadraticKind {
    /// Entries uniform over quarter-integers in `[−3, 3]`.
    Uniform,
    /// Diagonally dominant with nonnegative diagonal, entries in `[−3, 3]`.
    Dominant,
    /// One row falls short of dominance by a quarter.
    NearMiss,
}

/// Symmetric quarter-integer matrix of size `n`.
pub fn random_matrix(rng: &mut FuzzRng, n: usize, kind: QuadraticKind) -> Vec<Vec<f64>> {
    let mut q = vec![vec![0.0; n]; n];
    let off = if kind == QuadraticKind::Uniform { 3.0 } else { 3.0 / (n.max(2) - 1) as f64 };
    for i in 0..n {
        for j in i + 1..n {
            let v = quarter(rng, -off, off);
            q[i][j] = v;
            q[j][i] = v;
        }
    }
    let short = rng.random_range(0..n);
    for i in 0..n {
        let row: f64 = (0..n).filter(|&j| j != i).map(|j| q[i][j].abs()).sum();
        q[i][i] = match kind {
            QuadraticKind::Uniform => quarter(rng, -3.0, 3.0),
            QuadraticKind::Dominant => row + quarter(rng, 0.0, 3.0 - row),
            QuadraticKind::NearMiss if i == short => row - 0.25,
            QuadraticKind::NearMiss => row + quarter(rng, 0.0, 3.0 - row),
        };
    }
    q
}

/// `x^T Q x` on `[−3, 3]^n`.
pub fn random_quadratic(rng: &mut FuzzRng, n: usize, kind: QuadraticKind) -> Instance {
    let q = random_matrix(rng, n, kind);
    lattice(json!({
        "dim": n,
        "family": "quadratic",
        "Q": q,
        "box": box_json(&vec![-3; n], &vec![3; n]),
    }))
}

fn random_piece(rng: &mut FuzzRng, allow_table: bool) -> Value {
    let weight = quarter(rng, 0.25, 3.0);
    match rng.random_range(0..if allow_table { 4 } else { 3 }) {
        0 => json!({ "kind": "abs", "center": rng.random_range(-2..=2), "weight": weight }),
        1 => json!({ "kind": "square", "center": rng.random_range(-2..=2), "weight": weight }),
        2 => {
            let k = rng.random_range(1..=3);
            let lines: Vec<Value> =
                (0..k).map(|_| json!([quarter(rng, -3.0, 3.0), quarter(rng, -3.0, 3.0)])).collect();
            json!({ "kind": "affine_max", "lines": lines })
        }
        _ => {
            // Nondecreasing differences give a convex table.
            let len = rng.random_range(3..=7);
            let mut slopes: Vec<i64> = (0..len - 1).map(|_| rng.random_range(-4..=4)).collect();
            slopes.sort_unstable();
            let mut values = vec![rng.random_range(0..=5)];
            for s in slopes {
                let last = *values.last().expect("nonempty");
                values.push(last + s);
            }
            json!({ "kind": "table", "lo": rng.random_range(-4..=0), "values": values })
        }
    }
}

fn random_real_piece(rng: &mut FuzzRng) -> Value {
    let weight = rng.random_range(0.25..3.0);
    let center: f64 = rng.random_range(-2.0..2.0);
    match rng.random_range(0..3) {
        0 => json!({ "kind": "abs", "center": center, "weight": weight }),
        1 => json!({ "kind": "square", "center": center, "weight": weight }),
        _ => {
            let k = rng.random_range(2..=3);
            let lines: Vec<Value> =
                (0..k).map(|_| json!([rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)])).collect();
            json!({ "kind": "affine_max", "lines": lines })
        }
    }
}

fn two_separable_payload(rng: &mut FuzzRng, n: usize, piece: &mut dyn FnMut(&mut FuzzRng) -> Value) -> Map<String, Value> {
    let mut xi = Map::new();
    for i in 0..n {
        if rng.random_bool(0.8) {
            xi.insert(i.to_string(), piece(rng));
        }
    }
    let mut out = Map::new();
    out.insert("xi".into(), Value::Object(xi));
    for name in ["phi", "psi"] {
        let mut m = Map::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random_bool(0.3) {
                    m.insert(format!("{i},{j}"), piece(rng));
                }
            }
        }
        out.insert(name.into(), Value::Object(m));
    }
    out
}

/// 2-separable function on `[−r, r]^n` with pieces from a small closed-form
/// pool.
pub fn random_two_separable(rng: &mut FuzzRng, n: usize, radius: i64) -> Instance {
    let mut spec = two_separable_payload(rng, n, &mut |r| random_piece(r, true));
    spec.insert("dim".into(), json!(n));
    spec.insert("family".into(), json!("two_separable"));
    spec.insert("box".into(), box_json(&vec![-radius; n], &vec![radius; n]));
    lattice(Value::Object(spec))
}

#[derive(Debug, Clone)]
pub struct ContinuousInstance {
    pub spec: Value,
    pub function: ContinuousFunction,
}

fn continuous(spec: Value) -> ContinuousInstance {
    match parse_value(&spec) {
        Ok(ParsedSpec::Continuous(function)) => ContinuousInstance { spec, function },
        other => panic!("generator produced an invalid spec {spec}: {other:?}"),
    }
}

/// Real 2-separable function on `[−r, r]^n` with real piece parameters.
pub fn random_continuous_two_separable(rng: &mut FuzzRng, n: usize, radius: i64) -> ContinuousInstance {
    let mut spec = two_separable_payload(rng, n, &mut random_real_piece);
    spec.insert("continuous".into(), json!(true));
    spec.insert("dim".into(), json!(n));
    spec.insert("family".into(), json!("two_separable"));
    spec.insert("box".into(), box_json(&vec![-radius; n], &vec![radius; n]));
    continuous(Value::Object(spec))
}

/// Strictly dominant quarter-integer quadratic with a random linear term, as
/// a function of real variables on `[−r, r]^n`.
pub fn random_continuous_quadratic(rng: &mut FuzzRng, n: usize, radius: i64) -> ContinuousInstance {
    let mut q = random_matrix(rng, n, QuadraticKind::Dominant);
    for (i, row) in q.iter_mut().enumerate() {
        // Strict dominance keeps the matrix positive definite.
        row[i] += 0.25;
    }
    let c: Vec<f64> = (0..n).map(|_| quarter(rng, -4.0, 4.0)).collect();
    continuous(json!({
        "continuous": true,
        "dim": n,
        "family": "quadratic",
        "Q": q,
        "c": c,
        "box": box_json(&vec![-radius; n], &vec![radius; n]),
    }))
}

/// Instances of `family` that pass the DDM check on their universe, found by
/// rejection sampling from the generators; tables draw from boxes up to
/// `[0, 3]^3` with a 20% hole rate.
pub fn ddm_instances(rng: &mut FuzzRng, family: Family, count: usize) -> Vec<Instance> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let inst = generate(rng, family);
        if is_ddm_convex(&inst.function, inst.function.universe()).is_ok_and(|v| v.holds) {
            out.push(inst);
        }
    }
    out
}

/// One instance of `family` with the default generator settings.
pub fn generate(rng: &mut FuzzRng, family: Family) -> Instance {
    match family {
        Family::Table => random_table(rng, 3, 3, 0.2),
        Family::Quadratic => {
            let n = rng.random_range(2..=3);
            let kind = match rng.random_range(0..3) {
                0 => QuadraticKind::Uniform,
                1 => QuadraticKind::Dominant,
                _ => QuadraticKind::NearMiss,
            };
            random_quadratic(rng, n, kind)
        }
        Family::TwoSeparable => {
            let n = rng.random_range(2..=3);
            random_two_separable(rng, n, 3)
        }
    }
}

/// Generates `count` instances from `seed` and classifies each for DDM.
pub fn fuzz_report(c: &Classifier, seed: u64, count: usize, family: Family) -> ddmc_core::Result<Value> {
    let mut r = rng(seed);
    let mut items = Vec::with_capacity(count);
    let mut violations = 0;
    for index in 0..count {
        let inst = generate(&mut r, family);
        let v = c.is_ddm_convex(&inst.function, inst.function.universe())?;
        violations += usize::from(!v.holds);
        items.push(json!({
            "index": index,
            "spec": inst.spec,
            "ddm": crate::report::ClassRecord::new("ddm", &v),
        }));
    }
    Ok(json!({
        "seed": seed,
        "family": family.key(),
        "count": count,
        "ddm_violations": violations,
        "instances": items,
    }))
}
