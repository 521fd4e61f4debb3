//! Worked counterexamples and positive examples, each with its expected
//! verdict and witness.

use ddmc_core::classify::{
    classify_dmc, is_ddm_convex, is_ddm_set, is_lnat_convex, Verdict,
};
use ddmc_core::continuous::{fractional_restriction, ContinuousFunction};
use ddmc_core::functions::{infconv, QuadraticSpec};
use ddmc_core::minimize::brute_force_argmin;
use ddmc_core::{ExtendedValue, LatticeBox, LatticeFunction, LatticePoint, Result};
use serde::Serialize;

use crate::report::WitnessRecord;

/// Domain of the eight-point DDM set that is not discrete midpoint convex.
pub const EIGHT_POINT_SET: [[i64; 3]; 8] =
    [[0, 0, 0], [1, 0, 0], [1, 1, 1], [2, 1, 1], [1, 1, -1], [2, 1, -1], [1, 1, 0], [2, 1, 0]];
/// Discrete midpoint convex but not DDM.
pub const FOUR_POINT_SET: [[i64; 3]; 4] = [[0, 0, 0], [1, 1, 0], [1, 0, -1], [2, 1, -1]];
/// A sum of two L♮ sets that is not DDM.
pub const FOUR_DIM_SUM_SET: [[i64; 4]; 4] = [[0, 0, 0, 0], [0, 1, 1, 0], [1, 1, 0, 0], [1, 2, 1, 0]];

pub fn points<const N: usize>(raw: &[[i64; N]]) -> Vec<LatticePoint> {
    raw.iter().map(|p| LatticePoint::from(*p)).collect()
}

pub fn indicator<const N: usize>(raw: &[[i64; N]]) -> LatticeFunction {
    LatticeFunction::indicator(&points(raw)).expect("fixture points share a dimension")
}

/// Table on `[0, 2]^3` whose effective domain is a DDM set but which is not
/// DDM itself; `+∞` off the six listed points.
pub fn table_counterexample() -> LatticeFunction {
    let entries = [([0, 0, 0], 0), ([1, 0, 1], 1), ([1, 1, 0], 1), ([1, 0, 0], 2), ([1, 1, 1], 2), ([2, 1, 1], 3)];
    let e: Vec<(LatticePoint, ExtendedValue)> =
        entries.iter().map(|(x, v)| (LatticePoint::from(*x), ExtendedValue::from(*v))).collect();
    LatticeFunction::sparse_table(LatticeBox::cube(3, 0, 2).expect("valid box"), &e).expect("valid table")
}

/// `x^T Q x` with the positive definite `Q = [[5, 2], [2, 1]]` on `[−2, 2]²`.
pub fn pd_quadratic() -> LatticeFunction {
    let q = QuadraticSpec::homogeneous(&[vec![5.0, 2.0], vec![2.0, 1.0]]).expect("symmetric");
    LatticeFunction::quadratic(q, LatticeBox::cube(2, -2, 2).expect("valid box")).expect("valid quadratic")
}

/// `x ↦ F(x/2)` for the hull indicator of the three unit vectors.
pub fn hull_half_restriction() -> LatticeFunction {
    let bx = LatticeBox::cube(3, 0, 2).expect("valid box");
    fractional_restriction(&ContinuousFunction::simplex_hull(3), 2, &bx).expect("valid scale")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureResult {
    pub name: &'static str,
    pub claim: &'static str,
    pub passed: bool,
    pub observed: String,
    pub witness: Option<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_witness: Option<WitnessRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalleryReport {
    pub passed: bool,
    pub fixtures: Vec<FixtureResult>,
}

type Expected = (bool, Option<(&'static [i64], &'static [i64])>);

struct Fixture {
    name: &'static str,
    claim: &'static str,
    run: fn() -> Result<Verdict>,
    /// Expected `holds`, and the expected witness pair when violated.
    expected: Expected,
}

fn on_universe(f: &LatticeFunction, check: fn(&LatticeFunction, &LatticeBox) -> Result<Verdict>) -> Result<Verdict> {
    check(f, f.universe())
}

fn global_dmc(f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
    classify_dmc(f, bx).map(|(global, _)| global)
}

/// Conjunction of verdicts; the first failure is reported.
fn all(verdicts: impl IntoIterator<Item = Result<Verdict>>) -> Result<Verdict> {
    let mut pairs = 0;
    for v in verdicts {
        let v = v?;
        pairs += v.pairs_checked;
        if !v.holds {
            return Ok(Verdict { pairs_checked: pairs, ..v });
        }
    }
    Ok(Verdict::holds(pairs))
}

fn sign_flips() -> Vec<Vec<i64>> {
    (0..8).map(|mask| (0..3).map(|b| if mask >> b & 1 == 1 { -1 } else { 1 }).collect()).collect()
}

fn flipped_eight_point_fail_gdmc() -> Result<Verdict> {
    // Every flip must fail global DMC; report a flip that unexpectedly passes.
    let mut pairs = 0;
    for tau in sign_flips() {
        let pts: Vec<LatticePoint> = points(&EIGHT_POINT_SET).iter().map(|p| p.hadamard(&tau)).collect();
        let g = LatticeFunction::indicator(&pts)?;
        let v = on_universe(&g, global_dmc)?;
        pairs += v.pairs_checked;
        if v.holds {
            return Ok(Verdict::holds(pairs));
        }
    }
    let mut v = on_universe(&indicator(&EIGHT_POINT_SET), global_dmc)?;
    v.pairs_checked = pairs;
    Ok(v)
}

fn tilted_argmins_are_ddm_sets() -> Result<Verdict> {
    let f = table_counterexample();
    let grid: Vec<f64> = (-4..=4).map(|k| f64::from(k) * 0.5).collect();
    let mut checks = Vec::new();
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let (_, argmin) = brute_force_argmin(&f.tilt(&[a, b, c])?, f.universe())?;
                checks.push(is_ddm_set(&argmin));
            }
        }
    }
    all(checks)
}

fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "unit-pair-ddm",
            claim: "{(1,0),(0,1)} is a DDM set",
            run: || on_universe(&indicator(&[[1, 0], [0, 1]]), is_ddm_convex),
            expected: (true, None),
        },
        Fixture {
            name: "unit-pair-not-lnat",
            claim: "{(1,0),(0,1)} is not L♮-convex",
            run: || on_universe(&indicator(&[[1, 0], [0, 1]]), is_lnat_convex),
            expected: (false, Some((&[1, 0], &[0, 1]))),
        },
        Fixture {
            name: "four-point-gdmc",
            claim: "the four-point set is globally discrete midpoint convex",
            run: || on_universe(&indicator(&FOUR_POINT_SET), global_dmc),
            expected: (true, None),
        },
        Fixture {
            name: "four-point-not-ddm",
            claim: "the four-point set is not DDM",
            run: || on_universe(&indicator(&FOUR_POINT_SET), is_ddm_convex),
            expected: (false, Some((&[0, 0, 0], &[2, 1, -1]))),
        },
        Fixture {
            name: "eight-point-ddm",
            claim: "the eight-point set and all its sign flips are DDM",
            run: || {
                all(sign_flips().into_iter().map(|tau| {
                    let pts: Vec<LatticePoint> = points(&EIGHT_POINT_SET).iter().map(|p| p.hadamard(&tau)).collect();
                    LatticeFunction::indicator(&pts).and_then(|g| on_universe(&g, is_ddm_convex))
                }))
            },
            expected: (true, None),
        },
        Fixture {
            name: "eight-point-not-gdmc",
            claim: "the eight-point set is not globally discrete midpoint convex, under every sign flip",
            run: flipped_eight_point_fail_gdmc,
            expected: (false, None),
        },
        Fixture {
            name: "table-not-ddm",
            claim: "the six-point table function is not DDM although its domain is",
            run: || {
                let f = table_counterexample();
                all([is_ddm_set(&f.effective_domain()), on_universe(&f, is_ddm_convex)])
            },
            expected: (false, Some((&[0, 0, 0], &[2, 1, 1]))),
        },
        Fixture {
            name: "table-tilted-argmins",
            claim: "every sampled argmin of the tilted table function is a DDM set",
            run: tilted_argmins_are_ddm_sets,
            expected: (true, None),
        },
        Fixture {
            name: "four-dim-sum-not-ddm",
            claim: "the sum of two L♮ sets in four dimensions is not DDM",
            run: || on_universe(&indicator(&FOUR_DIM_SUM_SET), is_ddm_convex),
            expected: (false, Some((&[0, 0, 0, 0], &[1, 2, 1, 0]))),
        },
        Fixture {
            name: "minkowski-not-ddm",
            claim: "the Minkowski sum of two DDM sets is not DDM",
            run: || {
                let s1 = indicator(&[[0, 0, 0], [1, 1, 0]]);
                let s2 = indicator(&[[0, 0, 0], [0, 1, 1]]);
                all([on_universe(&s1, is_ddm_convex), on_universe(&s2, is_ddm_convex), {
                    infconv(&s1, &s2).and_then(|h| on_universe(&h, is_ddm_convex))
                }])
            },
            expected: (false, Some((&[0, 0, 0], &[1, 2, 1]))),
        },
        Fixture {
            name: "pd-quadratic-not-ddm",
            claim: "x^T [[5,2],[2,1]] x restricted to [-2,2]^2 is not DDM",
            run: || on_universe(&pd_quadratic(), is_ddm_convex),
            expected: (false, None),
        },
        Fixture {
            name: "unit-vectors-ddm",
            claim: "the three unit vectors form a DDM set",
            run: || on_universe(&indicator(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]), is_ddm_convex),
            expected: (true, None),
        },
        Fixture {
            name: "hull-half-not-ddm",
            claim: "the hull indicator of the unit vectors, scaled by 1/2, is not DDM",
            run: || on_universe(&hull_half_restriction(), is_ddm_convex),
            expected: (false, Some((&[2, 0, 0], &[0, 1, 1]))),
        },
    ]
}

fn evaluate(fx: &Fixture) -> FixtureResult {
    let (holds, pair) = fx.expected;
    let expected_witness = pair.map(|(x, y)| WitnessRecord { x: x.to_vec(), y: y.to_vec(), detail: None });
    match (fx.run)() {
        Ok(v) => {
            let witness_ok = match (pair, &v.witness) {
                (Some((x, y)), Some(w)) => w.same_pair(x, y),
                (Some(_), None) => false,
                (None, _) => true,
            };
            let passed = v.holds == holds && witness_ok;
            let observed = match &v.witness {
                None => format!("holds ({} pairs)", v.pairs_checked),
                Some(w) => format!("violated at x={:?} y={:?}", w.x.coords(), w.y.coords()),
            };
            FixtureResult {
                name: fx.name,
                claim: fx.claim,
                passed,
                observed,
                witness: v.witness.as_ref().map(WitnessRecord::from),
                expected_witness,
            }
        }
        Err(e) => FixtureResult {
            name: fx.name,
            claim: fx.claim,
            passed: false,
            observed: format!("error: {e}"),
            witness: None,
            expected_witness,
        },
    }
}

pub fn run_gallery() -> GalleryReport {
    let fixtures: Vec<FixtureResult> = fixtures().iter().map(evaluate).collect();
    GalleryReport { passed: fixtures.iter().all(|f| f.passed), fixtures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_passes() {
        let r = run_gallery();
        for f in &r.fixtures {
            assert!(f.passed, "{}: {}", f.name, f.observed);
        }
        assert!(r.fixtures.len() >= 10);
    }
}
