//! Acceptance suite: twelve criteria, one PASS/FAIL line each. Runs as a
//! plain binary so the lines appear in `cargo test` output.

use std::time::{Duration, Instant};

use ddmc::fuzz::{
    ddm_instances, random_continuous_quadratic, random_continuous_two_separable, random_quadratic, random_table_on,
    random_two_separable, rng, Family, FuzzRng, Instance, QuadraticKind,
};
use ddmc::gallery::{points, run_gallery, EIGHT_POINT_SET};
use ddmc::spec::{parse_value, ParsedSpec};
use ddmc_core::classify::{
    is_ddm_convex, is_ddm_set, parallelogram_set_closure, Class, Classifier,
};
use ddmc_core::continuous::{fractional_restriction, verify_continuous_proximity, ProximityStatus};
use ddmc_core::functions::{
    combine, infconv_separable, project, restrict, transform, Combine, QuadraticSpec, Transform, UnivariateConvex,
};
use ddmc_core::lattice::{level_directions, midpoint_decompose, DirectionMultiset};
use ddmc_core::minimize::{brute_force_argmin, scaling_minimize, steepest_descent, verify_proximity};
use ddmc_core::{ExtendedValue, LatticeBox, LatticeFunction, LatticePoint};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde_json::json;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ddm(f: &LatticeFunction) -> Result<bool, String> {
    is_ddm_convex(f, f.universe()).map(|v| v.holds).map_err(|e| e.to_string())
}

fn err(e: ddmc_core::Error) -> String {
    e.to_string()
}

/// Shared random corpus: tables on `[0, s]^n` cycling through every
/// `n, s ∈ {1, 2, 3}`, values in `0..=9`, 20% holes.
fn table_corpus(count: usize) -> Vec<Instance> {
    let mut r = rng(0x5eed_0001);
    (0..count).map(|i| random_table_on(&mut r, 1 + i % 3, 1 + (i / 3 % 3) as i64, 0.2)).collect()
}

fn c1_gallery() -> Outcome {
    let r = run_gallery();
    let failed: Vec<_> = r.fixtures.iter().filter(|f| !f.passed).map(|f| format!("{} ({})", f.name, f.observed)).collect();
    ensure(failed.is_empty(), || format!("mismatched fixtures: {failed:?}"))?;
    Ok(format!("{} fixtures reproduce their verdicts and witnesses", r.fixtures.len()))
}

fn c2_characterizations(corpus: &[Instance]) -> Outcome {
    let c = Classifier::default();
    let (mut holds, mut pairs) = (0, 0);
    for (i, inst) in corpus.iter().enumerate() {
        let f = &inst.function;
        let v = c.ddm_characterizations(f, f.universe()).map_err(err)?;
        pairs += v.iter().map(|x| x.pairs_checked).sum::<u64>();
        let first = v[0].holds;
        if let Some(k) = v.iter().position(|x| x.holds != first) {
            return Err(format!("instance {i}: form 1 says {first}, form {} disagrees; spec {}", k + 1, inst.spec));
        }
        holds += usize::from(first);
    }
    Ok(format!("{} instances, 0 disagreements ({holds} DDM, {pairs} pair checks)", corpus.len()))
}

fn c3_hierarchy(corpus: &[Instance]) -> Outcome {
    let c = Classifier::default();
    let classes = [Class::Ddm, Class::LNatural, Class::GlobalDmc, Class::LocalDmc, Class::IntegrallyConvex, Class::Submodular];
    let (mut lnat, mut pairs) = (0, 0);
    for (i, inst) in corpus.iter().enumerate() {
        let f = &inst.function;
        let report = c.classify(f, f.universe(), &classes).map_err(err)?;
        pairs += report.verdicts.values().map(|v| v.pairs_checked).sum::<u64>();
        let failures = report.implication_failures();
        if let Some(fl) = failures.first() {
            return Err(format!("instance {i}: {:?} ⇒ {:?} fails; spec {}", fl.premises, fl.conclusion, inst.spec));
        }
        let get = |cls| report.get(cls).map(|v| v.holds).unwrap_or(false);
        let both = get(Class::IntegrallyConvex) && get(Class::Submodular);
        ensure(both == get(Class::LNatural), || format!("instance {i}: IC ∧ submodular ≠ L♮; spec {}", inst.spec))?;
        lnat += usize::from(get(Class::LNatural));
    }
    Ok(format!("{} instances, 0 implication failures ({lnat} L♮, {pairs} pair checks)", corpus.len()))
}

fn c4_quadratics() -> Outcome {
    let mut r = rng(0x5eed_0004);
    let kinds = [QuadraticKind::Uniform, QuadraticKind::Dominant, QuadraticKind::NearMiss];
    let (mut agree, mut dominant) = (0, 0);
    for i in 0..240 {
        let n = 2 + i % 2;
        let inst = random_quadratic(&mut r, n, kinds[i % 3]);
        let q: Vec<Vec<f64>> = serde_json::from_value(inst.spec["Q"].clone()).map_err(|e| e.to_string())?;
        let dom = QuadraticSpec::homogeneous(&q).map_err(err)?.diag_dominance().dominant;
        let is = ddm(&inst.function)?;
        ensure(is == dom, || format!("Q = {q:?}: DDM {is}, dominance {dom}"))?;
        agree += 1;
        dominant += usize::from(dom);
    }
    Ok(format!("{agree} matrices, DDM ⇔ dominance on all ({dominant} dominant)"))
}

fn c5_two_separable() -> Outcome {
    let mut r = rng(0x5eed_0005);
    for i in 0..220 {
        let n = 2 + i % 2;
        let inst = random_two_separable(&mut r, n, 3);
        ensure(ddm(&inst.function)?, || format!("not DDM: {}", inst.spec))?;
    }
    let mut worst = 0.0f64;
    for i in 0..100 {
        let n = 2 + i % 2;
        let inst = random_quadratic(&mut r, n, QuadraticKind::Dominant);
        let q: Vec<Vec<f64>> = serde_json::from_value(inst.spec["Q"].clone()).map_err(|e| e.to_string())?;
        let c: Vec<f64> = (0..n).map(|_| f64::from(r.random_range(-8..=8)) / 4.0).collect();
        let spec = QuadraticSpec::new(&q, c).map_err(err)?;
        let sep = spec.to_two_separable().map_err(err)?;
        for x in LatticeBox::cube(n, -3, 3).map_err(err)?.points() {
            let a = spec.eval_int(&x);
            let b = sep.eval(&x).raw();
            let rel = (a - b).abs() / a.abs().max(1.0);
            worst = worst.max(rel);
            ensure(rel <= 1e-9, || format!("Q = {q:?} at {x:?}: {a} vs {b}"))?;
        }
    }
    Ok(format!("220 random 2-separable instances DDM; 100 decompositions agree (max rel. error {worst:e})"))
}

fn random_separable_pieces(r: &mut FuzzRng, n: usize) -> Vec<UnivariateConvex> {
    (0..n)
        .map(|_| {
            let len = r.random_range(1..=3);
            let mut slopes: Vec<i64> = (0..len - 1).map(|_| r.random_range(-3..=3)).collect();
            slopes.sort_unstable();
            let mut values = vec![r.random_range(0..=3)];
            for s in slopes {
                let last = *values.last().unwrap();
                values.push(last + s);
            }
            UnivariateConvex::Table { lo: r.random_range(-1..=0), values: values.into_iter().map(ExtendedValue::from).collect() }
        })
        .collect()
}

fn c6_closure(pool: &[Instance]) -> Outcome {
    let mut r = rng(0x5eed_0006);
    let partners: Vec<&Instance> = pool.iter().filter(|i| i.function.dim() == 1).collect();
    ensure(!partners.is_empty(), || "no one-dimensional DDM partner in the corpus".into())?;
    let mut checks = 0;
    for (k, inst) in pool.iter().enumerate() {
        let f = &inst.function;
        let n = f.dim();
        let mut images: Vec<(String, LatticeFunction)> = Vec::new();
        for a in [2, 3] {
            images.push((format!("scale {a}"), transform(f, &Transform::Scale(a)).map_err(err)?));
        }
        let tau: Vec<i64> = (0..n).map(|_| if r.random_bool(0.5) { -1 } else { 1 }).collect();
        images.push(("sign flip".into(), transform(f, &Transform::SignFlip(tau)).map_err(err)?));
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        images.push(("permute".into(), transform(f, &Transform::Permute(perm)).map_err(err)?));
        let d: Vec<i64> = (0..n).map(|_| r.random_range(-3..=3)).collect();
        images.push(("translate".into(), transform(f, &Transform::Translate(d.into())).map_err(err)?));
        let partner = partners[k % partners.len()];
        images.push(("direct sum".into(), combine(f, &partner.function, Combine::DirectSum).map_err(err)?));
        if n >= 2 {
            let i = r.random_range(0..n);
            let v = r.random_range(f.universe().lo()[i]..=f.universe().hi()[i]);
            images.push(("restrict".into(), restrict(f, &[(i, v)]).map_err(err)?));
            let mut keep: Vec<usize> = (0..n).collect();
            keep.remove(r.random_range(0..n));
            images.push(("project".into(), project(f, &keep).map_err(err)?));
        }
        let phi = random_separable_pieces(&mut r, n);
        images.push(("infconv".into(), infconv_separable(f, &phi).map_err(err)?));
        for (op, g) in &images {
            ensure(ddm(g)?, || format!("{op} breaks DDM for {}", inst.spec))?;
            checks += 1;
        }
    }
    Ok(format!("{} DDM instances, {checks} transformed functions all DDM", pool.len()))
}

/// `x⁽ᵏ⁾` minimizes `f` over `‖x − x⁽⁰⁾‖∞ ≤ k`.
fn monotone_proximity(f: &LatticeFunction, path: &[LatticePoint]) -> bool {
    let x0 = &path[0];
    path.iter().enumerate().all(|(k, xk)| {
        let fk = f.value(xk);
        f.universe().points().all(|y| (&y - x0).norm_inf() > k as u64 || f.value(&y) >= fk)
    })
}

fn c7_descent(pool: &[Instance]) -> Outcome {
    let mut r = rng(0x5eed_0007);
    let mut runs = 0;
    let mut max_l = 0;
    for inst in pool {
        let f = &inst.function;
        let dom = f.effective_domain();
        for _ in 0..2 {
            let x0 = dom.choose(&mut r).expect("nonempty domain");
            let t = steepest_descent(f, x0).map_err(err)?.with_l_star(f).map_err(err)?;
            let l = t.l_star.expect("filled");
            ensure(t.iterations == l + 1, || format!("from {x0:?}: {} calls, L = {l}; spec {}", t.iterations, inst.spec))?;
            ensure(t.path.windows(2).all(|w| (&w[1] - &w[0]).norm_inf() <= 1), || format!("long step from {x0:?}"))?;
            ensure(t.values.windows(2).all(|w| w[1] < w[0]), || format!("non-decreasing value from {x0:?}"))?;
            ensure(monotone_proximity(f, &t.path), || format!("path leaves the nested argmins from {x0:?}"))?;
            runs += 1;
            max_l = max_l.max(l);
        }
    }
    ensure(pool.len() >= 100, || format!("only {} instances", pool.len()))?;
    Ok(format!("{runs} descents on {} instances use exactly L+1 calls (L up to {max_l})", pool.len()))
}

fn scaling_instance(r: &mut FuzzRng, n: usize, k: i64) -> Instance {
    let mut xi = serde_json::Map::new();
    for i in 0..n {
        let center = r.random_range(0..=k);
        let weight = f64::from(r.random_range(1..=8)) / 4.0;
        let kind = if r.random_bool(0.5) { "abs" } else { "square" };
        xi.insert(i.to_string(), json!({ "kind": kind, "center": center, "weight": weight }));
    }
    let mut phi = serde_json::Map::new();
    if n == 2 {
        phi.insert("0,1".into(), json!({ "kind": "abs", "center": r.random_range(-k..=k), "weight": r.random_range(0..=2) }));
    }
    let spec = json!({
        "dim": n, "family": "two_separable",
        "box": { "lo": vec![0; n], "hi": vec![k; n] },
        "xi": xi, "phi": phi,
    });
    match parse_value(&spec) {
        Ok(ParsedSpec::Lattice(function)) => Instance { spec, function },
        other => panic!("bad spec {spec}: {other:?}"),
    }
}

fn c8_scaling() -> Outcome {
    let mut r = rng(0x5eed_0008);
    let mut runs = 0;
    for k in [7i64, 15, 31] {
        for n in [1usize, 2] {
            for _ in 0..4 {
                let inst = scaling_instance(&mut r, n, k);
                let f = &inst.function;
                ensure(ddm(f)?, || format!("instance not DDM: {}", inst.spec))?;
                let x0: Vec<i64> = (0..n).map(|_| r.random_range(0..=k)).collect();
                let t = scaling_minimize(f, &x0).map_err(err)?;
                let (best, argmin) = brute_force_argmin(f, f.universe()).map_err(err)?;
                ensure(argmin.contains(&t.minimizer), || {
                    format!("K = {k}: returned {:?} with value {:?}, optimum {best:?}", t.minimizer, f.value(&t.minimizer))
                })?;
                let phases = (k as u64 + 1).ilog2() as usize + 1;
                ensure(t.alphas.len() == phases, || format!("K = {k}: {} phases, expected {phases}", t.alphas.len()))?;
                let mut prev = LatticePoint::from(&x0[..]);
                for (a, p) in t.alphas.iter().zip(&t.phase_points) {
                    let moved = (p - &prev).norm_inf();
                    ensure(moved <= n as u64 * a, || format!("phase alpha {a} moved {moved}"))?;
                    prev = p.clone();
                }
                let ball = 2 * n as u64;
                let bound = (n as u64 * ball + 1) * phases as u64;
                ensure(t.total_calls <= bound, || format!("{} calls exceed {bound}", t.total_calls))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs with K in {{7, 15, 31}}, n in {{1, 2}}: optimal, phase counts and call bounds met"))
}

fn c9_proximity(pool: &[Instance]) -> Outcome {
    let mut r = rng(0x5eed_0009);
    let mut instances: Vec<Instance> = pool.to_vec();
    for _ in 0..40 {
        let radius = r.random_range(2..=6);
        instances.push(random_two_separable(&mut r, 2, radius));
    }
    let mut local_points = 0;
    for inst in &instances {
        let f = &inst.function;
        ensure(ddm(f)?, || format!("instance not DDM: {}", inst.spec))?;
        for alpha in [2, 3] {
            let v = verify_proximity(f, alpha, f.universe()).map_err(err)?;
            ensure(v.holds, || format!("alpha {alpha}: witness {:?}; spec {}", v.witness, inst.spec))?;
            local_points += v.pairs_checked;
        }
    }
    Ok(format!("{} instances, alpha in {{2, 3}}: {local_points} local points all within n(alpha-1)", instances.len()))
}

fn c10_parallelogram(pool: &[Instance]) -> Outcome {
    let c = Classifier::default();
    for inst in pool {
        let f = &inst.function;
        let v = c.parallelogram_inequality(f, f.universe(), 4).map_err(err)?;
        ensure(v.holds, || format!("witness {:?}; spec {}", v.witness, inst.spec))?;
    }
    let mut r = rng(0x5eed_0010);
    let mut sets: Vec<Vec<LatticePoint>> = vec![
        points(&EIGHT_POINT_SET),
        points(&[[1, 0], [0, 1]]),
        points(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
    ];
    let cube = LatticeBox::cube(3, 0, 2).map_err(err)?;
    while sets.len() < 60 {
        let s: Vec<LatticePoint> = cube.points().filter(|_| r.random_bool(0.35)).collect();
        if !s.is_empty() && is_ddm_set(&s).map_err(err)?.holds {
            sets.push(s);
        }
    }
    for s in &sets {
        let v = parallelogram_set_closure(s).map_err(err)?;
        ensure(v.holds, || format!("set closure fails at {:?}", v.witness))?;
    }
    Ok(format!("{} DDM instances satisfy the inequality for m <= 4; {} DDM sets closed", pool.len(), sets.len()))
}

fn c11_continuous() -> Outcome {
    let mut r = rng(0x5eed_0011);
    let (mut quads, mut seps) = (0, 0);
    // Largest distance from a unique x̄ to any discrete minimizer, and from
    // any representative x̄ to its nearest discrete minimizer.
    let (mut worst_unique, mut worst_nearest) = (0.0f64, 0.0f64);
    for i in 0..60 {
        let inst = if i % 2 == 0 {
            quads += 1;
            random_continuous_quadratic(&mut r, 2, 6)
        } else {
            seps += 1;
            random_continuous_two_separable(&mut r, 2, 6)
        };
        let f = &inst.function;
        let bx = LatticeBox::cube(2, -6, 6).map_err(err)?;
        let p = verify_continuous_proximity(f, &bx).map_err(err)?;
        ensure(p.status == ProximityStatus::Holds, || {
            format!(
                "{:?}: continuous {:?}, discrete {:?}; spec {}",
                p.status, p.continuous.point, p.discrete_argmin, inst.spec
            )
        })?;
        if p.continuous.unique {
            worst_unique = worst_unique.max(p.max_discrete_distance);
        }
        worst_nearest = worst_nearest.max(p.min_discrete_distance);
        for alpha in 1..=3u64 {
            let a = alpha as i64;
            let scaled = LatticeBox::cube(2, -2 * a, 2 * a).map_err(err)?;
            let g = fractional_restriction(f, alpha, &scaled).map_err(err)?;
            let v = is_ddm_convex(&g, &scaled).map_err(err)?;
            ensure(v.holds, || format!("alpha {alpha} restriction not DDM on {scaled:?}; spec {}", inst.spec))?;
        }
    }
    Ok(format!("{quads} quadratics and {seps} 2-separable functions: proximity holds (distances up to {worst_unique:.3} from unique minimizers, {worst_nearest:.3} to the nearest; bound 2), restrictions DDM for alpha <= 3"))
}

fn c12_decomposition() -> Outcome {
    let mut r = rng(0x5eed_0012);
    for _ in 0..1200 {
        let n = r.random_range(1..=4);
        let x: Vec<i64> = (0..n).map(|_| r.random_range(-6..=6)).collect();
        let d = midpoint_decompose(&x);
        ensure(d.sum(n).coords() == &x[..], || format!("{x:?}: sum differs"))?;
        let levels = DirectionMultiset::from_unsorted(level_directions(&vec![0; n], &x).map_err(err)?);
        ensure(d == levels, || format!("{x:?}: decomposition differs from level sets"))?;
    }
    for _ in 0..1200 {
        let n = r.random_range(1..=4);
        let signs: Vec<i64> = (0..n).map(|_| if r.random_bool(0.5) { 1 } else { -1 }).collect();
        let depth: Vec<usize> = (0..n).map(|_| r.random_range(0..=6)).collect();
        let m = depth.iter().copied().max().unwrap_or(0);
        if m == 0 {
            continue;
        }
        let family: Vec<LatticePoint> = (0..m)
            .map(|k| LatticePoint::from((0..n).map(|i| if k < depth[i] { signs[i] } else { 0 }).collect::<Vec<_>>()))
            .collect();
        let expected = DirectionMultiset::from_unsorted(family);
        ensure(midpoint_decompose(&expected.sum(n)) == expected, || format!("family {expected:?} does not round-trip"))?;
    }
    Ok("1200 vectors decompose into their level sets; monotone families round-trip".into())
}

struct Tally {
    failed: Vec<u32>,
}

impl Tally {
    fn run(&mut self, id: u32, title: &str, limit: Option<Duration>, body: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let result = body();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(msg) => println!("PASS criterion {id:>2} {title}: {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                println!("FAIL criterion {id:>2} {title}: {msg} [{elapsed:.2?}]");
                self.failed.push(id);
            }
        }
    }
}

fn main() {
    let corpus = table_corpus(500);
    let mut pool: Vec<Instance> = corpus.iter().filter(|i| ddm(&i.function).unwrap_or(false)).cloned().collect();
    let mut r = rng(0x5eed_0000);
    let extra = 120usize.saturating_sub(pool.len()).max(20);
    pool.extend(ddm_instances(&mut r, Family::TwoSeparable, extra).into_iter().filter(|i| i.function.universe().cardinality() <= 125));
    let pool_note = format!("({} DDM tables from the corpus, {} in the DDM pool)", pool.iter().filter(|i| i.spec["family"] == "table").count(), pool.len());

    let mut t = Tally { failed: Vec::new() };
    let s = |secs| Some(Duration::from_secs(secs));
    t.run(1, "gallery exactness", s(1), c1_gallery);
    t.run(2, "characterization equivalence", s(30), || c2_characterizations(&corpus));
    t.run(3, "hierarchy soundness", None, || c3_hierarchy(&corpus));
    t.run(4, "quadratic characterization", s(60), c4_quadratics);
    t.run(5, "2-separable positivity", None, c5_two_separable);
    t.run(6, "closure suite", None, || c6_closure(&pool));
    t.run(7, "descent bound exactness", None, || c7_descent(&pool));
    t.run(8, "scaling-algorithm bound", None, c8_scaling);
    t.run(9, "proximity sweep", None, || c9_proximity(&pool));
    t.run(10, "parallelogram inequality", None, || c10_parallelogram(&pool));
    t.run(11, "continuous proximity", None, c11_continuous);
    t.run(12, "decomposition round-trip", None, c12_decomposition);
    println!("corpus: {} random tables {pool_note}", corpus.len());
    if !t.failed.is_empty() {
        println!("{} of 12 criteria failed: {:?}", t.failed.len(), t.failed);
        std::process::exit(1);
    }
    println!("all 12 criteria pass");
}
