//! Steepest descent over the 1-neighborhood, the scaling algorithm built on
//! it, and brute-force verifiers for minimality, proximity and the box
//! barrier.

use alloc::vec::Vec;

use crate::classify::{BoxTable, Verdict, Witness, WitnessDetail};
use crate::error::{check_dims, Error, Result};
use crate::functions::LatticeFunction;
use crate::lattice::{unit_directions, LatticeBox, LatticePoint};
use crate::value::{ExtendedValue, DEFAULT_EPSILON};

/// Cap on the number of points a brute-force scan may visit.
pub const MAX_ENUMERATION: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct DescentTrace {
    /// `x⁽⁰⁾, …, x⁽ᵏ⁾`; the final confirming call adds no point.
    pub path: Vec<LatticePoint>,
    /// `f` along the path.
    pub values: Vec<f64>,
    /// 1-neighborhood oracle calls, including the final confirming call.
    pub iterations: u64,
    /// Raw evaluations of `f` made by the oracle.
    pub oracle_evals: u64,
    pub minimizer: LatticePoint,
    /// `min ‖x⁽⁰⁾ − x*‖∞` over the brute-force argmin, when requested.
    pub l_star: Option<u64>,
}

impl DescentTrace {
    /// Fills `l_star` by brute force over `f`'s universe.
    pub fn with_l_star(mut self, f: &LatticeFunction) -> Result<Self> {
        self.l_star = Some(distance_to_argmin(f, &self.path[0], f.universe())?);
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTrace {
    /// Descending powers of two ending at 1.
    pub alphas: Vec<u64>,
    /// The point `x` after each phase.
    pub phase_points: Vec<LatticePoint>,
    /// 1-neighborhood oracle calls per phase.
    pub phase_calls: Vec<u64>,
    pub total_calls: u64,
    pub oracle_evals: u64,
    pub k_inf: u64,
    pub minimizer: LatticePoint,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScalingOptions {
    /// Overrides the universe diameter as the domain diameter bound.
    pub k_inf: Option<u64>,
}

/// The 1-neighborhood oracle over a feasible region, counting evaluations.
struct NeighborhoodOracle<'a> {
    eval: &'a dyn Fn(&[i64]) -> ExtendedValue,
    feasible: &'a dyn Fn(&[i64]) -> bool,
    dirs: Vec<LatticePoint>,
    evals: u64,
}

impl<'a> NeighborhoodOracle<'a> {
    fn new(n: usize, eval: &'a dyn Fn(&[i64]) -> ExtendedValue, feasible: &'a dyn Fn(&[i64]) -> bool) -> Self {
        NeighborhoodOracle { eval, feasible, dirs: unit_directions(n), evals: 0 }
    }

    /// Best point of `N₁(x)`: `x` wins ties, then the lexicographically
    /// smallest neighbor.
    fn argmin(&mut self, x: &[i64]) -> (LatticePoint, ExtendedValue) {
        self.evals += 1;
        let mut best = (LatticePoint::from(x), (self.eval)(x));
        let mut y = alloc::vec![0; x.len()];
        for d in &self.dirs {
            if d.is_zero() {
                continue;
            }
            for i in 0..x.len() {
                y[i] = x[i] + d[i];
            }
            if !(self.feasible)(&y) {
                continue;
            }
            self.evals += 1;
            let v = (self.eval)(&y);
            if v < best.1 {
                best = (LatticePoint::from(&y[..]), v);
            }
        }
        best
    }

    fn descend(&mut self, x0: &[i64], cap: u64) -> Result<DescentTrace> {
        let v0 = (self.eval)(x0);
        self.evals += 1;
        let v0 = v0.get().ok_or(Error::NotInDomain)?;
        let mut path = alloc::vec![LatticePoint::from(x0)];
        let mut values = alloc::vec![v0];
        let mut iterations = 0;
        loop {
            iterations += 1;
            if iterations > cap {
                return Err(Error::Diagnostic(alloc::format!(
                    "steepest descent did not stop within {cap} oracle calls"
                )));
            }
            let x = path.last().expect("path starts nonempty");
            let (y, v) = self.argmin(x);
            if &y == x {
                break;
            }
            path.push(y);
            values.push(v.raw());
        }
        let minimizer = path.last().expect("path starts nonempty").clone();
        Ok(DescentTrace { path, values, iterations, oracle_evals: self.evals, minimizer, l_star: None })
    }
}

/// A point of `N₁(x)` minimizing `f`, with `x` itself winning ties.
pub fn one_neighborhood_argmin(f: &LatticeFunction, x: &[i64]) -> Result<LatticePoint> {
    check_dims(f.dim(), x.len())?;
    if f.value(x).is_infinite() {
        return Err(Error::NotInDomain);
    }
    let eval = |y: &[i64]| f.value(y);
    let mut oracle = NeighborhoodOracle::new(f.dim(), &eval, &|_| true);
    Ok(oracle.argmin(x).0)
}

/// Steepest descent from `x0` until the oracle returns the current point.
/// Raises a diagnostic after `diameter + 2` oracle calls.
pub fn steepest_descent(f: &LatticeFunction, x0: &[i64]) -> Result<DescentTrace> {
    check_dims(f.dim(), x0.len())?;
    let eval = |y: &[i64]| f.value(y);
    let mut oracle = NeighborhoodOracle::new(f.dim(), &eval, &|_| true);
    oracle.descend(x0, f.universe().diameter() + 2)
}

/// `2^⌈log₂(k + 1)⌉`.
pub fn initial_scale(k_inf: u64) -> u64 {
    (k_inf + 1).next_power_of_two()
}

pub fn scaling_minimize(f: &LatticeFunction, x0: &[i64]) -> Result<ScalingTrace> {
    scaling_minimize_with(f, x0, ScalingOptions::default())
}

/// Each phase minimizes `y ↦ f(x + αy)` over `‖y‖∞ ≤ n` by steepest descent
/// from `y = 0`, then halves `α`. A phase result that is not a local minimum
/// of the unconstrained scaled function raises a diagnostic.
pub fn scaling_minimize_with(f: &LatticeFunction, x0: &[i64], opts: ScalingOptions) -> Result<ScalingTrace> {
    check_dims(f.dim(), x0.len())?;
    if f.value(x0).is_infinite() {
        return Err(Error::NotInDomain);
    }
    let n = f.dim();
    let radius = n as i64;
    let k_inf = opts.k_inf.unwrap_or_else(|| f.universe().diameter());
    let mut alpha = initial_scale(k_inf);
    let mut x = LatticePoint::from(x0);
    let mut trace = ScalingTrace {
        alphas: Vec::new(),
        phase_points: Vec::new(),
        phase_calls: Vec::new(),
        total_calls: 0,
        oracle_evals: 0,
        k_inf,
        minimizer: x.clone(),
    };
    loop {
        let a = alpha as i64;
        let base = x.clone();
        let scaled = move |y: &[i64]| {
            let z: Vec<i64> = base.iter().zip(y).map(|(b, v)| b + a * v).collect();
            f.value(&z)
        };
        let in_ball = move |y: &[i64]| y.iter().all(|v| v.abs() <= radius);
        let mut oracle = NeighborhoodOracle::new(n, &scaled, &in_ball);
        let phase = oracle.descend(&alloc::vec![0; n], 2 * n as u64 + 2)?;
        let y = phase.minimizer;
        let gy = scaled(&y);
        for d in unit_directions(n) {
            let nb: Vec<i64> = y.iter().zip(d.iter()).map(|(u, v)| u + v).collect();
            let gn = scaled(&nb);
            if gn.is_finite() && gn.raw() < gy.raw() - DEFAULT_EPSILON {
                return Err(Error::Diagnostic(alloc::format!(
                    "phase with scale {alpha} stopped at y = {y:?} on the ball boundary, not at a scaled local minimum"
                )));
            }
        }
        x = &x + &y.scaled(a);
        trace.alphas.push(alpha);
        trace.phase_points.push(x.clone());
        trace.phase_calls.push(phase.iterations);
        trace.total_calls += phase.iterations;
        trace.oracle_evals += phase.oracle_evals;
        if alpha == 1 {
            break;
        }
        alpha /= 2;
    }
    trace.minimizer = x;
    Ok(trace)
}

/// `f(x) ≤ f(x + d)` for every `d ∈ {−1, 0, 1}^n`; false off the domain.
pub fn is_global_min(f: &LatticeFunction, x: &[i64]) -> bool {
    if x.len() != f.dim() {
        return false;
    }
    let v = f.value(x);
    if v.is_infinite() {
        return false;
    }
    unit_directions(f.dim()).iter().all(|d| {
        let y: Vec<i64> = x.iter().zip(d.iter()).map(|(a, b)| a + b).collect();
        v <= f.value(&y)
    })
}

fn enumeration_guard(bx: &LatticeBox) -> Result<()> {
    if bx.cardinality() > MAX_ENUMERATION {
        return Err(Error::ResourceLimit { requested: bx.cardinality() as u128, limit: MAX_ENUMERATION as u128 });
    }
    Ok(())
}

/// Minimum value over the box and all points attaining it, in lexicographic
/// order. An empty domain yields `(+∞, [])`.
pub fn brute_force_argmin(f: &LatticeFunction, bx: &LatticeBox) -> Result<(ExtendedValue, Vec<LatticePoint>)> {
    check_dims(f.dim(), bx.dim())?;
    enumeration_guard(bx)?;
    let mut best = ExtendedValue::INFINITY;
    let mut argmin = Vec::new();
    for x in bx.points() {
        let v = f.value(&x);
        if v.is_infinite() {
            continue;
        }
        if v < best {
            best = v;
            argmin.clear();
        }
        if v == best {
            argmin.push(x);
        }
    }
    Ok((best, argmin))
}

/// `min ‖x − x*‖∞` over the brute-force argmin on `bx`.
pub fn distance_to_argmin(f: &LatticeFunction, x: &[i64], bx: &LatticeBox) -> Result<u64> {
    let (_, argmin) = brute_force_argmin(f, bx)?;
    argmin
        .iter()
        .map(|m| m.iter().zip(x).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0))
        .min()
        .ok_or_else(|| Error::InvalidArgument("the function has no finite value on the box".into()))
}

fn nearest(points: &[LatticePoint], x: &[i64]) -> Option<(u64, LatticePoint)> {
    points
        .iter()
        .map(|m| (m.iter().zip(x).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0), m.clone()))
        .min_by_key(|(d, _)| *d)
}

/// Every `x` in the box with `f(x) ≤ f(x + αd)` for all `d ∈ {−1,0,1}^n` has
/// a minimizer within `n(α − 1)`. `f` is restricted to the box; points
/// `x + αd` off the box count as `+∞`. The witness is `(x, nearest x*)`.
pub fn verify_proximity(f: &LatticeFunction, alpha: u64, bx: &LatticeBox) -> Result<Verdict> {
    check_dims(f.dim(), bx.dim())?;
    if alpha == 0 {
        return Err(Error::InvalidArgument("scale must be a positive integer".into()));
    }
    enumeration_guard(bx)?;
    let n = f.dim();
    let t = BoxTable::tabulate(f, bx);
    let (_, argmin) = brute_force_argmin(f, bx)?;
    let dirs = unit_directions(n);
    let bound = n as u64 * (alpha - 1);
    let a = alpha as i64;
    let (mut x, mut y) = (alloc::vec![0; n], alloc::vec![0; n]);
    let mut checked = 0;
    for &idx in t.finite_indices() {
        t.point(idx, &mut x);
        let vx = t.value_at(idx);
        let local = dirs.iter().all(|d| {
            for i in 0..n {
                y[i] = x[i] + a * d[i];
            }
            vx <= t.get(&y)
        });
        if !local {
            continue;
        }
        checked += 1;
        let (dist, m) = nearest(&argmin, &x).expect("x itself is finite");
        if dist > bound {
            let w = Witness { x: LatticePoint::from(&x[..]), y: m, detail: Some(WitnessDetail::Shift(dist)) };
            return Ok(Verdict::violated(w, checked));
        }
    }
    Ok(Verdict::holds(checked))
}

/// Empirical box-barrier check on `f` restricted to `bx`.
///
/// `lower[i] = None` stands for `−∞` and `upper[i] = None` for `+∞`. With
/// `S = {x : lower < x < upper}` and `W` its walls, if `f(x̂) ≤ f(y)` on
/// `W ∩ bx` then `f(x̂) ≤ f(z)` must hold on `bx \ S`; a failing `z` is
/// returned as the witness `(x̂, z)`.
pub fn box_barrier_verify(
    f: &LatticeFunction,
    lower: &[Option<i64>],
    upper: &[Option<i64>],
    xhat: &[i64],
    bx: &LatticeBox,
) -> Result<Verdict> {
    let n = f.dim();
    for len in [lower.len(), upper.len(), xhat.len(), bx.dim()] {
        check_dims(n, len)?;
    }
    let above = |v: i64, b: Option<i64>| b.is_none_or(|b| v > b);
    let below = |v: i64, b: Option<i64>| b.is_none_or(|b| v < b);
    if !(0..n).all(|i| above(xhat[i], lower[i]) && below(xhat[i], upper[i])) {
        return Err(Error::InvalidArgument("x̂ must lie strictly inside the barrier box".into()));
    }
    enumeration_guard(bx)?;
    let restricted = |x: &[i64]| if bx.contains(x) { f.value(x) } else { ExtendedValue::INFINITY };
    let fx = restricted(xhat);
    if fx.is_infinite() {
        return Err(Error::NotInDomain);
    }
    let inside = |x: &[i64]| (0..n).all(|i| above(x[i], lower[i]) && below(x[i], upper[i]));
    let closed = |x: &[i64]| (0..n).all(|i| lower[i].is_none_or(|p| x[i] >= p) && upper[i].is_none_or(|q| x[i] <= q));
    let on_wall = |x: &[i64]| closed(x) && !inside(x);
    let tol = DEFAULT_EPSILON;
    let dominated = |v: ExtendedValue| v.get().is_none_or(|v| fx.raw() <= v + tol);
    let mut checked = 0;
    for y in bx.points() {
        if on_wall(&y) {
            checked += 1;
            if !dominated(restricted(&y)) {
                return Ok(Verdict::holds(checked));
            }
        }
    }
    for z in bx.points() {
        if inside(&z) {
            continue;
        }
        checked += 1;
        if !dominated(restricted(&z)) {
            return Ok(Verdict::violated(Witness::pair(LatticePoint::from(xhat), z), checked));
        }
    }
    Ok(Verdict::holds(checked))
}
