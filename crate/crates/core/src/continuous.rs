//! Convex functions of real variables, their lattice restrictions after
//! fractional scaling, and empirical checks that continuous and discrete
//! minimizers lie close together.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::float::FloatCore;

use crate::classify::{Classifier, Verdict};
use crate::error::{check_dims, Error, Result};
use crate::functions::{LatticeFunction, QuadraticSpec};
use crate::lattice::{unit_directions, LatticeBox, LatticePoint};
use crate::minimize::brute_force_argmin;
use crate::value::ExtendedValue;

/// Hull membership tolerance for the simplex indicator.
const HULL_TOL: f64 = 1e-12;
/// Sweep cap for the direction-search solver.
pub const MAX_SWEEPS: u64 = 100_000;

/// A univariate convex function of a real argument.
#[derive(Debug, Clone, PartialEq)]
pub enum RealPiece {
    Affine { slope: f64, intercept: f64 },
    Abs { center: f64, weight: f64 },
    Square { center: f64, weight: f64 },
    /// Pointwise maximum of lines `(slope, intercept)`.
    AffineMax(Vec<(f64, f64)>),
}

impl RealPiece {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        let ok = match self {
            RealPiece::Affine { slope, intercept } => finite(*slope) && finite(*intercept),
            RealPiece::Abs { center, weight } | RealPiece::Square { center, weight } => {
                finite(*center) && finite(*weight) && *weight >= 0.0
            }
            RealPiece::AffineMax(lines) => !lines.is_empty() && lines.iter().all(|(a, b)| finite(*a) && finite(*b)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Rejected("piece parameters must be finite with nonnegative weights".into()))
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            RealPiece::Affine { slope, intercept } => slope * t + intercept,
            RealPiece::Abs { center, weight } => weight * (t - center).abs(),
            RealPiece::Square { center, weight } => weight * (t - center) * (t - center),
            RealPiece::AffineMax(lines) => lines.iter().map(|(a, b)| a * t + b).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `(a, b, c)` with `piece(t) = a t² + b t + c`, when it is a polynomial.
    fn quadratic_coefficients(&self) -> Option<(f64, f64, f64)> {
        match *self {
            RealPiece::Affine { slope, intercept } => Some((0.0, slope, intercept)),
            RealPiece::Square { center, weight } => Some((weight, -2.0 * weight * center, weight * center * center)),
            RealPiece::Abs { weight: 0.0, .. } => Some((0.0, 0.0, 0.0)),
            _ => None,
        }
    }
}

/// `Σ ξ_i(x_i) + Σ φ_ij(x_i − x_j) + Σ ψ_ij(x_i + x_j)` over the reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTwoSeparable {
    pub n: usize,
    pub xi: Vec<RealPiece>,
    pub phi: BTreeMap<(usize, usize), RealPiece>,
    pub psi: BTreeMap<(usize, usize), RealPiece>,
}

impl RealTwoSeparable {
    pub fn new(
        n: usize,
        xi: Vec<RealPiece>,
        phi: BTreeMap<(usize, usize), RealPiece>,
        psi: BTreeMap<(usize, usize), RealPiece>,
    ) -> Result<Self> {
        check_dims(n, xi.len())?;
        for p in &xi {
            p.validate()?;
        }
        for (&(i, j), p) in phi.iter().chain(psi.iter()) {
            if i >= n || j >= n || i == j {
                return Err(Error::Rejected(alloc::format!("invalid index pair ({i}, {j})")));
            }
            p.validate()?;
        }
        Ok(RealTwoSeparable { n, xi, phi, psi })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut s: f64 = self.xi.iter().zip(x).map(|(p, &t)| p.eval(t)).sum();
        for (&(i, j), p) in &self.phi {
            s += p.eval(x[i] - x[j]);
        }
        for (&(i, j), p) in &self.psi {
            s += p.eval(x[i] + x[j]);
        }
        s
    }

    /// Rewrites as `x^T Q x + c^T x + k` when every piece is polynomial.
    fn as_quadratic(&self) -> Option<(Vec<Vec<f64>>, Vec<f64>, f64)> {
        let n = self.n;
        let mut q = alloc::vec![alloc::vec![0.0; n]; n];
        let mut c = alloc::vec![0.0; n];
        let mut k = 0.0;
        for (i, p) in self.xi.iter().enumerate() {
            let (a, b, e) = p.quadratic_coefficients()?;
            q[i][i] += a;
            c[i] += b;
            k += e;
        }
        for (sign, map) in [(-1.0, &self.phi), (1.0, &self.psi)] {
            for (&(i, j), p) in map {
                let (a, b, e) = p.quadratic_coefficients()?;
                // a (x_i ± x_j)² + b (x_i ± x_j) + e
                q[i][i] += a;
                q[j][j] += a;
                q[i][j] += sign * a;
                q[j][i] += sign * a;
                c[i] += b;
                c[j] += sign * b;
                k += e;
            }
        }
        Some((q, c, k))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousRepr {
    Quadratic(QuadraticSpec),
    TwoSeparable(RealTwoSeparable),
    /// Indicator of the convex hull of the unit vectors: `x ≥ 0`, `Σ x = 1`.
    SimplexHull { n: usize },
}

/// A convex function on a real box; `+∞` outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousFunction {
    pub repr: ContinuousRepr,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ContinuousFunction {
    pub fn new(repr: ContinuousRepr, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let n = match &repr {
            ContinuousRepr::Quadratic(q) => q.dim(),
            ContinuousRepr::TwoSeparable(s) => s.n,
            ContinuousRepr::SimplexHull { n } => *n,
        };
        check_dims(n, lo.len())?;
        check_dims(n, hi.len())?;
        if lo.iter().zip(&hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a <= b)) {
            return Err(Error::Rejected("real universe must satisfy lo <= hi with finite bounds".into()));
        }
        Ok(ContinuousFunction { repr, lo, hi })
    }

    /// Universe taken from a lattice box.
    pub fn on_box(repr: ContinuousRepr, bx: &LatticeBox) -> Result<Self> {
        let lo = bx.lo().iter().map(|&v| v as f64).collect();
        let hi = bx.hi().iter().map(|&v| v as f64).collect();
        ContinuousFunction::new(repr, lo, hi)
    }

    /// The hull indicator on `[0, 1]^n`.
    pub fn simplex_hull(n: usize) -> Self {
        ContinuousFunction { repr: ContinuousRepr::SimplexHull { n }, lo: alloc::vec![0.0; n], hi: alloc::vec![1.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *a <= *v && *v <= *b)
    }

    pub fn eval(&self, x: &[f64]) -> ExtendedValue {
        if x.len() != self.dim() || !self.contains(x) {
            return ExtendedValue::INFINITY;
        }
        match &self.repr {
            ContinuousRepr::Quadratic(q) => ExtendedValue::finite(q.eval_real(x)),
            ContinuousRepr::TwoSeparable(s) => ExtendedValue::finite(s.eval(x)),
            ContinuousRepr::SimplexHull { .. } => {
                let sum: f64 = x.iter().sum();
                if x.iter().all(|&v| v >= -HULL_TOL) && (sum - 1.0).abs() <= HULL_TOL {
                    ExtendedValue::ZERO
                } else {
                    ExtendedValue::INFINITY
                }
            }
        }
    }
}

/// `x ↦ F(x / α)` on the integer box `bx`.
pub fn fractional_restriction(f: &ContinuousFunction, alpha: u64, bx: &LatticeBox) -> Result<LatticeFunction> {
    check_dims(f.dim(), bx.dim())?;
    if alpha == 0 {
        return Err(Error::InvalidArgument("scale must be a positive integer".into()));
    }
    let g = f.clone();
    let a = alpha as f64;
    Ok(LatticeFunction::from_fn(bx.clone(), "fractional_restriction", move |x| {
        let z: Vec<f64> = x.iter().map(|&v| v as f64 / a).collect();
        g.eval(&z)
    }))
}

/// Outcome of a bounded-α check of real DDM-convexity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledVerdict {
    /// Verdict of the first failing scale, or of the last one checked.
    pub verdict: Verdict,
    /// Scales `1..=evidence_up_to` all passed.
    pub evidence_up_to: u64,
    pub failing_alpha: Option<u64>,
}

/// Checks DDM-convexity of `x ↦ F(x/α)` on `α·bx` for `α = 1..=alpha_max`.
/// A pass is evidence for the stated range of scales only.
pub fn verify_r_ddm(f: &ContinuousFunction, alpha_max: u64, bx: &LatticeBox) -> Result<ScaledVerdict> {
    verify_r_ddm_with(&Classifier::default(), f, alpha_max, bx)
}

pub fn verify_r_ddm_with(
    c: &Classifier,
    f: &ContinuousFunction,
    alpha_max: u64,
    bx: &LatticeBox,
) -> Result<ScaledVerdict> {
    if alpha_max == 0 {
        return Err(Error::InvalidArgument("alpha_max must be positive".into()));
    }
    let mut last = Verdict::holds(0);
    for alpha in 1..=alpha_max {
        let a = alpha as i64;
        let scaled = LatticeBox::new(bx.lo().scaled(a), bx.hi().scaled(a))?;
        let g = fractional_restriction(f, alpha, &scaled)?;
        last = c.is_ddm_convex(&g, &scaled)?;
        if !last.holds {
            return Ok(ScaledVerdict { verdict: last, evidence_up_to: alpha - 1, failing_alpha: Some(alpha) });
        }
    }
    Ok(ScaledVerdict { verdict: last, evidence_up_to: alpha_max, failing_alpha: None })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousMinimum {
    pub point: Vec<f64>,
    pub value: f64,
    /// True only for strictly convex quadratics solved in closed form.
    pub unique: bool,
}

/// Solves `2 Q x = −c` by Gaussian elimination without pivoting, which for
/// symmetric `Q` succeeds with positive pivots iff `Q` is positive definite.
fn solve_positive_definite(q: &[Vec<f64>], c: &[f64]) -> Option<Vec<f64>> {
    let n = q.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = q[i].iter().map(|v| 2.0 * v).collect();
            row.push(-c[i]);
            row
        })
        .collect();
    let scale = q.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    for k in 0..n {
        if m[k][k] <= 1e-12 * scale {
            return None;
        }
        for r in k + 1..n {
            let t = m[r][k] / m[k][k];
            for j in k..=n {
                m[r][j] -= t * m[k][j];
            }
        }
    }
    let mut x = alloc::vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
        x[k] = (m[k][n] - s) / m[k][k];
    }
    Some(x)
}

/// Minimizes a convex function that is finite on the box `[lo, hi]` by exact
/// line searches along one representative of each `±d`, `d ∈ {−1,0,1}^n`.
/// For 2-separable convex functions these directions contain the rays of
/// every local linearity cone, so a point admitting no descent along them is
/// optimal.
fn direction_search<F: Fn(&[f64]) -> f64>(eval: F, lo: &[f64], hi: &[f64], start: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = lo.len();
    let dirs: Vec<LatticePoint> = unit_directions(n)
        .into_iter()
        .filter(|d| d.iter().find(|&&v| v != 0) == Some(&1))
        .collect();
    let mut x = start.to_vec();
    let mut fx = eval(&x);
    let mut y = alloc::vec![0.0; n];
    for _ in 0..MAX_SWEEPS {
        let before = fx;
        let mut moved = 0.0f64;
        for d in &dirs {
            let (mut tmin, mut tmax) = (f64::NEG_INFINITY, f64::INFINITY);
            for i in 0..n {
                if d[i] != 0 {
                    let s = d[i] as f64;
                    let (a, b) = ((lo[i] - x[i]) / s, (hi[i] - x[i]) / s);
                    tmin = tmin.max(a.min(b));
                    tmax = tmax.min(a.max(b));
                }
            }
            let tmin = tmin.min(0.0);
            let tmax = tmax.max(0.0);
            let phi = |t: f64, y: &mut [f64]| {
                for i in 0..n {
                    y[i] = (x[i] + t * d[i] as f64).clamp(lo[i], hi[i]);
                }
                eval(y)
            };
            let t = golden_section(|t| phi(t, &mut y), tmin, tmax);
            let ft = phi(t, &mut y);
            if ft < fx {
                x.copy_from_slice(&y);
                fx = ft;
                moved = moved.max(t.abs());
            }
        }
        if before - fx <= 1e-14 * (1.0 + fx.abs()) && moved <= 1e-10 {
            return Ok((x, fx));
        }
    }
    Err(Error::Diagnostic(alloc::format!("direction search did not converge in {MAX_SWEEPS} sweeps")))
}

fn golden_section<F: FnMut(f64) -> f64>(mut phi: F, mut a: f64, mut b: f64) -> f64 {
    const R: f64 = 0.618_033_988_749_894_9;
    let tol = 1e-12 * (1.0 + a.abs().max(b.abs()));
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = phi(d);
        }
    }
    let mid = 0.5 * (a + b);
    // Endpoints matter when the minimum sits on the interval boundary.
    [a, mid, b].into_iter().min_by(|&s, &t| phi(s).total_cmp(&phi(t))).unwrap_or(mid)
}

/// A minimizer of `F` over its universe.
///
/// Strictly convex quadratics (including 2-separable functions whose pieces
/// are all polynomial) are solved in closed form and flagged unique when the
/// solution lies in the universe; everything else goes through direction
/// search and is flagged non-unique.
pub fn continuous_argmin(f: &ContinuousFunction) -> Result<ContinuousMinimum> {
    let n = f.dim();
    let closed_form = match &f.repr {
        ContinuousRepr::Quadratic(q) => match solve_positive_definite(&q.matrix(), q.c()) {
            Some(x) => Some(x),
            None => return Err(Error::Rejected("Q is singular or not positive definite".into())),
        },
        ContinuousRepr::TwoSeparable(s) => s.as_quadratic().and_then(|(q, c, _)| solve_positive_definite(&q, &c)),
        ContinuousRepr::SimplexHull { n } => {
            let point = alloc::vec![1.0 / *n as f64; *n];
            return Ok(ContinuousMinimum { point, value: 0.0, unique: false });
        }
    };
    if let Some(x) = closed_form {
        if f.contains(&x) {
            let value = f.eval(&x).raw();
            return Ok(ContinuousMinimum { point: x, value, unique: true });
        }
    }
    let start: Vec<f64> = (0..n).map(|i| 0.5 * (f.lo[i] + f.hi[i])).collect();
    let (point, value) = direction_search(|x| f.eval(x).raw(), &f.lo, &f.hi, &start)?;
    Ok(ContinuousMinimum { point, value, unique: false })
}

/// Minimum of `F` over `universe ∩ {z : ‖z − center‖∞ ≤ radius}`.
fn local_minimum(f: &ContinuousFunction, center: &[f64], radius: f64) -> Result<f64> {
    let lo: Vec<f64> = center.iter().zip(&f.lo).map(|(c, l)| (c - radius).max(*l)).collect();
    let hi: Vec<f64> = center.iter().zip(&f.hi).map(|(c, h)| (c + radius).min(*h)).collect();
    let start: Vec<f64> = center.iter().zip(lo.iter().zip(&hi)).map(|(c, (l, h))| c.clamp(*l, *h)).collect();
    Ok(direction_search(|x| f.eval(x).raw(), &lo, &hi, &start)?.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProximityStatus {
    Holds,
    Violated,
    /// The continuous side could not be certified precisely enough.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousProximity {
    pub status: ProximityStatus,
    pub continuous: ContinuousMinimum,
    pub discrete_argmin: Vec<LatticePoint>,
    /// `max_{x*} ‖x* − x̄‖∞` over the discrete minimizers.
    pub max_discrete_distance: f64,
    /// `min_{x*} ‖x* − x̄‖∞`.
    pub min_discrete_distance: f64,
}

/// Checks that discrete and continuous minimizers lie within `ℓ∞`-distance
/// `n` of each other, for the restriction of `F` to the lattice points of
/// `bx`, which must cover `x̄ ± (n + 1)`.
pub fn verify_continuous_proximity(f: &ContinuousFunction, bx: &LatticeBox) -> Result<ContinuousProximity> {
    check_dims(f.dim(), bx.dim())?;
    if matches!(f.repr, ContinuousRepr::SimplexHull { .. }) {
        return Err(Error::InvalidArgument("the hull indicator has no isolated continuous minimizer".into()));
    }
    let n = f.dim();
    let bound = n as f64;
    let cont = continuous_argmin(f)?;
    let covered = (0..n).all(|i| {
        let lo = FloatCore::ceil((cont.point[i] - bound - 1.0).max(f.lo[i]));
        let hi = FloatCore::floor((cont.point[i] + bound + 1.0).min(f.hi[i]));
        bx.lo()[i] as f64 <= lo && hi <= bx.hi()[i] as f64
    });
    if !covered {
        return Err(Error::InvalidArgument(alloc::format!(
            "box {bx:?} does not cover the continuous minimizer {:?} with margin n + 1",
            cont.point
        )));
    }
    let g = fractional_restriction(f, 1, bx)?;
    let (_, argmin) = brute_force_argmin(&g, bx)?;
    if argmin.is_empty() {
        return Err(Error::InvalidArgument("the restriction has no finite value on the box".into()));
    }
    let dist = |p: &LatticePoint| p.iter().zip(&cont.point).map(|(&a, b)| (a as f64 - b).abs()).fold(0.0, f64::max);
    let dists: Vec<f64> = argmin.iter().map(dist).collect();
    let max_d = dists.iter().copied().fold(0.0, f64::max);
    let min_d = dists.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = 1e-7;
    let status = if cont.unique {
        // With a unique x̄ every discrete minimizer must be within n of it,
        // and x̄ must be within n of some discrete minimizer.
        if max_d <= bound + slack {
            ProximityStatus::Holds
        } else {
            ProximityStatus::Violated
        }
    } else {
        // Some continuous minimizer near each x*: the local minimum over the
        // n-ball around x* must match the global one.
        let tol = 1e-7 * (1.0 + cont.value.abs());
        let mut status = ProximityStatus::Holds;
        for x in &argmin {
            let center: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            if local_minimum(f, &center, bound)? > cont.value + tol {
                status = ProximityStatus::Inconclusive;
            }
        }
        if min_d > bound + slack {
            status = ProximityStatus::Inconclusive;
        }
        status
    };
    Ok(ContinuousProximity {
        status,
        continuous: cont,
        discrete_argmin: argmin,
        max_discrete_distance: max_d,
        min_discrete_distance: min_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_ddm_convex;
    use crate::functions::{transform, Transform};
    use alloc::vec;

    fn quad(q: &[Vec<f64>], c: Vec<f64>, lo: i64, hi: i64) -> ContinuousFunction {
        let n = q.len();
        ContinuousFunction::on_box(
            ContinuousRepr::Quadratic(QuadraticSpec::new(q, c).unwrap()),
            &LatticeBox::cube(n, lo, hi).unwrap(),
        )
        .unwrap()
    }

    fn sep(pieces: Vec<RealPiece>, lo: i64, hi: i64) -> ContinuousFunction {
        let n = pieces.len();
        let s = RealTwoSeparable::new(n, pieces, BTreeMap::new(), BTreeMap::new()).unwrap();
        ContinuousFunction::on_box(ContinuousRepr::TwoSeparable(s), &LatticeBox::cube(n, lo, hi).unwrap()).unwrap()
    }

    fn sq(center: f64) -> RealPiece {
        RealPiece::Square { center, weight: 1.0 }
    }

    #[test]
    fn restriction_examples() {
        let f = sep(vec![sq(0.0)], -10, 10);
        let g = fractional_restriction(&f, 2, &LatticeBox::cube(1, -20, 20).unwrap()).unwrap();
        assert_eq!(g.value(&[3]).get(), Some(2.25));
        let h = fractional_restriction(&f, 1, &LatticeBox::cube(1, -10, 10).unwrap()).unwrap();
        assert_eq!(h.value(&[3]).get(), Some(9.0));

        let hull = ContinuousFunction::simplex_hull(3);
        let t = fractional_restriction(&hull, 2, &LatticeBox::cube(3, 0, 2).unwrap()).unwrap();
        let dom = t.effective_domain();
        let expected: Vec<LatticePoint> = [[0, 0, 2], [0, 1, 1], [0, 2, 0], [1, 0, 1], [1, 1, 0], [2, 0, 0]]
            .iter()
            .map(|p| LatticePoint::from(*p))
            .collect();
        assert_eq!(dom, expected);
    }

    #[test]
    fn restriction_commutes_with_scaling() {
        let f = sep(vec![RealPiece::Abs { center: 0.3, weight: 1.5 }, sq(-0.7)], -4, 4);
        let a = 3;
        let big = fractional_restriction(&f, a, &LatticeBox::cube(2, -12, 12).unwrap()).unwrap();
        let back = transform(&big, &Transform::Scale(a as i64)).unwrap();
        let plain = fractional_restriction(&f, 1, &LatticeBox::cube(2, -4, 4).unwrap()).unwrap();
        for x in LatticeBox::cube(2, -4, 4).unwrap().points() {
            assert_eq!(back.value(&x), plain.value(&x), "at {x:?}");
        }
    }

    #[test]
    fn r_ddm_examples() {
        let bx = LatticeBox::cube(2, -2, 2).unwrap();
        let mut phi = BTreeMap::new();
        phi.insert((0, 1), RealPiece::Abs { center: 0.5, weight: 1.0 });
        let s = RealTwoSeparable::new(2, vec![sq(0.25), RealPiece::Abs { center: -0.4, weight: 2.0 }], phi, BTreeMap::new())
            .unwrap();
        let f = ContinuousFunction::on_box(ContinuousRepr::TwoSeparable(s), &bx).unwrap();
        let v = verify_r_ddm(&f, 3, &bx).unwrap();
        assert!(v.verdict.holds);
        assert_eq!(v.evidence_up_to, 3);

        let q = quad(&[vec![5.0, 2.0], vec![2.0, 1.0]], vec![0.0, 0.0], -2, 2);
        let v = verify_r_ddm(&q, 1, &bx).unwrap();
        assert_eq!(v.failing_alpha, Some(1));
        assert_eq!(v.evidence_up_to, 0);

        let hull = ContinuousFunction::simplex_hull(3);
        let v = verify_r_ddm(&hull, 2, &LatticeBox::cube(3, 0, 1).unwrap()).unwrap();
        assert_eq!(v.failing_alpha, Some(2));
        let w = v.verdict.witness.unwrap();
        assert_eq!((w.x, w.y), (LatticePoint::from([2, 0, 0]), LatticePoint::from([0, 1, 1])));
    }

    #[test]
    fn argmin_examples() {
        let f = quad(&[vec![2.0, 0.0], vec![0.0, 2.0]], vec![-2.0, -4.0], -5, 5);
        let m = continuous_argmin(&f).unwrap();
        assert!(m.unique);
        assert!((m.point[0] - 0.5).abs() < 1e-12 && (m.point[1] - 1.0).abs() < 1e-12);

        let g = sep(vec![sq(0.4), sq(0.4)], -3, 3);
        let m = continuous_argmin(&g).unwrap();
        assert!(m.unique);
        assert!(m.point.iter().all(|v| (v - 0.4).abs() < 1e-12));

        // (x1 − 0.3)² + (x2 − 0.7)² + (x1 + x2 − 1)²: normal equations
        // 2x1 + x2 = 1.3, x1 + 2x2 = 1.7.
        let mut psi = BTreeMap::new();
        psi.insert((0, 1), RealPiece::Square { center: 1.0, weight: 1.0 });
        let s = RealTwoSeparable::new(2, vec![sq(0.3), sq(0.7)], BTreeMap::new(), psi).unwrap();
        let h = ContinuousFunction::on_box(ContinuousRepr::TwoSeparable(s), &LatticeBox::cube(2, -3, 3).unwrap())
            .unwrap();
        let m = continuous_argmin(&h).unwrap();
        assert!((m.point[0] - 0.3).abs() < 1e-12 && (m.point[1] - 0.7).abs() < 1e-12);

        let bad = quad(&[vec![1.0, 1.0], vec![1.0, 1.0]], vec![0.0, 0.0], -3, 3);
        assert!(matches!(continuous_argmin(&bad), Err(Error::Rejected(_))));
    }

    #[test]
    fn nonsmooth_argmin_by_direction_search() {
        // |x1 − 0.3| + |x2 + 1.2| + 2|x1 − x2 − 0.5|: minimizer (0.3, −1.2)
        // costs 2·1.0; moving along the diagonal lowers nothing else, so the
        // optimum value is found by balancing the pieces.
        let mut phi = BTreeMap::new();
        phi.insert((0, 1), RealPiece::Abs { center: 0.5, weight: 2.0 });
        let s = RealTwoSeparable::new(
            2,
            vec![RealPiece::Abs { center: 0.3, weight: 1.0 }, RealPiece::Abs { center: -1.2, weight: 1.0 }],
            phi,
            BTreeMap::new(),
        )
        .unwrap();
        let f = ContinuousFunction::on_box(ContinuousRepr::TwoSeparable(s), &LatticeBox::cube(2, -4, 4).unwrap())
            .unwrap();
        let m = continuous_argmin(&f).unwrap();
        assert!(!m.unique);
        // Grid oracle for the optimum value.
        let mut best = f64::INFINITY;
        for i in -400..=400 {
            for j in -400..=400 {
                best = best.min(f.eval(&[i as f64 / 100.0, j as f64 / 100.0]).raw());
            }
        }
        assert!(m.value <= best + 1e-9, "{} vs {}", m.value, best);
    }

    #[test]
    fn proximity_examples() {
        let f = sep(vec![sq(0.4), sq(0.4)], -4, 4);
        let r = verify_continuous_proximity(&f, &LatticeBox::cube(2, -4, 4).unwrap()).unwrap();
        assert_eq!(r.status, ProximityStatus::Holds);
        assert_eq!(r.discrete_argmin, vec![LatticePoint::from([0, 0])]);
        assert!((r.max_discrete_distance - 0.4).abs() < 1e-12);

        let g = sep(vec![sq(0.5)], -3, 3);
        let r = verify_continuous_proximity(&g, &LatticeBox::cube(1, -3, 3).unwrap()).unwrap();
        assert_eq!(r.discrete_argmin, vec![LatticePoint::from([0]), LatticePoint::from([1])]);
        assert_eq!(r.status, ProximityStatus::Holds);

        let q = quad(&[vec![2.0, -1.0], vec![-1.0, 2.0]], vec![-1.0, -1.0], -4, 4);
        let r = verify_continuous_proximity(&q, &LatticeBox::cube(2, -4, 4).unwrap()).unwrap();
        assert!((r.continuous.point[0] - 0.5).abs() < 1e-12);
        assert_eq!(r.status, ProximityStatus::Holds);
        assert!(verify_continuous_proximity(&q, &LatticeBox::cube(2, 0, 1).unwrap()).is_err());
    }

    #[test]
    fn separable_restrictions_are_ddm() {
        let f = sep(vec![RealPiece::Abs { center: 0.35, weight: 1.0 }, sq(-0.6)], -2, 2);
        for a in 1..=4 {
            let b = LatticeBox::cube(2, -2 * a, 2 * a).unwrap();
            let g = fractional_restriction(&f, a as u64, &b).unwrap();
            assert!(is_ddm_convex(&g, &b).unwrap().holds, "alpha {a}");
        }
    }
}
