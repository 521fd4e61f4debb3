use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{BoxTable, Classifier, Distance, Outcome, Verdict, Witness, WitnessDetail};
use crate::error::{check_dims, Result};
use crate::functions::LatticeFunction;
use crate::lattice::{ceil_half, directed_midpoint_coord, floor_half, LatticeBox, LatticePoint};
use crate::value::{inequality_holds, ExtendedValue};

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rounding {
    /// `(μ(x, y), μ(y, x))`.
    Directed,
    /// `(⌈(x+y)/2⌉, ⌊(x+y)/2⌋)`.
    Plain,
}

#[inline]
pub(crate) fn midpoints(r: Rounding, x: &[i64], y: &[i64], p: &mut [i64], q: &mut [i64]) {
    for i in 0..x.len() {
        let s = x[i] + y[i];
        match r {
            Rounding::Directed => {
                p[i] = directed_midpoint_coord(x[i], y[i]);
                q[i] = s - p[i];
            }
            Rounding::Plain => {
                p[i] = ceil_half(s);
                q[i] = floor_half(s);
            }
        }
    }
}

impl Classifier {
    #[inline]
    pub(crate) fn ok(&self, lhs: ExtendedValue, rhs: ExtendedValue) -> bool {
        inequality_holds(lhs, rhs, self.epsilon)
    }

    pub(crate) fn midpoint_on(&self, t: &BoxTable, dist: Distance, r: Rounding) -> Result<Verdict> {
        let n = t.dim();
        let (mut p, mut q) = (alloc::vec![0; n], alloc::vec![0; n]);
        t.scan(dist, |x, y, vx, vy| {
            midpoints(r, x, y, &mut p, &mut q);
            Ok(if self.ok(vx + vy, t.get(&p) + t.get(&q)) { Outcome::Pass } else { Outcome::Fail(None) })
        })
    }

    /// Dom closure under plain midpoints at distance ≥ 2, plus the midpoint
    /// inequality at distance exactly 2.
    pub(crate) fn local_dmc_on(&self, t: &BoxTable) -> Result<Verdict> {
        let n = t.dim();
        let (mut p, mut q) = (alloc::vec![0; n], alloc::vec![0; n]);
        t.scan(Distance::AtLeast(2), |x, y, vx, vy| {
            midpoints(Rounding::Plain, x, y, &mut p, &mut q);
            let (fp, fq) = (t.get(&p), t.get(&q));
            if fp.is_infinite() {
                return Ok(Outcome::Fail(Some(WitnessDetail::Outside(LatticePoint::from(&p[..])))));
            }
            if fq.is_infinite() {
                return Ok(Outcome::Fail(Some(WitnessDetail::Outside(LatticePoint::from(&q[..])))));
            }
            let d = x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0);
            Ok(if d != 2 || self.ok(vx + vy, fp + fq) { Outcome::Pass } else { Outcome::Fail(None) })
        })
    }

    pub(crate) fn submodular_on(&self, t: &BoxTable) -> Result<Verdict> {
        let n = t.dim();
        let (mut j, mut m) = (alloc::vec![0; n], alloc::vec![0; n]);
        t.scan(Distance::Any, |x, y, vx, vy| {
            for i in 0..n {
                j[i] = x[i].max(y[i]);
                m[i] = x[i].min(y[i]);
            }
            Ok(if self.ok(vx + vy, t.get(&j) + t.get(&m)) { Outcome::Pass } else { Outcome::Fail(None) })
        })
    }

    /// `f(x) + f(y) ≥ f((x − α1) ∨ y) + f(x ∧ (y + α1))` for ordered pairs and
    /// `α = 0..=diameter`. A witness `(x, y)` is reported in the failing order.
    pub(crate) fn translation_submodular_on(&self, t: &BoxTable) -> Result<Verdict> {
        let n = t.dim();
        let diam = t.bx().diameter() as i64;
        let (mut a, mut b) = (alloc::vec![0; n], alloc::vec![0; n]);
        let mut failure: Option<(bool, u64)> = None;
        let mut verdict = t.scan(Distance::Any, |x, y, vx, vy| {
            for (swap, (u, v)) in [(false, (x, y)), (true, (y, x))] {
                for alpha in 0..=diam {
                    for i in 0..n {
                        a[i] = (u[i] - alpha).max(v[i]);
                        b[i] = u[i].min(v[i] + alpha);
                    }
                    if !self.ok(vx + vy, t.get(&a) + t.get(&b)) {
                        failure = Some((swap, alpha as u64));
                        return Ok(Outcome::Fail(Some(WitnessDetail::Shift(alpha as u64))));
                    }
                }
            }
            Ok(Outcome::Pass)
        })?;
        if let (Some((true, _)), Some(w)) = (failure, verdict.witness.as_mut()) {
            core::mem::swap(&mut w.x, &mut w.y);
        }
        Ok(verdict)
    }

    /// For ordered pairs with `x ≱ y` and `A = argmax_i (y_i − x_i)`:
    /// `f(x) + f(y) ≥ f(x + 1_A) + f(y − 1_A)`.
    pub(crate) fn argmax_step_on(&self, t: &BoxTable) -> Result<Verdict> {
        let n = t.dim();
        let (mut a, mut b) = (alloc::vec![0; n], alloc::vec![0; n]);
        let mut swapped = false;
        let mut verdict = t.scan(Distance::Any, |x, y, vx, vy| {
            for (swap, (u, v)) in [(false, (x, y)), (true, (y, x))] {
                let top = (0..n).map(|i| v[i] - u[i]).max().unwrap_or(0);
                if top <= 0 {
                    continue;
                }
                for i in 0..n {
                    let step = i64::from(v[i] - u[i] == top);
                    a[i] = u[i] + step;
                    b[i] = v[i] - step;
                }
                if !self.ok(vx + vy, t.get(&a) + t.get(&b)) {
                    swapped = swap;
                    return Ok(Outcome::Fail(None));
                }
            }
            Ok(Outcome::Pass)
        })?;
        if let (true, Some(w)) = (swapped, verdict.witness.as_mut()) {
            core::mem::swap(&mut w.x, &mut w.y);
        }
        Ok(verdict)
    }

    /// DDM-convexity: `f(x) + f(y) ≥ f(μ(x,y)) + f(μ(y,x))` on all pairs.
    pub fn is_ddm_convex(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.midpoint_on(&t, Distance::Any, Rounding::Directed)
    }

    /// Discrete midpoint convexity with plain rounding on all pairs.
    pub fn is_lnat_convex(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.midpoint_on(&t, Distance::Any, Rounding::Plain)
    }

    /// `(global, local)` discrete midpoint convexity.
    pub fn classify_dmc(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<(Verdict, Verdict)> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        Ok((self.midpoint_on(&t, Distance::AtLeast(2), Rounding::Plain)?, self.local_dmc_on(&t)?))
    }

    pub fn is_submodular(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.submodular_on(&t)
    }

    pub fn is_translation_submodular(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.translation_submodular_on(&t)
    }

    /// The argmax-step characterization of L♮-convexity.
    pub fn satisfies_argmax_step(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.argmax_step_on(&t)
    }
}

pub fn is_ddm_convex(f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
    Classifier::default().is_ddm_convex(f, bx)
}

pub fn is_lnat_convex(f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
    Classifier::default().is_lnat_convex(f, bx)
}

pub fn classify_dmc(f: &LatticeFunction, bx: &LatticeBox) -> Result<(Verdict, Verdict)> {
    Classifier::default().classify_dmc(f, bx)
}

pub fn is_submodular(f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
    Classifier::default().is_submodular(f, bx)
}

/// Distinct points sorted in descending lexicographic order.
pub(crate) fn sorted_desc(points: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    if let Some(first) = points.first() {
        for p in points {
            check_dims(first.dim(), p.dim())?;
        }
    }
    let set: BTreeSet<LatticePoint> = points.iter().cloned().collect();
    Ok(set.into_iter().rev().collect())
}

fn set_closure(points: &[LatticePoint], min_dist: u64, r: Rounding) -> Result<Verdict> {
    let pts = sorted_desc(points)?;
    let set: BTreeSet<&LatticePoint> = pts.iter().collect();
    let n = pts.first().map_or(0, |p| p.dim());
    let (mut p, mut q) = (alloc::vec![0; n], alloc::vec![0; n]);
    let mut checked = 0;
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let (x, y) = (&pts[a], &pts[b]);
            let d = x.iter().zip(y.iter()).map(|(u, v)| u.abs_diff(*v)).max().unwrap_or(0);
            if d < min_dist {
                continue;
            }
            checked += 1;
            midpoints(r, x, y, &mut p, &mut q);
            for m in [&p, &q] {
                let m = LatticePoint::from(&m[..]);
                if !set.contains(&m) {
                    let w = Witness { x: x.clone(), y: y.clone(), detail: Some(WitnessDetail::Outside(m)) };
                    return Ok(Verdict::violated(w, checked));
                }
            }
        }
    }
    Ok(Verdict::holds(checked))
}

/// Closure of a finite set under `(μ(x,y), μ(y,x))` for all pairs.
pub fn is_ddm_set(points: &[LatticePoint]) -> Result<Verdict> {
    set_closure(points, 1, Rounding::Directed)
}

/// Closure of a finite set under plain rounded midpoints for pairs at
/// distance ≥ 2.
pub fn is_dmc_set(points: &[LatticePoint]) -> Result<Verdict> {
    set_closure(points, 2, Rounding::Plain)
}
