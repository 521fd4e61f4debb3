//! The equivalent forms of DDM-convexity and of L♮-convexity, each checked
//! independently so that agreement between them is a meaningful test.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::pairs::{midpoints, sorted_desc, Rounding};
use super::{BoxTable, Classifier, Distance, Outcome, Verdict, Witness, WitnessDetail, MAX_PARALLELOGRAM_LEVELS};
use crate::error::{Error, Result};
use crate::functions::LatticeFunction;
use crate::lattice::{LatticeBox, LatticePoint};

/// `out = Σ_{k ∈ J} (1_{A_k} − 1_{B_k})` for the level sets of `y − x`, where
/// bit `k − 1` of `mask` selects level `k`.
#[inline]
fn level_sum(x: &[i64], y: &[i64], mask: u32, out: &mut [i64]) {
    for i in 0..x.len() {
        let diff = y[i] - x[i];
        let depth = diff.unsigned_abs().min(32) as u32;
        let below = if depth == 32 { u32::MAX } else { (1u32 << depth) - 1 };
        let count = i64::from((mask & below).count_ones());
        out[i] = diff.signum() * count;
    }
}

fn levels_of(mask: u32) -> Vec<u64> {
    (0u32..32).filter(|b| mask >> b & 1 == 1).map(|b| u64::from(b) + 1).collect()
}

impl Classifier {
    /// Scans pairs with `1 ≤ m ≤ max_levels` and tests
    /// `f(x) + f(y) ≥ f(x + d) + f(y − d)` for the level-set subsets chosen
    /// by `masks(m)`.
    fn level_inequality_on<M>(&self, t: &BoxTable, max_levels: Option<u64>, masks: M) -> Result<Verdict>
    where
        M: Fn(u64) -> Vec<u32>,
    {
        let n = t.dim();
        let (mut d, mut p, mut q) = (alloc::vec![0; n], alloc::vec![0; n], alloc::vec![0; n]);
        t.scan(Distance::Any, |x, y, vx, vy| {
            let m = x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0);
            match max_levels {
                Some(cap) if m > cap => return Ok(Outcome::Pass),
                None if m > MAX_PARALLELOGRAM_LEVELS => {
                    return Err(Error::ResourceLimit {
                        requested: 1u128 << m.min(127),
                        limit: 1u128 << MAX_PARALLELOGRAM_LEVELS,
                    })
                }
                _ => {}
            }
            for mask in masks(m) {
                level_sum(x, y, mask, &mut d);
                for i in 0..n {
                    p[i] = x[i] + d[i];
                    q[i] = y[i] - d[i];
                }
                if !self.ok(vx + vy, t.get(&p) + t.get(&q)) {
                    return Ok(Outcome::Fail(Some(WitnessDetail::Levels(levels_of(mask)))));
                }
            }
            Ok(Outcome::Pass)
        })
    }

    /// Domain closed under directed midpoints, and the inequality at
    /// distance exactly 2.
    fn domain_and_distance_two_on(&self, t: &BoxTable) -> Result<Verdict> {
        let n = t.dim();
        let (mut p, mut q) = (alloc::vec![0; n], alloc::vec![0; n]);
        t.scan(Distance::Any, |x, y, vx, vy| {
            midpoints(Rounding::Directed, x, y, &mut p, &mut q);
            let (fp, fq) = (t.get(&p), t.get(&q));
            for (v, pt) in [(fp, &p), (fq, &q)] {
                if v.is_infinite() {
                    return Ok(Outcome::Fail(Some(WitnessDetail::Outside(LatticePoint::from(&pt[..])))));
                }
            }
            let m = x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0);
            Ok(if m != 2 || self.ok(vx + vy, fp + fq) { Outcome::Pass } else { Outcome::Fail(None) })
        })
    }

    pub(crate) fn ddm_variant_on(&self, t: &BoxTable, variant: u8) -> Result<Verdict> {
        match variant {
            1 => self.midpoint_on(t, Distance::Any, Rounding::Directed),
            2 => self.domain_and_distance_two_on(t),
            3 => self.level_inequality_on(t, None, |m| (1..1u32 << m).collect()),
            4 => self.level_inequality_on(t, None, |m| alloc::vec![1u32 << (m - 1)]),
            5 => self.level_inequality_on(t, None, |m| (1..=m).map(|a| (1u32 << a) - 1).collect()),
            _ => Err(Error::InvalidArgument(alloc::format!("characterization variant {variant} is not in 1..=5"))),
        }
    }

    /// One of the five equivalent forms of DDM-convexity:
    /// 1. the midpoint inequality for all pairs;
    /// 2. dom f closed under directed midpoints, inequality at distance 2;
    /// 3. parallelogram inequality for every subset of level sets;
    /// 4. the step along the deepest level set only;
    /// 5. prefix sums of level sets.
    pub fn check_ddm_characterization(&self, f: &LatticeFunction, bx: &LatticeBox, variant: u8) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.ddm_variant_on(&t, variant)
    }

    /// Parallelogram inequality for every subset of levels, on the pairs with
    /// `‖x − y‖∞ ≤ max_levels`; farther pairs are skipped.
    pub fn parallelogram_inequality(&self, f: &LatticeFunction, bx: &LatticeBox, max_levels: u64) -> Result<Verdict> {
        if max_levels > MAX_PARALLELOGRAM_LEVELS {
            return Err(Error::ResourceLimit {
                requested: 1u128 << max_levels.min(127),
                limit: 1u128 << MAX_PARALLELOGRAM_LEVELS,
            });
        }
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.level_inequality_on(&t, Some(max_levels), |m| (1..1u32 << m).collect())
    }

    pub(crate) fn lnat_variant_on(&self, t: &BoxTable, variant: u8) -> Result<Verdict> {
        match variant {
            1 => self.translation_submodular_on(t),
            2 => self.midpoint_on(t, Distance::Any, Rounding::Plain),
            3 => {
                let ic = self.integrally_convex_on(t)?;
                if !ic.holds {
                    return Ok(ic);
                }
                let mut sub = self.submodular_on(t)?;
                sub.pairs_checked += ic.pairs_checked;
                Ok(sub)
            }
            4 => self.argmax_step_on(t),
            _ => Err(Error::InvalidArgument(alloc::format!("characterization variant {variant} is not in 1..=4"))),
        }
    }

    /// One of the four equivalent forms of L♮-convexity:
    /// 1. translation-submodularity; 2. plain midpoint convexity;
    /// 3. integral convexity and submodularity; 4. the argmax step.
    pub fn check_lnat_characterization(&self, f: &LatticeFunction, bx: &LatticeBox, variant: u8) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.lnat_variant_on(&t, variant)
    }
}

pub fn check_ddm_characterization(f: &LatticeFunction, bx: &LatticeBox, variant: u8) -> Result<Verdict> {
    Classifier::default().check_ddm_characterization(f, bx, variant)
}

/// Set form of the parallelogram property: `x + d` and `y − d` stay in the set
/// for every pair and every subset of level sets.
pub fn parallelogram_set_closure(points: &[LatticePoint]) -> Result<Verdict> {
    let pts = sorted_desc(points)?;
    let set: BTreeSet<&LatticePoint> = pts.iter().collect();
    let n = pts.first().map_or(0, |p| p.dim());
    let mut d = alloc::vec![0; n];
    let mut checked = 0;
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let (x, y) = (&pts[a], &pts[b]);
            let m = x.iter().zip(y.iter()).map(|(u, v)| u.abs_diff(*v)).max().unwrap_or(0);
            if m > MAX_PARALLELOGRAM_LEVELS {
                return Err(Error::ResourceLimit {
                    requested: 1u128 << m.min(127),
                    limit: 1u128 << MAX_PARALLELOGRAM_LEVELS,
                });
            }
            checked += 1;
            for mask in 1..1u32 << m {
                level_sum(x, y, mask, &mut d);
                let p: LatticePoint = x.iter().zip(&d).map(|(u, v)| u + v).collect::<Vec<_>>().into();
                let q: LatticePoint = y.iter().zip(&d).map(|(u, v)| u - v).collect::<Vec<_>>().into();
                for out in [p, q] {
                    if !set.contains(&out) {
                        let w = Witness {
                            x: x.clone(),
                            y: y.clone(),
                            detail: Some(WitnessDetail::Outside(out)),
                        };
                        return Ok(Verdict::violated(w, checked));
                    }
                }
            }
        }
    }
    Ok(Verdict::holds(checked))
}
