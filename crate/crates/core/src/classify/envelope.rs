//! The local convex envelope as a small linear program, and integral
//! convexity through the weak midpoint inequality.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::{Ratio, Rational64};
use num_traits::{One, Signed, Zero};

use super::{BoxTable, Classifier, Distance, Outcome, Verdict};
use crate::error::{Error, Result};
use crate::functions::LatticeFunction;
use crate::lattice::LatticeBox;
use crate::value::ExtendedValue;

type Q = Ratio<i128>;

/// At most `2^MAX_FRACTIONAL` neighborhood points enter one LP.
const MAX_FRACTIONAL: usize = 16;
const MAX_PIVOTS: usize = 10_000;

/// `f̃(z) = min Σ λ_w f(w)` over convex combinations of the integer
/// neighborhood `{w : |w_i − z_i| < 1}` that reproduce `z`; `+∞` when no
/// combination of finite points does.
pub fn local_convex_envelope(f: &LatticeFunction, z: &[Rational64]) -> Result<ExtendedValue> {
    crate::error::check_dims(f.dim(), z.len())?;
    envelope_with(z, |w| f.value(w))
}

pub(crate) fn envelope_with<F>(z: &[Rational64], eval: F) -> Result<ExtendedValue>
where
    F: Fn(&[i64]) -> ExtendedValue,
{
    let n = z.len();
    let base: Vec<i64> = z.iter().map(|c| c.floor().to_integer()).collect();
    let frac: Vec<(usize, Q)> = z
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_integer())
        .map(|(i, c)| (i, Q::new(i128::from(*c.numer()), i128::from(*c.denom())) - Q::from_integer(base[i] as i128)))
        .collect();
    if frac.is_empty() {
        return Ok(eval(&base));
    }
    let k = frac.len();
    if k > MAX_FRACTIONAL {
        return Err(Error::ResourceLimit { requested: 1u128 << k, limit: 1u128 << MAX_FRACTIONAL });
    }
    let mut w = base.clone();
    let mut cols: Vec<(u32, f64)> = Vec::new();
    for mask in 0u32..(1 << k) {
        for (bit, &(i, _)) in frac.iter().enumerate() {
            w[i] = base[i] + i64::from((mask >> bit) & 1);
        }
        if let Some(v) = eval(&w).get() {
            cols.push((mask, v));
        }
    }
    debug_assert_eq!(w.len(), n);
    if cols.is_empty() {
        return Ok(ExtendedValue::INFINITY);
    }
    // Rows: Σ λ_w [w_i rounded up] = frac_i for each fractional i, Σ λ_w = 1.
    let mut a: Vec<Vec<Q>> = (0..k)
        .map(|bit| cols.iter().map(|&(mask, _)| Q::from_integer(i128::from((mask >> bit) & 1))).collect())
        .collect();
    a.push(alloc::vec![Q::one(); cols.len()]);
    let mut b: Vec<Q> = frac.iter().map(|(_, f)| *f).collect();
    b.push(Q::one());
    let cost: Vec<f64> = cols.iter().map(|&(_, v)| v).collect();
    match Simplex::new(a, b).minimize(&cost)? {
        Some(v) => Ok(ExtendedValue::finite(v)),
        None => Ok(ExtendedValue::INFINITY),
    }
}

/// Dense two-phase primal simplex over `A λ = b, λ ≥ 0` with exact
/// constraint data and Bland's rule.
struct Simplex {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Number of structural columns; artificials follow.
    structural: usize,
}

impl Simplex {
    fn new(a: Vec<Vec<Q>>, b: Vec<Q>) -> Self {
        let m = a.len();
        let structural = a.first().map_or(0, Vec::len);
        let rows = a
            .into_iter()
            .enumerate()
            .map(|(r, mut row)| {
                row.extend((0..m).map(|s| if s == r { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        Simplex { rows, rhs: b, basis: (structural..structural + m).collect(), structural }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        for s in 0..self.rows.len() {
            if s == r || self.rows[s][j].is_zero() {
                continue;
            }
            let factor = self.rows[s][j];
            for c in 0..self.rows[s].len() {
                let delta = factor * self.rows[r][c];
                self.rows[s][c] -= delta;
            }
            let delta = factor * self.rhs[r];
            self.rhs[s] -= delta;
        }
        self.basis[r] = j;
    }

    /// Bland's ratio test: minimum ratio, ties to the smallest basic index.
    fn leaving(&self, j: usize) -> Option<usize> {
        let mut best: Option<(Q, usize)> = None;
        for r in 0..self.rows.len() {
            let t = self.rows[r][j];
            if !t.is_positive() {
                continue;
            }
            let ratio = self.rhs[r] / t;
            best = match best {
                Some((q, s)) if q < ratio || (q == ratio && self.basis[s] < self.basis[r]) => Some((q, s)),
                _ => Some((ratio, r)),
            };
        }
        best.map(|(_, r)| r)
    }

    /// `None` when infeasible.
    fn minimize(mut self, cost: &[f64]) -> Result<Option<f64>> {
        let total = self.rows.first().map_or(0, Vec::len);
        let mut pivots = 0;
        // Phase 1, exact: minimize the sum of artificials.
        loop {
            let entering = (0..total).find(|&j| {
                let mut r = if j >= self.structural { Q::one() } else { Q::zero() };
                for (row, &bj) in self.rows.iter().zip(&self.basis) {
                    if bj >= self.structural {
                        r -= row[j];
                    }
                }
                r.is_negative()
            });
            let Some(j) = entering else { break };
            let r = self.leaving(j).ok_or_else(|| Error::Lp("phase 1 unbounded".into()))?;
            self.pivot(r, j);
            pivots += 1;
            if pivots > MAX_PIVOTS {
                return Err(Error::Lp("pivot limit reached in phase 1".into()));
            }
        }
        let infeasibility: Q = (0..self.rows.len())
            .filter(|&r| self.basis[r] >= self.structural)
            .map(|r| self.rhs[r])
            .fold(Q::zero(), |a, b| a + b);
        if infeasibility.is_positive() {
            return Ok(None);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.structural {
                match (0..self.structural).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => self.pivot(r, j),
                    None => {
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        // Phase 2: exact tableau, floating reduced costs.
        let scale = cost.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        let tol = 1e-12 * scale;
        loop {
            let entering = (0..self.structural).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j];
                for (row, &bj) in self.rows.iter().zip(&self.basis) {
                    r -= cost[bj] * to_f64(row[j]);
                }
                r < -tol
            });
            let Some(j) = entering else { break };
            let r = self.leaving(j).ok_or_else(|| Error::Lp("phase 2 unbounded".into()))?;
            self.pivot(r, j);
            pivots += 1;
            if pivots > MAX_PIVOTS {
                return Err(Error::Lp("pivot limit reached in phase 2".into()));
            }
        }
        let value = self.basis.iter().zip(&self.rhs).map(|(&j, &b)| cost[j] * to_f64(b)).sum::<f64>();
        if !value.is_finite() {
            return Err(Error::Lp("objective is not finite".into()));
        }
        Ok(Some(value))
    }
}

fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// `(x + y) / 2` as a rational point.
pub(crate) fn half_point(s: &[i64]) -> Vec<Rational64> {
    s.iter().map(|&v| Rational64::new(v, 2)).collect()
}

impl Classifier {
    pub(crate) fn integrally_convex_on(&self, t: &BoxTable) -> Result<Verdict> {
        let n = t.dim();
        let mut memo: BTreeMap<Vec<i64>, ExtendedValue> = BTreeMap::new();
        let mut s = alloc::vec![0; n];
        t.scan(Distance::AtLeast(2), |x, y, vx, vy| {
            for i in 0..n {
                s[i] = x[i] + y[i];
            }
            let env = match memo.get(&s) {
                Some(v) => *v,
                None => {
                    let v = envelope_with(&half_point(&s), |w| t.get(w))?;
                    memo.insert(s.clone(), v);
                    v
                }
            };
            Ok(if self.ok(vx + vy, env.scale(2.0)) { Outcome::Pass } else { Outcome::Fail(None) })
        })
    }

    /// Weak midpoint convexity `f(x) + f(y) ≥ 2 f̃((x+y)/2)` at distance ≥ 2.
    pub fn is_integrally_convex(&self, f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
        let t = BoxTable::new(f, bx, self.max_pairs)?;
        self.integrally_convex_on(&t)
    }
}

pub fn is_integrally_convex(f: &LatticeFunction, bx: &LatticeBox) -> Result<Verdict> {
    Classifier::default().is_integrally_convex(f, bx)
}
