//! Brute-force recognition of the convexity classes over a finite box.
//!
//! Every verifier tabulates `f` on the box once and scans unordered pairs of
//! finite points in descending lexicographic order; the first violating pair
//! is reported as `(x, y)` with `x` lexicographically larger than `y`.

mod characterization;
mod envelope;
mod pairs;
mod report;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::functions::LatticeFunction;
use crate::lattice::{LatticeBox, LatticePoint};
use crate::value::{ExtendedValue, DEFAULT_EPSILON};

pub use characterization::{check_ddm_characterization, parallelogram_set_closure};
pub use envelope::{is_integrally_convex, local_convex_envelope};
pub use pairs::{classify_dmc, is_ddm_convex, is_ddm_set, is_dmc_set, is_lnat_convex, is_submodular};
pub use report::{classify, Class, ClassificationReport, ImplicationFailure};

/// Default cap on the number of unordered pairs a verifier may enumerate.
pub const DEFAULT_MAX_PAIRS: u64 = 100_000_000;

/// Largest `m = ‖x − y‖∞` for which every subset of level indices is tried.
pub const MAX_PARALLELOGRAM_LEVELS: u64 = 8;

/// Extra data identifying which inequality failed at a witness pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessDetail {
    /// Level indices `J` (1-based) of a parallelogram inequality.
    Levels(Vec<u64>),
    /// Prefix length of the level-set directions, or a translation amount.
    Shift(u64),
    /// A midpoint or derived point that left the set.
    Outside(LatticePoint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub x: LatticePoint,
    pub y: LatticePoint,
    pub detail: Option<WitnessDetail>,
}

impl Witness {
    pub fn pair(x: LatticePoint, y: LatticePoint) -> Self {
        Witness { x, y, detail: None }
    }

    /// Equality as unordered pairs, ignoring detail.
    pub fn same_pair(&self, a: &[i64], b: &[i64]) -> bool {
        (self.x.coords() == a && self.y.coords() == b) || (self.x.coords() == b && self.y.coords() == a)
    }
}

/// Outcome of a verifier. `holds == false` always comes with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub pairs_checked: u64,
}

impl Verdict {
    pub fn holds(pairs_checked: u64) -> Self {
        Verdict { holds: true, witness: None, pairs_checked }
    }

    pub fn violated(witness: Witness, pairs_checked: u64) -> Self {
        Verdict { holds: false, witness: Some(witness), pairs_checked }
    }
}

/// Tolerance and enumeration limits shared by all verifiers.
///
/// A violation requires `lhs < rhs − epsilon`; `epsilon = 0` gives exact
/// comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classifier {
    pub epsilon: f64,
    pub max_pairs: u64,
}

impl Default for Classifier {
    fn default() -> Self {
        Classifier { epsilon: DEFAULT_EPSILON, max_pairs: DEFAULT_MAX_PAIRS }
    }
}

/// `f` tabulated on a box, with `+∞` for every point off the box.
pub(crate) struct BoxTable {
    bx: LatticeBox,
    strides: Vec<usize>,
    values: Vec<ExtendedValue>,
    /// Row-major indices of finite entries, ascending.
    finite: Vec<usize>,
}

impl BoxTable {
    pub(crate) fn new(f: &LatticeFunction, bx: &LatticeBox, max_pairs: u64) -> Result<Self> {
        crate::error::check_dims(f.dim(), bx.dim())?;
        let card = bx.cardinality();
        let pairs = (card as u128) * (card.saturating_sub(1) as u128) / 2;
        if pairs > max_pairs as u128 {
            return Err(Error::ResourceLimit { requested: pairs, limit: max_pairs as u128 });
        }
        Ok(BoxTable::tabulate(f, bx))
    }

    /// Tabulates without the pair cap; callers bound the box size.
    pub(crate) fn tabulate(f: &LatticeFunction, bx: &LatticeBox) -> Self {
        let n = bx.dim();
        let mut strides = alloc::vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * bx.side(i + 1) as usize;
        }
        let values: Vec<ExtendedValue> = bx.points().map(|x| f.value(&x)).collect();
        let finite = (0..values.len()).filter(|&i| values[i].is_finite()).collect();
        BoxTable { bx: bx.clone(), strides, values, finite }
    }

    pub(crate) fn dim(&self) -> usize {
        self.bx.dim()
    }

    pub(crate) fn bx(&self) -> &LatticeBox {
        &self.bx
    }

    #[inline]
    pub(crate) fn get(&self, x: &[i64]) -> ExtendedValue {
        let lo = self.bx.lo();
        let hi = self.bx.hi();
        let mut idx = 0;
        for i in 0..x.len() {
            if x[i] < lo[i] || x[i] > hi[i] {
                return ExtendedValue::INFINITY;
            }
            idx += (x[i] - lo[i]) as usize * self.strides[i];
        }
        self.values[idx]
    }

    pub(crate) fn finite_indices(&self) -> &[usize] {
        &self.finite
    }

    pub(crate) fn value_at(&self, idx: usize) -> ExtendedValue {
        self.values[idx]
    }

    pub(crate) fn point(&self, idx: usize, out: &mut [i64]) {
        let mut rest = idx;
        for i in 0..out.len() {
            out[i] = self.bx.lo()[i] + (rest / self.strides[i]) as i64;
            rest %= self.strides[i];
        }
    }
}

/// Result of one pair check inside a scan.
pub(crate) enum Outcome {
    Pass,
    Fail(Option<WitnessDetail>),
}

/// Which pairs a scan visits, by Chebyshev distance.
#[derive(Clone, Copy)]
pub(crate) enum Distance {
    Any,
    AtLeast(u64),
}

impl Distance {
    fn admits(self, d: u64) -> bool {
        match self {
            Distance::Any => d > 0,
            Distance::AtLeast(k) => d >= k,
        }
    }
}

impl BoxTable {
    /// Visits unordered pairs of distinct finite points in descending
    /// lexicographic order (`x` before `y`, `x > y`); stops at the first
    /// failure.
    pub(crate) fn scan<F>(&self, dist: Distance, mut check: F) -> Result<Verdict>
    where
        F: FnMut(&[i64], &[i64], ExtendedValue, ExtendedValue) -> Result<Outcome>,
    {
        let n = self.dim();
        let pts: Vec<i64> = {
            let mut flat = alloc::vec![0; self.finite.len() * n];
            for (k, &idx) in self.finite.iter().enumerate() {
                self.point(idx, &mut flat[k * n..(k + 1) * n]);
            }
            flat
        };
        let mut checked = 0u64;
        for a in (0..self.finite.len()).rev() {
            let x = &pts[a * n..(a + 1) * n];
            let vx = self.values[self.finite[a]];
            for b in (0..a).rev() {
                let y = &pts[b * n..(b + 1) * n];
                let d = x.iter().zip(y).map(|(p, q)| p.abs_diff(*q)).max().unwrap_or(0);
                if !dist.admits(d) {
                    continue;
                }
                checked += 1;
                if let Outcome::Fail(detail) = check(x, y, vx, self.values[self.finite[b]])? {
                    let w = Witness { x: LatticePoint::from(x), y: LatticePoint::from(y), detail };
                    return Ok(Verdict::violated(w, checked));
                }
            }
        }
        Ok(Verdict::holds(checked))
    }
}
