//! Integer-lattice primitives.
//!
//! The directed midpoint `μ(x, y)` rounds `(x_i + y_i) / 2` toward `x_i` in
//! every coordinate. Together with its mirror `μ(y, x)` it is the unique pair
//! `(p, q)` with `p + q = x + y`, `‖p − q‖∞ ≤ 1` and `p_i ≥ q_i` exactly when
//! `x_i ≥ y_i`. All rounding is done with Euclidean integer division, so
//! negative coordinates round the same way as positive ones.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Deref, Neg, Sub};

use crate::error::{check_dims, Error, Result};

/// Coordinates beyond this magnitude are rejected by [`LatticeBox::new`].
pub const COORD_LIMIT: i64 = 1_000_000;

/// A point of `Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn zeros(n: usize) -> Self {
        LatticePoint(alloc::vec![0; n])
    }

    /// Indicator vector `1_A - 1_B` of two disjoint coordinate sets.
    pub fn indicator(n: usize, plus: &[usize], minus: &[usize]) -> Self {
        let mut v = alloc::vec![0; n];
        for &i in plus {
            v[i] += 1;
        }
        for &i in minus {
            v[i] -= 1;
        }
        LatticePoint(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `‖x‖∞`.
    pub fn norm_inf(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn scaled(&self, a: i64) -> Self {
        LatticePoint(self.0.iter().map(|&c| c * a).collect())
    }

    /// Componentwise product `τ ⊙ x`.
    pub fn hadamard(&self, tau: &[i64]) -> Self {
        LatticePoint(self.0.iter().zip(tau).map(|(&c, &t)| c * t).collect())
    }

    pub fn join(&self, other: &LatticePoint) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn meet(&self, other: &LatticePoint) -> Self {
        LatticePoint(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }
}

impl Deref for LatticePoint {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

impl From<&[i64]> for LatticePoint {
    fn from(v: &[i64]) -> Self {
        LatticePoint(v.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for LatticePoint {
    fn from(v: [i64; N]) -> Self {
        LatticePoint(v.to_vec())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &LatticePoint {
    type Output = LatticePoint;

    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticePoint {
    type Output = LatticePoint;

    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;

    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|c| -c).collect())
    }
}

#[inline]
pub fn floor_half(s: i64) -> i64 {
    s.div_euclid(2)
}

#[inline]
pub fn ceil_half(s: i64) -> i64 {
    s.div_euclid(2) + s.rem_euclid(2)
}

/// One coordinate of `μ(x, y)`.
#[inline]
pub fn directed_midpoint_coord(xi: i64, yi: i64) -> i64 {
    let s = xi + yi;
    if xi >= yi {
        ceil_half(s)
    } else {
        floor_half(s)
    }
}

/// `(μ(x, y), μ(y, x))`.
pub fn directed_midpoint_pair(x: &[i64], y: &[i64]) -> Result<(LatticePoint, LatticePoint)> {
    check_dims(x.len(), y.len())?;
    let p = x.iter().zip(y).map(|(&a, &b)| directed_midpoint_coord(a, b)).collect();
    let q = x.iter().zip(y).map(|(&a, &b)| directed_midpoint_coord(b, a)).collect();
    Ok((LatticePoint(p), LatticePoint(q)))
}

/// `μ(x, y)` alone.
pub fn directed_midpoint(x: &[i64], y: &[i64]) -> Result<LatticePoint> {
    check_dims(x.len(), y.len())?;
    Ok(LatticePoint(
        x.iter().zip(y).map(|(&a, &b)| directed_midpoint_coord(a, b)).collect(),
    ))
}

/// `(⌈(x+y)/2⌉, ⌊(x+y)/2⌋)`.
pub fn rounded_midpoint_pair(x: &[i64], y: &[i64]) -> Result<(LatticePoint, LatticePoint)> {
    check_dims(x.len(), y.len())?;
    let up = x.iter().zip(y).map(|(&a, &b)| ceil_half(a + b)).collect();
    let down = x.iter().zip(y).map(|(&a, &b)| floor_half(a + b)).collect();
    Ok((LatticePoint(up), LatticePoint(down)))
}

/// `‖x − y‖∞`.
pub fn chebyshev_distance(x: &[i64], y: &[i64]) -> Result<u64> {
    check_dims(x.len(), y.len())?;
    Ok(x.iter().zip(y).map(|(&a, &b)| (a - b).unsigned_abs()).max().unwrap_or(0))
}

/// The level sets `A_k = {i : y_i − x_i ≥ k}`, `B_k = {i : y_i − x_i ≤ −k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSetPair {
    pub k: usize,
    /// Coordinate indices (0-based, ascending).
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl LevelSetPair {
    /// `1_{A_k} − 1_{B_k}`.
    pub fn direction(&self, n: usize) -> LatticePoint {
        LatticePoint::indicator(n, &self.plus, &self.minus)
    }
}

/// Level sets for `k = 1..m`, `m = ‖y − x‖∞`.
pub fn level_set_decomposition(x: &[i64], y: &[i64]) -> Result<Vec<LevelSetPair>> {
    let m = chebyshev_distance(x, y)? as usize;
    if m == 0 {
        return Err(Error::EmptyDecomposition);
    }
    let diff: Vec<i64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    Ok((1..=m)
        .map(|k| {
            let k_i = k as i64;
            LevelSetPair {
                k,
                plus: (0..diff.len()).filter(|&i| diff[i] >= k_i).collect(),
                minus: (0..diff.len()).filter(|&i| diff[i] <= -k_i).collect(),
            }
        })
        .collect())
}

/// Level-set directions `1_{A_k} − 1_{B_k}` for `k = 1..m` as lattice points,
/// in order of `k`. Empty when `x == y`.
pub fn level_directions(x: &[i64], y: &[i64]) -> Result<Vec<LatticePoint>> {
    match level_set_decomposition(x, y) {
        Ok(levels) => Ok(levels.iter().map(|l| l.direction(x.len())).collect()),
        Err(Error::EmptyDecomposition) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// A multiset of nonzero `{−1, 0, +1}` vectors, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DirectionMultiset(Vec<LatticePoint>);

impl DirectionMultiset {
    pub fn from_unsorted(mut elements: Vec<LatticePoint>) -> Self {
        elements.sort();
        DirectionMultiset(elements)
    }

    pub fn elements(&self) -> &[LatticePoint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the elements in dimension `n`.
    pub fn sum(&self, n: usize) -> LatticePoint {
        self.0.iter().fold(LatticePoint::zeros(n), |acc, d| &acc + d)
    }
}

/// The recursive midpoint decomposition `D(x)`:
/// `∅` at `0`, `{x}` at norm 1, `{μ(x,0), μ(0,x)}` at norm 2 and
/// `D(μ(x,0)) ∪ D(μ(0,x))` above.
pub fn midpoint_decompose(x: &[i64]) -> DirectionMultiset {
    let mut out = Vec::new();
    decompose_into(&LatticePoint::from(x), &mut out);
    DirectionMultiset::from_unsorted(out)
}

fn decompose_into(x: &LatticePoint, out: &mut Vec<LatticePoint>) {
    let zero = LatticePoint::zeros(x.dim());
    match x.norm_inf() {
        0 => {}
        1 => out.push(x.clone()),
        2 => {
            out.push(directed_midpoint(x, &zero).expect("same dimension"));
            out.push(directed_midpoint(&zero, x).expect("same dimension"));
        }
        _ => {
            decompose_into(&directed_midpoint(x, &zero).expect("same dimension"), out);
            decompose_into(&directed_midpoint(&zero, x).expect("same dimension"), out);
        }
    }
}

/// An axis-aligned integer box `[lo, hi]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    lo: LatticePoint,
    hi: LatticePoint,
}

impl LatticeBox {
    pub fn new(lo: impl Into<LatticePoint>, hi: impl Into<LatticePoint>) -> Result<Self> {
        let (lo, hi) = (lo.into(), hi.into());
        check_dims(lo.dim(), hi.dim())?;
        if lo.dim() == 0 {
            return Err(Error::InvalidArgument("box dimension must be at least 1".into()));
        }
        for i in 0..lo.dim() {
            if lo[i] > hi[i] {
                return Err(Error::InvalidArgument(alloc::format!(
                    "box lower bound exceeds upper bound in coordinate {i}"
                )));
            }
            if lo[i].abs() > COORD_LIMIT || hi[i].abs() > COORD_LIMIT {
                return Err(Error::InvalidArgument(alloc::format!(
                    "box coordinate {i} exceeds the supported magnitude {COORD_LIMIT}"
                )));
            }
        }
        let b = LatticeBox { lo, hi };
        if b.cardinality_u128() > u64::MAX as u128 {
            return Err(Error::ResourceLimit { requested: b.cardinality_u128(), limit: u64::MAX as u128 });
        }
        Ok(b)
    }

    /// `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Result<Self> {
        LatticeBox::new(alloc::vec![lo; n], alloc::vec![hi; n])
    }

    /// The smallest box containing all `points`.
    pub fn bounding(points: &[LatticePoint]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("bounding box of an empty set".into()))?;
        let mut lo = first.clone().into_inner();
        let mut hi = lo.clone();
        for p in points {
            check_dims(lo.len(), p.dim())?;
            for i in 0..lo.len() {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        LatticeBox::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn lo(&self) -> &LatticePoint {
        &self.lo
    }

    pub fn hi(&self) -> &LatticePoint {
        &self.hi
    }

    pub fn side(&self, i: usize) -> u64 {
        (self.hi[i] - self.lo[i]) as u64 + 1
    }

    fn cardinality_u128(&self) -> u128 {
        (0..self.dim()).map(|i| self.side(i) as u128).product()
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality_u128() as u64
    }

    /// ℓ∞ diameter `max_i (hi_i − lo_i)`.
    pub fn diameter(&self) -> u64 {
        (0..self.dim()).map(|i| (self.hi[i] - self.lo[i]) as u64).max().unwrap_or(0)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim() && x.iter().enumerate().all(|(i, &c)| self.lo[i] <= c && c <= self.hi[i])
    }

    /// Intersection, or `None` when empty.
    pub fn intersect(&self, other: &LatticeBox) -> Result<Option<LatticeBox>> {
        check_dims(self.dim(), other.dim())?;
        let lo: Vec<i64> = (0..self.dim()).map(|i| self.lo[i].max(other.lo[i])).collect();
        let hi: Vec<i64> = (0..self.dim()).map(|i| self.hi[i].min(other.hi[i])).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Ok(None);
        }
        LatticeBox::new(lo, hi).map(Some)
    }

    /// Row-major (last coordinate fastest) index of a contained point.
    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        if !self.contains(x) {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..self.dim() {
            idx = idx * self.side(i) as usize + (x[i] - self.lo[i]) as usize;
        }
        Some(idx)
    }

    pub fn point_at(&self, mut idx: usize) -> LatticePoint {
        let mut v = alloc::vec![0; self.dim()];
        for i in (0..self.dim()).rev() {
            let s = self.side(i) as usize;
            v[i] = self.lo[i] + (idx % s) as i64;
            idx /= s;
        }
        LatticePoint(v)
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints { bx: self, next: Some(self.lo.clone()) }
    }
}

impl fmt::Debug for LatticeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}..{:?}]", self.lo, self.hi)
    }
}

pub struct BoxPoints<'a> {
    bx: &'a LatticeBox,
    next: Option<LatticePoint>,
}

impl Iterator for BoxPoints<'_> {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let mut i = nxt.dim();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if nxt.0[i] < self.bx.hi[i] {
                nxt.0[i] += 1;
                self.next = Some(nxt);
                break;
            }
            nxt.0[i] = self.bx.lo[i];
        }
        Some(cur)
    }
}

/// All vectors of `{−1, 0, +1}^n` in lexicographic order.
pub fn unit_directions(n: usize) -> Vec<LatticePoint> {
    LatticeBox::cube(n, -1, 1).expect("unit cube").points().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p<const N: usize>(v: [i64; N]) -> LatticePoint {
        LatticePoint::from(v)
    }

    #[test]
    fn directed_midpoint_examples() {
        let (a, b) = directed_midpoint_pair(&[0, 0, 0], &[2, 1, -1]).unwrap();
        assert_eq!(a, p([1, 0, 0]));
        assert_eq!(b, p([1, 1, -1]));

        let (a, b) = directed_midpoint_pair(&[3, -2], &[3, -2]).unwrap();
        assert_eq!((a, b), (p([3, -2]), p([3, -2])));

        let (a, b) = directed_midpoint_pair(&[1, 0], &[0, 1]).unwrap();
        assert_eq!((a, b), (p([1, 0]), p([0, 1])));
    }

    #[test]
    fn rounded_midpoint_examples() {
        assert_eq!(rounded_midpoint_pair(&[1, 0], &[0, 1]).unwrap(), (p([1, 1]), p([0, 0])));
        assert_eq!(rounded_midpoint_pair(&[2, 2], &[0, 0]).unwrap(), (p([1, 1]), p([1, 1])));
        assert_eq!(
            rounded_midpoint_pair(&[0, 0, 0], &[2, 1, -1]).unwrap(),
            (p([1, 1, 0]), p([1, 0, -1]))
        );
    }

    #[test]
    fn negative_half_integers_round_exactly() {
        assert_eq!(floor_half(-3), -2);
        assert_eq!(ceil_half(-3), -1);
        assert_eq!(directed_midpoint_coord(-1, -2), -1);
        assert_eq!(directed_midpoint_coord(-2, -1), -2);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            directed_midpoint_pair(&[0, 0], &[1]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(rounded_midpoint_pair(&[0], &[1, 2]).is_err());
        assert!(chebyshev_distance(&[0], &[1, 2]).is_err());
    }

    #[test]
    fn level_sets_examples() {
        let ls = level_set_decomposition(&[0, 0, 0], &[2, 1, -1]).unwrap();
        assert_eq!(ls.len(), 2);
        assert_eq!((ls[0].plus.clone(), ls[0].minus.clone()), (vec![0, 1], vec![2]));
        assert_eq!((ls[1].plus.clone(), ls[1].minus.clone()), (vec![0], vec![]));

        let ls = level_set_decomposition(&[0], &[3]).unwrap();
        assert_eq!(ls.len(), 3);
        assert!(ls.iter().all(|l| l.plus == vec![0] && l.minus.is_empty()));

        let ls = level_set_decomposition(&[5, 5], &[4, 6]).unwrap();
        assert_eq!(ls.len(), 1);
        assert_eq!((ls[0].plus.clone(), ls[0].minus.clone()), (vec![1], vec![0]));

        assert_eq!(level_set_decomposition(&[1, 2], &[1, 2]), Err(Error::EmptyDecomposition));
    }

    #[test]
    fn decomposition_examples() {
        let d = midpoint_decompose(&[2, 1, -1]);
        assert_eq!(d, DirectionMultiset::from_unsorted(vec![p([1, 1, -1]), p([1, 0, 0])]));
        assert!(midpoint_decompose(&[0, 0]).is_empty());
        assert_eq!(midpoint_decompose(&[3]).elements(), &[p([1]), p([1]), p([1])]);
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_distance(&[0, 0, 0], &[2, 1, -1]).unwrap(), 2);
        assert_eq!(chebyshev_distance(&[4, -4], &[4, -4]).unwrap(), 0);
        assert_eq!(chebyshev_distance(&[-3], &[4]).unwrap(), 7);
    }

    #[test]
    fn box_indexing_round_trips() {
        let b = LatticeBox::new(vec![-1, 0, 2], vec![1, 2, 3]).unwrap();
        assert_eq!(b.cardinality(), 18);
        for (i, x) in b.points().enumerate() {
            assert_eq!(b.index_of(&x), Some(i));
            assert_eq!(b.point_at(i), x);
        }
        assert_eq!(b.points().count(), 18);
        assert_eq!(b.diameter(), 2);
    }

    #[test]
    fn box_rejects_inverted_bounds() {
        assert!(LatticeBox::new(vec![1], vec![0]).is_err());
        assert!(LatticeBox::new(vec![0], vec![COORD_LIMIT + 1]).is_err());
    }
}
