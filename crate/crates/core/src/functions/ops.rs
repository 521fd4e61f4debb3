//! Operations that preserve DDM-convexity (translation, permutation, sign
//! inversion, scaling, nonnegative sums, direct sums, restriction,
//! projection, convolution with a separable convex function) plus general
//! convolution, which does not.

use alloc::vec::Vec;

use super::oracle::LatticeFunction;
use super::univariate::UnivariateConvex;
use crate::error::{check_dims, Error, Result};
use crate::lattice::{LatticeBox, LatticePoint};
use crate::value::ExtendedValue;

/// Cap on the number of points enumerated per evaluation by projections and
/// convolutions.
pub const MAX_INNER_ENUMERATION: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    /// `g(x) = f(x + d)`.
    Translate(LatticePoint),
    /// `g(x) = f(x_σ(0), …, x_σ(n−1))`, with `σ` given 0-based.
    Permute(Vec<usize>),
    /// `g(x) = f(τ ⊙ x)`.
    SignFlip(Vec<i64>),
    /// `g(x) = f(α x)`.
    Scale(i64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Combine {
    NonnegSum(f64, f64),
    DirectSum,
}

pub fn transform(f: &LatticeFunction, t: &Transform) -> Result<LatticeFunction> {
    let n = f.dim();
    let u = f.universe();
    let g = f.clone();
    match t {
        Transform::Translate(d) => {
            check_dims(n, d.dim())?;
            let bx = LatticeBox::new(u.lo() - d, u.hi() - d)?;
            let d = d.clone();
            Ok(LatticeFunction::from_fn(bx, "translate", move |x| {
                let y: Vec<i64> = x.iter().zip(d.iter()).map(|(a, b)| a + b).collect();
                g.value(&y)
            }))
        }
        Transform::Permute(sigma) => {
            check_dims(n, sigma.len())?;
            let mut seen = alloc::vec![false; n];
            for &s in sigma {
                if s >= n || seen[s] {
                    return Err(Error::InvalidArgument("not a permutation".into()));
                }
                seen[s] = true;
            }
            let mut lo = alloc::vec![0; n];
            let mut hi = alloc::vec![0; n];
            for i in 0..n {
                lo[sigma[i]] = u.lo()[i];
                hi[sigma[i]] = u.hi()[i];
            }
            let sigma = sigma.clone();
            Ok(LatticeFunction::from_fn(LatticeBox::new(lo, hi)?, "permute", move |x| {
                let y: Vec<i64> = sigma.iter().map(|&s| x[s]).collect();
                g.value(&y)
            }))
        }
        Transform::SignFlip(tau) => {
            check_dims(n, tau.len())?;
            if tau.iter().any(|&t| t != 1 && t != -1) {
                return Err(Error::InvalidArgument("sign vector entries must be +1 or -1".into()));
            }
            let a = u.lo().hadamard(tau);
            let b = u.hi().hadamard(tau);
            let bx = LatticeBox::new(a.meet(&b), a.join(&b))?;
            let tau = tau.clone();
            Ok(LatticeFunction::from_fn(bx, "sign_flip", move |x| {
                let y: Vec<i64> = x.iter().zip(&tau).map(|(a, t)| a * t).collect();
                g.value(&y)
            }))
        }
        Transform::Scale(alpha) => {
            let alpha = *alpha;
            if alpha <= 0 {
                return Err(Error::InvalidArgument("scaling factor must be a positive integer".into()));
            }
            let lo: Vec<i64> = u.lo().iter().map(|&l| -((-l).div_euclid(alpha))).collect();
            let hi: Vec<i64> = u.hi().iter().map(|&h| h.div_euclid(alpha)).collect();
            if lo.iter().zip(&hi).any(|(a, b)| a > b) {
                return Err(Error::Rejected("scaled universe contains no lattice point".into()));
            }
            Ok(LatticeFunction::from_fn(LatticeBox::new(lo, hi)?, "scale", move |x| {
                let y: Vec<i64> = x.iter().map(|&a| a * alpha).collect();
                g.value(&y)
            }))
        }
    }
}

pub fn combine(f1: &LatticeFunction, f2: &LatticeFunction, kind: Combine) -> Result<LatticeFunction> {
    match kind {
        Combine::NonnegSum(a1, a2) => {
            if !(a1 >= 0.0 && a2 >= 0.0 && a1.is_finite() && a2.is_finite()) {
                return Err(Error::InvalidArgument("sum coefficients must be finite and nonnegative".into()));
            }
            check_dims(f1.dim(), f2.dim())?;
            let bx = f1
                .universe()
                .intersect(f2.universe())?
                .ok_or_else(|| Error::Rejected("universes do not intersect".into()))?;
            let (g1, g2) = (f1.clone(), f2.clone());
            Ok(LatticeFunction::from_fn(bx, "nonneg_sum", move |x| {
                g1.value(x).scale(a1) + g2.value(x).scale(a2)
            }))
        }
        Combine::DirectSum => {
            let n1 = f1.dim();
            let lo: Vec<i64> = f1.universe().lo().iter().chain(f2.universe().lo().iter()).copied().collect();
            let hi: Vec<i64> = f1.universe().hi().iter().chain(f2.universe().hi().iter()).copied().collect();
            let (g1, g2) = (f1.clone(), f2.clone());
            Ok(LatticeFunction::from_fn(LatticeBox::new(lo, hi)?, "direct_sum", move |x| {
                g1.value(&x[..n1]) + g2.value(&x[n1..])
            }))
        }
    }
}

/// `g(x) = min { f(x, y) }` over the coordinates not in `keep`, within the
/// universe. Kept coordinates retain their order.
pub fn project(f: &LatticeFunction, keep: &[usize]) -> Result<LatticeFunction> {
    let n = f.dim();
    let mut kept = alloc::vec![false; n];
    for &k in keep {
        if k >= n || kept[k] {
            return Err(Error::InvalidArgument("projection indices must be distinct and in range".into()));
        }
        kept[k] = true;
    }
    if keep.is_empty() {
        return Err(Error::InvalidArgument("projection must keep at least one coordinate".into()));
    }
    let dropped: Vec<usize> = (0..n).filter(|&i| !kept[i]).collect();
    let u = f.universe();
    let bx = LatticeBox::new(
        keep.iter().map(|&i| u.lo()[i]).collect::<Vec<_>>(),
        keep.iter().map(|&i| u.hi()[i]).collect::<Vec<_>>(),
    )?;
    if dropped.is_empty() {
        let keep = keep.to_vec();
        let g = f.clone();
        return Ok(LatticeFunction::from_fn(bx, "project", move |x| {
            let mut y = alloc::vec![0; keep.len()];
            for (pos, &i) in keep.iter().enumerate() {
                y[i] = x[pos];
            }
            g.value(&y)
        }));
    }
    let inner = LatticeBox::new(
        dropped.iter().map(|&i| u.lo()[i]).collect::<Vec<_>>(),
        dropped.iter().map(|&i| u.hi()[i]).collect::<Vec<_>>(),
    )?;
    if inner.cardinality() > MAX_INNER_ENUMERATION {
        return Err(Error::ResourceLimit {
            requested: inner.cardinality() as u128,
            limit: MAX_INNER_ENUMERATION as u128,
        });
    }
    let keep = keep.to_vec();
    let g = f.clone();
    Ok(LatticeFunction::from_fn(bx, "project", move |x| {
        let mut y = alloc::vec![0; n];
        for (pos, &i) in keep.iter().enumerate() {
            y[i] = x[pos];
        }
        let mut best = ExtendedValue::INFINITY;
        for z in inner.points() {
            for (pos, &i) in dropped.iter().enumerate() {
                y[i] = z[pos];
            }
            best = best.min(g.value(&y));
        }
        best
    }))
}

/// Fixes the listed coordinates; the result lives on the remaining ones.
pub fn restrict(f: &LatticeFunction, fixed: &[(usize, i64)]) -> Result<LatticeFunction> {
    let n = f.dim();
    let mut slot: Vec<Option<i64>> = alloc::vec![None; n];
    for &(i, v) in fixed {
        if i >= n || slot[i].is_some() {
            return Err(Error::InvalidArgument("restriction indices must be distinct and in range".into()));
        }
        slot[i] = Some(v);
    }
    let free: Vec<usize> = (0..n).filter(|&i| slot[i].is_none()).collect();
    if free.is_empty() {
        return Err(Error::InvalidArgument("restriction must leave at least one coordinate free".into()));
    }
    let u = f.universe();
    let bx = LatticeBox::new(
        free.iter().map(|&i| u.lo()[i]).collect::<Vec<_>>(),
        free.iter().map(|&i| u.hi()[i]).collect::<Vec<_>>(),
    )?;
    let g = f.clone();
    Ok(LatticeFunction::from_fn(bx, "restrict", move |x| {
        let mut y = alloc::vec![0; n];
        let mut next = 0;
        for i in 0..n {
            y[i] = match slot[i] {
                Some(v) => v,
                None => {
                    next += 1;
                    x[next - 1]
                }
            };
        }
        g.value(&y)
    }))
}

/// `(f □ g)(x) = min { f(y) + g(z) : y + z = x }` over the two universes.
pub fn infconv(f: &LatticeFunction, g: &LatticeFunction) -> Result<LatticeFunction> {
    check_dims(f.dim(), g.dim())?;
    let n = f.dim();
    let (uf, ug) = (f.universe().clone(), g.universe().clone());
    if uf.cardinality().min(ug.cardinality()) > MAX_INNER_ENUMERATION {
        return Err(Error::ResourceLimit {
            requested: uf.cardinality().min(ug.cardinality()) as u128,
            limit: MAX_INNER_ENUMERATION as u128,
        });
    }
    let bx = LatticeBox::new(uf.lo() + ug.lo(), uf.hi() + ug.hi())?;
    let (f, g) = (f.clone(), g.clone());
    Ok(LatticeFunction::from_fn(bx, "infconv", move |x| {
        // y ranges over uf ∩ (x − ug).
        let lo: Vec<i64> = (0..n).map(|i| uf.lo()[i].max(x[i] - ug.hi()[i])).collect();
        let hi: Vec<i64> = (0..n).map(|i| uf.hi()[i].min(x[i] - ug.lo()[i])).collect();
        let range = match LatticeBox::new(lo, hi) {
            Ok(r) => r,
            Err(_) => return ExtendedValue::INFINITY,
        };
        let mut best = ExtendedValue::INFINITY;
        let mut z = alloc::vec![0; n];
        for y in range.points() {
            let fy = f.value(&y);
            if fy.is_infinite() {
                continue;
            }
            for i in 0..n {
                z[i] = x[i] - y[i];
            }
            best = best.min(fy + g.value(&z));
        }
        best
    }))
}

/// Convolution with the separable convex function `Σ φ_i(z_i)`; every `φ_i`
/// must have a bounded finite part.
pub fn infconv_separable(f: &LatticeFunction, phi: &[UnivariateConvex]) -> Result<LatticeFunction> {
    check_dims(f.dim(), phi.len())?;
    let mut lo = Vec::with_capacity(phi.len());
    let mut hi = Vec::with_capacity(phi.len());
    for (i, p) in phi.iter().enumerate() {
        p.validate()?;
        let (a, b) = p.bounded_support().ok_or_else(|| {
            Error::Rejected(alloc::format!("convolution piece {i} has an unbounded finite part"))
        })?;
        lo.push(a);
        hi.push(b);
    }
    let sep = LatticeFunction::separable(phi.to_vec(), LatticeBox::new(lo, hi)?)?;
    Ok(infconv(f, &sep)?.with_family("infconv_separable"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::QuadraticSpec;
    use alloc::vec;

    fn pts(v: &[&[i64]]) -> Vec<LatticePoint> {
        v.iter().map(|p| LatticePoint::from(*p)).collect()
    }

    fn square_1d(lo: i64, hi: i64) -> LatticeFunction {
        LatticeFunction::separable(
            vec![UnivariateConvex::Square { center: 0, weight: 1.0 }],
            LatticeBox::cube(1, lo, hi).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn scale_example() {
        let g = transform(&square_1d(-10, 10), &Transform::Scale(2)).unwrap();
        assert_eq!(g.value(&[3]).get(), Some(36.0));
        assert_eq!(g.universe(), &LatticeBox::cube(1, -5, 5).unwrap());
        assert!(transform(&square_1d(-1, 1), &Transform::Scale(0)).is_err());
    }

    #[test]
    fn scale_rounds_universe_inward() {
        let g = transform(&square_1d(-7, 5), &Transform::Scale(3)).unwrap();
        assert_eq!(g.universe(), &LatticeBox::cube(1, -2, 1).unwrap());
    }

    #[test]
    fn sign_flip_example() {
        let t = LatticeFunction::indicator(&pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[1, 1, 1],
            &[2, 1, 1],
            &[1, 1, -1],
            &[2, 1, -1],
            &[1, 1, 0],
            &[2, 1, 0],
        ]))
        .unwrap();
        let g = transform(&t, &Transform::SignFlip(vec![-1, 1, 1])).unwrap();
        assert_eq!(g.value(&[-1, 1, 1]), ExtendedValue::ZERO);
        assert!(g.value(&[1, 1, 1]).is_infinite());
    }

    #[test]
    fn translate_example() {
        let f = LatticeFunction::indicator(&pts(&[&[0, 0]])).unwrap();
        let g = transform(&f, &Transform::Translate(LatticePoint::from([1, 1]))).unwrap();
        assert_eq!(g.value(&[-1, -1]), ExtendedValue::ZERO);
        assert!(g.value(&[1, 1]).is_infinite());
    }

    #[test]
    fn permute_moves_universe_bounds() {
        let f = LatticeFunction::from_fn(LatticeBox::new(vec![0, 10], vec![1, 12]).unwrap(), "t", |x| {
            ExtendedValue::from(x[0] * 100 + x[1])
        });
        let g = transform(&f, &Transform::Permute(vec![1, 0])).unwrap();
        assert_eq!(g.universe(), &LatticeBox::new(vec![10, 0], vec![12, 1]).unwrap());
        assert_eq!(g.value(&[11, 1]).get(), Some(111.0));
        assert!(transform(&f, &Transform::Permute(vec![0, 0])).is_err());
    }

    #[test]
    fn combine_examples() {
        let s = LatticeFunction::indicator(&pts(&[&[1, 0], &[0, 1]])).unwrap();
        let sum = combine(&s, &s, Combine::NonnegSum(1.0, 1.0)).unwrap();
        assert_eq!(sum.value(&[1, 0]), ExtendedValue::ZERO);

        let zero = LatticeFunction::indicator(&pts(&[&[0]])).unwrap();
        let ds = combine(&s, &zero, Combine::DirectSum).unwrap();
        assert_eq!(ds.value(&[1, 0, 0]), ExtendedValue::ZERO);
        assert!(ds.value(&[1, 0, 1]).is_infinite());

        let b = LatticeBox::cube(1, -3, 3).unwrap();
        let sq = LatticeFunction::separable(vec![UnivariateConvex::Square { center: 0, weight: 1.0 }], b.clone())
            .unwrap();
        let ab = LatticeFunction::separable(vec![UnivariateConvex::Abs { center: 0, weight: 1.0 }], b).unwrap();
        let g = combine(&sq, &ab, Combine::NonnegSum(2.0, 3.0)).unwrap();
        assert_eq!(g.value(&[-2]).get(), Some(14.0));
        assert!(combine(&sq, &ab, Combine::NonnegSum(-1.0, 1.0)).is_err());
    }

    #[test]
    fn projection_examples() {
        let s1 = LatticeFunction::indicator(&pts(&[&[1, 0], &[0, 1]])).unwrap();
        let s2 = LatticeFunction::indicator(&pts(&[&[2], &[3]])).unwrap();
        let ds = combine(&s1, &s2, Combine::DirectSum).unwrap();
        let back = project(&ds, &[0, 1]).unwrap();
        for x in LatticeBox::cube(2, -1, 2).unwrap().points() {
            assert_eq!(back.value(&x), s1.value(&x), "at {x:?}");
        }

        let q = QuadraticSpec::homogeneous(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let f = LatticeFunction::quadratic(q, LatticeBox::cube(2, -3, 3).unwrap()).unwrap();
        let g = project(&f, &[0]).unwrap();
        for x1 in -3..=3 {
            // Independent enumeration over x2.
            let expected = (-3..=3).map(|x2| ((x1 - x2) * (x1 - x2)) as f64).fold(f64::INFINITY, f64::min);
            assert_eq!(g.value(&[x1]).get(), Some(expected));
            assert_eq!(expected, 0.0);
        }
    }

    #[test]
    fn restriction_example() {
        let f = LatticeFunction::separable(
            vec![
                UnivariateConvex::Square { center: 0, weight: 1.0 },
                UnivariateConvex::Square { center: 0, weight: 1.0 },
            ],
            LatticeBox::cube(2, -3, 3).unwrap(),
        )
        .unwrap();
        let g = restrict(&f, &[(1, 0)]).unwrap();
        for t in -3..=3 {
            assert_eq!(g.value(&[t]).get(), Some((t * t) as f64));
        }
    }

    #[test]
    fn convolution_examples() {
        let f = square_1d(-2, 2);
        let point = vec![UnivariateConvex::Table { lo: 0, values: vec![ExtendedValue::ZERO] }];
        let g = infconv_separable(&f, &point).unwrap();
        for t in -3..=3 {
            assert_eq!(g.value(&[t]), f.value(&[t]));
        }

        let origin = LatticeFunction::indicator(&pts(&[&[0, 0]])).unwrap();
        let unit = vec![UnivariateConvex::Table { lo: 0, values: vec![ExtendedValue::ZERO; 2] }; 2];
        let g = infconv_separable(&origin, &unit).unwrap();
        for x in LatticeBox::cube(2, -1, 2).unwrap().points() {
            let inside = x.iter().all(|&c| (0..=1).contains(&c));
            assert_eq!(g.value(&x).is_finite(), inside, "at {x:?}");
        }

        let s1 = LatticeFunction::indicator(&pts(&[&[0, 0, 0], &[1, 1, 0]])).unwrap();
        let s2 = LatticeFunction::indicator(&pts(&[&[0, 0, 0], &[0, 1, 1]])).unwrap();
        let sum = infconv(&s1, &s2).unwrap();
        let dom = sum.effective_domain();
        assert_eq!(dom, pts(&[&[0, 0, 0], &[0, 1, 1], &[1, 1, 0], &[1, 2, 1]]));

        let unbounded = vec![UnivariateConvex::zero()];
        assert!(matches!(infconv_separable(&f, &unbounded), Err(Error::Rejected(_))));
    }
}
