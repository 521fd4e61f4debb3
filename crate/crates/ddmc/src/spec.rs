//! JSON function specs.
//!
//! ```json
//! {"dim": 2, "family": "table", "sparse": true,
//!  "box": {"lo": [0, 0], "hi": [1, 1]},
//!  "values": [{"x": [0, 0], "v": 1.5}, {"x": [1, 1], "v": "inf"}]}
//! ```
//!
//! Families and their payloads:
//!
//! - `table`: `box`, `values` as above. Without `"sparse": true` every box
//!   point must be listed.
//! - `quadratic`: `Q` (symmetric), optional `c`, `box`.
//! - `two_separable`: `box`, optional `xi` keyed by index (`{"0": piece}`),
//!   `phi` and `psi` keyed by index pair (`{"0,1": piece}`).
//! - `separable`: `box`, `pieces` (one per coordinate).
//! - `indicator`: `points`, optional `box` (defaults to the bounding box).
//!
//! A piece is `{"kind": k, ...}` with `k` one of `abs` and `square`
//! (`center`, optional `weight`), `affine` (`slope`, `intercept`),
//! `quadratic` (`a`, `b`), `affine_max` (`lines: [[slope, intercept], ...]`)
//! or `table` (`lo`, `values`). Function values may be the string `"inf"`.
//!
//! With `"continuous": true` the families `quadratic` and `two_separable`
//! describe functions of real variables (piece centers may be fractional,
//! tables are not allowed, `box` bounds may be real), and `simplex_hull`
//! with `dim` is the indicator of the hull of the unit vectors.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ddmc_core::continuous::{ContinuousFunction, ContinuousRepr, RealPiece, RealTwoSeparable};
use ddmc_core::functions::{QuadraticSpec, TwoSeparableSpec, UnivariateConvex};
use ddmc_core::{ExtendedValue, LatticeBox, LatticeFunction, LatticePoint};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {source}")]
    Invalid { path: String, source: ddmc_core::Error },
}

pub type SpecResult<T> = Result<T, SpecError>;

#[derive(Debug, Clone)]
pub enum ParsedSpec {
    Lattice(LatticeFunction),
    Continuous(ContinuousFunction),
}

impl ParsedSpec {
    pub fn dim(&self) -> usize {
        match self {
            ParsedSpec::Lattice(f) => f.dim(),
            ParsedSpec::Continuous(f) => f.dim(),
        }
    }
}

/// A JSON node together with its path from the root.
#[derive(Clone, Copy)]
struct Node<'a> {
    v: &'a Value,
    path: &'a str,
}

struct Owned<'a> {
    v: &'a Value,
    path: String,
}

impl<'a> Owned<'a> {
    fn node(&self) -> Node<'_> {
        Node { v: self.v, path: &self.path }
    }
}

impl<'a> Node<'a> {
    fn err<T>(&self, message: impl Into<String>) -> SpecResult<T> {
        Err(SpecError::Schema { path: self.path.to_string(), message: message.into() })
    }

    fn invalid<T>(&self, source: ddmc_core::Error) -> SpecResult<T> {
        Err(SpecError::Invalid { path: self.path.to_string(), source })
    }

    fn get(&self, key: &str) -> Option<Owned<'a>> {
        self.v.get(key).map(|v| Owned { v, path: format!("{}.{key}", self.path) })
    }

    fn field(&self, key: &str) -> SpecResult<Owned<'a>> {
        match self.get(key) {
            Some(o) => Ok(o),
            None => self.err(format!("missing field `{key}`")),
        }
    }

    fn items(&self) -> SpecResult<Vec<Owned<'a>>> {
        match self.v {
            Value::Array(a) => {
                Ok(a.iter().enumerate().map(|(i, v)| Owned { v, path: format!("{}[{i}]", self.path) }).collect())
            }
            _ => self.err("expected an array"),
        }
    }

    fn entries(&self) -> SpecResult<Vec<(&'a str, Owned<'a>)>> {
        match self.v {
            Value::Object(m) => Ok(m
                .iter()
                .map(|(k, v)| (k.as_str(), Owned { v, path: format!("{}[\"{k}\"]", self.path) }))
                .collect()),
            _ => self.err("expected an object"),
        }
    }

    fn str(&self) -> SpecResult<&'a str> {
        self.v.as_str().map_or_else(|| self.err("expected a string"), Ok)
    }

    fn bool(&self) -> SpecResult<bool> {
        self.v.as_bool().map_or_else(|| self.err("expected a boolean"), Ok)
    }

    fn int(&self) -> SpecResult<i64> {
        self.v.as_i64().map_or_else(|| self.err("expected an integer"), Ok)
    }

    fn usize(&self) -> SpecResult<usize> {
        self.v.as_u64().and_then(|u| usize::try_from(u).ok()).map_or_else(|| self.err("expected a nonnegative integer"), Ok)
    }

    fn real(&self) -> SpecResult<f64> {
        match self.v.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            Some(_) => self.err("number must be finite"),
            None => self.err("expected a number"),
        }
    }

    /// A number or `"inf"`.
    fn extended(&self) -> SpecResult<ExtendedValue> {
        match self.v {
            Value::String(s) if s == "inf" || s == "+inf" => Ok(ExtendedValue::INFINITY),
            Value::String(_) => self.err("expected a number or \"inf\""),
            _ => Ok(ExtendedValue::finite(self.real()?)),
        }
    }

    fn ints(&self) -> SpecResult<Vec<i64>> {
        self.items()?.iter().map(|o| o.node().int()).collect()
    }

    fn reals(&self) -> SpecResult<Vec<f64>> {
        self.items()?.iter().map(|o| o.node().real()).collect()
    }

    fn point(&self, dim: usize) -> SpecResult<LatticePoint> {
        let v = self.ints()?;
        if v.len() != dim {
            return self.err(format!("expected {dim} coordinates, found {}", v.len()));
        }
        Ok(LatticePoint::from(v))
    }

    fn lattice_box(&self, dim: usize) -> SpecResult<LatticeBox> {
        let lo = self.field("lo")?.node().point(dim)?;
        let hi = self.field("hi")?.node().point(dim)?;
        LatticeBox::new(lo, hi).or_else(|e| self.invalid(e))
    }
}

pub fn parse_function_spec(text: &str) -> SpecResult<ParsedSpec> {
    let v: Value = serde_json::from_str(text)?;
    parse_value(&v)
}

pub fn parse_value(v: &Value) -> SpecResult<ParsedSpec> {
    let root = Node { v, path: "$" };
    if !v.is_object() {
        return root.err("expected an object");
    }
    let family = root.field("family")?;
    let family = family.node().str()?;
    let continuous = match root.get("continuous") {
        Some(o) => o.node().bool()?,
        None => false,
    };
    let dim = match root.get("dim") {
        Some(o) => Some(o.node().usize()?),
        None => None,
    };
    if continuous {
        return parse_continuous(root, family, dim).map(ParsedSpec::Continuous);
    }
    let f = match family {
        "table" => parse_table(root, need_dim(root, dim)?)?,
        "quadratic" => {
            let spec = parse_quadratic(root, dim)?;
            let bx = root.field("box")?.node().lattice_box(spec.dim())?;
            LatticeFunction::quadratic(spec, bx).or_else(|e| root.invalid(e))?
        }
        "two_separable" => {
            let n = need_dim(root, dim)?;
            let bx = root.field("box")?.node().lattice_box(n)?;
            let spec = parse_two_separable(root, n)?;
            LatticeFunction::two_separable(spec, bx).or_else(|e| root.invalid(e))?
        }
        "separable" => {
            let n = need_dim(root, dim)?;
            let bx = root.field("box")?.node().lattice_box(n)?;
            let list = root.field("pieces")?;
            let items = list.node().items()?;
            if items.len() != n {
                return list.node().err(format!("expected {n} pieces, found {}", items.len()));
            }
            let pieces = items.iter().map(|o| parse_piece(o.node())).collect::<SpecResult<Vec<_>>>()?;
            LatticeFunction::separable(pieces, bx).or_else(|e| root.invalid(e))?
        }
        "indicator" => parse_indicator(root, dim)?,
        other => return root.field("family")?.node().err(format!("unknown family `{other}`")),
    };
    Ok(ParsedSpec::Lattice(f))
}

fn need_dim(root: Node<'_>, dim: Option<usize>) -> SpecResult<usize> {
    match dim {
        Some(0) => root.field("dim")?.node().err("dimension must be positive"),
        Some(n) => Ok(n),
        None => root.err("missing field `dim`"),
    }
}

fn check_declared(root: Node<'_>, dim: Option<usize>, found: usize) -> SpecResult<()> {
    match dim {
        Some(n) if n != found => root.field("dim")?.node().err(format!("declared {n} but the payload has dimension {found}")),
        _ => Ok(()),
    }
}

fn parse_table(root: Node<'_>, n: usize) -> SpecResult<LatticeFunction> {
    let bx = root.field("box")?.node().lattice_box(n)?;
    let sparse = match root.get("sparse") {
        Some(o) => o.node().bool()?,
        None => false,
    };
    let list = root.field("values")?;
    let mut entries: BTreeMap<LatticePoint, ExtendedValue> = BTreeMap::new();
    for item in list.node().items()? {
        let node = item.node();
        let x_field = node.field("x")?;
        let x = x_field.node().point(n)?;
        if !bx.contains(&x) {
            return x_field.node().err(format!("point {:?} lies outside the box", x.coords()));
        }
        let v = node.field("v")?.node().extended()?;
        if entries.insert(x.clone(), v).is_some() {
            return x_field.node().err(format!("point {:?} is listed twice", x.coords()));
        }
    }
    if !sparse {
        if let Some(missing) = bx.points().find(|p| !entries.contains_key(p)) {
            return list
                .node()
                .err(format!("point {:?} is not listed; set \"sparse\": true to default it to inf", missing.coords()));
        }
    }
    let entries: Vec<(LatticePoint, ExtendedValue)> = entries.into_iter().collect();
    LatticeFunction::sparse_table(bx, &entries).or_else(|e| list.node().invalid(e))
}

fn parse_matrix(node: Node<'_>) -> SpecResult<Vec<Vec<f64>>> {
    let rows = node.items()?;
    let n = rows.len();
    if n == 0 {
        return node.err("matrix must be nonempty");
    }
    let mut q = Vec::with_capacity(n);
    for row in &rows {
        let r = row.node().reals()?;
        if r.len() != n {
            return row.node().err(format!("expected {n} entries, found {}", r.len()));
        }
        q.push(r);
    }
    for i in 0..n {
        for j in 0..i {
            if q[i][j] != q[j][i] {
                return node.err(format!("matrix is not symmetric at ({i}, {j})"));
            }
        }
    }
    Ok(q)
}

fn parse_quadratic(root: Node<'_>, dim: Option<usize>) -> SpecResult<QuadraticSpec> {
    let qf = root.field("Q")?;
    let q = parse_matrix(qf.node())?;
    check_declared(root, dim, q.len())?;
    let c = match root.get("c") {
        Some(o) => {
            let c = o.node().reals()?;
            if c.len() != q.len() {
                return o.node().err(format!("expected {} entries, found {}", q.len(), c.len()));
            }
            c
        }
        None => vec![0.0; q.len()],
    };
    QuadraticSpec::new(&q, c).or_else(|e| qf.node().invalid(e))
}

fn parse_piece(node: Node<'_>) -> SpecResult<UnivariateConvex> {
    let kind = node.field("kind")?;
    let weight = || -> SpecResult<f64> {
        match node.get("weight") {
            Some(o) => o.node().real(),
            None => Ok(1.0),
        }
    };
    let piece = match kind.node().str()? {
        "abs" => UnivariateConvex::Abs { center: node.field("center")?.node().int()?, weight: weight()? },
        "square" => UnivariateConvex::Square { center: node.field("center")?.node().int()?, weight: weight()? },
        "affine" => UnivariateConvex::Affine {
            slope: node.field("slope")?.node().real()?,
            intercept: node.field("intercept")?.node().real()?,
        },
        "quadratic" => {
            UnivariateConvex::Quadratic { a: node.field("a")?.node().real()?, b: node.field("b")?.node().real()? }
        }
        "affine_max" => UnivariateConvex::AffineMax(parse_lines(node)?),
        "table" => {
            let values = node.field("values")?;
            let values = values.node().items()?.iter().map(|o| o.node().extended()).collect::<SpecResult<Vec<_>>>()?;
            UnivariateConvex::Table { lo: node.field("lo")?.node().int()?, values }
        }
        other => return kind.node().err(format!("unknown piece kind `{other}`")),
    };
    piece.validate().or_else(|e| node.invalid(e))?;
    Ok(piece)
}

fn parse_lines(node: Node<'_>) -> SpecResult<Vec<(f64, f64)>> {
    let lines = node.field("lines")?;
    lines
        .node()
        .items()?
        .iter()
        .map(|o| {
            let pair = o.node().reals()?;
            match pair[..] {
                [s, c] => Ok((s, c)),
                _ => o.node().err("expected [slope, intercept]"),
            }
        })
        .collect()
}

fn parse_real_piece(node: Node<'_>) -> SpecResult<RealPiece> {
    let kind = node.field("kind")?;
    let weight = || -> SpecResult<f64> {
        match node.get("weight") {
            Some(o) => o.node().real(),
            None => Ok(1.0),
        }
    };
    let piece = match kind.node().str()? {
        "abs" => RealPiece::Abs { center: node.field("center")?.node().real()?, weight: weight()? },
        "square" => RealPiece::Square { center: node.field("center")?.node().real()?, weight: weight()? },
        "affine" => RealPiece::Affine {
            slope: node.field("slope")?.node().real()?,
            intercept: node.field("intercept")?.node().real()?,
        },
        "affine_max" => RealPiece::AffineMax(parse_lines(node)?),
        other => return kind.node().err(format!("piece kind `{other}` is not available for real variables")),
    };
    piece.validate().or_else(|e| node.invalid(e))?;
    Ok(piece)
}

fn index_pair(key: &str) -> Option<(usize, usize)> {
    let (a, b) = key.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Reads `xi`, `phi`, `psi` with the given piece parser.
#[allow(clippy::type_complexity)]
fn parse_pieces<P>(
    root: Node<'_>,
    n: usize,
    parse: impl Fn(Node<'_>) -> SpecResult<P>,
) -> SpecResult<(BTreeMap<usize, P>, BTreeMap<(usize, usize), P>, BTreeMap<(usize, usize), P>)> {
    let mut xi = BTreeMap::new();
    if let Some(o) = root.get("xi") {
        for (key, item) in o.node().entries()? {
            match key.trim().parse::<usize>() {
                Ok(i) if i < n => {
                    xi.insert(i, parse(item.node())?);
                }
                _ => return item.node().err(format!("key `{key}` is not a coordinate index below {n}")),
            }
        }
    }
    let mut pairs = [BTreeMap::new(), BTreeMap::new()];
    for (slot, name) in pairs.iter_mut().zip(["phi", "psi"]) {
        if let Some(o) = root.get(name) {
            for (key, item) in o.node().entries()? {
                match index_pair(key) {
                    Some((i, j)) if i < n && j < n && i != j => {
                        slot.insert((i, j), parse(item.node())?);
                    }
                    _ => return item.node().err(format!("key `{key}` is not a pair \"i,j\" of distinct indices below {n}")),
                }
            }
        }
    }
    let [phi, psi] = pairs;
    Ok((xi, phi, psi))
}

fn parse_two_separable(root: Node<'_>, n: usize) -> SpecResult<TwoSeparableSpec> {
    let (xi, phi, psi) = parse_pieces(root, n, parse_piece)?;
    let xi = (0..n).map(|i| xi.get(&i).cloned().unwrap_or_else(UnivariateConvex::zero)).collect();
    TwoSeparableSpec::new(n, xi, phi, psi).or_else(|e| root.invalid(e))
}

fn parse_indicator(root: Node<'_>, dim: Option<usize>) -> SpecResult<LatticeFunction> {
    let list = root.field("points")?;
    let items = list.node().items()?;
    let n = match (dim, items.first()) {
        (Some(n), _) => n,
        (None, Some(first)) => first.node().items()?.len(),
        (None, None) => return list.node().err("indicator needs at least one point"),
    };
    let points = items.iter().map(|o| o.node().point(n)).collect::<SpecResult<Vec<_>>>()?;
    let f = LatticeFunction::indicator(&points).or_else(|e| list.node().invalid(e))?;
    match root.get("box") {
        Some(b) => {
            let bx = b.node().lattice_box(n)?;
            if let Some(p) = points.iter().find(|p| !bx.contains(p)) {
                return b.node().err(format!("point {:?} lies outside the box", p.coords()));
            }
            let set: std::collections::BTreeSet<Vec<i64>> = points.into_iter().map(LatticePoint::into_inner).collect();
            Ok(LatticeFunction::from_fn(bx, "indicator", move |x| {
                if set.contains(x) {
                    ExtendedValue::ZERO
                } else {
                    ExtendedValue::INFINITY
                }
            }))
        }
        None => Ok(f),
    }
}

fn parse_real_box(node: Node<'_>, n: usize) -> SpecResult<(Vec<f64>, Vec<f64>)> {
    let mut out = Vec::new();
    for key in ["lo", "hi"] {
        let o = node.field(key)?;
        let v = o.node().reals()?;
        if v.len() != n {
            return o.node().err(format!("expected {n} coordinates, found {}", v.len()));
        }
        out.push(v);
    }
    let hi = out.pop().unwrap_or_default();
    let lo = out.pop().unwrap_or_default();
    Ok((lo, hi))
}

fn parse_continuous(root: Node<'_>, family: &str, dim: Option<usize>) -> SpecResult<ContinuousFunction> {
    let (repr, n) = match family {
        "quadratic" => {
            let q = parse_quadratic(root, dim)?;
            let n = q.dim();
            (ContinuousRepr::Quadratic(q), n)
        }
        "two_separable" => {
            let n = need_dim(root, dim)?;
            let (xi, phi, psi) = parse_pieces(root, n, parse_real_piece)?;
            let zero = RealPiece::Affine { slope: 0.0, intercept: 0.0 };
            let xi = (0..n).map(|i| xi.get(&i).cloned().unwrap_or_else(|| zero.clone())).collect();
            let s = RealTwoSeparable::new(n, xi, phi, psi).or_else(|e| root.invalid(e))?;
            (ContinuousRepr::TwoSeparable(s), n)
        }
        "simplex_hull" => {
            let n = need_dim(root, dim)?;
            if root.get("box").is_none() {
                return Ok(ContinuousFunction::simplex_hull(n));
            }
            (ContinuousRepr::SimplexHull { n }, n)
        }
        other => {
            return root.field("family")?.node().err(format!("family `{other}` is not available with \"continuous\": true"))
        }
    };
    let b = root.field("box")?;
    let (lo, hi) = parse_real_box(b.node(), n)?;
    ContinuousFunction::new(repr, lo, hi).or_else(|e| b.node().invalid(e))
}

/// Parses `lo..hi` where each side is an integer (broadcast to `dim`) or a
/// comma-separated list of `dim` integers.
pub fn parse_box_arg(text: &str, dim: usize) -> Result<LatticeBox, String> {
    let (a, b) = text.split_once("..").ok_or_else(|| format!("box `{text}` is not of the form lo..hi"))?;
    let side = |s: &str| -> Result<Vec<i64>, String> {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| format!("box bound `{t}`: {e}")))
            .collect::<Result<_, _>>()?;
        match v.len() {
            1 => Ok(vec![v[0]; dim]),
            k if k == dim => Ok(v),
            k => Err(format!("box bound has {k} coordinates, expected {dim}")),
        }
    };
    LatticeBox::new(side(a)?, side(b)?).map_err(|e| e.to_string())
}

/// Parses a comma-separated integer point.
pub fn parse_point_arg(text: &str, dim: usize) -> Result<LatticePoint, String> {
    let v: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("coordinate `{t}`: {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != dim {
        let mut msg = String::new();
        let _ = write!(msg, "point has {} coordinates, expected {dim}", v.len());
        return Err(msg);
    }
    Ok(LatticePoint::from(v))
}
