//! Exact integer and rational point types, collinearity predicates, grid
//! enumeration and the direction-hash no-three-in-line verifier.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::{common_denominator, int, Rational};

/// Largest admissible absolute coordinate. Differences of two coordinates fit
/// in an `i64` and products of two differences fit in an `i128`.
pub const COORD_LIMIT: i64 = (1 << 62) - 1;

/// A point of the integer lattice Z^d with d ≥ 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct GridPoint(Vec<i64>);

impl GridPoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "grid points need dimension >= 2, got {}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| c.abs() > COORD_LIMIT) {
            return Err(Error::Domain(format!(
                "coordinate {c} exceeds the supported magnitude {COORD_LIMIT}"
            )));
        }
        Ok(GridPoint(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().map(|&c| int(c)).collect())
    }
}

impl TryFrom<Vec<i64>> for GridPoint {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        GridPoint::new(v)
    }
}

impl From<GridPoint> for Vec<i64> {
    fn from(p: GridPoint) -> Self {
        p.0
    }
}

impl fmt::Debug for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Builds a grid point from a literal slice. Panics on invalid input, meant
/// for tests and constants.
pub fn gp(coords: &[i64]) -> GridPoint {
    GridPoint::new(coords.to_vec()).expect("valid grid point literal")
}

/// An exact rational vector. `BigRational` keeps every coordinate reduced with
/// a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalVector(#[serde(with = "crate::rational::vec_as_strings")] pub Vec<Rational>);

impl RationalVector {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Domain(format!(
                "vectors need dimension >= 2, got {}",
                coords.len()
            )));
        }
        Ok(RationalVector(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalVector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn norm_sq(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, c| acc + c * c)
    }

    pub fn dist_sq(&self, other: &RationalVector) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| {
                let t = a - b;
                acc + &t * &t
            })
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_dims(dims: [usize; 3]) -> Result<()> {
    if dims[0] != dims[1] || dims[0] != dims[2] {
        return Err(Error::ContractViolation(format!(
            "collinearity test on points of dimensions {dims:?}"
        )));
    }
    if dims[0] < 2 {
        return Err(Error::ContractViolation("dimension must be >= 2".into()));
    }
    Ok(())
}

/// Exact collinearity test: every 2×2 minor of `[q−p | r−p]` vanishes.
pub fn collinear3(p: &GridPoint, q: &GridPoint, r: &GridPoint) -> Result<bool> {
    check_dims([p.dim(), q.dim(), r.dim()])?;
    Ok(collinear_unchecked(p.coords(), q.coords(), r.coords()))
}

/// Collinearity on raw coordinate slices of equal length within
/// [`COORD_LIMIT`].
#[inline]
pub(crate) fn collinear_unchecked(p: &[i64], q: &[i64], r: &[i64]) -> bool {
    let d = p.len();
    let u: SmallVec<[i128; 4]> = (0..d).map(|i| (q[i] - p[i]) as i128).collect();
    let v: SmallVec<[i128; 4]> = (0..d).map(|i| (r[i] - p[i]) as i128).collect();
    for i in 0..d {
        for j in i + 1..d {
            // compared without subtracting: each product is below 2^126
            if u[i] * v[j] != u[j] * v[i] {
                return false;
            }
        }
    }
    true
}

/// Collinearity for rational points. Coordinates are scaled by the least
/// common denominator and tested with integer minors.
pub fn collinear3_rational(
    p: &RationalVector,
    q: &RationalVector,
    r: &RationalVector,
) -> Result<bool> {
    check_dims([p.dim(), q.dim(), r.dim()])?;
    let lcd = common_denominator(p.0.iter().chain(&q.0).chain(&r.0));
    let clear = |v: &RationalVector| -> Vec<BigInt> {
        v.0.iter()
            .map(|c| (c.numer() * &lcd) / c.denom())
            .collect()
    };
    let (p, q, r) = (clear(p), clear(q), clear(r));
    let d = p.len();
    let u: Vec<BigInt> = (0..d).map(|i| &q[i] - &p[i]).collect();
    let v: Vec<BigInt> = (0..d).map(|i| &r[i] - &p[i]).collect();
    for i in 0..d {
        for j in i + 1..d {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical key of a direction: an integer vector with coprime coordinates
/// whose first nonzero entry is positive.
pub type Direction = SmallVec<[i64; 4]>;

/// Divides `v` by the gcd of its coordinates and flips the sign so that the
/// first nonzero coordinate is positive.
pub fn primitive_direction(v: &[i64]) -> Result<Direction> {
    if v.iter().all(|&c| c == 0) {
        return Err(Error::ContractViolation(
            "primitive direction of the zero vector".into(),
        ));
    }
    Ok(primitive_unchecked(v))
}

#[inline]
pub(crate) fn primitive_unchecked(v: &[i64]) -> Direction {
    let g = v.iter().fold(0i64, |g, &c| g.gcd(&c));
    let first = *v.iter().find(|&&c| c != 0).expect("nonzero vector");
    let g = if first < 0 { -g } else { g };
    v.iter().map(|&c| c / g).collect()
}

/// Primitive direction from `a` to `b`, `a != b`.
#[inline]
pub(crate) fn direction_between(a: &[i64], b: &[i64]) -> Direction {
    let diff: Direction = a.iter().zip(b).map(|(x, y)| y - x).collect();
    primitive_unchecked(&diff)
}

/// Per-axis inclusive integer bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox(pub Vec<(i64, i64)>);

impl BoundingBox {
    /// The grid box `{1..n}^d`.
    pub fn grid(n: i64, d: usize) -> Self {
        BoundingBox(vec![(1, n); d])
    }

    pub fn cube(lo: i64, hi: i64, d: usize) -> Self {
        BoundingBox(vec![(lo, hi); d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(&self.0)
                .all(|(c, (lo, hi))| lo <= c && c <= hi)
    }
}

/// A finite duplicate-free set of grid points of one dimension inside a box.
/// Iteration order is insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    bounds: BoundingBox,
    points: IndexSet<GridPoint>,
}

impl PointSet {
    pub fn new(dim: usize, bounds: BoundingBox, points: Vec<GridPoint>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("dimension must be >= 2, got {dim}")));
        }
        if bounds.dim() != dim {
            return Err(Error::ContractViolation(format!(
                "box of dimension {} for a point set of dimension {dim}",
                bounds.dim()
            )));
        }
        let mut set = IndexSet::with_capacity(points.len());
        for p in points {
            if p.dim() != dim {
                return Err(Error::ContractViolation(format!(
                    "point {p} does not have dimension {dim}"
                )));
            }
            if !bounds.contains(&p) {
                return Err(Error::ContractViolation(format!("point {p} lies outside the box")));
            }
            if let (_, false) = set.insert_full(p.clone()) {
                return Err(Error::ContractViolation(format!("duplicate point {p}")));
            }
        }
        Ok(PointSet { dim, bounds, points: set })
    }

    /// A point set whose box is the bounding box of its points.
    pub fn from_points(dim: usize, points: Vec<GridPoint>) -> Result<Self> {
        let mut bounds = vec![(0i64, 0i64); dim];
        if let Some(first) = points.first() {
            if first.dim() == dim {
                for (b, &c) in bounds.iter_mut().zip(first.coords()) {
                    *b = (c, c);
                }
            }
        }
        for p in &points {
            for (b, &c) in bounds.iter_mut().zip(p.coords()) {
                b.0 = b.0.min(c);
                b.1 = b.1.max(c);
            }
        }
        PointSet::new(dim, BoundingBox(bounds), points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bounds(&self) -> &BoundingBox {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &GridPoint) -> bool {
        self.points.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GridPoint> {
        self.points.iter()
    }

    pub fn points(&self) -> Vec<GridPoint> {
        self.points.iter().cloned().collect()
    }

    /// The same points sorted lexicographically.
    pub fn sorted(&self) -> PointSet {
        let mut pts = self.points();
        pts.sort();
        PointSet { dim: self.dim, bounds: self.bounds.clone(), points: pts.into_iter().collect() }
    }
}

/// Outcome of [`verify_no_three`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// A collinear triple, in set order.
    Fail([GridPoint; 3]),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Point sets at least this large are verified with anchors spread over the
/// rayon pool.
const PARALLEL_THRESHOLD: usize = 256;

/// Checks that no three points of `s` are collinear in O(k²·d).
///
/// Each anchor hashes the primitive directions to the points after it; a
/// repeated direction is a collinear triple. The reported witness has the
/// smallest anchor and, for that anchor, the lexicographically smallest pair,
/// whatever the thread count.
pub fn verify_no_three(s: &PointSet) -> Verdict {
    let pts: Vec<&[i64]> = s.iter().map(|p| p.coords()).collect();
    let hit = if pts.len() >= PARALLEL_THRESHOLD {
        (0..pts.len())
            .into_par_iter()
            .find_map_first(|i| scan_anchor(&pts, i))
    } else {
        (0..pts.len()).find_map(|i| scan_anchor(&pts, i))
    };
    match hit {
        None => Verdict::Pass,
        Some((i, j, k)) => {
            let g = |x: usize| s.points[x].clone();
            Verdict::Fail([g(i), g(j), g(k)])
        }
    }
}

fn scan_anchor(pts: &[&[i64]], anchor: usize) -> Option<(usize, usize, usize)> {
    let mut first: HashMap<Direction, usize> = HashMap::with_capacity(pts.len() - anchor);
    let mut best: Option<(usize, usize)> = None;
    for k in anchor + 1..pts.len() {
        let dir = direction_between(pts[anchor], pts[k]);
        match first.get(&dir) {
            Some(&j) => {
                if best.is_none_or(|b| (j, k) < b) {
                    best = Some((j, k));
                }
            }
            None => {
                first.insert(dir, k);
            }
        }
    }
    best.map(|(j, k)| (anchor, j, k))
}

/// All `n^d` points of `{1..n}^d` in lexicographic order.
pub fn grid_points(n: i64, d: usize) -> impl Iterator<Item = GridPoint> {
    let mut next = if n >= 1 && d >= 2 { Some(vec![1i64; d]) } else { None };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut axis = d;
        while axis > 0 {
            axis -= 1;
            if succ[axis] < n {
                succ[axis] += 1;
                next = Some(succ);
                break;
            }
            succ[axis] = 1;
        }
        Some(GridPoint(cur))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(points: &[&[i64]]) -> PointSet {
        let d = points[0].len();
        PointSet::from_points(d, points.iter().map(|p| gp(p)).collect()).unwrap()
    }

    #[test]
    fn collinear_examples() {
        assert!(collinear3(&gp(&[0, 0]), &gp(&[1, 1]), &gp(&[2, 2])).unwrap());
        assert!(!collinear3(&gp(&[0, 0]), &gp(&[1, 0]), &gp(&[0, 1])).unwrap());
        assert!(collinear3(&gp(&[1, 2, 3]), &gp(&[2, 4, 6]), &gp(&[3, 6, 9])).unwrap());
    }

    #[test]
    fn collinear_dimension_mismatch_is_an_error() {
        let e = collinear3(&gp(&[0, 0]), &gp(&[1, 1, 1]), &gp(&[2, 2])).unwrap_err();
        assert!(matches!(e, Error::ContractViolation(_)));
    }

    #[test]
    fn collinear_extreme_coordinates_do_not_overflow() {
        let m = COORD_LIMIT;
        assert!(collinear3(&gp(&[-m, -m]), &gp(&[0, 0]), &gp(&[m, m])).unwrap());
        assert!(!collinear3(&gp(&[-m, -m]), &gp(&[0, 1]), &gp(&[m, m])).unwrap());
        assert!(GridPoint::new(vec![m + 1, 0]).is_err());
    }

    #[test]
    fn rational_collinearity_clears_denominators() {
        let a = RationalVector(vec![crate::rational::rat(1, 2), crate::rational::rat(1, 3)]);
        let b = RationalVector::from_ints(&[2, 3]);
        let c = RationalVector(vec![crate::rational::rat(7, 2), crate::rational::rat(17, 3)]);
        assert!(collinear3_rational(&a, &b, &c).unwrap());
        let off = RationalVector(vec![crate::rational::rat(2, 7), crate::rational::rat(3, 17)]);
        assert!(!collinear3_rational(&b, &c, &off).unwrap());
    }

    #[test]
    fn primitive_direction_examples() {
        assert_eq!(primitive_direction(&[2, 4]).unwrap().as_slice(), &[1, 2]);
        assert_eq!(primitive_direction(&[-3, 6]).unwrap().as_slice(), &[1, -2]);
        assert_eq!(primitive_direction(&[0, -5, 10]).unwrap().as_slice(), &[0, 1, -2]);
        assert!(matches!(primitive_direction(&[0, 0]), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn verifier_examples() {
        assert_eq!(verify_no_three(&set(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])), Verdict::Pass);
        assert_eq!(
            verify_no_three(&set(&[&[0, 0], &[1, 1], &[2, 2], &[5, 0]])),
            Verdict::Fail([gp(&[0, 0]), gp(&[1, 1]), gp(&[2, 2])])
        );
    }

    #[test]
    fn witness_is_smallest_pair_for_the_anchor() {
        // anchor 0 sees pairs (1,4) on the diagonal and (2,3) on the x-axis
        let s = set(&[&[0, 0], &[1, 1], &[1, 0], &[2, 0], &[3, 3]]);
        assert_eq!(
            verify_no_three(&s),
            Verdict::Fail([gp(&[0, 0]), gp(&[1, 1]), gp(&[3, 3])])
        );
    }

    #[test]
    fn small_sets_always_pass() {
        assert!(verify_no_three(&PointSet::from_points(2, vec![]).unwrap()).is_pass());
        assert!(verify_no_three(&set(&[&[3, 3]])).is_pass());
        assert!(verify_no_three(&set(&[&[3, 3], &[4, 4]])).is_pass());
    }

    #[test]
    fn point_set_invariants() {
        assert!(PointSet::from_points(2, vec![gp(&[1, 1]), gp(&[1, 1])]).is_err());
        assert!(PointSet::from_points(2, vec![gp(&[1, 1]), gp(&[1, 1, 1])]).is_err());
        assert!(PointSet::new(2, BoundingBox::grid(3, 2), vec![gp(&[4, 1])]).is_err());
        assert!(PointSet::new(1, BoundingBox::grid(3, 1), vec![]).is_err());
    }

    #[test]
    fn grid_enumeration() {
        let g: Vec<_> = grid_points(2, 2).collect();
        assert_eq!(g, vec![gp(&[1, 1]), gp(&[1, 2]), gp(&[2, 1]), gp(&[2, 2])]);
        assert_eq!(grid_points(1, 3).collect::<Vec<_>>(), vec![gp(&[1, 1, 1])]);
        let g: Vec<_> = grid_points(3, 2).collect();
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], gp(&[1, 1]));
        assert_eq!(g[8], gp(&[3, 3]));
        assert_eq!(grid_points(4, 3).count(), 64);
    }
}
