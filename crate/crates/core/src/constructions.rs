//! Constructive no-three-in-line point sets: lattice sphere sections, the
//! Erdős parabola and a greedy filler.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::paper_bound;
use crate::error::{Error, Result};
use crate::geometry::{
    direction_between, grid_points, verify_no_three, BoundingBox, Direction, GridPoint, PointSet,
    RationalVector, Verdict,
};
use crate::rational::{fmt_rational, Rational};

/// A sphere with a half-integer center, stored doubled so that membership is
/// the integer equation `‖2z − c2‖² = r2x4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphereSpec {
    /// `2 · center`.
    center2: Vec<i64>,
    /// `4 · radius²`.
    radius_sq4: i128,
    bounds: BoundingBox,
}

impl SphereSpec {
    /// `center` must have denominators dividing 2 and `4 · radius_sq` must be
    /// a nonnegative integer.
    pub fn new(center: &RationalVector, radius_sq: &Rational, bounds: BoundingBox) -> Result<Self> {
        if center.dim() != bounds.dim() {
            return Err(Error::ContractViolation(format!(
                "center of dimension {} with a box of dimension {}",
                center.dim(),
                bounds.dim()
            )));
        }
        let two = Rational::from_integer(2.into());
        let center2 = center
            .coords()
            .iter()
            .map(|c| {
                let c2 = c * &two;
                if !c2.is_integer() {
                    return Err(Error::Domain(format!("center coordinate {c} is not a half-integer")));
                }
                c2.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::Domain(format!("center coordinate {c} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        let r4 = radius_sq * Rational::from_integer(4.into());
        if !r4.is_integer() || r4 < Rational::from_integer(0.into()) {
            return Err(Error::Domain(format!(
                "4 * radius_sq must be a nonnegative integer, got radius_sq {radius_sq}"
            )));
        }
        let radius_sq4 = r4
            .to_integer()
            .to_i128()
            .ok_or_else(|| Error::Domain(format!("radius_sq {radius_sq} too large")))?;
        Ok(SphereSpec { center2, radius_sq4, bounds })
    }

    pub fn from_doubled(center2: Vec<i64>, radius_sq4: i128, bounds: BoundingBox) -> Self {
        SphereSpec { center2, radius_sq4, bounds }
    }

    pub fn dim(&self) -> usize {
        self.center2.len()
    }

    pub fn center(&self) -> RationalVector {
        RationalVector(self.center2.iter().map(|&c| crate::rational::rat(c, 2)).collect())
    }

    pub fn radius_sq(&self) -> Rational {
        Rational::new(self.radius_sq4.into(), 4.into())
    }
}

/// All lattice points of the box at exact squared distance `radius_sq` from
/// the center, in lexicographic order. Coordinates are fixed one at a time;
/// the remaining squared radius bounds the range of the next coordinate.
pub fn sphere_section(spec: &SphereSpec) -> PointSet {
    let d = spec.dim();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    section_rec(spec, spec.radius_sq4, &mut cur, &mut out);
    PointSet::new(d, spec.bounds.clone(), out).expect("section points are distinct and inside the box")
}

fn section_rec(spec: &SphereSpec, residual: i128, cur: &mut Vec<i64>, out: &mut Vec<GridPoint>) {
    let i = cur.len();
    let c2 = spec.center2[i] as i128;
    let (lo, hi) = spec.bounds.0[i];
    let s = residual.max(0).unsigned_abs().isqrt() as i128;
    if i + 1 == spec.dim() {
        if s * s != residual {
            return;
        }
        // 2z − c2 = ±s
        let mut roots = vec![c2 - s];
        if s != 0 {
            roots.push(c2 + s);
        }
        for t in roots {
            if t.rem_euclid(2) == 0 {
                let z = (t / 2) as i64;
                if lo <= z && z <= hi {
                    cur.push(z);
                    out.push(GridPoint::new(cur.clone()).expect("coordinates within range"));
                    cur.pop();
                }
            }
        }
        return;
    }
    // |2z − c2| <= s
    let zmin = (c2 - s + 1).div_euclid(2).max(lo as i128) as i64;
    let zmax = (c2 + s).div_euclid(2).min(hi as i128) as i64;
    for z in zmin..=zmax {
        let u = 2 * z as i128 - c2;
        cur.push(z);
        section_rec(spec, residual - u * u, cur, out);
        cur.pop();
    }
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime(p: u64) -> bool {
    primal_check::miller_rabin(p)
}

/// `{(x, x² mod p) : 0 <= x < p}` shifted into the 1-based `p × p` grid.
pub fn erdos_parabola(p: u64) -> Result<PointSet> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if p > crate::geometry::COORD_LIMIT as u64 {
        return Err(Error::Domain(format!("{p} exceeds the coordinate range")));
    }
    let pts = (0..p)
        .map(|x| {
            let y = ((x as u128 * x as u128) % p as u128) as i64;
            GridPoint::new(vec![x as i64 + 1, y + 1]).expect("in range")
        })
        .collect();
    PointSet::new(2, BoundingBox::grid(p as i64, 2), pts)
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..).find(|&p| is_prime(p)).expect("primes are unbounded")
}

/// The parabola for the smallest prime `p >= n`, clipped to the `n × n`
/// grid. Returns the set and `p`.
pub fn erdos_clipped(n: u64) -> Result<(PointSet, u64)> {
    if n < 2 {
        return Err(Error::Domain("erdos construction needs n >= 2".into()));
    }
    let p = next_prime(n);
    let full = erdos_parabola(p)?;
    let bounds = BoundingBox::grid(n as i64, 2);
    let pts = full.iter().filter(|q| bounds.contains(q)).cloned().collect();
    Ok((PointSet::new(2, bounds, pts)?, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sphere,
    Erdos,
    Greedy,
    Paper,
}

/// Output of a constructor. Can only be built from a verified point set.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionReport {
    pub method: Method,
    pub params: BTreeMap<String, Value>,
    pub points: PointSet,
    verified: bool,
    pub bound_value: f64,
    pub ratio: f64,
}

impl ConstructionReport {
    /// Verifies `points` and attaches the claimed bound for `(n, d)`.
    pub fn new(method: Method, params: BTreeMap<String, Value>, points: PointSet, n: u64, d: usize) -> Result<Self> {
        if let Verdict::Fail(w) = verify_no_three(&points) {
            return Err(Error::Internal(format!(
                "{method:?} construction produced collinear triple {} {} {}",
                w[0], w[1], w[2]
            )));
        }
        let bound_value = paper_bound(n, d)?;
        let ratio = points.len() as f64 / bound_value;
        Ok(ConstructionReport { method, params, points, verified: true, bound_value, ratio })
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    /// Report JSON. `points_file` is where the caller wrote the points, if
    /// anywhere.
    pub fn to_json(&self, points_file: Option<&str>) -> Value {
        let points: Vec<&[i64]> = self.points.iter().map(|p| p.coords()).collect();
        json!({
            "method": self.method,
            "params": self.params,
            "count": self.count(),
            "bound": self.bound_value,
            "ratio": self.ratio,
            "points_file": points_file,
            "points": points,
        })
    }
}

/// How `best_sphere` picks centers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CenterStrategy {
    /// The grid center and its half-integer perturbations `{−½, 0, ½}^d`.
    CenterScan,
    FixedCenter(RationalVector),
}

/// Largest realized sphere section for one doubled center:
/// `(count, 4r²)`, ties to the smaller radius.
fn best_radius(center2: &[i64], n: i64, d: usize) -> (usize, i128) {
    let mut hist: HashMap<i128, usize> = HashMap::new();
    for p in grid_points(n, d) {
        let r: i128 = p
            .coords()
            .iter()
            .zip(center2)
            .map(|(&z, &c)| {
                let u = 2 * z as i128 - c as i128;
                u * u
            })
            .sum();
        *hist.entry(r).or_default() += 1;
    }
    hist.into_iter()
        .min_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)))
        .map(|(r, c)| (c, r))
        .expect("grid is nonempty")
}

fn doubled_center(c: &RationalVector) -> Result<Vec<i64>> {
    SphereSpec::new(c, &Rational::from_integer(0.into()), BoundingBox::cube(0, 0, c.dim()))
        .map(|s| s.center2)
}

/// Scans candidate centers and every realized squared radius over
/// `{1..n}^d`, keeping the largest section. Ties go to the smaller radius,
/// then the lexicographically smaller center.
pub fn best_sphere(n: u64, d: usize, strategy: &CenterStrategy) -> Result<ConstructionReport> {
    if n < 2 || d < 2 {
        return Err(Error::Domain(format!("best_sphere needs n >= 2 and d >= 2, got n={n} d={d}")));
    }
    let ni = n as i64;
    let centers: Vec<Vec<i64>> = match strategy {
        CenterStrategy::CenterScan => {
            let base = ni + 1;
            let mut out = vec![Vec::with_capacity(d)];
            for _ in 0..d {
                out = out
                    .into_iter()
                    .flat_map(|c| {
                        (-1..=1).map(move |delta| {
                            let mut c = c.clone();
                            c.push(base + delta);
                            c
                        })
                    })
                    .collect();
            }
            out
        }
        CenterStrategy::FixedCenter(c) => {
            if c.dim() != d {
                return Err(Error::ContractViolation(format!(
                    "center of dimension {} for d = {d}",
                    c.dim()
                )));
            }
            vec![doubled_center(c)?]
        }
    };
    let (count, r4, c2) = centers
        .into_par_iter()
        .map(|c2| {
            let (count, r4) = best_radius(&c2, ni, d);
            (count, r4, c2)
        })
        .min_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)))
        .expect("at least one center");
    let spec = SphereSpec::from_doubled(c2, r4, BoundingBox::grid(ni, d));
    let points = sphere_section(&spec);
    debug_assert_eq!(points.len(), count);
    let mut params = BTreeMap::new();
    params.insert("n".into(), json!(n));
    params.insert("d".into(), json!(d));
    params.insert(
        "strategy".into(),
        json!(match strategy {
            CenterStrategy::CenterScan => "center-scan",
            CenterStrategy::FixedCenter(_) => "fixed-center",
        }),
    );
    params.insert("center".into(), json!(fmt_center(&spec.center())));
    params.insert("r2".into(), json!(fmt_rational(&spec.radius_sq())));
    ConstructionReport::new(Method::Sphere, params, points, n, d)
}

fn fmt_center(c: &RationalVector) -> String {
    c.coords().iter().map(fmt_rational).collect::<Vec<_>>().join(",")
}

/// Section of `{1..n}^d` for an explicit center and squared radius.
pub fn fixed_sphere(n: u64, d: usize, center: &RationalVector, radius_sq: &Rational) -> Result<ConstructionReport> {
    let spec = SphereSpec::new(center, radius_sq, BoundingBox::grid(n as i64, d))?;
    let points = sphere_section(&spec);
    let mut params = BTreeMap::new();
    params.insert("n".into(), json!(n));
    params.insert("d".into(), json!(d));
    params.insert("strategy".into(), json!("fixed-radius"));
    params.insert("center".into(), json!(fmt_center(center)));
    params.insert("r2".into(), json!(fmt_rational(radius_sq)));
    ConstructionReport::new(Method::Sphere, params, points, n, d)
}

/// Erdős construction report for the `n × n` grid.
pub fn erdos_report(n: u64) -> Result<ConstructionReport> {
    let (points, p) = erdos_clipped(n)?;
    let mut params = BTreeMap::new();
    params.insert("n".into(), json!(n));
    params.insert("d".into(), json!(2));
    params.insert("p".into(), json!(p));
    ConstructionReport::new(Method::Erdos, params, points, n, 2)
}

/// Grid cells of `{1..n}^d` in the order greedy visits them: lexicographic
/// for seed 0, otherwise a ChaCha8 shuffle seeded with `seed`.
pub fn greedy_order(n: u64, d: usize, seed: u64) -> Vec<GridPoint> {
    let mut cells: Vec<GridPoint> = grid_points(n as i64, d).collect();
    if seed != 0 {
        cells.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    cells
}

/// Incrementally grown no-three-in-line set. Each member keeps the primitive
/// directions to every other member.
#[derive(Default)]
pub(crate) struct DirectionIndex {
    points: Vec<Vec<i64>>,
    dirs: Vec<HashSet<Direction>>,
}

impl DirectionIndex {
    /// Whether `c` forms a collinear triple with two members.
    pub(crate) fn blocked(&self, c: &[i64]) -> bool {
        self.points
            .iter()
            .zip(&self.dirs)
            .any(|(p, ds)| p.as_slice() != c && ds.contains(&direction_between(p, c)))
    }

    pub(crate) fn insert(&mut self, c: &[i64]) {
        let mut own = HashSet::with_capacity(self.points.len());
        for (p, ds) in self.points.iter().zip(self.dirs.iter_mut()) {
            let dir = direction_between(p, c);
            ds.insert(dir.clone());
            own.insert(dir);
        }
        self.points.push(c.to_vec());
        self.dirs.push(own);
    }

    pub(crate) fn contains(&self, c: &[i64]) -> bool {
        self.points.iter().any(|p| p.as_slice() == c)
    }
}

/// Greedy filler: visits cells in [`greedy_order`] and keeps every cell that
/// creates no collinear triple. The result is maximal.
pub fn greedy(n: u64, d: usize, seed: u64) -> Result<ConstructionReport> {
    if n < 2 || d < 2 {
        return Err(Error::Domain(format!("greedy needs n >= 2 and d >= 2, got n={n} d={d}")));
    }
    let mut index = DirectionIndex::default();
    for cell in greedy_order(n, d, seed) {
        if !index.blocked(cell.coords()) {
            index.insert(cell.coords());
        }
    }
    let mut pts: Vec<GridPoint> = index
        .points
        .into_iter()
        .map(|c| GridPoint::new(c).expect("grid cell"))
        .collect();
    pts.sort();
    let points = PointSet::new(d, BoundingBox::grid(n as i64, d), pts)?;
    let mut params = BTreeMap::new();
    params.insert("n".into(), json!(n));
    params.insert("d".into(), json!(d));
    params.insert("seed".into(), json!(seed));
    ConstructionReport::new(Method::Greedy, params, points, n, d)
}

/// Admissible grid points of the ball induced (at scale 1) by `x`: the grid
/// cells of `{1..n}^d` on its boundary sphere.
pub fn admissible_grid_points(x: &[i64], n: u64) -> Vec<GridPoint> {
    // scale by D = lcm(2·x_i) so the center (x_i² + 1) / (2 x_i) is integral
    let den = x.iter().fold(1i128, |acc, &xi| {
        num_integer::Integer::lcm(&acc, &(2 * xi as i128))
    });
    let center: Vec<i128> = x
        .iter()
        .map(|&xi| (xi as i128 * xi as i128 + 1) * (den / (2 * xi as i128)))
        .collect();
    let dist = |z: &[i64]| -> i128 {
        z.iter()
            .zip(&center)
            .map(|(&zi, c)| {
                let t = den * zi as i128 - c;
                t * t
            })
            .sum()
    };
    let radius = dist(x);
    grid_points(n as i64, x.len())
        .filter(|z| dist(z.coords()) == radius)
        .collect()
}

/// Realizes the ball-counting construction on the grid: among generators
/// `x ∈ {1..n}^d` with distinct coordinates, takes the induced ball with the
/// most admissible grid points (ties to the lexicographically first `x`).
pub fn paper_construction(n: u64, d: usize) -> Result<ConstructionReport> {
    if n < d as u64 || d < 2 {
        return Err(Error::Domain(format!(
            "ball-counting construction needs d >= 2 distinct coordinates in 1..={n}"
        )));
    }
    let values: Vec<Rational> = (1..=n as i64).map(crate::rational::int).collect();
    let generators: Vec<Vec<i64>> = crate::claims::distinct_tuples(&values, d)
        .into_iter()
        .map(|t| t.iter().map(|v| v.to_integer().to_i64().expect("small")).collect())
        .collect();
    let (x, pts) = generators
        .into_par_iter()
        .map(|x| {
            let pts = admissible_grid_points(&x, n);
            (x, pts)
        })
        .min_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)))
        .expect("at least one generator");
    let points = PointSet::new(d, BoundingBox::grid(n as i64, d), pts)?;
    let mut params = BTreeMap::new();
    params.insert("n".into(), json!(n));
    params.insert("d".into(), json!(d));
    params.insert("generator".into(), json!(x));
    params.insert("scale".into(), json!("1"));
    ConstructionReport::new(Method::Paper, params, points, n, d)
}
