//! The compression calculus over exact rationals: the compression map, its
//! mass and gap, the induced ball, admissible points and compression lines.
//!
//! Every comparison works on squared quantities so no square root is ever
//! taken and equality (admissibility) stays decidable.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fraction_sum, int, is_positive_integer, Rational};
use crate::geometry::RationalVector;

/// Euler–Mascheroni constant as used by the harmonic estimate check.
pub const EULER_GAMMA: f64 = 0.5772156649;

/// A positive rational compression scale.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompressionScale {
    #[serde(with = "crate::rational::as_string")]
    m: Rational,
    /// When set, ball geometry additionally requires `m <= 1`.
    pub strict_unit_range: bool,
}

impl CompressionScale {
    pub fn new(m: Rational) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::Domain(format!("compression scale must be positive, got {m}")));
        }
        Ok(CompressionScale { m, strict_unit_range: false })
    }

    /// A scale restricted to `0 < m <= 1` for ball geometry.
    pub fn unit_range(m: Rational) -> Result<Self> {
        let s = CompressionScale::new(m)?;
        if s.m > Rational::one() {
            return Err(Error::Domain(format!("scale {} exceeds 1 in unit-range mode", s.m)));
        }
        Ok(CompressionScale { strict_unit_range: true, ..s })
    }

    pub fn one() -> Self {
        CompressionScale::new(Rational::one()).expect("1 is positive")
    }

    pub fn value(&self) -> &Rational {
        &self.m
    }
}

/// A vector in the compression domain: nonzero, pairwise distinct
/// coordinates, dimension at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompressionVector(RationalVector);

impl CompressionVector {
    pub fn new(v: RationalVector) -> Result<Self> {
        if v.dim() < 2 {
            return Err(Error::Domain(format!("compression needs dimension >= 2, got {}", v.dim())));
        }
        if v.coords().iter().any(|c| c.is_zero()) {
            return Err(Error::Domain(format!("zero coordinate in {v}")));
        }
        let mut seen = HashSet::with_capacity(v.dim());
        if !v.coords().iter().all(|c| seen.insert(c)) {
            return Err(Error::Domain(format!("repeated coordinate in {v}")));
        }
        Ok(CompressionVector(v))
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        CompressionVector::new(RationalVector::from_ints(coords))
    }

    pub fn from_rationals(coords: Vec<Rational>) -> Result<Self> {
        CompressionVector::new(RationalVector(coords))
    }

    pub fn as_vector(&self) -> &RationalVector {
        &self.0
    }

    pub fn coords(&self) -> &[Rational] {
        self.0.coords()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// `(m/x_1, ..., m/x_n)`.
pub fn compress(x: &CompressionVector, m: &CompressionScale) -> RationalVector {
    RationalVector(x.coords().iter().map(|c| m.value() / c).collect())
}

/// [`compress`] returning a domain vector; the map preserves nonzero and
/// distinct coordinates.
pub fn compress_vector(x: &CompressionVector, m: &CompressionScale) -> CompressionVector {
    CompressionVector(compress(x, m))
}

fn mass_raw(coords: &[Rational], m: &Rational) -> Rational {
    m * fraction_sum(coords.iter().map(|c| (c.denom().clone(), c.numer().clone())))
}

/// `Σ m/x_i`.
pub fn mass(x: &CompressionVector, m: &CompressionScale) -> Rational {
    mass_raw(x.coords(), m.value())
}

/// `‖x − V_m[x]‖²` by definition.
pub fn gap_squared_direct(x: &CompressionVector, m: &CompressionScale) -> Rational {
    // p/q − (a/b)/(p/q) = (b·p² − a·q²) / (b·p·q)
    let (a, b) = (m.value().numer(), m.value().denom());
    fraction_sum(x.coords().iter().map(|c| {
        let (p, q) = (c.numer(), c.denom());
        let t = b * p * p - a * q * q;
        let u = b * p * q;
        (&t * &t, &u * &u)
    }))
}

/// The same quantity through masses of unit compressions:
/// `M∘V_1[(1/x_i²)] + m²·M∘V_1[(x_i²)] − 2mn`.
pub fn gap_squared_identity(x: &CompressionVector, m: &CompressionScale) -> Rational {
    let squares = || x.coords().iter().map(|c| (c.numer() * c.numer(), c.denom() * c.denom()));
    let m = m.value();
    let n = int(x.dim() as i64);
    fraction_sum(squares()) + m * m * fraction_sum(squares().map(|(p2, q2)| (q2, p2))) - int(2) * m * n
}

/// Squared gap, evaluated by definition and by the mass identity. A mismatch
/// is reported as [`Error::Internal`].
pub fn gap_squared(x: &CompressionVector, m: &CompressionScale) -> Result<Rational> {
    let direct = gap_squared_direct(x, m);
    let identity = gap_squared_identity(x, m);
    if direct != identity {
        return Err(Error::Internal(format!(
            "gap identity mismatch for {}: {direct} != {identity}",
            x.as_vector()
        )));
    }
    Ok(direct)
}

/// A closed rational interval `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: Rational,
    pub upper: Rational,
}

impl Interval {
    pub fn contains(&self, v: &Rational) -> bool {
        &self.lower <= v && v <= &self.upper
    }
}

/// Sup, inf and dimension of a vector of distinct positive integers.
fn integer_extent(x: &CompressionVector) -> Result<(BigInt, BigInt, usize)> {
    if !x.coords().iter().all(is_positive_integer) {
        return Err(Error::Domain(format!(
            "finite-sum bounds need distinct positive integers, got {}",
            x.as_vector()
        )));
    }
    let sup = x.coords().iter().max().expect("dim >= 2").to_integer();
    let inf = x.coords().iter().min().expect("dim >= 2").to_integer();
    Ok((sup, inf, x.dim()))
}

fn reciprocal_sum(terms: impl Iterator<Item = BigInt>, power: u32) -> Rational {
    fraction_sum(terms.map(|t| (BigInt::one(), num_traits::pow(t, power as usize))))
}

/// `[m·Σ_{k<n} 1/(sup−k), m·Σ_{k<n} 1/(inf+k)]`, which brackets the mass of
/// any vector of distinct positive integers.
pub fn mass_bounds(x: &CompressionVector, m: &CompressionScale) -> Result<Interval> {
    let (sup, inf, n) = integer_extent(x)?;
    let m = m.value();
    let lower = m * reciprocal_sum((0..n).map(|k| &sup - k), 1);
    let upper = m * reciprocal_sum((0..n).map(|k| &inf + k), 1);
    Ok(Interval { lower, upper })
}

/// Finite bracket of the squared gap:
/// upper `n·sup² + m²·Σ 1/(inf+k)² − 2mn`, lower `n·inf² + m²·Σ 1/(sup−k)² − 2mn`.
pub fn gap_sq_bounds(x: &CompressionVector, m: &CompressionScale) -> Result<Interval> {
    let (sup, inf, n) = integer_extent(x)?;
    let m = m.value();
    let nn = int(n as i64);
    let two_mn = int(2) * m * &nn;
    let m2 = m * m;
    let upper = &nn * Rational::from_integer(&sup * &sup)
        + &m2 * reciprocal_sum((0..n).map(|k| &inf + k), 2)
        - &two_mn;
    let lower = &nn * Rational::from_integer(&inf * &inf)
        + &m2 * reciprocal_sum((0..n).map(|k| &sup - k), 2)
        - &two_mn;
    Ok(Interval { lower, upper })
}

/// Running harmonic sums `H(1), H(2), ...` kept over the common denominator
/// `lcm(1..N)`, so each step costs one small multiply and divide.
pub struct HarmonicSums {
    n: u64,
    numer: BigInt,
    denom: BigInt,
}

impl HarmonicSums {
    pub fn new() -> Self {
        HarmonicSums { n: 0, numer: BigInt::zero(), denom: BigInt::one() }
    }
}

impl Default for HarmonicSums {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for HarmonicSums {
    /// `(N, numerator, denominator)` with `H(N) = numerator / denominator`,
    /// not necessarily reduced.
    type Item = (u64, BigInt, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        self.n += 1;
        // gcd(denom, n) = gcd(denom mod n, n), all in machine words
        let r = (&self.denom % self.n).to_u64().expect("remainder below n");
        let factor = BigInt::from(self.n / num_integer::Integer::gcd(&r, &self.n));
        self.denom *= &factor;
        self.numer = &self.numer * &factor + &self.denom / self.n;
        Some((self.n, self.numer.clone(), self.denom.clone()))
    }
}

/// `H(N) = Σ_{k≤N} 1/k` exactly.
pub fn harmonic_sum(n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Domain("harmonic sum needs N >= 1".into()));
    }
    let (_, num, den) = HarmonicSums::new().nth((n - 1) as usize).expect("infinite iterator");
    Ok(Rational::new(num, den))
}

/// `|H(N) − ln N − γ|` with the exact sum rounded to `f64` once.
pub fn harmonic_error(n: u64, numer: &BigInt, denom: &BigInt) -> f64 {
    let h = Rational::new_raw(numer.clone(), denom.clone())
        .to_f64()
        .unwrap_or(f64::NAN);
    (h - (n as f64).ln() - EULER_GAMMA).abs()
}

/// Whether `|H(N) − ln N − γ| < 1/N`.
pub fn harmonic_estimate_holds(n: u64) -> Result<bool> {
    let h = harmonic_sum(n)?;
    Ok(harmonic_error(n, h.numer(), h.denom()) < 1.0 / n as f64)
}

/// The open ball induced by a vector: centered at `(x + V_m[x]) / 2` with
/// radius half the gap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: RationalVector,
    pub radius_sq: Rational,
    pub generator: CompressionVector,
    pub scale: CompressionScale,
}

impl Ball {
    /// Same center and radius, whatever the generators.
    pub fn same_ball(&self, other: &Ball) -> bool {
        self.center == other.center && self.radius_sq == other.radius_sq
    }

    fn dist_sq(&self, z: &RationalVector) -> Result<Rational> {
        if z.dim() != self.center.dim() {
            return Err(Error::ContractViolation(format!(
                "point of dimension {} against a ball of dimension {}",
                z.dim(),
                self.center.dim()
            )));
        }
        Ok(z.dist_sq(&self.center))
    }
}

pub fn ball_of(x: &CompressionVector, m: &CompressionScale) -> Result<Ball> {
    if m.strict_unit_range && m.value() > &Rational::one() {
        return Err(Error::Domain(format!("ball geometry requires m <= 1, got {}", m.value())));
    }
    let g2 = gap_squared(x, m)?;
    if g2.is_zero() {
        return Err(Error::DegenerateBall(x.as_vector().to_string()));
    }
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let center = RationalVector(
        x.coords()
            .iter()
            .map(|c| (c + m.value() / c) * &half)
            .collect(),
    );
    Ok(Ball {
        center,
        radius_sq: g2 / int(4),
        generator: x.clone(),
        scale: m.clone(),
    })
}

/// Strict membership `‖z − center‖² < radius²`.
pub fn ball_contains(b: &Ball, z: &RationalVector) -> Result<bool> {
    Ok(b.dist_sq(z)? < b.radius_sq)
}

/// Admissibility: `‖z − center‖² = radius²` exactly.
pub fn on_boundary(b: &Ball, z: &RationalVector) -> Result<bool> {
    Ok(b.dist_sq(z)? == b.radius_sq)
}

/// Squared distance from `z` to the ball's center.
pub fn center_dist_sq(b: &Ball, z: &RationalVector) -> Result<Rational> {
    b.dist_sq(z)
}

/// The line through `x` and `V_m[x]`, parametrised as `x + λ(x − V_m[x])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressionLine {
    pub base: CompressionVector,
    pub direction: RationalVector,
    pub scale: CompressionScale,
}

pub fn line_of(x: &CompressionVector, m: &CompressionScale) -> Result<CompressionLine> {
    let direction = x.as_vector().sub(&compress(x, m));
    if direction.coords().iter().all(|c| c.is_zero()) {
        return Err(Error::DegenerateLine(x.as_vector().to_string()));
    }
    Ok(CompressionLine { base: x.clone(), direction, scale: m.clone() })
}

pub fn line_point(l: &CompressionLine, lambda: &Rational) -> RationalVector {
    RationalVector(
        l.base
            .coords()
            .iter()
            .zip(l.direction.coords())
            .map(|(b, d)| b + lambda * d)
            .collect(),
    )
}

/// Whether `a − base` is a rational multiple of the direction.
pub fn line_contains(l: &CompressionLine, a: &RationalVector) -> Result<bool> {
    if a.dim() != l.direction.dim() {
        return Err(Error::ContractViolation(format!(
            "point of dimension {} against a line in dimension {}",
            a.dim(),
            l.direction.dim()
        )));
    }
    let offset = a.sub(l.base.as_vector());
    let (u, v) = (offset.coords(), l.direction.coords());
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn cv(c: &[i64]) -> CompressionVector {
        CompressionVector::from_ints(c).unwrap()
    }

    fn scale(n: i64, d: i64) -> CompressionScale {
        CompressionScale::new(rat(n, d)).unwrap()
    }

    fn rv(c: &[(i64, i64)]) -> RationalVector {
        RationalVector(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn domain_is_enforced() {
        assert!(matches!(CompressionVector::from_ints(&[1, 0]), Err(Error::Domain(_))));
        assert!(matches!(CompressionVector::from_ints(&[2, 2]), Err(Error::Domain(_))));
        assert!(matches!(CompressionVector::from_ints(&[2]), Err(Error::Domain(_))));
        assert!(CompressionScale::new(rat(0, 1)).is_err());
        assert!(CompressionScale::new(rat(-1, 2)).is_err());
        assert!(CompressionScale::unit_range(rat(3, 2)).is_err());
        assert!(CompressionScale::unit_range(rat(1, 1)).is_ok());
    }

    #[test]
    fn compress_examples() {
        assert_eq!(compress(&cv(&[1, 2, 4]), &scale(2, 1)), rv(&[(2, 1), (1, 1), (1, 2)]));
        assert_eq!(compress(&cv(&[2, 3]), &scale(1, 1)), rv(&[(1, 2), (1, 3)]));
        let m = scale(7, 2);
        let once = compress_vector(&cv(&[3, 5]), &m);
        assert_eq!(compress(&once, &m), RationalVector::from_ints(&[3, 5]));
    }

    #[test]
    fn mass_examples() {
        assert_eq!(mass(&cv(&[1, 2, 4]), &scale(1, 1)), rat(7, 4));
        assert_eq!(mass(&cv(&[1, 2, 4]), &scale(3, 1)), rat(21, 4));
        assert_eq!(mass(&cv(&[3, 5, 9]), &scale(1, 1)), rat(29, 45));
    }

    #[test]
    fn gap_examples() {
        let one = CompressionScale::one();
        assert_eq!(gap_squared(&cv(&[1, 2]), &one).unwrap(), rat(9, 4));
        assert_eq!(gap_squared(&cv(&[2, 3]), &one).unwrap(), rat(337, 36));
        assert_eq!(gap_squared(&cv(&[1, 8]), &one).unwrap(), rat(3969, 64));
    }

    #[test]
    fn mass_bounds_examples() {
        let one = CompressionScale::one();
        let b = mass_bounds(&cv(&[3, 5, 9]), &one).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (rat(191, 504), rat(47, 60)));
        assert!(b.contains(&rat(29, 45)));
        let b = mass_bounds(&cv(&[1, 2]), &one).unwrap();
        assert_eq!((b.lower, b.upper), (rat(3, 2), rat(3, 2)));
        let b = mass_bounds(&cv(&[2, 4]), &scale(2, 1)).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (rat(7, 6), rat(5, 3)));
        assert!(b.contains(&mass(&cv(&[2, 4]), &scale(2, 1))));
    }

    #[test]
    fn bounds_reject_non_integers() {
        let x = CompressionVector::from_rationals(vec![rat(1, 2), rat(3, 1)]).unwrap();
        assert!(matches!(mass_bounds(&x, &CompressionScale::one()), Err(Error::Domain(_))));
        assert!(matches!(gap_sq_bounds(&x, &CompressionScale::one()), Err(Error::Domain(_))));
        let neg = cv(&[-1, 3]);
        assert!(mass_bounds(&neg, &CompressionScale::one()).is_err());
    }

    #[test]
    fn gap_bounds_examples() {
        let one = CompressionScale::one();
        let b = gap_sq_bounds(&cv(&[1, 2]), &one).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (rat(-3, 4), rat(21, 4)));
        assert!(b.contains(&rat(9, 4)));
        let b = gap_sq_bounds(&cv(&[2, 3]), &one).unwrap();
        assert!(b.contains(&rat(337, 36)));
        let b = gap_sq_bounds(&cv(&[5, 6]), &one).unwrap();
        let g = rat(24, 5) * rat(24, 5) + rat(35, 6) * rat(35, 6);
        assert_eq!(gap_squared(&cv(&[5, 6]), &one).unwrap(), g);
        assert!(b.lower < g && g < b.upper);
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_sum(1).unwrap(), rat(1, 1));
        assert_eq!(harmonic_sum(4).unwrap(), rat(25, 12));
        assert!(harmonic_sum(0).is_err());
        let h = harmonic_sum(100).unwrap();
        let hf = h.to_f64().unwrap();
        assert!((hf - 5.18738).abs() < 1e-5);
        let err = harmonic_error(100, h.numer(), h.denom());
        assert!((err - 0.00499).abs() < 1e-5, "{err}");
        assert!(harmonic_estimate_holds(100).unwrap());
    }

    #[test]
    fn ball_examples() {
        let one = CompressionScale::one();
        let b = ball_of(&cv(&[2, 3]), &one).unwrap();
        assert_eq!(b.center, rv(&[(5, 4), (5, 3)]));
        assert_eq!(b.radius_sq, rat(337, 144));
        let b = ball_of(&cv(&[1, 8]), &one).unwrap();
        assert_eq!(b.center, rv(&[(1, 1), (65, 16)]));
        assert_eq!(b.radius_sq, rat(3969, 256));
        let b = ball_of(&cv(&[1, 2]), &one).unwrap();
        assert_eq!(b.center, rv(&[(1, 1), (5, 4)]));
        assert_eq!(b.radius_sq, rat(9, 16));
    }

    #[test]
    fn degenerate_ball_is_rejected() {
        // every x_i^2 = m
        let m = scale(4, 1);
        let x = cv(&[2, -2]);
        assert!(matches!(ball_of(&x, &m), Err(Error::DegenerateBall(_))));
        assert!(matches!(line_of(&x, &m), Err(Error::DegenerateLine(_))));
    }

    #[test]
    fn strict_scale_rejects_large_m_for_balls() {
        let mut m = scale(2, 1);
        m.strict_unit_range = true;
        assert!(matches!(ball_of(&cv(&[2, 3]), &m), Err(Error::Domain(_))));
    }

    #[test]
    fn membership_examples() {
        let one = CompressionScale::one();
        let b = ball_of(&cv(&[1, 8]), &one).unwrap();
        assert!(ball_contains(&b, &rv(&[(1, 1), (65, 16)])).unwrap());
        assert_eq!(center_dist_sq(&b, &RationalVector::from_ints(&[4, 7])).unwrap(), rat(4513, 256));
        assert!(!ball_contains(&b, &RationalVector::from_ints(&[4, 7])).unwrap());
        let b = ball_of(&cv(&[2, 3]), &one).unwrap();
        assert!(!ball_contains(&b, &RationalVector::from_ints(&[100, 100])).unwrap());
        assert!(ball_contains(&b, &RationalVector::from_ints(&[1, 2, 3])).is_err());
    }

    #[test]
    fn boundary_examples() {
        let one = CompressionScale::one();
        let b = ball_of(&cv(&[2, 3]), &one).unwrap();
        assert!(on_boundary(&b, &RationalVector::from_ints(&[2, 3])).unwrap());
        assert!(on_boundary(&b, &rv(&[(1, 2), (3, 1)])).unwrap());
        assert!(!on_boundary(&b, &RationalVector::from_ints(&[2, 4])).unwrap());
        assert!(!ball_contains(&b, &RationalVector::from_ints(&[2, 3])).unwrap());
    }

    #[test]
    fn line_examples() {
        let one = CompressionScale::one();
        let l = line_of(&cv(&[2, 3]), &one).unwrap();
        assert_eq!(line_point(&l, &rat(0, 1)), RationalVector::from_ints(&[2, 3]));
        let back = line_point(&l, &rat(-1, 1));
        assert_eq!(back, rv(&[(1, 2), (1, 3)]));
        assert!(line_contains(&l, &back).unwrap());
        assert!(!line_contains(&l, &rv(&[(2, 7), (3, 17)])).unwrap());
        assert_eq!(line_point(&l, &rat(1, 1)), rv(&[(7, 2), (17, 3)]));
    }
}
