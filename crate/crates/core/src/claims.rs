//! Exhaustive counterexample search for the theorem-level statements of the
//! compression calculus.
//!
//! Every sweep enumerates its domain in lexicographic order, checks each
//! equivalence direction separately and emits a [`ClaimReport`]. Counterexamples
//! carry their inputs and the evaluated sides, and [`reverify`] recomputes
//! them from scratch.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compression::{
    ball_contains, ball_of, center_dist_sq, compress, compress_vector, gap_squared, line_contains,
    line_of, line_point, on_boundary, Ball, CompressionScale, CompressionVector,
};
use crate::error::{Error, Result};
use crate::geometry::RationalVector;
use crate::rational::{fmt_rational, int, rat, Rational};

/// Counterexample lists are cut to this length; the total is still reported.
pub const MAX_COUNTEREXAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimId {
    Involution,
    Decider,
    Ballnest,
    Admissible,
    Cornerstone,
    Gapshell,
}

impl ClaimId {
    pub const ALL: [ClaimId; 6] = [
        ClaimId::Involution,
        ClaimId::Decider,
        ClaimId::Ballnest,
        ClaimId::Admissible,
        ClaimId::Cornerstone,
        ClaimId::Gapshell,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClaimId::Involution => "involution",
            ClaimId::Decider => "decider",
            ClaimId::Ballnest => "ballnest",
            ClaimId::Admissible => "admissible",
            ClaimId::Cornerstone => "cornerstone",
            ClaimId::Gapshell => "gapshell",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClaimId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown claim {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoordinateKind {
    /// Strictly increasing tuples over `{1..max_coord}`.
    #[serde(rename = "distinct-naturals")]
    DistinctNaturals,
    /// Ordered tuples of distinct values from `{k, m/k : 1 <= k <= max_coord}`.
    #[serde(rename = "rationals-from-grid")]
    RationalsFromGrid,
    /// Ordered tuples of distinct values from `{1..max_coord}`, i.e. the grid
    /// `{1..n}^d` restricted to the compression domain.
    #[serde(rename = "grid-tuples")]
    GridTuples,
}

/// Search domain of a claim sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimDomain {
    pub dim: usize,
    pub max_coord: u64,
    #[serde(with = "scale_as_string")]
    pub scale: CompressionScale,
    pub kind: CoordinateKind,
}

mod scale_as_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &CompressionScale, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::as_string::serialize(m.value(), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CompressionScale, D::Error> {
        let m = crate::rational::as_string::deserialize(d)?;
        CompressionScale::new(m).map_err(serde::de::Error::custom)
    }
}

impl ClaimDomain {
    pub fn new(dim: usize, max_coord: u64, scale: CompressionScale, kind: CoordinateKind) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("claim domains need dimension >= 2, got {dim}")));
        }
        if max_coord == 0 {
            return Err(Error::Domain("max_coord must be positive".into()));
        }
        if kind == CoordinateKind::DistinctNaturals && (max_coord as usize) < dim {
            return Err(Error::Domain(format!(
                "max_coord {max_coord} < dimension {dim}: no distinct naturals fit"
            )));
        }
        Ok(ClaimDomain { dim, max_coord, scale, kind })
    }

    /// Distinct-naturals domain at scale `m`.
    pub fn naturals(dim: usize, max_coord: u64, m: Rational) -> Result<Self> {
        ClaimDomain::new(dim, max_coord, CompressionScale::new(m)?, CoordinateKind::DistinctNaturals)
    }

    /// All vectors of the domain in lexicographic order.
    pub fn vectors(&self) -> Vec<CompressionVector> {
        let k = self.max_coord as i64;
        let tuples: Vec<Vec<Rational>> = match self.kind {
            CoordinateKind::DistinctNaturals => increasing_tuples(k, self.dim)
                .into_iter()
                .map(|t| t.into_iter().map(int).collect())
                .collect(),
            CoordinateKind::GridTuples => {
                let values: Vec<Rational> = (1..=k).map(int).collect();
                distinct_tuples(&values, self.dim)
            }
            CoordinateKind::RationalsFromGrid => {
                let mut values: Vec<Rational> = (1..=k)
                    .flat_map(|j| [int(j), self.scale.value() / int(j)])
                    .collect();
                values.sort();
                values.dedup();
                distinct_tuples(&values, self.dim)
            }
        };
        tuples
            .into_iter()
            .map(|t| CompressionVector::from_rationals(t).expect("domain tuples are valid"))
            .collect()
    }
}

/// Strictly increasing `d`-tuples over `{1..k}` in lexicographic order.
pub fn increasing_tuples(k: i64, d: usize) -> Vec<Vec<i64>> {
    fn rec(start: i64, k: i64, d: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        let left = (d - cur.len()) as i64;
        for v in start..=k - left + 1 {
            cur.push(v);
            rec(v + 1, k, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, k, d, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Ordered `d`-tuples of distinct entries of `values`, lexicographic by index.
pub fn distinct_tuples(values: &[Rational], d: usize) -> Vec<Vec<Rational>> {
    fn rec(values: &[Rational], d: usize, used: &mut [bool], cur: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in 0..values.len() {
            if !used[i] {
                used[i] = true;
                cur.push(values[i].clone());
                rec(values, d, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(values, d, &mut vec![false; values.len()], &mut Vec::new(), &mut out);
    out
}

/// Which half of an equivalence failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// The left side holds but the right does not.
    Forward,
    /// The right side holds but the left does not.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Vector(RationalVector),
    Scalar(#[serde(with = "crate::rational::as_string")] Rational),
}

impl WitnessValue {
    pub fn as_vector(&self) -> Option<&RationalVector> {
        match self {
            WitnessValue::Vector(v) => Some(v),
            WitnessValue::Scalar(_) => None,
        }
    }

    pub fn as_scalar(&self) -> Option<&Rational> {
        match self {
            WitnessValue::Scalar(s) => Some(s),
            WitnessValue::Vector(_) => None,
        }
    }
}

impl From<RationalVector> for WitnessValue {
    fn from(v: RationalVector) -> Self {
        WitnessValue::Vector(v)
    }
}

impl From<Rational> for WitnessValue {
    fn from(r: Rational) -> Self {
        WitnessValue::Scalar(r)
    }
}

/// One violation: the inputs (`witness`) and the two evaluated sides.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub witness: BTreeMap<String, WitnessValue>,
    pub direction: Side,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip)]
    sort_key: Vec<Rational>,
}

impl PartialEq for Counterexample {
    fn eq(&self, other: &Self) -> bool {
        self.witness == other.witness
            && self.direction == other.direction
            && self.lhs == other.lhs
            && self.rhs == other.rhs
    }
}

impl Eq for Counterexample {}

impl Counterexample {
    fn new(key_symbols: &[&str], witness: Vec<(&str, WitnessValue)>, direction: Side, lhs: String, rhs: String) -> Self {
        let witness: BTreeMap<String, WitnessValue> =
            witness.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let sort_key = key_symbols
            .iter()
            .flat_map(|s| match &witness[*s] {
                WitnessValue::Vector(v) => v.coords().to_vec(),
                WitnessValue::Scalar(r) => vec![r.clone()],
            })
            .collect();
        Counterexample { witness, direction, lhs, rhs, sort_key }
    }

    pub fn vector(&self, symbol: &str) -> Result<&RationalVector> {
        self.witness
            .get(symbol)
            .and_then(WitnessValue::as_vector)
            .ok_or_else(|| Error::ContractViolation(format!("witness lacks vector {symbol:?}")))
    }

    pub fn scalar(&self, symbol: &str) -> Result<&Rational> {
        self.witness
            .get(symbol)
            .and_then(WitnessValue::as_scalar)
            .ok_or_else(|| Error::ContractViolation(format!("witness lacks scalar {symbol:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimVerdict {
    #[serde(rename = "no-counterexample-found")]
    NoCounterexampleFound,
    #[serde(rename = "refuted")]
    Refuted,
}

/// Gap-shell scan results: members at the target and the nearest achieved
/// squared gaps on either side (distinct values, lexicographically smallest
/// representative each).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapShell {
    #[serde(with = "crate::rational::as_string")]
    pub target: Rational,
    pub members: Vec<RationalVector>,
    pub nearest_below: Vec<ShellNeighbor>,
    pub nearest_above: Vec<ShellNeighbor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellNeighbor {
    pub x: RationalVector,
    #[serde(with = "crate::rational::as_string")]
    pub gap_sq: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub domain: ClaimDomain,
    pub cases_checked: u64,
    pub verdict: ClaimVerdict,
    pub counterexamples: Vec<Counterexample>,
    pub truncated: bool,
    pub total_counterexamples: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_shell: Option<GapShell>,
}

impl ClaimReport {
    fn assemble(claim: ClaimId, domain: ClaimDomain, cases_checked: u64, mut found: Vec<Counterexample>) -> Self {
        found.sort_by(|a, b| a.sort_key.cmp(&b.sort_key).then(a.direction.cmp(&b.direction)));
        let total = found.len() as u64;
        let truncated = found.len() > MAX_COUNTEREXAMPLES;
        found.truncate(MAX_COUNTEREXAMPLES);
        let verdict = if found.is_empty() {
            ClaimVerdict::NoCounterexampleFound
        } else {
            ClaimVerdict::Refuted
        };
        ClaimReport {
            claim,
            domain,
            cases_checked,
            verdict,
            counterexamples: found,
            truncated,
            total_counterexamples: total,
            skipped: None,
            gap_shell: None,
        }
    }

    pub fn is_refuted(&self) -> bool {
        self.verdict == ClaimVerdict::Refuted
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn fmt_bool(b: bool) -> String {
    b.to_string()
}

fn require_kind(domain: &ClaimDomain, kind: CoordinateKind, claim: ClaimId) -> Result<()> {
    if domain.kind != kind {
        return Err(Error::Domain(format!(
            "claim {claim} needs a {kind:?} domain, got {:?}",
            domain.kind
        )));
    }
    Ok(())
}

/// The generator and its image must both sit on the boundary of the induced
/// ball. Checked before every ball sweep.
fn sanity_check(x: &CompressionVector, ball: &Ball, m: &CompressionScale) -> Result<()> {
    if !on_boundary(ball, x.as_vector())? || !on_boundary(ball, &compress(x, m))? {
        return Err(Error::Internal(format!(
            "generator {} or its image is not on its own ball boundary",
            x.as_vector()
        )));
    }
    Ok(())
}

struct Prepared {
    x: CompressionVector,
    gap_sq: Rational,
    ball: Ball,
}

fn prepare(domain: &ClaimDomain) -> Result<Vec<Prepared>> {
    let m = &domain.scale;
    domain
        .vectors()
        .into_par_iter()
        .map(|x| {
            let gap_sq = gap_squared(&x, m)?;
            let ball = ball_of(&x, m)?;
            sanity_check(&x, &ball, m)?;
            Ok(Prepared { x, gap_sq, ball })
        })
        .collect()
}

/// `V_m ∘ V_m = id` over the domain.
pub fn check_involution(domain: &ClaimDomain) -> Result<ClaimReport> {
    let m = &domain.scale;
    let vectors = domain.vectors();
    let found: Vec<Counterexample> = vectors
        .par_iter()
        .filter_map(|x| {
            let back = compress(&compress_vector(x, m), m);
            (&back != x.as_vector()).then(|| {
                Counterexample::new(
                    &["x"],
                    vec![("x", x.as_vector().clone().into()), ("image", back.clone().into())],
                    Side::Forward,
                    back.to_string(),
                    x.as_vector().to_string(),
                )
            })
        })
        .collect();
    Ok(ClaimReport::assemble(ClaimId::Involution, domain.clone(), vectors.len() as u64, found))
}

fn decider_case(y: &Prepared, z: &Prepared) -> Result<Option<Counterexample>> {
    let inside = ball_contains(&y.ball, z.x.as_vector())?;
    let smaller = z.gap_sq < y.gap_sq;
    let side = match (inside, smaller) {
        (true, false) => Side::Forward,
        (false, true) => Side::Backward,
        _ => return Ok(None),
    };
    Ok(Some(Counterexample::new(
        &["y", "z"],
        vec![
            ("y", y.x.as_vector().clone().into()),
            ("z", z.x.as_vector().clone().into()),
            ("gap_sq_y", y.gap_sq.clone().into()),
            ("gap_sq_z", z.gap_sq.clone().into()),
            ("dist_sq", center_dist_sq(&y.ball, z.x.as_vector())?.into()),
            ("radius_sq", y.ball.radius_sq.clone().into()),
        ],
        side,
        fmt_bool(inside),
        fmt_bool(smaller),
    )))
}

/// `z ∈ B(y)  ⟺  gap²(z) < gap²(y)` over ordered pairs of distinct domain
/// vectors.
pub fn check_decider(domain: &ClaimDomain) -> Result<ClaimReport> {
    require_kind(domain, CoordinateKind::DistinctNaturals, ClaimId::Decider)?;
    let prepared = prepare(domain)?;
    let per_y: Vec<Vec<Counterexample>> = prepared
        .par_iter()
        .enumerate()
        .map(|(i, y)| {
            let mut out = Vec::new();
            for (j, z) in prepared.iter().enumerate() {
                if i != j {
                    out.extend(decider_case(y, z)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let n = prepared.len() as u64;
    let cases = n * n.saturating_sub(1);
    Ok(ClaimReport::assemble(ClaimId::Decider, domain.clone(), cases, per_y.into_iter().flatten().collect()))
}

/// Whether the open ball `inner` lies inside the open ball `outer`:
/// `r_in <= r_out` and `|c_in − c_out| <= r_out − r_in`, decided on squares.
pub fn ball_nested(inner: &Ball, outer: &Ball) -> bool {
    let (ri, ro) = (&inner.radius_sq, &outer.radius_sq);
    if ri > ro {
        return false;
    }
    let d = inner.center.dist_sq(&outer.center);
    // |c| <= r_o - r_i  ⟺  d <= R_o + R_i - 2 sqrt(R_o R_i)
    let slack = ro + ri - d;
    if slack.is_negative() {
        return false;
    }
    &slack * &slack >= int(4) * ro * ri
}

fn ballnest_case(x: &Prepared, y: &Prepared) -> Result<Option<Option<Counterexample>>> {
    if !ball_contains(&x.ball, y.x.as_vector())? {
        return Ok(None);
    }
    if ball_nested(&y.ball, &x.ball) {
        return Ok(Some(None));
    }
    Ok(Some(Some(Counterexample::new(
        &["x", "y"],
        vec![
            ("x", x.x.as_vector().clone().into()),
            ("y", y.x.as_vector().clone().into()),
            ("radius_sq_x", x.ball.radius_sq.clone().into()),
            ("radius_sq_y", y.ball.radius_sq.clone().into()),
            ("center_dist_sq", x.ball.center.dist_sq(&y.ball.center).into()),
        ],
        Side::Forward,
        fmt_bool(true),
        fmt_bool(false),
    ))))
}

/// `y ∈ B(x)  ⟹  B(y) ⊆ B(x)`. Only containing pairs count as cases.
pub fn check_ballnest(domain: &ClaimDomain) -> Result<ClaimReport> {
    require_kind(domain, CoordinateKind::DistinctNaturals, ClaimId::Ballnest)?;
    let prepared = prepare(domain)?;
    let per_x: Vec<(u64, Vec<Counterexample>)> = prepared
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut cases = 0;
            let mut out = Vec::new();
            for (j, y) in prepared.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Some(hit) = ballnest_case(x, y)? {
                    cases += 1;
                    out.extend(hit);
                }
            }
            Ok((cases, out))
        })
        .collect::<Result<_>>()?;
    let cases = per_x.iter().map(|(c, _)| c).sum();
    let found = per_x.into_iter().flat_map(|(_, v)| v).collect();
    Ok(ClaimReport::assemble(ClaimId::Ballnest, domain.clone(), cases, found))
}

fn admissible_case(x: &Prepared, y: &CompressionVector, y_ball: &Ball, y_gap: &Rational) -> Result<Option<Counterexample>> {
    let admissible = on_boundary(&x.ball, y.as_vector())?;
    let same = y_ball.same_ball(&x.ball) && y_gap == &x.gap_sq;
    let side = match (admissible, same) {
        (true, false) => Side::Forward,
        (false, true) => Side::Backward,
        _ => return Ok(None),
    };
    Ok(Some(Counterexample::new(
        &["x", "y"],
        vec![
            ("x", x.x.as_vector().clone().into()),
            ("y", y.as_vector().clone().into()),
            ("center_x", x.ball.center.clone().into()),
            ("center_y", y_ball.center.clone().into()),
            ("radius_sq_x", x.ball.radius_sq.clone().into()),
            ("radius_sq_y", y_ball.radius_sq.clone().into()),
        ],
        side,
        fmt_bool(admissible),
        fmt_bool(same),
    )))
}

/// `y` admissible for `B(x)`  ⟺  `B(y) = B(x)` and `gap(y) = gap(x)`.
///
/// `x` ranges over distinct naturals up to `max_coord`; `y` over the
/// rationals-from-grid closure. Candidates with a degenerate ball are skipped.
pub fn check_admissible_equiv(domain: &ClaimDomain) -> Result<ClaimReport> {
    require_kind(domain, CoordinateKind::RationalsFromGrid, ClaimId::Admissible)?;
    let naturals = ClaimDomain { kind: CoordinateKind::DistinctNaturals, ..domain.clone() };
    if (naturals.max_coord as usize) < naturals.dim {
        return Err(Error::Domain("max_coord below dimension: no generators".into()));
    }
    let m = &domain.scale;
    let xs = prepare(&naturals)?;
    let mut skipped = 0u64;
    let mut ys = Vec::new();
    for y in domain.vectors() {
        match ball_of(&y, m) {
            Ok(b) => {
                let g = gap_squared(&y, m)?;
                ys.push((y, b, g));
            }
            Err(Error::DegenerateBall(_)) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let per_x: Vec<Vec<Counterexample>> = xs
        .par_iter()
        .map(|x| {
            let mut out = Vec::new();
            for (y, b, g) in &ys {
                out.extend(admissible_case(x, y, b, g)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let cases = (xs.len() * ys.len()) as u64;
    let mut report = ClaimReport::assemble(
        ClaimId::Admissible,
        domain.clone(),
        cases,
        per_x.into_iter().flatten().collect(),
    );
    report.skipped = Some(skipped);
    Ok(report)
}

/// Default λ values for cornerstone sweeps.
pub fn default_lambdas() -> Vec<Rational> {
    vec![rat(-2, 1), rat(-1, 1), rat(-1, 2), rat(1, 2), rat(1, 1), rat(2, 1)]
}

enum CornerstoneOutcome {
    Skipped,
    Holds,
    Violated(Counterexample),
}

fn cornerstone_case(x: &CompressionVector, m: &CompressionScale, lambda: &Rational) -> Result<CornerstoneOutcome> {
    let line = match line_of(x, m) {
        Ok(l) => l,
        Err(Error::DegenerateLine(_)) => return Ok(CornerstoneOutcome::Skipped),
        Err(e) => return Err(e),
    };
    let a = match CompressionVector::new(line_point(&line, lambda)) {
        Ok(a) => a,
        Err(Error::Domain(_)) => return Ok(CornerstoneOutcome::Skipped),
        Err(e) => return Err(e),
    };
    let image = compress(&a, m);
    if line_contains(&line, &image)? {
        return Ok(CornerstoneOutcome::Holds);
    }
    Ok(CornerstoneOutcome::Violated(Counterexample::new(
        &["x", "lambda"],
        vec![
            ("x", x.as_vector().clone().into()),
            ("lambda", lambda.clone().into()),
            ("a", a.as_vector().clone().into()),
            ("image", image.into()),
        ],
        Side::Forward,
        fmt_bool(true),
        fmt_bool(false),
    )))
}

/// Cornerstone sweep over explicit generators.
pub fn check_cornerstone_vectors(
    domain: &ClaimDomain,
    xs: &[CompressionVector],
    lambdas: &[Rational],
) -> Result<ClaimReport> {
    let m = &domain.scale;
    let per_x: Vec<(u64, u64, Vec<Counterexample>)> = xs
        .par_iter()
        .map(|x| {
            let (mut cases, mut skipped, mut out) = (0, 0, Vec::new());
            for lambda in lambdas {
                match cornerstone_case(x, m, lambda)? {
                    CornerstoneOutcome::Skipped => skipped += 1,
                    CornerstoneOutcome::Holds => cases += 1,
                    CornerstoneOutcome::Violated(c) => {
                        cases += 1;
                        out.push(c);
                    }
                }
            }
            Ok((cases, skipped, out))
        })
        .collect::<Result<_>>()?;
    let cases = per_x.iter().map(|t| t.0).sum();
    let skipped = per_x.iter().map(|t| t.1).sum();
    let found = per_x.into_iter().flat_map(|t| t.2).collect();
    let mut report = ClaimReport::assemble(ClaimId::Cornerstone, domain.clone(), cases, found);
    report.skipped = Some(skipped);
    Ok(report)
}

/// `a` on the compression line of `x`  ⟹  `V_m[a]` on the same line, for
/// `a = x + λ(x − V_m[x])`. λ values producing an invalid `a` are skipped.
pub fn check_cornerstone(domain: &ClaimDomain, lambdas: &[Rational]) -> Result<ClaimReport> {
    check_cornerstone_vectors(domain, &domain.vectors(), lambdas)
}

/// Lists the grid vectors of `{1..n}^d` (distinct coordinates) whose gap
/// equals `n^d`, i.e. `gap² = n^(2d)`, and the nearest achieved values.
///
/// The verdict is `refuted` when no vector attains the target; the single
/// counterexample then records the closest achieved squared gap.
pub fn check_gap_shell(n: u64, d: usize, m: &CompressionScale) -> Result<ClaimReport> {
    let domain = ClaimDomain::new(d, n, m.clone(), CoordinateKind::GridTuples)?;
    let target = Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(n), 2 * d));
    let vectors = domain.vectors();
    let gaps: Vec<Rational> = vectors
        .par_iter()
        .map(|x| gap_squared(x, m))
        .collect::<Result<_>>()?;

    let mut members = Vec::new();
    let mut below: BTreeMap<Rational, &CompressionVector> = BTreeMap::new();
    let mut above: BTreeMap<Rational, &CompressionVector> = BTreeMap::new();
    for (x, g) in vectors.iter().zip(&gaps) {
        let side = match g.cmp(&target) {
            std::cmp::Ordering::Equal => {
                members.push(x.as_vector().clone());
                continue;
            }
            std::cmp::Ordering::Less => &mut below,
            std::cmp::Ordering::Greater => &mut above,
        };
        // vectors arrive in lexicographic order, keep the first representative
        side.entry(g.clone()).or_insert(x);
    }
    let neighbor = |(g, x): (&Rational, &&CompressionVector)| ShellNeighbor {
        x: x.as_vector().clone(),
        gap_sq: g.clone(),
    };
    let nearest_below: Vec<ShellNeighbor> = below.iter().rev().take(3).map(neighbor).collect();
    let nearest_above: Vec<ShellNeighbor> = above.iter().take(3).map(neighbor).collect();

    let mut found = Vec::new();
    if members.is_empty() {
        let closest = nearest_below
            .first()
            .map(|b| (&target - &b.gap_sq, b))
            .into_iter()
            .chain(nearest_above.first().map(|a| (&a.gap_sq - &target, a)))
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, nb)| nb.gap_sq.clone());
        let mut witness = vec![
            ("n", WitnessValue::from(int(n as i64))),
            ("d", int(d as i64).into()),
            ("target", target.clone().into()),
        ];
        if let Some(c) = &closest {
            witness.push(("closest_gap_sq", c.clone().into()));
        }
        found.push(Counterexample::new(
            &["n", "d"],
            witness,
            Side::Forward,
            closest.as_ref().map_or_else(|| "none".to_string(), fmt_rational),
            fmt_rational(&target),
        ));
    }
    let mut report = ClaimReport::assemble(ClaimId::Gapshell, domain, vectors.len() as u64, found);
    report.gap_shell = Some(GapShell { target, members, nearest_below, nearest_above });
    Ok(report)
}

/// Runs the sweep named by `claim`. `n` is the grid side for the gap shell
/// (defaults to `max_coord`).
pub fn run_claim(
    claim: ClaimId,
    dim: usize,
    max_coord: u64,
    m: Rational,
    n: Option<u64>,
    lambdas: Option<&[Rational]>,
) -> Result<ClaimReport> {
    let scale = CompressionScale::new(m)?;
    match claim {
        ClaimId::Involution => check_involution(&ClaimDomain::new(dim, max_coord, scale, CoordinateKind::DistinctNaturals)?),
        ClaimId::Decider => check_decider(&ClaimDomain::new(dim, max_coord, scale, CoordinateKind::DistinctNaturals)?),
        ClaimId::Ballnest => check_ballnest(&ClaimDomain::new(dim, max_coord, scale, CoordinateKind::DistinctNaturals)?),
        ClaimId::Admissible => {
            check_admissible_equiv(&ClaimDomain::new(dim, max_coord, scale, CoordinateKind::RationalsFromGrid)?)
        }
        ClaimId::Cornerstone => {
            let domain = ClaimDomain::new(dim, max_coord, scale, CoordinateKind::DistinctNaturals)?;
            let defaults = default_lambdas();
            check_cornerstone(&domain, lambdas.unwrap_or(&defaults))
        }
        ClaimId::Gapshell => check_gap_shell(n.unwrap_or(max_coord), dim, &scale),
    }
}

fn to_domain_vector(v: &RationalVector) -> Result<CompressionVector> {
    CompressionVector::new(v.clone())
}

fn expect_eq(what: &str, stored: &Rational, fresh: &Rational) -> Result<bool> {
    if stored != fresh {
        return Err(Error::Internal(format!("stored {what} {stored} but recomputed {fresh}")));
    }
    Ok(true)
}

/// Re-evaluates a stored counterexample from its witness. Returns whether the
/// recorded violation reproduces exactly.
pub fn reverify(claim: ClaimId, domain: &ClaimDomain, cx: &Counterexample) -> Result<bool> {
    let m = &domain.scale;
    let sides = |lhs: bool, rhs: bool| -> bool {
        let side_ok = match cx.direction {
            Side::Forward => lhs && !rhs,
            Side::Backward => !lhs && rhs,
        };
        side_ok && cx.lhs == fmt_bool(lhs) && cx.rhs == fmt_bool(rhs)
    };
    match claim {
        ClaimId::Involution => {
            let x = to_domain_vector(cx.vector("x")?)?;
            Ok(&compress(&compress_vector(&x, m), m) != x.as_vector())
        }
        ClaimId::Decider => {
            let y = to_domain_vector(cx.vector("y")?)?;
            let z = to_domain_vector(cx.vector("z")?)?;
            let (gy, gz) = (gap_squared(&y, m)?, gap_squared(&z, m)?);
            let ball = ball_of(&y, m)?;
            expect_eq("gap_sq_y", cx.scalar("gap_sq_y")?, &gy)?;
            expect_eq("gap_sq_z", cx.scalar("gap_sq_z")?, &gz)?;
            expect_eq("dist_sq", cx.scalar("dist_sq")?, &center_dist_sq(&ball, z.as_vector())?)?;
            expect_eq("radius_sq", cx.scalar("radius_sq")?, &ball.radius_sq)?;
            Ok(sides(ball_contains(&ball, z.as_vector())?, gz < gy))
        }
        ClaimId::Ballnest => {
            let x = to_domain_vector(cx.vector("x")?)?;
            let y = to_domain_vector(cx.vector("y")?)?;
            let (bx, by) = (ball_of(&x, m)?, ball_of(&y, m)?);
            expect_eq("radius_sq_x", cx.scalar("radius_sq_x")?, &bx.radius_sq)?;
            expect_eq("radius_sq_y", cx.scalar("radius_sq_y")?, &by.radius_sq)?;
            Ok(sides(ball_contains(&bx, y.as_vector())?, ball_nested(&by, &bx)))
        }
        ClaimId::Admissible => {
            let x = to_domain_vector(cx.vector("x")?)?;
            let y = to_domain_vector(cx.vector("y")?)?;
            let (bx, by) = (ball_of(&x, m)?, ball_of(&y, m)?);
            let same = by.same_ball(&bx) && gap_squared(&y, m)? == gap_squared(&x, m)?;
            Ok(sides(on_boundary(&bx, y.as_vector())?, same))
        }
        ClaimId::Cornerstone => {
            let x = to_domain_vector(cx.vector("x")?)?;
            let lambda = cx.scalar("lambda")?;
            match cornerstone_case(&x, m, lambda)? {
                CornerstoneOutcome::Violated(fresh) => Ok(fresh.witness == cx.witness),
                _ => Ok(false),
            }
        }
        ClaimId::Gapshell => {
            let n = cx.scalar("n")?;
            let d = cx.scalar("d")?;
            if !n.is_integer() || !d.is_integer() || !n.is_positive() || d < &int(2) {
                return Err(Error::ContractViolation("gap-shell witness needs integer n, d".into()));
            }
            let n: u64 = n.to_integer().try_into().map_err(|_| Error::Domain("n too large".into()))?;
            let d: usize = d.to_integer().try_into().map_err(|_| Error::Domain("d too large".into()))?;
            let fresh = check_gap_shell(n, d, m)?;
            let shell = fresh.gap_shell.as_ref().expect("gap shell section");
            Ok(shell.members.is_empty() && fresh.counterexamples.first() == Some(cx))
        }
    }
}

/// `1` as a scale; the default for every sweep.
pub fn unit_scale() -> Rational {
    Rational::one()
}
