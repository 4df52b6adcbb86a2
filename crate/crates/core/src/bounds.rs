//! The claimed lower bound, the classical reference bounds, and a table that
//! sets them against exact and constructed set sizes.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::constructions::{best_sphere, erdos_clipped, greedy, paper_construction, CenterStrategy};
use crate::error::{Error, Result};
use crate::solver::{exact_max, SolveOptions};

/// Reference constant for the conjectured `c·n` growth in the plane.
pub const CONJECTURE_CONSTANT: f64 = 1.814;
pub const HALL_CONSTANT: f64 = 1.5;

/// Largest `n` the table solves exactly, per dimension.
pub fn exact_limit(d: usize) -> u64 {
    match d {
        2 => 10,
        3 => 3,
        _ => 2,
    }
}

pub const PROVENANCE_NOTE: &str = "erdos_ref, hall_ref and conjecture_ref are limiting constants \
(epsilon = 0) of asymptotic statements, not bounds valid at each n; paper_bound uses implicit constant 1";

/// `n^(d−1) · d^(1/(2d))`.
pub fn paper_bound(n: u64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("paper_bound needs d >= 2, got {d}")));
    }
    if n < 1 {
        return Err(Error::Domain("paper_bound needs n >= 1".into()));
    }
    let d_f = d as f64;
    Ok((n as f64).powi(d as i32 - 1) * d_f.powf(1.0 / (2.0 * d_f)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Exact,
    Sphere,
    Erdos,
    Greedy,
    Paper,
    /// Exact requested beyond the solver limit and nothing else available.
    Skipped,
    None,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Exact => "exact",
            Source::Sphere => "sphere",
            Source::Erdos => "erdos",
            Source::Greedy => "greedy",
            Source::Paper => "paper",
            Source::Skipped => "skipped",
            Source::None => "none",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => Source::Exact,
            "sphere" => Source::Sphere,
            "erdos" => Source::Erdos,
            "greedy" => Source::Greedy,
            "paper" => Source::Paper,
            "skipped" => Source::Skipped,
            "none" => Source::None,
            _ => return Err(Error::Domain(format!("unknown source {s:?}"))),
        })
    }
}

/// Parses a comma-separated source list such as `exact,sphere`.
pub fn parse_sources(list: &str) -> Result<Vec<Source>> {
    list.split(',')
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse()? {
            Source::Skipped | Source::None => Err(Error::Domain(format!("{s:?} is not a requestable source"))),
            src => Ok(src),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsRow {
    pub n: u64,
    pub d: usize,
    pub paper_bound: f64,
    pub erdos_ref: f64,
    /// Planar rows only.
    pub hall_ref: Option<f64>,
    /// Planar rows only.
    pub conjecture_ref: Option<f64>,
    /// Set on space rows, where the maximum is known to be of order n².
    pub theta_n2_reference: bool,
    pub best: Option<u64>,
    pub source: Source,
    pub ratio: Option<f64>,
}

impl BoundsRow {
    /// Reference columns for `(n, d)` with no set size yet.
    pub fn reference(n: u64, d: usize) -> Result<Self> {
        let planar = d == 2;
        Ok(BoundsRow {
            n,
            d,
            paper_bound: paper_bound(n, d)?,
            erdos_ref: n as f64,
            hall_ref: planar.then_some(HALL_CONSTANT * n as f64),
            conjecture_ref: planar.then_some(CONJECTURE_CONSTANT * n as f64),
            theta_n2_reference: d == 3,
            best: None,
            source: Source::None,
            ratio: None,
        })
    }

    fn with_best(mut self, best: u64, source: Source) -> Self {
        self.ratio = Some(best as f64 / self.paper_bound);
        self.best = Some(best);
        self.source = source;
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "paper_bound": self.paper_bound,
            "erdos_ref": self.erdos_ref,
            "hall_ref": self.hall_ref,
            "conjecture_ref": self.conjecture_ref,
            "theta_n2_reference": self.theta_n2_reference,
            "best": self.best,
            "source": self.source.name(),
            "ratio": self.ratio,
            "note": PROVENANCE_NOTE,
        })
    }
}

fn construction_size(src: Source, n: u64, d: usize) -> Result<Option<u64>> {
    let count = match src {
        Source::Sphere => best_sphere(n, d, &CenterStrategy::CenterScan)?.count(),
        Source::Erdos if d == 2 => erdos_clipped(n)?.0.len(),
        Source::Greedy if n >= 2 => greedy(n, d, 0)?.count(),
        Source::Paper if n >= d as u64 => paper_construction(n, d)?.count(),
        _ => return Ok(None),
    };
    Ok(Some(count as u64))
}

/// One row per `n` in ascending order. Exact values win over constructions;
/// among constructions the largest set wins, ties to the earlier source in
/// `sources`.
pub fn compare_table(ns: impl IntoIterator<Item = u64>, d: usize, sources: &[Source]) -> Result<Vec<BoundsRow>> {
    let mut ns: Vec<u64> = ns.into_iter().collect();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len());
    for n in ns {
        let row = BoundsRow::reference(n, d)?;
        let mut skipped = false;
        if sources.contains(&Source::Exact) {
            if n <= exact_limit(d) {
                let r = exact_max(n, d, &SolveOptions::default())?;
                rows.push(row.with_best(r.max_count as u64, Source::Exact));
                continue;
            }
            skipped = true;
        }
        let mut best: Option<(u64, Source)> = None;
        for &src in sources.iter().filter(|&&s| s != Source::Exact) {
            if let Some(c) = construction_size(src, n, d)? {
                if best.is_none_or(|(b, _)| c > b) {
                    best = Some((c, src));
                }
            }
        }
        rows.push(match best {
            Some((c, src)) => row.with_best(c, src),
            None if skipped => BoundsRow { source: Source::Skipped, ..row },
            None => row,
        });
    }
    Ok(rows)
}

/// Six significant digits, in the style of C's `%g`.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: [&str; 9] =
    ["n", "d", "paper_bound", "erdos_ref", "hall_ref", "conjecture_ref", "best", "source", "ratio"];

pub fn to_csv(rows: &[BoundsRow]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let opt = |v: Option<f64>| v.map(fmt_g6).unwrap_or_default();
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.d.to_string(),
            fmt_g6(r.paper_bound),
            fmt_g6(r.erdos_ref),
            opt(r.hall_ref),
            opt(r.conjecture_ref),
            r.best.map(|b| b.to_string()).unwrap_or_default(),
            r.source.name().to_string(),
            opt(r.ratio),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
}

/// Inverse of [`to_csv`]. Floats come back at their printed precision.
pub fn from_csv(text: &str) -> Result<Vec<BoundsRow>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse { line: 1, msg: format!("unexpected header {header:?}") });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        let err = |field: &str| Error::Parse { line, msg: format!("bad {field}") };
        let num = |k: usize| rec[k].parse::<f64>().map_err(|_| err(CSV_HEADER[k]));
        let opt = |k: usize| if rec[k].is_empty() { Ok(None) } else { num(k).map(Some) };
        let d: usize = rec[1].parse().map_err(|_| err("d"))?;
        rows.push(BoundsRow {
            n: rec[0].parse().map_err(|_| err("n"))?,
            d,
            paper_bound: num(2)?,
            erdos_ref: num(3)?,
            hall_ref: opt(4)?,
            conjecture_ref: opt(5)?,
            theta_n2_reference: d == 3,
            best: if rec[6].is_empty() { None } else { Some(rec[6].parse().map_err(|_| err("best"))?) },
            source: rec[7].parse()?,
            ratio: opt(8)?,
        });
    }
    Ok(rows)
}

/// `row` with every float rounded to its printed form.
pub fn rounded(row: &BoundsRow) -> BoundsRow {
    let r = |x: f64| fmt_g6(x).parse::<f64>().expect("printed float");
    BoundsRow {
        paper_bound: r(row.paper_bound),
        erdos_ref: r(row.erdos_ref),
        hall_ref: row.hall_ref.map(r),
        conjecture_ref: row.conjecture_ref.map(r),
        ratio: row.ratio.map(r),
        ..row.clone()
    }
}
