//! Exact maximum no-three-in-line solver for small grids.
//!
//! Depth-first branch and bound over the cells of `{1..n}^d` in lexicographic
//! order. Every selected point carries the set of primitive directions to the
//! other selected points, so feasibility of a new cell costs O(k·d).
//!
//! The search runs twice. The first pass finds the optimum, spread over the
//! rayon pool with a shared incumbent. The second pass is sequential: it
//! looks for the first set of that size in lexicographic order, which makes
//! the witness independent of the thread count.

use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::geometry::{direction_between, grid_points, verify_no_three, BoundingBox, Direction, GridPoint, PointSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    pub threads: usize,
    /// Restrict the first selected cell to a fundamental domain of the box's
    /// symmetry group.
    pub symmetry_reduction: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { time_limit: None, threads: 1, symmetry_reduction: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub n: u64,
    pub d: usize,
    pub max_count: usize,
    pub witness: PointSet,
    /// Nodes of the canonical pass.
    pub nodes_explored: u64,
    pub time_ms: u64,
    /// False if the time limit cut the search short.
    pub optimal: bool,
}

impl SolveResult {
    /// Result JSON. `time_ms` is emitted as given so that callers can keep
    /// output reproducible.
    pub fn to_json(&self, witness_file: Option<&str>, time_ms: u64) -> serde_json::Value {
        let witness: Vec<&[i64]> = self.witness.iter().map(|p| p.coords()).collect();
        json!({
            "n": self.n,
            "d": self.d,
            "max": self.max_count,
            "optimal": self.optimal,
            "nodes": self.nodes_explored,
            "time_ms": time_ms,
            "witness_file": witness_file,
            "witness": witness,
        })
    }
}

/// Static description of the grid shared by all search threads.
struct Grid {
    n: usize,
    cells: Vec<Vec<i64>>,
    /// Lines along the last axis ("rows"); cell `i` is in row `i / n`.
    rows: usize,
    /// Lines along the first axis; cell `i` is on line `i % stride`.
    stride: usize,
}

impl Grid {
    fn new(n: usize, d: usize) -> Self {
        let cells: Vec<Vec<i64>> = grid_points(n as i64, d).map(|p| p.coords().to_vec()).collect();
        let stride = n.pow(d as u32 - 1);
        Grid { n, rows: stride, stride, cells }
    }

    /// Cells allowed after `first` under symmetry reduction: every coordinate
    /// within `[t, n + 1 − t]` where `t` is the first coordinate of `first`.
    fn core(&self, first: usize) -> Vec<bool> {
        let t = self.cells[first][0];
        let hi = self.n as i64 + 1 - t;
        self.cells
            .iter()
            .map(|c| c.iter().all(|&v| t <= v && v <= hi))
            .collect()
    }

    /// Fundamental-domain test for the lexicographically first cell: its first
    /// coordinate is its smallest distance to a facet, and its second
    /// coordinate lies in the lower half.
    fn fundamental(&self, i: usize) -> bool {
        let c = &self.cells[i];
        let t = c[0];
        let hi = self.n as i64 + 1 - t;
        c.iter().all(|&v| t <= v && v <= hi) && 2 * c[1] <= self.n as i64 + 1
    }
}

/// Mutable search state for one thread.
struct State<'g> {
    grid: &'g Grid,
    allowed: Option<Vec<bool>>,
    selected: Vec<usize>,
    dirs: Vec<HashSet<Direction>>,
    row_used: Vec<u8>,
    line_used: Vec<u8>,
    nodes: u64,
}

impl<'g> State<'g> {
    fn new(grid: &'g Grid) -> Self {
        State {
            grid,
            allowed: None,
            selected: Vec::new(),
            dirs: Vec::new(),
            row_used: vec![0; grid.rows],
            line_used: vec![0; grid.stride],
            nodes: 0,
        }
    }

    fn feasible(&self, i: usize) -> bool {
        let g = self.grid;
        if self.row_used[i / g.n] >= 2 || self.line_used[i % g.stride] >= 2 {
            return false;
        }
        if let Some(a) = &self.allowed {
            if !a[i] {
                return false;
            }
        }
        let c = &g.cells[i];
        self.selected
            .iter()
            .zip(&self.dirs)
            .all(|(&s, ds)| !ds.contains(&direction_between(&g.cells[s], c)))
    }

    fn push(&mut self, i: usize) {
        let g = self.grid;
        let c = &g.cells[i];
        let mut own = HashSet::with_capacity(self.selected.len() + 4);
        for (&s, ds) in self.selected.iter().zip(self.dirs.iter_mut()) {
            let dir = direction_between(&g.cells[s], c);
            ds.insert(dir.clone());
            own.insert(dir);
        }
        self.selected.push(i);
        self.dirs.push(own);
        self.row_used[i / g.n] += 1;
        self.line_used[i % g.stride] += 1;
    }

    fn pop(&mut self) {
        let g = self.grid;
        let i = self.selected.pop().expect("nonempty");
        self.dirs.pop();
        let c = &g.cells[i];
        for (&s, ds) in self.selected.iter().zip(self.dirs.iter_mut()) {
            ds.remove(&direction_between(&g.cells[s], c));
        }
        self.row_used[i / g.n] -= 1;
        self.line_used[i % g.stride] -= 1;
    }

    /// Upper bound on how many cells with index `>= i` can still be added.
    fn remaining_bound(&self, i: usize) -> usize {
        let g = self.grid;
        let total = g.cells.len();
        if i >= total {
            return 0;
        }
        let cells_left = total - i;
        // at most two per row (lines along the last axis)
        let row = i / g.n;
        let in_row = g.n - i % g.n;
        let rows_bound = (2 - self.row_used[row] as usize).min(in_row) + 2 * (g.rows - row - 1);
        // at most two per line along the first axis
        let slab = i / g.stride;
        let offset = i % g.stride;
        let mut lines_bound = 0;
        for (line, &used) in self.line_used.iter().enumerate() {
            let left = g.n - slab - usize::from(line < offset);
            lines_bound += (2 - used as usize).min(left);
        }
        cells_left.min(rows_bound).min(lines_bound)
    }
}

struct Shared {
    best: AtomicUsize,
    stop: AtomicBool,
    deadline: Option<Instant>,
    nodes: AtomicU64,
}

impl Shared {
    fn timed_out(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(dl) = self.deadline {
            if Instant::now() >= dl {
                self.stop.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }
}

/// Optimum search: improves `shared.best`, keeps the local incumbent.
fn search_max(st: &mut State, start: usize, shared: &Shared, local: &mut Vec<usize>) {
    st.nodes += 1;
    if st.nodes.is_multiple_of(4096) && shared.timed_out() {
        return;
    }
    let k = st.selected.len();
    if k > local.len() {
        local.clone_from(&st.selected);
        shared.best.fetch_max(k, Ordering::Relaxed);
    }
    for i in start..st.grid.cells.len() {
        if k + st.remaining_bound(i) <= shared.best.load(Ordering::Relaxed) {
            break;
        }
        if st.feasible(i) {
            st.push(i);
            search_max(st, i + 1, shared, local);
            st.pop();
            if shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }
}

/// First set of size `target` in lexicographic order.
fn search_first(st: &mut State, start: usize, target: usize) -> bool {
    st.nodes += 1;
    let k = st.selected.len();
    if k == target {
        return true;
    }
    for i in start..st.grid.cells.len() {
        if k + st.remaining_bound(i) < target {
            break;
        }
        if st.feasible(i) {
            st.push(i);
            if search_first(st, i + 1, target) {
                return true;
            }
            st.pop();
        }
    }
    false
}

fn first_cells(grid: &Grid, opts: &SolveOptions) -> Vec<usize> {
    (0..grid.cells.len())
        .filter(|&i| !opts.symmetry_reduction || grid.fundamental(i))
        .collect()
}

fn branch_state<'g>(grid: &'g Grid, first: usize, opts: &SolveOptions) -> State<'g> {
    let mut st = State::new(grid);
    if opts.symmetry_reduction {
        st.allowed = Some(grid.core(first));
    }
    st.push(first);
    st
}

/// Maximum number of grid cells of `{1..n}^d` with no three collinear.
///
/// When the time limit expires the best set found so far is returned with
/// `optimal = false`.
pub fn exact_max(n: u64, d: usize, opts: &SolveOptions) -> Result<SolveResult> {
    if n < 1 || d < 2 {
        return Err(Error::Domain(format!("exact_max needs n >= 1 and d >= 2, got n={n} d={d}")));
    }
    let cells = (n as u128).checked_pow(d as u32).filter(|&c| c <= 1 << 24);
    if cells.is_none() {
        return Err(Error::Domain(format!("grid {n}^{d} is too large for exact search")));
    }
    let started = Instant::now();
    let grid = Grid::new(n as usize, d);
    let shared = Shared {
        best: AtomicUsize::new(0),
        stop: AtomicBool::new(false),
        deadline: opts.time_limit.map(|t| started + t),
        nodes: AtomicU64::new(0),
    };
    let firsts = first_cells(&grid, opts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let branch = |&first: &usize| {
        let mut st = branch_state(&grid, first, opts);
        let mut local = Vec::new();
        search_max(&mut st, first + 1, &shared, &mut local);
        shared.nodes.fetch_add(st.nodes, Ordering::Relaxed);
        local
    };
    let incumbents: Vec<Vec<usize>> = if opts.threads > 1 {
        pool.install(|| firsts.par_iter().map(branch).collect())
    } else {
        firsts.iter().map(branch).collect()
    };
    let timed_out = shared.stop.load(Ordering::Relaxed);
    let best = shared.best.load(Ordering::Relaxed);

    let (chosen, nodes) = if timed_out {
        let set = incumbents
            .into_iter()
            .filter(|s| s.len() == best)
            .min()
            .unwrap_or_default();
        (set, shared.nodes.load(Ordering::Relaxed))
    } else {
        canonical(&grid, &firsts, best, opts)?
    };

    let ceiling = 2 * (n as usize).pow(d as u32 - 1);
    if chosen.len() > ceiling {
        return Err(Error::Internal(format!(
            "found {} points, above the axis-line ceiling {ceiling}",
            chosen.len()
        )));
    }
    let pts: Vec<GridPoint> = chosen
        .iter()
        .map(|&i| GridPoint::new(grid.cells[i].clone()).expect("grid cell"))
        .collect();
    let witness = PointSet::new(d, BoundingBox::grid(n as i64, d), pts)?;
    if !verify_no_three(&witness).is_pass() {
        return Err(Error::Internal("solver witness has a collinear triple".into()));
    }
    Ok(SolveResult {
        n,
        d,
        max_count: chosen.len(),
        witness,
        nodes_explored: nodes,
        time_ms: started.elapsed().as_millis() as u64,
        optimal: !timed_out,
    })
}

/// Sequential pass for the lexicographically first set of size `best`.
fn canonical(grid: &Grid, firsts: &[usize], best: usize, opts: &SolveOptions) -> Result<(Vec<usize>, u64)> {
    let mut nodes = 1;
    if best == 0 {
        return Ok((Vec::new(), nodes));
    }
    for &first in firsts {
        let mut st = branch_state(grid, first, opts);
        let found = search_first(&mut st, first + 1, best);
        nodes += st.nodes;
        if found {
            return Ok((st.selected, nodes));
        }
    }
    Err(Error::Internal(format!("canonical pass found no set of size {best}")))
}

/// Whether no cell of `{1..n}^d` outside `s` can be added without creating a
/// collinear triple. `s` must be a verified set inside the grid.
pub fn is_maximal(s: &PointSet, n: u64, d: usize) -> Result<bool> {
    if s.dim() != d {
        return Err(Error::ContractViolation(format!("set of dimension {} for d = {d}", s.dim())));
    }
    let bounds = BoundingBox::grid(n as i64, d);
    if let Some(p) = s.iter().find(|p| !bounds.contains(p)) {
        return Err(Error::ContractViolation(format!("point {p} lies outside the grid")));
    }
    if !verify_no_three(s).is_pass() {
        return Err(Error::ContractViolation("input set has a collinear triple".into()));
    }
    let mut index = crate::constructions::DirectionIndex::default();
    for p in s.iter() {
        index.insert(p.coords());
    }
    Ok(grid_points(n as i64, d).all(|c| index.contains(c.coords()) || index.blocked(c.coords())))
}
