//! Ground truth on small instances.
//!
//! Everything here works on the fully enumerated graph `J(n, k)` and never
//! uses the lumped chain or the closed forms it checks, except as the
//! expected side of a comparison.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::chain::{self, DistanceChain};
use crate::error::{Error, Result};
use crate::hitting;
use crate::numeric;
use crate::params::JohnsonParams;
use crate::report::Report;
use crate::shell;
use crate::walker::{distance, SubsetState};

/// Size limits for enumeration and exact solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_vertices: u64,
    pub max_edges: u64,
    /// Largest `C(n, k)` for which the dense rational solve is attempted.
    pub max_solve_vertices: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_vertices: 100_000, max_edges: 20_000_000, max_solve_vertices: 5_000 }
    }
}

/// All `k`-subsets of `0..n` with swap adjacency and distances to a target.
#[derive(Debug, Clone)]
pub struct EnumeratedGraph {
    pub params: JohnsonParams,
    pub vertices: Vec<SubsetState>,
    /// Sorted neighbor indices per vertex.
    pub adjacency: Vec<Vec<u32>>,
    pub shell_of: Vec<u32>,
    pub target: usize,
}

/// Colex rank of a sorted combination: `sum_i C(c_i, i + 1)`.
struct Ranker {
    table: Vec<Vec<u64>>,
}

impl Ranker {
    fn new(n: usize, k: usize) -> Self {
        let mut table = vec![vec![0u64; k + 1]; n + 1];
        for (m, row) in table.iter_mut().enumerate() {
            row[0] = 1;
            for (r, cell) in row.iter_mut().enumerate().take(k.min(m) + 1).skip(1) {
                *cell = numeric::binomial(m as u64, r as u64).to_u64().expect("capped");
            }
        }
        Ranker { table }
    }

    fn rank(&self, sorted: &[usize]) -> usize {
        sorted
            .iter()
            .enumerate()
            .map(|(i, &c)| self.table[c][i + 1] as usize)
            .sum()
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn enumerate_graph(params: JohnsonParams, target: &SubsetState) -> Result<EnumeratedGraph> {
    enumerate_graph_with(params, target, Caps::default())
}

pub fn enumerate_graph_with(params: JohnsonParams, target: &SubsetState, caps: Caps) -> Result<EnumeratedGraph> {
    let (n, k) = (params.n(), params.k());
    if target.params() != params {
        return Err(Error::Domain(format!("target is not a vertex of {params}")));
    }
    let count = numeric::binomial(n as u64, k as u64);
    let vertex_count = count.to_u64().filter(|&c| c <= caps.max_vertices).ok_or(Error::Resource {
        what: "vertices",
        actual: count.to_u128().unwrap_or(u128::MAX),
        limit: caps.max_vertices as u128,
    })?;
    let edges = vertex_count as u128 * params.degree() as u128;
    if edges > caps.max_edges as u128 {
        return Err(Error::Resource { what: "directed edges", actual: edges, limit: caps.max_edges as u128 });
    }

    let ranker = Ranker::new(n, k);
    let mut slots: Vec<Option<Vec<usize>>> = vec![None; vertex_count as usize];
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        slots[ranker.rank(&comb)] = Some(comb.clone());
        if !next_combination(&mut comb, n) {
            break;
        }
    }
    let combos: Vec<Vec<usize>> = slots.into_iter().map(|c| c.expect("colex ranks are a bijection")).collect();

    let mut adjacency = Vec::with_capacity(combos.len());
    let mut buf = Vec::with_capacity(k);
    for c in &combos {
        let outside: Vec<usize> = (0..n).filter(|e| c.binary_search(e).is_err()).collect();
        let mut nbrs = Vec::with_capacity(params.degree() as usize);
        for &out in c {
            for &inn in &outside {
                buf.clear();
                buf.extend(c.iter().copied().filter(|&e| e != out));
                let pos = buf.partition_point(|&e| e < inn);
                buf.insert(pos, inn);
                nbrs.push(ranker.rank(&buf) as u32);
            }
        }
        nbrs.sort_unstable();
        adjacency.push(nbrs);
    }

    let vertices: Vec<SubsetState> = combos
        .iter()
        .map(|c| SubsetState::from_members(n, c.iter().copied()))
        .collect::<Result<_>>()?;
    let shell_of = vertices
        .iter()
        .map(|v| distance(v, target).map(|d| d as u32))
        .collect::<Result<_>>()?;
    let target = ranker.rank(&target.members());

    Ok(EnumeratedGraph { params, vertices, adjacency, shell_of, target })
}

impl EnumeratedGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// A triangle `(u, v, w)` if one exists.
    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        for u in 0..self.len() {
            let nbrs = &self.adjacency[u];
            for (a, &v) in nbrs.iter().enumerate() {
                for &w in &nbrs[a + 1..] {
                    if self.are_adjacent(v as usize, w as usize) {
                        return Some((u, v as usize, w as usize));
                    }
                }
            }
        }
        None
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !std::mem::replace(&mut seen[v as usize], true) {
                    queue.push_back(v as usize);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Vertex count, regularity, symmetry, single-swap adjacency,
/// connectivity and (for `n >= 3`) an odd cycle.
pub fn verify_structure(graph: &EnumeratedGraph) -> Report {
    let params = graph.params;
    let tag = params.to_string();
    let mut r = Report::new();
    r.expect_eq(
        format!("{tag} vertex count"),
        numeric::binomial(params.n() as u64, params.k() as u64).to_string(),
        graph.len().to_string(),
    );
    let regular = graph.adjacency.iter().all(|a| a.len() as u64 == params.degree());
    r.record(format!("{tag} every degree"), params.degree(), if regular { "all equal" } else { "irregular" }, regular);

    let mut symmetric = true;
    let mut single_swap = true;
    for (u, nbrs) in graph.adjacency.iter().enumerate() {
        for &v in nbrs {
            symmetric &= graph.are_adjacent(v as usize, u);
            single_swap &= distance(&graph.vertices[u], &graph.vertices[v as usize]).ok() == Some(1);
        }
    }
    r.record(format!("{tag} adjacency symmetric"), true, symmetric, symmetric);
    r.record(format!("{tag} neighbors differ by one swap"), true, single_swap, single_swap);
    let connected = graph.is_connected();
    r.record(format!("{tag} connected"), true, connected, connected);
    if params.n() >= 3 {
        let tri = graph.find_triangle();
        r.record(format!("{tag} triangle exists"), "some", format!("{tri:?}"), tri.is_some());
    }
    r
}

/// Shell sizes against `C(k,d) C(n-k,d)`, and per-vertex up/down neighbor
/// counts against `(k-d)(n-k-d)` and `d^2`.
pub fn verify_shell_counts(graph: &EnumeratedGraph) -> Report {
    let params = graph.params;
    let (n, k) = (params.n() as u64, params.k() as u64);
    let d_max = params.d_max();
    let mut r = Report::new();
    let mut counts = vec![0u64; d_max + 1];
    for &d in &graph.shell_of {
        counts[d as usize] += 1;
    }
    for (d, &c) in counts.iter().enumerate() {
        let want = shell::shell_size(params, d).expect("d in range");
        r.expect_eq(format!("{params} |shell {d}|"), want.to_string(), c.to_string());
    }

    let mut bad_up = Vec::new();
    let mut bad_down = Vec::new();
    for (u, nbrs) in graph.adjacency.iter().enumerate() {
        let d = graph.shell_of[u] as u64;
        let up = nbrs.iter().filter(|&&v| graph.shell_of[v as usize] as u64 == d + 1).count() as u64;
        let down = nbrs.iter().filter(|&&v| (graph.shell_of[v as usize] as u64) + 1 == d).count() as u64;
        if up != (k - d) * (n - k - d) {
            bad_up.push(u);
        }
        if down != d * d {
            bad_down.push(u);
        }
    }
    r.record(format!("{params} up-neighbor counts"), "(k-d)(n-k-d) at every vertex", format!("{} mismatches", bad_up.len()), bad_up.is_empty());
    r.record(format!("{params} down-neighbor counts"), "d^2 at every vertex", format!("{} mismatches", bad_down.len()), bad_down.is_empty());
    r
}

/// One-step shell transition probabilities `(q, r, p)` of a single vertex
/// under the plain walk, counted from its neighbor list.
pub fn vertex_shell_transitions(graph: &EnumeratedGraph, u: usize) -> (BigRational, BigRational, BigRational) {
    let d = graph.shell_of[u];
    let deg = graph.params.degree();
    let (mut down, mut stay, mut up) = (0u64, 0u64, 0u64);
    for &v in &graph.adjacency[u] {
        match graph.shell_of[v as usize] as i64 - d as i64 {
            -1 => down += 1,
            0 => stay += 1,
            1 => up += 1,
            _ => unreachable!("swap moves distance by at most one"),
        }
    }
    (numeric::ratio(down, deg), numeric::ratio(stay, deg), numeric::ratio(up, deg))
}

/// Every vertex's exact shell transition probabilities against the lumped
/// chain's `(q_d, r_d, p_d)`.
pub fn verify_lumpability(graph: &EnumeratedGraph) -> Result<Report> {
    let params = graph.params;
    let chain = DistanceChain::new(params, 0.0)?;
    let ex = chain.exact.as_ref().expect("beta = 0 chain is exact");
    let mut mismatched = vec![0usize; params.d_max() + 1];
    let mut seen = vec![0usize; params.d_max() + 1];
    for u in 0..graph.len() {
        let d = graph.shell_of[u] as usize;
        let (q, r, p) = vertex_shell_transitions(graph, u);
        seen[d] += 1;
        if q != ex.q[d] || r != ex.r[d] || p != ex.p[d] {
            mismatched[d] += 1;
        }
    }
    let mut report = Report::new();
    for d in 0..=params.d_max() {
        report.record(
            format!("{params} shell {d} transitions (q,r,p)"),
            format!("({}, {}, {}) at all {} vertices", ex.q[d], ex.r[d], ex.p[d], seen[d]),
            format!("{} mismatches", mismatched[d]),
            mismatched[d] == 0,
        );
    }
    Ok(report)
}

/// Exact solution of a dense square system by Gauss-Jordan elimination.
fn solve_dense(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let size = b.len();
    for col in 0..size {
        let pivot = (col..size)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Internal(format!("singular system at column {col}")))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col][col..].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        let (pivot_row, pivot_b) = (a[col].clone(), b[col].clone());
        for r in 0..size {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for (x, y) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
            b[r] -= &factor * &pivot_b;
        }
    }
    Ok(b)
}

/// Expected hitting times of the target from every vertex, grouped by shell.
///
/// Builds the first-step equations `h(v) = 1 + sum_u P(v, u) h(u)`,
/// `h(target) = 0` over the whole vertex set and solves them exactly.
/// Outward moves carry acceptance `e^-beta`; for `beta > 0` that weight is
/// the exact rational value of its nearest double, so the only rounding is
/// in the acceptance probability itself. Fails if two vertices in one shell
/// end up with different values.
pub fn solve_hitting_exact(graph: &EnumeratedGraph, beta: f64) -> Result<Vec<BigRational>> {
    solve_hitting_exact_with(graph, beta, Caps::default())
}

pub fn solve_hitting_exact_with(graph: &EnumeratedGraph, beta: f64, caps: Caps) -> Result<Vec<BigRational>> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Domain(format!("beta must be finite and >= 0, got {beta}")));
    }
    if graph.len() as u64 > caps.max_solve_vertices {
        return Err(Error::Resource {
            what: "vertices for exact solve",
            actual: graph.len() as u128,
            limit: caps.max_solve_vertices as u128,
        });
    }
    let accept_out = if beta == 0.0 {
        BigRational::one()
    } else {
        BigRational::from_float((-beta).exp()).expect("finite")
    };
    let deg = BigRational::from_integer(BigInt::from(graph.params.degree()));

    // Unknowns are all vertices but the target.
    let index: Vec<Option<usize>> = {
        let mut next = 0;
        (0..graph.len())
            .map(|v| {
                (v != graph.target).then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let size = graph.len() - 1;
    let mut a = vec![vec![BigRational::zero(); size]; size];
    let mut b = vec![BigRational::zero(); size];
    for v in 0..graph.len() {
        let Some(row) = index[v] else { continue };
        let dv = graph.shell_of[v];
        // Row scaled by the degree: leave_weight * h(v) - sum_u w(v,u) h(u) = deg.
        let mut leave = BigRational::zero();
        for &u in &graph.adjacency[v] {
            let w = if graph.shell_of[u as usize] > dv { accept_out.clone() } else { BigRational::one() };
            leave += &w;
            if let Some(col) = index[u as usize] {
                a[row][col] -= w;
            }
        }
        a[row][row] += leave;
        b[row] = deg.clone();
    }
    let solution = solve_dense(a, b)?;

    let mut per_shell: Vec<Option<BigRational>> = vec![None; graph.params.d_max() + 1];
    per_shell[0] = Some(BigRational::zero());
    for (v, slot) in index.iter().enumerate() {
        let Some(i) = *slot else { continue };
        let d = graph.shell_of[v] as usize;
        match &per_shell[d] {
            None => per_shell[d] = Some(solution[i].clone()),
            Some(x) if *x == solution[i] => {}
            Some(x) => {
                return Err(Error::Internal(format!(
                    "shell {d} not uniform: {x} vs {} at vertex {v}",
                    solution[i]
                )))
            }
        }
    }
    per_shell
        .into_iter()
        .enumerate()
        .map(|(d, x)| x.ok_or_else(|| Error::Internal(format!("shell {d} has no vertices"))))
        .collect()
}

/// Hitting times from the lumped chain alone, by the first-step recurrence
/// `q_i (h_i - h_{i-1}) = 1 + p_i (h_{i+1} - h_i)`.
pub fn solve_hitting_lumped(chain: &DistanceChain) -> Result<Vec<BigRational>> {
    let ex = chain
        .exact
        .as_ref()
        .ok_or_else(|| Error::Domain("lumped exact solve needs beta = 0".into()))?;
    let d_max = chain.d_max();
    let mut gaps = vec![BigRational::zero(); d_max + 2];
    for i in (1..=d_max).rev() {
        gaps[i] = (BigRational::one() + &ex.p[i] * &gaps[i + 1]) / &ex.q[i];
    }
    let mut h = Vec::with_capacity(d_max + 1);
    let mut acc = BigRational::zero();
    h.push(acc.clone());
    for g in &gaps[1..=d_max] {
        acc += g;
        h.push(acc.clone());
    }
    Ok(h)
}

/// Distribution of the lumped chain after `t` steps from `start`.
pub fn lumped_distribution_at(chain: &DistanceChain, start: usize, t: usize) -> Vec<f64> {
    let d_max = chain.d_max();
    let mut dist = vec![0.0; d_max + 1];
    dist[start] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; d_max + 1];
        for (d, &mass) in dist.iter().enumerate() {
            next[d] += mass * chain.r[d];
            if d > 0 {
                next[d - 1] += mass * chain.q[d];
            }
            if d < d_max {
                next[d + 1] += mass * chain.p[d];
            }
        }
        dist = next;
    }
    dist
}

/// Distribution after `t` steps of the plain walk on the enumerated graph,
/// starting at `start`, collapsed onto shells.
pub fn full_state_distribution_at(graph: &EnumeratedGraph, start: usize, t: usize) -> Vec<f64> {
    let deg = graph.params.degree() as f64;
    let mut dist = vec![0.0; graph.len()];
    dist[start] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; graph.len()];
        for (u, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &v in &graph.adjacency[u] {
                next[v as usize] += mass / deg;
            }
        }
        dist = next;
    }
    let mut shells = vec![0.0; graph.params.d_max() + 1];
    for (u, &mass) in dist.iter().enumerate() {
        shells[graph.shell_of[u] as usize] += mass;
    }
    shells
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Options for [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub max_n: usize,
    pub caps: Caps,
    /// Metropolis strengths checked against the reweighted full-graph solve.
    pub betas: Vec<f64>,
    /// Largest `n` for the Metropolis solves.
    pub metropolis_max_n: usize,
    pub tolerance: f64,
}

impl SuiteOptions {
    pub fn new(max_n: usize) -> Self {
        SuiteOptions { max_n, caps: Caps::default(), betas: vec![0.5, 1.0, 2.0], metropolis_max_n: 7, tolerance: 1e-10 }
    }
}

/// All oracle checks for one instance.
pub fn verify_instance(params: JohnsonParams, opts: &SuiteOptions) -> Result<Report> {
    let target = SubsetState::first_k(params);
    let graph = enumerate_graph_with(params, &target, opts.caps)?;
    let mut report = verify_structure(&graph);
    if params.is_degenerate() {
        report.note(format!("{params} chain checks"), "skipped: degenerate instance");
        return Ok(report);
    }
    report.extend(verify_shell_counts(&graph));
    report.extend(verify_lumpability(&graph)?);

    for (i, (lhs, rhs)) in chain::detailed_balance_check(params)?.into_iter().enumerate() {
        let pass = lhs == rhs;
        report.record(format!("{params} detailed balance across {i}|{}", i + 1), lhs, rhs, pass);
    }
    for d in 1..params.d_max() {
        let (log_ratio, entropy_diff) = chain::entropy_gradient_diagnostic(params, d)?;
        report.note(
            format!("{params} d={d} ln(p/q) vs S(d+1)-S(d-1)"),
            format!("{log_ratio:.6} vs {entropy_diff:.6}"),
        );
    }

    if graph.len() as u64 > opts.caps.max_solve_vertices {
        report.note(format!("{params} hitting-time solves"), "skipped: above solve cap");
        return Ok(report);
    }
    let solved = solve_hitting_exact_with(&graph, 0.0, opts.caps)?;
    for (m, h) in solved.iter().enumerate() {
        let closed = hitting::hitting_time_rw_with(params, m, crate::numeric::Exactness { cutoff: usize::MAX })?;
        let pass = *h == closed;
        report.record(format!("{params} h_{m} closed form vs full solve"), closed, h, pass);
    }
    if params.n() <= opts.metropolis_max_n {
        for &beta in &opts.betas {
            let solved = solve_hitting_exact_with(&graph, beta, opts.caps)?;
            for (m, h) in solved.iter().enumerate().skip(1) {
                let closed = hitting::hitting_time_metropolis(params, beta, m)?.value();
                let full = numeric::rational_to_f64(h);
                let gap = relative_gap(closed, full);
                report.record(
                    format!("{params} beta={beta} h_{m} closed form vs full solve"),
                    format!("{full:.12e} (rel tol {:e})", opts.tolerance),
                    format!("{closed:.12e}"),
                    gap <= opts.tolerance,
                );
            }
        }
    }
    Ok(report)
}

/// Runs [`verify_instance`] for every valid `(n, k)` with `n <= max_n`.
pub fn run_suite(opts: &SuiteOptions) -> Result<Report> {
    let mut report = Report::new();
    for params in JohnsonParams::all_up_to(2, opts.max_n) {
        report.extend(verify_instance(params, opts)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;

    fn graph(n: usize, k: usize) -> EnumeratedGraph {
        let params = JohnsonParams::new(n, k).unwrap();
        enumerate_graph(params, &SubsetState::first_k(params)).unwrap()
    }

    #[test]
    fn combination_ranks_are_dense() {
        let ranker = Ranker::new(7, 3);
        let mut c = vec![0, 1, 2];
        let mut seen = vec![false; 35];
        loop {
            seen[ranker.rank(&c)] = true;
            if !next_combination(&mut c, 7) {
                break;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn sizes_and_degrees() {
        let g = graph(5, 2);
        assert_eq!(g.len(), 10);
        assert!(g.adjacency.iter().all(|a| a.len() == 6));
        let g = graph(7, 3);
        assert_eq!(g.len(), 35);
        assert!(g.adjacency.iter().all(|a| a.len() == 12));
        assert_eq!(g.shell_of[g.target], 0);
    }

    #[test]
    fn j31_is_triangle() {
        let g = graph(3, 1);
        assert_eq!(g.len(), 3);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(g.are_adjacent(u, v), u != v);
            }
        }
        assert!(verify_structure(&g).passed());
    }

    #[test]
    fn j21_has_no_triangle_but_passes_structure() {
        let g = graph(2, 1);
        assert!(g.find_triangle().is_none());
        assert!(verify_structure(&g).passed());
    }

    #[test]
    fn caps_are_enforced() {
        let params = JohnsonParams::new(40, 20).unwrap();
        let err = enumerate_graph(params, &SubsetState::first_k(params)).unwrap_err();
        assert!(matches!(err, Error::Resource { what: "vertices", .. }));

        let params = JohnsonParams::new(100_000, 1).unwrap();
        let err = enumerate_graph(params, &SubsetState::first_k(params)).unwrap_err();
        assert!(matches!(err, Error::Resource { what: "directed edges", .. }));

        let g = graph(5, 2);
        let tight = Caps { max_solve_vertices: 5, ..Caps::default() };
        assert!(solve_hitting_exact_with(&g, 0.0, tight).is_err());
    }

    #[test]
    fn shell_counts() {
        let g = graph(5, 2);
        let r = verify_shell_counts(&g);
        assert!(r.passed(), "{r}");
        let g = graph(6, 3);
        let mut counts = [0; 4];
        for &d in &g.shell_of {
            counts[d as usize] += 1;
        }
        assert_eq!(counts, [1, 9, 9, 1]);
    }

    #[test]
    fn j42_distance_one_vertex() {
        let g = graph(4, 2);
        let u = (0..g.len()).find(|&u| g.shell_of[u] == 1).unwrap();
        let (q, _, p) = vertex_shell_transitions(&g, u);
        assert_eq!(q, ratio(1, 4));
        assert_eq!(p, ratio(1, 4));
    }

    #[test]
    fn lumpability_small() {
        let g = graph(5, 2);
        let u = (0..g.len()).find(|&u| g.shell_of[u] == 1).unwrap();
        assert_eq!(vertex_shell_transitions(&g, u), (ratio(1, 6), ratio(1, 2), ratio(1, 3)));
        assert_eq!(vertex_shell_transitions(&g, g.target), (ratio(0, 1), ratio(0, 1), ratio(1, 1)));
        assert!(verify_lumpability(&g).unwrap().passed());
        assert!(verify_lumpability(&graph(7, 3)).unwrap().passed());
    }

    #[test]
    fn full_solve_j52() {
        let g = graph(5, 2);
        assert_eq!(solve_hitting_exact(&g, 0.0).unwrap(), vec![ratio(0, 1), ratio(9, 1), ratio(21, 2)]);
        let h = solve_hitting_exact(&g, 1.0).unwrap();
        let want = 6.0 + 3.0 * (-1f64).exp();
        assert!((numeric::rational_to_f64(&h[1]) - want).abs() < 1e-14);
    }

    #[test]
    fn full_solve_uniform_in_shells() {
        // The solver itself errors on non-uniform shells.
        let g = graph(6, 3);
        assert_eq!(solve_hitting_exact(&g, 0.0).unwrap().len(), 4);
    }

    #[test]
    fn lumped_fast_path_agrees() {
        for (n, k) in [(5, 2), (7, 3), (8, 4)] {
            let g = graph(n, k);
            let chain = DistanceChain::new(g.params, 0.0).unwrap();
            assert_eq!(solve_hitting_lumped(&chain).unwrap(), solve_hitting_exact(&g, 0.0).unwrap());
        }
        let chain = DistanceChain::new(JohnsonParams::new(5, 2).unwrap(), 1.0).unwrap();
        assert!(solve_hitting_lumped(&chain).is_err());
    }

    #[test]
    fn shell_distributions_agree() {
        let g = graph(7, 3);
        let chain = DistanceChain::new(g.params, 0.0).unwrap();
        let start = (0..g.len()).find(|&u| g.shell_of[u] == 1).unwrap();
        for t in 0..6 {
            let full = full_state_distribution_at(&g, start, t);
            let lumped = lumped_distribution_at(&chain, 1, t);
            for (a, b) in full.iter().zip(&lumped) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn suite_up_to_six() {
        let report = run_suite(&SuiteOptions::new(6)).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.checks.iter().any(|c| c.name.contains("J(2,1) chain checks")));
    }
}
