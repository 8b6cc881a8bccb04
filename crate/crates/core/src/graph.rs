//! Scattering of a free particle on metric graphs with Kirchhoff–Neumann
//! vertices, solved through the path-amplitude recursion.
//!
//! Each directed edge `l → a` carries an unknown `p_{la}`, the amplitude to
//! leave through the exit lead having last traversed `l → a`:
//!
//! ```text
//! p_{la} = z ( r_a p_{al} + t_a Σ_{b ~ a, b ≠ l} p_{ab} + t_a δ_{a,exit} ),   z = e^{ikℓ}
//! ```
//!
//! and the lead-to-lead amplitude is `T = t_entry Σ_a p_{entry,a}`.

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-10;
const CLOSED_FORM_GUARD: f64 = 1e-9;

/// Graph description as accepted in JSON configs:
/// `{"n": 3, "edges": [[0,1],[1,2],[0,2]], "leads": [0,1]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub leads: Vec<usize>,
    #[serde(default = "unit_length", skip_serializing_if = "is_unit")]
    pub edge_length: f64,
}

fn unit_length() -> f64 {
    1.0
}

fn is_unit(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    n: usize,
    adjacency: Vec<Vec<bool>>,
    leads: Vec<usize>,
    edge_length: f64,
}

impl MetricGraph {
    pub fn new(n: usize, edges: &[[usize; 2]], leads: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut adjacency = vec![vec![false; n]; n];
        for &[a, b] in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        let mut seen = vec![false; n];
        for &l in leads {
            if l >= n {
                return Err(Error::InvalidGraph(format!("lead vertex {l} out of range")));
            }
            if std::mem::replace(&mut seen[l], true) {
                return Err(Error::InvalidGraph(format!("two leads on vertex {l}")));
            }
        }
        Ok(MetricGraph { n, adjacency, leads: leads.to_vec(), edge_length: 1.0 })
    }

    pub fn with_edge_length(mut self, ell: f64) -> Result<Self> {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::InvalidGraph(format!("edge length must be positive, got {ell}")));
        }
        self.edge_length = ell;
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn leads(&self) -> &[usize] {
        &self.leads
    }

    pub fn edge_length(&self) -> f64 {
        self.edge_length
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&b| self.adjacency[a][b])
    }

    /// First lead is the entry port, second the exit port.
    pub fn ports(&self) -> Result<(usize, usize)> {
        match self.leads[..] {
            [entry] if self.n == 1 => Ok((entry, entry)),
            [entry, exit, ..] => Ok((entry, exit)),
            _ => Err(Error::InvalidGraph("graph needs two leads".into())),
        }
    }

    pub fn spec(&self) -> GraphSpec {
        let edges = (0..self.n)
            .flat_map(|a| self.neighbors(a).filter(move |&b| b > a).map(move |b| [a, b]))
            .collect();
        GraphSpec { n: self.n, edges, leads: self.leads.clone(), edge_length: self.edge_length }
    }

    fn connected(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(a) = queue.pop_front() {
            if a == to {
                return true;
            }
            for b in self.neighbors(a) {
                if !std::mem::replace(&mut seen[b], true) {
                    queue.push_back(b);
                }
            }
        }
        false
    }
}

impl TryFrom<GraphSpec> for MetricGraph {
    type Error = Error;

    fn try_from(spec: GraphSpec) -> Result<Self> {
        MetricGraph::new(spec.n, &spec.edges, &spec.leads)?.with_edge_length(spec.edge_length)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexCoeffs {
    pub degree: Vec<usize>,
    pub t: Vec<f64>,
    pub r: Vec<f64>,
}

/// Degrees count internal edges plus attached leads; `t = 2/d`, `r = t − 1`.
/// A vertex with neither is given `t = r = 0` (it scatters nothing).
pub fn vertex_coeffs(graph: &MetricGraph) -> VertexCoeffs {
    let degree: Vec<usize> =
        (0..graph.n).map(|a| graph.neighbors(a).count() + usize::from(graph.leads.contains(&a))).collect();
    let t: Vec<f64> = degree.iter().map(|&d| if d == 0 { 0.0 } else { 2.0 / d as f64 }).collect();
    let r = degree.iter().zip(&t).map(|(&d, &t)| if d == 0 { 0.0 } else { t - 1.0 }).collect();
    VertexCoeffs { degree, t, r }
}

#[derive(Debug, Clone)]
pub struct PathSolution {
    pub z: Complex64,
    pub entry: usize,
    pub exit: usize,
    index: HashMap<(usize, usize), usize>,
    p: Vec<Complex64>,
    pub residual: f64,
}

impl PathSolution {
    /// `p_{la}`; `None` unless `l ~ a`.
    pub fn p(&self, l: usize, a: usize) -> Option<Complex64> {
        self.index.get(&(l, a)).map(|&i| self.p[i])
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

fn check_ports(graph: &MetricGraph, entry: usize, exit: usize) -> Result<()> {
    for v in [entry, exit] {
        if !graph.leads.contains(&v) {
            return Err(Error::InvalidGraph(format!("vertex {v} carries no lead")));
        }
    }
    if entry == exit && graph.n > 1 {
        return Err(Error::InvalidGraph("entry and exit must differ".into()));
    }
    if !graph.connected(entry, exit) {
        return Err(Error::InvalidGraph(format!("vertices {entry} and {exit} are not connected")));
    }
    Ok(())
}

pub fn solve_paths(graph: &MetricGraph, entry: usize, exit: usize, k: f64) -> Result<PathSolution> {
    check_ports(graph, entry, exit)?;
    let vc = vertex_coeffs(graph);
    let z = Complex64::from_polar(1.0, k * graph.edge_length);

    let edges: Vec<(usize, usize)> = (0..graph.n).flat_map(|l| graph.neighbors(l).map(move |a| (l, a))).collect();
    let index: HashMap<_, _> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let m = edges.len();

    let mut mat = DMatrix::<Complex64>::identity(m, m);
    let mut rhs = DVector::<Complex64>::zeros(m);
    for (row, &(l, a)) in edges.iter().enumerate() {
        mat[(row, index[&(a, l)])] -= z * vc.r[a];
        for b in graph.neighbors(a).filter(|&b| b != l) {
            mat[(row, index[&(a, b)])] -= z * vc.t[a];
        }
        if a == exit {
            rhs[row] = z * vc.t[a];
        }
    }

    let singular = || Error::SingularSystem { k };
    let p = mat.clone().lu().solve(&rhs).ok_or_else(singular)?;
    let residual = (&mat * &p - &rhs).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if residual.is_nan() || residual >= RESIDUAL_TOL {
        return Err(singular());
    }
    Ok(PathSolution { z, entry, exit, index, p: p.iter().copied().collect(), residual })
}

/// Lead-to-lead amplitude. A single vertex with no edges transmits fully.
pub fn transmission_graph(graph: &MetricGraph, entry: usize, exit: usize, k: f64) -> Result<Complex64> {
    check_ports(graph, entry, exit)?;
    if graph.n == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let sol = solve_paths(graph, entry, exit, k)?;
    let t_entry = vertex_coeffs(graph).t[entry];
    Ok(graph.neighbors(entry).map(|a| sol.p(entry, a).unwrap()).sum::<Complex64>() * t_entry)
}

/// Closed form for the `n`-cycle with leads on adjacent vertices.
pub fn cyclic_closed_form(n: usize, k: f64, ell: f64) -> Result<Complex64> {
    if n < 3 {
        return Err(Error::InvalidGraph(format!("cyclic closed form needs n ≥ 3, got {n}")));
    }
    let z = |m: usize| Complex64::from_polar(1.0, m as f64 * k * ell);
    let num = (1.0 - z(n)) * (z(1) + z(n - 1)) * 4.0;
    let den = 9.0 - z(2) - z(2 * (n - 1)) - z(n) * 8.0 + z(2 * n);
    if den.norm() <= CLOSED_FORM_GUARD {
        return Err(Error::Pole { what: "cyclic transmission denominator", at: k });
    }
    Ok(num / den)
}

/// The cycle `C_n` with leads on vertices 0 and 1.
pub fn cycle_graph(n: usize) -> Result<MetricGraph> {
    if n < 2 {
        return Err(Error::InvalidGraph(format!("cycle needs at least 2 vertices, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|a| [a, (a + 1) % n]).collect();
    MetricGraph::new(n, &edges, &[0, 1])
}

/// Cycles in series. Cycle `i` has its in-port at its vertex 0 and its
/// out-port at vertex `c/2` (the antipode, or the neighbour of vertex 0 for a
/// triangle); each out-port is joined by one edge to the next in-port. Leads
/// sit on the first in-port and the last out-port.
pub fn series_graph(cycles: &[usize]) -> Result<MetricGraph> {
    if cycles.is_empty() {
        return Err(Error::InvalidGraph("series needs at least one cycle".into()));
    }
    let mut edges = Vec::new();
    let mut offset = 0;
    let mut prev_out: Option<usize> = None;
    for &c in cycles {
        if c < 3 {
            return Err(Error::InvalidGraph(format!("cycle size must be ≥ 3, got {c}")));
        }
        edges.extend((0..c).map(|a| [offset + a, offset + (a + 1) % c]));
        if let Some(out) = prev_out {
            edges.push([out, offset]);
        }
        prev_out = Some(offset + c / 2);
        offset += c;
    }
    MetricGraph::new(offset, &edges, &[0, prev_out.unwrap()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ks(samples: usize) -> impl Iterator<Item = f64> {
        (0..samples).map(move |i| 2.0 * PI * (i as f64 + 0.5) / samples as f64)
    }

    #[test]
    fn vertex_coeff_examples() {
        let single = MetricGraph::new(1, &[], &[0]).unwrap();
        let vc = vertex_coeffs(&single);
        assert_eq!((vc.degree[0], vc.t[0], vc.r[0]), (1, 2.0, 1.0));

        let c3 = cycle_graph(3).unwrap();
        let vc = vertex_coeffs(&c3);
        assert_eq!(vc.degree, vec![3, 3, 2]);
        assert!((vc.t[0] - 2.0 / 3.0).abs() < 1e-15 && (vc.r[0] + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!((vc.t[2], vc.r[2]), (1.0, 0.0));
    }

    #[test]
    fn invalid_graphs() {
        assert!(MetricGraph::new(0, &[], &[]).is_err());
        assert!(MetricGraph::new(2, &[[0, 2]], &[0]).is_err());
        assert!(MetricGraph::new(2, &[[1, 1]], &[0]).is_err());
        assert!(MetricGraph::new(2, &[[0, 1]], &[0, 0]).is_err());
        let g = MetricGraph::new(3, &[[0, 1]], &[0, 2]).unwrap();
        assert!(matches!(transmission_graph(&g, 0, 2, 1.0), Err(Error::InvalidGraph(_))));
        assert!(transmission_graph(&g, 0, 1, 1.0).is_err());
        assert!(MetricGraph::new(1, &[], &[0]).unwrap().with_edge_length(0.0).is_err());
    }

    #[test]
    fn single_vertex_is_pure_transmission() {
        let g = MetricGraph::new(1, &[], &[0]).unwrap();
        assert_eq!(transmission_graph(&g, 0, 0, 0.7).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn two_vertices() {
        let g = cycle_graph(2).unwrap();
        for k in ks(50) {
            let sol = solve_paths(&g, 0, 1, k).unwrap();
            let vc = vertex_coeffs(&g);
            let z = sol.z;
            let want = vc.t[1] * z / (1.0 - z * z * vc.r[0] * vc.r[1]);
            assert!((sol.p(0, 1).unwrap() - want).norm() < 1e-12);
            assert!((transmission_graph(&g, 0, 1, k).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn triangle_closed_form() {
        let g = cycle_graph(3).unwrap();
        for k in ks(200) {
            let z = Complex64::from_polar(1.0, k);
            let want = z * 4.0 * (1.0 + z * 2.0 + z * z * 2.0 + z.powi(3))
                / (9.0 + z * 9.0 + z * z * 8.0 - z.powi(4) - z.powi(5));
            let got = transmission_graph(&g, 0, 1, k).unwrap();
            assert!((got.norm() - want.norm()).abs() < 1e-12);
        }
        let half = transmission_graph(&g, 0, 1, PI / 2.0).unwrap();
        assert!((half.norm_sqr() - 0.5).abs() < 1e-12);
        assert!((cyclic_closed_form(3, PI / 2.0, 1.0).unwrap().norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cycles_match_closed_form() {
        for n in 3..=10 {
            let g = cycle_graph(n).unwrap();
            for k in ks(97) {
                let Ok(closed) = cyclic_closed_form(n, k, 1.0) else { continue };
                let got = transmission_graph(&g, 0, 1, k).unwrap();
                assert!((got.norm() - closed.norm()).abs() < 1e-9, "n={n} k={k}");
            }
        }
        assert!(matches!(cyclic_closed_form(3, 0.0, 1.0), Err(Error::Pole { .. })));
        assert!(cyclic_closed_form(2, 0.3, 1.0).is_err());
    }

    #[test]
    fn edge_length_enters_as_k_ell() {
        let g = cycle_graph(5).unwrap();
        let long = g.clone().with_edge_length(2.0).unwrap();
        let a = transmission_graph(&g, 0, 1, 1.4).unwrap();
        let b = transmission_graph(&long, 0, 1, 0.7).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn flux_bound_reciprocity_residual() {
        let graphs = [
            cycle_graph(3).unwrap(),
            cycle_graph(8).unwrap(),
            series_graph(&[3, 3, 3]).unwrap(),
            series_graph(&[3, 4, 3]).unwrap(),
            MetricGraph::new(4, &[[0, 1], [1, 2], [2, 3], [3, 0], [0, 2]], &[1, 3]).unwrap(),
        ];
        for g in &graphs {
            let (entry, exit) = g.ports().unwrap();
            for k in ks(300) {
                let Ok(sol) = solve_paths(g, entry, exit, k) else { continue };
                assert!(sol.residual < 1e-10);
                let fwd = transmission_graph(g, entry, exit, k).unwrap();
                let back = transmission_graph(g, exit, entry, k).unwrap();
                assert!(fwd.norm_sqr() <= 1.0 + 1e-9);
                assert!((fwd.norm() - back.norm()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn degree_two_chain_is_transparent() {
        for n in 2..8 {
            let edges: Vec<_> = (0..n - 1).map(|a| [a, a + 1]).collect();
            let g = MetricGraph::new(n, &edges, &[0, n - 1]).unwrap();
            for k in ks(20) {
                let t = transmission_graph(&g, 0, n - 1, k).unwrap();
                assert!((t.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn series_shape() {
        let g = series_graph(&[3]).unwrap();
        assert_eq!(g, cycle_graph(3).unwrap());
        let g = series_graph(&[3, 4, 3]).unwrap();
        assert_eq!(g.n_vertices(), 10);
        assert_eq!(g.leads(), &[0, 8]);
        assert!(g.adjacent(1, 3) && g.adjacent(5, 7));
        assert!(series_graph(&[3, 2]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec: GraphSpec = serde_json::from_str(r#"{"n": 3, "edges": [[0,1],[1,2],[0,2]], "leads": [0,1]}"#).unwrap();
        let g = MetricGraph::try_from(spec.clone()).unwrap();
        assert_eq!(g, cycle_graph(3).unwrap());
        assert_eq!(g.spec().n, 3);
        assert_eq!(serde_json::to_string(&spec).unwrap(), r#"{"n":3,"edges":[[0,1],[1,2],[0,2]],"leads":[0,1]}"#);
    }
}
