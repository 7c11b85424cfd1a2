//! Directed Hamiltonian path to maximum welfare on a star.
//!
//! The center `a_c` values nothing. Vertex agents and arc agents are leaves;
//! walking the center's holding along a Hamiltonian path from `s` earns one
//! extra unit per trade, and only such a walk reaches `3|V| + |A| - 1`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Agent, Instance, InstanceParts, Network, PreferenceProfile, ValueFunction};
use crate::reductions::TooLarge;

/// Digraph with named vertices; arcs and `start` index into `vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub vertices: Vec<String>,
    pub arcs: Vec<(usize, usize)>,
    pub start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DigraphError {
    #[error("start vertex {0} has an incoming arc")]
    StartHasIncomingArc(String),
    #[error("arc {0} names a vertex that does not exist")]
    ArcOutOfRange(usize),
    #[error("arc {0} is a loop")]
    Loop(usize),
    #[error("arc {0} is listed twice")]
    DuplicateArc(usize),
    #[error("start vertex is out of range")]
    StartOutOfRange,
}

impl Digraph {
    pub fn validate(&self) -> Result<(), DigraphError> {
        let nv = self.vertices.len();
        if self.start >= nv {
            return Err(DigraphError::StartOutOfRange);
        }
        for (i, &(u, v)) in self.arcs.iter().enumerate() {
            if u >= nv || v >= nv {
                return Err(DigraphError::ArcOutOfRange(i));
            }
            if u == v {
                return Err(DigraphError::Loop(i));
            }
            if self.arcs[..i].contains(&(u, v)) {
                return Err(DigraphError::DuplicateArc(i));
            }
            if v == self.start {
                return Err(DigraphError::StartHasIncomingArc(self.vertices[v].clone()));
            }
        }
        Ok(())
    }

    pub fn without_arc(&self, arc: (usize, usize)) -> Digraph {
        Digraph { arcs: self.arcs.iter().copied().filter(|&a| a != arc).collect(), ..self.clone() }
    }
}

/// The star instance (with values) and the welfare threshold `3|V|+|A|-1`.
#[derive(Clone, Debug)]
pub struct StarWelfareGadget {
    pub instance: Instance,
    pub threshold: i64,
}

/// Agent order: `a_c`, then one agent per vertex, then one per arc, each in
/// input order. Agent `x` starts with object `o_x`.
pub fn digraph_to_star_welfare(d: &Digraph) -> Result<StarWelfareGadget, DigraphError> {
    d.validate()?;
    let nv = d.vertices.len();
    let na = d.arcs.len();
    let total = 1 + nv + na;
    let vertex_obj = |v: usize| 1 + v;
    let arc_obj = |e: usize| 1 + nv + e;

    let mut rows = vec![vec![0i64; total]; total];
    for v in 0..nv {
        let row = &mut rows[vertex_obj(v)];
        row[vertex_obj(v)] = 1;
        if v == d.start {
            row[0] = 2;
        }
        for (e, &(_, head)) in d.arcs.iter().enumerate() {
            if head == v {
                row[arc_obj(e)] = 2;
            }
        }
    }
    for (e, &(tail, _)) in d.arcs.iter().enumerate() {
        let row = &mut rows[arc_obj(e)];
        row[arc_obj(e)] = 1;
        row[vertex_obj(tail)] = 2;
    }

    let mut labels = vec![String::from("a_c")];
    labels.extend(d.vertices.iter().map(|v| format!("a_{v}")));
    labels.extend(d.arcs.iter().map(|&(u, v)| format!("a_{}->{}", d.vertices[u], d.vertices[v])));

    let values = ValueFunction::new(rows);
    let prefs = PreferenceProfile::from_values(&values);
    let parts = InstanceParts::new(total, Network::star(total, Agent(1)), prefs)
        .with_values(values)
        .with_labels(labels);
    let instance = Instance::new(parts).expect("gadget construction is valid");
    Ok(StarWelfareGadget { instance, threshold: (3 * nv + na) as i64 - 1 })
}

/// Is there a directed path from `start` through every vertex? Up to 10 vertices.
pub fn brute_ham_path(d: &Digraph) -> Result<bool, TooLarge> {
    const LIMIT: usize = 10;
    let nv = d.vertices.len();
    if nv > LIMIT {
        return Err(TooLarge { size: nv, limit: LIMIT });
    }
    if nv == 0 {
        return Ok(false);
    }
    let mut adj = vec![vec![false; nv]; nv];
    for &(u, v) in &d.arcs {
        adj[u][v] = true;
    }
    fn extend(adj: &[Vec<bool>], at: usize, visited: &mut [bool], count: usize) -> bool {
        if count == visited.len() {
            return true;
        }
        for next in 0..visited.len() {
            if adj[at][next] && !visited[next] {
                visited[next] = true;
                if extend(adj, next, visited, count + 1) {
                    return true;
                }
                visited[next] = false;
            }
        }
        false
    }
    let mut visited = vec![false; nv];
    visited[d.start] = true;
    Ok(extend(&adj, d.start, &mut visited, 1))
}
