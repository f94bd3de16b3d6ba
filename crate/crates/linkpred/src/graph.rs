//! Undirected co-authorship graph with per-author publication counts.
//!
//! Authors get dense ids 1..=N in first-appearance order. An edge (u, v)
//! exists iff u and v appear together on at least one publication;
//! multiplicity is collapsed to a single edge. Adjacency is stored as
//! per-node sorted neighbor lists rather than the dense matrix form;
//! [`CoauthorGraph::to_dense_matrix`] recovers the matrix for small graphs.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::ingest::Publication;

/// Dense 1-based author identifier, assigned in first-appearance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuthorId(pub u32);

impl AuthorId {
    pub fn get(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for AuthorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Bijective author-name <-> id index.
#[derive(Debug, Clone, Default)]
pub struct AuthorIndex {
    name_to_id: HashMap<String, AuthorId>,
    id_to_name: Vec<String>,
}

impl AuthorIndex {
    pub fn len(&self) -> usize {
        self.id_to_name.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_name.is_empty()
    }

    pub fn id_of(&self, name: &str) -> Option<AuthorId> {
        self.name_to_id.get(name).copied()
    }

    pub fn name_of(&self, id: AuthorId) -> Option<&str> {
        self.id_to_name
            .get((id.0 as usize).wrapping_sub(1))
            .map(|s| s.as_str())
    }

    fn get_or_insert(&mut self, name: &str) -> AuthorId {
        if let Some(&id) = self.name_to_id.get(name) {
            return id;
        }
        let id = AuthorId(self.id_to_name.len() as u32 + 1);
        self.id_to_name.push(name.to_string());
        self.name_to_id.insert(name.to_string(), id);
        id
    }
}

/// Immutable undirected co-authorship graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoauthorGraph {
    /// Sorted neighbor ids per node, 0-based position for id i+1.
    adj: Vec<Vec<u32>>,
    /// Publications each author appears on.
    paper_count: Vec<u32>,
    edge_count: usize,
}

impl CoauthorGraph {
    /// Number of nodes.
    pub fn n(&self) -> u32 {
        self.adj.len() as u32
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn contains_id(&self, u: AuthorId) -> bool {
        u.0 >= 1 && (u.0 as usize) <= self.adj.len()
    }

    fn check_id(&self, u: AuthorId) -> Result<usize> {
        if self.contains_id(u) {
            Ok((u.0 - 1) as usize)
        } else {
            Err(Error::UnknownAuthor(u.0))
        }
    }

    /// Sorted neighbor set of `u`. Never contains `u` itself.
    pub fn neighbors(&self, u: AuthorId) -> Result<&[u32]> {
        let i = self.check_id(u)?;
        Ok(&self.adj[i])
    }

    pub fn degree(&self, u: AuthorId) -> Result<usize> {
        Ok(self.neighbors(u)?.len())
    }

    /// Number of publications author `u` appears on.
    pub fn paper_count(&self, u: AuthorId) -> Result<u32> {
        let i = self.check_id(u)?;
        Ok(self.paper_count[i])
    }

    pub fn contains_edge(&self, u: AuthorId, v: AuthorId) -> Result<bool> {
        let i = self.check_id(u)?;
        self.check_id(v)?;
        Ok(self.adj[i].binary_search(&v.0).is_ok())
    }

    /// All edges as (u, v) pairs with u < v, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (AuthorId, AuthorId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, nbrs)| {
            let u = i as u32 + 1;
            nbrs.iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (AuthorId(u), AuthorId(v)))
        })
    }

    /// Neighbor slice by 0-based index, used by traversal loops.
    pub(crate) fn adj_at(&self, idx: usize) -> &[u32] {
        &self.adj[idx]
    }

    /// Dense adjacency matrix (1 = edge). Debug export for small graphs;
    /// memory is O(n^2).
    pub fn to_dense_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.adj.len();
        let mut m = vec![vec![0u8; n]; n];
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                m[i][(v - 1) as usize] = 1;
            }
        }
        m
    }

    /// Write the edge list, one `u v` pair per line with u < v.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", u.0, v.0)?;
        }
        Ok(())
    }

    /// Write the node table: `id<TAB>name<TAB>paper_count`.
    pub fn write_node_table<W: Write>(&self, index: &AuthorIndex, w: &mut W) -> io::Result<()> {
        for i in 0..self.adj.len() {
            let id = AuthorId(i as u32 + 1);
            let name = index.name_of(id).unwrap_or("");
            writeln!(w, "{}\t{}\t{}", id.0, name, self.paper_count[i])?;
        }
        Ok(())
    }

    /// Build a graph directly from an edge list over nodes 1..=n, with every
    /// paper count set to 1. Self-loops and out-of-range ids are rejected;
    /// duplicate edges collapse.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<CoauthorGraph> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidEdge {
                    u,
                    v,
                    msg: "self-loop".into(),
                });
            }
            if u < 1 || u > n || v < 1 || v > n {
                return Err(Error::InvalidEdge {
                    u,
                    v,
                    msg: format!("id out of range 1..={n}"),
                });
            }
            adj[(u - 1) as usize].push(v);
            adj[(v - 1) as usize].push(u);
        }
        let mut edge_count = 0;
        for nbrs in &mut adj {
            nbrs.sort_unstable();
            nbrs.dedup();
            edge_count += nbrs.len();
        }
        Ok(CoauthorGraph {
            adj,
            paper_count: vec![1; n as usize],
            edge_count: edge_count / 2,
        })
    }
}

/// Build the co-authorship graph and the author index from publications.
///
/// Node set = distinct author names in first-appearance order; an edge
/// connects every pair of co-authors on a publication; paper counts tally
/// how many publications list each author. Empty input gives the empty
/// graph.
pub fn build_graph(pubs: &[Publication]) -> (CoauthorGraph, AuthorIndex) {
    let mut index = AuthorIndex::default();
    let mut paper_count: Vec<u32> = Vec::new();
    let mut adj: Vec<Vec<u32>> = Vec::new();

    let mut ids: Vec<u32> = Vec::new();
    for publication in pubs {
        ids.clear();
        for name in &publication.authors {
            let id = index.get_or_insert(name);
            let i = (id.0 - 1) as usize;
            if i == paper_count.len() {
                paper_count.push(0);
                adj.push(Vec::new());
            }
            ids.push(id.0);
        }
        ids.sort_unstable();
        ids.dedup();
        for &id in &ids {
            paper_count[(id - 1) as usize] += 1;
        }
        for a in 0..ids.len() {
            for b in (a + 1)..ids.len() {
                adj[(ids[a] - 1) as usize].push(ids[b]);
                adj[(ids[b] - 1) as usize].push(ids[a]);
            }
        }
    }

    let mut edge_count = 0;
    for nbrs in &mut adj {
        nbrs.sort_unstable();
        nbrs.dedup();
        edge_count += nbrs.len();
    }
    (
        CoauthorGraph {
            adj,
            paper_count,
            edge_count: edge_count / 2,
        },
        index,
    )
}
