//! Per-pair features over a co-authorship graph.
//!
//! Three features per author pair: shortest path hop distance (Dijkstra on
//! unit weights), sum of neighbors (cardinality of the union of the two
//! neighbor sets, common neighbors counted once), and sum of papers
//! (publication counts added). All are symmetric in (u, v).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};
use crate::graph::{AuthorId, CoauthorGraph};

const UNREACHED: u32 = u32::MAX;

/// Hop distance between two nodes. `Unreachable` orders above every finite
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn is_unreachable(self) -> bool {
        matches!(self, Distance::Unreachable)
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => write!(f, "unreachable"),
        }
    }
}

/// Which of the three features to compute. Schema order is fixed:
/// shortest_distance, sum_of_neighbors, sum_of_papers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureMask {
    pub distance: bool,
    pub neighbors: bool,
    pub papers: bool,
}

impl FeatureMask {
    pub const ALL: FeatureMask = FeatureMask {
        distance: true,
        neighbors: true,
        papers: true,
    };
    pub const DISTANCE_ONLY: FeatureMask = FeatureMask {
        distance: true,
        neighbors: false,
        papers: false,
    };
    pub const NEIGHBORS_ONLY: FeatureMask = FeatureMask {
        distance: false,
        neighbors: true,
        papers: false,
    };

    pub fn active_names(&self) -> Vec<&'static str> {
        let mut names = Vec::new();
        if self.distance {
            names.push("shortest_distance");
        }
        if self.neighbors {
            names.push("sum_of_neighbors");
        }
        if self.papers {
            names.push("sum_of_papers");
        }
        names
    }

    pub fn count(&self) -> usize {
        usize::from(self.distance) + usize::from(self.neighbors) + usize::from(self.papers)
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }
}

/// Extraction options.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExtractOptions {
    /// Compute distances on the graph with the pair's direct edge removed.
    /// Off by default: adjacent pairs then always get distance 1.
    pub exclude_direct_edge: bool,
    /// Drop u and v themselves from the neighbor union before counting.
    /// Off by default: the union is taken literally.
    pub exclude_endpoints_from_union: bool,
}

/// Raw per-pair feature values; fields are populated per the mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairFeatures {
    pub distance: Option<Distance>,
    pub neighbors: Option<u32>,
    pub papers: Option<u32>,
}

fn check_pair(g: &CoauthorGraph, u: AuthorId, v: AuthorId) -> Result<()> {
    if !g.contains_id(u) {
        return Err(Error::UnknownAuthor(u.get()));
    }
    if !g.contains_id(v) {
        return Err(Error::UnknownAuthor(v.get()));
    }
    if u == v {
        return Err(Error::SelfPair {
            u: u.get(),
            v: v.get(),
        });
    }
    Ok(())
}

/// Dijkstra over unit edge weights from `src` (0-based index). `target`
/// enables early exit; `skip_edge` traverses as if that undirected edge
/// were absent. Returns 0-based distances with `UNREACHED` for no path.
fn dijkstra(
    g: &CoauthorGraph,
    src: usize,
    target: Option<usize>,
    skip_edge: Option<(usize, usize)>,
) -> Vec<u32> {
    let n = g.n() as usize;
    let mut dist = vec![UNREACHED; n];
    let mut heap: BinaryHeap<Reverse<(u32, usize)>> = BinaryHeap::new();
    dist[src] = 0;
    heap.push(Reverse((0, src)));
    while let Some(Reverse((d, node))) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        if target == Some(node) {
            break;
        }
        for &nbr in g.adj_at(node) {
            let w = (nbr - 1) as usize;
            if let Some((a, b)) = skip_edge {
                if (node == a && w == b) || (node == b && w == a) {
                    continue;
                }
            }
            let nd = d + 1;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(Reverse((nd, w)));
            }
        }
    }
    dist
}

/// Shortest hop distance between `u` and `v`. With `exclude_direct_edge`
/// the direct edge (u, v), if any, is ignored during traversal; the graph
/// itself is never modified.
pub fn shortest_distance(
    g: &CoauthorGraph,
    u: AuthorId,
    v: AuthorId,
    exclude_direct_edge: bool,
) -> Result<Distance> {
    check_pair(g, u, v)?;
    let (a, b) = ((u.get() - 1) as usize, (v.get() - 1) as usize);
    let skip = exclude_direct_edge.then_some((a, b));
    let dist = dijkstra(g, a, Some(b), skip);
    Ok(match dist[b] {
        UNREACHED => Distance::Unreachable,
        d => Distance::Finite(d),
    })
}

/// Single-source sweep: distances from `u` to every node.
pub fn distances_from(g: &CoauthorGraph, u: AuthorId) -> Result<Vec<Distance>> {
    if !g.contains_id(u) {
        return Err(Error::UnknownAuthor(u.get()));
    }
    let dist = dijkstra(g, (u.get() - 1) as usize, None, None);
    Ok(dist
        .into_iter()
        .map(|d| {
            if d == UNREACHED {
                Distance::Unreachable
            } else {
                Distance::Finite(d)
            }
        })
        .collect())
}

fn union_count(a: &[u32], b: &[u32], drop: Option<(u32, u32)>) -> u32 {
    let (mut i, mut j) = (0usize, 0usize);
    let mut count = 0u32;
    let keep = |x: u32| match drop {
        Some((p, q)) => x != p && x != q,
        None => true,
    };
    while i < a.len() && j < b.len() {
        let (x, y) = (a[i], b[j]);
        let next = if x < y {
            i += 1;
            x
        } else if y < x {
            j += 1;
            y
        } else {
            i += 1;
            j += 1;
            x
        };
        if keep(next) {
            count += 1;
        }
    }
    for &x in &a[i..] {
        if keep(x) {
            count += 1;
        }
    }
    for &y in &b[j..] {
        if keep(y) {
            count += 1;
        }
    }
    count
}

/// |N(u) ∪ N(v)|: total distinct neighbors of the pair, common neighbors
/// counted once. The endpoints themselves are not removed from the union.
pub fn sum_of_neighbors(g: &CoauthorGraph, u: AuthorId, v: AuthorId) -> Result<u32> {
    check_pair(g, u, v)?;
    Ok(union_count(g.neighbors(u)?, g.neighbors(v)?, None))
}

fn sum_of_neighbors_opt(
    g: &CoauthorGraph,
    u: AuthorId,
    v: AuthorId,
    exclude_endpoints: bool,
) -> Result<u32> {
    check_pair(g, u, v)?;
    let drop = exclude_endpoints.then_some((u.get(), v.get()));
    Ok(union_count(g.neighbors(u)?, g.neighbors(v)?, drop))
}

/// paper_count(u) + paper_count(v).
pub fn sum_of_papers(g: &CoauthorGraph, u: AuthorId, v: AuthorId) -> Result<u32> {
    check_pair(g, u, v)?;
    Ok(g.paper_count(u)? + g.paper_count(v)?)
}

/// Node appearance count above which a full single-source sweep is cached
/// instead of running one early-exit search per pair.
const SWEEP_THRESHOLD: usize = 4;

/// Compute the masked features for every pair, in input order. Errors carry
/// the offending pair's identity.
pub fn extract(
    g: &CoauthorGraph,
    pairs: &[(AuthorId, AuthorId)],
    mask: FeatureMask,
    opts: ExtractOptions,
) -> Result<Vec<PairFeatures>> {
    if mask.is_empty() {
        return Err(Error::InvalidConfig("feature mask selects nothing".into()));
    }

    // Sweep cache only applies when the traversal graph is the same for
    // every pair, i.e. no per-pair edge exclusion.
    let mut sweeps: HashMap<u32, Vec<u32>> = HashMap::new();
    if mask.distance && !opts.exclude_direct_edge {
        let mut uses: HashMap<u32, usize> = HashMap::new();
        for &(u, v) in pairs {
            *uses.entry(u.get()).or_default() += 1;
            *uses.entry(v.get()).or_default() += 1;
        }
        for (&id, &n) in uses.iter() {
            if n >= SWEEP_THRESHOLD && g.contains_id(AuthorId(id)) {
                sweeps.insert(id, dijkstra(g, (id - 1) as usize, None, None));
            }
        }
    }

    let mut out = Vec::with_capacity(pairs.len());
    for &(u, v) in pairs {
        check_pair(g, u, v).map_err(|e| e.at_pair(u.get(), v.get()))?;
        let distance = if mask.distance {
            let d = if let Some(sweep) = sweeps.get(&u.get()) {
                match sweep[(v.get() - 1) as usize] {
                    UNREACHED => Distance::Unreachable,
                    d => Distance::Finite(d),
                }
            } else if let Some(sweep) = sweeps.get(&v.get()) {
                match sweep[(u.get() - 1) as usize] {
                    UNREACHED => Distance::Unreachable,
                    d => Distance::Finite(d),
                }
            } else {
                shortest_distance(g, u, v, opts.exclude_direct_edge)
                    .map_err(|e| e.at_pair(u.get(), v.get()))?
            };
            Some(d)
        } else {
            None
        };
        let neighbors = if mask.neighbors {
            Some(
                sum_of_neighbors_opt(g, u, v, opts.exclude_endpoints_from_union)
                    .map_err(|e| e.at_pair(u.get(), v.get()))?,
            )
        } else {
            None
        };
        let papers = if mask.papers {
            Some(sum_of_papers(g, u, v).map_err(|e| e.at_pair(u.get(), v.get()))?)
        } else {
            None
        };
        out.push(PairFeatures {
            distance,
            neighbors,
            papers,
        });
    }
    Ok(out)
}
