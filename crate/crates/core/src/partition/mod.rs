//! Zone partitions over an undirected zone graph.
//!
//! A [`Partition`] assigns each vertex of a [`Topology`] to one of `n`
//! clusters. Labels are kept canonical: the cluster holding the lowest
//! vertex index is cluster 0, the cluster holding the lowest vertex not in
//! cluster 0 is cluster 1, and so on. Two partitions are therefore equal iff
//! they group the vertices the same way.

mod enumerate;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

pub use enumerate::{connected_subsets_containing, enumerate_connected_partitions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("cluster count {n} outside 1..={vertices}")]
    ClusterCount { n: usize, vertices: usize },
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({0}, {1}) references a vertex outside the graph")]
    VertexOutOfRange(usize, usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("expected {expected} edge weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("exhaustive enumeration supports at most 64 vertices, got {0}")]
    TooLarge(usize),
    #[error("partition file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Topology {
    /// Edges are stored with the smaller endpoint first, in the given order.
    pub fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self, PartitionError> {
        let mut adjacency = vec![Vec::new(); num_vertices];
        let mut stored = Vec::with_capacity(edges.len());
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a == b {
                return Err(PartitionError::SelfLoop(a, b));
            }
            if a >= num_vertices || b >= num_vertices {
                return Err(PartitionError::VertexOutOfRange(a, b));
            }
            let e = (a.min(b), a.max(b));
            if stored.contains(&e) {
                return Err(PartitionError::DuplicateEdge(e.0, e.1));
            }
            stored.push(e);
            adjacency[a].push((b, k));
            adjacency[b].push((a, k));
        }
        Ok(Self { num_vertices, edges: stored, adjacency })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(neighbor, edge index)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let e = (a.min(b), a.max(b));
        self.edges.iter().position(|&x| x == e)
    }

    /// Connected components of the subgraph induced by `vertices`, each
    /// sorted, ordered by smallest member.
    pub fn components_of(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.num_vertices];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.num_vertices];
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(u, _) in &self.adjacency[v] {
                    if inside[u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.num_vertices).collect();
        self.components_of(&all).len() <= 1
    }
}

/// Assignment of vertices to `n` non-empty, canonically labelled clusters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<usize>,
    clusters: usize,
}

impl Partition {
    /// Relabels arbitrary cluster ids into canonical order. Every id that
    /// appears becomes one cluster, so the result is surjective by
    /// construction.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = BTreeMap::new();
        let mut canon = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            let c = *map.entry(l).or_insert(next);
            canon.push(c);
        }
        Self { clusters: map.len(), labels: canon }
    }

    pub fn from_clusters(num_vertices: usize, clusters: &[Vec<usize>]) -> Self {
        let mut labels = vec![usize::MAX; num_vertices];
        for (c, members) in clusters.iter().enumerate() {
            for &v in members {
                labels[v] = c;
            }
        }
        Self::from_labels(&labels)
    }

    /// Every vertex in its own cluster.
    pub fn singletons(num_vertices: usize) -> Self {
        Self::from_labels(&(0..num_vertices).collect::<Vec<_>>())
    }

    pub fn whole(num_vertices: usize) -> Self {
        Self::from_labels(&vec![0; num_vertices])
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    /// 0-based canonical label per vertex.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.clusters];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn crossing_edges(&self, topo: &Topology) -> Vec<usize> {
        topo.edges().iter().enumerate().filter(|(_, &(a, b))| self.labels[a] != self.labels[b]).map(|(k, _)| k).collect()
    }

    pub fn in_cluster_edges(&self, topo: &Topology) -> Vec<usize> {
        topo.edges().iter().enumerate().filter(|(_, &(a, b))| self.labels[a] == self.labels[b]).map(|(k, _)| k).collect()
    }

    /// Whether every cluster induces a connected subgraph.
    pub fn is_connected_in(&self, topo: &Topology) -> bool {
        self.clusters().iter().all(|members| topo.components_of(members).len() == 1)
    }

    /// Formats clusters with vertex names, e.g. `{1,3,4,5},{2}`.
    pub fn display_with<'a>(&'a self, names: &'a [u32]) -> PartitionDisplay<'a> {
        PartitionDisplay { partition: self, names }
    }

    /// Serializes as `zone_id -> cluster_label` lines (1-based labels),
    /// one per zone in vertex order.
    pub fn to_text(&self, zone_ids: &[u32]) -> String {
        let mut out = String::new();
        for (v, &c) in self.labels.iter().enumerate() {
            out.push_str(&format!("{} -> {}\n", zone_ids[v], c + 1));
        }
        out
    }

    /// Parses the format written by [`Partition::to_text`]. Lines starting
    /// with `#` and blank lines are ignored; every zone must appear once.
    pub fn parse_text(text: &str, zone_ids: &[u32]) -> Result<Self, PartitionError> {
        let mut labels = vec![None; zone_ids.len()];
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| PartitionError::Parse { line: idx + 1, msg };
            let (zone, label) = line.split_once("->").ok_or_else(|| err("expected `zone -> cluster`".into()))?;
            let zone: u32 = zone.trim().parse().map_err(|_| err(format!("bad zone id `{}`", zone.trim())))?;
            let label: usize = label.trim().parse().map_err(|_| err(format!("bad cluster label `{}`", label.trim())))?;
            let v = zone_ids.iter().position(|&z| z == zone).ok_or_else(|| err(format!("unknown zone {zone}")))?;
            if labels[v].replace(label).is_some() {
                return Err(err(format!("zone {zone} listed twice")));
            }
        }
        let labels: Vec<usize> = labels
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or(PartitionError::Parse { line: 0, msg: format!("zone {} missing", zone_ids[v]) }))
            .collect::<Result<_, _>>()?;
        Ok(Self::from_labels(&labels))
    }
}

pub struct PartitionDisplay<'a> {
    partition: &'a Partition,
    names: &'a [u32],
}

impl fmt::Display for PartitionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, members) in self.partition.clusters().iter().enumerate() {
            if c > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (k, &v) in members.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.names[v])?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Sum of `weights` over the edges crossing between clusters.
pub fn cut_cost<S: Scalar>(topo: &Topology, partition: &Partition, weights: &[S]) -> Result<S, PartitionError> {
    if weights.len() != topo.num_edges() {
        return Err(PartitionError::WeightCount { expected: topo.num_edges(), got: weights.len() });
    }
    if partition.num_vertices() != topo.num_vertices() {
        return Err(PartitionError::LabelCount { expected: topo.num_vertices(), got: partition.num_vertices() });
    }
    Ok(partition.crossing_edges(topo).into_iter().fold(S::zero(), |acc, k| acc + weights[k].clone()))
}

/// Replaces every cluster by the connected components it induces. The
/// crossing-edge set, and hence every cut cost, is unchanged.
pub fn split_disconnected(partition: &Partition, topo: &Topology) -> Partition {
    let mut pieces = Vec::new();
    for members in partition.clusters() {
        pieces.extend(topo.components_of(&members));
    }
    Partition::from_clusters(partition.num_vertices(), &pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tree with edges (1,5),(2,4),(3,5),(4,5) on zones 1..5.
    pub(crate) fn five_zone_tree() -> Topology {
        Topology::new(5, &[(0, 4), (1, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn canonical_labels() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.num_clusters(), 3);
        assert_eq!(p, Partition::from_clusters(4, &[vec![1], vec![3], vec![0, 2]]));
    }

    #[test]
    fn cut_cost_examples() {
        let t = five_zone_tree();
        let w = [1.0197, 0.0687, 1.1874, 0.9036];
        assert_eq!(cut_cost(&t, &Partition::whole(5), &w).unwrap(), 0.0);
        let all: f64 = w.iter().sum();
        assert_eq!(cut_cost(&t, &Partition::singletons(5), &w).unwrap(), all);
        let p = Partition::from_clusters(5, &[vec![1], vec![0, 2, 3, 4]]);
        assert!((cut_cost(&t, &p, &w).unwrap() - 0.0687).abs() < 1e-15);
        assert!(matches!(cut_cost(&t, &p, &w[..3]), Err(PartitionError::WeightCount { expected: 4, got: 3 })));
    }

    #[test]
    fn crossing_and_in_cluster_edges_cover_edge_set() {
        let t = five_zone_tree();
        let p = Partition::from_clusters(5, &[vec![1, 3], vec![0, 2, 4]]);
        let mut all = p.crossing_edges(&t);
        all.extend(p.in_cluster_edges(&t));
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert_eq!(p.crossing_edges(&t), vec![3]);
    }

    #[test]
    fn split_disconnected_on_path() {
        // path a-b-c with {a,c},{b}: equivalent three-cluster connected partition
        let t = Topology::new(3, &[(0, 1), (1, 2)]).unwrap();
        let p = Partition::from_labels(&[0, 1, 0]);
        assert!(!p.is_connected_in(&t));
        let q = split_disconnected(&p, &t);
        assert_eq!(q, Partition::singletons(3));
        assert_eq!(p.crossing_edges(&t), q.crossing_edges(&t));
        // already connected: fixpoint
        let r = Partition::from_labels(&[0, 0, 1]);
        assert_eq!(split_disconnected(&r, &t), r);
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let ids = [1, 2, 3, 4, 5];
        let p = Partition::from_clusters(5, &[vec![1], vec![0, 2, 3, 4]]);
        let text = p.to_text(&ids);
        assert_eq!(text, "1 -> 1\n2 -> 2\n3 -> 1\n4 -> 1\n5 -> 1\n");
        assert_eq!(Partition::parse_text(&text, &ids).unwrap(), p);
        assert_eq!(p.display_with(&ids).to_string(), "{1,3,4,5},{2}");
        assert!(Partition::parse_text("1 -> 1\n", &ids).is_err());
        assert!(Partition::parse_text("1 -> 1\n1 -> 2\n", &ids).is_err());
        assert!(Partition::parse_text("9 -> 1\n", &ids).is_err());
    }

    #[test]
    fn topology_rejects_bad_edges() {
        assert!(matches!(Topology::new(2, &[(0, 0)]), Err(PartitionError::SelfLoop(0, 0))));
        assert!(matches!(Topology::new(2, &[(0, 2)]), Err(PartitionError::VertexOutOfRange(0, 2))));
        assert!(matches!(Topology::new(2, &[(0, 1), (1, 0)]), Err(PartitionError::DuplicateEdge(0, 1))));
    }
}
