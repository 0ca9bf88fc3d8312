//! Exhaustive enumeration of connected partitions.
//!
//! Blocks are grown one at a time: the next block is always a connected set
//! containing the lowest unassigned vertex, drawn from the vertices not yet
//! assigned. Each connected partition is produced exactly once and already
//! in canonical label order, so no deduplication pass is needed.
//!
//! The number of connected partitions grows exponentially; this is meant as
//! an oracle for graphs of a dozen vertices or so, not as a solver.

use super::{Partition, PartitionError, Topology};

type Mask = u64;

fn neighbor_masks(topo: &Topology) -> Vec<Mask> {
    (0..topo.num_vertices()).map(|v| topo.neighbors(v).iter().fold(0, |m, &(u, _)| m | (1 << u))).collect()
}

/// Calls `visit` once for every connected subset of `allowed` that contains
/// `root` (which must be in `allowed`).
pub fn connected_subsets_containing(topo: &Topology, root: usize, allowed: Mask, mut visit: impl FnMut(Mask)) {
    let nbr = neighbor_masks(topo);
    let start = 1 << root;
    grow(&nbr, allowed, start, nbr[root] & allowed & !start, 0, &mut visit);
}

fn grow(nbr: &[Mask], allowed: Mask, set: Mask, mut ext: Mask, mut excluded: Mask, visit: &mut impl FnMut(Mask)) {
    visit(set);
    while ext != 0 {
        let u = ext.trailing_zeros() as usize;
        let bit = 1 << u;
        ext &= !bit;
        let next_set = set | bit;
        let next_ext = (ext | nbr[u]) & allowed & !next_set & !excluded;
        grow(nbr, allowed, next_set, next_ext, excluded, visit);
        excluded |= bit;
    }
}

/// All partitions of `topo` into exactly `n` clusters that each induce a
/// connected subgraph, in canonical labelling.
pub fn enumerate_connected_partitions(topo: &Topology, n: usize) -> Result<Vec<Partition>, PartitionError> {
    let nv = topo.num_vertices();
    if n == 0 || n > nv {
        return Err(PartitionError::ClusterCount { n, vertices: nv });
    }
    if nv > 64 {
        return Err(PartitionError::TooLarge(nv));
    }
    let nbr = neighbor_masks(topo);
    let full: Mask = if nv == 64 { !0 } else { (1 << nv) - 1 };
    let mut out = Vec::new();
    let mut blocks = Vec::new();
    place(&nbr, full, n, &mut blocks, &mut out, nv);
    Ok(out)
}

fn place(nbr: &[Mask], remaining: Mask, n: usize, blocks: &mut Vec<Mask>, out: &mut Vec<Partition>, nv: usize) {
    if remaining == 0 {
        if blocks.len() == n {
            let mut labels = vec![0; nv];
            for (c, &b) in blocks.iter().enumerate() {
                for (v, l) in labels.iter_mut().enumerate() {
                    if b & (1 << v) != 0 {
                        *l = c;
                    }
                }
            }
            out.push(Partition::from_labels(&labels));
        }
        return;
    }
    let left = n.saturating_sub(blocks.len());
    if left == 0 || (remaining.count_ones() as usize) < left {
        return;
    }
    let root = remaining.trailing_zeros() as usize;
    let start: Mask = 1 << root;
    let mut candidates = Vec::new();
    grow(nbr, remaining, start, nbr[root] & remaining & !start, 0, &mut |set| {
        let rest = remaining & !set;
        let fits = if left == 1 { rest == 0 } else { rest.count_ones() as usize >= left - 1 };
        if fits {
            candidates.push(set);
        }
    });
    for set in candidates {
        blocks.push(set);
        place(nbr, remaining & !set, n, blocks, out, nv);
        blocks.pop();
    }
}
