//! Canonical labelling, isomorphism search, and automorphism groups for
//! small labelled graphs. Canonical forms serve as memo keys, so equal
//! byte strings must mean isomorphic and vice versa.

use crate::graph::{Atom, LabeledGraph, SizeLimitExceeded, VertexId};
use std::collections::BTreeMap;

/// Ordered partition of dense vertex indices.
type Partition = Vec<Vec<usize>>;

fn initial_partition(labels: &[usize]) -> Partition {
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &l) in labels.iter().enumerate() {
        cells.entry(l).or_default().push(v);
    }
    cells.into_values().collect()
}

/// Equitable refinement: split cells by degree signature toward every cell
/// until stable. Subcells are ordered by signature, which keeps the
/// procedure isomorphism-invariant.
fn refine(adj: &[u64], mut part: Partition) -> Partition {
    loop {
        let masks: Vec<u64> = part
            .iter()
            .map(|cell| cell.iter().fold(0u64, |m, &v| m | (1 << v)))
            .collect();
        let mut changed = false;
        let mut next: Partition = Vec::with_capacity(part.len());
        for cell in &part {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| {
                    let sig = masks.iter().map(|&m| (adj[v] & m).count_ones()).collect();
                    (sig, v)
                })
                .collect();
            keyed.sort();
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for (sig, v) in keyed {
                match groups.last_mut() {
                    Some(last) if last_sig(adj, &masks, last[0]) == sig => last.push(v),
                    _ => groups.push(vec![v]),
                }
            }
            if groups.len() > 1 {
                changed = true;
            }
            next.extend(groups);
        }
        part = next;
        if !changed {
            return part;
        }
    }
}

fn last_sig(adj: &[u64], masks: &[u64], v: usize) -> Vec<u32> {
    masks.iter().map(|&m| (adj[v] & m).count_ones()).collect()
}

fn certificate(n: usize, label_table: &[Atom], labels: &[usize], adj: &[u64], order: &[usize]) -> Vec<u8> {
    let mut cert = Vec::new();
    cert.push(n as u8);
    for a in label_table {
        cert.extend_from_slice(a.name.as_bytes());
        cert.push(match a.polarity {
            crate::graph::Polarity::Positive => b'+',
            crate::graph::Polarity::Negative => b'-',
        });
        cert.push(0);
    }
    cert.push(0xff);
    for &v in order {
        cert.push(labels[v] as u8);
    }
    for (i, &v) in order.iter().enumerate() {
        let mut byte = 0u8;
        let mut nbit = 0;
        for &w in order.iter().take(i) {
            byte = (byte << 1) | u8::from(adj[v] & (1 << w) != 0);
            nbit += 1;
            if nbit == 8 {
                cert.push(byte);
                byte = 0;
                nbit = 0;
            }
        }
        if nbit > 0 {
            cert.push(byte << (8 - nbit));
        }
        cert.push(0xfe);
    }
    cert
}

struct Search<'a> {
    adj: &'a [u64],
    labels: &'a [usize],
    label_table: &'a [Atom],
    best: Option<(Vec<u8>, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn run(&mut self, part: Partition) {
        let part = refine(self.adj, part);
        if let Some(pos) = part.iter().position(|c| c.len() > 1) {
            for &v in &part[pos] {
                let mut child: Partition = Vec::with_capacity(part.len() + 1);
                for (i, cell) in part.iter().enumerate() {
                    if i == pos {
                        child.push(vec![v]);
                        child.push(cell.iter().copied().filter(|&x| x != v).collect());
                    } else {
                        child.push(cell.clone());
                    }
                }
                self.run(child);
            }
        } else {
            let order: Vec<usize> = part.into_iter().map(|c| c[0]).collect();
            let cert = certificate(self.labels.len(), self.label_table, self.labels, self.adj, &order);
            let better = match &self.best {
                None => true,
                Some((b, _)) => cert < *b,
            };
            if better {
                self.best = Some((cert, order));
            }
        }
    }
}

/// Canonical byte string plus the canonical vertex order (canonical
/// position -> vertex id). Equal strings iff isomorphic.
pub fn canonical_form_with_order(
    g: &LabeledGraph,
    limit: usize,
) -> Result<(Vec<u8>, Vec<VertexId>), SizeLimitExceeded> {
    let n = g.vertex_count();
    if n > limit {
        return Err(SizeLimitExceeded { size: n, limit });
    }
    if n == 0 {
        return Ok((vec![0], Vec::new()));
    }
    let dense = g.dense();
    let mut search = Search {
        adj: &dense.adj,
        labels: &dense.labels,
        label_table: &dense.label_table,
        best: None,
    };
    search.run(initial_partition(&dense.labels));
    let (cert, order) = search.best.expect("search visits at least one leaf");
    Ok((cert, order.into_iter().map(|i| dense.ids[i]).collect()))
}

pub fn canonical_form(g: &LabeledGraph, limit: usize) -> Result<Vec<u8>, SizeLimitExceeded> {
    canonical_form_with_order(g, limit).map(|(c, _)| c)
}

/// Label- and edge-preserving bijection, if one exists.
pub fn find_isomorphism(
    g: &LabeledGraph,
    h: &LabeledGraph,
) -> Option<BTreeMap<VertexId, VertexId>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let (cg, og) = canonical_form_with_order(g, 64).ok()?;
    let (ch, oh) = canonical_form_with_order(h, 64).ok()?;
    if cg != ch {
        return None;
    }
    let map: BTreeMap<VertexId, VertexId> = og.into_iter().zip(oh).collect();
    debug_assert!(check_isomorphism(g, h, &map));
    Some(map)
}

/// Polynomial-time verification that `f` is a label- and edge-preserving
/// bijection from `g` to `h`.
pub fn check_isomorphism(
    g: &LabeledGraph,
    h: &LabeledGraph,
    f: &BTreeMap<VertexId, VertexId>,
) -> bool {
    if f.len() != g.vertex_count() || g.vertex_count() != h.vertex_count() {
        return false;
    }
    let mut image: Vec<VertexId> = Vec::with_capacity(f.len());
    for (&v, &w) in f {
        if !g.contains_vertex(v) || !h.contains_vertex(w) || g.label(v) != h.label(w) {
            return false;
        }
        image.push(w);
    }
    image.sort();
    image.dedup();
    if image.len() != h.vertex_count() {
        return false;
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    for (i, &v) in verts.iter().enumerate() {
        for &w in &verts[i + 1..] {
            if g.has_edge(v, w) != h.has_edge(f[&v], f[&w]) {
                return false;
            }
        }
    }
    true
}

pub fn isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// All label- and edge-preserving self-bijections.
pub fn automorphism_group(
    g: &LabeledGraph,
    limit: usize,
) -> Result<Vec<BTreeMap<VertexId, VertexId>>, SizeLimitExceeded> {
    let n = g.vertex_count();
    if n > limit {
        return Err(SizeLimitExceeded { size: n, limit });
    }
    let dense = g.dense();
    let mut out = Vec::new();
    let mut assign: Vec<usize> = Vec::with_capacity(n);
    fn rec(dense: &crate::graph::Dense, assign: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = assign.len();
        if v == dense.n() {
            out.push(assign.clone());
            return;
        }
        for w in 0..dense.n() {
            if assign.contains(&w) || dense.labels[v] != dense.labels[w] {
                continue;
            }
            let ok = (0..v).all(|u| {
                let e1 = dense.adj[v] & (1 << u) != 0;
                let e2 = dense.adj[w] & (1 << assign[u]) != 0;
                e1 == e2
            });
            if ok {
                assign.push(w);
                rec(dense, assign, out);
                assign.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(&dense, &mut assign, &mut raw);
    for perm in raw {
        out.push(
            perm.into_iter()
                .enumerate()
                .map(|(i, j)| (dense.ids[i], dense.ids[j]))
                .collect(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Atom, LabeledGraph};
    use crate::testutil::*;

    #[test]
    fn canonical_form_invariant_under_renaming() {
        let g = graph_of("(a*b)|(c*d)");
        let map = g
            .vertices()
            .map(|v| (v, VertexId(v.0 + 17)))
            .collect();
        let h = g.relabel(&map);
        assert_eq!(canonical_form(&g, 16).unwrap(), canonical_form(&h, 16).unwrap());
    }

    #[test]
    fn canonical_form_separates_p_and_q() {
        // the two 4-vertex graphs from the opening example differ in edges
        let p = graph_of("(a*b)|(c*d)");
        let q = graph_of("(a|c)*(b|d)");
        assert_ne!(canonical_form(&p, 16).unwrap(), canonical_form(&q, 16).unwrap());
        assert!(find_isomorphism(&p, &q).is_none());
    }

    #[test]
    fn canonical_form_commutative_par() {
        let ab = graph_of("a|b");
        let ba = graph_of("b|a");
        assert_eq!(canonical_form(&ab, 16).unwrap(), canonical_form(&ba, 16).unwrap());
    }

    #[test]
    fn canonical_form_agrees_with_brute_force_iso() {
        // exhaustive over all labelled graphs with <= 4 vertices over a
        // 2-atom alphabet, checked against the brute-force bijection oracle
        let graphs = all_graphs_upto(4, &["a", "b"]);
        let canons: Vec<Vec<u8>> = graphs
            .iter()
            .map(|g| canonical_form(g, 16).unwrap())
            .collect();
        // sample pairs; the full quadratic sweep is too large to be useful
        for i in (0..graphs.len()).step_by(97) {
            for j in (0..graphs.len()).step_by(89) {
                let brute = iso(&graphs[i], &graphs[j]);
                let fast = canons[i] == canons[j];
                assert_eq!(brute, fast, "graphs {i} vs {j}");
            }
        }
    }

    #[test]
    fn found_isomorphism_passes_checker() {
        let a4 = path_graph_labels(&[Atom::pos("a"), Atom::neg("a"), Atom::neg("a"), Atom::pos("a")]);
        let f = find_isomorphism(&a4, &a4.dual());
        let f = f.expect("the alternating path is self-dual");
        assert!(check_isomorphism(&a4, &a4.dual(), &f));
    }

    #[test]
    fn identity_map_checks() {
        let g = graph_of("(a*b)|c");
        let id = g.vertices().map(|v| (v, v)).collect();
        assert!(check_isomorphism(&g, &g, &id));
    }

    #[test]
    fn automorphisms_of_p4_pattern() {
        let g = p4_pattern();
        let auts = automorphism_group(&g, 8).unwrap();
        assert_eq!(auts.len(), 2);
    }

    #[test]
    fn automorphisms_of_singleton_and_pair() {
        assert_eq!(
            automorphism_group(&LabeledGraph::single(Atom::pos("a")), 8).unwrap().len(),
            1
        );
        let aa = graph_of("a|a");
        assert_eq!(automorphism_group(&aa, 8).unwrap().len(), 2);
    }
}
