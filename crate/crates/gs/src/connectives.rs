//! Connectives described by sets of partitions: incidence graphs,
//! orthogonality, complements, stabilizer groups, and the census of
//! decomposable partition sets, used to compare partition connectives
//! with prime graphs.

use std::collections::BTreeSet;
use std::fmt;

/// Partition of {1..n} into disjoint non-empty blocks. Blocks and their
/// elements are kept sorted, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionError(pub String);

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for PartitionError {}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Partition, PartitionError> {
        let mut seen = vec![false; n + 1];
        let mut norm: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(PartitionError("empty block".to_string()));
            }
            let mut b = block;
            b.sort_unstable();
            for &x in &b {
                if x == 0 || x > n {
                    return Err(PartitionError(format!("element {x} outside 1..{n}")));
                }
                if seen[x] {
                    return Err(PartitionError(format!("element {x} occurs twice")));
                }
                seen[x] = true;
            }
            norm.push(b);
        }
        if seen[1..=n].iter().any(|s| !s) {
            return Err(PartitionError(format!("blocks do not cover 1..{n}")));
        }
        norm.sort();
        Ok(Partition { n, blocks: norm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&x)).expect("covered")
    }

    pub fn apply(&self, perm: &[usize]) -> Partition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| perm[x - 1]).collect())
            .collect();
        Partition::new(self.n, blocks).expect("permutation preserves partition-hood")
    }

    /// `{{1,3},{2}}` syntax.
    pub fn parse(s: &str) -> Result<Partition, PartitionError> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| PartitionError("partition must be wrapped in { }".to_string()))?;
        let mut blocks = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let start = rest
                .find('{')
                .ok_or_else(|| PartitionError("expected a block".to_string()))?;
            let end = rest[start..]
                .find('}')
                .ok_or_else(|| PartitionError("unterminated block".to_string()))?
                + start;
            let body = &rest[start + 1..end];
            let block: Result<Vec<usize>, _> =
                body.split(',').map(|t| t.trim().parse::<usize>()).collect();
            blocks.push(block.map_err(|_| PartitionError(format!("bad block `{body}`")))?);
            rest = rest[end + 1..].trim_start_matches(',').trim();
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Partition::new(n, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionSet {
    pub n: usize,
    pub parts: BTreeSet<Partition>,
}

impl PartitionSet {
    pub fn new(n: usize, parts: impl IntoIterator<Item = Partition>) -> PartitionSet {
        let parts: BTreeSet<Partition> = parts.into_iter().collect();
        assert!(parts.iter().all(|p| p.n == n));
        PartitionSet { n, parts }
    }

    /// `{{{1,2},{3,4}},{{1,4},{2,3}}}` syntax.
    pub fn parse(s: &str) -> Result<PartitionSet, PartitionError> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| PartitionError("set must be wrapped in { }".to_string()))?;
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        for (i, c) in inner.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(Partition::parse(inner[start..i].trim())?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if !inner[start..].trim().is_empty() {
            parts.push(Partition::parse(inner[start..].trim())?);
        }
        if parts.is_empty() {
            return Err(PartitionError("a connective needs at least one partition".to_string()));
        }
        let n = parts.iter().map(|p| p.n).max().unwrap();
        for p in &parts {
            if p.n != n {
                return Err(PartitionError("partitions have different ground sets".to_string()));
            }
        }
        Ok(PartitionSet::new(n, parts))
    }
}

impl fmt::Display for PartitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// Incidence multigraph between two partitions of the same set: one
/// vertex per block, one edge per shared element. Returned as block
/// index pairs (left, right), with multiplicity.
pub fn incidence_edges(
    p: &Partition,
    q: &Partition,
) -> Result<Vec<(usize, usize)>, PartitionError> {
    if p.n != q.n {
        return Err(PartitionError(format!("ground sets differ: {} vs {}", p.n, q.n)));
    }
    Ok((1..=p.n).map(|x| (p.block_of(x), q.block_of(x))).collect())
}

/// Orthogonal iff the incidence multigraph is a tree: connected and
/// acyclic, where parallel edges count as a cycle.
pub fn orthogonal(p: &Partition, q: &Partition) -> Result<bool, PartitionError> {
    let edges = incidence_edges(p, q)?;
    let nodes = p.blocks.len() + q.blocks.len();
    if edges.len() != nodes - 1 {
        return Ok(false);
    }
    let mut reach = vec![false; nodes];
    let mut stack = vec![0usize];
    reach[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in &edges {
            let (x, y) = (a, p.blocks.len() + b);
            if x == v && !reach[y] {
                reach[y] = true;
                stack.push(y);
            }
            if y == v && !reach[x] {
                reach[x] = true;
                stack.push(x);
            }
        }
    }
    Ok(reach.into_iter().all(|r| r))
}

pub fn orthogonal_sets(p: &PartitionSet, q: &PartitionSet) -> Result<bool, PartitionError> {
    for a in &p.parts {
        for b in &q.parts {
            if !orthogonal(a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All partitions of {1..n}.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(x: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Partition>) {
        if x > n {
            out.push(Partition::new(n, blocks.clone()).unwrap());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(x);
            rec(x + 1, n, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![x]);
        rec(x + 1, n, blocks, out);
        blocks.pop();
    }
    if n == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    rec(1, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Everything orthogonal to every member of `p`.
pub fn orthogonal_complement(p: &PartitionSet) -> Result<PartitionSet, PartitionError> {
    if p.n > 8 {
        return Err(PartitionError(format!("complement limited to n <= 8, got {}", p.n)));
    }
    let mut parts = Vec::new();
    for q in all_partitions(p.n) {
        let mut ok = true;
        for a in &p.parts {
            if !orthogonal(a, &q)? {
                ok = false;
                break;
            }
        }
        if ok {
            parts.push(q);
        }
    }
    Ok(PartitionSet { n: p.n, parts: parts.into_iter().collect() })
}

/// Permutation as the image vector of 1..n (1-based values).
pub type Perm = Vec<usize>;

pub fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(n: usize, cur: &mut Perm, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 1..=n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

pub fn compose_perms(f: &Perm, g: &Perm) -> Perm {
    // apply g first, then f
    g.iter().map(|&x| f[x - 1]).collect()
}

pub fn invert_perm(f: &Perm) -> Perm {
    let mut inv = vec![0; f.len()];
    for (i, &x) in f.iter().enumerate() {
        inv[x - 1] = i + 1;
    }
    inv
}

/// Cycle notation, e.g. `(1,4)(2,3)`; the identity prints as `(1)`.
pub fn cycle_string(perm: &Perm) -> String {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    let mut out = String::new();
    for start in 1..=n {
        if seen[start] || perm[start - 1] == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = perm[start - 1];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = perm[x - 1];
        }
        out.push('(');
        out.push_str(&cyc.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("(1)");
    }
    out
}

/// All permutations fixing the partition set as a set.
pub fn stabilizer_group(p: &PartitionSet) -> Result<Vec<Perm>, PartitionError> {
    if p.n > 8 {
        return Err(PartitionError(format!("stabilizer limited to n <= 8, got {}", p.n)));
    }
    Ok(all_perms(p.n)
        .into_iter()
        .filter(|perm| {
            let image: BTreeSet<Partition> = p.parts.iter().map(|part| part.apply(perm)).collect();
            image == p.parts
        })
        .collect())
}

/// The 4-ary connective described by the two opposite-edge pairings of a
/// 4-cycle.
pub fn g4_set() -> PartitionSet {
    PartitionSet::parse("{{{1,2},{3,4}},{{1,4},{2,3}}}").expect("literal")
}

/// Partition sets of all par/tensor formulas over the leaves 1..n, each
/// leaf used exactly once: the decomposable connectives. A tensor keeps
/// the premise groups of its sides apart; a par merges one group from
/// each side.
pub fn decomposable_sets(n: usize) -> BTreeSet<PartitionSet> {
    // raw partial partitions over a leaf subset: sorted blocks of sorted
    // elements
    type Raw = Vec<Vec<usize>>;
    fn norm(mut blocks: Raw) -> Raw {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        blocks
    }
    fn combine(l: &BTreeSet<Raw>, r: &BTreeSet<Raw>, par: bool) -> BTreeSet<Raw> {
        let mut out = BTreeSet::new();
        for pl in l {
            for pr in r {
                if par {
                    for bi in 0..pl.len() {
                        for bj in 0..pr.len() {
                            let mut blocks: Raw = Vec::new();
                            for (i, b) in pl.iter().enumerate() {
                                if i != bi {
                                    blocks.push(b.clone());
                                }
                            }
                            for (j, b) in pr.iter().enumerate() {
                                if j != bj {
                                    blocks.push(b.clone());
                                }
                            }
                            let merged: Vec<usize> =
                                pl[bi].iter().chain(&pr[bj]).copied().collect();
                            blocks.push(merged);
                            out.insert(norm(blocks));
                        }
                    }
                } else {
                    let blocks: Raw = pl.iter().chain(pr.iter()).cloned().collect();
                    out.insert(norm(blocks));
                }
            }
        }
        out
    }
    fn formulas(mask: u32, memo: &mut Vec<Option<Vec<BTreeSet<Raw>>>>) -> Vec<BTreeSet<Raw>> {
        if let Some(fs) = &memo[mask as usize] {
            return fs.clone();
        }
        let mut out: Vec<BTreeSet<Raw>> = Vec::new();
        if mask.count_ones() == 1 {
            let leaf = mask.trailing_zeros() as usize + 1;
            out.push([vec![vec![leaf]]].into_iter().collect());
        } else {
            let low = mask & mask.wrapping_neg(); // lowest leaf stays left
            let rest = mask & !low;
            let mut right = rest;
            loop {
                if right != 0 {
                    let left = mask & !right;
                    let ls = formulas(left, memo);
                    let rs = formulas(right, memo);
                    for l in &ls {
                        for r in &rs {
                            out.push(combine(l, r, true));
                            out.push(combine(l, r, false));
                        }
                    }
                }
                if right == 0 {
                    break;
                }
                right = (right - 1) & rest;
            }
        }
        memo[mask as usize] = Some(out.clone());
        out
    }
    let full = (1u32 << n) - 1;
    let mut memo = vec![None; 1usize << n];
    formulas(full, &mut memo)
        .into_iter()
        .map(|raws| {
            PartitionSet::new(
                n,
                raws.into_iter().map(|blocks| Partition::new(n, blocks).unwrap()),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let x = p("{{1,3},{2},{4}}");
        assert_eq!(x.to_string(), "{{1,3},{2},{4}}");
        assert!(Partition::parse("{{1,3},{3}}").is_err());
        assert!(Partition::parse("{{1},{3}}").is_err()); // 2 missing
    }

    #[test]
    fn incidence_counts() {
        // three blocks vs three blocks on {1,2,3}: 3 edges, 2 components
        let a = p("{{1,3},{2}}");
        let b = p("{{1},{2},{3}}");
        assert_eq!(incidence_edges(&a, &b).unwrap().len(), 3);
        assert!(!orthogonal(&a, &b).unwrap()); // disconnected
        let c = p("{{1,2,3}}");
        assert!(!orthogonal(&a, &c).unwrap()); // parallel edges = cycle
        let d = p("{{1},{2,3}}");
        assert!(orthogonal(&a, &d).unwrap());
        // singleton case
        let s = p("{{1}}");
        assert!(orthogonal(&s, &s).unwrap());
    }

    #[test]
    fn orthogonality_is_symmetric() {
        let ps = all_partitions(4);
        for a in &ps {
            for b in &ps {
                assert_eq!(orthogonal(a, b).unwrap(), orthogonal(b, a).unwrap());
            }
        }
    }

    #[test]
    fn complement_of_g4() {
        let comp = orthogonal_complement(&g4_set()).unwrap();
        let expected = PartitionSet::parse("{{{1,3},{2},{4}},{{2,4},{1},{3}}}").unwrap();
        assert_eq!(comp, expected);
    }

    #[test]
    fn complement_of_tensor_is_par() {
        let tensor = PartitionSet::parse("{{{1},{2}}}").unwrap();
        let comp = orthogonal_complement(&tensor).unwrap();
        assert_eq!(comp, PartitionSet::parse("{{{1,2}}}").unwrap());
        // and on one element the singleton is self-orthogonal
        let one = PartitionSet::parse("{{{1}}}").unwrap();
        assert_eq!(orthogonal_complement(&one).unwrap(), one);
    }

    #[test]
    fn g4_stabilizer_is_a_group_of_order_eight() {
        let stab = stabilizer_group(&g4_set()).unwrap();
        assert_eq!(stab.len(), 8);
        for f in &stab {
            assert!(stab.contains(&invert_perm(f)));
            for g in &stab {
                assert!(stab.contains(&compose_perms(f, g)));
            }
        }
        // 24 / 8 = 3 instances of the connective
        assert_eq!(24 / stab.len(), 3);
    }

    #[test]
    fn g4_and_its_dual_share_the_stabilizer() {
        let stab_g4 = stabilizer_group(&g4_set()).unwrap();
        let dual = orthogonal_complement(&g4_set()).unwrap();
        let stab_dual = stabilizer_group(&dual).unwrap();
        assert_eq!(stab_g4, stab_dual);
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(cycle_string(&vec![1, 2, 3, 4]), "(1)");
        assert_eq!(cycle_string(&vec![4, 3, 2, 1]), "(1,4)(2,3)");
        assert_eq!(cycle_string(&vec![2, 3, 4, 1]), "(1,2,3,4)");
    }

    #[test]
    fn bell_numbers() {
        assert_eq!(all_partitions(3).len(), 5);
        assert_eq!(all_partitions(4).len(), 15);
    }

    #[test]
    fn g4_is_not_decomposable_but_its_orbit_is_small() {
        let dec = decomposable_sets(4);
        assert!(!dec.contains(&g4_set()));
        // the two binary partition sets decompose
        assert!(decomposable_sets(2)
            .contains(&PartitionSet::parse("{{{1},{2}}}").unwrap()));
        assert!(decomposable_sets(2)
            .contains(&PartitionSet::parse("{{{1,2}}}").unwrap()));
    }

    #[test]
    fn three_pairs_of_nondecomposable_partition_connectives() {
        // census over all candidate partition sets on 4 elements that are
        // biorthogonally closed with a non-empty dual, not decomposable
        let dec = decomposable_sets(4);
        let all = all_partitions(4);
        let n = all.len();
        let mut found: BTreeSet<PartitionSet> = BTreeSet::new();
        for mask in 1u64..(1 << n) {
            let parts: BTreeSet<Partition> = all
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            let set = PartitionSet { n: 4, parts };
            let dual = orthogonal_complement(&set).unwrap();
            if dual.parts.is_empty() {
                continue;
            }
            let bidual = orthogonal_complement(&dual).unwrap();
            if bidual != set {
                continue;
            }
            if dec.contains(&set) {
                continue;
            }
            found.insert(set);
        }
        assert_eq!(found.len(), 6, "six non-decomposable connectives, three dual pairs");
        for set in &found {
            let dual = orthogonal_complement(set).unwrap();
            assert!(found.contains(&dual));
        }
        assert!(found.contains(&g4_set()));
    }
}
