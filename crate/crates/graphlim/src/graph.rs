//! Simple graphs with optional node labels, canonical forms under
//! label-preserving isomorphism, the gluing product, and small-graph
//! enumeration.
//!
//! Nodes are `0..n`. Labels are distinct positive integers; a `k`-labeled
//! graph carries labels exactly `1..=k`, a flat `k`-labeled graph has no
//! unlabeled nodes. The empty graph `K0` is a valid value everywhere.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on node count (sampled prefixes are the largest graphs built).
pub const MAX_NODES: usize = 64;
/// Cap for canonical-form search.
pub const MAX_CANON_NODES: usize = 16;
/// Cap for flat enumeration (2^(k choose 2) graphs).
pub const MAX_FLAT_LABELS: usize = 5;
/// Cap for unlabeled-class enumeration.
pub const MAX_ENUM_NODES: usize = 8;
/// Largest n with a full labeled-graph table (2^(n choose 2) masks).
pub const MAX_TABLE_NODES: usize = 6;

/// Byte string identifying a label-preserving-isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Simple finite graph with an optional partial labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    labels: Vec<Option<u32>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::with_labels(n, edges, &[])
    }

    pub fn with_labels(n: usize, edges: &[(usize, usize)], labels: &[(usize, u32)]) -> Result<Self> {
        if n > MAX_NODES {
            return Err(Error::CapExceeded {
                what: "graph nodes",
                cap: MAX_NODES,
                got: n,
            });
        }
        let mut g = Graph {
            n,
            adj: vec![0; n],
            labels: vec![None; n],
        };
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        let mut seen = BTreeMap::new();
        for &(node, label) in labels {
            if node >= n {
                return Err(Error::InvalidGraph(format!("labeled node {node} out of range")));
            }
            if label == 0 {
                return Err(Error::InvalidGraph("labels must be positive".into()));
            }
            if let Some(prev) = seen.insert(label, node) {
                return Err(Error::InvalidGraph(format!(
                    "label {label} used on nodes {prev} and {node}"
                )));
            }
            if g.labels[node].is_some() {
                return Err(Error::InvalidGraph(format!("node {node} labeled twice")));
            }
            g.labels[node] = Some(label);
        }
        Ok(g)
    }

    /// The empty graph `K0`.
    pub fn k0() -> Self {
        Graph {
            n: 0,
            adj: vec![],
            labels: vec![],
        }
    }

    /// Edgeless graph `U_n`.
    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = vec![];
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        Self::new(n, &edges)
    }

    /// Path on `n` nodes.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges)
    }

    /// Cycle on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph("cycle needs at least 3 nodes".into()));
        }
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Self::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && (self.adj[u] >> v) & 1 == 1
    }

    /// Neighbor set of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn label_of(&self, v: usize) -> Option<u32> {
        self.labels[v]
    }

    pub fn labeled_nodes(&self) -> Vec<(usize, u32)> {
        (0..self.n)
            .filter_map(|v| self.labels[v].map(|l| (v, l)))
            .collect()
    }

    pub fn is_unlabeled(&self) -> bool {
        self.labels.iter().all(Option::is_none)
    }

    /// `Some(k)` when the labels are exactly `{1..=k}` (with `k = 0` for an
    /// unlabeled graph), `None` for any other label set.
    pub fn label_arity(&self) -> Option<usize> {
        let mut vals: Vec<u32> = self.labels.iter().flatten().copied().collect();
        vals.sort_unstable();
        if vals.iter().enumerate().all(|(i, &l)| l == i as u32 + 1) {
            Some(vals.len())
        } else {
            None
        }
    }

    /// Flat k-labeled graph: node set `[k]`, labels exactly `1..=k`.
    pub fn is_flat(&self, k: usize) -> bool {
        self.n == k && self.label_arity() == Some(k)
    }

    /// Renumber nodes: `perm[old] = new`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch("permutation length".into()));
        }
        let mut check: Vec<bool> = vec![false; self.n];
        for &p in perm {
            if p >= self.n || check[p] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            check[p] = true;
        }
        let mut g = Graph {
            n: self.n,
            adj: vec![0; self.n],
            labels: vec![None; self.n],
        };
        for u in 0..self.n {
            g.labels[perm[u]] = self.labels[u];
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    g.adj[perm[u]] |= 1 << perm[v];
                    g.adj[perm[v]] |= 1 << perm[u];
                }
            }
        }
        Ok(g)
    }

    /// Copy without labels.
    pub fn unlabel(&self) -> Self {
        Graph {
            n: self.n,
            adj: self.adj.clone(),
            labels: vec![None; self.n],
        }
    }

    /// Copy with one more node, adjacent to the nodes of `neighborhood`.
    pub fn extend_with_node(&self, neighborhood: u64) -> Result<Self> {
        if self.n + 1 > MAX_NODES {
            return Err(Error::CapExceeded {
                what: "graph nodes",
                cap: MAX_NODES,
                got: self.n + 1,
            });
        }
        let v = self.n;
        let mut g = Graph {
            n: self.n + 1,
            adj: self.adj.clone(),
            labels: self.labels.clone(),
        };
        g.adj.push(neighborhood & ((1 << v) - 1));
        g.labels.push(None);
        for u in 0..v {
            if (neighborhood >> u) & 1 == 1 {
                g.adj[u] |= 1 << v;
            }
        }
        Ok(g)
    }

    /// Induced subgraph on `nodes` (in the given order), unlabeled.
    pub fn induced(&self, nodes: &[usize]) -> Result<Self> {
        let mut edges = vec![];
        for (i, &u) in nodes.iter().enumerate() {
            if u >= self.n {
                return Err(Error::InvalidInput(format!("node {u} out of range")));
            }
            for (j, &v) in nodes.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(nodes.len(), &edges)
    }

    /// Edge set packed in column-major pair order (the graph6 bit order):
    /// pair `(i, j)` with `i < j` sits at bit `j(j-1)/2 + i`.
    pub fn edge_mask(&self) -> u64 {
        assert!(self.n <= 11, "edge_mask needs at most 11 nodes");
        let mut mask = 0u64;
        for j in 1..self.n {
            for i in 0..j {
                if self.has_edge(i, j) {
                    mask |= 1 << (j * (j - 1) / 2 + i);
                }
            }
        }
        mask
    }

    /// Unlabeled graph on `[n]` from a packed edge mask (see [`edge_mask`]).
    ///
    /// [`edge_mask`]: Graph::edge_mask
    pub fn from_edge_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 11 {
            return Err(Error::CapExceeded {
                what: "edge-mask nodes",
                cap: 11,
                got: n,
            });
        }
        let mut edges = vec![];
        for j in 1..n {
            for i in 0..j {
                if (mask >> (j * (j - 1) / 2 + i)) & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(n, &edges)
    }

    /// Flat k-labeled graph on `[k]` from a packed edge mask.
    pub fn flat_from_mask(k: usize, mask: u64) -> Result<Self> {
        let mut g = Graph::from_edge_mask(k, mask)?;
        for v in 0..k {
            g.labels[v] = Some(v as u32 + 1);
        }
        Ok(g)
    }

    /// Remove every isolated node, labeled or not; surviving nodes keep
    /// their labels.
    pub fn drop_isolates(&self) -> Self {
        let keep: Vec<usize> = (0..self.n).filter(|&v| self.adj[v] != 0).collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph {
            n: keep.len(),
            adj: vec![0; keep.len()],
            labels: vec![None; keep.len()],
        };
        for &v in &keep {
            g.labels[index[v]] = self.labels[v];
            for &u in &keep {
                if self.has_edge(v, u) {
                    g.adj[index[v]] |= 1 << index[u];
                }
            }
        }
        g
    }

    /// Canonical representative and form of the label-preserving
    /// isomorphism class: labeled nodes first in label order, unlabeled
    /// nodes ordered to minimize the column-major adjacency bitstring.
    pub fn canonical(&self) -> Result<(Graph, CanonicalForm)> {
        if self.n > MAX_CANON_NODES {
            return Err(Error::CapExceeded {
                what: "canonical-form nodes",
                cap: MAX_CANON_NODES,
                got: self.n,
            });
        }
        let mut labeled = self.labeled_nodes();
        labeled.sort_by_key(|&(_, l)| l);
        let fixed: Vec<usize> = labeled.iter().map(|&(v, _)| v).collect();
        let free: Vec<usize> = (0..self.n).filter(|&v| self.labels[v].is_none()).collect();

        let mut search = CanonSearch {
            g: self,
            free,
            perm: fixed.clone(),
            bits: vec![],
            best: None,
        };
        // seed bits for the fixed prefix
        for p in 0..fixed.len() {
            for q in 0..p {
                search.bits.push(self.has_edge(fixed[q], fixed[p]));
            }
        }
        search.dfs(0);
        let (bits, perm) = search.best.expect("canonical search always completes");

        // perm[pos] = original node; build the canonical representative
        let mut inv = vec![0usize; self.n];
        for (pos, &node) in perm.iter().enumerate() {
            inv[node] = pos;
        }
        let rep = self.permute(&inv)?;

        let mut bytes = Vec::with_capacity(2 + labeled.len() * 4 + bits.len() / 8 + 1);
        bytes.push(self.n as u8);
        bytes.push(labeled.len() as u8);
        for &(_, l) in &labeled {
            bytes.extend_from_slice(&l.to_be_bytes());
        }
        let mut byte = 0u8;
        for (i, &b) in bits.iter().enumerate() {
            if b {
                byte |= 1 << (7 - i % 8);
            }
            if i % 8 == 7 {
                bytes.push(byte);
                byte = 0;
            }
        }
        if bits.len() % 8 != 0 {
            bytes.push(byte);
        }
        Ok((rep, CanonicalForm(bytes)))
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        Ok(self.canonical()?.1)
    }
}

struct CanonSearch<'a> {
    g: &'a Graph,
    free: Vec<usize>,
    perm: Vec<usize>,
    bits: Vec<bool>,
    best: Option<(Vec<bool>, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn dfs(&mut self, used: u64) {
        let p = self.perm.len();
        if let Some((b, _)) = &self.best {
            match self.bits.as_slice().cmp(&b[..self.bits.len()]) {
                Ordering::Greater => return,
                Ordering::Less => {}
                Ordering::Equal => {}
            }
        }
        if p == self.g.n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.bits < *b,
            };
            if better {
                self.best = Some((self.bits.clone(), self.perm.clone()));
            }
            return;
        }

        let mut cands: Vec<(Vec<bool>, usize)> = self
            .free
            .iter()
            .copied()
            .filter(|&v| (used >> v) & 1 == 0)
            .map(|v| {
                let col: Vec<bool> = self.perm.iter().map(|&u| self.g.has_edge(u, v)).collect();
                (col, v)
            })
            .collect();
        cands.sort();

        let rem_base: u64 = self
            .free
            .iter()
            .filter(|&&v| (used >> v) & 1 == 0)
            .fold(0u64, |m, &v| m | 1 << v);

        let mut kept: Vec<(Vec<bool>, usize)> = vec![];
        'cand: for (col, v) in cands {
            for (pcol, w) in &kept {
                if *pcol == col {
                    let rem = rem_base & !(1 << v) & !(1 << *w);
                    if self.g.adj[v] & rem == self.g.adj[*w] & rem {
                        continue 'cand;
                    }
                }
            }
            kept.push((col, v));
        }

        for (col, v) in kept {
            if let Some((b, _)) = &self.best {
                if self.bits.as_slice() == &b[..self.bits.len()]
                    && col.as_slice().cmp(&b[self.bits.len()..self.bits.len() + p]) == Ordering::Greater { break }
            }
            self.perm.push(v);
            self.bits.extend_from_slice(&col);
            self.dfs(used | 1 << v);
            self.bits.truncate(self.bits.len() - p);
            self.perm.pop();
        }
    }
}

/// Gluing product: disjoint union with same-labeled nodes identified and
/// multi-edges collapsed. For unlabeled inputs this is the disjoint union.
pub fn glue(f1: &Graph, f2: &Graph) -> Graph {
    let mut by_label: BTreeMap<u32, usize> = BTreeMap::new();
    for (v, l) in f1.labeled_nodes() {
        by_label.insert(l, v);
    }
    let mut map2 = vec![usize::MAX; f2.n];
    let mut n = f1.n;
    for v in 0..f2.n {
        match f2.labels[v].and_then(|l| by_label.get(&l).copied()) {
            Some(shared) => map2[v] = shared,
            None => {
                map2[v] = n;
                n += 1;
            }
        }
    }
    assert!(n <= MAX_NODES, "glue exceeds the node cap");
    let mut g = Graph {
        n,
        adj: vec![0; n],
        labels: vec![None; n],
    };
    for v in 0..f1.n {
        g.labels[v] = f1.labels[v];
    }
    for v in 0..f2.n {
        if let Some(l) = f2.labels[v] {
            g.labels[map2[v]] = Some(l);
        }
    }
    for (u, v) in f1.edges() {
        g.adj[u] |= 1 << v;
        g.adj[v] |= 1 << u;
    }
    for (u, v) in f2.edges() {
        let (a, b) = (map2[u], map2[v]);
        debug_assert_ne!(a, b, "labels are injective so images stay distinct");
        g.adj[a] |= 1 << b;
        g.adj[b] |= 1 << a;
    }
    g
}

/// All flat k-labeled graphs on `[k]`, in ascending edge-mask order.
pub fn enumerate_flat(k: usize) -> Result<Vec<Graph>> {
    if k > MAX_FLAT_LABELS {
        return Err(Error::CapExceeded {
            what: "flat enumeration labels",
            cap: MAX_FLAT_LABELS,
            got: k,
        });
    }
    let pairs = k * (k.saturating_sub(1)) / 2;
    (0..1u64 << pairs).map(|m| Graph::flat_from_mask(k, m)).collect()
}

/// Full labeled-graph table on `[n]`: class of every edge mask plus class
/// representatives, canonical forms and labeled class sizes.
pub struct LabeledClassTable {
    pub n: usize,
    /// class index per edge mask
    pub class_of: Vec<u32>,
    /// canonical representative per class, in enumeration order
    pub reps: Vec<Graph>,
    pub canons: Vec<CanonicalForm>,
    /// number of labeled graphs on `[n]` in each class
    pub class_sizes: Vec<u64>,
}

impl LabeledClassTable {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }
}

fn build_labeled_class_table(n: usize) -> LabeledClassTable {
    let pairs = n * n.saturating_sub(1) / 2;
    let total = 1usize << pairs;
    let mut canon_of_mask: Vec<CanonicalForm> = Vec::with_capacity(total);
    let mut classes: BTreeMap<CanonicalForm, (Graph, u64)> = BTreeMap::new();
    for mask in 0..total as u64 {
        let g = Graph::from_edge_mask(n, mask).expect("mask in range");
        let (rep, canon) = g.canonical().expect("size under cap");
        classes
            .entry(canon.clone())
            .and_modify(|(_, c)| *c += 1)
            .or_insert((rep, 1));
        canon_of_mask.push(canon);
    }
    let mut ordered: Vec<(CanonicalForm, Graph, u64)> = classes
        .into_iter()
        .map(|(c, (g, s))| (c, g, s))
        .collect();
    ordered.sort_by_key(|(c, g, _)| (g.edge_count(), c.clone()));
    let index: BTreeMap<&CanonicalForm, u32> = ordered
        .iter()
        .enumerate()
        .map(|(i, (c, _, _))| (c, i as u32))
        .collect();
    let class_of = canon_of_mask.iter().map(|c| index[c]).collect();
    LabeledClassTable {
        n,
        class_of,
        canons: ordered.iter().map(|(c, _, _)| c.clone()).collect(),
        class_sizes: ordered.iter().map(|(_, _, s)| *s).collect(),
        reps: ordered.into_iter().map(|(_, g, _)| g).collect(),
    }
}

/// Shared labeled-graph table for `n <= MAX_TABLE_NODES`, built once.
pub fn labeled_class_table(n: usize) -> Result<Arc<LabeledClassTable>> {
    if n > MAX_TABLE_NODES {
        return Err(Error::CapExceeded {
            what: "labeled-table nodes",
            cap: MAX_TABLE_NODES,
            got: n,
        });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LabeledClassTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("table cache poisoned");
    Ok(guard
        .entry(n)
        .or_insert_with(|| Arc::new(build_labeled_class_table(n)))
        .clone())
}

/// One canonical representative per isomorphism class of unlabeled graphs
/// on exactly `n` nodes, ordered by edge count then canonical form.
pub fn enumerate_unlabeled(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_ENUM_NODES {
        return Err(Error::CapExceeded {
            what: "unlabeled enumeration nodes",
            cap: MAX_ENUM_NODES,
            got: n,
        });
    }
    if n <= MAX_TABLE_NODES {
        return Ok(labeled_class_table(n)?.reps.clone());
    }
    // grow one node at a time; every n-node class arises as some extension
    let smaller = enumerate_unlabeled(n - 1)?;
    let mut classes: BTreeMap<CanonicalForm, Graph> = BTreeMap::new();
    for g in &smaller {
        for neighborhood in 0..1u64 << (n - 1) {
            let ext = g.extend_with_node(neighborhood)?;
            let (rep, canon) = ext.canonical()?;
            classes.entry(canon).or_insert(rep);
        }
    }
    let mut ordered: Vec<(CanonicalForm, Graph)> = classes.into_iter().collect();
    ordered.sort_by_key(|(c, g)| (g.edge_count(), c.clone()));
    Ok(ordered.into_iter().map(|(_, g)| g).collect())
}

/// Every unlabeled class with at most `n` nodes, smallest sizes first.
pub fn enumerate_unlabeled_upto(n: usize) -> Result<Vec<Graph>> {
    let mut out = vec![];
    for m in 0..=n {
        out.extend(enumerate_unlabeled(m)?);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// graph6 and JSON formats
// ---------------------------------------------------------------------------

/// Encode an unlabeled graph in graph6 format.
pub fn to_graph6(g: &Graph) -> Result<String> {
    if !g.is_unlabeled() {
        return Err(Error::InvalidInput(
            "graph6 encodes unlabeled graphs only".into(),
        ));
    }
    let n = g.n;
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(b'~');
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                v |= 1 << (5 - i);
            }
        }
        out.push(v + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ascii"))
}

/// Decode a graph6 string into an unlabeled graph.
pub fn from_graph6(s: &str) -> Result<Graph> {
    let bytes = s.trim().as_bytes();
    if bytes.is_empty() {
        return Err(Error::InvalidInput("empty graph6 string".into()));
    }
    let (n, rest) = if bytes[0] == b'~' {
        if bytes.len() < 4 {
            return Err(Error::InvalidInput("truncated graph6 header".into()));
        }
        let n = ((bytes[1] as usize - 63) << 12)
            | ((bytes[2] as usize - 63) << 6)
            | (bytes[3] as usize - 63);
        (n, &bytes[4..])
    } else {
        ((bytes[0] as usize).wrapping_sub(63), &bytes[1..])
    };
    if n > MAX_NODES {
        return Err(Error::CapExceeded {
            what: "graph6 nodes",
            cap: MAX_NODES,
            got: n,
        });
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    if rest.len() != need {
        return Err(Error::InvalidInput(format!(
            "graph6 body length {} (expected {need})",
            rest.len()
        )));
    }
    let mut bits = Vec::with_capacity(pairs);
    for &b in rest {
        if !(63..=126).contains(&b) {
            return Err(Error::InvalidInput("graph6 byte out of range".into()));
        }
        let v = b - 63;
        for i in 0..6 {
            bits.push((v >> (5 - i)) & 1 == 1);
        }
    }
    let mut edges = vec![];
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[idx] {
                edges.push((i, j));
            }
            idx += 1;
        }
    }
    Graph::new(n, &edges)
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    #[serde(default)]
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, u32>,
}

pub fn to_json(g: &Graph) -> serde_json::Value {
    let dto = GraphJson {
        n: g.n,
        edges: g.edges(),
        labels: g
            .labeled_nodes()
            .into_iter()
            .map(|(v, l)| (v.to_string(), l))
            .collect(),
    };
    serde_json::to_value(dto).expect("graph serialization is infallible")
}

pub fn from_json(v: &serde_json::Value) -> Result<Graph> {
    let dto: GraphJson = serde_json::from_value(v.clone())?;
    let labels: Vec<(usize, u32)> = dto
        .labels
        .iter()
        .map(|(k, &l)| {
            k.parse::<usize>()
                .map(|node| (node, l))
                .map_err(|_| Error::InvalidInput(format!("bad node key {k:?}")))
        })
        .collect::<Result<_>>()?;
    Graph::with_labels(dto.n, &dto.edges, &labels)
}

/// Parse a graph from a string that is either graph6 or the JSON form.
pub fn parse_graph(s: &str) -> Result<Graph> {
    let t = s.trim();
    if t.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(t)?;
        from_json(&v)
    } else {
        from_graph6(t)
    }
}
