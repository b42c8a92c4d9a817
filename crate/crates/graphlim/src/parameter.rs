//! Graph parameters as finite tables over isomorphism classes, the Möbius
//! transform and its inverse, normalization / isolate-indifference /
//! multiplicativity predicates, connection matrices, and the
//! Lindström-Wilf positive-semidefiniteness test for flat connection
//! matrices.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::density::graphon_density_graphon;
use crate::error::{Error, Result};
use crate::graph::{
    enumerate_flat, enumerate_unlabeled_upto, glue, labeled_class_table, CanonicalForm, Graph,
};
use crate::graphon::{RandomGraphonModel, StepGraphon};
use crate::linalg::Mat;
use crate::num::{format_rat, parse_rat, superset_mobius_in_place, superset_zeta_in_place};
use crate::Rat;

/// Cap on parameter table size (classes up to this many nodes).
pub const MAX_PARAM_CAP: usize = 6;
/// Cap on label count for the flat PSD test (2^(k choose 2) flat graphs).
pub const MAX_FLAT_PSD_LABELS: usize = 4;
/// Caps for general connection matrices.
pub const MAX_CONN_LABELS: usize = 4;
pub const MAX_CONN_EXTRA: usize = 2;

/// A graph parameter truncated to isomorphism classes with at most `cap`
/// nodes. The table is total: every class up to the cap has a value.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphParameter {
    cap: usize,
    values: BTreeMap<CanonicalForm, Rat>,
}

impl GraphParameter {
    /// Build a table by evaluating `f` on one representative per class.
    pub fn from_fn(cap: usize, mut f: impl FnMut(&Graph) -> Result<Rat>) -> Result<Self> {
        if cap > MAX_PARAM_CAP {
            return Err(Error::CapExceeded {
                what: "parameter cap",
                cap: MAX_PARAM_CAP,
                got: cap,
            });
        }
        let mut values = BTreeMap::new();
        for g in enumerate_unlabeled_upto(cap)? {
            let v = f(&g)?;
            values.insert(g.canonical_form()?, v);
        }
        Ok(GraphParameter { cap, values })
    }

    /// Build from an explicit table; it must cover every class up to `cap`
    /// and nothing else.
    pub fn from_table(cap: usize, table: BTreeMap<CanonicalForm, Rat>) -> Result<Self> {
        let built = GraphParameter::from_fn(cap, |g| {
            table
                .get(&g.canonical_form()?)
                .cloned()
                .ok_or_else(|| Error::InvalidInput("parameter table misses a class".into()))
        })?;
        if table.len() != built.values.len() {
            return Err(Error::InvalidInput(
                "parameter table has entries outside the class list".into(),
            ));
        }
        Ok(built)
    }

    /// The parameter t(., W) of a step graphon.
    pub fn from_graphon(w: &StepGraphon<Rat>, cap: usize) -> Result<Self> {
        GraphParameter::from_fn(cap, |g| graphon_density_graphon(g, w))
    }

    /// The expectation parameter E t(., W) of a random graphon model.
    pub fn from_model(m: &RandomGraphonModel, cap: usize) -> Result<Self> {
        GraphParameter::from_fn(cap, |g| {
            let mut acc = Rat::zero();
            for (p, w) in m.items() {
                acc += p.clone() * graphon_density_graphon(g, w)?;
            }
            Ok(acc)
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn value(&self, g: &Graph) -> Result<Rat> {
        if g.n() > self.cap {
            return Err(Error::OutOfTable {
                nodes: g.n(),
                cap: self.cap,
            });
        }
        let canon = g.unlabel().canonical_form()?;
        self.values
            .get(&canon)
            .cloned()
            .ok_or_else(|| Error::InvalidInput("class missing from parameter table".into()))
    }

    pub fn classes(&self) -> Result<Vec<(Graph, Rat)>> {
        enumerate_unlabeled_upto(self.cap)?
            .into_iter()
            .map(|g| {
                let v = self.value(&g)?;
                Ok((g, v))
            })
            .collect()
    }

    /// f(K0) = f(K1) = 1.
    pub fn is_normalized(&self) -> Result<bool> {
        Ok(self.value(&Graph::k0())?.is_one()
            && self.value(&Graph::complete(1)?)?.is_one())
    }

    /// A pair (F, F plus an isolated node) with different values, if any.
    pub fn isolate_indifference_witness(&self) -> Result<Option<(Graph, Graph)>> {
        for g in enumerate_unlabeled_upto(self.cap.saturating_sub(1))? {
            let plus = g.extend_with_node(0)?;
            if self.value(&g)? != self.value(&plus)? {
                return Ok(Some((g, plus)));
            }
        }
        Ok(None)
    }

    pub fn is_isolate_indifferent(&self) -> Result<bool> {
        Ok(self.isolate_indifference_witness()?.is_none())
    }

    /// A pair with f(F1 F2) != f(F1) f(F2) among disjoint unions inside the
    /// table, if any.
    pub fn multiplicativity_witness(&self) -> Result<Option<(Graph, Graph)>> {
        let classes = enumerate_unlabeled_upto(self.cap)?;
        for a in &classes {
            for b in &classes {
                if a.n() + b.n() > self.cap {
                    continue;
                }
                let union = glue(a, b);
                if self.value(&union)? != self.value(a)? * self.value(b)? {
                    return Ok(Some((a.clone(), b.clone())));
                }
            }
        }
        Ok(None)
    }

    /// Values of the Möbius transform on every labeled graph on `[n]`,
    /// indexed by edge mask.
    pub fn mobius_mask_values(&self, n: usize) -> Result<Vec<Rat>> {
        if n > self.cap {
            return Err(Error::OutOfTable {
                nodes: n,
                cap: self.cap,
            });
        }
        let table = labeled_class_table(n)?;
        let class_values: Vec<Rat> = table
            .canons
            .iter()
            .map(|c| {
                self.values
                    .get(c)
                    .cloned()
                    .ok_or_else(|| Error::InvalidInput("class missing from parameter table".into()))
            })
            .collect::<Result<_>>()?;
        let mut xs: Vec<Rat> = table
            .class_of
            .iter()
            .map(|&c| class_values[c as usize].clone())
            .collect();
        superset_mobius_in_place(&mut xs);
        Ok(xs)
    }

    /// The Möbius transform f†, stored per class: an alternating sum of f
    /// over edge-supersets on the same node set.
    pub fn mobius(&self) -> Result<GraphParameter> {
        self.subset_transform(true)
    }

    /// Inverse of [`mobius`]: the superset zeta transform.
    ///
    /// [`mobius`]: GraphParameter::mobius
    pub fn mobius_inverse(&self) -> Result<GraphParameter> {
        self.subset_transform(false)
    }

    fn subset_transform(&self, mobius: bool) -> Result<GraphParameter> {
        let mut values = BTreeMap::new();
        for n in 0..=self.cap {
            let table = labeled_class_table(n)?;
            let class_values: Vec<Rat> = table
                .canons
                .iter()
                .map(|c| {
                    self.values.get(c).cloned().ok_or_else(|| {
                        Error::InvalidInput("class missing from parameter table".into())
                    })
                })
                .collect::<Result<_>>()?;
            let mut xs: Vec<Rat> = table
                .class_of
                .iter()
                .map(|&c| class_values[c as usize].clone())
                .collect();
            if mobius {
                superset_mobius_in_place(&mut xs);
            } else {
                superset_zeta_in_place(&mut xs);
            }
            for (canon, rep) in table.canons.iter().zip(table.reps.iter()) {
                let mask = rep.edge_mask();
                values.insert(canon.clone(), xs[mask as usize].clone());
            }
        }
        Ok(GraphParameter {
            cap: self.cap,
            values,
        })
    }
}

/// Connection matrix of a parameter: rows and columns indexed by k-labeled
/// graphs, entries f(F1 F2).
#[derive(Debug, Clone)]
pub struct ConnectionMatrix {
    k: usize,
    index: Vec<Graph>,
    entries: Mat<Rat>,
}

impl ConnectionMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index(&self) -> &[Graph] {
        &self.index
    }

    pub fn entries(&self) -> &Mat<Rat> {
        &self.entries
    }

    pub fn is_psd(&self) -> bool {
        crate::linalg::is_psd_exact(&self.entries)
    }
}

/// All k-labeled graphs with at most `k + extra` nodes, up to
/// label-preserving isomorphism, deterministically ordered.
fn enumerate_k_labeled(k: usize, extra: usize) -> Result<Vec<Graph>> {
    let labels: Vec<(usize, u32)> = (0..k).map(|i| (i, i as u32 + 1)).collect();
    let mut out: BTreeMap<(usize, CanonicalForm), Graph> = BTreeMap::new();
    for e in 0..=extra {
        let n = k + e;
        let pairs = n * n.saturating_sub(1) / 2;
        for mask in 0..(1u64 << pairs) {
            let plain = Graph::from_edge_mask(n, mask)?;
            let g = Graph::with_labels(n, &plain.edges(), &labels)?;
            let (rep, canon) = g.canonical()?;
            out.entry((n, canon)).or_insert(rep);
        }
    }
    Ok(out.into_values().collect())
}

/// The k-th connection matrix truncated to index graphs with at most
/// `k + extra` nodes. Every glued product must stay within the table cap.
pub fn connection_matrix(f: &GraphParameter, k: usize, extra: usize) -> Result<ConnectionMatrix> {
    if k > MAX_CONN_LABELS {
        return Err(Error::CapExceeded {
            what: "connection-matrix labels",
            cap: MAX_CONN_LABELS,
            got: k,
        });
    }
    if extra > MAX_CONN_EXTRA {
        return Err(Error::CapExceeded {
            what: "connection-matrix extra nodes",
            cap: MAX_CONN_EXTRA,
            got: extra,
        });
    }
    let index = enumerate_k_labeled(k, extra)?;
    let n = index.len();
    let mut entries = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let prod = glue(&index[i], &index[j]);
            let v = f.value(&prod.unlabel())?;
            entries.set(i, j, v.clone());
            entries.set(j, i, v);
        }
    }
    Ok(ConnectionMatrix { k, index, entries })
}

/// The flat connection matrix M_flat(f, k), indexed by the 2^(k choose 2)
/// flat k-labeled graphs in mask order; gluing two flat graphs takes the
/// union of their edge sets.
pub fn flat_connection_matrix(f: &GraphParameter, k: usize) -> Result<ConnectionMatrix> {
    if k > MAX_FLAT_PSD_LABELS {
        return Err(Error::CapExceeded {
            what: "flat labels",
            cap: MAX_FLAT_PSD_LABELS,
            got: k,
        });
    }
    if k > f.cap() {
        return Err(Error::OutOfTable {
            nodes: k,
            cap: f.cap(),
        });
    }
    let index = enumerate_flat(k)?;
    let table = labeled_class_table(k)?;
    let class_values: Vec<Rat> = table
        .canons
        .iter()
        .map(|c| f.values.get(c).cloned().expect("cap checked above"))
        .collect();
    let m = index.len();
    let mut entries = Mat::zeros(m, m);
    for a in 0..m {
        for b in a..m {
            let union = (a as u64) | (b as u64);
            let v = class_values[table.class_of[union as usize] as usize].clone();
            entries.set(a, b, v.clone());
            entries.set(b, a, v);
        }
    }
    Ok(ConnectionMatrix { k, index, entries })
}

/// Outcome of the flat PSD test.
#[derive(Debug, Clone)]
pub struct FlatPsdReport {
    pub psd: bool,
    /// a flat graph with negative Möbius value, when not PSD
    pub witness: Option<(Graph, Rat)>,
    /// the factorization M_flat = Zᵀ D Z held entrywise
    pub factorization_ok: bool,
}

/// Lindström-Wilf test: M_flat(f,k) is PSD iff f† >= 0 on all flat graphs
/// on `[k]`. Also verifies the exact factorization M_flat = Zᵀ D Z with
/// Z_{F,A} = 1[F ⊇ A] and D = diag(f†(F)).
pub fn flat_psd_test(f: &GraphParameter, k: usize) -> Result<FlatPsdReport> {
    let m = flat_connection_matrix(f, k)?;
    let mob = f.mobius_mask_values(k)?;
    let size = mob.len();

    let mut witness = None;
    for (mask, v) in mob.iter().enumerate() {
        if *v < Rat::zero() {
            witness = Some((Graph::flat_from_mask(k, mask as u64)?, v.clone()));
            break;
        }
    }

    let z = Mat::from_fn(size, size, |fm, am| {
        if fm & am == am {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    let d = Mat::from_fn(size, size, |i, j| {
        if i == j {
            mob[i].clone()
        } else {
            Rat::zero()
        }
    });
    let ztdz = z.transpose().mul(&d).mul(&z);
    let factorization_ok = ztdz == *m.entries();

    Ok(FlatPsdReport {
        psd: witness.is_none(),
        witness,
        factorization_ok,
    })
}

// ---------------------------------------------------------------------------
// JSON format: flat object {graph6-of-canonical-representative: "p/q"}
// ---------------------------------------------------------------------------

pub fn parameter_to_json(f: &GraphParameter) -> Result<serde_json::Value> {
    let mut map = serde_json::Map::new();
    for (g, v) in f.classes()? {
        map.insert(crate::graph::to_graph6(&g)?, format_rat(&v).into());
    }
    Ok(serde_json::Value::Object(map))
}

pub fn parameter_from_json(v: &serde_json::Value) -> Result<GraphParameter> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidInput("parameter JSON must be an object".into()))?;
    let mut table = BTreeMap::new();
    let mut cap = 0;
    for (key, val) in obj {
        let g = crate::graph::from_graph6(key)?;
        cap = cap.max(g.n());
        let s = val
            .as_str()
            .ok_or_else(|| Error::InvalidInput("parameter values must be rational strings".into()))?;
        table.insert(g.canonical_form()?, parse_rat(s)?);
    }
    GraphParameter::from_table(cap, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat_of;
    use num_traits::pow::pow;

    fn const_param(p: Rat, cap: usize) -> GraphParameter {
        GraphParameter::from_graphon(&StepGraphon::constant(p).unwrap(), cap).unwrap()
    }

    #[test]
    fn from_graphon_constant_is_p_to_edges() {
        let p = rat_of(1, 2);
        let f = const_param(p.clone(), 5);
        for (g, v) in f.classes().unwrap() {
            assert_eq!(v, pow(p.clone(), g.edge_count()));
        }
        assert!(f.is_normalized().unwrap());
    }

    #[test]
    fn from_graphon_wk2_kills_triangles() {
        let w = crate::graphon::graphon_of(&Graph::complete(2).unwrap()).unwrap();
        let f = GraphParameter::from_graphon(&w, 4).unwrap();
        assert_eq!(f.value(&Graph::complete(3).unwrap()).unwrap(), Rat::zero());
        assert!(f.is_normalized().unwrap());
    }

    #[test]
    fn mixture_parameter_values_and_non_multiplicativity() {
        let m = RandomGraphonModel::new(vec![
            (rat_of(1, 2), StepGraphon::constant(Rat::zero()).unwrap()),
            (rat_of(1, 2), StepGraphon::constant(Rat::one()).unwrap()),
        ])
        .unwrap();
        let f = GraphParameter::from_model(&m, 5).unwrap();
        for (g, v) in f.classes().unwrap() {
            if g.edge_count() == 0 {
                assert!(v.is_one());
            } else {
                assert_eq!(v, rat_of(1, 2));
            }
        }
        // f(K2 ∪ K2) = 1/2 but f(K2)^2 = 1/4
        assert!(f.multiplicativity_witness().unwrap().is_some());
        // the expectation inherits normalization, isolate-indifference and
        // a nonnegative Möbius transform from its components
        assert!(f.is_normalized().unwrap());
        assert!(f.is_isolate_indifferent().unwrap());
        for n in 0..=5 {
            for v in f.mobius_mask_values(n).unwrap() {
                assert!(v >= Rat::zero());
            }
        }
        // singleton model equals from_graphon
        let w = StepGraphon::constant(rat_of(1, 3)).unwrap();
        let s = RandomGraphonModel::singleton(w.clone());
        assert_eq!(
            GraphParameter::from_model(&s, 4).unwrap(),
            GraphParameter::from_graphon(&w, 4).unwrap()
        );
    }

    /// Oracle: the Möbius transform by literal enumeration of supersets on
    /// the same node set.
    fn mobius_literal(f: &GraphParameter, g: &Graph) -> Rat {
        let n = g.n();
        let mask = g.edge_mask();
        let pairs = n * n.saturating_sub(1) / 2;
        let mut acc = Rat::zero();
        for sup in 0..(1u64 << pairs) {
            if sup & mask != mask {
                continue;
            }
            let term = f.value(&Graph::from_edge_mask(n, sup).unwrap()).unwrap();
            if (sup & !mask).count_ones().is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn mobius_constant_closed_form_at_n3() {
        let p = rat_of(1, 3);
        let f = const_param(p.clone(), 4);
        let mob = f.mobius().unwrap();
        for g in crate::graph::enumerate_unlabeled(3).unwrap() {
            let e = g.edge_count();
            let expect = pow(p.clone(), e) * pow(Rat::one() - p.clone(), 3 - e);
            assert_eq!(mob.value(&g).unwrap(), expect);
            assert_eq!(mobius_literal(&f, &g), expect);
        }
    }

    #[test]
    fn mobius_of_complete_graph_is_f_itself() {
        let f = const_param(rat_of(2, 5), 5);
        let mob = f.mobius().unwrap();
        for n in 0..=5 {
            let kn = Graph::complete(n).unwrap();
            assert_eq!(mob.value(&kn).unwrap(), f.value(&kn).unwrap());
        }
    }

    #[test]
    fn labeled_mobius_sums_to_one_for_graphon_parameters() {
        let w = crate::graphon::graphon_of(&Graph::path(3).unwrap()).unwrap();
        let f = GraphParameter::from_graphon(&w, 5).unwrap();
        for n in 0..=5 {
            let mob = f.mobius_mask_values(n).unwrap();
            let total: Rat = mob.iter().cloned().sum();
            assert!(total.is_one(), "n={n}: sum {total}");
        }
    }

    #[test]
    fn zeta_of_edgeless_indicator_is_itself() {
        // the only edgeless edge-superset of F on the same nodes is F itself
        // when F is edgeless, so the superset-zeta fixes the indicator
        let g = GraphParameter::from_fn(4, |f| {
            Ok(if f.edge_count() == 0 { Rat::one() } else { Rat::zero() })
        })
        .unwrap();
        let f = g.mobius_inverse().unwrap();
        assert_eq!(f, g);
        // literal zeta sum agrees, as an independent check
        for rep in crate::graph::enumerate_unlabeled(3).unwrap() {
            let mask = rep.edge_mask();
            let mut acc = Rat::zero();
            for sup in 0..8u64 {
                if sup & mask == mask && sup.count_ones() == 0 {
                    acc += Rat::one();
                }
            }
            assert_eq!(f.value(&rep).unwrap(), acc);
        }
    }

    #[test]
    fn mobius_inverse_round_trip_on_random_tables() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..5 {
            let f = GraphParameter::from_fn(5, |_| {
                Ok(rat_of((next() % 41) as i64 - 20, (next() % 7 + 1) as i64))
            })
            .unwrap();
            assert_eq!(f.mobius().unwrap().mobius_inverse().unwrap(), f);
            assert_eq!(f.mobius_inverse().unwrap().mobius().unwrap(), f);
        }
    }

    #[test]
    fn isolate_indifference_checks() {
        let f = const_param(rat_of(1, 2), 4);
        assert!(f.is_isolate_indifferent().unwrap());

        let nodes = GraphParameter::from_fn(4, |g| Ok(rat_of(g.n() as i64, 1))).unwrap();
        let w = nodes.isolate_indifference_witness().unwrap();
        assert!(w.is_some());
        let (a, b) = w.unwrap();
        assert_eq!(b.n(), a.n() + 1);

        let edges = GraphParameter::from_fn(4, |g| Ok(rat_of(g.edge_count() as i64, 1))).unwrap();
        assert!(edges.is_isolate_indifferent().unwrap());

        let m = RandomGraphonModel::new(vec![
            (rat_of(1, 2), StepGraphon::constant(rat_of(1, 4)).unwrap()),
            (rat_of(1, 2), StepGraphon::constant(rat_of(3, 4)).unwrap()),
        ])
        .unwrap();
        let fm = GraphParameter::from_model(&m, 4).unwrap();
        assert!(fm.is_isolate_indifferent().unwrap());
    }

    #[test]
    fn flat_connection_matrix_k2_for_constant_graphon() {
        let p = rat_of(1, 2);
        let f = const_param(p.clone(), 4);
        let m = flat_connection_matrix(&f, 2).unwrap();
        assert_eq!(m.index().len(), 2);
        assert_eq!(*m.entries().get(0, 0), Rat::one());
        assert_eq!(*m.entries().get(0, 1), p);
        assert_eq!(*m.entries().get(1, 0), p);
        assert_eq!(*m.entries().get(1, 1), p);
        assert!(m.is_psd());
    }

    #[test]
    fn connection_matrix_zero_labels_is_disjoint_union_table() {
        let f = const_param(rat_of(1, 3), 6);
        let m = connection_matrix(&f, 0, 2).unwrap();
        // index: K0, K1, U2, K2
        assert_eq!(m.index().len(), 4);
        for (i, a) in m.index().iter().enumerate() {
            for (j, b) in m.index().iter().enumerate() {
                let union = glue(a, b);
                assert_eq!(*m.entries().get(i, j), f.value(&union).unwrap());
            }
        }
        // graphon parameters stay within [0, f(K0)]
        for i in 0..4 {
            for j in 0..4 {
                let v = m.entries().get(i, j);
                assert!(*v >= Rat::zero() && *v <= f.value(&Graph::k0()).unwrap());
            }
        }
    }

    #[test]
    fn connection_matrix_labeled_entries_use_glue_classes() {
        let f = const_param(rat_of(1, 2), 6);
        let m = connection_matrix(&f, 2, 1).unwrap();
        // 2-labeled graphs on <= 3 nodes: 2 flat + those with one extra node
        assert!(m.index().len() > 2);
        for (i, a) in m.index().iter().enumerate() {
            assert!(a.label_arity() == Some(2));
            for (j, b) in m.index().iter().enumerate() {
                let prod = glue(a, b).unlabel();
                assert_eq!(*m.entries().get(i, j), f.value(&prod).unwrap());
            }
        }
    }

    #[test]
    fn flat_psd_holds_for_graphon_parameters() {
        for w in [
            StepGraphon::constant(rat_of(1, 2)).unwrap(),
            crate::graphon::graphon_of(&Graph::path(3).unwrap()).unwrap(),
            crate::graphon::graphon_of(&Graph::cycle(4).unwrap()).unwrap(),
        ] {
            let f = GraphParameter::from_graphon(&w, 4).unwrap();
            for k in 0..=3 {
                let r = flat_psd_test(&f, k).unwrap();
                assert!(r.psd, "k={k}");
                assert!(r.factorization_ok, "k={k}");
                assert!(flat_connection_matrix(&f, k).unwrap().is_psd());
            }
        }
    }

    #[test]
    fn flat_psd_fails_with_mobius_witness() {
        // p = 1 table with f(K2) bumped to 2: f†(U2) = 1 - 2 = -1
        let mut f = const_param(Rat::one(), 3);
        let k2 = Graph::complete(2).unwrap().canonical_form().unwrap();
        f.values.insert(k2, rat_of(2, 1));
        let r = flat_psd_test(&f, 2).unwrap();
        assert!(!r.psd);
        assert!(r.factorization_ok, "factorization is exact regardless");
        let (g, v) = r.witness.unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(v, rat_of(-1, 1));
        assert!(!flat_connection_matrix(&f, 2).unwrap().is_psd());
    }

    #[test]
    fn factorization_exact_on_random_tables_k3() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..5 {
            let f = GraphParameter::from_fn(4, |_| {
                Ok(rat_of((next() % 33) as i64 - 16, (next() % 5 + 1) as i64))
            })
            .unwrap();
            let r = flat_psd_test(&f, 3).unwrap();
            assert!(r.factorization_ok);
            assert_eq!(r.psd, flat_connection_matrix(&f, 3).unwrap().is_psd());
        }
    }

    #[test]
    fn parameter_json_round_trip() {
        let f = const_param(rat_of(2, 3), 4);
        let v = parameter_to_json(&f).unwrap();
        assert_eq!(parameter_from_json(&v).unwrap(), f);
    }

    #[test]
    fn caps_and_gaps_are_rejected() {
        assert!(GraphParameter::from_fn(7, |_| Ok(Rat::one())).is_err());
        let f = const_param(rat_of(1, 2), 3);
        assert!(f.value(&Graph::complete(4).unwrap()).is_err());
        assert!(flat_connection_matrix(&f, 4).is_err());
    }
}
