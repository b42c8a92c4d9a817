//! Exchangeable random graph models: exact finite models built from a
//! parameter through its Möbius transform, last-node marginalization,
//! latent-variable prefix sampling from a random graphon model, and the
//! locality / convergence diagnostics.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use num_traits::{One, Signed, Zero};

use crate::density::{graphon_density_graphon, hom_density, inj_density};
use crate::error::{Error, Result};
use crate::graph::{labeled_class_table, CanonicalForm, Graph, MAX_NODES};
use crate::graphon::{rat_of_u64, RandomGraphonModel, StepGraphon};
use crate::num::{format_rat, parse_rat, rat_f64};
use crate::parameter::GraphParameter;
use crate::Rat;

/// Cap on node count for exact finite models (needs the full labeled table).
pub const MAX_MODEL_NODES: usize = 6;
/// Cap on sampled prefix size.
pub const MAX_PREFIX_NODES: usize = MAX_NODES;

/// One isomorphism class in a finite exchangeable distribution.
#[derive(Debug, Clone)]
pub struct ModelClass {
    pub rep: Graph,
    pub canon: CanonicalForm,
    /// probability of each labeled graph on `[n]` in this class
    pub labeled_prob: Rat,
    /// number of labeled graphs on `[n]` in this class
    pub class_size: u64,
}

/// Exchangeable distribution over graphs on `[n]`, stored per isomorphism
/// class (exchangeability is then automatic).
#[derive(Debug, Clone)]
pub struct FiniteRandomModel {
    n: usize,
    classes: Vec<ModelClass>,
}

impl FiniteRandomModel {
    /// Build from per-labeled-graph class probabilities. The table must
    /// cover every class on `[n]`, be nonnegative, and sum to one.
    pub fn from_class_probs(
        n: usize,
        probs: &std::collections::BTreeMap<CanonicalForm, Rat>,
    ) -> Result<Self> {
        if n > MAX_MODEL_NODES {
            return Err(Error::CapExceeded {
                what: "model nodes",
                cap: MAX_MODEL_NODES,
                got: n,
            });
        }
        let table = labeled_class_table(n)?;
        let mut classes = Vec::with_capacity(table.class_count());
        let mut total = Rat::zero();
        for i in 0..table.class_count() {
            let p = probs
                .get(&table.canons[i])
                .cloned()
                .ok_or_else(|| Error::InvalidInput("model misses a class".into()))?;
            if p < Rat::zero() {
                return Err(Error::InvalidInput("model probabilities must be nonnegative".into()));
            }
            total += p.clone() * Rat::from(crate::Int::from(table.class_sizes[i]));
            classes.push(ModelClass {
                rep: table.reps[i].clone(),
                canon: table.canons[i].clone(),
                labeled_prob: p,
                class_size: table.class_sizes[i],
            });
        }
        if !total.is_one() {
            return Err(Error::InvalidInput(format!(
                "model probabilities sum to {total}, not 1"
            )));
        }
        Ok(FiniteRandomModel { n, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[ModelClass] {
        &self.classes
    }

    fn labeled_prob_by_class_index(&self) -> Vec<Rat> {
        self.classes.iter().map(|c| c.labeled_prob.clone()).collect()
    }

    /// Distribution of the graph left after deleting the last node.
    pub fn marginalize_last(&self) -> Result<FiniteRandomModel> {
        if self.n == 0 {
            return Err(Error::SizeMismatch("cannot marginalize the empty model".into()));
        }
        let n = self.n;
        let table_big = labeled_class_table(n)?;
        let by_class = self.labeled_prob_by_class_index();
        let table_small = labeled_class_table(n - 1)?;
        let low_pairs = (n - 1) * n.saturating_sub(2) / 2;
        let mut probs = std::collections::BTreeMap::new();
        for i in 0..table_small.class_count() {
            let m0 = table_small.reps[i].edge_mask();
            let mut acc = Rat::zero();
            for pattern in 0..(1u64 << (n - 1)) {
                let full = m0 | (pattern << low_pairs);
                acc += by_class[table_big.class_of[full as usize] as usize].clone();
            }
            probs.insert(table_small.canons[i].clone(), acc);
        }
        FiniteRandomModel::from_class_probs(n - 1, &probs)
    }

    /// P(F ⊆ G_n) for an unlabeled pattern with at most n nodes, embedded
    /// on the first |V(F)| nodes.
    pub fn containment_prob(&self, f: &Graph) -> Result<Rat> {
        if !f.is_unlabeled() {
            return Err(Error::InvalidInput("containment pattern must be unlabeled".into()));
        }
        if f.n() > self.n {
            return Err(Error::SizeMismatch(format!(
                "pattern on {} nodes, model on {}",
                f.n(),
                self.n
            )));
        }
        let table = labeled_class_table(self.n)?;
        let by_class = self.labeled_prob_by_class_index();
        let base = f.edge_mask();
        let pairs = self.n * self.n.saturating_sub(1) / 2;
        let comp = !base & ((1u64 << pairs) - 1);
        let mut acc = Rat::zero();
        // enumerate supersets of base: base | sub for sub ⊆ comp
        let mut sub = comp;
        loop {
            let mask = base | sub;
            acc += by_class[table.class_of[mask as usize] as usize].clone();
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & comp;
        }
        Ok(acc)
    }

    /// E[t_inj(F, G_n)] under the model, exactly.
    pub fn expected_inj_density(&self, f: &Graph) -> Result<Rat> {
        let mut acc = Rat::zero();
        for c in &self.classes {
            let weight = c.labeled_prob.clone() * Rat::from(crate::Int::from(c.class_size));
            if weight.is_zero() {
                continue;
            }
            acc += weight * inj_density(f, &c.rep)?;
        }
        Ok(acc)
    }
}

/// The construction P(G_n = F) = f†(F): a consistent random graph model
/// from any normalized, isolate-indifferent parameter with nonnegative
/// Möbius transform at size n.
pub fn model_from_parameter(f: &GraphParameter, n: usize) -> Result<FiniteRandomModel> {
    if n > MAX_MODEL_NODES {
        return Err(Error::CapExceeded {
            what: "model nodes",
            cap: MAX_MODEL_NODES,
            got: n,
        });
    }
    if !f.is_normalized()? {
        return Err(Error::ModelPrecondition("parameter is not normalized".into()));
    }
    if let Some((a, b)) = f.isolate_indifference_witness()? {
        return Err(Error::ModelPrecondition(format!(
            "parameter is not isolate-indifferent: f differs on {} and {}",
            crate::graph::to_graph6(&a)?,
            crate::graph::to_graph6(&b)?,
        )));
    }
    let mob = f.mobius_mask_values(n)?;
    let table = labeled_class_table(n)?;
    let mut probs = std::collections::BTreeMap::new();
    for i in 0..table.class_count() {
        let mask = table.reps[i].edge_mask();
        let v = mob[mask as usize].clone();
        if v < Rat::zero() {
            return Err(Error::NegativeMobius {
                witness: crate::graph::to_graph6(&table.reps[i])?,
                value: format_rat(&v),
            });
        }
        probs.insert(table.canons[i].clone(), v);
    }
    FiniteRandomModel::from_class_probs(n, &probs)
}

/// Exact max deviation between `m_small` and the last-node marginal of
/// `m_big`; zero iff the pair is consistent.
pub fn check_consistency(m_small: &FiniteRandomModel, m_big: &FiniteRandomModel) -> Result<Rat> {
    if m_big.n() != m_small.n() + 1 {
        return Err(Error::SizeMismatch(format!(
            "expected models on n and n+1 nodes, got {} and {}",
            m_small.n(),
            m_big.n()
        )));
    }
    let marg = m_big.marginalize_last()?;
    let mut worst = Rat::zero();
    for (a, b) in m_small.classes().iter().zip(marg.classes().iter()) {
        debug_assert_eq!(a.canon, b.canon);
        let dev = (a.labeled_prob.clone() - b.labeled_prob.clone()).abs();
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}

/// W-random prefix sampler: one graphon drawn from the model, then latent
/// step coordinates per node and independent edge coins. Extending the
/// prefix never changes earlier decisions.
pub struct PrefixSampler {
    graphon: StepGraphon<Rat>,
    rng: ChaCha8Rng,
    coords: Vec<usize>,
    adj: Vec<u64>,
}

impl PrefixSampler {
    pub fn new(model: &RandomGraphonModel, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graphon = model.sample(&mut rng).clone();
        PrefixSampler {
            graphon,
            rng,
            coords: vec![],
            adj: vec![],
        }
    }

    pub fn graphon(&self) -> &StepGraphon<Rat> {
        &self.graphon
    }

    fn draw_step(&mut self) -> usize {
        let u = rat_of_u64(self.rng.next_u64());
        let mut acc = Rat::zero();
        for i in 0..self.graphon.steps() {
            acc += self.graphon.width(i).clone();
            if u < acc {
                return i;
            }
        }
        self.graphon.steps() - 1
    }

    /// The graph spanned by the first `n` nodes; grows the latent state as
    /// needed and caches every decision.
    pub fn sample_prefix(&mut self, n: usize) -> Result<Graph> {
        if n > MAX_PREFIX_NODES {
            return Err(Error::CapExceeded {
                what: "prefix nodes",
                cap: MAX_PREFIX_NODES,
                got: n,
            });
        }
        while self.coords.len() < n {
            let v = self.coords.len();
            let step = self.draw_step();
            self.coords.push(step);
            self.adj.push(0);
            for u in 0..v {
                let p = self.graphon.value(self.coords[u], step);
                let coin = rat_of_u64(self.rng.next_u64());
                if coin < *p {
                    self.adj[u] |= 1 << v;
                    self.adj[v] |= 1 << u;
                }
            }
        }
        let keep = if n == MAX_NODES {
            u64::MAX
        } else {
            (1u64 << n) - 1
        };
        let mut edges = vec![];
        for u in 0..n {
            let mut row = self.adj[u] & keep;
            while row != 0 {
                let v = row.trailing_zeros() as usize;
                row &= row - 1;
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges)
    }
}

/// Covariance diagnostic for locality: over independent samplers, estimates
/// Cov(1[G[S] ≅ F], 1[G[T] ≅ F]) for disjoint node sets S and T.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalityReport {
    /// exact covariance of the sampled indicators, as "p/q"
    pub covariance: String,
    pub covariance_float: f64,
    pub std_error: f64,
    /// covariance over its standard error (0 when both vanish)
    pub z_score: f64,
    pub samples: usize,
}

impl LocalityReport {
    pub fn covariance_rat(&self) -> Result<Rat> {
        parse_rat(&self.covariance)
    }
}

pub fn locality_test(
    model: &RandomGraphonModel,
    s_nodes: &[usize],
    t_nodes: &[usize],
    pattern: &Graph,
    samples: usize,
    seed: u64,
) -> Result<LocalityReport> {
    if s_nodes.iter().any(|v| t_nodes.contains(v)) {
        return Err(Error::InvalidInput("node sets must be disjoint".into()));
    }
    if s_nodes.len() != pattern.n() || t_nodes.len() != pattern.n() {
        return Err(Error::SizeMismatch(
            "node sets must match the pattern size".into(),
        ));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let max_node = s_nodes.iter().chain(t_nodes).max().copied().unwrap_or(0);
    let prefix = max_node + 1;
    if prefix > MAX_PREFIX_NODES {
        return Err(Error::CapExceeded {
            what: "prefix nodes",
            cap: MAX_PREFIX_NODES,
            got: prefix,
        });
    }
    let target = pattern.unlabel().canonical_form()?;

    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<bool> = Vec::with_capacity(samples);
    let mut ys: Vec<bool> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut sampler = PrefixSampler::new(model, master.next_u64());
        let g = sampler.sample_prefix(prefix)?;
        xs.push(g.induced(s_nodes)?.canonical_form()? == target);
        ys.push(g.induced(t_nodes)?.canonical_form()? == target);
    }

    let nr = Rat::from(crate::Int::from(samples as u64));
    let sum_x: u64 = xs.iter().map(|&b| b as u64).sum();
    let sum_y: u64 = ys.iter().map(|&b| b as u64).sum();
    let sum_xy: u64 = xs.iter().zip(&ys).map(|(&a, &b)| (a && b) as u64).sum();
    let mean_x = Rat::from(crate::Int::from(sum_x)) / nr.clone();
    let mean_y = Rat::from(crate::Int::from(sum_y)) / nr.clone();
    let cov = Rat::from(crate::Int::from(sum_xy)) / nr.clone() - mean_x.clone() * mean_y.clone();

    // spread of the products (x - x̄)(y - ȳ), whose mean is the covariance
    let covf = rat_f64(&cov);
    let (mx, my) = (rat_f64(&mean_x), rat_f64(&mean_y));
    let mut var_d = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        let d = (x as u8 as f64 - mx) * (y as u8 as f64 - my);
        var_d += (d - covf) * (d - covf);
    }
    var_d /= (samples - 1).max(1) as f64;
    let std_error = (var_d / samples as f64).sqrt();
    let z_score = if std_error == 0.0 {
        if covf == 0.0 {
            0.0
        } else {
            f64::INFINITY * covf.signum()
        }
    } else {
        covf / std_error
    };

    Ok(LocalityReport {
        covariance: format_rat(&cov),
        covariance_float: covf,
        std_error,
        z_score,
        samples,
    })
}

/// Density-discrepancy proxy for convergence of sampled prefixes to their
/// source graphon: max over patterns with at most 4 nodes of
/// |t(F, G_n) - t(F, W)|.
pub fn convergence_trace(
    model: &RandomGraphonModel,
    sizes: &[usize],
    seed: u64,
) -> Result<Vec<(usize, Rat)>> {
    if !model.is_singleton() {
        return Err(Error::InvalidInput(
            "convergence trace needs a singleton model".into(),
        ));
    }
    let patterns: Vec<Graph> = (1..=4)
        .flat_map(|n| crate::graph::enumerate_unlabeled(n).expect("small enumeration"))
        .collect();
    let mut sampler = PrefixSampler::new(model, seed);
    let w = sampler.graphon().clone();
    let limits: Vec<Rat> = patterns
        .iter()
        .map(|f| graphon_density_graphon(f, &w))
        .collect::<Result<_>>()?;

    let mut out = vec![];
    for &n in sizes {
        if n == 0 {
            return Err(Error::InvalidInput("trace sizes must be positive".into()));
        }
        let g = sampler.sample_prefix(n)?;
        let mut worst = Rat::zero();
        for (f, lim) in patterns.iter().zip(&limits) {
            let dev = (hom_density(f, &g)? - lim.clone()).abs();
            if dev > worst {
                worst = dev;
            }
        }
        out.push((n, worst));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSON format for finite models
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ModelClassJson {
    graph6: String,
    labeled_prob: String,
    class_size: u64,
}

#[derive(Serialize, Deserialize)]
struct FiniteModelJson {
    n: usize,
    classes: Vec<ModelClassJson>,
}

pub fn finite_model_to_json(m: &FiniteRandomModel) -> Result<serde_json::Value> {
    let dto = FiniteModelJson {
        n: m.n(),
        classes: m
            .classes()
            .iter()
            .map(|c| {
                Ok(ModelClassJson {
                    graph6: crate::graph::to_graph6(&c.rep)?,
                    labeled_prob: format_rat(&c.labeled_prob),
                    class_size: c.class_size,
                })
            })
            .collect::<Result<_>>()?,
    };
    Ok(serde_json::to_value(dto)?)
}

pub fn finite_model_from_json(v: &serde_json::Value) -> Result<FiniteRandomModel> {
    let dto: FiniteModelJson = serde_json::from_value(v.clone())?;
    let mut probs = std::collections::BTreeMap::new();
    for c in &dto.classes {
        let g = crate::graph::from_graph6(&c.graph6)?;
        probs.insert(g.canonical_form()?, parse_rat(&c.labeled_prob)?);
    }
    FiniteRandomModel::from_class_probs(dto.n, &probs)
}
