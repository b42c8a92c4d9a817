//! Quantum graphs: formal rational linear combinations of graphs, the
//! bilinear gluing product, squares with label erasure, simplification
//! modulo isolated nodes, the ℓ1 coefficient norm, and evaluation against
//! graphs, graphons and parameters.
//!
//! All terms of one quantum graph share a label arity k (labels exactly
//! `1..=k`; k = 0 means unlabeled). Unlabeled quantum graphs collect their
//! coefficients modulo the delete-isolated-nodes relation, which is the
//! basis the certificate residuals are measured in; an isomorphism-level
//! collection is available separately for debugging.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::density::{graphon_density, hom_density};
use crate::error::{Error, Result};
use crate::graph::{glue, CanonicalForm, Graph};
use crate::graphon::{StepFn, StepGraphon};
use crate::num::{format_rat, parse_rat, rat_f64};
use crate::parameter::GraphParameter;
use crate::Rat;

/// Formal linear combination of graphs of one label arity.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGraph {
    arity: usize,
    terms: BTreeMap<CanonicalForm, (Graph, Rat)>,
}

impl QuantumGraph {
    pub fn zero(arity: usize) -> Self {
        QuantumGraph {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// Collect terms. Labeled terms are merged by label-preserving
    /// isomorphism; unlabeled terms are first stripped of isolated nodes
    /// and merged modulo that relation.
    pub fn from_terms(terms: Vec<(Graph, Rat)>) -> Result<Self> {
        let mut arity = None;
        for (g, _) in &terms {
            let k = g.label_arity().ok_or_else(|| {
                Error::InvalidGraph("term labels must be exactly 1..=k".into())
            })?;
            match arity {
                None => arity = Some(k),
                Some(a) if a != k => {
                    return Err(Error::IncompatibleArity { left: a, right: k })
                }
                _ => {}
            }
        }
        let arity = arity.unwrap_or(0);
        let mut out = QuantumGraph::zero(arity);
        for (g, c) in terms {
            let g = if arity == 0 { g.drop_isolates() } else { g };
            out.add_term(g, c)?;
        }
        Ok(out)
    }

    /// Isomorphism-level collection for unlabeled terms (no isolate
    /// stripping); debugging aid.
    pub fn from_terms_iso(terms: Vec<(Graph, Rat)>) -> Result<Self> {
        let mut out = QuantumGraph::zero(0);
        for (g, c) in terms {
            if !g.is_unlabeled() {
                return Err(Error::InvalidInput(
                    "isomorphism-level collection takes unlabeled terms".into(),
                ));
            }
            out.add_term(g, c)?;
        }
        Ok(out)
    }

    pub fn single(g: Graph, coeff: Rat) -> Result<Self> {
        QuantumGraph::from_terms(vec![(g, coeff)])
    }

    fn add_term(&mut self, g: Graph, c: Rat) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        let canon = g.canonical_form()?;
        match self.terms.entry(canon) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((g, c));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().1 += c;
                if e.get().1.is_zero() {
                    e.remove();
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Graph, &Rat)> {
        self.terms.values().map(|(g, c)| (g, c))
    }

    pub fn coeff(&self, g: &Graph) -> Result<Rat> {
        let g = if self.arity == 0 {
            g.drop_isolates()
        } else {
            g.clone()
        };
        Ok(self
            .terms
            .get(&g.canonical_form()?)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero))
    }

    pub fn add(&self, other: &QuantumGraph) -> Result<QuantumGraph> {
        if self.arity != other.arity && !self.is_zero() && !other.is_zero() {
            return Err(Error::IncompatibleArity {
                left: self.arity,
                right: other.arity,
            });
        }
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QuantumGraph) -> Result<QuantumGraph> {
        self.add(&other.scale(&-Rat::from(crate::Int::from(1))))
    }

    pub fn scale(&self, c: &Rat) -> QuantumGraph {
        if c.is_zero() {
            return QuantumGraph::zero(self.arity);
        }
        QuantumGraph {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, (g, v))| (k.clone(), (g.clone(), v.clone() * c.clone())))
                .collect(),
        }
    }

    /// The maximum node count among terms (0 for the zero element).
    pub fn max_term_nodes(&self) -> usize {
        self.terms().map(|(g, _)| g.n()).max().unwrap_or(0)
    }
}

/// Bilinear gluing product; both factors must share one label arity.
pub fn qg_product(x: &QuantumGraph, y: &QuantumGraph) -> Result<QuantumGraph> {
    if x.arity() != y.arity() && !x.is_zero() && !y.is_zero() {
        return Err(Error::IncompatibleArity {
            left: x.arity(),
            right: y.arity(),
        });
    }
    let mut out = QuantumGraph::zero(x.arity());
    for (g1, c1) in x.terms() {
        for (g2, c2) in y.terms() {
            let prod = glue(g1, g2);
            let prod = if out.arity == 0 { prod.drop_isolates() } else { prod };
            out.add_term(prod, c1.clone() * c2.clone())?;
        }
    }
    Ok(out)
}

/// Square a labeled quantum graph, erase every label, and simplify modulo
/// isolated nodes. The result is unlabeled.
pub fn square_and_unlabel(y: &QuantumGraph) -> Result<QuantumGraph> {
    let sq = qg_product(y, y)?;
    let terms: Vec<(Graph, Rat)> = sq
        .terms()
        .map(|(g, c)| (g.unlabel(), c.clone()))
        .collect();
    QuantumGraph::from_terms(terms)
}

/// Re-collect an unlabeled quantum graph modulo the delete-isolated-nodes
/// relation. Idempotent; the identity on anything built by `from_terms`.
pub fn simplify_iso(x: &QuantumGraph) -> Result<QuantumGraph> {
    if x.arity() != 0 {
        return Err(Error::InvalidInput("simplification takes unlabeled quantum graphs".into()));
    }
    QuantumGraph::from_terms(x.terms().map(|(g, c)| (g.clone(), c.clone())).collect())
}

/// Sum of absolute coefficients over the collected classes.
pub fn l1_norm(x: &QuantumGraph) -> Rat {
    x.terms().map(|(_, c)| c.abs()).sum()
}

impl QuantumGraph {
    fn require_unlabeled(&self) -> Result<()> {
        if self.arity != 0 {
            return Err(Error::InvalidInput(
                "evaluation takes unlabeled quantum graphs".into(),
            ));
        }
        Ok(())
    }

    /// Linear extension of t(., G).
    pub fn evaluate_graph(&self, g: &Graph) -> Result<Rat> {
        self.require_unlabeled()?;
        let mut acc = Rat::zero();
        for (f, c) in self.terms() {
            acc += c.clone() * hom_density(f, g)?;
        }
        Ok(acc)
    }

    /// Linear extension of t(., W).
    pub fn evaluate_graphon(&self, w: &StepGraphon<Rat>) -> Result<Rat> {
        self.require_unlabeled()?;
        let mut acc = Rat::zero();
        for (f, c) in self.terms() {
            acc += c.clone() * graphon_density(f, w.as_step_fn())?;
        }
        Ok(acc)
    }

    /// Linear extension of a parameter table; every term must fit the cap.
    pub fn evaluate_parameter(&self, p: &GraphParameter) -> Result<Rat> {
        self.require_unlabeled()?;
        let mut acc = Rat::zero();
        for (f, c) in self.terms() {
            acc += c.clone() * p.value(f)?;
        }
        Ok(acc)
    }

    /// Float evaluation against a float step function (witness search path).
    pub fn evaluate_step_fn_f64(&self, w: &StepFn<f64>) -> Result<f64> {
        self.require_unlabeled()?;
        let mut acc = 0.0;
        for (f, c) in self.terms() {
            acc += rat_f64(c) * graphon_density(f, w)?;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// JSON format: [{"graph": {...}, "coeff": "p/q"}, ...]
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermJson {
    graph: serde_json::Value,
    coeff: String,
}

pub fn quantum_to_json(x: &QuantumGraph) -> serde_json::Value {
    let terms: Vec<TermJson> = x
        .terms()
        .map(|(g, c)| TermJson {
            graph: crate::graph::to_json(g),
            coeff: format_rat(c),
        })
        .collect();
    serde_json::to_value(terms).expect("quantum graph serialization is infallible")
}

pub fn quantum_from_json(v: &serde_json::Value) -> Result<QuantumGraph> {
    let dtos: Vec<TermJson> = serde_json::from_value(v.clone())?;
    let terms = dtos
        .iter()
        .map(|t| Ok((crate::graph::from_json(&t.graph)?, parse_rat(&t.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    QuantumGraph::from_terms(terms)
}
