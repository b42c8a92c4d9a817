//! Step-function graphons, the graph embedding `W_G`, the cut norm, the
//! permutation-overlay cut distance between equal-order graphs, and
//! finitely supported random graphon models.

use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::num::{format_rat, parse_rat, rat_of, Scalar};
use crate::Rat;

/// Cap on the number of steps for cut-norm maximization.
pub const MAX_CUT_STEPS: usize = 20;
/// Cap on node count for the permutation-overlay cut distance.
pub const MAX_OVERLAY_NODES: usize = 8;
/// Cap on steps for density evaluation.
pub const MAX_DENSITY_STEPS: usize = 32;

/// Symmetric step function on `[0,1]^2` with arbitrary real values.
/// Step `i` has width `widths[i]`; the widths are positive and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFn<S> {
    widths: Vec<S>,
    values: Vec<Vec<S>>,
}

impl<S: Scalar> StepFn<S> {
    pub fn new(widths: Vec<S>, values: Vec<Vec<S>>) -> Result<Self> {
        let s = widths.len();
        if s == 0 {
            return Err(Error::InvalidInput("a step function needs steps".into()));
        }
        if widths.iter().any(|w| *w <= S::zero()) {
            return Err(Error::InvalidInput("step widths must be positive".into()));
        }
        let total = widths.iter().fold(S::zero(), |a, w| a + w.clone());
        if total != S::one() {
            return Err(Error::InvalidInput("step widths must sum to one".into()));
        }
        if values.len() != s || values.iter().any(|r| r.len() != s) {
            return Err(Error::SizeMismatch("value matrix must be s x s".into()));
        }
        for i in 0..s {
            for j in 0..i {
                if values[i][j] != values[j][i] {
                    return Err(Error::InvalidInput("value matrix must be symmetric".into()));
                }
            }
        }
        Ok(StepFn { widths, values })
    }

    pub fn steps(&self) -> usize {
        self.widths.len()
    }

    pub fn width(&self, i: usize) -> &S {
        &self.widths[i]
    }

    pub fn value(&self, i: usize, j: usize) -> &S {
        &self.values[i][j]
    }
}

/// Graphon given as a step function: symmetric, values in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon<S = Rat>(StepFn<S>);

impl<S: Scalar> StepGraphon<S> {
    pub fn new(widths: Vec<S>, values: Vec<Vec<S>>) -> Result<Self> {
        let f = StepFn::new(widths, values)?;
        if f.values
            .iter()
            .flatten()
            .any(|v| *v < S::zero() || *v > S::one())
        {
            return Err(Error::InvalidInput("graphon values must lie in [0,1]".into()));
        }
        Ok(StepGraphon(f))
    }

    /// The constant graphon `W == p`.
    pub fn constant(p: S) -> Result<Self> {
        StepGraphon::new(vec![S::one()], vec![vec![p]])
    }

    pub fn as_step_fn(&self) -> &StepFn<S> {
        &self.0
    }

    pub fn steps(&self) -> usize {
        self.0.steps()
    }

    pub fn width(&self, i: usize) -> &S {
        self.0.width(i)
    }

    pub fn value(&self, i: usize, j: usize) -> &S {
        self.0.value(i, j)
    }
}

/// The step graphon `W_G`: `n` equal steps, value 1 on blocks of adjacent
/// pairs, 0 elsewhere (diagonal blocks included).
pub fn graphon_of(g: &Graph) -> Result<StepGraphon<Rat>> {
    if g.n() == 0 {
        return Err(Error::EmptyTarget);
    }
    if !g.is_unlabeled() {
        return Err(Error::InvalidInput("graphon embedding takes unlabeled graphs".into()));
    }
    let n = g.n();
    let widths = vec![rat_of(1, n as i64); n];
    let values = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if g.has_edge(i, j) { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    StepGraphon::new(widths, values)
}

/// Exact cut norm of a step function: maximum of the absolute block integral
/// over step-aligned subset pairs (the optimum for a step function is
/// attained at unions of steps).
///
/// For a fixed row subset `S`, the best column subset takes every column
/// with a positive (resp. negative) marginal, so only the `2^s` row subsets
/// are enumerated, in Gray-code order with incremental marginals.
pub fn cut_norm<S: Scalar>(f: &StepFn<S>) -> Result<S> {
    let s = f.steps();
    if s > MAX_CUT_STEPS {
        return Err(Error::CapExceeded {
            what: "cut-norm steps",
            cap: MAX_CUT_STEPS,
            got: s,
        });
    }
    let mut marginals = vec![S::zero(); s]; // c_j = sum_{i in S} v[i][j] w_i
    let mut best = S::zero();
    let mut gray_prev = 0u64;
    for t in 1..(1u64 << s) {
        let gray = t ^ (t >> 1);
        let flip = (gray ^ gray_prev).trailing_zeros() as usize;
        let added = gray & (1 << flip) != 0;
        gray_prev = gray;
        for (j, m) in marginals.iter_mut().enumerate() {
            let delta = f.value(flip, j).clone() * f.width(flip).clone();
            if added {
                *m = m.clone() + delta;
            } else {
                *m = m.clone() - delta;
            }
        }
        let mut pos = S::zero();
        let mut neg = S::zero();
        for (j, c) in marginals.iter().enumerate() {
            if *c > S::zero() {
                pos = pos + c.clone() * f.width(j).clone();
            } else if *c < S::zero() {
                neg = neg - c.clone() * f.width(j).clone();
            }
        }
        if pos > best {
            best = pos.clone();
        }
        if neg > best {
            best = neg;
        }
    }
    Ok(best)
}

/// Cut norm of a graphon.
pub fn cut_norm_graphon<S: Scalar>(w: &StepGraphon<S>) -> Result<S> {
    cut_norm(w.as_step_fn())
}

/// Cut distance between two graphs of equal order: minimum over all node
/// bijections of the cut norm of `W_{g1} - W_{g2}^sigma`. An upper bound on
/// the true cut distance in general; exact for the same-order comparisons
/// made here.
pub fn cut_distance_graphs(g1: &Graph, g2: &Graph) -> Result<Rat> {
    if g1.n() != g2.n() {
        return Err(Error::SizeMismatch(format!(
            "cut distance needs equal orders, got {} and {}",
            g1.n(),
            g2.n()
        )));
    }
    let n = g1.n();
    if n > MAX_OVERLAY_NODES {
        return Err(Error::CapExceeded {
            what: "overlay nodes",
            cap: MAX_OVERLAY_NODES,
            got: n,
        });
    }
    if !g1.is_unlabeled() || !g2.is_unlabeled() {
        return Err(Error::InvalidInput("cut distance takes unlabeled graphs".into()));
    }
    if n == 0 {
        return Ok(Rat::zero());
    }

    // integer inner loop: difference values are -1/0/1, widths uniform 1/n
    let mut best: i64 = i64::MAX;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut diff = [[0i64; MAX_OVERLAY_NODES]; MAX_OVERLAY_NODES];
        for i in 0..n {
            for j in 0..n {
                let a = i64::from(g1.has_edge(i, j));
                let b = i64::from(g2.has_edge(perm[i], perm[j]));
                diff[i][j] = a - b;
            }
        }
        best = best.min(max_block_sum(&diff, n));
        if best == 0 {
            break;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(rat_of(best, (n * n) as i64))
}

/// max over subsets S,T of |sum_{i in S, j in T} diff[i][j]|, by row-subset
/// enumeration with greedy columns.
fn max_block_sum(diff: &[[i64; MAX_OVERLAY_NODES]; MAX_OVERLAY_NODES], n: usize) -> i64 {
    let mut best = 0i64;
    for sub in 1..(1u32 << n) {
        let mut pos = 0i64;
        let mut neg = 0i64;
        for j in 0..n {
            let mut c = 0i64;
            for i in 0..n {
                if (sub >> i) & 1 == 1 {
                    c += diff[i][j];
                }
            }
            if c > 0 {
                pos += c;
            } else {
                neg -= c;
            }
        }
        best = best.max(pos).max(neg);
    }
    best
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Finitely supported probability distribution over step graphons.
#[derive(Debug, Clone)]
pub struct RandomGraphonModel {
    items: Vec<(Rat, StepGraphon<Rat>)>,
}

impl RandomGraphonModel {
    pub fn new(items: Vec<(Rat, StepGraphon<Rat>)>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidInput("model support must be nonempty".into()));
        }
        if items.iter().any(|(p, _)| *p <= Rat::zero()) {
            return Err(Error::InvalidInput("model probabilities must be positive".into()));
        }
        let total: Rat = items.iter().map(|(p, _)| p.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidInput("model probabilities must sum to one".into()));
        }
        Ok(RandomGraphonModel { items })
    }

    pub fn singleton(w: StepGraphon<Rat>) -> Self {
        RandomGraphonModel {
            items: vec![(Rat::one(), w)],
        }
    }

    pub fn items(&self) -> &[(Rat, StepGraphon<Rat>)] {
        &self.items
    }

    pub fn is_singleton(&self) -> bool {
        self.items.len() == 1
    }

    /// Draw an index with the listed probabilities, consuming one `u64` of
    /// randomness (compared exactly against cumulative rationals).
    pub fn sample_index(&self, rng: &mut impl RngCore) -> usize {
        let u = rat_of_u64(rng.next_u64());
        let mut acc = Rat::zero();
        for (i, (p, _)) in self.items.iter().enumerate() {
            acc += p.clone();
            if u < acc {
                return i;
            }
        }
        self.items.len() - 1
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> &StepGraphon<Rat> {
        &self.items[self.sample_index(rng)].1
    }
}

/// Uniform rational in `[0,1)` with denominator `2^64`.
pub(crate) fn rat_of_u64(u: u64) -> Rat {
    Rat::new(
        crate::Int::from(u),
        crate::Int::from(1u128 << 64),
    )
}

// ---------------------------------------------------------------------------
// JSON formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct StepFnJson {
    widths: Vec<String>,
    values: Vec<Vec<String>>,
}

pub fn step_fn_to_json(f: &StepFn<Rat>) -> serde_json::Value {
    let dto = StepFnJson {
        widths: (0..f.steps()).map(|i| format_rat(f.width(i))).collect(),
        values: (0..f.steps())
            .map(|i| (0..f.steps()).map(|j| format_rat(f.value(i, j))).collect())
            .collect(),
    };
    serde_json::to_value(dto).expect("step fn serialization is infallible")
}

fn step_fn_parts(v: &serde_json::Value) -> Result<(Vec<Rat>, Vec<Vec<Rat>>)> {
    let dto: StepFnJson = serde_json::from_value(v.clone())?;
    let widths = dto.widths.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?;
    let values = dto
        .values
        .iter()
        .map(|row| row.iter().map(|s| parse_rat(s)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    Ok((widths, values))
}

pub fn step_fn_from_json(v: &serde_json::Value) -> Result<StepFn<Rat>> {
    let (widths, values) = step_fn_parts(v)?;
    StepFn::new(widths, values)
}

pub fn graphon_to_json(w: &StepGraphon<Rat>) -> serde_json::Value {
    step_fn_to_json(w.as_step_fn())
}

pub fn graphon_from_json(v: &serde_json::Value) -> Result<StepGraphon<Rat>> {
    let (widths, values) = step_fn_parts(v)?;
    StepGraphon::new(widths, values)
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    items: Vec<ModelItemJson>,
}

#[derive(Serialize, Deserialize)]
struct ModelItemJson {
    prob: String,
    graphon: serde_json::Value,
}

pub fn model_to_json(m: &RandomGraphonModel) -> serde_json::Value {
    let dto = ModelJson {
        items: m
            .items()
            .iter()
            .map(|(p, w)| ModelItemJson {
                prob: format_rat(p),
                graphon: graphon_to_json(w),
            })
            .collect(),
    };
    serde_json::to_value(dto).expect("model serialization is infallible")
}

pub fn model_from_json(v: &serde_json::Value) -> Result<RandomGraphonModel> {
    let dto: ModelJson = serde_json::from_value(v.clone())?;
    let items = dto
        .items
        .iter()
        .map(|item| Ok((parse_rat(&item.prob)?, graphon_from_json(&item.graphon)?)))
        .collect::<Result<Vec<_>>>()?;
    RandomGraphonModel::new(items)
}
