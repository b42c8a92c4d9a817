//! Homomorphism and injective-homomorphism counting, and the density
//! functionals t(F,G), t_inj(F,G) and t(F,W).
//!
//! Counting is exact: backtracking over the pattern in a connectivity
//! order, with bitset candidate pruning. Pattern components are counted
//! independently and multiplied where the counting allows it.

use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_NODES};
use crate::graphon::{StepFn, StepGraphon, MAX_DENSITY_STEPS};
use crate::num::Scalar;
use crate::{Int, Rat};

/// Cap on pattern size.
pub const MAX_PATTERN_NODES: usize = 8;
/// Cap on the target size for injective counting.
pub const MAX_INJ_TARGET_NODES: usize = 16;

fn check_pattern(f: &Graph) -> Result<()> {
    if !f.is_unlabeled() {
        return Err(Error::InvalidInput("pattern must be unlabeled".into()));
    }
    if f.n() > MAX_PATTERN_NODES {
        return Err(Error::CapExceeded {
            what: "pattern nodes",
            cap: MAX_PATTERN_NODES,
            got: f.n(),
        });
    }
    Ok(())
}

/// Connected components as vertex lists.
fn components(f: &Graph) -> Vec<Vec<usize>> {
    let n = f.n();
    let mut seen = vec![false; n];
    let mut comps = vec![];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < comp.len() {
            let v = comp[head];
            head += 1;
            for u in 0..n {
                if !seen[u] && f.has_edge(v, u) {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        comps.push(comp);
    }
    comps
}

/// For each position in `order`, the earlier positions adjacent in `f`.
fn earlier_neighbors(f: &Graph, order: &[usize]) -> Vec<Vec<usize>> {
    order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            (0..i)
                .filter(|&j| f.has_edge(v, order[j]))
                .collect()
        })
        .collect()
}

fn full_mask(n: usize) -> u64 {
    if n == MAX_NODES {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Number of homomorphisms (edge-preserving maps) from `f` to `g`.
pub fn hom_count(f: &Graph, g: &Graph) -> Result<u64> {
    check_pattern(f)?;
    if !g.is_unlabeled() {
        return Err(Error::InvalidInput("target must be unlabeled".into()));
    }
    let n = g.n() as u64;
    let mut total: u64 = 1;
    for comp in components(f) {
        let c = if comp.len() == 1 {
            n
        } else {
            let nbrs = earlier_neighbors(f, &comp);
            let mut assign = Vec::with_capacity(comp.len());
            hom_rec(g, &nbrs, &mut assign, 0)
        };
        total = total
            .checked_mul(c)
            .expect("count fits in u64 under the size caps");
        if total == 0 {
            return Ok(0);
        }
    }
    Ok(total)
}

fn hom_rec(g: &Graph, nbrs: &[Vec<usize>], assign: &mut Vec<usize>, depth: usize) -> u64 {
    if depth == nbrs.len() {
        return 1;
    }
    let mut cands = full_mask(g.n());
    for &ep in &nbrs[depth] {
        cands &= g.neighbors(assign[ep]);
    }
    let mut total = 0;
    while cands != 0 {
        let v = cands.trailing_zeros() as usize;
        cands &= cands - 1;
        assign.push(v);
        total += hom_rec(g, nbrs, assign, depth + 1);
        assign.pop();
    }
    total
}

/// Number of injective homomorphisms from `f` to `g`.
pub fn inj_count(f: &Graph, g: &Graph) -> Result<u64> {
    check_pattern(f)?;
    if !g.is_unlabeled() {
        return Err(Error::InvalidInput("target must be unlabeled".into()));
    }
    if g.n() > MAX_INJ_TARGET_NODES {
        return Err(Error::CapExceeded {
            what: "injective target nodes",
            cap: MAX_INJ_TARGET_NODES,
            got: g.n(),
        });
    }
    if f.n() > g.n() {
        return Ok(0);
    }
    // isolated pattern nodes extend injectively by a falling factorial
    let comps = components(f);
    let isolated = comps.iter().filter(|c| c.len() == 1).count();
    let order: Vec<usize> = comps
        .into_iter()
        .filter(|c| c.len() > 1)
        .flatten()
        .collect();
    let nbrs = earlier_neighbors(f, &order);
    let mut assign = Vec::with_capacity(order.len());
    let core = inj_rec(g, &nbrs, &mut assign, 0u64, 0);
    let mut total = core;
    let mut remaining = (g.n() - order.len()) as u64;
    for _ in 0..isolated {
        total = total
            .checked_mul(remaining)
            .expect("count fits in u64 under the size caps");
        remaining -= 1;
    }
    Ok(total)
}

fn inj_rec(g: &Graph, nbrs: &[Vec<usize>], assign: &mut Vec<usize>, used: u64, depth: usize) -> u64 {
    if depth == nbrs.len() {
        return 1;
    }
    let mut cands = full_mask(g.n()) & !used;
    for &ep in &nbrs[depth] {
        cands &= g.neighbors(assign[ep]);
    }
    let mut total = 0;
    while cands != 0 {
        let v = cands.trailing_zeros() as usize;
        cands &= cands - 1;
        assign.push(v);
        total += inj_rec(g, nbrs, assign, used | 1 << v, depth + 1);
        assign.pop();
    }
    total
}

/// Homomorphism density t(F,G) = hom(F,G) / |V(G)|^|V(F)|.
pub fn hom_density(f: &Graph, g: &Graph) -> Result<Rat> {
    if g.n() == 0 {
        return Err(Error::EmptyTarget);
    }
    let h = hom_count(f, g)?;
    Ok(Rat::new(
        Int::from(h),
        Int::from(g.n() as u64).pow(f.n() as u32),
    ))
}

/// Subgraph density t_inj(F,G) = inj(F,G) over the falling factorial.
/// The empty pattern has density 1.
pub fn inj_density(f: &Graph, g: &Graph) -> Result<Rat> {
    if f.n() > g.n() {
        return Err(Error::SizeMismatch(format!(
            "pattern has {} nodes, target only {}",
            f.n(),
            g.n()
        )));
    }
    if f.n() == 0 {
        return Ok(Rat::one());
    }
    let i = inj_count(f, g)?;
    let mut denom = Int::from(1u64);
    for k in 0..f.n() {
        denom *= Int::from((g.n() - k) as u64);
    }
    Ok(Rat::new(Int::from(i), denom))
}

/// Graphon density t(F,W) for a step function, evaluated exactly as a sum
/// over maps from V(F) to steps.
pub fn graphon_density<S: Scalar>(f: &Graph, w: &StepFn<S>) -> Result<S> {
    check_pattern(f)?;
    if w.steps() > MAX_DENSITY_STEPS {
        return Err(Error::CapExceeded {
            what: "graphon steps",
            cap: MAX_DENSITY_STEPS,
            got: w.steps(),
        });
    }
    let mut total = S::one();
    for comp in components(f) {
        if comp.len() == 1 {
            continue; // isolated node integrates to 1
        }
        let nbrs = earlier_neighbors(f, &comp);
        let mut assign = Vec::with_capacity(comp.len());
        total = total * graphon_rec(w, &nbrs, &mut assign, S::one(), 0);
    }
    Ok(total)
}

fn graphon_rec<S: Scalar>(
    w: &StepFn<S>,
    nbrs: &[Vec<usize>],
    assign: &mut Vec<usize>,
    weight: S,
    depth: usize,
) -> S {
    if depth == nbrs.len() {
        return weight;
    }
    let mut total = S::zero();
    for s in 0..w.steps() {
        let mut wt = weight.clone() * w.width(s).clone();
        for &ep in &nbrs[depth] {
            wt = wt * w.value(assign[ep], s).clone();
        }
        if wt.is_zero() {
            continue;
        }
        assign.push(s);
        total = total + graphon_rec(w, nbrs, assign, wt, depth + 1);
        assign.pop();
    }
    total
}

/// Graphon density against a graphon value.
pub fn graphon_density_graphon(f: &Graph, w: &StepGraphon<Rat>) -> Result<Rat> {
    graphon_density(f, w.as_step_fn())
}
