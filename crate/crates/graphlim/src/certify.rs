//! Sum-of-squares certificates for density inequalities.
//!
//! Given an unlabeled quantum graph `x`, the search looks for a PSD Gram
//! matrix over the flat m-labeled graphs whose glued diagonal matches the
//! coefficients of `x`, by Dykstra-corrected alternating projections
//! between the PSD cone and the gluing constraints. Square roots of the
//! Gram matrix give labeled quantum graphs `y_i`; the residual
//! `x - Σ [[y_i^2]]` is then recomputed in exact rational arithmetic, so a
//! weak solve degrades the certified bound but never its soundness.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{l1_norm, quantum_from_json, quantum_to_json, simplify_iso, square_and_unlabel, QuantumGraph};
use crate::error::{Error, Result};
use crate::graph::{enumerate_unlabeled_upto, CanonicalForm, Graph};
use crate::graphon::{StepFn, StepGraphon};
use crate::linalg::{jacobi_eigh, psd_project_warm, solve_dense, Mat};
use crate::num::{format_rat, parse_rat, rat_of, rationalize};
use crate::Rat;

/// Cap on the label count of the Gram search (64 flat graphs at m = 4).
pub const MAX_CERT_LABELS: usize = 4;

fn log_enabled() -> bool {
    std::env::var("GRAPHLIM_LOG").map(|v| !v.is_empty() && v != "0").unwrap_or(false)
}

/// Numeric solver configuration. Defaults match the documented tolerances;
/// everything here shapes solution quality only, never soundness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Frobenius drift between successive PSD-side iterates that counts as
    /// converged
    pub convergence_tol: f64,
    /// eigenvalues below this are dropped at extraction
    pub eigen_keep_tol: f64,
    /// vector entries below this are zeroed before rationalization
    pub zero_eps: f64,
    /// denominator bound for continued-fraction rationalization
    pub max_denominator: u64,
    /// scale of the random symmetric jitter added to the start matrix
    pub init_jitter: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 5000,
            convergence_tol: 1e-9,
            eigen_keep_tol: 1e-8,
            zero_eps: 1e-8,
            max_denominator: 1_000_000,
            init_jitter: 0.0,
        }
    }
}

/// A certificate search request.
#[derive(Debug, Clone)]
pub struct CertRequest {
    pub x: QuantumGraph,
    pub m: usize,
    pub config: SolverConfig,
    pub seed: u64,
}

impl CertRequest {
    pub fn new(x: QuantumGraph, m: usize, seed: u64) -> Self {
        CertRequest {
            x,
            m,
            config: SolverConfig::default(),
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverTelemetry {
    /// label count whose solve produced the returned vectors
    pub m_used: usize,
    pub iterations: usize,
    pub final_drift: f64,
    pub converged: bool,
    /// Cauchy-Schwarz sanity on the solved Gram matrix
    pub entry_bounds_ok: bool,
    /// max gluing-constraint violation of the polished factor
    pub constraint_error: f64,
}

/// A sum-of-squares certificate with an exactly recomputed residual.
/// `evaluate(x, W) >= -residual_norm` for every graphon W.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub m: usize,
    pub ys: Vec<QuantumGraph>,
    pub residual: QuantumGraph,
    pub residual_norm: Rat,
    pub certified_bound: Rat,
    pub telemetry: SolverTelemetry,
}

/// The gluing structure of the flat m-labeled basis: every pair (A, B)
/// glues to the union mask, classified modulo isomorphism-after-deleting-
/// isolates.
pub struct GlueBasis {
    pub m: usize,
    /// 2^(m choose 2)
    pub size: usize,
    pub class_of_union: Vec<u32>,
    pub class_reps: Vec<Graph>,
    pub class_canons: Vec<CanonicalForm>,
    pub pairs_by_class: Vec<Vec<(usize, usize)>>,
}

pub fn glue_basis(m: usize) -> Result<GlueBasis> {
    if m > MAX_CERT_LABELS {
        return Err(Error::CapExceeded {
            what: "certificate labels",
            cap: MAX_CERT_LABELS,
            got: m,
        });
    }
    let pairs = m * m.saturating_sub(1) / 2;
    let size = 1usize << pairs;
    let mut class_of_union = vec![0u32; size];
    let mut class_reps: Vec<Graph> = vec![];
    let mut class_canons: Vec<CanonicalForm> = vec![];
    let mut index: std::collections::BTreeMap<CanonicalForm, u32> = Default::default();
    for mask in 0..size {
        let g = Graph::from_edge_mask(m, mask as u64)?.drop_isolates();
        let (rep, canon) = g.canonical()?;
        let id = *index.entry(canon.clone()).or_insert_with(|| {
            class_reps.push(rep);
            class_canons.push(canon);
            (class_reps.len() - 1) as u32
        });
        class_of_union[mask] = id;
    }
    let mut pairs_by_class = vec![vec![]; class_reps.len()];
    for a in 0..size {
        for b in 0..size {
            pairs_by_class[class_of_union[a | b] as usize].push((a, b));
        }
    }
    Ok(GlueBasis {
        m,
        size,
        class_of_union,
        class_reps,
        class_canons,
        pairs_by_class,
    })
}

/// Target coefficient per glue class: x's coefficient on the class, or 0.
/// Every term of `x` must have at most `m` nodes.
pub fn build_target(x: &QuantumGraph, basis: &GlueBasis) -> Result<Vec<Rat>> {
    if x.arity() != 0 {
        return Err(Error::InvalidInput("certificate target must be unlabeled".into()));
    }
    if x.max_term_nodes() > basis.m {
        return Err(Error::CapExceeded {
            what: "certificate term nodes",
            cap: basis.m,
            got: x.max_term_nodes(),
        });
    }
    let mut target = vec![Rat::zero(); basis.class_reps.len()];
    let mut placed = 0usize;
    for (c, canon) in basis.class_canons.iter().enumerate() {
        for (g, coeff) in x.terms() {
            if g.canonical_form()? == *canon {
                target[c] = coeff.clone();
                placed += 1;
                break;
            }
        }
    }
    if placed != x.term_count() {
        return Err(Error::InvalidInput(
            "a term of x is not reachable as a glued product".into(),
        ));
    }
    Ok(target)
}

/// Permutations of the label set acting on edge masks.
fn mask_permutations(m: usize, size: usize) -> Vec<Vec<u16>> {
    let mut perms: Vec<Vec<usize>> = vec![];
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        perms.push(cur.clone());
        // next_permutation
        let n = cur.len();
        let mut i = n.saturating_sub(1);
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    let pair_index = |i: usize, j: usize| {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        b * (b.saturating_sub(1)) / 2 + a
    };
    perms
        .iter()
        .map(|p| {
            (0..size)
                .map(|mask| {
                    let mut out = 0u16;
                    for j in 1..m {
                        for i in 0..j {
                            if (mask >> pair_index(i, j)) & 1 == 1 {
                                out |= 1 << pair_index(p[i], p[j]);
                            }
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

struct SolveOutcome {
    vectors: Vec<Vec<f64>>,
    iterations: usize,
    final_drift: f64,
    converged: bool,
    entry_bounds_ok: bool,
}

/// Dykstra-corrected alternating projections between the gluing constraints
/// (with label-permutation averaging) and the PSD cone.
fn solve_gram(basis: &GlueBasis, target: &[f64], config: &SolverConfig, seed: u64) -> SolveOutcome {
    let n = basis.size;
    let mut p = Mat::<f64>::zeros(n, n);
    if config.init_jitter > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            for j in 0..=i {
                let v = (rng.gen::<f64>() - 0.5) * config.init_jitter;
                p.set(i, j, v);
                p.set(j, i, v);
            }
        }
    }
    let perms = mask_permutations(basis.m, n);
    let mut correction = Mat::<f64>::zeros(n, n);
    let mut prev_psd: Option<Mat<f64>> = None;
    let mut iterations = 0;
    let mut final_drift = f64::INFINITY;
    let mut converged = false;
    let mut best_drift = f64::INFINITY;
    let mut last_improvement = 0usize;
    let mut warm_basis: Option<Mat<f64>> = None;
    let mut last_spectrum: Option<Vec<f64>> = None;

    while iterations < config.max_iterations {
        iterations += 1;
        // orthogonal projection onto the gluing constraints
        for (c, pairs) in basis.pairs_by_class.iter().enumerate() {
            let mut s = 0.0;
            for &(a, b) in pairs {
                s += p.get(a, b);
            }
            let delta = (s - target[c]) / pairs.len() as f64;
            if delta != 0.0 {
                for &(a, b) in pairs {
                    let v = *p.get(a, b) - delta;
                    p.set(a, b, v);
                }
            }
        }
        // average over the label group (projection onto the fixed subspace,
        // commutes with the constraint projection)
        if perms.len() > 1 {
            let mut avg = Mat::<f64>::zeros(n, n);
            let w = 1.0 / perms.len() as f64;
            for perm in &perms {
                for a in 0..n {
                    for b in 0..n {
                        let v = *avg.get(perm[a] as usize, perm[b] as usize)
                            + w * *p.get(a, b);
                        avg.set(perm[a] as usize, perm[b] as usize, v);
                    }
                }
            }
            p = avg;
        }
        // Dykstra step on the cone
        for i in 0..n {
            for j in 0..n {
                let v = *p.get(i, j) + *correction.get(i, j);
                p.set(i, j, v);
            }
        }
        let (projected, vals, vecs) = psd_project_warm(&p, warm_basis.as_ref());
        for i in 0..n {
            for j in 0..n {
                correction.set(i, j, *p.get(i, j) - *projected.get(i, j));
            }
        }
        p = projected;
        warm_basis = Some(vecs);
        last_spectrum = Some(vals);

        if let Some(prev) = &prev_psd {
            let mut drift = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let d = *p.get(i, j) - *prev.get(i, j);
                    drift += d * d;
                }
            }
            final_drift = drift.sqrt();
            if final_drift < config.convergence_tol {
                converged = true;
                break;
            }
            // an infeasible pair of sets leaves the iterates on a limit
            // cycle with non-shrinking drift; stop once no new minimum has
            // appeared for a long stretch (feasible problems keep improving
            // at least polynomially and never trip this)
            if final_drift < 0.98 * best_drift {
                best_drift = final_drift;
                last_improvement = iterations;
            }
            if iterations - last_improvement > 500 {
                break;
            }
        }
        prev_psd = Some(p.clone());
    }

    if log_enabled() {
        eprintln!(
            "graphlim: gram solve m={} iterations={iterations} drift={final_drift:.3e} converged={converged}",
            basis.m
        );
    }

    let mut entry_bounds_ok = true;
    for i in 0..n {
        if *p.get(i, i) < -1e-9 {
            entry_bounds_ok = false;
        }
        for j in 0..n {
            let bound = (p.get(i, i).max(0.0) * p.get(j, j).max(0.0)).sqrt();
            if p.get(i, j).abs() > bound + 1e-6 {
                entry_bounds_ok = false;
            }
        }
    }

    // the final p is the last PSD projection, so its decomposition is the
    // clipped spectrum in the basis already at hand
    let (vals, vecs) = match (last_spectrum, warm_basis) {
        (Some(vals), Some(vecs)) => (vals, vecs),
        _ => jacobi_eigh(&p),
    };
    let mut vectors = vec![];
    for (k, &l) in vals.iter().enumerate() {
        if l <= config.eigen_keep_tol {
            continue;
        }
        let scale = l.sqrt();
        let v: Vec<f64> = (0..n).map(|i| scale * *vecs.get(i, k)).collect();
        vectors.push(v);
    }
    SolveOutcome {
        vectors,
        iterations,
        final_drift,
        converged,
        entry_bounds_ok,
    }
}

/// Gauss-Newton polish of the extracted Gram factor: with P = V Vᵀ the PSD
/// constraint is automatic and the gluing sums become smooth equations
/// R_c(V) = Σ_{(A,B) in c} (V Vᵀ)_{AB} - t_c. Near a feasible factor the
/// minimal-norm Gauss-Newton step converges quadratically, which pushes a
/// slowly-converged projection solution down to machine precision so the
/// rationalization can lock onto the exact certificate. Returns the final
/// max constraint violation.
fn polish_vectors(
    basis: &GlueBasis,
    target: &[f64],
    vectors: &mut [Vec<f64>],
    support: Option<&[Vec<bool>]>,
) -> f64 {
    let classes = basis.pairs_by_class.len();
    let rank = vectors.len();
    let n = basis.size;
    if rank == 0 {
        return target.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    }
    let allowed = |k: usize, a: usize| support.map(|s| s[k][a]).unwrap_or(true);
    let mut worst = f64::INFINITY;
    for _step in 0..60 {
        // residuals and the per-class sensitivity s[c][k][a] = dR_c/dv_ka / 2
        let mut residual = vec![0.0f64; classes];
        let mut sens = vec![vec![vec![0.0f64; n]; rank]; classes];
        for (c, pairs) in basis.pairs_by_class.iter().enumerate() {
            let mut sum = 0.0;
            for &(a, b) in pairs {
                for k in 0..rank {
                    sum += vectors[k][a] * vectors[k][b];
                }
            }
            // each unordered pair appears in both orders, so the gradient
            // accumulates symmetrically
            for &(a, b) in pairs {
                for k in 0..rank {
                    sens[c][k][a] += vectors[k][b];
                }
            }
            residual[c] = sum - target[c];
        }
        worst = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if worst < 1e-14 {
            break;
        }
        // normal equations on the class multipliers: (J Jᵀ) mu = -R with
        // J_{c,(k,a)} = 2 sens[c][k][a], restricted to the allowed support
        let jjt = Mat::from_fn(classes, classes, |c, d| {
            let mut acc = 0.0;
            for k in 0..rank {
                for a in 0..n {
                    if allowed(k, a) {
                        acc += sens[c][k][a] * sens[d][k][a];
                    }
                }
            }
            4.0 * acc + if c == d { 1e-12 } else { 0.0 }
        });
        let neg_r: Vec<f64> = residual.iter().map(|r| -r).collect();
        let mu = match solve_dense(&jjt, &neg_r) {
            Some(mu) => mu,
            None => break,
        };
        for k in 0..rank {
            for a in 0..n {
                if !allowed(k, a) {
                    continue;
                }
                let mut delta = 0.0;
                for c in 0..classes {
                    delta += 2.0 * mu[c] * sens[c][k][a];
                }
                vectors[k][a] += delta;
            }
        }
    }
    worst
}

/// Candidate vector families for extraction: the raw projection output, its
/// polish, and support-trimmed re-polishes that delete small entries which
/// would otherwise rationalize to noise.
fn candidate_vector_sets(
    basis: &GlueBasis,
    target: &[f64],
    raw: &[Vec<f64>],
) -> (Vec<Vec<Vec<f64>>>, f64) {
    let mut candidates: Vec<Vec<Vec<f64>>> = vec![raw.to_vec()];
    let mut polished = raw.to_vec();
    let constraint_error = polish_vectors(basis, target, &mut polished, None);
    candidates.push(polished.clone());
    for thresh in [1e-6f64, 1e-4, 1e-2] {
        let mut trimmed: Vec<Vec<f64>> = polished
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&e| if e.abs() < thresh { 0.0 } else { e })
                    .collect()
            })
            .collect();
        trimmed.retain(|v: &Vec<f64>| v.iter().any(|&e| e != 0.0));
        if trimmed.is_empty() {
            continue;
        }
        let support: Vec<Vec<bool>> = trimmed
            .iter()
            .map(|v| v.iter().map(|&e| e != 0.0).collect())
            .collect();
        polish_vectors(basis, target, &mut trimmed, Some(&support));
        candidates.push(trimmed);
    }
    (candidates, constraint_error)
}

fn vectors_to_quantum(
    basis: &GlueBasis,
    vectors: &[Vec<f64>],
    max_denominator: u64,
    zero_eps: f64,
) -> Result<Vec<QuantumGraph>> {
    let mut ys = vec![];
    for v in vectors {
        let mut terms = vec![];
        for (mask, &entry) in v.iter().enumerate() {
            let r = rationalize(entry, max_denominator, zero_eps);
            if r.is_zero() {
                continue;
            }
            terms.push((Graph::flat_from_mask(basis.m, mask as u64)?, r));
        }
        if terms.is_empty() {
            continue;
        }
        ys.push(QuantumGraph::from_terms(terms)?);
    }
    Ok(ys)
}

/// Denominator bounds tried when rationalizing solver vectors. Coarse
/// bounds snap a nearly-exact solve onto the exact rational certificate;
/// the residual of every candidate is recomputed exactly and the smallest
/// wins, so the ladder can only help.
fn denominator_ladder(max: u64) -> Vec<u64> {
    let mut out: Vec<u64> = [1u64, 2, 4, 8, 16, 64, 256, 4096, 65536]
        .into_iter()
        .filter(|&d| d < max)
        .collect();
    out.push(max);
    out
}

fn exact_residual(x: &QuantumGraph, ys: &[QuantumGraph]) -> Result<(QuantumGraph, Rat)> {
    let mut residual = simplify_iso(x)?;
    for y in ys {
        residual = residual.sub(&square_and_unlabel(y)?)?;
    }
    let norm = l1_norm(&residual);
    Ok((residual, norm))
}

/// Embed flat mm-labeled quantum graphs into the flat m-labeled basis by
/// appending isolated labeled nodes mm+1..m to every term.
fn pad_to_labels(ys: &[QuantumGraph], from: usize, to: usize) -> Result<Vec<QuantumGraph>> {
    if from == to {
        return Ok(ys.to_vec());
    }
    ys.iter()
        .map(|y| {
            let terms = y
                .terms()
                .map(|(g, c)| {
                    let labels: Vec<(usize, u32)> =
                        (0..to).map(|i| (i, i as u32 + 1)).collect();
                    Graph::with_labels(to, &g.edges(), &labels).map(|padded| (padded, c.clone()))
                })
                .collect::<Result<Vec<_>>>()?;
            QuantumGraph::from_terms(terms)
        })
        .collect()
}

/// Search for a sum-of-squares certificate at label count `req.m`.
///
/// Solves the Gram problem at every label count from the smallest that fits
/// the terms of x up to m, keeps the candidate with the smallest exact
/// residual, and returns it embedded in the flat m-labeled basis. The
/// residual is always recomputed in rational arithmetic.
pub fn search_certificate(req: &CertRequest) -> Result<Certificate> {
    if req.m > MAX_CERT_LABELS {
        return Err(Error::CapExceeded {
            what: "certificate labels",
            cap: MAX_CERT_LABELS,
            got: req.m,
        });
    }
    if req.m == 0 {
        return Err(Error::InvalidInput("certificate needs at least one label".into()));
    }
    let x = simplify_iso(&req.x)?;
    if x.max_term_nodes() > req.m {
        return Err(Error::CapExceeded {
            what: "certificate term nodes",
            cap: req.m,
            got: x.max_term_nodes(),
        });
    }

    let start = x.max_term_nodes().max(1);
    let mut best: Option<(usize, Vec<QuantumGraph>, QuantumGraph, Rat, SolverTelemetry)> = None;
    for mm in start..=req.m {
        let basis = glue_basis(mm)?;
        let target = build_target(&x, &basis)?;
        let target_f: Vec<f64> = target.iter().map(crate::num::rat_f64).collect();
        let outcome = solve_gram(&basis, &target_f, &req.config, req.seed);
        let (candidates, constraint_error) =
            candidate_vector_sets(&basis, &target_f, &outcome.vectors);
        let telemetry = SolverTelemetry {
            m_used: mm,
            iterations: outcome.iterations,
            final_drift: outcome.final_drift,
            converged: outcome.converged,
            entry_bounds_ok: outcome.entry_bounds_ok,
            constraint_error,
        };
        for vectors in &candidates {
            let mut prev: Option<Vec<QuantumGraph>> = None;
            for den in denominator_ladder(req.config.max_denominator) {
                let ys = vectors_to_quantum(&basis, vectors, den, req.config.zero_eps)?;
                if prev.as_ref() == Some(&ys) {
                    continue;
                }
                let (residual, norm) = exact_residual(&x, &ys)?;
                let better = match &best {
                    None => true,
                    Some((_, _, _, best_norm, _)) => norm < *best_norm,
                };
                if better {
                    best = Some((mm, ys.clone(), residual, norm, telemetry.clone()));
                }
                prev = Some(ys);
            }
        }
    }
    let (m_used, ys, _, _, telemetry) = best.expect("at least one label count is solved");
    let ys = pad_to_labels(&ys, m_used, req.m)?;
    // the padded squares are re-expanded so the stored residual is exactly
    // what a verifier will recompute
    let (residual, residual_norm) = exact_residual(&x, &ys)?;
    Ok(Certificate {
        m: req.m,
        ys,
        residual,
        certified_bound: -residual_norm.clone(),
        residual_norm,
        telemetry,
    })
}

/// Outcome of re-checking a certificate against its claim.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub recomputed_norm: String,
    pub certified_bound: String,
    pub mismatch: Option<String>,
}

/// Recompute `x - Σ [[y_i^2]]` exactly and compare with the certificate's
/// stored residual and norm.
pub fn verify_certificate(x: &QuantumGraph, cert: &Certificate) -> Result<VerifyReport> {
    let (residual, norm) = exact_residual(x, &cert.ys)?;
    let mut mismatch = None;
    if residual != cert.residual {
        mismatch = Some("stored residual differs from the recomputed one".to_string());
    } else if norm != cert.residual_norm {
        mismatch = Some(format!(
            "stored residual norm {} differs from recomputed {}",
            format_rat(&cert.residual_norm),
            format_rat(&norm)
        ));
    } else if cert.certified_bound != -norm.clone() {
        mismatch = Some("certified bound is not minus the residual norm".to_string());
    }
    Ok(VerifyReport {
        valid: mismatch.is_none(),
        recomputed_norm: format_rat(&norm),
        certified_bound: format_rat(&-norm),
        mismatch,
    })
}

/// A witness that `x` dips below zero.
#[derive(Debug, Clone)]
pub enum Witness {
    Graph { graph: Graph, value: Rat },
    Graphon { graphon: StepGraphon<Rat>, value: Rat },
}

impl Witness {
    pub fn value(&self) -> &Rat {
        match self {
            Witness::Graph { value, .. } | Witness::Graphon { value, .. } => value,
        }
    }
}

/// Search for a counterexample to `x >= 0`: exhaustive over graphs with at
/// most 6 nodes, then `budget` seeded random step graphons refined by
/// coordinate descent (float search, exact re-evaluation of any candidate).
pub fn disprove(x: &QuantumGraph, budget: usize, seed: u64) -> Result<Option<Witness>> {
    let x = simplify_iso(x)?;
    for g in enumerate_unlabeled_upto(6)? {
        if g.n() == 0 {
            continue;
        }
        let v = x.evaluate_graph(&g)?;
        if v < Rat::zero() {
            return Ok(Some(Witness::Graph { graph: g, value: v }));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let snap_den = 64i64;
    for restart in 0..budget {
        let s = [1usize, 2, 4][restart % 3];
        let mut values = vec![vec![0.0f64; s]; s];
        for i in 0..s {
            for j in 0..=i {
                let v = (rng.gen::<u32>() % 17) as f64 / 16.0;
                values[i][j] = v;
                values[j][i] = v;
            }
        }
        let widths = vec![1.0 / s as f64; s]; // s is a power of two: exact
        let eval = |vals: &Vec<Vec<f64>>| -> Result<f64> {
            let f = StepFn::new(widths.clone(), vals.clone())?;
            x.evaluate_step_fn_f64(&f)
        };
        let mut current = eval(&values)?;
        for &step in &[0.25f64, 0.0625, 0.015625] {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..s {
                    for j in 0..=i {
                        for dir in [-1.0, 1.0] {
                            let old = values[i][j];
                            let cand = (old + dir * step).clamp(0.0, 1.0);
                            if cand == old {
                                continue;
                            }
                            values[i][j] = cand;
                            values[j][i] = cand;
                            let v = eval(&values)?;
                            if v < current - 1e-12 {
                                current = v;
                                improved = true;
                            } else {
                                values[i][j] = old;
                                values[j][i] = old;
                            }
                        }
                    }
                }
            }
        }
        if current < -1e-9 {
            // snap to rationals and confirm exactly
            let rat_values: Vec<Vec<Rat>> = values
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&v| rat_of((v * snap_den as f64).round() as i64, snap_den))
                        .collect()
                })
                .collect();
            let rat_widths = vec![rat_of(1, s as i64); s];
            let w = StepGraphon::new(rat_widths, rat_values)?;
            let v = x.evaluate_graphon(&w)?;
            if v < Rat::zero() {
                return Ok(Some(Witness::Graphon { graphon: w, value: v }));
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// JSON formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    m: usize,
    ys: Vec<serde_json::Value>,
    residual: serde_json::Value,
    residual_norm: String,
    certified_bound: String,
    telemetry: SolverTelemetry,
}

pub fn certificate_to_json(c: &Certificate) -> serde_json::Value {
    let dto = CertificateJson {
        m: c.m,
        ys: c.ys.iter().map(quantum_to_json).collect(),
        residual: quantum_to_json(&c.residual),
        residual_norm: format_rat(&c.residual_norm),
        certified_bound: format_rat(&c.certified_bound),
        telemetry: c.telemetry.clone(),
    };
    serde_json::to_value(dto).expect("certificate serialization is infallible")
}

pub fn certificate_from_json(v: &serde_json::Value) -> Result<Certificate> {
    let dto: CertificateJson = serde_json::from_value(v.clone())?;
    Ok(Certificate {
        m: dto.m,
        ys: dto
            .ys
            .iter()
            .map(quantum_from_json)
            .collect::<Result<_>>()?,
        residual: quantum_from_json(&dto.residual)?,
        residual_norm: parse_rat(&dto.residual_norm)?,
        certified_bound: parse_rat(&dto.certified_bound)?,
        telemetry: dto.telemetry,
    })
}

pub fn witness_to_json(w: &Option<Witness>) -> serde_json::Value {
    match w {
        None => serde_json::json!({ "witness": null }),
        Some(Witness::Graph { graph, value }) => serde_json::json!({
            "witness": {
                "kind": "graph",
                "graph6": crate::graph::to_graph6(graph).expect("witness graphs are unlabeled"),
                "value": format_rat(value),
                "value_float": crate::num::rat_f64(value),
            }
        }),
        Some(Witness::Graphon { graphon, value }) => serde_json::json!({
            "witness": {
                "kind": "graphon",
                "graphon": crate::graphon::graphon_to_json(graphon),
                "value": format_rat(value),
                "value_float": crate::num::rat_f64(value),
            }
        }),
    }
}
