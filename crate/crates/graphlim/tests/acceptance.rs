//! Acceptance suite: one test per release criterion, each printing a
//! PASS line. Every exact claim is asserted with zero tolerance; the
//! statistical criteria use fixed seeds.

#![allow(clippy::needless_range_loop)]

use graphlim::algebra::{square_and_unlabel, QuantumGraph};
use graphlim::certify::{disprove, search_certificate, verify_certificate, CertRequest};
use graphlim::density::{graphon_density_graphon, hom_density};
use graphlim::graph::{enumerate_unlabeled, enumerate_unlabeled_upto, Graph};
use graphlim::graphon::{graphon_of, RandomGraphonModel, StepGraphon};
use graphlim::linalg::is_psd_exact;
use graphlim::num::{rat_of, rat_f64};
use graphlim::parameter::{flat_connection_matrix, flat_psd_test, GraphParameter};
use graphlim::random_model::{
    check_consistency, convergence_trace, locality_test, model_from_parameter,
};
use graphlim::Rat;

use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat_rng(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rat {
    let num = rng.gen_range(-max_num..=max_num);
    let den = rng.gen_range(1..=max_den);
    rat_of(num, den)
}

fn random_parameter(rng: &mut ChaCha8Rng, cap: usize) -> GraphParameter {
    GraphParameter::from_fn(cap, |_| Ok(rat_rng(rng, 20, 8))).unwrap()
}

fn random_step_graphon(rng: &mut ChaCha8Rng) -> StepGraphon<Rat> {
    let s = rng.gen_range(1..=3usize);
    let raw: Vec<i64> = (0..s).map(|_| rng.gen_range(1..=5i64)).collect();
    let total: i64 = raw.iter().sum();
    let widths: Vec<Rat> = raw.iter().map(|&a| rat_of(a, total)).collect();
    let mut values = vec![vec![Rat::zero(); s]; s];
    for i in 0..s {
        for j in 0..=i {
            let v = rat_of(rng.gen_range(0..=8), 8);
            values[i][j] = v.clone();
            values[j][i] = v;
        }
    }
    StepGraphon::new(widths, values).unwrap()
}

/// Criterion 1: t(F, W_G) = t(F, G) as exact rationals, exhaustively for
/// all patterns with up to 4 nodes and all targets with up to 6 nodes.
#[test]
fn criterion_1_exact_density_identities() {
    let patterns = enumerate_unlabeled_upto(4).unwrap();
    let targets: Vec<Graph> = (1..=6)
        .flat_map(|n| enumerate_unlabeled(n).unwrap())
        .collect();
    assert_eq!(patterns.len(), 19);
    assert_eq!(targets.len(), 208);
    let mut pairs = 0usize;
    for g in &targets {
        let w = graphon_of(g).unwrap();
        for f in &patterns {
            assert_eq!(
                graphon_density_graphon(f, &w).unwrap(),
                hom_density(f, g).unwrap(),
                "t(F, W_G) != t(F, G) for F={f:?}, G={g:?}"
            );
            pairs += 1;
        }
    }
    println!("ACCEPTANCE 1 exact density identities: PASS ({pairs} pairs, zero tolerance)");
}

/// Criterion 2: Möbius machinery: round trips, labeled mass one, and the
/// constant-graphon closed form against the literal superset sum.
#[test]
fn criterion_2_mobius_machinery() {
    // (i) round trip on 100 random rational tables with cap 5
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for i in 0..100 {
        let f = random_parameter(&mut rng, 5);
        assert_eq!(f.mobius().unwrap().mobius_inverse().unwrap(), f, "table {i}");
        assert_eq!(f.mobius_inverse().unwrap().mobius().unwrap(), f, "table {i}");
    }

    // (ii) sum of f† over labeled graphs on [n] equals 1 for t(., W)
    for i in 0..20 {
        let w = random_step_graphon(&mut rng);
        let f = GraphParameter::from_graphon(&w, 5).unwrap();
        for n in 0..=5 {
            let total: Rat = f.mobius_mask_values(n).unwrap().into_iter().sum();
            assert!(total.is_one(), "graphon {i}, n={n}: mass {total}");
        }
    }

    // (iii) closed form p^|E| (1-p)^(C(n,2)-|E|) vs the literal sum at n=4
    for p in [rat_of(1, 3), rat_of(1, 2)] {
        let f = GraphParameter::from_graphon(&StepGraphon::constant(p.clone()).unwrap(), 4)
            .unwrap();
        let mob = f.mobius().unwrap();
        for g in enumerate_unlabeled(4).unwrap() {
            let e = g.edge_count();
            let closed = num_traits::pow::pow(p.clone(), e)
                * num_traits::pow::pow(Rat::one() - p.clone(), 6 - e);
            // literal alternating sum over edge supersets on the same nodes
            let mask = g.edge_mask();
            let mut literal = Rat::zero();
            for sup in 0..64u64 {
                if sup & mask != mask {
                    continue;
                }
                let term = f.value(&Graph::from_edge_mask(4, sup).unwrap()).unwrap();
                if (sup & !mask).count_ones() % 2 == 0 {
                    literal += term;
                } else {
                    literal -= term;
                }
            }
            assert_eq!(mob.value(&g).unwrap(), closed);
            assert_eq!(literal, closed);
        }
    }
    println!("ACCEPTANCE 2 Möbius machinery: PASS (round trips, unit mass, closed form)");
}

/// Criterion 3: the Lindström-Wilf factorization holds entrywise-exactly
/// for k in 2..=4, and the Möbius-sign PSD test agrees with exact LDL.
#[test]
fn criterion_3_lindstrom_wilf() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut suite: Vec<GraphParameter> = (0..20).map(|_| random_parameter(&mut rng, 4)).collect();
    for _ in 0..10 {
        let w = random_step_graphon(&mut rng);
        suite.push(GraphParameter::from_graphon(&w, 4).unwrap());
    }
    let mut checked = 0usize;
    for (i, f) in suite.iter().enumerate() {
        for k in 2..=4usize {
            let report = flat_psd_test(f, k).unwrap();
            assert!(report.factorization_ok, "table {i}, k={k}");
            let ldl = is_psd_exact(flat_connection_matrix(f, k).unwrap().entries());
            assert_eq!(report.psd, ldl, "table {i}, k={k}");
            checked += 1;
        }
    }
    println!("ACCEPTANCE 3 Lindström-Wilf factorization + LDL agreement: PASS ({checked} matrices)");
}

/// Criterion 4: models built from parameters normalize exactly, are exactly
/// consistent under last-node marginalization, and recover f(F) as the
/// containment probability.
#[test]
fn criterion_4_random_model_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut sources: Vec<GraphParameter> = vec![];
    for _ in 0..4 {
        let w = random_step_graphon(&mut rng);
        sources.push(GraphParameter::from_graphon(&w, 5).unwrap());
    }
    sources.push(
        GraphParameter::from_model(
            &RandomGraphonModel::new(vec![
                (rat_of(1, 2), StepGraphon::constant(Rat::zero()).unwrap()),
                (rat_of(1, 2), StepGraphon::constant(Rat::one()).unwrap()),
            ])
            .unwrap(),
            5,
        )
        .unwrap(),
    );

    for (i, f) in sources.iter().enumerate() {
        for n in 1..=4usize {
            let model = model_from_parameter(f, n).unwrap();
            // (i) exact normalization
            let mass: Rat = model
                .classes()
                .iter()
                .map(|c| c.labeled_prob.clone() * Rat::from(graphlim::Int::from(c.class_size)))
                .sum();
            assert!(mass.is_one(), "source {i}, n={n}: mass {mass}");
            // (ii) exact consistency
            let bigger = model_from_parameter(f, n + 1).unwrap();
            assert!(
                check_consistency(&model, &bigger).unwrap().is_zero(),
                "source {i}, n={n}"
            );
            // (iii) exact containment recovery
            for pat in enumerate_unlabeled_upto(n).unwrap() {
                assert_eq!(
                    model.containment_prob(&pat).unwrap(),
                    f.value(&pat).unwrap(),
                    "source {i}, n={n}, pattern {pat:?}"
                );
            }
        }
    }
    println!("ACCEPTANCE 4 random-model equivalences: PASS (normalization, consistency, recovery)");
}

/// Criterion 5: ergodicity dichotomy through locality, 1e5 seeded samples.
#[test]
fn criterion_5_ergodicity_dichotomy() {
    let k2 = Graph::complete(2).unwrap();
    let s_nodes = [0usize, 1];
    let t_nodes = [2usize, 3];
    let samples = 100_000;

    let mixture = RandomGraphonModel::new(vec![
        (rat_of(1, 2), StepGraphon::constant(Rat::zero()).unwrap()),
        (rat_of(1, 2), StepGraphon::constant(Rat::one()).unwrap()),
    ])
    .unwrap();
    let r = locality_test(&mixture, &s_nodes, &t_nodes, &k2, samples, 505).unwrap();
    let dev = (r.covariance_float - 0.25).abs();
    assert!(
        dev <= 3.0 * r.std_error,
        "mixture covariance {} (dev {dev:.3e}, 3se {:.3e})",
        r.covariance,
        3.0 * r.std_error
    );

    let singleton = RandomGraphonModel::singleton(StepGraphon::constant(rat_of(1, 2)).unwrap());
    let r0 = locality_test(&singleton, &s_nodes, &t_nodes, &k2, samples, 505).unwrap();
    assert!(r0.z_score.abs() < 4.0, "singleton z = {}", r0.z_score);

    println!(
        "ACCEPTANCE 5 ergodicity dichotomy: PASS (mixture cov {} ~ 1/4, singleton |z| = {:.2})",
        r.covariance,
        r0.z_score.abs()
    );
}

/// Criterion 6: soundness of every certificate on the suite: evaluate(x, G)
/// >= -residual_norm for every graph with at most 5 nodes, exactly.
#[test]
fn criterion_6_certificate_soundness() {
    let k2 = Graph::complete(2).unwrap();
    let xs = [
        QuantumGraph::single(k2.clone(), Rat::one()).unwrap(),
        QuantumGraph::single(Graph::k0(), Rat::one()).unwrap(),
        mantel(),
        // a valid inequality that is not a perfect square
        QuantumGraph::from_terms(vec![
            (k2.clone(), Rat::one()),
            (Graph::complete(3).unwrap(), -Rat::one()),
        ])
        .unwrap(),
        // a false inequality: the certificate must still be sound
        QuantumGraph::from_terms(vec![
            (k2.clone(), Rat::one()),
            (Graph::k0(), rat_of(-3, 4)),
        ])
        .unwrap(),
        // a perfect square
        square_and_unlabel(
            &QuantumGraph::from_terms(vec![
                (Graph::flat_from_mask(3, 1).unwrap(), rat_of(1, 2)),
                (Graph::flat_from_mask(3, 6).unwrap(), -rat_of(1, 3)),
            ])
            .unwrap(),
        )
        .unwrap(),
    ];
    let corpus: Vec<Graph> = (1..=5)
        .flat_map(|n| enumerate_unlabeled(n).unwrap())
        .collect();
    let mut certs = 0usize;
    for (i, x) in xs.iter().enumerate() {
        let cert = search_certificate(&CertRequest::new(x.clone(), 3, 606)).unwrap();
        assert!(verify_certificate(x, &cert).unwrap().valid, "x {i}");
        let bound = -cert.residual_norm.clone();
        for g in &corpus {
            let v = x.evaluate_graph(g).unwrap();
            assert!(
                v >= bound,
                "x {i} on {g:?}: value {v} below bound {bound}"
            );
        }
        certs += 1;
    }
    println!("ACCEPTANCE 6 certificate soundness: PASS ({certs} certificates x 51 graphs, exact)");
}

fn mantel() -> QuantumGraph {
    QuantumGraph::from_terms(vec![
        (Graph::complete(3).unwrap(), Rat::one()),
        (Graph::complete(2).unwrap(), -Rat::one()),
        (Graph::k0(), rat_of(1, 2)),
    ])
    .unwrap()
}

/// Criterion 7: perfect-square recovery: 20 random flat 3-labeled squares
/// certify at m = 3 with residual at most 1e-6.
#[test]
fn criterion_7_perfect_square_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let tol = rat_of(1, 1_000_000);
    let mut worst = Rat::zero();
    for i in 0..20 {
        let mut terms: Vec<(Graph, Rat)> = vec![];
        for mask in 0..8u64 {
            if !rng.gen_bool(0.7) {
                continue;
            }
            let num = rng.gen_range(-8i64..=8);
            let den = rng.gen_range(1i64..=8);
            terms.push((Graph::flat_from_mask(3, mask).unwrap(), rat_of(num, den)));
        }
        let y = if terms.is_empty() {
            QuantumGraph::single(Graph::flat_from_mask(3, 0).unwrap(), Rat::one()).unwrap()
        } else {
            QuantumGraph::from_terms(terms).unwrap()
        };
        let x = square_and_unlabel(&y).unwrap();
        let cert = search_certificate(&CertRequest::new(x.clone(), 3, 707 + i)).unwrap();
        assert!(
            cert.residual_norm <= tol,
            "square {i}: residual {} ({:.3e})",
            cert.residual_norm,
            rat_f64(&cert.residual_norm)
        );
        assert!(verify_certificate(&x, &cert).unwrap().valid);
        if cert.residual_norm > worst {
            worst = cert.residual_norm.clone();
        }
    }
    println!(
        "ACCEPTANCE 7 perfect-square recovery: PASS (20 squares, worst residual {:.3e})",
        rat_f64(&worst)
    );
}

/// Criterion 8: the triangle-vs-edge inequality: residual does not worsen
/// from m = 3 to m = 4, the certificate verifies exactly, and no
/// counterexample exists in the 6-node corpus.
#[test]
fn criterion_8_mantel_certification() {
    let x = mantel();
    let c3 = search_certificate(&CertRequest::new(x.clone(), 3, 808)).unwrap();
    let c4 = search_certificate(&CertRequest::new(x.clone(), 4, 808)).unwrap();
    let tol = rat_of(1, 1_000_000);
    assert!(
        c4.residual_norm <= c3.residual_norm.clone() + tol,
        "m=4 residual {} vs m=3 {}",
        c4.residual_norm,
        c3.residual_norm
    );
    assert!(verify_certificate(&x, &c3).unwrap().valid);
    assert!(verify_certificate(&x, &c4).unwrap().valid);
    assert!(
        disprove(&x, 0, 808).unwrap().is_none(),
        "exhaustive 6-node corpus must contain no counterexample"
    );
    println!(
        "ACCEPTANCE 8 Mantel-Turán certification: PASS (residual m=3 {:.4}, m=4 {:.4}, no counterexample)",
        rat_f64(&c3.residual_norm),
        rat_f64(&c4.residual_norm)
    );
}

/// Criterion 9: convergence trace: for W = 1/2, the density discrepancy at
/// n = 64 improves on n = 8 in at least 90 of 100 seeded runs.
#[test]
fn criterion_9_convergence_trace() {
    let model = RandomGraphonModel::singleton(StepGraphon::constant(rat_of(1, 2)).unwrap());
    let mut master = ChaCha8Rng::seed_from_u64(909);
    let mut better = 0usize;
    let runs = 100;
    for _ in 0..runs {
        let trace = convergence_trace(&model, &[8, 64], master.next_u64()).unwrap();
        assert_eq!(trace[0].0, 8);
        assert_eq!(trace[1].0, 64);
        if trace[1].1 < trace[0].1 {
            better += 1;
        }
    }
    assert!(
        better >= 90,
        "discrepancy shrank in only {better}/{runs} runs"
    );
    println!("ACCEPTANCE 9 convergence trace: PASS ({better}/{runs} runs improved at n=64)");
}
