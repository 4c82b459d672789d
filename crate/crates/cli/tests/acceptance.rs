//! Ten end-to-end checks covering the whole pipeline: the sampling
//! distribution, the exact landing probabilities, the per-vertex load
//! allowance, the Monte Carlo estimators, the resampling solver, the
//! exhaustive oracles, the asymptotic regime report, and byte-level
//! determinism of the binary. Every test prints a `[criterion N] PASS`
//! line (run with `--nocapture` to see them) and enforces its own
//! wall-clock budget; failures panic with a matching FAIL line.

use kchroma_core::analysis::{
    check_load_bound, lll_certificate_ln, max_problematic_prob, q_requirement_ln, regime_report,
    select_focus_colors, slack_gamma, OverlapRegime, ThresholdParams,
};
use kchroma_core::generators::{
    adversarial_lists, color_channel_star, complete_kpartite, random_kpartite, ListStyle,
};
use kchroma_core::oracle::choice::choice_number;
use kchroma_core::oracle::{estimate_color_blocked, estimate_edge_problematic, exhaustive_colorable};
use kchroma_core::sampler::{
    problematic_prob, resample_into, tilted_prob, tilted_prob_f64, trial_rng, ColorDistribution,
    PartialColoring,
};
use kchroma_core::solver::{solve, verify, SolveStatus};
use kchroma_core::{BigRational, ColorList, Edge, KPartiteHypergraph, ListAssignment, VertexId};
use num::{One, ToPrimitive, Zero};
use rand::Rng;
use std::process::Command;
use std::time::{Duration, Instant};

fn within_budget(criterion: u32, clock: Instant, seconds: u64) -> Duration {
    let spent = clock.elapsed();
    assert!(
        spent <= Duration::from_secs(seconds),
        "[criterion {criterion}] FAIL — wall clock {spent:?} exceeded the {seconds}s budget"
    );
    spent
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// One transversal edge through k singleton parts.
fn single_edge(k: u32) -> KPartiteHypergraph {
    let pairs: Vec<(u32, u32)> = (1..=k).map(|p| (p, 0)).collect();
    let edge = Edge::from_pairs(&pairs).expect("one vertex per part");
    KPartiteHypergraph::new(k, vec![1; k as usize], vec![edge]).expect("valid instance")
}

/// Criterion 1: the first-part color weights of any list sum to exactly 1.
#[test]
fn criterion_01_first_part_weights_always_normalize() {
    let clock = Instant::now();
    let mut rng = trial_rng(0xAC01, 0);
    for round in 0..1_000u32 {
        let q = rng.gen_range(2..=50u32);
        // A random q-subset of a window twice as wide.
        let mut pool: Vec<u32> = (0..4 * q).collect();
        for i in 0..q as usize {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        pool.truncate(q as usize);
        let list = ColorList::from_unsorted(pool).expect("distinct colors");
        let mut exact = BigRational::zero();
        let mut float = 0.0f64;
        for c in list.iter() {
            exact += tilted_prob(2, 1, &list, c, q).unwrap();
            float += tilted_prob_f64(2, 1, &list, c, q).unwrap();
        }
        assert!(
            exact.is_one(),
            "[criterion 1] FAIL — round {round}: rational mass {exact} != 1 at q = {q}"
        );
        let drift = (float - 1.0).abs();
        assert!(
            drift < 1e-12,
            "[criterion 1] FAIL — round {round}: float mass drifts by {drift:e} at q = {q}"
        );
    }
    let spent = within_budget(1, clock, 1);
    println!(
        "[criterion 1] PASS — 1000 random first-part lists (q in 2..=50): weight mass exactly 1 \
         in rationals, drift < 1e-12 in floats, in {spent:?}"
    );
}

/// Criterion 2: empirical first-part frequencies match the closed-form law.
#[test]
fn criterion_02_empirical_marginals_match_the_tilted_law() {
    let clock = Instant::now();
    let q = 5u32;
    let h = KPartiteHypergraph::new(2, vec![1, 1], vec![]).unwrap();
    let lists = ListAssignment::uniform(&h, q);
    let v = VertexId::new(1, 0);
    let list = lists.for_vertex(&h, v).unwrap().clone();

    // The two anchor values of the law at q = 5, exact.
    assert_eq!(tilted_prob(2, 1, &list, 0, q).unwrap(), ratio(17, 55));
    assert_eq!(tilted_prob(2, 1, &list, 4, q).unwrap(), ratio(1, 11));

    let trials = 1_000_000u64;
    let mut counts = [0u64; 5];
    let mut phi = PartialColoring::empty(&h);
    let mut rng = trial_rng(0xAC02, 0);
    for _ in 0..trials {
        resample_into(&h, &lists, q, &mut phi, &[v], ColorDistribution::Tilted, &mut rng).unwrap();
        let c = phi.get(&h, v).unwrap().expect("vertex was just drawn");
        counts[c as usize] += 1;
    }
    for (rank0, &count) in counts.iter().enumerate() {
        let want = tilted_prob_f64(2, 1, &list, rank0 as u32, q).unwrap();
        let got = count as f64 / trials as f64;
        assert!(
            (got - want).abs() <= 0.005,
            "[criterion 2] FAIL — rank {}: frequency {got:.5} vs exact {want:.5} is outside ±0.005",
            rank0 + 1
        );
    }
    let spent = within_budget(2, clock, 10);
    println!(
        "[criterion 2] PASS — 10^6 draws at q = 5: every rank frequency within ±0.005 of the law \
         (rank 1 = 17/55, rank 5 = 1/11), in {spent:?}"
    );
}

/// Criterion 3: Monte Carlo landing frequencies match the exact product
/// formula, and the rank-1 pair realizes the closed-form maximum.
#[test]
fn criterion_03_edge_landing_frequencies_match_the_closed_form() {
    let clock = Instant::now();
    let q = 5u32;
    let trials = 1_000_000u64;
    let mut rng = trial_rng(0xAC03, 0);
    let mut tested = 0u64;
    for (k, pairs) in [(2u32, 34u32), (3, 33), (4, 33)] {
        let h = complete_kpartite(k, 3).unwrap();
        let lists = ListAssignment::uniform(&h, q); // every vertex shares {0..4}
        let mut sharpest = BigRational::zero();
        for i in 0..pairs {
            // The very first pair is always (edge 0, color 0): the rank-1
            // landing that the analysis uses as its global maximum.
            let (e, c) = if i == 0 {
                (0usize, 0u32)
            } else {
                (rng.gen_range(0..h.edge_count()), rng.gen_range(0..q))
            };
            let exact = problematic_prob(&h, &lists, q, h.edge(e), c).unwrap();
            let est =
                estimate_edge_problematic(&h, &lists, q, e, c, trials, 0xAC30 + tested).unwrap();
            let want = exact.to_f64().unwrap();
            let gap = (est.estimate - want).abs();
            assert!(
                gap <= 3.0 * est.std_error,
                "[criterion 3] FAIL — k = {k}, edge {e}, color {c}: frequency {} vs exact {want} \
                 is {:.2} standard errors away",
                est.estimate,
                gap / est.std_error
            );
            if exact > sharpest {
                sharpest = exact;
            }
            tested += 1;
        }
        assert_eq!(
            sharpest,
            max_problematic_prob(k, q).unwrap(),
            "[criterion 3] FAIL — sharpest landing probability at k = {k} is not the closed-form \
             maximum"
        );
    }
    assert_eq!(tested, 100);
    let spent = within_budget(3, clock, 120);
    println!(
        "[criterion 3] PASS — 100 (edge, color) pairs across k in {{2,3,4}}: 10^6-trial \
         frequencies within 3 standard errors of the exact formula; per-k maxima equal the \
         closed form, in {spent:?}"
    );
}

/// Criterion 4: the average blocking load over the focus colors stays under
/// the allowance Δ(a+γ)/q^(k−1) on a thousand generated instances.
#[test]
fn criterion_04_load_allowance_holds_across_a_thousand_instances() {
    let clock = Instant::now();
    let styles = [ListStyle::Identical, ListStyle::DisjointParts, ListStyle::RandomWindowed];
    let epsilons = [0.25f64, 0.5];
    let mut rng = trial_rng(0xAC04, 0);
    let mut built = 0u64;
    let mut attempts = 0u64;
    let mut vertices = 0u64;
    let (mut low, mut high) = (0u64, 0u64);
    while built < 1_000 {
        attempts += 1;
        assert!(attempts < 4_000, "[criterion 4] FAIL — instance stream stalled");
        let h = match built {
            // Three ceiling-degree cases at the top of the allowed range.
            250 => complete_kpartite(2, 100).unwrap(),
            500 => complete_kpartite(2, 150).unwrap(),
            750 => complete_kpartite(2, 200).unwrap(),
            b if b % 3 == 2 => {
                let k = if b % 2 == 0 { 2 } else { 3 };
                let n = if k == 2 { rng.gen_range(2..=30) } else { rng.gen_range(2..=10) };
                random_kpartite(k, n, 0.7, 0xAC44 ^ attempts).unwrap()
            }
            b => {
                let k = if b % 2 == 0 { 2 } else { 3 };
                let n = if k == 2 { rng.gen_range(2..=36) } else { rng.gen_range(2..=12) };
                complete_kpartite(k, n).unwrap()
            }
        };
        let delta = h.max_degree();
        if delta < 2 {
            continue; // a too-sparse random draw; take another
        }
        assert!(delta <= 200);
        let epsilon = epsilons[((built / 2) % 2) as usize];
        let style = styles[(built % 3) as usize];
        let params = ThresholdParams::new(h.k(), delta as f64, epsilon).unwrap();
        let lists = adversarial_lists(&h, params.q, style, 0xAC40 + built).unwrap();
        for v in h.part_vertices(h.k()) {
            let sel = select_focus_colors(&h, &lists, params.q, params.gamma, v).unwrap();
            match sel.regime {
                OverlapRegime::Low => low += 1,
                OverlapRegime::High => high += 1,
            }
            let chk = check_load_bound(&sel, &params);
            assert!(
                chk.holds,
                "[criterion 4] FAIL — instance {built} (k = {}, parts {:?}, degree {delta}, \
                 {style} lists, epsilon {epsilon}, q = {}): vertex {v} carries average load \
                 {:.6} above the allowance {:.6}",
                h.k(),
                h.part_sizes(),
                params.q,
                chk.lhs,
                chk.rhs
            );
            vertices += 1;
        }
        built += 1;
    }
    let spent = within_budget(4, clock, 300);
    println!(
        "[criterion 4] PASS — 1000 instances (k in {{2,3}}, degrees 2..=200, three list styles): \
         the load allowance holds at all {vertices} last-part vertices ({low} low-overlap, \
         {high} high-overlap), in {spent:?}"
    );
}

/// Criterion 5: the measured chance that a color is blocked never exceeds
/// what independent edge landings would give (plus sampling noise).
#[test]
fn criterion_05_joint_blocking_never_beats_the_independent_product() {
    let clock = Instant::now();
    let trials = 50_000u64;
    let mut rng = trial_rng(0xAC05, 0);
    let mut built = 0u64;
    let mut attempts = 0u64;
    let mut checks = 0u64;
    while built < 50 {
        attempts += 1;
        assert!(attempts < 500, "[criterion 5] FAIL — instance stream stalled");
        let k = if built % 2 == 0 { 2 } else { 3 };
        let h = if built % 3 == 0 {
            complete_kpartite(k, rng.gen_range(2..=4)).unwrap()
        } else {
            random_kpartite(k, rng.gen_range(2..=5), 0.8, 0xAC55 ^ attempts).unwrap()
        };
        let q = 2 + (built % 3) as u32;
        let style = if built % 2 == 0 { ListStyle::Identical } else { ListStyle::RandomWindowed };
        let lists = adversarial_lists(&h, q, style, 0xAC50 + built).unwrap();
        let sinks: Vec<VertexId> = h
            .part_vertices(h.k())
            .filter(|&v| h.degree(v).unwrap() >= 1)
            .take(2)
            .collect();
        if sinks.is_empty() {
            continue; // edgeless draw: nothing to block
        }
        for &v in &sinks {
            let list = lists.for_vertex(&h, v).unwrap().clone();
            for c in list.iter().take(2) {
                let joint =
                    estimate_color_blocked(&h, &lists, q, v, c, trials, 0xAC58 + checks).unwrap();
                let mut stay = BigRational::one();
                for &ei in h.incident_edges(v).unwrap() {
                    stay *= BigRational::one()
                        - problematic_prob(&h, &lists, q, h.edge(ei as usize), c).unwrap();
                }
                let bound = (BigRational::one() - stay).to_f64().unwrap();
                assert!(
                    joint.estimate <= bound + 3.0 * joint.std_error,
                    "[criterion 5] FAIL — instance {built}, vertex {v}, color {c}: measured \
                     blocking {:.5} exceeds the independent-landing bound {bound:.5} by more \
                     than 3 standard errors ({:.5})",
                    joint.estimate,
                    joint.std_error
                );
                checks += 1;
            }
        }
        built += 1;
    }
    let spent = within_budget(5, clock, 120);
    println!(
        "[criterion 5] PASS — 50 instances, {checks} (vertex, color) pairs at 50k trials each: \
         measured blocking never exceeds the independent-landing product bound + 3 SE, in {spent:?}"
    );
}

/// Criterion 6: across ten thousand solver runs, every reported success is
/// a verified proper coloring.
#[test]
fn criterion_06_reported_successes_always_verify() {
    let clock = Instant::now();
    let styles = [ListStyle::Identical, ListStyle::RandomWindowed, ListStyle::DisjointParts];
    let mut runs = 0u64;
    let mut successes = 0u64;
    for cfg in 0..100u64 {
        let k = 2 + (cfg % 3) as u32;
        let n = 2 + ((cfg / 3) % 3) as u32;
        let h = if cfg % 2 == 0 {
            complete_kpartite(k, n).unwrap()
        } else {
            random_kpartite(k, n, 0.75, cfg).unwrap()
        };
        let q = 2 + (cfg % 4) as u32;
        let lists = adversarial_lists(&h, q, styles[(cfg % 3) as usize], cfg).unwrap();
        for seed in 0..100u64 {
            let out = solve(&h, &lists, q, Some(300), seed).unwrap();
            if out.status == SolveStatus::Success {
                let coloring = out.coloring.as_ref().expect("success carries a coloring");
                let report = verify(&h, &lists, coloring);
                assert!(
                    report.is_valid(),
                    "[criterion 6] FAIL — config {cfg}, seed {seed}: reported success fails \
                     verification: {:?}",
                    report.violations
                );
                successes += 1;
            }
            runs += 1;
        }
    }
    assert_eq!(runs, 10_000);
    assert!(successes > 0, "[criterion 6] FAIL — no run succeeded at all");
    let spent = within_budget(6, clock, 300);
    println!(
        "[criterion 6] PASS — 10000 solver runs over 100 instance/list configurations: \
         {successes} successes, every one a verified proper coloring, in {spent:?}"
    );
}

/// Criterion 7: on tiny instances the solver and the exhaustive search
/// agree — it colors everything colorable and never "succeeds" otherwise.
#[test]
fn criterion_07_solver_agrees_with_exhaustive_search_on_tiny_instances() {
    let clock = Instant::now();
    let mut corpus: Vec<(String, KPartiteHypergraph, ListAssignment, u32)> = Vec::new();

    for k in [2u32, 3, 4] {
        for q in [2u32, 3] {
            let h = single_edge(k);
            let lists = ListAssignment::uniform(&h, q);
            corpus.push((format!("single {k}-edge, q = {q}"), h, lists, q));
        }
    }
    let c4 = complete_kpartite(2, 2).unwrap();
    for q in [2u32, 3] {
        corpus.push((format!("4-cycle, q = {q}"), c4.clone(), ListAssignment::uniform(&c4, q), q));
    }
    for seed in [1u64, 2] {
        let lists = adversarial_lists(&c4, 2, ListStyle::RandomWindowed, seed).unwrap();
        corpus.push((format!("4-cycle, windowed lists (seed {seed})"), c4.clone(), lists, 2));
    }
    let k33 = complete_kpartite(2, 3).unwrap();
    corpus.push(("3x3 complete, q = 2".into(), k33.clone(), ListAssignment::uniform(&k33, 2), 2));
    let latin = adversarial_lists(&k33, 2, ListStyle::Latin, 0).unwrap();
    corpus.push(("3x3 complete, all 2-subsets of {0,1,2}".into(), k33.clone(), latin, 2));
    let windowed = adversarial_lists(&k33, 2, ListStyle::RandomWindowed, 5).unwrap();
    corpus.push(("3x3 complete, windowed lists".into(), k33.clone(), windowed, 2));
    let k222 = complete_kpartite(3, 2).unwrap();
    corpus.push(("2x2x2 complete, q = 2".into(), k222.clone(), ListAssignment::uniform(&k222, 2), 2));
    let disjoint = adversarial_lists(&k222, 2, ListStyle::DisjointParts, 0).unwrap();
    corpus.push(("2x2x2 complete, disjoint part lists".into(), k222.clone(), disjoint, 2));
    let fan = KPartiteHypergraph::new(
        2,
        vec![2, 1],
        vec![
            Edge::from_pairs(&[(1, 0), (2, 0)]).unwrap(),
            Edge::from_pairs(&[(1, 1), (2, 0)]).unwrap(),
        ],
    )
    .unwrap();
    let fan_lists = ListAssignment::uniform(&fan, 2);
    corpus.push(("two edges into one sink, q = 2".into(), fan, fan_lists, 2));
    let (star, star_lists) = color_channel_star(2, 2, 2).unwrap();
    corpus.push(("two-channel star, q = 2".into(), star, star_lists, 2));

    let mut colorable = 0u32;
    let mut uncolorable = 0u32;
    for (name, h, lists, q) in &corpus {
        assert!(h.vertex_count() <= 12, "corpus instance {name} is not tiny");
        assert!(*q <= 3);
        let truth = exhaustive_colorable(h, lists).unwrap();
        let mut wins = 0u32;
        for seed in 0..100u64 {
            let out = solve(h, lists, *q, Some(10_000), seed).unwrap();
            match out.status {
                SolveStatus::Success => {
                    let coloring = out.coloring.as_ref().expect("success carries a coloring");
                    assert!(
                        verify(h, lists, coloring).is_valid(),
                        "[criterion 7] FAIL — {name}: success did not verify"
                    );
                    assert!(
                        truth.colorable,
                        "[criterion 7] FAIL — {name}: solver claims a coloring but exhaustive \
                         search proves none exists"
                    );
                    wins += 1;
                }
                SolveStatus::BudgetExhausted => {}
            }
        }
        if truth.colorable {
            assert!(
                wins > 0,
                "[criterion 7] FAIL — {name}: colorable, but no seed out of 100 found a \
                 coloring within the budget"
            );
            colorable += 1;
        } else {
            assert_eq!(wins, 0);
            uncolorable += 1;
        }
    }
    assert!(uncolorable >= 1, "corpus should include an uncolorable instance");
    let spent = within_budget(7, clock, 300);
    println!(
        "[criterion 7] PASS — {} tiny instances ({colorable} colorable, {uncolorable} not): \
         the solver colored every colorable one and never succeeded on the rest, in {spent:?}",
        corpus.len()
    );
}

/// Criterion 8: exact choice numbers of the classical small examples.
#[test]
fn criterion_08_choice_numbers_of_the_classical_examples() {
    let clock = Instant::now();
    for k in [2u32, 3, 4] {
        let h = single_edge(k);
        let res = choice_number(&h, 3, None).unwrap();
        assert_eq!(
            res.value, 2,
            "[criterion 8] FAIL — a single {k}-edge should need lists of size 2"
        );
        let witness = res.witness.expect("value 2 comes with a size-1 defeat");
        assert!(
            !exhaustive_colorable(&h, &witness).unwrap().colorable,
            "[criterion 8] FAIL — the defeating assignment for the {k}-edge is colorable"
        );
    }
    let c4 = complete_kpartite(2, 2).unwrap();
    assert_eq!(
        choice_number(&c4, 3, None).unwrap().value,
        2,
        "[criterion 8] FAIL — the 4-cycle should need lists of size 2"
    );
    let k33 = complete_kpartite(2, 3).unwrap();
    let res = choice_number(&k33, 4, None).unwrap();
    assert_eq!(
        res.value, 3,
        "[criterion 8] FAIL — the 3x3 complete bipartite instance should need lists of size 3"
    );
    let witness = res.witness.expect("value 3 comes with a size-2 defeat");
    assert!(
        !exhaustive_colorable(&k33, &witness).unwrap().colorable,
        "[criterion 8] FAIL — the defeating 2-lists for 3x3 are colorable"
    );
    let spent = within_budget(8, clock, 120);
    println!(
        "[criterion 8] PASS — single k-edges (k = 2,3,4) and the 4-cycle are 2-choosable, the \
         3x3 complete bipartite instance is 3-choosable, each with a defeated witness one size \
         down, in {spent:?}"
    );
}

/// Criterion 9: the regime report finds the degree where both asymptotic
/// conditions start holding, re-verified at that degree and refuted at half.
#[test]
fn criterion_09_regime_report_locates_and_verifies_the_crossing() {
    let clock = Instant::now();
    for (k, epsilon) in [(2u32, 0.25f64), (2, 0.5), (3, 0.25), (3, 0.5)] {
        let rep = regime_report(k, epsilon).unwrap();
        assert!(rep.delta_threshold_ok >= 2);
        assert!(
            rep.verified_at_star,
            "[criterion 9] FAIL — k = {k}, epsilon = {epsilon}: the conditions do not hold at \
             the reported degree"
        );
        assert!(
            rep.falsified_at_half,
            "[criterion 9] FAIL — k = {k}, epsilon = {epsilon}: the conjunction still holds at \
             half the reported degree"
        );

        // Independent re-check of both conditions on each side of the crossing.
        let a = ThresholdParams::new(k, 1_000.0, epsilon).unwrap().a;
        let gamma = slack_gamma(k, epsilon);
        let inv = 1.0 / (f64::from(k) - 1.0);
        let ln_thr = |ln_delta: f64| {
            inv * ((0.8 * (f64::from(k) - 1.0 + epsilon)).ln() + ln_delta - ln_delta.ln())
        };
        let star = rep.ln_delta_star;
        assert!(lll_certificate_ln(k, epsilon, star, None).unwrap().holds);
        assert!(ln_thr(star) >= q_requirement_ln(k, star, gamma, a).unwrap() - 1e-9);
        let half = star - std::f64::consts::LN_2;
        let conj_at_half = lll_certificate_ln(k, epsilon, half, None).unwrap().holds
            && ln_thr(half) >= q_requirement_ln(k, half, gamma, a).unwrap() - 1e-12;
        assert!(
            !conj_at_half,
            "[criterion 9] FAIL — k = {k}, epsilon = {epsilon}: independent re-check finds the \
             conjunction already true at half the reported degree"
        );
    }
    let spent = within_budget(9, clock, 1);
    println!(
        "[criterion 9] PASS — for k in {{2,3}} x epsilon in {{0.25,0.5}}: the report's crossing \
         degree satisfies both conditions and fails them at half, independently re-checked, \
         in {spent:?}"
    );
}

/// Criterion 10: the binary reproduces byte-identical CSV/JSON for
/// identical inputs and seeds.
#[test]
fn criterion_10_binary_outputs_are_byte_deterministic() {
    let clock = Instant::now();
    let bin = env!("CARGO_BIN_EXE_kchroma");
    let dir = tempfile::tempdir().unwrap();

    // A sweep over both generators' axes with both color distributions.
    let spec_path = dir.path().join("sweep.json");
    std::fs::write(
        &spec_path,
        concat!(
            r#"{"schema":"kchroma-exp v1","ks":[2,3],"ns":[2,3],"qs":[2,3],"#,
            r#""generator":"random","edge_prob":0.7,"list_style":"random-windowed","#,
            r#""distributions":["tilted","uniform-all"],"trials":200,"seeds":[0,1]}"#
        ),
    )
    .unwrap();
    let run_sweep = |tag: &str| -> Vec<u8> {
        let out = dir.path().join(format!("sweep-{tag}.csv"));
        let st = Command::new(bin)
            .arg("experiment")
            .arg("--spec")
            .arg(&spec_path)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        assert!(
            st.status.success(),
            "[criterion 10] FAIL — experiment run errored: {}",
            String::from_utf8_lossy(&st.stderr)
        );
        std::fs::read(&out).unwrap()
    };
    let first = run_sweep("a");
    let second = run_sweep("b");
    assert!(first.starts_with(b"# kchroma-csv v1\n"));
    assert_eq!(
        first, second,
        "[criterion 10] FAIL — two identical experiment runs produced different CSV bytes"
    );

    // Pure-computation JSON: thresholds, certificate, and regime scan.
    let run_analyze = || -> Vec<u8> {
        let st = Command::new(bin)
            .args(["analyze", "--k", "2", "--epsilon", "0.25", "--delta", "100000", "--regime"])
            .output()
            .unwrap();
        assert!(st.status.success());
        st.stdout
    };
    let analyze_a = run_analyze();
    assert_eq!(
        analyze_a,
        run_analyze(),
        "[criterion 10] FAIL — analyze emitted different JSON across two runs"
    );
    assert!(serde_json::from_slice::<serde_json::Value>(&analyze_a).is_ok());

    // Solver JSON on a generated instance (an uncolorable one, so the run
    // exercises the full resampling loop deterministically).
    let inst = dir.path().join("inst.khg");
    let lists = dir.path().join("inst.lists");
    let st = Command::new(bin)
        .args(["gen", "--kind", "complete", "--k", "2", "--n", "3", "--lists", "latin", "--q", "2"])
        .arg("--out")
        .arg(&inst)
        .arg("--lists-out")
        .arg(&lists)
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let run_solve = || -> Vec<u8> {
        let st = Command::new(bin)
            .arg("solve")
            .arg("--instance")
            .arg(&inst)
            .arg("--lists")
            .arg(&lists)
            .args(["--budget", "500", "--seed", "11", "--json"])
            .output()
            .unwrap();
        st.stdout
    };
    let solve_a = run_solve();
    assert_eq!(
        solve_a,
        run_solve(),
        "[criterion 10] FAIL — solve emitted different JSON across two runs"
    );
    assert!(serde_json::from_slice::<serde_json::Value>(&solve_a).is_ok());

    let spent = within_budget(10, clock, 60);
    println!(
        "[criterion 10] PASS — experiment CSV, analyze JSON, and solve JSON byte-identical \
         across repeated invocations, in {spent:?}"
    );
}
