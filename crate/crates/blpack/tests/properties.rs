//! Property suites: engine invariants checked against independent oracles
//! on randomized instances.

use blpack::analysis::{oracle_position, support_violations, verify_bottom_left};
use blpack::engine::{pack, PackingTrace};
use blpack::instance::{Instance, Ordering};
use blpack::local_search::neighbors;
use blpack::packing::{area_lower_bound, placement_violations, Rect};
use blpack::rational::Rational;
use blpack::rng::SplitMix64;

use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Instances with rational sides p/q, p in 1..=12, q in 1..=4, and a width
/// wide enough for the largest item.
fn instance_strategy(squares_only: bool) -> impl Strategy<Value = Instance> {
    let side = (1i64..=12, 1i64..=4).prop_map(|(p, den)| q(p, den));
    let item = if squares_only {
        side.prop_map(|s| (s.clone(), s)).boxed()
    } else {
        ((1i64..=12, 1i64..=4), (1i64..=12, 1i64..=4))
            .prop_map(|((wp, wq), (hp, hq))| (q(wp, wq), q(hp, hq)))
            .boxed()
    };
    (proptest::collection::vec(item, 1..10), 0i64..=48).prop_map(|(sizes, slack)| {
        let max_w = sizes
            .iter()
            .map(|(w, _)| w.clone())
            .fold(Rational::zero(), Rational::max);
        let width = &max_w + &(&max_w * &q(slack, 16));
        Instance::new(width, sizes).expect("positive sides, wide enough strip")
    })
}

fn ordering_strategy(n: usize) -> impl Strategy<Value = Ordering> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut ids: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            ids.swap(i, j);
        }
        Ordering::new(ids, n).expect("shuffled identity")
    })
}

fn packed(instance: &Instance, seed: u64) -> (Ordering, PackingTrace) {
    let mut rng = SplitMix64::new(seed);
    let mut ids: Vec<usize> = (0..instance.len()).collect();
    rng.shuffle(&mut ids);
    let ordering = Ordering::new(ids, instance.len()).unwrap();
    let trace = pack(instance, &ordering);
    (ordering, trace)
}

proptest! {
    #[test]
    fn rational_text_round_trip(p in any::<i64>(), d in any::<i64>().prop_filter("nonzero", |d| *d != 0)) {
        let value = Rational::new(p, d);
        let text = value.to_string();
        prop_assert_eq!(text.parse::<Rational>().unwrap(), value);
    }

    #[test]
    fn faces_match_sizes(inst in instance_strategy(false), seed in any::<u64>()) {
        let (_, trace) = packed(&inst, seed);
        for step in trace.steps() {
            let item = inst.item(step.id);
            let r = Rect::of(&inst, step);
            prop_assert_eq!(&r.x1 - &r.x0, item.width.clone());
            prop_assert_eq!(&r.y1 - &r.y0, item.height.clone());
        }
    }

    #[test]
    fn packings_are_feasible_with_bounded_height(
        inst in instance_strategy(false),
        seed in any::<u64>(),
    ) {
        let (_, trace) = packed(&inst, seed);
        for i in 0..=trace.len() {
            prop_assert!(placement_violations(&inst, trace.prefix(i)).is_empty());
        }
        prop_assert!(trace.height() >= area_lower_bound(&inst));
    }

    #[test]
    fn placements_are_supported(inst in instance_strategy(false), seed in any::<u64>()) {
        let (_, trace) = packed(&inst, seed);
        prop_assert!(support_violations(&trace).is_empty());
    }

    #[test]
    fn packing_is_deterministic(inst in instance_strategy(false), seed in any::<u64>()) {
        let (ordering, trace) = packed(&inst, seed);
        let again = pack(&inst, &ordering);
        prop_assert_eq!(trace.steps(), again.steps());
    }

    /// The engine position equals the literal candidate-grid oracle at
    /// every step.
    #[test]
    fn engine_agrees_with_candidate_grid_oracle(
        inst in instance_strategy(false),
        seed in any::<u64>(),
    ) {
        let (_, trace) = packed(&inst, seed);
        prop_assert!(verify_bottom_left(&trace).is_empty());
    }

    /// No randomly sampled feasible position is lexicographically smaller
    /// than the one the engine chose.
    #[test]
    fn sampled_positions_never_beat_the_engine(
        inst in instance_strategy(false),
        seed in any::<u64>(),
    ) {
        let (_, trace) = packed(&inst, seed);
        let mut rng = SplitMix64::new(seed ^ 0xabcd);
        for (i, step) in trace.steps().iter().enumerate() {
            let item = inst.item(step.id);
            let prefix: Vec<Rect> =
                trace.prefix(i).iter().map(|p| Rect::of(&inst, p)).collect();
            let x_room = inst.width() - &item.width;
            let y_room = trace.height() + Rational::one();
            for _ in 0..100 {
                let x = &x_room * &q(rng.below(65) as i64, 64);
                let y = &y_room * &q(rng.below(65) as i64, 64);
                let cand = Rect {
                    x0: x.clone(),
                    x1: &x + &item.width,
                    y0: y.clone(),
                    y1: &y + &item.height,
                };
                let feasible = prefix.iter().all(|r| !r.overlaps(&cand));
                if feasible {
                    let better = y < step.y || (y == step.y && x < step.x);
                    prop_assert!(!better, "step {i}: sampled ({x}, {y}) beats ({}, {})", step.x, step.y);
                }
            }
        }
    }

    /// Relabeling items and permuting the ordering consistently yields the
    /// same geometry step for step.
    #[test]
    fn geometry_ignores_id_labels(
        inst in instance_strategy(false),
        seed in any::<u64>(),
    ) {
        let (ordering, trace) = packed(&inst, seed);
        let n = inst.len();
        let mut relabel: Vec<usize> = (0..n).collect();
        SplitMix64::new(seed ^ 0x5151).shuffle(&mut relabel);
        // new id i holds the item previously labeled relabel[i]
        let sizes: Vec<(Rational, Rational)> = relabel
            .iter()
            .map(|&old| {
                let it = inst.item(old);
                (it.width.clone(), it.height.clone())
            })
            .collect();
        let relabeled = Instance::new(inst.width().clone(), sizes).unwrap();
        let mut inverse = vec![0usize; n];
        for (new, &old) in relabel.iter().enumerate() {
            inverse[old] = new;
        }
        let new_order: Vec<usize> = ordering.ids().iter().map(|&id| inverse[id]).collect();
        let new_trace = pack(&relabeled, &Ordering::new(new_order, n).unwrap());
        for (a, b) in trace.steps().iter().zip(new_trace.steps()) {
            prop_assert_eq!((&a.x, &a.y), (&b.x, &b.y));
        }
    }

    /// Every neighbor differs on 2..=k positions and is a permutation.
    #[test]
    fn neighbor_support_sizes(n in 2usize..7, k in 2usize..5, seed in any::<u64>()) {
        let base = {
            let mut ids: Vec<usize> = (0..n).collect();
            SplitMix64::new(seed).shuffle(&mut ids);
            Ordering::new(ids, n).unwrap()
        };
        for nb in neighbors(&base, k) {
            let support = base.support_distance(&nb);
            prop_assert!(support >= 2 && support <= k.min(n));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The per-step engine position function agrees with the oracle even on
    /// prefixes that did not come from the engine itself.
    #[test]
    fn position_function_matches_oracle_on_engine_prefixes(
        inst in instance_strategy(true),
        ordering_seed in any::<u64>(),
    ) {
        let n = inst.len();
        let ordering = {
            let mut ids: Vec<usize> = (0..n).collect();
            SplitMix64::new(ordering_seed).shuffle(&mut ids);
            Ordering::new(ids, n).unwrap()
        };
        let trace = pack(&inst, &ordering);
        for (i, step) in trace.steps().iter().enumerate() {
            let via_engine =
                blpack::engine::bottom_left_position(&inst, trace.prefix(i), step.id);
            let via_oracle = oracle_position(&inst, trace.prefix(i), step.id);
            prop_assert_eq!(&via_engine, &via_oracle);
            prop_assert_eq!(via_engine, (step.x.clone(), step.y.clone()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ordering_strategy_produces_permutations(ordering in ordering_strategy(6)) {
        let mut ids = ordering.ids().to_vec();
        ids.sort_unstable();
        prop_assert_eq!(ids, (0..6).collect::<Vec<_>>());
    }
}

/// Row-gap invariant of the adversarial row construction at its smallest
/// size: consecutive pattern squares in the first row sit four apart, under
/// the `4 + 2 eps` ceiling.
#[test]
fn ten_thirds_row_one_gaps() {
    let case = blpack::generators::gen_ten_thirds(2).unwrap();
    let eps = blpack::generators::checkerboard_eps(4);
    let trace = pack(&case.instance, &case.orderings["adversarial"]);
    let row1 = &case.groups["row1"];
    let mut bigs: Vec<(Rational, Rational)> = trace
        .steps()
        .iter()
        .filter(|p| row1.contains(&p.id) && case.instance.item(p.id).width > Rational::one())
        .map(|p| (p.x.clone(), &p.x + &case.instance.item(p.id).width))
        .collect();
    bigs.sort_by(|a, b| a.0.cmp(&b.0));
    assert!(!bigs.is_empty());
    let ceiling = Rational::from_int(4) + &eps + &eps;
    for pair in bigs.windows(2) {
        let gap = &pair[1].0 - &pair[0].1;
        assert!(gap < ceiling, "row-one gap {gap} exceeds {ceiling}");
    }
}

/// Sampling with a modest budget finds the true best ordering of the
/// seven-rectangle family, cross-checking the sampler against exhaustive
/// search.
#[test]
fn sampling_finds_the_exhaustive_best_on_seven_items() {
    let case = blpack::generators::gen_rect_43(&q(1, 100)).unwrap();
    let exhaustive = blpack::engine::best_exhaustive(&case.instance, 9).unwrap();
    let (best, worst) = blpack::engine::sampled_extremes(&case.instance, 10_000, 1, 0);
    assert_eq!(best.height, exhaustive.height);
    assert!(worst.height >= best.height);
}
