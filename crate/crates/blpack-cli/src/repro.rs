//! Reproduction suites: the acceptance experiments as CLI-runnable checks.

use std::collections::BTreeMap;

use blpack::analysis::{
    analyze_trace, check_global_bound, flood_fill_bounded_area, pieces_bounded_area,
    verify_bottom_left,
};
use blpack::engine::{best_exhaustive, pack, sampled_extremes, PackingTrace};
use blpack::generators::*;
use blpack::instance::{Instance, Ordering};
use blpack::local_search::{countdown_schedule, improve_step, Strategy};
use blpack::packing::{area_lower_bound, Packing};
use blpack::rational::Rational;
use blpack::rng::SplitMix64;

use crate::formats::CheckEntry;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn qi(n: i64) -> Rational {
    Rational::from_int(n)
}

fn entry(name: &str, pass: bool, detail: String) -> CheckEntry {
    CheckEntry {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn eq_check(name: &str, measured: &Rational, expected: &Rational) -> CheckEntry {
    entry(
        name,
        measured == expected,
        format!("measured {measured}, expected {expected}"),
    )
}

pub const SUITES: &[&str] = &[
    "thm-rect43",
    "cor-square65",
    "thm-square43",
    "checkerboard",
    "tenthirds",
    "localsearch",
    "expsteps",
    "structure-suite",
    "bound-suite",
    "all",
];

pub fn run_suite(suite: &str, seed: u64, threads: usize) -> Result<Vec<CheckEntry>, String> {
    match suite {
        "thm-rect43" => Ok(thm_rect43()),
        "cor-square65" => Ok(cor_square65()),
        "thm-square43" => Ok(thm_square43(seed, threads)),
        "checkerboard" => Ok(checkerboard()),
        "tenthirds" => Ok(tenthirds()),
        "localsearch" => Ok(localsearch()),
        "expsteps" => Ok(expsteps()),
        "structure-suite" => Ok(structure_suite(seed)),
        "bound-suite" => Ok(bound_suite(seed, threads)),
        "all" => {
            let mut checks = Vec::new();
            for s in SUITES.iter().filter(|s| **s != "all") {
                let mut part = run_suite(s, seed, threads)?;
                for c in &mut part {
                    c.name = format!("{s}: {}", c.name);
                }
                checks.extend(part);
            }
            Ok(checks)
        }
        other => Err(format!("unknown suite {other:?}")),
    }
}

fn thm_rect43() -> Vec<CheckEntry> {
    let case = gen_rect_43(&q(1, 100)).expect("valid eps");
    let best = best_exhaustive(&case.instance, 9).expect("under cap");
    let opt = &case.reference_packings["opt"];
    let ratio = &best.height / opt.height();
    vec![
        entry(
            "orderings examined",
            best.orderings_examined == 5040,
            best.orderings_examined.to_string(),
        ),
        eq_check("best bottom-left height", &best.height, &qi(4)),
        entry(
            "reference layout feasible",
            opt.is_feasible(),
            format!("{:?}", opt.violations()),
        ),
        eq_check("reference layout height", &opt.height(), &q(301, 100)),
        entry("ratio beats 5/4", ratio > q(5, 4), format!("{ratio}")),
    ]
}

fn cor_square65() -> Vec<CheckEntry> {
    let case = gen_square_65(&q(1, 100)).expect("valid eps");
    let best = best_exhaustive(&case.instance, 9).expect("under cap");
    let opt = &case.reference_packings["opt"];
    vec![
        entry(
            "orderings examined",
            best.orderings_examined == 5040,
            best.orderings_examined.to_string(),
        ),
        eq_check("best bottom-left height", &best.height, &q(149, 25)),
        entry(
            "reference layout feasible",
            opt.is_feasible(),
            format!("{:?}", opt.violations()),
        ),
        eq_check("reference layout height", &opt.height(), &q(501, 100)),
    ]
}

fn thm_square43(seed: u64, threads: usize) -> Vec<CheckEntry> {
    let case = gen_square_43(2, &q(1, 10)).expect("valid parameters");
    let decreasing = pack(&case.instance, &case.orderings["decreasing"]);
    let stacked = pack(&case.instance, &case.orderings["reference"]);
    let fig = &case.reference_packings["bl"];
    let opt = &case.reference_packings["opt"];
    let (best, worst) = sampled_extremes(&case.instance, 100_000, seed, threads);
    vec![
        eq_check("decreasing-order height", &decreasing.height(), &q(49, 5)),
        entry(
            "decreasing order reproduces the stacked layout",
            decreasing.final_packing().placements() == fig.placements(),
            format!("height {}", decreasing.height()),
        ),
        eq_check(
            "stacked-layout ordering height",
            &stacked.height(),
            &q(49, 5),
        ),
        entry(
            "stacked-layout ordering reproduces the layout",
            stacked.final_packing().placements() == fig.placements(),
            "coordinates".into(),
        ),
        entry(
            "optimum reference feasible",
            opt.is_feasible(),
            format!("{:?}", opt.violations()),
        ),
        eq_check("optimum reference height", &opt.height(), &q(79, 10)),
        entry(
            "100000 sampled orderings floor",
            best.height >= q(49, 5),
            format!("best {}, worst {}", best.height, worst.height),
        ),
    ]
}

fn checkerboard() -> Vec<CheckEntry> {
    let mut checks = Vec::new();
    let case = gen_checkerboard(4).expect("even m");
    let trace = pack(&case.instance, &case.orderings["decreasing"]);
    checks.push(eq_check(
        "decreasing-order height",
        &trace.height(),
        &q(3263, 544),
    ));

    let unit_ids = &case.groups["unit"];
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for p in trace.steps() {
        if unit_ids.contains(&p.id) {
            let row = i64::try_from(&p.y.floor_bigint()).expect("small");
            *counts.entry(row).or_insert(0) += 1;
        }
    }
    let expected: BTreeMap<i64, usize> = [(1, 16), (2, 17), (3, 18), (4, 19)].into_iter().collect();
    checks.push(entry(
        "unit-square row counts 16,17,18,19",
        counts == expected,
        format!("{counts:?}"),
    ));

    let case = gen_checkerboard_with_reset(4).expect("even m");
    let trace = pack(&case.instance, &case.orderings["decreasing"]);
    let reset_ids = &case.groups["reset"];
    let all_at_seven = trace
        .steps()
        .iter()
        .filter(|p| reset_ids.contains(&p.id))
        .all(|p| &p.y + &case.instance.item(p.id).height == qi(7));
    checks.push(entry(
        "reset-row tops all at 7",
        all_at_seven,
        format!("{} squares", reset_ids.len()),
    ));
    checks
}

fn tenthirds() -> Vec<CheckEntry> {
    let mut checks = Vec::new();
    let mut ratios: Vec<Rational> = Vec::new();
    for n in [2u32, 3, 4] {
        let case = gen_ten_thirds(n).expect("valid n");
        let trace = pack(&case.instance, &case.orderings["adversarial"]);
        let height = trace.height();
        let floor = &case.expected["height_floor"];
        checks.push(entry(
            &format!("n={n} height floor {floor}"),
            &height >= floor,
            format!("measured {height}"),
        ));
        ratios.push(&height / &area_lower_bound(&case.instance));
    }
    let monotone = ratios.windows(2).all(|w| w[0] <= w[1]);
    checks.push(entry(
        "height/lower-bound ratio nondecreasing",
        monotone,
        ratios
            .iter()
            .map(|r| format!("{:.4}", r.to_f64()))
            .collect::<Vec<_>>()
            .join(" <= "),
    ));
    checks
}

fn localsearch() -> Vec<CheckEntry> {
    let mut checks = Vec::new();
    for k in [1i64, 2, 3] {
        let case = gen_local_search(k).expect("k >= 1");
        let adversarial = &case.orderings["adversarial"];
        let height = pack(&case.instance, adversarial).height();
        checks.push(eq_check(
            &format!("k={k} adversarial height"),
            &height,
            &qi(2 * (k + 2)),
        ));
        let optimal = [Strategy::FirstImprovement, Strategy::BestImprovement]
            .into_iter()
            .all(|s| improve_step(&case.instance, adversarial, k as usize, s).is_none());
        checks.push(entry(
            &format!("k={k} locally optimal"),
            optimal,
            "no improving neighbor".into(),
        ));
        let opt = &case.reference_packings["opt"];
        checks.push(entry(
            &format!("k={k} optimum reference feasible at {}", k + 2),
            opt.is_feasible() && opt.height() == qi(k + 2),
            format!("height {}", opt.height()),
        ));
    }
    checks
}

fn expsteps() -> Vec<CheckEntry> {
    let mut checks = Vec::new();
    for k in [3u32, 4, 5] {
        let case = gen_exponential_steps(k).expect("k >= 1");
        let schedule = countdown_schedule(k);
        let mut heights_ok = true;
        let mut strict = true;
        let mut prev: Option<Rational> = None;
        for (p, ordering) in schedule.iter().enumerate() {
            let h = pack(&case.instance, ordering).height();
            if h != qi((1i64 << k) - p as i64) {
                heights_ok = false;
            }
            if let Some(prev) = &prev {
                if &h >= prev {
                    strict = false;
                }
            }
            prev = Some(h);
        }
        let supports = schedule
            .windows(2)
            .all(|w| w[0].support_distance(&w[1]) <= k as usize);
        checks.push(entry(
            &format!(
                "k={k} schedule of {} strictly improving steps",
                schedule.len() - 1
            ),
            schedule.len() == 1 << (k - 1) && heights_ok && strict,
            format!("heights {} down to {}", 1i64 << k, (1i64 << (k - 1)) + 1),
        ));
        checks.push(entry(
            &format!("k={k} consecutive orderings within {k} positions"),
            supports,
            "support bound".into(),
        ));
    }
    checks
}

pub fn corpus_case(seed: u64, index: u64) -> (Instance, Ordering, PackingTrace) {
    let mut rng = SplitMix64::stream(seed, index);
    let n = 4 + rng.below(9) as usize;
    let mut sides = Vec::new();
    let mut max_side = Rational::zero();
    for _ in 0..n {
        let side = q(1 + rng.below(20) as i64, 1 + rng.below(4) as i64);
        if side > max_side {
            max_side = side.clone();
        }
        sides.push(side);
    }
    let width = &max_side + &(&max_side * &q(rng.below(49) as i64, 16));
    let instance =
        Instance::new(width, sides.into_iter().map(|s| (s.clone(), s)).collect()).expect("valid");
    let mut ids: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut ids);
    let ordering = Ordering::new(ids, n).expect("permutation");
    let trace = pack(&instance, &ordering);
    (instance, ordering, trace)
}

fn structure_suite(seed: u64) -> Vec<CheckEntry> {
    let mut dirty = Vec::new();
    let mut pieces = 0usize;
    let mut oracle_bad = Vec::new();
    for i in 0..500u64 {
        let (_, _, trace) = corpus_case(seed, i);
        let analysis = analyze_trace(&trace);
        pieces += analysis.pieces.len();
        if !analysis.is_clean() {
            dirty.push(i);
        }
        if !verify_bottom_left(&trace).is_empty() {
            oracle_bad.push(i);
        }
        if pieces_bounded_area(&trace, &analysis.pieces) != flood_fill_bounded_area(&trace) {
            oracle_bad.push(i);
        }
    }
    vec![
        entry(
            "structural checks over 500 seeded instances",
            dirty.is_empty(),
            format!("{pieces} pieces, dirty cases {dirty:?}"),
        ),
        entry(
            "placement and flood-fill oracles agree",
            oracle_bad.is_empty(),
            format!("disagreements {oracle_bad:?}"),
        ),
    ]
}

fn bound_suite(seed: u64, threads: usize) -> Vec<CheckEntry> {
    let mut failures = Vec::new();
    let mut count = 0usize;
    let mut worst = Rational::zero();
    let mut run = |name: String, packing: &Packing| {
        count += 1;
        match check_global_bound(packing) {
            Ok(report) => {
                let ratio = &report.bl_height / &report.lower_bound;
                if ratio > worst {
                    worst = ratio;
                }
                if !report.pass {
                    failures.push(name);
                }
            }
            Err(_) => failures.push(format!("{name} (not squares)")),
        }
    };

    let case = gen_square_43(2, &q(1, 10)).expect("valid");
    for name in ["reference", "decreasing"] {
        run(
            format!("square43 {name}"),
            &pack(&case.instance, &case.orderings[name]).final_packing(),
        );
    }
    let (best, worst_sample) = sampled_extremes(&case.instance, 100_000, seed, threads);
    run("square43 sampled best".into(), &best.packing);
    run("square43 sampled worst".into(), &worst_sample.packing);

    let case = gen_checkerboard_with_reset(4).expect("even m");
    run(
        "checkerboard+reset".into(),
        &pack(&case.instance, &case.orderings["decreasing"]).final_packing(),
    );

    for n in [2u32, 3, 4] {
        let case = gen_ten_thirds(n).expect("valid n");
        run(
            format!("tenthirds n={n}"),
            &pack(&case.instance, &case.orderings["adversarial"]).final_packing(),
        );
    }
    for i in 0..500u64 {
        let (_, _, trace) = corpus_case(seed, i);
        run(format!("corpus {i}"), &trace.final_packing());
    }

    vec![entry(
        "height <= 16 * max(area/W, h_max) on every packing",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{count} packings, worst ratio {:.4}", worst.to_f64())
        } else {
            failures.join(", ")
        },
    )]
}
