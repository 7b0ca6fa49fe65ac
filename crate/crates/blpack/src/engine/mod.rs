//! The bottom-left packer and ordering-search harnesses.

mod coord;
mod placer;

use std::fmt;
use std::thread;

use crate::instance::{Instance, Ordering};
use crate::packing::{Packing, Placement};
use crate::rational::Rational;
use crate::rng::SplitMix64;

pub(crate) use coord::{scale_instance, unscale};
pub(crate) use placer::PlacedRect;

/// Packing order cap for exhaustive search; `9! = 362880` runs.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 9;

/// The result of one bottom-left run together with every prefix state.
///
/// Placements are stored in placement order, so the state after step `i` is
/// just the first `i` entries; unoccupied-piece extraction works against
/// exactly these prefixes.
#[derive(Clone, Debug)]
pub struct PackingTrace {
    instance: Instance,
    ordering: Ordering,
    steps: Vec<Placement>,
}

impl PackingTrace {
    /// Assembles a trace from placements listed in placement order, e.g.
    /// read back from a file; the ordering is implied by the sequence.
    /// Callers vouch for the provenance — nothing here checks that the
    /// positions actually follow the bottom-left rule.
    pub fn from_placements(
        instance: Instance,
        steps: Vec<Placement>,
    ) -> Result<Self, crate::instance::OrderingError> {
        let ordering = Ordering::new(steps.iter().map(|p| p.id).collect(), instance.len())?;
        Ok(PackingTrace {
            instance,
            ordering,
            steps,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn ordering(&self) -> &Ordering {
        &self.ordering
    }

    /// Placements in the order they were made.
    pub fn steps(&self) -> &[Placement] {
        &self.steps
    }

    /// Placements of the first `i` items.
    pub fn prefix(&self, i: usize) -> &[Placement] {
        &self.steps[..i]
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn height(&self) -> Rational {
        self.steps
            .iter()
            .map(|p| &p.y + &self.instance.item(p.id).height)
            .fold(Rational::zero(), Rational::max)
    }

    pub fn final_packing(&self) -> Packing {
        Packing::new(self.instance.clone(), self.steps.clone())
            .expect("a trace places every item exactly once")
    }
}

/// Lexicographically minimal feasible position for `item_id` given the
/// already placed prefix.
pub fn bottom_left_position(
    instance: &Instance,
    placed: &[Placement],
    item_id: usize,
) -> (Rational, Rational) {
    let rects: Vec<PlacedRect<Rational>> = placed
        .iter()
        .map(|p| {
            let it = instance.item(p.id);
            PlacedRect {
                x0: p.x.clone(),
                x1: &p.x + &it.width,
                y0: p.y.clone(),
                y1: &p.y + &it.height,
            }
        })
        .collect();
    let item = instance.item(item_id);
    placer::bottom_left_position(instance.width(), &rects, &item.width, &item.height)
}

/// Runs the bottom-left algorithm on the instance in the given order.
pub fn pack(instance: &Instance, ordering: &Ordering) -> PackingTrace {
    debug_assert_eq!(ordering.len(), instance.len());
    let steps = match scale_instance(instance) {
        Some(scaled) => {
            let positions = placer::pack_positions(&scaled.width, &scaled.sizes, ordering.ids());
            ordering
                .ids()
                .iter()
                .zip(positions)
                .map(|(&id, (x, y))| Placement {
                    id,
                    x: unscale(x, &scaled.scale),
                    y: unscale(y, &scaled.scale),
                })
                .collect()
        }
        None => {
            let sizes: Vec<(Rational, Rational)> = instance
                .items()
                .iter()
                .map(|it| (it.width.clone(), it.height.clone()))
                .collect();
            let positions = placer::pack_positions(instance.width(), &sizes, ordering.ids());
            ordering
                .ids()
                .iter()
                .zip(positions)
                .map(|(&id, (x, y))| Placement { id, x, y })
                .collect()
        }
    };
    PackingTrace {
        instance: instance.clone(),
        ordering: ordering.clone(),
        steps,
    }
}

/// Best or worst ordering found by a search harness.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub ordering: Ordering,
    pub packing: Packing,
    pub height: Rational,
    pub orderings_examined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    InstanceTooLarge { n: usize, cap: usize },
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::InstanceTooLarge { n, cap } => {
                write!(
                    f,
                    "exhaustive search over {n} items exceeds the cap of {cap}"
                )
            }
        }
    }
}

impl std::error::Error for SearchError {}

fn lexicographic_next(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Minimum bottom-left height over all `n!` orderings, enumerated in
/// lexicographic id order with no pruning. Ties resolve to the
/// lexicographically smallest ordering.
pub fn best_exhaustive(instance: &Instance, cap: usize) -> Result<SearchResult, SearchError> {
    let n = instance.len();
    if n > cap {
        return Err(SearchError::InstanceTooLarge { n, cap });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut examined: u64 = 0;
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        examined += 1;
        let height = pack_order_height(instance, &perm);
        let improves = match &best {
            None => true,
            Some((h, _)) => height < *h,
        };
        if improves {
            best = Some((height, perm.clone()));
        }
        if !lexicographic_next(&mut perm) {
            break;
        }
    }
    let (height, order) = best.expect("at least the identity ordering is examined");
    let ordering = Ordering::new(order, n).expect("permutations stay permutations");
    let packing = pack(instance, &ordering).final_packing();
    Ok(SearchResult {
        ordering,
        packing,
        height,
        orderings_examined: examined,
    })
}

fn pack_order_height(instance: &Instance, order: &[usize]) -> Rational {
    match scale_instance(instance) {
        Some(scaled) => {
            let positions = placer::pack_positions(&scaled.width, &scaled.sizes, order);
            let h = placer::packed_height(&scaled.sizes, order, &positions);
            unscale(h, &scaled.scale)
        }
        None => {
            let sizes: Vec<(Rational, Rational)> = instance
                .items()
                .iter()
                .map(|it| (it.width.clone(), it.height.clone()))
                .collect();
            let positions = placer::pack_positions(instance.width(), &sizes, order);
            placer::packed_height(&sizes, order, &positions)
        }
    }
}

/// Evaluates `order` repeatedly against a pre-scaled instance; used by the
/// bulk search loops so scaling happens once.
pub(crate) struct HeightEvaluator {
    scaled: Option<coord::Scaled>,
    width: Rational,
    sizes: Vec<(Rational, Rational)>,
}

impl HeightEvaluator {
    pub fn new(instance: &Instance) -> Self {
        HeightEvaluator {
            scaled: scale_instance(instance),
            width: instance.width().clone(),
            sizes: instance
                .items()
                .iter()
                .map(|it| (it.width.clone(), it.height.clone()))
                .collect(),
        }
    }

    pub fn height(&self, order: &[usize]) -> Rational {
        match &self.scaled {
            Some(s) => {
                let positions = placer::pack_positions(&s.width, &s.sizes, order);
                unscale(placer::packed_height(&s.sizes, order, &positions), &s.scale)
            }
            None => {
                let positions = placer::pack_positions(&self.width, &self.sizes, order);
                placer::packed_height(&self.sizes, order, &positions)
            }
        }
    }
}

/// Monte-Carlo stand-in for best/worst order search when `n!` is out of
/// reach. Deterministic for a fixed seed regardless of `threads`
/// (0 = use the available parallelism).
pub fn sampled_extremes(
    instance: &Instance,
    samples: u64,
    seed: u64,
    threads: usize,
) -> (SearchResult, SearchResult) {
    assert!(samples >= 1, "at least one sample required");
    let n = instance.len();

    // (height, ordering), comparing height first and breaking ties toward
    // the lexicographically smaller ordering.
    type Candidate = (Rational, Vec<usize>);
    let better_min =
        |a: &Candidate, b: &Candidate| -> bool { a.0 < b.0 || (a.0 == b.0 && a.1 < b.1) };
    let better_max =
        |a: &Candidate, b: &Candidate| -> bool { a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) };

    let scan = |from: u64, to: u64| -> (Candidate, Candidate) {
        let eval = HeightEvaluator::new(instance);
        let mut best: Option<Candidate> = None;
        let mut worst: Option<Candidate> = None;
        let mut order: Vec<usize> = (0..n).collect();
        for i in from..to {
            for (k, slot) in order.iter_mut().enumerate() {
                *slot = k;
            }
            let mut rng = SplitMix64::stream(seed, i);
            rng.shuffle(&mut order);
            let height = eval.height(&order);
            let cand = (height, order.clone());
            if best.as_ref().is_none_or(|b| better_min(&cand, b)) {
                best = Some(cand.clone());
            }
            if worst.as_ref().is_none_or(|w| better_max(&cand, w)) {
                worst = Some(cand);
            }
        }
        (best.unwrap(), worst.unwrap())
    };

    let threads = effective_threads(threads, samples);
    let (best, worst) = if threads <= 1 {
        scan(0, samples)
    } else {
        let chunk = samples.div_ceil(threads as u64);
        let mut parts: Vec<(Candidate, Candidate)> = Vec::new();
        thread::scope(|scope| {
            let mut handles = Vec::new();
            for t in 0..threads as u64 {
                let from = t * chunk;
                let to = (from + chunk).min(samples);
                if from >= to {
                    break;
                }
                handles.push(scope.spawn(move || scan(from, to)));
            }
            for h in handles {
                parts.push(h.join().expect("sample worker panicked"));
            }
        });
        let mut iter = parts.into_iter();
        let first = iter.next().expect("at least one chunk");
        iter.fold(first, |(b, w), (b2, w2)| {
            (
                if better_min(&b2, &b) { b2 } else { b },
                if better_max(&w2, &w) { w2 } else { w },
            )
        })
    };

    let finish = |cand: Candidate| -> SearchResult {
        let ordering = Ordering::new(cand.1, n).expect("shuffles are permutations");
        let packing = pack(instance, &ordering).final_packing();
        SearchResult {
            ordering,
            packing,
            height: cand.0,
            orderings_examined: samples,
        }
    };
    (finish(best), finish(worst))
}

fn effective_threads(requested: usize, work_items: u64) -> usize {
    let auto = thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    let t = if requested == 0 { auto } else { requested };
    t.min(work_items.max(1) as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::placement_violations;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn qi(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn squares(width: Rational, sides: &[Rational]) -> Instance {
        Instance::new(
            width,
            sides.iter().map(|s| (s.clone(), s.clone())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn trace_prefixes_are_feasible() {
        let inst = squares(qi(6), &[qi(2), qi(1), qi(2), qi(3)]);
        let trace = pack(&inst, &Ordering::identity(4));
        for i in 0..=trace.len() {
            assert!(placement_violations(&inst, trace.prefix(i)).is_empty());
        }
        assert_eq!(trace.height(), qi(5));
    }

    #[test]
    fn scaled_and_rational_paths_agree() {
        let inst = squares(
            q(15, 2),
            &[q(39, 20), q(19, 10), q(37, 20), q(9, 5), qi(1), qi(1)],
        );
        let ordering = Ordering::identity(6);
        let scaled = pack(&inst, &ordering);

        let sizes: Vec<(Rational, Rational)> = inst
            .items()
            .iter()
            .map(|it| (it.width.clone(), it.height.clone()))
            .collect();
        let rational = super::placer::pack_positions(inst.width(), &sizes, ordering.ids());
        for (step, (x, y)) in scaled.steps().iter().zip(rational) {
            assert_eq!((step.x.clone(), step.y.clone()), (x, y));
        }
    }

    #[test]
    fn determinism() {
        let inst = squares(qi(9), &[qi(2), qi(3), qi(1), qi(2), qi(4)]);
        let ordering = Ordering::new(vec![4, 2, 0, 3, 1], 5).unwrap();
        let a = pack(&inst, &ordering);
        let b = pack(&inst, &ordering);
        assert_eq!(a.steps(), b.steps());
    }

    #[test]
    fn exhaustive_single_item() {
        let inst = squares(qi(4), &[qi(3)]);
        let res = best_exhaustive(&inst, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert_eq!(res.height, qi(3));
        assert_eq!(res.orderings_examined, 1);
    }

    #[test]
    fn exhaustive_respects_cap() {
        let sides: Vec<Rational> = (0..10).map(|_| qi(1)).collect();
        let inst = squares(qi(20), &sides);
        assert_eq!(
            best_exhaustive(&inst, 9).err(),
            Some(SearchError::InstanceTooLarge { n: 10, cap: 9 })
        );
    }

    #[test]
    fn sampled_extremes_single_sample() {
        let inst = squares(qi(6), &[qi(2), qi(1), qi(2), qi(3)]);
        let (best, worst) = sampled_extremes(&inst, 1, 11, 1);
        assert_eq!(best.height, worst.height);
        assert_eq!(best.ordering, worst.ordering);
    }

    #[test]
    fn sampled_extremes_thread_count_does_not_change_result() {
        let inst = squares(qi(9), &[qi(2), qi(3), qi(1), qi(2), qi(4), qi(1)]);
        let (b1, w1) = sampled_extremes(&inst, 64, 5, 1);
        let (b4, w4) = sampled_extremes(&inst, 64, 5, 4);
        assert_eq!(b1.ordering, b4.ordering);
        assert_eq!(w1.ordering, w4.ordering);
        assert_eq!(b1.height, b4.height);
        assert_eq!(w1.height, w4.height);
        assert!(b1.height <= w1.height);
    }
}
