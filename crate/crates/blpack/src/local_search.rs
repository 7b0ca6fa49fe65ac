//! Bottom-left k-local search.
//!
//! The neighborhood of an ordering is every ordering obtained by permuting
//! the items at some set of at most `k` positions so that all chosen
//! positions change (support exactly the chosen set). Neighbors are
//! enumerated deterministically: displaced index sets in ascending
//! lexicographic order, then value assignments per set in lexicographic
//! order, identity excluded.

use crate::engine::{pack, HeightEvaluator};
use crate::instance::{Instance, Ordering};
use crate::rational::Rational;

/// Improvement-selection rule for one search step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Take the first strictly improving neighbor in enumeration order.
    FirstImprovement,
    /// Scan the whole neighborhood and take a minimal-height neighbor
    /// (earliest in enumeration order on ties).
    BestImprovement,
}

/// Search history: orderings with their packed heights, strictly decreasing
/// after the initial entry.
#[derive(Clone, Debug)]
pub struct SearchTrace {
    pub strategy: Strategy,
    pub entries: Vec<(Ordering, Rational)>,
}

impl SearchTrace {
    /// Number of improvement steps taken.
    pub fn steps(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn final_height(&self) -> &Rational {
        &self
            .entries
            .last()
            .expect("trace holds the initial entry")
            .1
    }

    pub fn final_ordering(&self) -> &Ordering {
        &self
            .entries
            .last()
            .expect("trace holds the initial entry")
            .0
    }
}

/// Calls `visit` for every support-`<= k` neighbor, in the documented
/// deterministic order, until `visit` returns `false`.
fn walk_neighbors<F: FnMut(&[usize]) -> bool>(order: &[usize], k: usize, mut visit: F) {
    let n = order.len();
    let mut scratch = order.to_vec();
    for t in 2..=k.min(n) {
        let mut set: Vec<usize> = (0..t).collect();
        loop {
            // All value assignments onto the chosen positions, lexicographic,
            // keeping only those that displace every chosen position.
            let mut values: Vec<usize> = set.iter().map(|&i| order[i]).collect();
            values.sort_unstable();
            loop {
                let displaces_all = set
                    .iter()
                    .zip(&values)
                    .all(|(&pos, &val)| order[pos] != val);
                if displaces_all {
                    for (&pos, &val) in set.iter().zip(&values) {
                        scratch[pos] = val;
                    }
                    let keep_going = visit(&scratch);
                    for &pos in &set {
                        scratch[pos] = order[pos];
                    }
                    if !keep_going {
                        return;
                    }
                }
                if !next_permutation(&mut values) {
                    break;
                }
            }
            if !next_combination(&mut set, n) {
                break;
            }
        }
    }
}

fn next_permutation(values: &mut [usize]) -> bool {
    if values.len() < 2 {
        return false;
    }
    let mut i = values.len() - 1;
    while i > 0 && values[i - 1] >= values[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = values.len() - 1;
    while values[j] <= values[i - 1] {
        j -= 1;
    }
    values.swap(i - 1, j);
    values[i..].reverse();
    true
}

fn next_combination(set: &mut [usize], n: usize) -> bool {
    let t = set.len();
    let mut i = t;
    while i > 0 {
        i -= 1;
        if set[i] < n - t + i {
            set[i] += 1;
            for j in i + 1..t {
                set[j] = set[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every ordering reachable by permuting at most `k` positions, identity
/// excluded, in the deterministic enumeration order.
pub fn neighbors(ordering: &Ordering, k: usize) -> Vec<Ordering> {
    let mut out = Vec::new();
    walk_neighbors(ordering.ids(), k, |candidate| {
        out.push(
            Ordering::new(candidate.to_vec(), candidate.len())
                .expect("neighbor stays a permutation"),
        );
        true
    });
    out
}

/// One improvement step; `None` means the ordering is k-locally optimal.
pub fn improve_step(
    instance: &Instance,
    ordering: &Ordering,
    k: usize,
    strategy: Strategy,
) -> Option<Ordering> {
    let eval = HeightEvaluator::new(instance);
    let current = eval.height(ordering.ids());
    let mut found: Option<(Rational, Vec<usize>)> = None;
    walk_neighbors(ordering.ids(), k, |candidate| {
        let h = eval.height(candidate);
        if h < current {
            match strategy {
                Strategy::FirstImprovement => {
                    found = Some((h, candidate.to_vec()));
                    return false;
                }
                Strategy::BestImprovement => {
                    if found.as_ref().is_none_or(|(best, _)| h < *best) {
                        found = Some((h, candidate.to_vec()));
                    }
                }
            }
        }
        true
    });
    found.map(|(_, ids)| Ordering::new(ids, ordering.len()).expect("permutation"))
}

/// Iterates `improve_step` until a local optimum or `max_steps`.
pub fn run(
    instance: &Instance,
    ordering: &Ordering,
    k: usize,
    strategy: Strategy,
    max_steps: usize,
) -> SearchTrace {
    let mut entries = vec![(ordering.clone(), pack(instance, ordering).height())];
    while entries.len() <= max_steps {
        let current = &entries.last().expect("non-empty").0;
        match improve_step(instance, current, k, strategy) {
            Some(next) => {
                let h = pack(instance, &next).height();
                debug_assert!(h < entries.last().expect("non-empty").1);
                entries.push((next, h));
            }
            None => break,
        }
    }
    SearchTrace { strategy, entries }
}

/// The improvement schedule for the exponential-steps family with `2k`
/// rectangles (verticals at even ids, horizontals at odd ids).
///
/// Step `p` writes `2^k - p - 1` in binary and orders the verticals as: ones
/// ascending, each followed by the zeros directly below it (descending), so
/// vertical `2^j` with a set bit stacks while cleared bits tuck beside it.
/// Horizontal `i` stays at slot `2i + 1`, which keeps consecutive orderings
/// within `k` displaced positions. The packed height of ordering `p` is
/// `2^k - p`.
pub fn countdown_schedule(k: u32) -> Vec<Ordering> {
    assert!(k >= 1);
    let n = 2 * k as usize;
    let mut schedule = Vec::with_capacity(1 << (k - 1));
    for p in 0..(1u64 << (k - 1)) {
        let target = (1u64 << k) - p - 1;
        let mut verticals: Vec<u32> = Vec::with_capacity(k as usize);
        let mut pending_zeros: Vec<u32> = Vec::new();
        for j in 0..k {
            if target & (1 << j) != 0 {
                verticals.push(j);
                while let Some(z) = pending_zeros.pop() {
                    verticals.push(z);
                }
            } else {
                pending_zeros.push(j);
            }
        }
        debug_assert!(
            pending_zeros.is_empty(),
            "top bit of the target is always set"
        );
        let mut ids = Vec::with_capacity(n);
        for (slot, &j) in verticals.iter().enumerate() {
            ids.push(2 * j as usize);
            ids.push(2 * slot + 1);
        }
        schedule.push(Ordering::new(ids, n).expect("permutation"));
    }
    schedule
}
