//! The bottom-left placement rule.
//!
//! The lexicographically minimal feasible position has its `y` in
//! `{0} union {top faces}`: anywhere else the item could slide down. For each
//! candidate `y` in ascending order the minimal feasible `x` is computed by
//! sweeping the obstacles whose open vertical range meets `(y, y + h)` in
//! order of left face; the first candidate row with a feasible `x` wins.
//!
//! The obstacle band is maintained incrementally across candidate rows (two
//! sorted event queues, one ordered map), so one placement costs
//! `O(n log n + candidates * band)` instead of a fresh scan per candidate.

use std::collections::BTreeMap;

use super::coord::Coord;

#[derive(Clone, Debug)]
pub(crate) struct PlacedRect<C> {
    pub x0: C,
    pub x1: C,
    pub y0: C,
    pub y1: C,
}

/// Minimal feasible `(x, y)` for an item of size `w x h`, lexicographic in
/// `(y, x)`. A position always exists because the strip is open above.
pub(crate) fn bottom_left_position<C: Coord>(
    width: &C,
    placed: &[PlacedRect<C>],
    w: &C,
    h: &C,
) -> (C, C) {
    debug_assert!(w <= width);

    let mut ys: Vec<C> = Vec::with_capacity(placed.len() + 1);
    ys.push(C::zero());
    ys.extend(placed.iter().map(|r| r.y1.clone()));
    ys.sort();
    ys.dedup();

    let mut by_enter: Vec<usize> = (0..placed.len()).collect();
    by_enter.sort_by(|&a, &b| placed[a].y0.cmp(&placed[b].y0));
    let mut by_exit: Vec<usize> = (0..placed.len()).collect();
    by_exit.sort_by(|&a, &b| placed[a].y1.cmp(&placed[b].y1));

    // (left face, index) -> right face, for obstacles overlapping the band.
    let mut band: BTreeMap<(C, usize), C> = BTreeMap::new();
    let (mut enter, mut exit) = (0, 0);

    for y in ys {
        let y_top = y.plus(h);
        while enter < by_enter.len() && placed[by_enter[enter]].y0 < y_top {
            let r = &placed[by_enter[enter]];
            band.insert((r.x0.clone(), by_enter[enter]), r.x1.clone());
            enter += 1;
        }
        while exit < by_exit.len() && placed[by_exit[exit]].y1 <= y {
            let r = &placed[by_exit[exit]];
            band.remove(&(r.x0.clone(), by_exit[exit]));
            exit += 1;
        }

        let mut cur = C::zero();
        let mut fits = true;
        for ((x0, _), x1) in band.iter() {
            if cur.plus(w) <= *x0 {
                break;
            }
            if *x1 > cur {
                cur = x1.clone();
                if cur.plus(w) > *width {
                    fits = false;
                    break;
                }
            }
        }
        if fits && cur.plus(w) <= *width {
            return (cur, y);
        }
    }
    unreachable!("the row above the tallest top face is always free");
}

/// Packs items in the given order; returns positions in placement order.
pub(crate) fn pack_positions<C: Coord>(
    width: &C,
    sizes: &[(C, C)],
    order: &[usize],
) -> Vec<(C, C)> {
    let mut placed: Vec<PlacedRect<C>> = Vec::with_capacity(order.len());
    let mut positions = Vec::with_capacity(order.len());
    for &id in order {
        let (w, h) = &sizes[id];
        let (x, y) = bottom_left_position(width, &placed, w, h);
        placed.push(PlacedRect {
            x0: x.clone(),
            x1: x.plus(w),
            y0: y.clone(),
            y1: y.plus(h),
        });
        positions.push((x, y));
    }
    positions
}

/// Height of a packing produced by `pack_positions`.
pub(crate) fn packed_height<C: Coord>(
    sizes: &[(C, C)],
    order: &[usize],
    positions: &[(C, C)],
) -> C {
    let mut height = C::zero();
    for (&id, (_, y)) in order.iter().zip(positions) {
        let top = y.plus(&sizes[id].1);
        if top > height {
            height = top;
        }
    }
    height
}
