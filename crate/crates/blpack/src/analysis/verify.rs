//! Independent oracles.
//!
//! The placement oracle re-derives every bottom-left position from scratch
//! by scanning the full candidate grid — `y` over `{0} + top faces`, `x`
//! over `{0} + right faces`, lexicographically — with a plain overlap test
//! per candidate. It shares no code with the engine's banded placer.
//!
//! The flood-fill oracle recomputes the total bounded unoccupied area of
//! the final packing in one shot and reconciles it with the pieces (frozen
//! regions minus whatever later squares filled).

use crate::analysis::grid::Grid;
use crate::analysis::pieces::Piece;
use crate::engine::PackingTrace;
use crate::instance::Instance;
use crate::packing::{Placement, Rect};
use crate::rational::Rational;

/// Lexicographically first feasible candidate-grid position for `item_id`
/// against `placed`.
pub fn oracle_position(
    instance: &Instance,
    placed: &[Placement],
    item_id: usize,
) -> (Rational, Rational) {
    let item = instance.item(item_id);
    let rects: Vec<Rect> = placed.iter().map(|p| Rect::of(instance, p)).collect();

    let mut ys = vec![Rational::zero()];
    ys.extend(rects.iter().map(|r| r.y1.clone()));
    ys.sort();
    ys.dedup();
    let mut xs = vec![Rational::zero()];
    xs.extend(rects.iter().map(|r| r.x1.clone()));
    xs.sort();
    xs.dedup();

    for y in &ys {
        let y1 = y + &item.height;
        for x in &xs {
            let x1 = x + &item.width;
            if &x1 > instance.width() {
                break;
            }
            let candidate = Rect {
                x0: x.clone(),
                x1,
                y0: y.clone(),
                y1: y1.clone(),
            };
            if rects.iter().all(|r| !r.overlaps(&candidate)) {
                return (x.clone(), y.clone());
            }
        }
    }
    unreachable!("(0, max top face) is always feasible");
}

/// Re-derives every step of the trace with the candidate-grid oracle and
/// reports any step where the trace's placement differs.
pub fn verify_bottom_left(trace: &PackingTrace) -> Vec<String> {
    let mut violations = Vec::new();
    for (i, step) in trace.steps().iter().enumerate() {
        let (x, y) = oracle_position(trace.instance(), trace.prefix(i), step.id);
        if x != step.x || y != step.y {
            violations.push(format!(
                "step {}: item {} placed at ({}, {}), oracle expects ({x}, {y})",
                i + 1,
                step.id,
                step.x,
                step.y
            ));
        }
    }
    violations
}

/// Support property: every placement rests on the floor or on some top
/// face (with open x-overlap), and against the left wall or some right face
/// (with open y-overlap). A necessary condition of lexicographic
/// minimality, useful as a cheap screen.
pub fn support_violations(trace: &PackingTrace) -> Vec<String> {
    let mut violations = Vec::new();
    for (i, step) in trace.steps().iter().enumerate() {
        let me = Rect::of(trace.instance(), step);
        let prefix: Vec<Rect> = trace
            .prefix(i)
            .iter()
            .map(|p| Rect::of(trace.instance(), p))
            .collect();
        let supported = me.y0.is_zero()
            || prefix
                .iter()
                .any(|r| r.y1 == me.y0 && r.x0 < me.x1 && me.x0 < r.x1);
        if !supported {
            violations.push(format!(
                "step {}: item {} floats vertically",
                i + 1,
                step.id
            ));
        }
        let flushed = me.x0.is_zero()
            || prefix
                .iter()
                .any(|r| r.x1 == me.x0 && r.y0 < me.y1 && me.y0 < r.y1);
        if !flushed {
            violations.push(format!(
                "step {}: item {} floats horizontally",
                i + 1,
                step.id
            ));
        }
    }
    violations
}

/// Total bounded unoccupied area of the final packing, by one flood fill.
pub fn flood_fill_bounded_area(trace: &PackingTrace) -> Rational {
    let rects: Vec<Rect> = trace
        .steps()
        .iter()
        .map(|p| Rect::of(trace.instance(), p))
        .collect();
    if rects.is_empty() {
        return Rational::zero();
    }
    let cap = trace.height() + Rational::one();
    let grid = Grid::build(trace.instance().width(), &cap, &rects, &[], &[]);
    let (labels, count) = grid.free_components();
    let mut unbounded = vec![false; count as usize];
    for ix in 0..grid.nx {
        if let Some(id) = labels[grid.index(ix, grid.ny - 1)] {
            unbounded[id as usize] = true;
        }
    }
    let mut area = Rational::zero();
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            if let Some(id) = labels[grid.index(ix, iy)] {
                if !unbounded[id as usize] {
                    area = area + grid.cell_area(ix, iy);
                }
            }
        }
    }
    area
}

/// The same quantity derived from the pieces: frozen areas minus the parts
/// that squares placed after each piece's birth filled in. Squares never
/// overlap each other, so the subtraction needs no inclusion-exclusion.
pub fn pieces_bounded_area(trace: &PackingTrace, pieces: &[Piece]) -> Rational {
    let mut area = Rational::zero();
    for piece in pieces {
        for cell in &piece.cells {
            area = area + cell.area();
            for later in &trace.steps()[piece.birth_step..] {
                let r = Rect::of(trace.instance(), later);
                let x0 = cell.x0.clone().max(r.x0);
                let x1 = cell.x1.clone().min(r.x1);
                let y0 = cell.y0.clone().max(r.y0);
                let y1 = cell.y1.clone().min(r.y1);
                if x0 < x1 && y0 < y1 {
                    area = area - (x1 - x0) * (y1 - y0);
                }
            }
        }
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::pieces::extract_pieces;
    use crate::engine::pack;
    use crate::instance::Ordering;

    fn qi(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn square_instance(width: i64, sides: &[i64]) -> Instance {
        Instance::new(qi(width), sides.iter().map(|&s| (qi(s), qi(s))).collect()).unwrap()
    }

    #[test]
    fn packer_output_passes_the_oracle() {
        let case = crate::generators::gen_checkerboard(2).unwrap();
        let trace = pack(&case.instance, &case.orderings["decreasing"]);
        assert!(verify_bottom_left(&trace).is_empty());
        assert!(support_violations(&trace).is_empty());
    }

    #[test]
    fn shifted_placement_is_caught() {
        let inst = square_instance(6, &[2, 2]);
        let packed = pack(&inst, &Ordering::identity(2));
        // Hand-corrupt the second placement upward by one.
        let steps = vec![
            packed.steps()[0].clone(),
            Placement {
                id: 1,
                x: qi(2),
                y: qi(1),
            },
        ];
        let trace = PackingTrace::from_placements(inst, steps).unwrap();
        let violations = verify_bottom_left(&trace);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].contains("step 2"));
    }

    #[test]
    fn flood_fill_matches_piece_accounting() {
        let inst = square_instance(5, &[2, 1, 2, 3, 1]);
        let trace = pack(&inst, &Ordering::identity(5));
        let pieces = extract_pieces(&trace);
        // The piece was filled by the final unit square.
        assert_eq!(pieces_bounded_area(&trace, &pieces), Rational::zero());
        assert_eq!(flood_fill_bounded_area(&trace), Rational::zero());

        let inst = square_instance(6, &[2, 1, 2, 3]);
        let trace = pack(&inst, &Ordering::identity(4));
        let pieces = extract_pieces(&trace);
        assert_eq!(pieces_bounded_area(&trace, &pieces), qi(1));
        assert_eq!(flood_fill_bounded_area(&trace), qi(1));
    }
}
