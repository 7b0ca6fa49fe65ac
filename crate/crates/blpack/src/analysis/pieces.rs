//! Unoccupied pieces and trenches.
//!
//! A piece is a bounded connected region of unoccupied space, frozen at the
//! step where it first becomes bounded. Later squares may partially fill a
//! frozen piece; the frozen geometry is kept and later steps subtract it
//! from the space they consider, which is exactly the inductive definition.

use crate::analysis::grid::{merge_cells, Grid};
use crate::engine::PackingTrace;
use crate::packing::Rect;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceClass {
    Left,
    Middle,
    Right,
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub id: usize,
    /// Number of placed items when the piece became bounded (1-based).
    pub birth_step: usize,
    /// Interior-disjoint closed rectangles whose union closure is the piece.
    pub cells: Vec<Rect>,
    pub touches_left: bool,
    pub touches_right: bool,
}

impl Piece {
    pub fn class(&self) -> PieceClass {
        match (self.touches_left, self.touches_right) {
            (true, _) => PieceClass::Left,
            (false, true) => PieceClass::Right,
            (false, false) => PieceClass::Middle,
        }
    }

    pub fn area(&self) -> Rational {
        self.cells.iter().map(Rect::area).sum()
    }

    pub fn lf(&self) -> Rational {
        self.cells
            .iter()
            .map(|c| c.x0.clone())
            .min()
            .expect("non-empty piece")
    }

    pub fn rf(&self) -> Rational {
        self.cells
            .iter()
            .map(|c| c.x1.clone())
            .max()
            .expect("non-empty piece")
    }

    pub fn bf(&self) -> Rational {
        self.cells
            .iter()
            .map(|c| c.y0.clone())
            .min()
            .expect("non-empty piece")
    }

    pub fn tf(&self) -> Rational {
        self.cells
            .iter()
            .map(|c| c.y1.clone())
            .max()
            .expect("non-empty piece")
    }
}

fn prefix_rects(trace: &PackingTrace, upto: usize) -> Vec<Rect> {
    trace
        .prefix(upto)
        .iter()
        .map(|p| Rect::of(trace.instance(), p))
        .collect()
}

/// Extracts all pieces of a trace in birth order.
///
/// After each placement the unoccupied space (minus all frozen pieces) is
/// recomputed; every bounded component is new, because a component bounded
/// earlier was frozen then and a piece never borders another piece.
pub fn extract_pieces(trace: &PackingTrace) -> Vec<Piece> {
    let width = trace.instance().width().clone();
    let mut pieces: Vec<Piece> = Vec::new();
    let mut squares: Vec<Rect> = Vec::new();
    let mut frozen: Vec<Rect> = Vec::new();
    let mut max_top = Rational::zero();

    for step in 1..=trace.len() {
        let placement = &trace.steps()[step - 1];
        let rect = Rect::of(trace.instance(), placement);
        max_top = max_top.max(rect.y1.clone());
        squares.push(rect);

        let cap = &max_top + &Rational::one();
        let mut blocked = squares.clone();
        blocked.extend(frozen.iter().cloned());
        let grid = Grid::build(&width, &cap, &blocked, &[], &[]);
        let (labels, count) = grid.free_components();

        let mut unbounded = vec![false; count as usize];
        let top_row = grid.ny - 1;
        for ix in 0..grid.nx {
            if let Some(id) = labels[grid.index(ix, top_row)] {
                unbounded[id as usize] = true;
            }
        }

        let mut component_cells: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count as usize];
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                if let Some(id) = labels[grid.index(ix, iy)] {
                    if !unbounded[id as usize] {
                        component_cells[id as usize].push((ix, iy));
                    }
                }
            }
        }

        for cells in component_cells.into_iter().filter(|c| !c.is_empty()) {
            let touches_left = cells.iter().any(|&(ix, _)| ix == 0);
            let touches_right = cells.iter().any(|&(ix, _)| ix == grid.nx - 1);
            let merged = merge_cells(&grid, cells);
            frozen.extend(merged.iter().cloned());
            pieces.push(Piece {
                id: pieces.len(),
                birth_step: step,
                cells: merged,
                touches_left,
                touches_right,
            });
        }
    }
    pieces
}

/// An unoccupied region below `h_BL - h_max` that belongs to no piece.
#[derive(Clone, Debug)]
pub struct Trench {
    pub cells: Vec<Rect>,
    pub touches_right: bool,
}

impl Trench {
    pub fn area(&self) -> Rational {
        self.cells.iter().map(Rect::area).sum()
    }
}

/// Trenches of the final packing: connected unoccupied regions in the
/// substrip `[0, W] x [0, h_BL - h_max]` outside all pieces.
pub fn extract_trenches(trace: &PackingTrace, pieces: &[Piece]) -> Vec<Trench> {
    let line = trace.height() - trace.instance().max_height();
    if !line.is_positive() {
        return Vec::new();
    }
    let width = trace.instance().width().clone();
    let mut blocked = prefix_rects(trace, trace.len());
    for piece in pieces {
        blocked.extend(piece.cells.iter().cloned());
    }
    let grid = Grid::build(&width, &line, &blocked, &[], &[]);
    let (labels, count) = grid.free_components();
    let mut component_cells: Vec<Vec<(usize, usize)>> = vec![Vec::new(); count as usize];
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            if let Some(id) = labels[grid.index(ix, iy)] {
                component_cells[id as usize].push((ix, iy));
            }
        }
    }
    component_cells
        .into_iter()
        .filter(|c| !c.is_empty())
        .map(|cells| {
            let touches_right = cells.iter().any(|&(ix, _)| ix == grid.nx - 1);
            Trench {
                cells: merge_cells(&grid, cells),
                touches_right,
            }
        })
        .collect()
}

/// Exact area accounting: strip area up to the packing height equals the
/// top band of height `min(h_max, h_BL)` plus, inside the substrip below
/// it, the squares, the unfilled remainders of the pieces, and the
/// trenches. Filled piece parts belong to the squares term.
pub fn accounting_violations(
    trace: &PackingTrace,
    pieces: &[Piece],
    trenches: &[Trench],
) -> Vec<String> {
    let width = trace.instance().width();
    let h_bl = trace.height();
    let line = &h_bl - &trace.instance().max_height();
    let line = if line.is_negative() {
        Rational::zero()
    } else {
        line
    };

    let clip_area = |r: &Rect| -> Rational {
        if r.y0 >= line {
            return Rational::zero();
        }
        let top = if r.y1 > line {
            line.clone()
        } else {
            r.y1.clone()
        };
        (&r.x1 - &r.x0) * (top - &r.y0)
    };

    let all_squares = prefix_rects(trace, trace.len());
    let squares: Rational = all_squares.iter().map(&clip_area).sum();

    let mut piece_area = Rational::zero();
    for piece in pieces {
        for cell in &piece.cells {
            piece_area = piece_area + clip_area(cell);
            for later in &trace.steps()[piece.birth_step..] {
                let r = Rect::of(trace.instance(), later);
                let x0 = cell.x0.clone().max(r.x0);
                let x1 = cell.x1.clone().min(r.x1);
                let y0 = cell.y0.clone().max(r.y0);
                let y1 = cell.y1.clone().min(r.y1);
                if x0 < x1 && y0 < y1 {
                    piece_area = piece_area - clip_area(&Rect { x0, x1, y0, y1 });
                }
            }
        }
    }
    let trench_area: Rational = trenches.iter().map(Trench::area).sum();

    let total = width * &h_bl;
    let explained = width * (&h_bl - &line) + squares + piece_area + trench_area;
    let mut violations = Vec::new();
    if total != explained {
        violations.push(format!(
            "area accounting mismatch: strip {total}, explained {explained}"
        ));
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::pack;
    use crate::instance::{Instance, Ordering};

    fn qi(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn square_instance(width: i64, sides: &[i64]) -> Instance {
        Instance::new(qi(width), sides.iter().map(|&s| (qi(s), qi(s))).collect()).unwrap()
    }

    #[test]
    fn single_middle_piece() {
        // Squares 2,1,2,3 in a width-6 strip leave one piece over the unit
        // square, born when the size-3 square is placed fourth.
        let inst = square_instance(6, &[2, 1, 2, 3]);
        let trace = pack(&inst, &Ordering::identity(4));
        let pieces = extract_pieces(&trace);
        assert_eq!(pieces.len(), 1);
        let p = &pieces[0];
        assert_eq!(p.birth_step, 4);
        assert_eq!(p.class(), PieceClass::Middle);
        assert_eq!(
            p.cells,
            vec![Rect {
                x0: qi(2),
                x1: qi(3),
                y0: qi(1),
                y1: qi(2)
            }]
        );
    }

    #[test]
    fn tight_packing_has_no_pieces() {
        let inst = square_instance(4, &[2, 2, 2, 2]);
        let trace = pack(&inst, &Ordering::identity(4));
        assert!(extract_pieces(&trace).is_empty());
    }

    #[test]
    fn right_gap_is_trench_material() {
        // Squares 2,2,2 in width 5: the column x in (4,5) below
        // h_BL - h_max = 2 is unoccupied, unbounded, and right-touching.
        let inst = square_instance(5, &[2, 2, 2]);
        let trace = pack(&inst, &Ordering::identity(3));
        let pieces = extract_pieces(&trace);
        assert!(pieces.is_empty());
        let trenches = extract_trenches(&trace, &pieces);
        assert_eq!(trenches.len(), 1);
        assert!(trenches[0].touches_right);
        assert_eq!(trenches[0].area(), qi(2));
        assert!(accounting_violations(&trace, &pieces, &trenches).is_empty());
    }

    #[test]
    fn frozen_piece_stays_after_being_filled() {
        // Squares 2,1,2 fill the floor of a width-5 strip, the size-3
        // square closes a piece over the unit square, and a final unit
        // square drops into that piece; the piece keeps its birth geometry.
        let inst = square_instance(5, &[2, 1, 2, 3, 1]);
        let trace = pack(&inst, &Ordering::identity(5));
        let last = &trace.steps()[4];
        assert_eq!((last.x.clone(), last.y.clone()), (qi(2), qi(1)));
        let pieces = extract_pieces(&trace);
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].birth_step, 4);
        assert_eq!(pieces[0].area(), qi(1));
    }

    #[test]
    fn accounting_balances_on_a_generated_case() {
        let case = crate::generators::gen_checkerboard(2).unwrap();
        let trace = pack(&case.instance, &case.orderings["decreasing"]);
        let pieces = extract_pieces(&trace);
        let trenches = extract_trenches(&trace, &pieces);
        assert!(accounting_violations(&trace, &pieces, &trenches).is_empty());
    }
}
