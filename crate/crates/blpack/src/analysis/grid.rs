//! Coordinate-compressed occupancy grids.
//!
//! Breakpoints are the strip walls plus every rectangle face, so each cell
//! is either fully occupied by one rectangle or fully free. Connectivity is
//! 4-adjacency: cells sharing a positive-length edge, which matches
//! connectivity of the open unoccupied space (corner-touching free cells
//! are separated by the closed squares between them).

use std::collections::VecDeque;

use crate::packing::Rect;
use crate::rational::Rational;

pub(crate) struct Grid {
    pub xs: Vec<Rational>,
    pub ys: Vec<Rational>,
    pub nx: usize,
    pub ny: usize,
    /// Cell -> index of the occupying rectangle, if any.
    pub occ: Vec<Option<u32>>,
}

impl Grid {
    /// Builds the grid over `[0, width] x [0, cap]` with all faces of
    /// `rects` (clipped to the box) as breakpoints, plus any `extra`
    /// breakpoints, and rasterizes the rectangles in order (later rects do
    /// not overwrite earlier ones; overlap cannot occur in feasible input).
    pub fn build(
        width: &Rational,
        cap: &Rational,
        rects: &[Rect],
        extra_x: &[Rational],
        extra_y: &[Rational],
    ) -> Grid {
        let mut xs = vec![Rational::zero(), width.clone()];
        let mut ys = vec![Rational::zero(), cap.clone()];
        let inside_x = |v: &Rational| v.is_positive() && v < width;
        let inside_y = |v: &Rational| v.is_positive() && v < cap;
        for r in rects {
            for v in [&r.x0, &r.x1] {
                if inside_x(v) {
                    xs.push(v.clone());
                }
            }
            for v in [&r.y0, &r.y1] {
                if inside_y(v) {
                    ys.push(v.clone());
                }
            }
        }
        for v in extra_x {
            if inside_x(v) {
                xs.push(v.clone());
            }
        }
        for v in extra_y {
            if inside_y(v) {
                ys.push(v.clone());
            }
        }
        xs.sort();
        xs.dedup();
        ys.sort();
        ys.dedup();
        let nx = xs.len() - 1;
        let ny = ys.len() - 1;
        let mut grid = Grid {
            xs,
            ys,
            nx,
            ny,
            occ: vec![None; nx * ny],
        };
        for (idx, r) in rects.iter().enumerate() {
            grid.rasterize(idx as u32, r, cap);
        }
        grid
    }

    fn rasterize(&mut self, tag: u32, r: &Rect, cap: &Rational) {
        if &r.y0 >= cap {
            return;
        }
        let ix0 = lower_index(&self.xs, &r.x0);
        let ix1 = lower_index(&self.xs, &r.x1);
        let iy0 = lower_index(&self.ys, &r.y0);
        let y1 = if &r.y1 > cap { cap } else { &r.y1 };
        let iy1 = lower_index(&self.ys, y1);
        for iy in iy0..iy1 {
            for ix in ix0..ix1 {
                let cell = self.index(ix, iy);
                if self.occ[cell].is_none() {
                    self.occ[cell] = Some(tag);
                }
            }
        }
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    pub fn is_free(&self, ix: usize, iy: usize) -> bool {
        self.occ[self.index(ix, iy)].is_none()
    }

    pub fn cell_rect(&self, ix: usize, iy: usize) -> Rect {
        Rect {
            x0: self.xs[ix].clone(),
            x1: self.xs[ix + 1].clone(),
            y0: self.ys[iy].clone(),
            y1: self.ys[iy + 1].clone(),
        }
    }

    pub fn cell_area(&self, ix: usize, iy: usize) -> Rational {
        (&self.xs[ix + 1] - &self.xs[ix]) * (&self.ys[iy + 1] - &self.ys[iy])
    }

    /// Labels free cells with component ids; occupied cells get `None`.
    pub fn free_components(&self) -> (Vec<Option<u32>>, u32) {
        let mut labels: Vec<Option<u32>> = vec![None; self.nx * self.ny];
        let mut next = 0u32;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if !self.is_free(ix, iy) || labels[self.index(ix, iy)].is_some() {
                    continue;
                }
                let id = next;
                next += 1;
                let mut queue = VecDeque::new();
                labels[self.index(ix, iy)] = Some(id);
                queue.push_back((ix, iy));
                while let Some((cx, cy)) = queue.pop_front() {
                    let mut push = |nx_: usize, ny_: usize, labels: &mut Vec<Option<u32>>| {
                        let cell = self.index(nx_, ny_);
                        if self.occ[cell].is_none() && labels[cell].is_none() {
                            labels[cell] = Some(id);
                            queue.push_back((nx_, ny_));
                        }
                    };
                    if cx > 0 {
                        push(cx - 1, cy, &mut labels);
                    }
                    if cx + 1 < self.nx {
                        push(cx + 1, cy, &mut labels);
                    }
                    if cy > 0 {
                        push(cx, cy - 1, &mut labels);
                    }
                    if cy + 1 < self.ny {
                        push(cx, cy + 1, &mut labels);
                    }
                }
            }
        }
        (labels, next)
    }
}

/// Index of the breakpoint equal to `v` (which must be present).
fn lower_index(breaks: &[Rational], v: &Rational) -> usize {
    breaks.binary_search(v).expect("value is a breakpoint")
}

/// Merges a set of cells (grid indices) into maximal horizontal runs.
pub(crate) fn merge_cells(grid: &Grid, mut cells: Vec<(usize, usize)>) -> Vec<Rect> {
    cells.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut out: Vec<Rect> = Vec::new();
    for (ix, iy) in cells {
        let r = grid.cell_rect(ix, iy);
        if let Some(last) = out.last_mut() {
            if last.y0 == r.y0 && last.y1 == r.y1 && last.x1 == r.x0 {
                last.x1 = r.x1;
                continue;
            }
        }
        out.push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn rect(x0: i64, x1: i64, y0: i64, y1: i64) -> Rect {
        Rect {
            x0: qi(x0),
            x1: qi(x1),
            y0: qi(y0),
            y1: qi(y1),
        }
    }

    #[test]
    fn components_split_by_occupied_cells() {
        // A wall from (2,0)-(3,4) splits the 6x4 box into two free regions.
        let g = Grid::build(&qi(6), &qi(4), &[rect(2, 3, 0, 4)], &[], &[]);
        let (labels, count) = g.free_components();
        assert_eq!(count, 2);
        assert!(labels[g.index(0, 0)].is_some());
        assert_ne!(labels[g.index(0, 0)], labels[g.index(2, 0)]);
    }

    #[test]
    fn corner_touching_free_cells_are_disconnected() {
        // Occupied cells on the NE/SW diagonal leave NW/SE free cells that
        // meet only at the center point.
        let g = Grid::build(
            &qi(2),
            &qi(2),
            &[rect(0, 1, 0, 1), rect(1, 2, 1, 2)],
            &[],
            &[],
        );
        let (labels, count) = g.free_components();
        assert_eq!(count, 2);
        assert_ne!(labels[g.index(1, 0)], labels[g.index(0, 1)]);
    }

    #[test]
    fn merge_runs() {
        let g = Grid::build(&qi(4), &qi(2), &[rect(1, 2, 0, 1)], &[], &[]);
        let free: Vec<(usize, usize)> = (0..g.nx)
            .flat_map(|ix| (0..g.ny).map(move |iy| (ix, iy)))
            .filter(|&(ix, iy)| g.is_free(ix, iy))
            .collect();
        let merged = merge_cells(&g, free);
        // Bottom band splits around the block; top band is one full run.
        assert_eq!(merged.len(), 3);
    }
}
