//! Cover partitions of unoccupied pieces and the wide-squares inequalities.

use crate::analysis::graph::{arrow_types, Node, PieceGraph};
use crate::analysis::grid::merge_cells;
use crate::analysis::pieces::Piece;
use crate::engine::PackingTrace;
use crate::rational::Rational;

use super::graph::{piece_context, PieceContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubKind {
    /// One of the V_1 .. V_s subpieces with an up-type corresponding square.
    Numbered,
    /// The subpiece under the end square's bottom face, present only when
    /// the end square sits on the penultimate square.
    End,
    /// The rest, under the top square.
    Top,
}

#[derive(Clone, Debug)]
pub struct SubPiece {
    pub kind: SubKind,
    /// Circuit index of the corresponding square.
    pub corresponding: usize,
    /// Row runs: (y0, y1, x0, x1) of the closure, band by band.
    pub rows: Vec<(Rational, Rational, Rational, Rational)>,
    pub cell_count: usize,
}

impl SubPiece {
    /// Maximum line width.
    pub fn width(&self) -> Rational {
        self.rows
            .iter()
            .map(|(_, _, x0, x1)| x1 - x0)
            .fold(Rational::zero(), Rational::max)
    }

    pub fn height(&self) -> Rational {
        let bottom = self
            .rows
            .iter()
            .map(|r| r.0.clone())
            .min()
            .expect("non-empty");
        let top = self
            .rows
            .iter()
            .map(|r| r.1.clone())
            .max()
            .expect("non-empty");
        top - bottom
    }
}

#[derive(Clone, Debug)]
pub struct CoverPartition {
    pub subpieces: Vec<SubPiece>,
    /// Cells of the whole piece, for the union check.
    pub total_cells: usize,
}

impl CoverPartition {
    pub fn end_subpiece(&self) -> Option<&SubPiece> {
        self.subpieces.iter().find(|s| s.kind == SubKind::End)
    }
}

/// The natural cover partition.
///
/// Walk the circuit from the end square around the bottom and up the top
/// path to the top square; every vertex entered by an up-type arrow with a
/// strictly larger right face corresponds to a subpiece. The subpiece of a
/// square is the unassigned space below its bottom face flooded from the
/// face; whatever remains belongs to the top square.
pub fn natural_cover_partition(
    trace: &PackingTrace,
    piece: &Piece,
    pg: &PieceGraph,
) -> Result<CoverPartition, String> {
    let ctx = piece_context(trace, piece);
    natural_cover_partition_with(trace, piece, pg, &ctx)
}

pub(crate) fn natural_cover_partition_with(
    _trace: &PackingTrace,
    piece: &Piece,
    pg: &PieceGraph,
    ctx: &PieceContext,
) -> Result<CoverPartition, String> {
    let n = pg.len();
    let grid = &ctx.grid;

    // Corresponding squares along P = end, pen, ..., start, ..., pre, top.
    let path: Vec<usize> = (0..n).map(|i| (pg.end + i) % n).collect();
    let mut pending: Vec<(usize, SubKind)> = Vec::new();
    let end_to_pen = arrow_types(pg.node_faces(pg.end), pg.node_faces(pg.pen));
    if end_to_pen.down {
        pending.push((pg.end, SubKind::End));
    }
    for t in 1..path.len() {
        let (prev, cur) = (path[t - 1], path[t]);
        if cur == pg.top {
            break;
        }
        let prev_faces = pg.node_faces(prev);
        let cur_faces = pg.node_faces(cur);
        if cur_faces.rf > prev_faces.rf && arrow_types(prev_faces, cur_faces).up {
            pending.push((cur, SubKind::Numbered));
        }
    }
    // Assign in order of increasing bottom face (stable on ties).
    pending.sort_by(|a, b| pg.node_faces(a.0).bf.cmp(&pg.node_faces(b.0).bf));

    let piece_cells: Vec<(usize, usize)> = (0..grid.ny)
        .flat_map(|iy| (0..grid.nx).map(move |ix| (ix, iy)))
        .filter(|&(ix, iy)| ctx.mask[grid.index(ix, iy)])
        .collect();
    let total_cells = piece_cells.len();
    let mut assigned: Vec<bool> = vec![false; grid.nx * grid.ny];
    let mut subpieces: Vec<SubPiece> = Vec::new();

    for (circuit_idx, kind) in pending {
        let faces = pg.node_faces(circuit_idx);
        let below = |iy: usize| grid.ys[iy + 1] <= faces.bf;
        let seeds: Vec<(usize, usize)> = piece_cells
            .iter()
            .copied()
            .filter(|&(ix, iy)| {
                !assigned[grid.index(ix, iy)]
                    && below(iy)
                    && grid.ys[iy + 1] == faces.bf
                    && grid.xs[ix] < faces.rf
                    && faces.lf < grid.xs[ix + 1]
            })
            .collect();
        if seeds.is_empty() {
            continue;
        }
        let cells = flood(grid, &ctx.mask, &mut assigned, &seeds, &below);
        subpieces.push(make_subpiece(grid, kind, circuit_idx, cells));
    }

    // V_top: everything left.
    let rest: Vec<(usize, usize)> = piece_cells
        .iter()
        .copied()
        .filter(|&(ix, iy)| !assigned[grid.index(ix, iy)])
        .collect();
    if !rest.is_empty() {
        for &(ix, iy) in &rest {
            assigned[grid.index(ix, iy)] = true;
        }
        subpieces.push(make_subpiece(grid, SubKind::Top, pg.top, rest));
    }

    let covered: usize = subpieces.iter().map(|s| s.cell_count).sum();
    if covered != total_cells {
        return Err(format!(
            "partition covers {covered} of {total_cells} cells of piece {}",
            piece.id
        ));
    }
    Ok(CoverPartition {
        subpieces,
        total_cells,
    })
}

fn flood(
    grid: &crate::analysis::grid::Grid,
    mask: &[bool],
    assigned: &mut [bool],
    seeds: &[(usize, usize)],
    allowed: &dyn Fn(usize) -> bool,
) -> Vec<(usize, usize)> {
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for &(ix, iy) in seeds {
        let cell = grid.index(ix, iy);
        if !assigned[cell] {
            assigned[cell] = true;
            stack.push((ix, iy));
        }
    }
    while let Some((ix, iy)) = stack.pop() {
        cells.push((ix, iy));
        let mut try_cell = |jx: usize, jy: usize, assigned: &mut [bool]| {
            let cell = grid.index(jx, jy);
            if mask[cell] && !assigned[cell] && allowed(jy) {
                assigned[cell] = true;
                stack.push((jx, jy));
            }
        };
        if ix > 0 {
            try_cell(ix - 1, iy, assigned);
        }
        if ix + 1 < grid.nx {
            try_cell(ix + 1, iy, assigned);
        }
        if iy > 0 {
            try_cell(ix, iy - 1, assigned);
        }
        if iy + 1 < grid.ny {
            try_cell(ix, iy + 1, assigned);
        }
    }
    cells
}

fn make_subpiece(
    grid: &crate::analysis::grid::Grid,
    kind: SubKind,
    corresponding: usize,
    cells: Vec<(usize, usize)>,
) -> SubPiece {
    let cell_count = cells.len();
    let merged = merge_cells(grid, cells);
    let rows = merged
        .into_iter()
        .map(|r| (r.y0, r.y1, r.x0, r.x1))
        .collect();
    SubPiece {
        kind,
        corresponding,
        rows,
        cell_count,
    }
}

/// Partition properties: every subpiece connected, and within a subpiece
/// the projection of a lower line is contained in or disjoint from the
/// projection of any higher line.
pub fn check_cover_properties(cp: &CoverPartition) -> Vec<String> {
    let mut violations = Vec::new();
    for (idx, sub) in cp.subpieces.iter().enumerate() {
        violations.extend(check_connected(idx, sub));
        violations.extend(check_nested_lines(idx, sub));
    }
    violations
}

fn check_connected(idx: usize, sub: &SubPiece) -> Vec<String> {
    // Row runs connect when they share a band edge with positive x-overlap.
    let k = sub.rows.len();
    if k == 0 {
        return vec![format!("subpiece {idx} is empty")];
    }
    let mut joined = vec![false; k];
    joined[0] = true;
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        let (ay0, ay1, ax0, ax1) = sub.rows[i].clone();
        for (j, row) in sub.rows.iter().enumerate() {
            if joined[j] {
                continue;
            }
            let (by0, by1, bx0, bx1) = row;
            let vertical = &ay1 == by0 || by1 == &ay0 || (&ay0 == by0 && &ay1 == by1);
            let overlap = &ax0 < bx1 && bx0 < &ax1;
            if vertical && overlap {
                joined[j] = true;
                frontier.push(j);
            }
        }
    }
    if joined.into_iter().all(|j| j) {
        Vec::new()
    } else {
        vec![format!("subpiece {idx} is disconnected")]
    }
}

fn check_nested_lines(idx: usize, sub: &SubPiece) -> Vec<String> {
    let mut violations = Vec::new();
    for (i, low) in sub.rows.iter().enumerate() {
        for high in &sub.rows[i + 1..] {
            let (ly0, _, lx0, lx1) = low;
            let (hy0, _, hx0, hx1) = high;
            if hy0 <= ly0 {
                continue;
            }
            let contained = hx0 <= lx0 && lx1 <= hx1;
            let disjoint = lx1 < hx0 || hx1 < lx0;
            if !contained && !disjoint {
                violations.push(format!(
                    "subpiece {idx}: line [{lx0},{lx1}] below is neither inside nor \
                     disjoint from [{hx0},{hx1}] above"
                ));
            }
        }
    }
    violations
}

/// Outcome of the wide-squares inequalities on one piece.
#[derive(Clone, Debug)]
pub struct WideSquaresReport {
    /// Whether the (b)/(c) clauses applied (penultimate -> end of up type
    /// with a real end square).
    pub end_clauses_applied: bool,
    pub violations: Vec<String>,
}

/// Wide squares: (a) each subpiece except the end one is strictly narrower
/// than its corresponding square; when the end square rests on the
/// penultimate square, also (b) the pre-top square exceeds the bottom-face
/// gap between top and end, and (c) the top square exceeds the penultimate
/// square plus the width of the end subpiece.
///
/// Only meaningful for bottom-left packings of squares; formal squares
/// count as unboundedly large.
pub fn check_wide_squares(pg: &PieceGraph, cp: &CoverPartition) -> WideSquaresReport {
    let mut violations = Vec::new();

    for sub in &cp.subpieces {
        if sub.kind == SubKind::End {
            continue;
        }
        match &pg.sizes[sub.corresponding] {
            Some(size) => {
                if !(size > &sub.width()) {
                    violations.push(format!(
                        "square {} (size {size}) does not exceed its subpiece width {}",
                        pg.circuit[sub.corresponding].label(),
                        sub.width()
                    ));
                }
            }
            None => {
                if matches!(pg.circuit[sub.corresponding], Node::Item(_)) {
                    violations.push(format!(
                        "corresponding square {} is not a square",
                        pg.circuit[sub.corresponding].label()
                    ));
                } else {
                    violations.push(format!(
                        "corresponding square {} is formal",
                        pg.circuit[sub.corresponding].label()
                    ));
                }
            }
        }
    }

    // The end clauses describe a real end square resting on a real
    // penultimate square with piece space still under the end square's
    // bottom face. An end square on the strip floor rests on the formal
    // bottom, and an empty end subpiece leaves the clauses without their
    // witness line; neither situation is the lemma's.
    let pen_to_end = arrow_types(pg.node_faces(pg.pen), pg.node_faces(pg.end));
    let end_is_real = matches!(pg.circuit[pg.end], Node::Item(_));
    let pen_is_real = matches!(pg.circuit[pg.pen], Node::Item(_));
    let applied = pen_to_end.up && end_is_real && pen_is_real && cp.end_subpiece().is_some();
    if applied {
        let gap = &pg.node_faces(pg.top).bf - &pg.node_faces(pg.end).bf;
        if let Some(pre_size) = &pg.sizes[pg.pre] {
            if !(pre_size > &gap) {
                violations.push(format!(
                    "pre-top size {pre_size} does not exceed bf(top)-bf(end) = {gap}"
                ));
            }
        }
        let top_size = pg.sizes[pg.top].clone();
        let pen_size = pg.sizes[pg.pen].clone();
        match (top_size, pen_size) {
            (Some(top_size), Some(pen_size)) => {
                let end_width = cp
                    .end_subpiece()
                    .map(|s| s.width())
                    .unwrap_or_else(Rational::zero);
                let rhs = pen_size + end_width;
                if !(top_size > rhs) {
                    violations.push(format!(
                        "top size {top_size} does not exceed pen + w(V_end) = {rhs}"
                    ));
                }
            }
            _ => violations.push("top or penultimate square is formal".into()),
        }
    }

    WideSquaresReport {
        end_clauses_applied: applied,
        violations,
    }
}
