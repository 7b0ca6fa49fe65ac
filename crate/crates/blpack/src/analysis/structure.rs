//! Arrow-type constraints along the boundary circuit, and peak squares.

use crate::analysis::graph::{arrow_types, ArrowTypes, Node, PieceGraph};

fn describe(pg: &PieceGraph, i: usize, j: usize, t: ArrowTypes, want: &str) -> String {
    format!(
        "arrow {} -> {} is {:?}, expected {want}",
        pg.circuit[i].label(),
        pg.circuit[j].label(),
        t
    )
}

/// The five structural clauses:
/// (a) top-path arrows up to the pre-top square are left or up;
/// (b) pre-top -> top is right or up;
/// (c) top -> end is right or down;
/// (d) bottom-path arrows from the start to the penultimate square are
///     right or down;
/// (e) penultimate -> end is right or up.
pub fn check_structure(pg: &PieceGraph) -> Vec<String> {
    let mut violations = Vec::new();
    let n = pg.len();

    for i in 0..pg.pre {
        let t = pg.arrows[i];
        if !(t.left || t.up) {
            violations.push(describe(pg, i, i + 1, t, "left or up (a)"));
        }
    }

    let b = pg.arrows[pg.pre];
    if !(b.right || b.up) {
        violations.push(describe(pg, pg.pre, pg.top, b, "right or up (b)"));
    }

    let c = pg.arrows[pg.top];
    if !(c.right || c.down) {
        violations.push(describe(pg, pg.top, pg.end, c, "right or down (c)"));
    }

    // Bottom path: start, then backwards around the circuit to pen.
    if pg.pen != 0 {
        let mut i = 0usize;
        loop {
            let j = if i == 0 { n - 1 } else { i - 1 };
            let t = arrow_types(pg.node_faces(i), pg.node_faces(j));
            if !(t.right || t.down) {
                violations.push(describe(pg, i, j, t, "right or down (d)"));
            }
            i = j;
            if i == pg.pen {
                break;
            }
        }
    }

    let e = arrow_types(pg.node_faces(pg.pen), pg.node_faces(pg.end));
    if !(e.right || e.up) {
        violations.push(describe(pg, pg.pen, pg.end, e, "right or up (e)"));
    }

    violations
}

/// Peak squares: local maxima of the bottom face along the circuit (after
/// skipping equal-height runs) whose bottom face actually meets the piece
/// with positive length — a square can show the piece its side face while
/// its bottom face is buried, and such a vertex is no ceiling.
///
/// Every peak must be the top square, the pre-top square, or one of the
/// `corresponding` squares of the natural cover partition (whose
/// under-space the partition covers by construction); at most two peaks
/// may fall outside the corresponding set.
pub fn check_peaks(
    pg: &PieceGraph,
    piece: &crate::analysis::pieces::Piece,
    corresponding: &[usize],
) -> Vec<String> {
    let n = pg.len();
    // Sequence start .. top .. end .. pen .. start.
    let seq: Vec<usize> = (0..n).chain(std::iter::once(0)).collect();
    let bf = |i: usize| &pg.node_faces(seq[i]).bf;
    // The side walls carry no ceiling; they are transparent to the
    // neighbor scan, and only vertices whose bottom face meets the piece
    // with positive length can be peaks at all.
    let is_wall = |i: usize| matches!(pg.circuit[seq[i]], Node::Left | Node::Right);
    let bottom_contact = |i: usize| {
        let f = pg.node_faces(seq[i]);
        piece.cells.iter().any(|c| {
            c.y1 == f.bf && {
                let lo = if c.x0 > f.lf { &c.x0 } else { &f.lf };
                let hi = if c.x1 < f.rf { &c.x1 } else { &f.rf };
                lo < hi
            }
        })
    };

    let mut peaks: Vec<usize> = Vec::new();
    for i in 1..seq.len() - 1 {
        if is_wall(i) || !bottom_contact(i) {
            continue;
        }
        let before = (0..i).rev().find(|&k| !is_wall(k) && bf(k) != bf(i));
        let after = (i + 1..seq.len()).find(|&j| !is_wall(j) && bf(j) != bf(i));
        if let (Some(k), Some(j)) = (before, after) {
            if bf(k) < bf(i) && bf(j) < bf(i) {
                peaks.push(seq[i]);
            }
        }
    }

    let mut violations = Vec::new();
    let plain: Vec<usize> = peaks
        .iter()
        .copied()
        .filter(|p| !corresponding.contains(p))
        .collect();
    if plain.len() > 2 {
        violations.push(format!(
            "{} peak squares outside the corresponding set",
            plain.len()
        ));
    }
    for &p in &plain {
        if p != pg.top && p != pg.pre {
            violations.push(format!(
                "peak {} is neither the top nor the pre-top square",
                pg.circuit[p].label()
            ));
        }
    }
    if !peaks.contains(&pg.top) {
        violations.push("the top square is not a peak".into());
    }
    violations
}

/// A piece may touch one vertical strip boundary but never both.
pub fn check_side_exclusivity(pg: &PieceGraph) -> Vec<String> {
    let left = pg.circuit.contains(&Node::Left);
    let right = pg.circuit.contains(&Node::Right);
    if left && right {
        vec!["piece touches both vertical strip boundaries".into()]
    } else {
        Vec::new()
    }
}
