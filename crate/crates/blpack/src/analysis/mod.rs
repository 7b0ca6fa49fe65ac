//! Structural analysis of bottom-left packings: piece extraction, boundary
//! circuits, structure and peak checks, cover partitions, wide-squares
//! inequalities, trenches, the global height bound, and the independent
//! placement/flood-fill oracles.

mod bound;
mod cover;
mod graph;
mod grid;
mod pieces;
mod structure;
mod verify;

pub use bound::{check_global_bound, BoundReport, NotSquaresError, COVER_COPIES, GUARD_ROWS};
pub use cover::{
    check_cover_properties, check_wide_squares, natural_cover_partition, CoverPartition, SubKind,
    SubPiece, WideSquaresReport,
};
pub use graph::{arrow_types, build_piece_graph, ArrowTypes, Node, NodeFaces, PieceGraph};
pub use pieces::{
    accounting_violations, extract_pieces, extract_trenches, Piece, PieceClass, Trench,
};
pub use structure::{check_peaks, check_side_exclusivity, check_structure};
pub use verify::{
    flood_fill_bounded_area, oracle_position, pieces_bounded_area, support_violations,
    verify_bottom_left,
};

use crate::engine::PackingTrace;

/// Everything checked about one piece, with human-readable violations.
#[derive(Clone, Debug)]
pub struct PieceReport {
    pub piece_id: usize,
    pub vertex_count: usize,
    pub violations: Vec<String>,
}

/// Runs the full per-piece battery: circuit construction (which itself
/// verifies Hamiltonicity and the vertex-count floor), structure clauses,
/// peaks, side exclusivity, cover partition properties, and — on square
/// instances — the wide-squares inequalities.
pub fn analyze_piece(trace: &PackingTrace, piece: &Piece) -> PieceReport {
    let mut violations = Vec::new();
    if piece.touches_left && piece.touches_right {
        violations.push("piece touches both vertical strip boundaries".into());
    }
    let vertex_count;
    match build_piece_graph(trace, piece) {
        Ok(pg) => {
            vertex_count = pg.len();
            violations.extend(check_structure(&pg));
            violations.extend(check_side_exclusivity(&pg));
            match natural_cover_partition(trace, piece, &pg) {
                Ok(cp) => {
                    let corresponding: Vec<usize> = cp
                        .subpieces
                        .iter()
                        .filter(|s| s.kind == SubKind::Numbered)
                        .map(|s| s.corresponding)
                        .collect();
                    violations.extend(check_peaks(&pg, piece, &corresponding));
                    violations.extend(check_cover_properties(&cp));
                    if trace.instance().all_squares() {
                        violations.extend(check_wide_squares(&pg, &cp).violations);
                    }
                }
                Err(e) => violations.push(format!("cover partition: {e}")),
            }
        }
        Err(e) => {
            vertex_count = 0;
            violations.push(format!("adjacency graph: {e}"));
        }
    }
    PieceReport {
        piece_id: piece.id,
        vertex_count,
        violations,
    }
}

/// Full structural verdict over a trace.
#[derive(Clone, Debug)]
pub struct TraceAnalysis {
    pub pieces: Vec<Piece>,
    pub trenches: Vec<Trench>,
    pub piece_reports: Vec<PieceReport>,
    pub violations: Vec<String>,
}

impl TraceAnalysis {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.piece_reports.iter().all(|r| r.violations.is_empty())
    }
}

/// Extracts pieces and trenches and runs every structural check, plus the
/// area accounting identity and the flood-fill reconciliation.
pub fn analyze_trace(trace: &PackingTrace) -> TraceAnalysis {
    let pieces = extract_pieces(trace);
    let trenches = extract_trenches(trace, &pieces);
    let piece_reports: Vec<PieceReport> = pieces.iter().map(|p| analyze_piece(trace, p)).collect();

    let mut violations = accounting_violations(trace, &pieces, &trenches);
    let right_trenches = trenches.iter().filter(|t| t.touches_right).count();
    if right_trenches > 1 {
        violations.push(format!(
            "{right_trenches} trenches touch the right boundary"
        ));
    }
    let by_pieces = pieces_bounded_area(trace, &pieces);
    let by_flood = flood_fill_bounded_area(trace);
    if by_pieces != by_flood {
        violations.push(format!(
            "bounded unoccupied area differs: pieces say {by_pieces}, flood fill says {by_flood}"
        ));
    }
    TraceAnalysis {
        pieces,
        trenches,
        piece_reports,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::pack;
    use crate::instance::{Instance, Ordering};
    use crate::rational::Rational;

    #[test]
    fn worked_example_is_clean() {
        let inst = Instance::new(
            Rational::from_int(6),
            [2i64, 1, 2, 3]
                .iter()
                .map(|&s| (Rational::from_int(s), Rational::from_int(s)))
                .collect(),
        )
        .unwrap();
        let trace = pack(&inst, &Ordering::identity(4));
        let analysis = analyze_trace(&trace);
        assert_eq!(analysis.pieces.len(), 1);
        assert!(analysis.is_clean(), "{:?}", analysis);
        assert_eq!(analysis.piece_reports[0].vertex_count, 4);
    }

    #[test]
    fn checkerboard_analysis_is_clean() {
        let case = crate::generators::gen_checkerboard(2).unwrap();
        let trace = pack(&case.instance, &case.orderings["decreasing"]);
        let analysis = analyze_trace(&trace);
        assert!(analysis.is_clean(), "{:#?}", analysis.piece_reports);
    }
}
