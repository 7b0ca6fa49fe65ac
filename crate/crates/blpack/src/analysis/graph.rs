//! Adjacency graphs of unoccupied pieces.
//!
//! Vertices are the squares (and formal boundary squares) whose closures
//! touch the piece closure. The circuit is the boundary traversal with the
//! piece interior on the right, which starts the top path toward the left
//! flank; squares touching only at a corner are inserted where the walk
//! passes their corner. Each square appears exactly once; this is verified
//! against an independently computed adjacency set.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::grid::Grid;
use crate::analysis::pieces::Piece;
use crate::engine::PackingTrace;
use crate::packing::Rect;
use crate::rational::Rational;

/// A vertex: a placed item or one of the three formal boundary squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Item(usize),
    Left,
    Right,
    Bottom,
}

impl Node {
    pub fn label(&self) -> String {
        match self {
            Node::Item(id) => format!("item {id}"),
            Node::Left => "left boundary".into(),
            Node::Right => "right boundary".into(),
            Node::Bottom => "strip bottom".into(),
        }
    }
}

/// Faces of a vertex; the formal side boundaries have no finite top face.
#[derive(Clone, Debug)]
pub struct NodeFaces {
    pub lf: Rational,
    pub rf: Rational,
    pub bf: Rational,
    pub tf: Option<Rational>,
}

/// Directed arrow type set between two adjacent vertices. Corner contacts
/// carry two types.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ArrowTypes {
    pub left: bool,
    pub right: bool,
    pub up: bool,
    pub down: bool,
}

impl ArrowTypes {
    pub fn any(&self) -> bool {
        self.left || self.right || self.up || self.down
    }
}

/// Types of the arrow `from -> to`.
pub fn arrow_types(from: &NodeFaces, to: &NodeFaces) -> ArrowTypes {
    let eq_opt = |a: &Option<Rational>, b: &Rational| a.as_ref() == Some(b);
    ArrowTypes {
        left: from.lf == to.rf,
        right: from.rf == to.lf,
        up: eq_opt(&from.tf, &to.bf),
        down: eq_opt(&to.tf, &from.bf),
    }
}

/// The boundary circuit of one piece with its distinguished vertices.
#[derive(Clone, Debug)]
pub struct PieceGraph {
    pub piece_id: usize,
    /// Hamiltonian circuit, rotated to begin at the start square.
    pub circuit: Vec<Node>,
    pub faces: Vec<NodeFaces>,
    /// Side length per vertex for square items; `None` for formal squares
    /// (treated as unboundedly large) and non-square items.
    pub sizes: Vec<Option<Rational>>,
    /// `arrows[i]` is the type set of `circuit[i] -> circuit[i+1 mod n]`.
    pub arrows: Vec<ArrowTypes>,
    pub top: usize,
    pub end: usize,
    pub pre: usize,
    pub pen: usize,
}

impl PieceGraph {
    pub fn len(&self) -> usize {
        self.circuit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuit.is_empty()
    }

    pub fn node_faces(&self, idx: usize) -> &NodeFaces {
        &self.faces[idx]
    }
}

/// Grid context for one piece at its birth step.
pub(crate) struct PieceContext {
    pub grid: Grid,
    /// Cell -> true when the cell belongs to the piece.
    pub mask: Vec<bool>,
    /// Cell -> placed item id occupying it at the birth step.
    pub owner: Vec<Option<usize>>,
}

pub(crate) fn piece_context(trace: &PackingTrace, piece: &Piece) -> PieceContext {
    let width = trace.instance().width();
    let prefix = trace.prefix(piece.birth_step);
    let rects: Vec<Rect> = prefix
        .iter()
        .map(|p| Rect::of(trace.instance(), p))
        .collect();
    let max_top = rects
        .iter()
        .map(|r| r.y1.clone())
        .fold(Rational::zero(), Rational::max);
    let cap = &max_top + &Rational::one();

    let mut all = rects;
    let square_count = all.len();
    all.extend(piece.cells.iter().cloned());
    let grid = Grid::build(width, &cap, &all, &[], &[]);

    let mut mask = vec![false; grid.nx * grid.ny];
    let mut owner = vec![None; grid.nx * grid.ny];
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let cell = grid.index(ix, iy);
            match grid.occ[cell] {
                Some(tag) if (tag as usize) < square_count => {
                    owner[cell] = Some(prefix[tag as usize].id);
                }
                Some(_) => mask[cell] = true,
                None => {}
            }
        }
    }
    PieceContext { grid, mask, owner }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    North,
    South,
    East,
    West,
}

pub fn build_piece_graph(trace: &PackingTrace, piece: &Piece) -> Result<PieceGraph, String> {
    let ctx = piece_context(trace, piece);
    build_with_context(trace, piece, &ctx)
}

pub(crate) fn build_with_context(
    trace: &PackingTrace,
    piece: &Piece,
    ctx: &PieceContext,
) -> Result<PieceGraph, String> {
    let grid = &ctx.grid;
    let width = trace.instance().width();
    let in_piece = |ix: isize, iy: isize| -> bool {
        ix >= 0
            && iy >= 0
            && (ix as usize) < grid.nx
            && (iy as usize) < grid.ny
            && ctx.mask[grid.index(ix as usize, iy as usize)]
    };
    let owner_of = |ix: isize, iy: isize| -> Result<Node, String> {
        if ix < 0 {
            return Ok(Node::Left);
        }
        if ix as usize >= grid.nx {
            return Ok(Node::Right);
        }
        if iy < 0 {
            return Ok(Node::Bottom);
        }
        if iy as usize >= grid.ny {
            return Err("piece is open above".into());
        }
        match ctx.owner[grid.index(ix as usize, iy as usize)] {
            Some(id) => Ok(Node::Item(id)),
            None => Err(format!(
                "piece {} borders a free cell at ({ix},{iy})",
                piece.id
            )),
        }
    };

    // Directed boundary edges keyed by start corner, walked with the piece
    // interior on the right.
    type Corner = (usize, usize);
    let mut edges: BTreeMap<Corner, (Corner, Node, Dir)> = BTreeMap::new();
    let mut add_edge =
        |from: (usize, usize), to: (usize, usize), node: Node, dir: Dir| -> Result<(), String> {
            if edges.insert(from, (to, node, dir)).is_some() {
                return Err(format!("pinched boundary at corner {from:?}"));
            }
            Ok(())
        };

    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            if !ctx.mask[grid.index(ix, iy)] {
                continue;
            }
            let (x, y) = (ix as isize, iy as isize);
            if !in_piece(x + 1, y) {
                add_edge(
                    (ix + 1, iy + 1),
                    (ix + 1, iy),
                    owner_of(x + 1, y)?,
                    Dir::South,
                )?;
            }
            if !in_piece(x - 1, y) {
                add_edge((ix, iy), (ix, iy + 1), owner_of(x - 1, y)?, Dir::North)?;
            }
            if !in_piece(x, y + 1) {
                add_edge(
                    (ix, iy + 1),
                    (ix + 1, iy + 1),
                    owner_of(x, y + 1)?,
                    Dir::East,
                )?;
            }
            if !in_piece(x, y - 1) {
                add_edge((ix + 1, iy), (ix, iy), owner_of(x, y - 1)?, Dir::West)?;
            }
        }
    }

    // Chain the edges into the single boundary cycle.
    let total_edges = edges.len();
    let start_corner = *edges.keys().next().ok_or("piece has no boundary")?;
    let mut cycle: Vec<((usize, usize), Node, Dir)> = Vec::new();
    let mut corner = start_corner;
    loop {
        let &(next, node, dir) = edges
            .get(&corner)
            .ok_or_else(|| format!("boundary breaks at corner {corner:?}"))?;
        cycle.push((corner, node, dir));
        corner = next;
        if corner == start_corner {
            break;
        }
        if cycle.len() > total_edges {
            return Err("boundary walk does not close".into());
        }
    }
    if cycle.len() != total_edges {
        return Err("piece boundary is not a single cycle".into());
    }

    // Emit owners in walk order; at every right turn the cell diagonally
    // across the corner may hold a square touching the piece only there.
    let mut sequence: Vec<Node> = Vec::new();
    for i in 0..cycle.len() {
        let (_, node, dir) = cycle[i];
        let (turn_corner, next_node, next_dir) = cycle[(i + 1) % cycle.len()];
        sequence.push(node);
        if right_turn(dir, next_dir) {
            let (dx, dy) = diagonal_cell(dir);
            let cx = turn_corner.0 as isize + dx;
            let cy = turn_corner.1 as isize + dy;
            if cx >= 0 && cy >= 0 && (cx as usize) < grid.nx && (cy as usize) < grid.ny {
                if let Some(id) = ctx.owner[grid.index(cx as usize, cy as usize)] {
                    let diag = Node::Item(id);
                    if diag != node && diag != next_node {
                        sequence.push(diag);
                    }
                }
            }
        }
    }

    // Collapse repeats, including across the wrap-around.
    let mut circuit: Vec<Node> = Vec::new();
    for node in sequence {
        if circuit.last() != Some(&node) {
            circuit.push(node);
        }
    }
    while circuit.len() > 1 && circuit.first() == circuit.last() {
        circuit.pop();
    }

    // Hamiltonicity against the independently computed adjacency set.
    let mut seen = BTreeSet::new();
    for node in &circuit {
        if !seen.insert(*node) {
            return Err(format!("circuit visits {} twice", node.label()));
        }
    }
    let adjacent = adjacency_set(trace, piece);
    if seen != adjacent {
        return Err(format!(
            "circuit vertices {:?} differ from adjacency set {:?}",
            seen, adjacent
        ));
    }
    if circuit.len() < 4 {
        return Err(format!(
            "adjacency graph has only {} vertices",
            circuit.len()
        ));
    }

    let faces_of = |node: &Node| node_faces(trace, width, node);
    let faces: Vec<NodeFaces> = circuit.iter().map(&faces_of).collect();

    // Start square: lowest finite top face, leftmost on ties.
    let start = circuit
        .iter()
        .enumerate()
        .filter_map(|(i, _)| faces[i].tf.clone().map(|tf| (tf, faces[i].lf.clone(), i)))
        .min()
        .map(|(_, _, i)| i)
        .ok_or("no vertex has a finite top face")?;
    let n = circuit.len();
    let circuit: Vec<Node> = (0..n).map(|i| circuit[(start + i) % n]).collect();
    let faces: Vec<NodeFaces> = circuit.iter().map(&faces_of).collect();

    // Top square: highest bottom face, rightmost on ties.
    let top = (0..n)
        .map(|i| (faces[i].bf.clone(), faces[i].lf.clone(), i))
        .max()
        .map(|(_, _, i)| i)
        .expect("non-empty circuit");
    if !matches!(circuit[top], Node::Item(_)) {
        return Err("top square is a formal square".into());
    }
    if top < 2 || top + 1 >= n {
        return Err("start square is adjacent to the top square".into());
    }
    let end = (top + 1) % n;
    let pre = top - 1;
    let pen = (end + 1) % n;

    let sizes: Vec<Option<Rational>> = circuit
        .iter()
        .map(|node| match node {
            Node::Item(id) => {
                let item = trace.instance().item(*id);
                item.is_square().then(|| item.width.clone())
            }
            _ => None,
        })
        .collect();

    let arrows: Vec<ArrowTypes> = (0..n)
        .map(|i| arrow_types(&faces[i], &faces[(i + 1) % n]))
        .collect();
    for (i, a) in arrows.iter().enumerate() {
        if !a.any() {
            return Err(format!(
                "arrow {} -> {} carries no type",
                circuit[i].label(),
                circuit[(i + 1) % n].label()
            ));
        }
    }

    Ok(PieceGraph {
        piece_id: piece.id,
        circuit,
        faces,
        sizes,
        arrows,
        top,
        end,
        pre,
        pen,
    })
}

fn right_turn(d1: Dir, d2: Dir) -> bool {
    matches!(
        (d1, d2),
        (Dir::South, Dir::West)
            | (Dir::West, Dir::North)
            | (Dir::North, Dir::East)
            | (Dir::East, Dir::South)
    )
}

/// Cell index offset of the quadrant diagonally opposite the piece at a
/// right turn entered with direction `d1`; relative to the corner point.
fn diagonal_cell(d1: Dir) -> (isize, isize) {
    match d1 {
        Dir::South => (0, -1),
        Dir::West => (-1, -1),
        Dir::North => (-1, 0),
        Dir::East => (0, 0),
    }
}

fn node_faces(trace: &PackingTrace, width: &Rational, node: &Node) -> NodeFaces {
    match node {
        Node::Item(id) => {
            let placement = trace
                .steps()
                .iter()
                .find(|p| p.id == *id)
                .expect("vertex item is placed");
            let r = Rect::of(trace.instance(), placement);
            NodeFaces {
                lf: r.x0,
                rf: r.x1,
                bf: r.y0,
                tf: Some(r.y1),
            }
        }
        Node::Left => NodeFaces {
            lf: Rational::zero(),
            rf: Rational::zero(),
            bf: Rational::zero(),
            tf: None,
        },
        Node::Right => NodeFaces {
            lf: width.clone(),
            rf: width.clone(),
            bf: Rational::zero(),
            tf: None,
        },
        Node::Bottom => NodeFaces {
            lf: Rational::zero(),
            rf: width.clone(),
            bf: Rational::zero(),
            tf: Some(Rational::zero()),
        },
    }
}

/// Independent adjacency test: closures intersect.
fn adjacency_set(trace: &PackingTrace, piece: &Piece) -> BTreeSet<Node> {
    let mut set = BTreeSet::new();
    let width = trace.instance().width();
    for cell in &piece.cells {
        if cell.x0.is_zero() {
            set.insert(Node::Left);
        }
        if &cell.x1 == width {
            set.insert(Node::Right);
        }
        if cell.y0.is_zero() {
            set.insert(Node::Bottom);
        }
    }
    for p in trace.prefix(piece.birth_step) {
        let r = Rect::of(trace.instance(), p);
        let touches = piece
            .cells
            .iter()
            .any(|c| r.x0 <= c.x1 && c.x0 <= r.x1 && r.y0 <= c.y1 && c.y0 <= r.y1);
        if touches {
            set.insert(Node::Item(p.id));
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::pieces::extract_pieces;
    use crate::engine::pack;
    use crate::instance::{Instance, Ordering};

    fn qi(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn square_instance(width: i64, sides: &[i64]) -> Instance {
        Instance::new(qi(width), sides.iter().map(|&s| (qi(s), qi(s))).collect()).unwrap()
    }

    /// The width-6 worked example: squares 2,1,2,3 leave one piece whose
    /// circuit is [unit, first 2, the 3, second 2] with known arrow types.
    #[test]
    fn worked_example_circuit_and_specials() {
        let inst = square_instance(6, &[2, 1, 2, 3]);
        let trace = pack(&inst, &Ordering::identity(4));
        let pieces = extract_pieces(&trace);
        let pg = build_piece_graph(&trace, &pieces[0]).unwrap();

        assert_eq!(
            pg.circuit,
            vec![Node::Item(1), Node::Item(0), Node::Item(3), Node::Item(2)]
        );
        assert_eq!(pg.top, 2);
        assert_eq!(pg.pre, 1);
        assert_eq!(pg.end, 3);
        assert_eq!(pg.pen, 0);

        // start -> first 2: left; 2 -> 3: up; 3 -> second 2: down;
        // second 2 -> start: hmm the closing arrow; and pen->end = start->end
        // is of right type.
        assert!(pg.arrows[0].left);
        assert!(pg.arrows[1].up);
        assert!(pg.arrows[2].down);
        let pen_to_end = arrow_types(&pg.faces[pg.pen], &pg.faces[pg.end]);
        assert!(pen_to_end.right);
    }

    #[test]
    fn corner_contact_carries_two_types() {
        // Diagonal corner touch: bottom-right corner of the upper square
        // meets the top-left corner of the lower one.
        let upper = NodeFaces {
            lf: qi(1),
            rf: qi(3),
            bf: qi(2),
            tf: Some(qi(4)),
        };
        let lower = NodeFaces {
            lf: qi(3),
            rf: qi(5),
            bf: qi(0),
            tf: Some(qi(2)),
        };
        let t = arrow_types(&upper, &lower);
        assert!(t.right && t.down && !t.left && !t.up);
    }

    #[test]
    fn bottom_to_left_arrow_is_left_and_up() {
        let w = qi(7);
        let bottom = NodeFaces {
            lf: qi(0),
            rf: w.clone(),
            bf: qi(0),
            tf: Some(qi(0)),
        };
        let left = NodeFaces {
            lf: qi(0),
            rf: qi(0),
            bf: qi(0),
            tf: None,
        };
        let t = arrow_types(&bottom, &left);
        assert!(t.left && t.up && !t.right && !t.down);
    }

    #[test]
    fn right_piece_includes_formal_squares() {
        // Width 4: squares 2,1,2 leave a floor piece against the right wall.
        let inst = square_instance(4, &[2, 1, 2]);
        let trace = pack(&inst, &Ordering::identity(3));
        let pieces = extract_pieces(&trace);
        assert_eq!(pieces.len(), 1);
        assert!(pieces[0].touches_right);
        let pg = build_piece_graph(&trace, &pieces[0]).unwrap();
        assert!(pg.circuit.contains(&Node::Right));
        assert!(pg.circuit.contains(&Node::Bottom));
        assert_eq!(pg.circuit[0], Node::Bottom);
    }
}
