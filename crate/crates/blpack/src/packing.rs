//! Packings, the feasibility predicate, and the area lower bound.

use std::fmt;

use crate::instance::Instance;
use crate::rational::Rational;

/// Lower-left corner of one placed item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub id: usize,
    pub x: Rational,
    pub y: Rational,
}

/// Closed axis-aligned rectangle; the occupied region of a placed item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

impl Rect {
    pub fn of(instance: &Instance, p: &Placement) -> Rect {
        let item = instance.item(p.id);
        Rect {
            x0: p.x.clone(),
            x1: &p.x + &item.width,
            y0: p.y.clone(),
            y1: &p.y + &item.height,
        }
    }

    /// True iff the open interiors intersect. Touching is allowed.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.x0 < other.x1 && other.x0 < self.x1 && self.y0 < other.y1 && other.y0 < self.y1
    }

    pub fn area(&self) -> Rational {
        (&self.x1 - &self.x0) * (&self.y1 - &self.y0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutsideStrip { id: usize },
    Overlap { a: usize, b: usize },
    MissingPlacement { id: usize },
    DuplicatePlacement { id: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutsideStrip { id } => write!(f, "item {id} lies outside the strip"),
            Violation::Overlap { a, b } => write!(f, "items {a} and {b} overlap"),
            Violation::MissingPlacement { id } => write!(f, "item {id} has no placement"),
            Violation::DuplicatePlacement { id } => {
                write!(f, "item {id} is placed more than once")
            }
        }
    }
}

/// Feasibility of an arbitrary placement list against an instance. Works on
/// prefixes too; items without a placement are simply not checked against.
///
/// The overlap scan sweeps by `x` so that only pairs whose x-extents
/// intersect are compared.
pub fn placement_violations(instance: &Instance, placements: &[Placement]) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut seen = vec![false; instance.len()];
    let mut rects: Vec<(usize, Rect)> = Vec::with_capacity(placements.len());
    for p in placements {
        if seen[p.id] {
            violations.push(Violation::DuplicatePlacement { id: p.id });
            continue;
        }
        seen[p.id] = true;
        let r = Rect::of(instance, p);
        if p.x.is_negative() || p.y.is_negative() || &r.x1 > instance.width() {
            violations.push(Violation::OutsideStrip { id: p.id });
        }
        rects.push((p.id, r));
    }
    rects.sort_by(|a, b| a.1.x0.cmp(&b.1.x0).then(a.0.cmp(&b.0)));
    for i in 0..rects.len() {
        for j in (i + 1)..rects.len() {
            if rects[j].1.x0 >= rects[i].1.x1 {
                break;
            }
            if rects[i].1.overlaps(&rects[j].1) {
                let (a, b) = (rects[i].0.min(rects[j].0), rects[i].0.max(rects[j].0));
                violations.push(Violation::Overlap { a, b });
            }
        }
    }
    violations
}

/// An instance together with one placement per item.
///
/// Construction validates only that every item is placed exactly once;
/// feasibility is a separate question so that deliberately broken packings
/// can be represented and reported on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing {
    instance: Instance,
    placements: Vec<Placement>,
}

impl Packing {
    pub fn new(instance: Instance, mut placements: Vec<Placement>) -> Result<Self, Violation> {
        let mut seen = vec![false; instance.len()];
        for p in &placements {
            if p.id >= instance.len() || seen[p.id] {
                return Err(Violation::DuplicatePlacement { id: p.id });
            }
            seen[p.id] = true;
        }
        if let Some(id) = seen.iter().position(|s| !s) {
            return Err(Violation::MissingPlacement { id });
        }
        placements.sort_by_key(|p| p.id);
        Ok(Packing {
            instance,
            placements,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    /// Placements sorted by item id.
    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn placement(&self, id: usize) -> &Placement {
        &self.placements[id]
    }

    pub fn rect(&self, id: usize) -> Rect {
        Rect::of(&self.instance, &self.placements[id])
    }

    /// Maximum top face; zero for the empty packing.
    pub fn height(&self) -> Rational {
        self.placements
            .iter()
            .map(|p| &p.y + &self.instance.item(p.id).height)
            .fold(Rational::zero(), Rational::max)
    }

    pub fn violations(&self) -> Vec<Violation> {
        placement_violations(&self.instance, &self.placements)
    }

    pub fn is_feasible(&self) -> bool {
        self.violations().is_empty()
    }
}

/// `max(total area / W, max item height)`; a lower bound on the height of
/// every feasible packing of the instance.
pub fn area_lower_bound(instance: &Instance) -> Rational {
    let by_area = instance.total_area() / instance.width().clone();
    by_area.max(instance.max_height())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn qi(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn place(id: usize, x: Rational, y: Rational) -> Placement {
        Placement { id, x, y }
    }

    #[test]
    fn single_item_inside_strip_is_feasible() {
        let inst = Instance::new(qi(7), vec![(qi(2), qi(1))]).unwrap();
        let p = Packing::new(inst, vec![place(0, qi(0), qi(0))]).unwrap();
        assert!(p.is_feasible());
    }

    #[test]
    fn interior_overlap_is_reported() {
        let inst = Instance::new(qi(7), vec![(qi(3), qi(2)), (qi(2), qi(1))]).unwrap();
        let p = Packing::new(inst, vec![place(0, qi(0), qi(0)), place(1, qi(2), qi(0))]).unwrap();
        assert_eq!(p.violations(), vec![Violation::Overlap { a: 0, b: 1 }]);
    }

    #[test]
    fn touching_is_allowed() {
        let inst = Instance::new(qi(7), vec![(qi(3), qi(2)), (qi(2), qi(1))]).unwrap();
        let p = Packing::new(inst, vec![place(0, qi(0), qi(0)), place(1, qi(3), qi(0))]).unwrap();
        assert!(p.is_feasible());
    }

    /// The left tight packing of (3,2),(3,2),(2,1)x4,(1,1) in a width-7
    /// strip; fills the 7x3 box exactly.
    #[test]
    fn tight_seven_wide_packing() {
        let inst = Instance::new(
            qi(7),
            vec![
                (qi(3), qi(2)),
                (qi(3), qi(2)),
                (qi(2), qi(1)),
                (qi(2), qi(1)),
                (qi(2), qi(1)),
                (qi(2), qi(1)),
                (qi(1), qi(1)),
            ],
        )
        .unwrap();
        let p = Packing::new(
            inst,
            vec![
                place(0, qi(0), qi(0)),
                place(1, qi(4), qi(1)),
                place(2, qi(3), qi(0)),
                place(3, qi(5), qi(0)),
                place(4, qi(0), qi(2)),
                place(5, qi(2), qi(2)),
                place(6, qi(3), qi(1)),
            ],
        )
        .unwrap();
        assert!(p.is_feasible());
        assert_eq!(p.height(), qi(3));
        assert_eq!(area_lower_bound(p.instance()), qi(3));
    }

    #[test]
    fn empty_packing_has_height_zero() {
        let inst = Instance::new(qi(5), vec![]).unwrap();
        let p = Packing::new(inst, vec![]).unwrap();
        assert_eq!(p.height(), Rational::zero());
    }

    #[test]
    fn outside_strip_is_reported() {
        let inst = Instance::new(qi(4), vec![(qi(3), qi(1))]).unwrap();
        let p = Packing::new(inst, vec![place(0, qi(2), qi(0))]).unwrap();
        assert_eq!(p.violations(), vec![Violation::OutsideStrip { id: 0 }]);
    }

    #[test]
    fn lower_bound_uses_tallest_item() {
        let inst = Instance::new(
            qi(6),
            vec![
                (qi(2), qi(2)),
                (qi(1), qi(1)),
                (qi(2), qi(2)),
                (qi(3), qi(3)),
            ],
        )
        .unwrap();
        assert_eq!(area_lower_bound(&inst), qi(3));
        let tall = Instance::new(qi(6), vec![(q(1, 2), qi(5))]).unwrap();
        assert_eq!(area_lower_bound(&tall), qi(5));
    }
}
