//! Strip packing instances and orderings.

use std::fmt;

use crate::rational::Rational;

/// A rectangle to pack. Squares are the `width == height` special case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub id: usize,
    pub width: Rational,
    pub height: Rational,
}

impl Item {
    pub fn is_square(&self) -> bool {
        self.width == self.height
    }

    pub fn area(&self) -> Rational {
        &self.width * &self.height
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    NonPositiveWidth,
    NonPositiveItem(usize),
    ItemWiderThanStrip(usize),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::NonPositiveWidth => write!(f, "strip width must be positive"),
            InstanceError::NonPositiveItem(id) => {
                write!(f, "item {id} has a non-positive side")
            }
            InstanceError::ItemWiderThanStrip(id) => {
                write!(f, "item {id} is wider than the strip")
            }
        }
    }
}

impl std::error::Error for InstanceError {}

/// A strip of fixed width together with the items to pack into it.
/// Item ids are `0..n` in construction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    width: Rational,
    items: Vec<Item>,
}

impl Instance {
    pub fn new(width: Rational, sizes: Vec<(Rational, Rational)>) -> Result<Self, InstanceError> {
        if !width.is_positive() {
            return Err(InstanceError::NonPositiveWidth);
        }
        let mut items = Vec::with_capacity(sizes.len());
        for (id, (w, h)) in sizes.into_iter().enumerate() {
            if !w.is_positive() || !h.is_positive() {
                return Err(InstanceError::NonPositiveItem(id));
            }
            if w > width {
                return Err(InstanceError::ItemWiderThanStrip(id));
            }
            items.push(Item {
                id,
                width: w,
                height: h,
            });
        }
        Ok(Instance { width, items })
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, id: usize) -> &Item {
        &self.items[id]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn all_squares(&self) -> bool {
        self.items.iter().all(Item::is_square)
    }

    pub fn total_area(&self) -> Rational {
        self.items.iter().map(Item::area).sum()
    }

    pub fn max_height(&self) -> Rational {
        self.items
            .iter()
            .map(|it| it.height.clone())
            .fold(Rational::zero(), Rational::max)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderingError {
    LengthMismatch { expected: usize, got: usize },
    NotAPermutation,
}

impl fmt::Display for OrderingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingError::LengthMismatch { expected, got } => {
                write!(
                    f,
                    "ordering has {got} entries, instance has {expected} items"
                )
            }
            OrderingError::NotAPermutation => write!(f, "ordering is not a permutation"),
        }
    }
}

impl std::error::Error for OrderingError {}

/// A permutation of item ids; the order in which the packer places items.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordering(Vec<usize>);

impl Ordering {
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, OrderingError> {
        if order.len() != n {
            return Err(OrderingError::LengthMismatch {
                expected: n,
                got: order.len(),
            });
        }
        let mut seen = vec![false; n];
        for &id in &order {
            if id >= n || seen[id] {
                return Err(OrderingError::NotAPermutation);
            }
            seen[id] = true;
        }
        Ok(Ordering(order))
    }

    pub fn identity(n: usize) -> Self {
        Ordering((0..n).collect())
    }

    /// Sort by decreasing width, ties by id.
    pub fn by_decreasing_width(instance: &Instance) -> Self {
        let mut ids: Vec<usize> = (0..instance.len()).collect();
        ids.sort_by(|&a, &b| {
            instance
                .item(b)
                .width
                .cmp(&instance.item(a).width)
                .then(a.cmp(&b))
        });
        Ordering(ids)
    }

    /// Sort by decreasing area, ties by id. For squares this is the usual
    /// decreasing-size order.
    pub fn by_decreasing_size(instance: &Instance) -> Self {
        let mut ids: Vec<usize> = (0..instance.len()).collect();
        ids.sort_by(|&a, &b| {
            instance
                .item(b)
                .area()
                .cmp(&instance.item(a).area())
                .then(a.cmp(&b))
        });
        Ordering(ids)
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of positions where the two orderings disagree.
    pub fn support_distance(&self, other: &Ordering) -> usize {
        assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}
