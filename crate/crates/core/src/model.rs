//! Domain types shared by every solver: items, placements, packings, regions
//! and the three instance kinds.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational parameter type used for ε-like knobs.
pub type Eps = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A rectangle demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Item {
    pub id: ItemId,
    pub width: u64,
    pub height: u64,
    pub profit: u64,
    pub rotatable: bool,
}

impl Item {
    pub fn new(id: u32, width: u64, height: u64, profit: u64) -> Self {
        Item {
            id: ItemId(id),
            width,
            height,
            profit,
            rotatable: false,
        }
    }

    pub fn rotatable(mut self, rotatable: bool) -> Self {
        self.rotatable = rotatable;
        self
    }

    pub fn area(&self) -> u64 {
        self.width * self.height
    }

    /// Extent `(width, height)` in the given orientation.
    pub fn dims(&self, rotated: bool) -> (u64, u64) {
        if rotated {
            (self.height, self.width)
        } else {
            (self.width, self.height)
        }
    }

    pub fn longer_side(&self) -> u64 {
        self.width.max(self.height)
    }
}

pub fn total_area(items: &[Item]) -> u64 {
    items.iter().map(Item::area).sum()
}

pub fn total_profit(items: &[Item]) -> u64 {
    items.iter().map(|i| i.profit).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    #[serde(rename = "id")]
    pub item: ItemId,
    pub x: u64,
    pub y: u64,
    #[serde(default)]
    pub rotated: bool,
}

impl Placement {
    pub fn new(item: ItemId, x: u64, y: u64) -> Self {
        Placement {
            item,
            x,
            y,
            rotated: false,
        }
    }

    pub fn rotated(mut self, rotated: bool) -> Self {
        self.rotated = rotated;
        self
    }
}

/// Axis-aligned rectangle `[x, x + w] × [y, y + h]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub x: u64,
    pub y: u64,
    pub w: u64,
    pub h: u64,
}

impl Rect {
    pub fn new(x: u64, y: u64, w: u64, h: u64) -> Self {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> u64 {
        self.x + self.w
    }

    pub fn top(&self) -> u64 {
        self.y + self.h
    }

    pub fn area(&self) -> u64 {
        self.w * self.h
    }

    pub fn contains(&self, other: &Rect) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.right() <= self.right()
            && other.top() <= self.top()
    }

    /// Intersection of the interiors, if non-empty.
    pub fn interior_overlap(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x.max(other.x);
        let x1 = self.right().min(other.right());
        let y0 = self.y.max(other.y);
        let y1 = self.top().min(other.top());
        (x0 < x1 && y0 < y1).then(|| Rect::new(x0, y0, x1 - x0, y1 - y0))
    }
}

/// Target region of a packing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region {
    /// A `w × h` box anchored at the origin.
    Rect { w: u64, h: u64 },
    /// A strip of width `w` and unbounded height.
    Strip { w: u64 },
    /// `([0,n]×[0,h_l]) ∪ ([0,w_l]×[0,n])`.
    L {
        n: u64,
        #[serde(rename = "wL")]
        w_l: u64,
        #[serde(rename = "hL")]
        h_l: u64,
    },
}

impl Region {
    pub fn contains(&self, r: &Rect) -> bool {
        match *self {
            Region::Rect { w, h } => Rect::new(0, 0, w, h).contains(r),
            Region::Strip { w } => r.right() <= w,
            Region::L { n, w_l, h_l } => {
                Rect::new(0, 0, n, h_l).contains(r) || Rect::new(0, 0, w_l, n).contains(r)
            }
        }
    }

    /// Bounding box of the region; `None` for an unbounded strip.
    pub fn bounds(&self) -> Option<(u64, u64)> {
        match *self {
            Region::Rect { w, h } => Some((w, h)),
            Region::Strip { .. } => None,
            Region::L { n, .. } => Some((n, n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub region: Region,
    pub placements: Vec<Placement>,
}

impl Packing {
    pub fn empty(region: Region) -> Self {
        Packing {
            region,
            placements: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    /// Total profit of the placed items; unknown ids contribute nothing.
    pub fn profit(&self, items: &[Item]) -> u64 {
        let by_id = index_items(items);
        self.placements
            .iter()
            .filter_map(|p| by_id.get(&p.item))
            .map(|i| i.profit)
            .sum()
    }

    /// Highest top edge over all placements (0 when empty).
    pub fn height(&self, items: &[Item]) -> u64 {
        self.rects(items).iter().map(Rect::top).max().unwrap_or(0)
    }

    /// Occupied rectangles, skipping unknown ids.
    pub fn rects(&self, items: &[Item]) -> Vec<Rect> {
        let by_id = index_items(items);
        self.placements
            .iter()
            .filter_map(|p| {
                by_id.get(&p.item).map(|i| {
                    let (w, h) = i.dims(p.rotated);
                    Rect::new(p.x, p.y, w, h)
                })
            })
            .collect()
    }

    pub fn placed_ids(&self) -> Vec<ItemId> {
        self.placements.iter().map(|p| p.item).collect()
    }

    /// Translate every placement by `(dx, dy)`.
    pub fn shifted(mut self, dx: u64, dy: u64) -> Self {
        for p in &mut self.placements {
            p.x += dx;
            p.y += dy;
        }
        self
    }
}

pub(crate) fn index_items(items: &[Item]) -> HashMap<ItemId, &Item> {
    items.iter().map(|i| (i.id, i)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Weighted,
    Cardinality,
}

/// Square `N × N` knapsack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackInstance {
    pub side: u64,
    pub items: Vec<Item>,
    pub mode: Mode,
    pub rotations: bool,
}

impl KnapsackInstance {
    pub fn new(side: u64, items: Vec<Item>) -> Result<Self> {
        Self::with_options(side, items, Mode::Weighted, false)
    }

    pub fn with_options(side: u64, items: Vec<Item>, mode: Mode, rotations: bool) -> Result<Self> {
        if side == 0 {
            return Err(Error::invalid("knapsack side must be positive"));
        }
        check_items(&items)?;
        for it in &items {
            if it.width > side || it.height > side {
                return Err(Error::ItemTooLarge(it.id));
            }
            if mode == Mode::Cardinality && it.profit != 1 {
                return Err(Error::Invalid(format!(
                    "item {} has profit {} in cardinality mode",
                    it.id, it.profit
                )));
            }
        }
        Ok(KnapsackInstance {
            side,
            items,
            mode,
            rotations,
        })
    }

    pub fn region(&self) -> Region {
        Region::Rect {
            w: self.side,
            h: self.side,
        }
    }

    /// Whether the item may be placed rotated in this instance.
    pub fn may_rotate(&self, item: &Item) -> bool {
        self.rotations && item.rotatable
    }
}

/// Strip of width `W`; the objective is the packing height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripInstance {
    pub width: u64,
    pub items: Vec<Item>,
}

impl StripInstance {
    pub fn new(width: u64, items: Vec<Item>) -> Result<Self> {
        if width == 0 {
            return Err(Error::invalid("strip width must be positive"));
        }
        check_items(&items)?;
        if let Some(it) = items.iter().find(|i| i.width > width) {
            return Err(Error::ItemTooLarge(it.id));
        }
        Ok(StripInstance { width, items })
    }

    pub fn region(&self) -> Region {
        Region::Strip { w: self.width }
    }

    pub fn max_height(&self) -> u64 {
        self.items.iter().map(|i| i.height).max().unwrap_or(0)
    }

    /// `max(ceil(a/W), h_max)`.
    pub fn lower_bound(&self) -> u64 {
        total_area(&self.items)
            .div_ceil(self.width)
            .max(self.max_height())
    }
}

/// Which arm of the L an item belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arm {
    Horizontal,
    Vertical,
}

/// Boundary-L instance: horizontal items (width > N/2) go to the bottom arm,
/// vertical items (height > N/2) to the left arm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInstance {
    pub side: u64,
    pub w_l: u64,
    pub h_l: u64,
    pub horizontal: Vec<Item>,
    pub vertical: Vec<Item>,
}

impl LInstance {
    /// Splits `items` into arms. An item with both sides longer than `N/2`
    /// goes to the arm of its longer side (horizontal on ties).
    pub fn new(side: u64, w_l: u64, h_l: u64, items: Vec<Item>) -> Result<Self> {
        if side == 0 {
            return Err(Error::invalid("L side must be positive"));
        }
        if w_l > side || h_l > side {
            return Err(Error::invalid("L arm widths must not exceed N"));
        }
        check_items(&items)?;
        let mut horizontal = Vec::new();
        let mut vertical = Vec::new();
        for it in items {
            match Self::arm_of(side, &it) {
                Some(Arm::Horizontal) => horizontal.push(it),
                Some(Arm::Vertical) => vertical.push(it),
                None => {
                    return Err(Error::Invalid(format!(
                        "item {} has no side longer than N/2",
                        it.id
                    )))
                }
            }
        }
        Ok(LInstance {
            side,
            w_l,
            h_l,
            horizontal,
            vertical,
        })
    }

    pub fn arm_of(side: u64, it: &Item) -> Option<Arm> {
        let hor = 2 * it.width > side && it.width <= side;
        let ver = 2 * it.height > side && it.height <= side;
        match (hor, ver) {
            (true, true) if it.height > it.width => Some(Arm::Vertical),
            (true, _) => Some(Arm::Horizontal),
            (false, true) => Some(Arm::Vertical),
            (false, false) => None,
        }
    }

    pub fn region(&self) -> Region {
        Region::L {
            n: self.side,
            w_l: self.w_l,
            h_l: self.h_l,
        }
    }

    pub fn items(&self) -> Vec<Item> {
        self.horizontal
            .iter()
            .chain(self.vertical.iter())
            .copied()
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Knapsack(KnapsackInstance),
    Strip(StripInstance),
    L(LInstance),
}

impl Instance {
    pub fn items(&self) -> Vec<Item> {
        match self {
            Instance::Knapsack(k) => k.items.clone(),
            Instance::Strip(s) => s.items.clone(),
            Instance::L(l) => l.items(),
        }
    }

    pub fn region(&self) -> Region {
        match self {
            Instance::Knapsack(k) => k.region(),
            Instance::Strip(s) => s.region(),
            Instance::L(l) => l.region(),
        }
    }

    pub fn rotations(&self) -> bool {
        match self {
            Instance::Knapsack(k) => k.rotations,
            _ => false,
        }
    }
}

impl From<KnapsackInstance> for Instance {
    fn from(k: KnapsackInstance) -> Self {
        Instance::Knapsack(k)
    }
}

impl From<StripInstance> for Instance {
    fn from(s: StripInstance) -> Self {
        Instance::Strip(s)
    }
}

impl From<LInstance> for Instance {
    fn from(l: LInstance) -> Self {
        Instance::L(l)
    }
}

fn check_items(items: &[Item]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for it in items {
        if it.width == 0 || it.height == 0 {
            return Err(Error::ZeroDimension(it.id));
        }
        if !seen.insert(it.id) {
            return Err(Error::DuplicateId(it.id));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_region_containment_is_union_of_arms() {
        let l = Region::L { n: 10, w_l: 3, h_l: 2 };
        assert!(l.contains(&Rect::new(4, 0, 6, 2)));
        assert!(l.contains(&Rect::new(0, 4, 3, 6)));
        assert!(l.contains(&Rect::new(0, 0, 3, 10)));
        assert!(!l.contains(&Rect::new(2, 1, 3, 3)));
        assert!(!l.contains(&Rect::new(0, 0, 4, 3)));
    }

    #[test]
    fn zero_dimension_rejected() {
        let err = KnapsackInstance::new(10, vec![Item::new(1, 0, 5, 1)]).unwrap_err();
        assert!(matches!(err, Error::ZeroDimension(ItemId(1))));
    }

    #[test]
    fn arms() {
        assert_eq!(LInstance::arm_of(10, &Item::new(0, 6, 2, 1)), Some(Arm::Horizontal));
        assert_eq!(LInstance::arm_of(10, &Item::new(0, 2, 6, 1)), Some(Arm::Vertical));
        assert_eq!(LInstance::arm_of(10, &Item::new(0, 6, 7, 1)), Some(Arm::Vertical));
        assert_eq!(LInstance::arm_of(10, &Item::new(0, 5, 5, 1)), None);
    }

    #[test]
    fn strip_lower_bound() {
        let s = StripInstance::new(10, vec![Item::new(0, 6, 2, 1), Item::new(1, 6, 2, 1)]).unwrap();
        assert_eq!(s.lower_bound(), 3);
    }
}
