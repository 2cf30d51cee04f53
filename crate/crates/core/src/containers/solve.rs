//! Assigning items to a fixed layout through GAP, and realizing the result.

use std::cmp::Ordering;
use std::collections::HashSet;

use super::candidate::{heights, widths};
use super::layout::{Container, ContainerKind, Layout};
use crate::error::{Error, Result};
use crate::gap::{gap_exact_dp, gap_ptas, GapInstance, DEFAULT_BUDGET};
use crate::model::{Eps, Item, KnapsackInstance, Packing, Placement, Region};
use crate::nfdh::{fits_scaled, nfdh_box_raw};

/// Items enumerated per bin by the GAP PTAS unless told otherwise.
pub const DEFAULT_GUESS_CAP: usize = 2;

/// An item in the orientation it is packed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oriented {
    /// Copy of the item with width and height swapped when rotated.
    pub item: Item,
    pub rotated: bool,
}

impl Oriented {
    fn new(item: &Item, rotated: bool) -> Self {
        let (width, height) = item.dims(rotated);
        Oriented {
            item: Item {
                width,
                height,
                ..*item
            },
            rotated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutSolution {
    pub packing: Packing,
    pub profit: u64,
    /// Profit of the GAP assignment before realization.
    pub assigned_profit: u64,
    /// Whether the GAP step carries its approximation guarantee.
    pub guarantee: bool,
}

/// Size of `item` in `container` and whether it is rotated there.
fn element_size(item: &Item, container: &Container, may_rotate: bool) -> Option<(u64, bool)> {
    let (a, b) = (container.rect.w, container.rect.h);
    match container.kind {
        ContainerKind::Horizontal => {
            let plain = (item.width <= a && item.height <= b).then_some((item.height, false));
            let turned = (may_rotate && item.height <= a && item.width <= b).then_some((item.width, true));
            best_size(plain, turned)
        }
        ContainerKind::Vertical => {
            let plain = (item.height <= b && item.width <= a).then_some((item.width, false));
            let turned = (may_rotate && item.width <= b && item.height <= a).then_some((item.height, true));
            best_size(plain, turned)
        }
        ContainerKind::Area(e) => {
            if fits_scaled(item.width, a, e) && fits_scaled(item.height, b, e) {
                Some((item.area(), false))
            } else if may_rotate && fits_scaled(item.height, a, e) && fits_scaled(item.width, b, e) {
                Some((item.area(), true))
            } else {
                None
            }
        }
    }
}

fn best_size(plain: Option<(u64, bool)>, turned: Option<(u64, bool)>) -> Option<(u64, bool)> {
    match (plain, turned) {
        (Some(p), Some(t)) if t.0 < p.0 => Some(t),
        (Some(p), _) => Some(p),
        (None, t) => t,
    }
}

/// The GAP instance of a layout: one bin per container, one element per item.
/// Also returns the orientation each (element, bin) pair would use.
pub fn layout_gap(items: &[Item], rotations: bool, layout: &Layout) -> (GapInstance, Vec<Vec<bool>>) {
    let mut gap = GapInstance::new(layout.containers.iter().map(Container::capacity).collect());
    let mut orient = Vec::with_capacity(items.len());
    for it in items {
        let may_rotate = rotations && it.rotatable;
        let entries: Vec<Option<(u64, bool)>> = layout
            .containers
            .iter()
            .map(|c| element_size(it, c, may_rotate))
            .collect();
        gap.push(
            entries.iter().map(|e| e.map(|(s, _)| s)).collect(),
            vec![it.profit; layout.len()],
        );
        orient.push(entries.iter().map(|e| e.is_some_and(|(_, r)| r)).collect());
    }
    (gap, orient)
}

/// How the GAP step is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapMode {
    Exact { budget: u128 },
    Ptas { eps: Eps, guess_cap: usize, budget: u128 },
}

/// Contents of each container after the GAP step, oriented.
pub(crate) struct Assigned {
    pub contents: Vec<Vec<Oriented>>,
    pub profit: u64,
    pub guarantee: bool,
}

pub(crate) fn assign(items: &[Item], rotations: bool, layout: &Layout, mode: GapMode) -> Result<Assigned> {
    let mut contents = vec![Vec::new(); layout.len()];
    if layout.is_empty() || items.is_empty() {
        return Ok(Assigned {
            contents,
            profit: 0,
            guarantee: true,
        });
    }
    let (gap, orient) = layout_gap(items, rotations, layout);
    let (assignment, guarantee) = match mode {
        GapMode::Exact { budget } => (gap_exact_dp(&gap, budget)?, true),
        GapMode::Ptas { eps, guess_cap, budget } => {
            let out = gap_ptas(&gap, eps, guess_cap, budget)?;
            (out.assignment, out.guarantee)
        }
    };
    for (i, j) in assignment.assigned() {
        contents[j].push(Oriented::new(&items[i], orient[i][j]));
    }
    Ok(Assigned {
        contents,
        profit: assignment.profit,
        guarantee,
    })
}

/// Places oriented items in a container: stacked, side by side, or via
/// [`pack_area_container`].
pub(crate) fn realize_container(container: &Container, contents: &[Oriented]) -> Result<Vec<Placement>> {
    let r = container.rect;
    let mut out = Vec::with_capacity(contents.len());
    match container.kind {
        ContainerKind::Horizontal => {
            let mut y = r.y;
            for o in contents {
                out.push(Placement::new(o.item.id, r.x, y).rotated(o.rotated));
                y += o.item.height;
            }
        }
        ContainerKind::Vertical => {
            let mut x = r.x;
            for o in contents {
                out.push(Placement::new(o.item.id, x, r.y).rotated(o.rotated));
                x += o.item.width;
            }
        }
        ContainerKind::Area(e) => {
            let items: Vec<Item> = contents.iter().map(|o| o.item).collect();
            let packing = pack_area_container(&items, r.w, r.h, e)?;
            for p in packing.placements {
                let rotated = contents.iter().find(|o| o.item.id == p.item).is_some_and(|o| o.rotated);
                out.push(Placement::new(p.item, p.x + r.x, p.y + r.y).rotated(rotated));
            }
        }
    }
    Ok(out)
}

fn solve_items(items: &[Item], rotations: bool, region: Region, layout: &Layout, mode: GapMode) -> Result<LayoutSolution> {
    layout.check(&region)?;
    let assigned = assign(items, rotations, layout, mode)?;
    let mut placements = Vec::new();
    for (c, contents) in layout.containers.iter().zip(&assigned.contents) {
        placements.extend(realize_container(c, contents)?);
    }
    let packing = Packing { region, placements };
    Ok(LayoutSolution {
        profit: packing.profit(items),
        packing,
        assigned_profit: assigned.profit,
        guarantee: assigned.guarantee,
    })
}

/// Near-optimal packing of `instance` into the containers of `layout`, with
/// the GAP step solved by the PTAS.
pub fn solve_for_layout(instance: &KnapsackInstance, layout: &Layout, eps: Eps) -> Result<LayoutSolution> {
    solve_for_layout_with(
        instance,
        layout,
        GapMode::Ptas {
            eps,
            guess_cap: DEFAULT_GUESS_CAP,
            budget: DEFAULT_BUDGET,
        },
    )
}

/// Optimal assignment into `layout` through the exact GAP DP.
pub fn solve_for_layout_exact(instance: &KnapsackInstance, layout: &Layout) -> Result<LayoutSolution> {
    solve_for_layout_with(instance, layout, GapMode::Exact { budget: DEFAULT_BUDGET })
}

pub fn solve_for_layout_with(instance: &KnapsackInstance, layout: &Layout, mode: GapMode) -> Result<LayoutSolution> {
    solve_items(&instance.items, instance.rotations, instance.region(), layout, mode)
}

/// Same as [`solve_for_layout_with`] for an arbitrary item list and region.
pub fn solve_items_for_layout(
    items: &[Item],
    rotations: bool,
    region: Region,
    layout: &Layout,
    mode: GapMode,
) -> Result<LayoutSolution> {
    solve_items(items, rotations, region, layout, mode)
}

fn density_order(a: &Item, b: &Item) -> Ordering {
    let lhs = a.profit as u128 * b.area() as u128;
    let rhs = b.profit as u128 * a.area() as u128;
    rhs.cmp(&lhs).then(a.id.cmp(&b.id))
}

/// Packs a high-profit subset of ε-small items into a `w × h` area container:
/// the longest prefix in profit/area order with area at most `(1−2ε)·w·h`,
/// then NFDH. If NFDH on the whole set does better, that packing is kept.
pub fn pack_area_container(items: &[Item], w: u64, h: u64, eps: Eps) -> Result<Packing> {
    for it in items {
        if !fits_scaled(it.width, w, eps) || !fits_scaled(it.height, h, eps) {
            return Err(Error::precondition(it.id, format!("not {eps}-small for a {w}x{h} container")));
        }
    }
    let region = Region::Rect { w, h };
    let (all, _) = nfdh_box_raw(items, w, h);
    if all.len() == items.len() {
        return Ok(Packing { region, placements: all });
    }
    let mut order = items.to_vec();
    order.sort_by(density_order);
    let (num, den) = (*eps.numer() as i128, *eps.denom() as i128);
    let limit = (den - 2 * num).max(0) * (w as i128) * (h as i128);
    let mut used = 0i128;
    let mut prefix = Vec::new();
    for it in order {
        let next = used + it.area() as i128;
        if next * den > limit {
            break;
        }
        used = next;
        prefix.push(it);
    }
    let (chosen, _) = nfdh_box_raw(&prefix, w, h);
    let profit = |ps: &[Placement]| -> u64 {
        let ids: HashSet<_> = ps.iter().map(|p| p.item).collect();
        items.iter().filter(|i| ids.contains(&i.id)).map(|i| i.profit).sum()
    };
    let placements = if profit(&chosen) >= profit(&all) { chosen } else { all };
    Ok(Packing { region, placements })
}

/// Shrinks a container to a size from the candidate sets of its contents,
/// dropping little profit. `items` are oriented as packed.
///
/// Horizontal and vertical containers keep all items when there are at most
/// `⌈1/ε⌉`; otherwise the cheapest of the `⌈1/ε⌉` longest (along the
/// stacking direction) is dropped and the stacking length becomes their sum
/// plus a multiple of the dropped length. Area containers shrink to multiples
/// of the largest width and height and keep a greedy profit/area prefix.
pub fn round_container(container: &Container, items: &[Item], eps: Eps) -> Result<(Container, Vec<Item>)> {
    if eps <= Eps::new(0, 1) || eps >= Eps::new(1, 1) {
        return Err(Error::invalid("eps must lie in (0, 1)"));
    }
    let r = container.rect;
    if items.is_empty() {
        return Ok((Container::new(container.kind, r.x, r.y, 0, 0), Vec::new()));
    }
    let m = eps.recip().ceil().to_integer() as usize;
    match container.kind {
        ContainerKind::Horizontal | ContainerKind::Vertical => {
            let horizontal = container.kind == ContainerKind::Horizontal;
            let along = |i: &Item| if horizontal { i.height } else { i.width };
            let across = |i: &Item| if horizontal { i.width } else { i.height };
            let cross = items.iter().map(across).max().unwrap_or(0);
            let (kept, length) = if items.len() <= m {
                (items.to_vec(), items.iter().map(along).sum::<u64>())
            } else {
                let mut sorted = items.to_vec();
                sorted.sort_by(|a, b| along(b).cmp(&along(a)).then(a.id.cmp(&b.id)));
                let (tall, rest) = sorted.split_at(m);
                let drop = *tall
                    .iter()
                    .min_by(|a, b| a.profit.cmp(&b.profit).then(a.id.cmp(&b.id)))
                    .expect("m >= 1");
                let unit = along(&drop);
                let i = rest.iter().map(along).sum::<u64>().div_ceil(unit);
                // The dropped item's slot is absorbed by the rounding term.
                let length = tall.iter().map(along).sum::<u64>() - unit + i * unit;
                let kept = items.iter().filter(|it| it.id != drop.id).copied().collect();
                (kept, length)
            };
            let (w, h) = if horizontal { (cross, length) } else { (length, cross) };
            Ok((Container::new(container.kind, r.x, r.y, w, h), kept))
        }
        ContainerKind::Area(_) => {
            for it in items {
                if !fits_scaled(it.width, r.w, eps) || !fits_scaled(it.height, r.h, eps) {
                    return Err(Error::precondition(it.id, format!("not {eps}-small for the container")));
                }
            }
            let n = items.len() as u64;
            let w_max = widths(items).last().copied().expect("non-empty");
            let h_max = heights(items).last().copied().expect("non-empty");
            let w = r.w.min(n * w_max) / w_max * w_max;
            let h = r.h.min(n * h_max) / h_max * h_max;
            let mut order = items.to_vec();
            order.sort_by(density_order);
            let (num, den) = (*eps.numer() as i128, *eps.denom() as i128);
            let limit = (den - 2 * num).max(0) * r.area() as i128;
            let mut used = 0i128;
            let mut kept = Vec::new();
            for it in order {
                let next = used + it.area() as i128;
                if next * den > limit {
                    break;
                }
                used = next;
                kept.push(it);
            }
            if kept.len() < items.len() && (items.iter().map(Item::area).sum::<u64>() as i128) * den <= limit {
                kept = items.to_vec();
            }
            Ok((Container::new(container.kind, r.x, r.y, w, h), kept))
        }
    }
}

/// Upper bound on what `layout` can hold: the profit of items that fit some
/// container in some permitted orientation.
pub fn layout_upper_bound(items: &[Item], rotations: bool, layout: &Layout) -> u64 {
    items
        .iter()
        .filter(|it| {
            layout
                .containers
                .iter()
                .any(|c| element_size(it, c, rotations && it.rotatable).is_some_and(|(s, _)| s <= c.capacity()))
        })
        .map(|it| it.profit)
        .sum()
}
