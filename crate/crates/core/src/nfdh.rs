//! Shelf packing: Next-Fit and First-Fit Decreasing Height.
//!
//! Items are taken in non-increasing height order (ties: wider first, then
//! smaller id). A shelf's height is the height of its first item; items on a
//! shelf sit left to right on its baseline. Rotations are never applied here.

use crate::error::{Error, Result};
use crate::model::{Eps, Item, Packing, Placement, Region};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shelf {
    pub baseline: u64,
    pub height: u64,
    pub used_width: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripPacking {
    pub packing: Packing,
    pub height: u64,
}

/// Items sorted by the shelf order used throughout this module.
pub fn shelf_order(items: &[Item]) -> Vec<Item> {
    let mut sorted = items.to_vec();
    sorted.sort_by(|a, b| {
        b.height
            .cmp(&a.height)
            .then(b.width.cmp(&a.width))
            .then(a.id.cmp(&b.id))
    });
    sorted
}

/// NFDH inside a `box_w × box_h` box without any size precondition. Returns
/// the placements and the items that did not fit (in shelf order). Stops at
/// the first item that fits neither on the current shelf nor on a new one.
pub(crate) fn nfdh_box_raw(items: &[Item], box_w: u64, box_h: u64) -> (Vec<Placement>, Vec<Item>) {
    let sorted = shelf_order(items);
    let mut placements = Vec::with_capacity(sorted.len());
    let mut shelf: Option<Shelf> = None;
    for (idx, it) in sorted.iter().enumerate() {
        if it.width > box_w || it.height > box_h {
            return (placements, sorted[idx..].to_vec());
        }
        let fits_current = shelf
            .as_ref()
            .is_some_and(|s| s.used_width + it.width <= box_w);
        if !fits_current {
            let baseline = shelf.as_ref().map_or(0, |s| s.baseline + s.height);
            if baseline + it.height > box_h {
                return (placements, sorted[idx..].to_vec());
            }
            shelf = Some(Shelf {
                baseline,
                height: it.height,
                used_width: 0,
            });
        }
        let s = shelf.as_mut().expect("shelf opened above");
        placements.push(Placement::new(it.id, s.used_width, s.baseline));
        s.used_width += it.width;
    }
    (placements, Vec::new())
}

/// NFDH in a box for ε-small items (`w_i ≤ ε·box_w`, `h_i ≤ ε·box_h`).
/// Packs area at least `min{a(items), (1−2ε)·box_w·box_h}`.
pub fn nfdh_pack_box(
    items: &[Item],
    box_w: u64,
    box_h: u64,
    eps: Eps,
) -> Result<(Packing, Vec<Item>)> {
    for it in items {
        if !fits_scaled(it.width, box_w, eps) || !fits_scaled(it.height, box_h, eps) {
            return Err(Error::precondition(
                it.id,
                format!("not {eps}-small for a {box_w}x{box_h} box"),
            ));
        }
    }
    let (placements, leftover) = nfdh_box_raw(items, box_w, box_h);
    Ok((
        Packing {
            region: Region::Rect { w: box_w, h: box_h },
            placements,
        },
        leftover,
    ))
}

/// `len ≤ eps·total`, exactly.
pub(crate) fn fits_scaled(len: u64, total: u64, eps: Eps) -> bool {
    (len as i128) * (*eps.denom() as i128) <= (*eps.numer() as i128) * (total as i128)
}

fn check_strip(items: &[Item], width: u64) -> Result<()> {
    match items.iter().find(|i| i.width > width) {
        Some(it) => Err(Error::precondition(it.id, format!("wider than the strip ({width})"))),
        None => Ok(()),
    }
}

/// NFDH for strip packing; height is at most `h_max + 2a/W`.
pub fn nfdh_strip(items: &[Item], width: u64) -> Result<StripPacking> {
    check_strip(items, width)?;
    let (placements, leftover) = nfdh_box_raw(items, width, u64::MAX / 4);
    debug_assert!(leftover.is_empty());
    Ok(finish_strip(placements, items, width))
}

/// FFDH: each item goes to the lowest shelf with room, a new shelf otherwise.
pub fn ffdh_strip(items: &[Item], width: u64) -> Result<StripPacking> {
    check_strip(items, width)?;
    let mut shelves: Vec<Shelf> = Vec::new();
    let mut placements = Vec::with_capacity(items.len());
    for it in shelf_order(items) {
        let slot = shelves.iter().position(|s| s.used_width + it.width <= width);
        let s = match slot {
            Some(i) => &mut shelves[i],
            None => {
                let baseline = shelves.last().map_or(0, |s| s.baseline + s.height);
                shelves.push(Shelf {
                    baseline,
                    height: it.height,
                    used_width: 0,
                });
                shelves.last_mut().expect("just pushed")
            }
        };
        placements.push(Placement::new(it.id, s.used_width, s.baseline));
        s.used_width += it.width;
    }
    Ok(finish_strip(placements, items, width))
}

fn finish_strip(placements: Vec<Placement>, items: &[Item], width: u64) -> StripPacking {
    let packing = Packing {
        region: Region::Strip { w: width },
        placements,
    };
    let height = packing.height(items);
    StripPacking { packing, height }
}
