//! Feasibility checking for packings.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{index_items, Instance, ItemId, Packing, Rect};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutOfRegion { item: ItemId, rect: Rect },
    Duplicate { item: ItemId },
    /// `overlap` is the intersection of the two interiors.
    Overlap { a: ItemId, b: ItemId, overlap: Rect },
    IllegalRotation { item: ItemId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a packing against an instance. Every violation is listed; an
/// unknown item id is a structural error rather than a violation.
pub fn validate_packing(instance: &Instance, packing: &Packing) -> Result<ValidationReport> {
    let items = instance.items();
    let by_id = index_items(&items);
    let region = instance.region();
    let mut report = ValidationReport::default();
    let mut seen = HashSet::new();
    let mut rects = Vec::with_capacity(packing.placements.len());

    for p in &packing.placements {
        let item = by_id.get(&p.item).ok_or(Error::UnknownItem(p.item))?;
        if !seen.insert(p.item) {
            report.violations.push(Violation::Duplicate { item: p.item });
            continue;
        }
        if p.rotated && !(instance.rotations() && item.rotatable) {
            report
                .violations
                .push(Violation::IllegalRotation { item: p.item });
        }
        let (w, h) = item.dims(p.rotated);
        let rect = Rect::new(p.x, p.y, w, h);
        if !region.contains(&rect) || !packing.region.contains(&rect) {
            report
                .violations
                .push(Violation::OutOfRegion { item: p.item, rect });
        }
        rects.push((p.item, rect));
    }

    // Sweep on x so the common sparse case stays near-linear.
    rects.sort_by_key(|(id, r)| (r.x, *id));
    for (i, (a, ra)) in rects.iter().enumerate() {
        for (b, rb) in &rects[i + 1..] {
            if rb.x >= ra.right() {
                break;
            }
            if let Some(overlap) = ra.interior_overlap(rb) {
                let (a, b) = if a < b { (*a, *b) } else { (*b, *a) };
                report.violations.push(Violation::Overlap { a, b, overlap });
            }
        }
    }
    Ok(report)
}
