//! Strip packing: fixed-layout container solve, a portfolio over the
//! heuristics, and an exact oracle for tiny instances.

use crate::containers::candidate::sizes;
use crate::containers::solve::{assign, realize_container};
use crate::containers::{enumerate_layouts, expand_candidate_set_capped, ContainerKind, GapMode, Layout};
use crate::error::{Error, Result};
use crate::gap::DEFAULT_BUDGET;
use crate::model::{Eps, Item, Packing, Placement, Rect, Region, StripInstance};
use crate::nfdh::{ffdh_strip, nfdh_box_raw, nfdh_strip, StripPacking};
use crate::oracle::{pack_all, DEFAULT_NODES};
use crate::steinberg::steinberg_strip;

/// Packs every item of the strip instance into the containers of `layout`,
/// or reports `None` when the exact GAP cannot place them all. The layout
/// must lie in `[0, W] × [0, H]` with `H` its highest container top.
///
/// Area containers may grow to `⌊(1+2ε)·h⌋` so NFDH fits their contents;
/// everything above a grown container moves up by the same amount.
pub fn solve_strip_container(instance: &StripInstance, layout: &Layout, eps: Eps) -> Result<Option<StripPacking>> {
    solve_strip_container_with(instance, layout, eps, DEFAULT_BUDGET)
}

pub fn solve_strip_container_with(
    instance: &StripInstance,
    layout: &Layout,
    eps: Eps,
    budget: u128,
) -> Result<Option<StripPacking>> {
    if eps <= Eps::new(0, 1) {
        return Err(Error::invalid("eps must be positive"));
    }
    let width = instance.width;
    let strip = Region::Strip { w: width };
    let top = layout.containers.iter().map(|c| c.rect.top()).max().unwrap_or(0);
    if instance.items.is_empty() {
        return Ok(Some(StripPacking {
            packing: Packing::empty(strip),
            height: 0,
        }));
    }
    layout.check(&Region::Rect { w: width, h: top })?;
    // Count every item once; the strip needs all of them.
    let unit: Vec<Item> = instance.items.iter().map(|i| Item { profit: 1, ..*i }).collect();
    let assigned = assign(&unit, false, layout, GapMode::Exact { budget })?;
    if assigned.profit < unit.len() as u64 {
        return Ok(None);
    }

    let mut grown = Vec::with_capacity(layout.len());
    let mut placed = Vec::with_capacity(layout.len());
    for (c, contents) in layout.containers.iter().zip(&assigned.contents) {
        let (h, placements) = match c.kind {
            ContainerKind::Area(_) => {
                let r = c.rect;
                let items: Vec<Item> = contents.iter().map(|o| o.item).collect();
                let cap = (Eps::from_integer(1) + eps * 2) * r.h as i64;
                let cap = cap.floor().to_integer() as u64;
                let (ps, left) = nfdh_box_raw(&items, r.w, cap);
                if !left.is_empty() {
                    return Ok(None);
                }
                let used = ps.iter().map(|p| p.y + item_height(&items, p)).max().unwrap_or(0);
                let ps = ps.into_iter().map(|p| Placement::new(p.item, p.x + r.x, p.y + r.y)).collect();
                (used.max(r.h), ps)
            }
            _ => (c.rect.h, realize_container(c, contents)?),
        };
        grown.push(h);
        placed.push(placements);
    }

    // Lift containers so grown ones keep clear of those above them.
    let mut order: Vec<usize> = (0..layout.len()).collect();
    order.sort_by_key(|&i| (layout.containers[i].rect.y, i));
    let mut new_y = vec![0u64; layout.len()];
    for (k, &i) in order.iter().enumerate() {
        let ci = layout.containers[i].rect;
        new_y[i] = order[..k]
            .iter()
            .filter(|&&j| {
                let cj = layout.containers[j].rect;
                cj.x < ci.right() && ci.x < cj.right() && cj.top() <= ci.y
            })
            .map(|&j| new_y[j] + grown[j])
            .fold(ci.y, u64::max);
    }
    let mut placements = Vec::with_capacity(instance.items.len());
    for (i, ps) in placed.into_iter().enumerate() {
        let dy = new_y[i] - layout.containers[i].rect.y;
        placements.extend(ps.into_iter().map(|p| Placement { y: p.y + dy, ..p }));
    }
    let packing = Packing {
        region: strip,
        placements,
    };
    let height = packing.height(&instance.items);
    Ok(Some(StripPacking { packing, height }))
}

fn item_height(items: &[Item], p: &Placement) -> u64 {
    items.iter().find(|i| i.id == p.item).map_or(0, |i| i.height)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StripMethod {
    Nfdh,
    Ffdh,
    Steinberg,
    Containers,
}

impl StripMethod {
    pub const ALL: [StripMethod; 4] = [
        StripMethod::Nfdh,
        StripMethod::Ffdh,
        StripMethod::Steinberg,
        StripMethod::Containers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StripMethod::Nfdh => "nfdh",
            StripMethod::Ffdh => "ffdh",
            StripMethod::Steinberg => "steinberg",
            StripMethod::Containers => "containers",
        }
    }
}

/// Container layout search below the best heuristic height.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayoutProbe {
    pub k_max: usize,
    pub eps: Eps,
    /// Layouts tried in total.
    pub budget: u64,
}

impl Default for LayoutProbe {
    fn default() -> Self {
        LayoutProbe {
            k_max: 2,
            eps: Eps::new(1, 4),
            budget: 2_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StripOptions {
    pub nfdh: bool,
    pub ffdh: bool,
    pub steinberg: bool,
    pub probe: Option<LayoutProbe>,
}

impl Default for StripOptions {
    fn default() -> Self {
        StripOptions {
            nfdh: true,
            ffdh: true,
            steinberg: true,
            probe: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripResult {
    pub result: StripPacking,
    pub method: StripMethod,
    /// Whether the layout probe stopped on its budget.
    pub probe_exhausted: bool,
}

/// Lowest packing over the enabled methods; ties go to the earlier method in
/// [`StripMethod::ALL`]. With every method disabled NFDH still runs.
pub fn solve_strip_best(instance: &StripInstance, options: &StripOptions) -> Result<StripResult> {
    let items = &instance.items;
    let w = instance.width;
    let mut best: Option<(StripPacking, StripMethod)> = None;
    let offer = |p: StripPacking, m: StripMethod, best: &mut Option<(StripPacking, StripMethod)>| {
        if best.as_ref().is_none_or(|(b, _)| p.height < b.height) {
            *best = Some((p, m));
        }
    };
    let any = options.nfdh || options.ffdh || options.steinberg;
    if options.nfdh || !any {
        offer(nfdh_strip(items, w)?, StripMethod::Nfdh, &mut best);
    }
    if options.ffdh {
        offer(ffdh_strip(items, w)?, StripMethod::Ffdh, &mut best);
    }
    if options.steinberg {
        offer(steinberg_strip(items, w)?, StripMethod::Steinberg, &mut best);
    }
    let mut probe_exhausted = false;
    if let Some(probe) = options.probe {
        let ceiling = best.as_ref().map(|(b, _)| b.height).unwrap_or(u64::MAX);
        let (found, exhausted) = probe_layouts(instance, probe, ceiling)?;
        probe_exhausted = exhausted;
        if let Some(p) = found {
            offer(p, StripMethod::Containers, &mut best);
        }
    }
    let (result, method) = best.expect("at least one method ran");
    Ok(StripResult {
        result,
        method,
        probe_exhausted,
    })
}

/// Tries heights from the lower bound up to `ceiling − 1`, returning the
/// first container packing found and whether the budget ran out.
fn probe_layouts(instance: &StripInstance, probe: LayoutProbe, ceiling: u64) -> Result<(Option<StripPacking>, bool)> {
    if instance.items.is_empty() {
        return Ok((None, false));
    }
    let w = instance.width;
    let mut left = probe.budget;
    for h in instance.lower_bound()..ceiling {
        let cap = w.max(h);
        let cand = expand_candidate_set_capped(&sizes(&instance.items), 2, instance.items.len() as u64, cap);
        let layouts = match enumerate_layouts(Rect::new(0, 0, w, h), probe.k_max, &cand, probe.eps, left) {
            Ok(l) => l,
            Err(e) if e.is_budget() => return Ok((None, true)),
            Err(e) => return Err(e),
        };
        for layout in layouts {
            if left == 0 {
                return Ok((None, true));
            }
            left -= 1;
            match solve_strip_container(instance, &layout, probe.eps) {
                Ok(Some(p)) if p.height < ceiling => return Ok((Some(p), false)),
                Ok(_) => {}
                Err(e) if e.is_budget() => return Ok((None, true)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok((None, false))
}

/// Exact minimum height by binary search over `H` with exhaustive placement.
pub fn brute_force_strip(instance: &StripInstance) -> Result<StripPacking> {
    brute_force_strip_with(instance, DEFAULT_NODES)
}

pub fn brute_force_strip_with(instance: &StripInstance, budget: u64) -> Result<StripPacking> {
    let items = &instance.items;
    let w = instance.width;
    let upper = nfdh_strip(items, w)?;
    let (mut lo, mut hi) = (instance.lower_bound(), upper.height);
    let mut best = upper.packing.placements;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match pack_all(items, w, mid, false, budget)? {
            Some(p) => {
                best = p;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let packing = Packing {
        region: Region::Strip { w },
        placements: best,
    };
    debug_assert!(packing.height(items) <= lo);
    Ok(StripPacking { height: lo, packing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::containers::Container;
    use crate::model::Instance;
    use crate::validate::validate_packing;

    fn strip(w: u64, dims: &[(u64, u64)]) -> StripInstance {
        let items = dims.iter().enumerate().map(|(i, &(a, b))| Item::new(i as u32, a, b, 1)).collect();
        StripInstance::new(w, items).unwrap()
    }

    fn clean(inst: &StripInstance, p: &StripPacking) {
        let i: Instance = inst.clone().into();
        assert!(validate_packing(&i, &p.packing).unwrap().is_feasible());
        assert_eq!(p.packing.len(), inst.items.len());
        assert!(p.packing.height(&inst.items) <= p.height);
    }

    #[test]
    fn brute_force_examples() {
        let s = strip(10, &[(10, 1), (10, 1), (10, 1)]);
        assert_eq!(brute_force_strip(&s).unwrap().height, 3);
        let s = strip(10, &[(6, 2), (6, 2)]);
        let b = brute_force_strip(&s).unwrap();
        assert_eq!(b.height, 4);
        clean(&s, &b);
    }

    #[test]
    fn vertical_container_packs_iff_widths_fit() {
        let s = strip(10, &[(3, 4), (3, 2), (4, 5)]);
        let layout = Layout::new(vec![Container::new(ContainerKind::Vertical, 0, 0, 10, 5)]);
        let p = solve_strip_container(&s, &layout, Eps::new(1, 4)).unwrap().unwrap();
        clean(&s, &p);
        assert_eq!(p.height, 5);
        let s = strip(10, &[(3, 4), (3, 2), (5, 5)]);
        assert!(solve_strip_container(&s, &layout, Eps::new(1, 4)).unwrap().is_none());
    }

    #[test]
    fn per_item_containers() {
        let s = strip(10, &[(6, 3), (4, 5), (10, 2)]);
        let layout = Layout::new(vec![
            Container::new(ContainerKind::Horizontal, 0, 0, 6, 3),
            Container::new(ContainerKind::Horizontal, 6, 0, 4, 5),
            Container::new(ContainerKind::Vertical, 0, 5, 10, 2),
        ]);
        let p = solve_strip_container(&s, &layout, Eps::new(1, 4)).unwrap().unwrap();
        clean(&s, &p);
        assert_eq!(p.height, 7);
        assert_eq!(brute_force_strip(&s).unwrap().height, 7);
    }

    #[test]
    fn grown_area_container_lifts_the_one_above() {
        // 30 unit squares do not fit NFDH in 5×5 at ε=1/5; cap is ⌊1.4·5⌋ = 7.
        let mut dims = vec![(1, 1); 26];
        dims.push((5, 2));
        let s = strip(5, &dims);
        let layout = Layout::new(vec![
            Container::new(ContainerKind::Area(Eps::new(1, 5)), 0, 0, 5, 6),
            Container::new(ContainerKind::Horizontal, 0, 6, 5, 2),
        ]);
        let p = solve_strip_container(&s, &layout, Eps::new(1, 5)).unwrap().unwrap();
        clean(&s, &p);
        assert_eq!(p.height, 8);
    }

    #[test]
    fn stretched_layout_stays_feasible() {
        let s = strip(10, &[(5, 3), (5, 3), (10, 2)]);
        let at = |h| {
            Layout::new(vec![
                Container::new(ContainerKind::Vertical, 0, 0, 10, 3),
                Container::new(ContainerKind::Horizontal, 0, 3, 10, h),
            ])
        };
        assert!(solve_strip_container(&s, &at(2), Eps::new(1, 4)).unwrap().is_some());
        assert!(solve_strip_container(&s, &at(5), Eps::new(1, 4)).unwrap().is_some());
    }

    #[test]
    fn portfolio_single_item_is_exact() {
        let s = strip(10, &[(4, 7)]);
        let r = solve_strip_best(&s, &StripOptions::default()).unwrap();
        assert_eq!(r.result.height, 7);
        assert_eq!(r.method, StripMethod::Nfdh);
    }

    #[test]
    fn portfolio_probe_beats_shelves() {
        // Shelves waste the space next to the tall item; two containers do not.
        let s = strip(10, &[(5, 6), (5, 3), (5, 3)]);
        let base = solve_strip_best(&s, &StripOptions { steinberg: false, ..Default::default() }).unwrap();
        let opts = StripOptions {
            steinberg: false,
            probe: Some(LayoutProbe::default()),
            ..Default::default()
        };
        let r = solve_strip_best(&s, &opts).unwrap();
        clean(&s, &r.result);
        assert!(r.result.height <= base.result.height);
        assert_eq!(r.result.height, 6);
    }

    #[test]
    fn lower_bound() {
        let s = strip(10, &[(10, 1), (3, 4)]);
        assert_eq!(s.lower_bound(), 4);
    }
}
