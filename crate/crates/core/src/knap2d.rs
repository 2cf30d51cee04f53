//! End-to-end 2-D geometric knapsack: the L&C pipeline, the three-candidate
//! cardinality pipeline and an exhaustive oracle.

use std::collections::HashSet;

use crate::containers::candidate::sizes;
use crate::containers::{
    enumerate_layouts, expand_candidate_set_capped, layout_upper_bound, solve_items_for_layout, GapMode,
    DEFAULT_GUESS_CAP,
};
use crate::error::{Error, Result};
use crate::gap::DEFAULT_BUDGET;
use crate::lpack::{lpack_ptas, MIN_EPS};
use crate::model::{Eps, Item, KnapsackInstance, LInstance, Packing, Placement, Rect, Region};
use crate::oracle::{pack_all, DEFAULT_NODES};

/// Containers per layout in the container search.
pub const DEFAULT_K_MAX: usize = 2;

/// Layouts evaluated per branch unless told otherwise.
pub const DEFAULT_LAYOUT_BUDGET: u64 = 5_000;

/// Boundary-L width `N′` and long-item threshold `ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LCParameters {
    pub n_prime: u64,
    pub ell: u64,
    pub degenerate: bool,
}

impl LCParameters {
    /// `N′ = 0`, `ℓ = N`: no boundary L, every item goes to the containers.
    pub fn degenerate(side: u64) -> Self {
        LCParameters {
            n_prime: 0,
            ell: side,
            degenerate: true,
        }
    }

    /// `N′ = ⌈ε²N⌉` with the given `ℓ ∈ (N/2, N]`.
    pub fn ring(side: u64, ell: u64, eps: Eps) -> Result<Self> {
        if 2 * ell <= side || ell > side {
            return Err(Error::Invalid(format!("ell {ell} outside (N/2, N]")));
        }
        let n_prime = (eps * eps * side as i64).ceil().to_integer();
        let n_prime = (n_prime.max(0) as u64).min(side / 2);
        Ok(LCParameters {
            n_prime,
            ell,
            degenerate: false,
        })
    }

    /// `(I_long, I_short)`; in the degenerate case everything is short.
    pub fn split(&self, items: &[Item]) -> (Vec<Item>, Vec<Item>) {
        if self.degenerate {
            return (Vec::new(), items.to_vec());
        }
        items.iter().partition(|i| i.longer_side() >= self.ell)
    }
}

/// Where a knapsack solution came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Containers over the whole square.
    Degenerate,
    /// Long items in an L covering the whole square.
    FullL,
    /// Boundary L of width `N′` for items with a side of at least `ell`,
    /// containers in the rest.
    Ring { ell: u64 },
    /// Cardinality candidate (a): long items in the full-square L.
    LongItems,
    /// Cardinality candidate (b): containers in `N × N/(1+ε)`.
    WideRegion,
    /// Cardinality candidate (c): containers in `N/(1+ε) × N`.
    TallRegion,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackSolution {
    pub packing: Packing,
    pub profit: u64,
    pub branch: Branch,
    /// Every GAP step was exact or carried its guarantee.
    pub guarantee: bool,
    /// Some layout enumeration or evaluation stopped on its budget.
    pub budget_exhausted: bool,
}

impl KnapsackSolution {
    fn empty(instance: &KnapsackInstance, branch: Branch) -> Self {
        KnapsackSolution {
            packing: Packing::empty(instance.region()),
            profit: 0,
            branch,
            guarantee: true,
            budget_exhausted: false,
        }
    }
}

/// Result of a container search over one rectangle.
struct Search {
    placements: Vec<Placement>,
    profit: u64,
    guarantee: bool,
    exhausted: bool,
}

/// Best container packing of `items` inside `area`, over guillotine layouts
/// of at most `k_max` containers. Falls back to fewer containers when the
/// enumeration exceeds `budget`.
fn container_search(
    items: &[Item],
    rotations: bool,
    side: u64,
    area: Rect,
    eps: Eps,
    k_max: usize,
    budget: u64,
) -> Result<Search> {
    let mut out = Search {
        placements: Vec::new(),
        profit: 0,
        guarantee: true,
        exhausted: false,
    };
    if items.is_empty() || area.w == 0 || area.h == 0 {
        return Ok(out);
    }
    let cap = area.w.max(area.h);
    let cand = expand_candidate_set_capped(&sizes(items), 2, items.len() as u64, cap);
    let mut layouts = None;
    for k in (1..=k_max).rev() {
        match enumerate_layouts(area, k, &cand, eps, budget) {
            Ok(l) => {
                layouts = Some(l);
                break;
            }
            Err(e) if e.is_budget() => out.exhausted = true,
            Err(e) => return Err(e),
        }
    }
    let Some(layouts) = layouts else {
        return Ok(out);
    };
    let region = Region::Rect { w: side, h: side };
    let reachable = {
        let everything = crate::containers::Layout::new(
            layouts.iter().flat_map(|l| l.containers.iter().copied()).collect(),
        );
        layout_upper_bound(items, rotations, &everything)
    };
    let mut seen = HashSet::new();
    for layout in layouts {
        if out.profit >= reachable {
            break;
        }
        let mut sig = layout.signature();
        sig.sort();
        if !seen.insert(sig) || layout_upper_bound(items, rotations, &layout) <= out.profit {
            continue;
        }
        let sol = match solve_items_for_layout(items, rotations, region, &layout, GapMode::Exact { budget: DEFAULT_BUDGET }) {
            Err(e) if e.is_budget() => solve_items_for_layout(
                items,
                rotations,
                region,
                &layout,
                GapMode::Ptas {
                    eps,
                    guess_cap: DEFAULT_GUESS_CAP,
                    budget: DEFAULT_BUDGET,
                },
            )?,
            other => other?,
        };
        if sol.profit > out.profit {
            out.profit = sol.profit;
            out.placements = sol.packing.placements;
            out.guarantee = sol.guarantee;
        }
    }
    Ok(out)
}

fn lpack_eps(eps: Eps) -> Eps {
    eps.max(MIN_EPS)
}

/// Long items in an L of arm width `n_prime` (the whole square when
/// `n_prime = N`). Items with no side longer than `N/2` are ignored.
fn boundary_l(instance: &KnapsackInstance, long: &[Item], n_prime: u64, eps: Eps) -> Result<(Vec<Placement>, u64)> {
    let side = instance.side;
    let long: Vec<Item> = long.iter().filter(|i| LInstance::arm_of(side, i).is_some()).copied().collect();
    if long.is_empty() || n_prime == 0 {
        return Ok((Vec::new(), 0));
    }
    let l = LInstance::new(side, n_prime, n_prime, long)?;
    let sol = lpack_ptas(&l, lpack_eps(eps))?;
    Ok((sol.packing.placements, sol.profit))
}

fn finish(instance: &KnapsackInstance, placements: Vec<Placement>, branch: Branch, guarantee: bool, exhausted: bool) -> KnapsackSolution {
    let packing = Packing {
        region: instance.region(),
        placements,
    };
    KnapsackSolution {
        profit: packing.profit(&instance.items),
        packing,
        branch,
        guarantee,
        budget_exhausted: exhausted,
    }
}

/// Every branch of the L&C pipeline in evaluation order: the degenerate
/// case, the full-square L, then one ring per distinct long side `ℓ > N/2`
/// in increasing order.
pub fn lc_branches(instance: &KnapsackInstance, eps: Eps, layout_budget: u64) -> Result<Vec<KnapsackSolution>> {
    check_eps(eps)?;
    let side = instance.side;
    let items = &instance.items;
    let rot = instance.rotations;
    let mut out = Vec::new();

    let s = container_search(items, rot, side, Rect::new(0, 0, side, side), eps, DEFAULT_K_MAX, layout_budget)?;
    out.push(finish(instance, s.placements, Branch::Degenerate, s.guarantee, s.exhausted));

    let (full, _) = boundary_l(instance, items, side, eps)?;
    out.push(finish(instance, full, Branch::FullL, true, false));

    let mut ells: Vec<u64> = items.iter().map(|i| i.longer_side()).filter(|&l| 2 * l > side).collect();
    ells.sort_unstable();
    ells.dedup();
    for ell in ells {
        let params = LCParameters::ring(side, ell, eps)?;
        let (long, short) = params.split(items);
        let (mut placements, _) = boundary_l(instance, &long, params.n_prime, eps)?;
        let np = params.n_prime;
        let rest = Rect::new(np, np, side - np, side - np);
        let s = container_search(&short, rot, side, rest, eps, DEFAULT_K_MAX, layout_budget)?;
        placements.extend(s.placements);
        out.push(finish(instance, placements, Branch::Ring { ell }, s.guarantee, s.exhausted));
    }
    Ok(out)
}

/// First solution of maximum profit.
fn argmax(solutions: Vec<KnapsackSolution>) -> Option<KnapsackSolution> {
    let mut best: Option<KnapsackSolution> = None;
    for s in solutions {
        if best.as_ref().is_none_or(|b| s.profit > b.profit) {
            best = Some(s);
        }
    }
    best
}

/// Best packing over [`lc_branches`]; ties go to the earlier branch.
pub fn solve_2dgk_lc(instance: &KnapsackInstance, eps: Eps, layout_budget: u64) -> Result<KnapsackSolution> {
    let branches = lc_branches(instance, eps, layout_budget)?;
    let exhausted = branches.iter().any(|b| b.budget_exhausted);
    let mut best = argmax(branches).unwrap_or_else(|| KnapsackSolution::empty(instance, Branch::Degenerate));
    best.budget_exhausted = exhausted;
    Ok(best)
}

fn check_eps(eps: Eps) -> Result<()> {
    if eps <= Eps::new(0, 1) || eps >= Eps::new(1, 1) {
        return Err(Error::invalid("eps must lie in (0, 1)"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CardinalityOptions {
    pub layout_budget: u64,
    /// Instances within these limits go straight to the oracle.
    pub oracle: Option<OracleLimits>,
    /// Drop items with both sides above `εN` before the candidates.
    pub drop_large: bool,
}

impl Default for CardinalityOptions {
    fn default() -> Self {
        CardinalityOptions {
            layout_budget: DEFAULT_LAYOUT_BUDGET,
            oracle: Some(OracleLimits::default()),
            drop_large: true,
        }
    }
}

/// Unit-profit solver. Instances within the oracle limits are solved
/// exactly; otherwise large items (both sides above `εN`) are dropped and the
/// best of three candidates is returned: long items in the full-square L, and
/// container packings in `N × ⌊N/(1+ε)⌋` and `⌊N/(1+ε)⌋ × N`.
pub fn solve_2dgk_cardinality(instance: &KnapsackInstance, eps: Eps, layout_budget: u64) -> Result<KnapsackSolution> {
    solve_2dgk_cardinality_with(
        instance,
        eps,
        CardinalityOptions {
            layout_budget,
            ..Default::default()
        },
    )
}

/// The three candidates of [`solve_2dgk_cardinality`], in order (a), (b), (c).
pub fn cardinality_candidates(
    instance: &KnapsackInstance,
    eps: Eps,
    layout_budget: u64,
    drop_large: bool,
) -> Result<Vec<KnapsackSolution>> {
    check_eps(eps)?;
    if let Some(it) = instance.items.iter().find(|i| i.profit != 1) {
        return Err(Error::precondition(it.id, "cardinality solver needs unit profits"));
    }
    let side = instance.side;
    let big = |len: u64| Eps::from_integer(len as i64) > eps * side as i64;
    let kept: Vec<Item> = instance
        .items
        .iter()
        .filter(|i| !(drop_large && big(i.width) && big(i.height)))
        .copied()
        .collect();
    let rot = instance.rotations;
    let mut out = Vec::new();

    let (l, _) = boundary_l(instance, &kept, side, eps)?;
    out.push(finish(instance, l, Branch::LongItems, true, false));

    let short = (Eps::from_integer(side as i64) / (Eps::from_integer(1) + eps)).floor().to_integer() as u64;
    for (branch, area) in [
        (Branch::WideRegion, Rect::new(0, 0, side, short)),
        (Branch::TallRegion, Rect::new(0, 0, short, side)),
    ] {
        let s = container_search(&kept, rot, side, area, eps, DEFAULT_K_MAX, layout_budget)?;
        out.push(finish(instance, s.placements, branch, s.guarantee, s.exhausted));
    }
    Ok(out)
}

pub fn solve_2dgk_cardinality_with(
    instance: &KnapsackInstance,
    eps: Eps,
    options: CardinalityOptions,
) -> Result<KnapsackSolution> {
    check_eps(eps)?;
    if let Some(it) = instance.items.iter().find(|i| i.profit != 1) {
        return Err(Error::precondition(it.id, "cardinality solver needs unit profits"));
    }
    if let Some(limits) = options.oracle {
        if instance.items.len() <= limits.max_items && instance.side <= limits.max_side {
            return brute_force_2dgk_with(instance, limits);
        }
    }
    let candidates = cardinality_candidates(instance, eps, options.layout_budget, options.drop_large)?;
    let exhausted = candidates.iter().any(|c| c.budget_exhausted);
    let mut best = argmax(candidates).unwrap_or_else(|| KnapsackSolution::empty(instance, Branch::LongItems));
    best.budget_exhausted = exhausted;
    Ok(best)
}

/// Size limits for [`brute_force_2dgk_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_items: usize,
    pub max_side: u64,
    /// Search nodes per subset.
    pub nodes: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_items: 6,
            max_side: 12,
            nodes: DEFAULT_NODES,
        }
    }
}

/// Exact optimum: subsets in decreasing profit order, each checked by
/// exhaustive placement; the first that packs is optimal.
pub fn brute_force_2dgk(instance: &KnapsackInstance) -> Result<KnapsackSolution> {
    brute_force_2dgk_with(instance, OracleLimits::default())
}

pub fn brute_force_2dgk_with(instance: &KnapsackInstance, limits: OracleLimits) -> Result<KnapsackSolution> {
    let items = &instance.items;
    let n = items.len();
    if n > limits.max_items || instance.side > limits.max_side {
        return Err(Error::Invalid(format!(
            "oracle limited to {} items and side {}",
            limits.max_items, limits.max_side
        )));
    }
    let side = instance.side;
    let cells = side as u128 * side as u128;
    let mut subsets: Vec<(u64, u32)> = (0u32..1 << n)
        .map(|mask| {
            let p = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| items[i].profit).sum();
            (p, mask)
        })
        .collect();
    subsets.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.count_ones().cmp(&b.1.count_ones())).then(a.1.cmp(&b.1)));
    for (profit, mask) in subsets {
        let chosen: Vec<Item> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| items[i]).collect();
        if chosen.iter().map(|i| i.area() as u128).sum::<u128>() > cells {
            continue;
        }
        if let Some(placements) = pack_all(&chosen, side, side, instance.rotations, limits.nodes)? {
            let packing = Packing {
                region: instance.region(),
                placements,
            };
            debug_assert_eq!(packing.profit(items), profit);
            return Ok(KnapsackSolution {
                packing,
                profit,
                branch: Branch::BruteForce,
                guarantee: true,
                budget_exhausted: false,
            });
        }
    }
    unreachable!("the empty subset always packs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, ItemId, Mode};
    use crate::validate::validate_packing;

    fn knap(side: u64, dims: &[(u64, u64, u64)]) -> KnapsackInstance {
        let items = dims.iter().enumerate().map(|(i, &(w, h, p))| Item::new(i as u32, w, h, p)).collect();
        KnapsackInstance::new(side, items).unwrap()
    }

    fn clean(inst: &KnapsackInstance, s: &KnapsackSolution) {
        let i: Instance = inst.clone().into();
        assert!(validate_packing(&i, &s.packing).unwrap().is_feasible(), "{s:?}");
        assert_eq!(s.packing.profit(&inst.items), s.profit);
    }

    const EPS: Eps = Eps::new_raw(1, 4);

    #[test]
    fn oracle_examples() {
        let k = knap(10, &[(3, 4, 7)]);
        assert_eq!(brute_force_2dgk(&k).unwrap().profit, 7);
        let k = knap(10, &[(6, 6, 3), (6, 6, 5)]);
        let b = brute_force_2dgk(&k).unwrap();
        assert_eq!(b.profit, 5);
        clean(&k, &b);
    }

    #[test]
    fn oracle_rotation_never_hurts() {
        let items = vec![Item::new(0, 10, 3, 1), Item::new(1, 3, 7, 1), Item::new(2, 3, 7, 1), Item::new(3, 7, 3, 1)];
        let plain = KnapsackInstance::new(10, items.clone()).unwrap();
        let turned = KnapsackInstance::with_options(10, items, Mode::Weighted, true).unwrap();
        let a = brute_force_2dgk(&plain).unwrap().profit;
        let b = brute_force_2dgk(&turned).unwrap().profit;
        assert!(b >= a);
    }

    #[test]
    fn oracle_limits() {
        let k = knap(13, &[(1, 1, 1)]);
        assert!(brute_force_2dgk(&k).is_err());
    }

    #[test]
    fn all_short_items_use_containers() {
        let k = knap(10, &[(3, 3, 2), (3, 3, 2), (4, 2, 1)]);
        let s = solve_2dgk_lc(&k, EPS, DEFAULT_LAYOUT_BUDGET).unwrap();
        clean(&k, &s);
        assert_eq!(s.branch, Branch::Degenerate);
        assert_eq!(s.profit, 5);
    }

    #[test]
    fn all_long_items_use_the_full_l() {
        let k = knap(10, &[(9, 2, 3), (8, 3, 3), (2, 6, 3), (3, 6, 3)]);
        let branches = lc_branches(&k, EPS, DEFAULT_LAYOUT_BUDGET).unwrap();
        let full = branches.iter().find(|b| b.branch == Branch::FullL).unwrap();
        assert_eq!(full.profit, 9);
        let s = solve_2dgk_lc(&k, EPS, DEFAULT_LAYOUT_BUDGET).unwrap();
        clean(&k, &s);
        assert_eq!(s.profit, brute_force_2dgk(&k).unwrap().profit);
    }

    #[test]
    fn lc_dominates_each_branch() {
        let k = knap(10, &[(9, 1, 4), (6, 6, 5), (2, 7, 2), (3, 3, 1), (5, 2, 2)]);
        let branches = lc_branches(&k, EPS, DEFAULT_LAYOUT_BUDGET).unwrap();
        for b in &branches {
            clean(&k, b);
        }
        let s = solve_2dgk_lc(&k, EPS, DEFAULT_LAYOUT_BUDGET).unwrap();
        assert!(branches.iter().all(|b| b.profit <= s.profit));
        assert!(s.profit * 2 >= brute_force_2dgk(&k).unwrap().profit);
    }

    #[test]
    fn ring_parameters() {
        let p = LCParameters::ring(10, 7, EPS).unwrap();
        assert_eq!(p.n_prime, 1);
        let items = vec![Item::new(0, 7, 1, 1), Item::new(1, 6, 1, 1)];
        let (long, short) = p.split(&items);
        assert_eq!((long.len(), short.len()), (1, 1));
        assert!(LCParameters::ring(10, 5, EPS).is_err());
        let d = LCParameters::degenerate(10);
        assert_eq!(d.split(&items).0.len(), 0);
    }

    #[test]
    fn cardinality_small_items_pack_all() {
        let items: Vec<Item> = (0..8).map(|i| Item::new(i, 2, 2, 1)).collect();
        let k = KnapsackInstance::with_options(10, items, Mode::Cardinality, false).unwrap();
        let opts = CardinalityOptions {
            oracle: None,
            ..Default::default()
        };
        let s = solve_2dgk_cardinality_with(&k, EPS, opts).unwrap();
        clean(&k, &s);
        assert_eq!(s.profit, 8);
    }

    #[test]
    fn cardinality_long_items() {
        let items: Vec<Item> = [(9, 2), (8, 2), (2, 6), (1, 9), (2, 7)]
            .iter()
            .enumerate()
            .map(|(i, &(w, h))| Item::new(i as u32, w, h, 1))
            .collect();
        let k = KnapsackInstance::with_options(10, items, Mode::Cardinality, false).unwrap();
        let c = cardinality_candidates(&k, EPS, DEFAULT_LAYOUT_BUDGET, true).unwrap();
        assert_eq!(c[0].branch, Branch::LongItems);
        let best = brute_force_2dgk(&k).unwrap().profit;
        assert_eq!(c[0].profit, best);
        assert!(c[1..].iter().all(|x| x.profit <= best));
    }

    #[test]
    fn cardinality_rejects_weights() {
        let k = knap(10, &[(1, 1, 2), (1, 1, 1), (1, 1, 1), (1, 1, 1)]);
        assert!(matches!(
            solve_2dgk_cardinality(&k, EPS, 10),
            Err(Error::Precondition { item: ItemId(0), .. })
        ));
    }
}
