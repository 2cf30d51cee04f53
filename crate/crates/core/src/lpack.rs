//! L-packings: the guillotine DP over top/right coordinates, the exact
//! pseudo-polynomial solver and the PTAS over candidate sets `T^r`, `R^r`.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{Eps, Item, LInstance, Packing, Placement, Region};

/// An exact candidate coordinate.
pub type Coord = Ratio<i64>;

/// Smallest ε accepted by [`lpack_ptas`].
pub const MIN_EPS: Eps = Eps::new_raw(1, 4);

/// Default cap on DP states and candidate set sizes.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// A candidate set stored as multiples of `1/denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateCoords {
    pub denom: u64,
    /// Sorted, deduplicated, containing 0.
    pub units: Vec<u64>,
}

impl CandidateCoords {
    pub fn values(&self) -> Vec<Coord> {
        self.units
            .iter()
            .map(|&u| Coord::new(u as i64, self.denom as i64))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Every integer in `[0, bound]`.
    pub fn integers(bound: u64) -> Self {
        CandidateCoords {
            denom: 1,
            units: (0..=bound).collect(),
        }
    }

    /// From explicit rationals; 0 is adjoined and negatives dropped.
    pub fn from_values(values: &[Coord]) -> Self {
        let denom = values
            .iter()
            .fold(1i64, |acc, v| acc.lcm(v.denom()))
            .max(1) as u64;
        let mut units: BTreeSet<u64> = values
            .iter()
            .filter(|v| **v >= Coord::from_integer(0))
            .map(|v| (v.numer() * (denom as i64 / v.denom())) as u64)
            .collect();
        units.insert(0);
        CandidateCoords {
            denom,
            units: units.into_iter().collect(),
        }
    }
}

/// `m = ⌈1/ε⌉`, the integer that ε is snapped to (as `1/m`).
pub fn snap(eps: Eps) -> Result<u64> {
    if eps <= Eps::from_integer(0) {
        return Err(Error::invalid("eps must be positive"));
    }
    Ok(eps.recip().ceil().to_integer().max(1) as u64)
}

/// The recursive candidate set for item lengths `lengths` (heights of
/// horizontal items for `T`, widths of vertical items for `R`):
///
/// * `T^1 = {a·h_j/(2n) : 1 ≤ a ≤ 4n²}`
/// * `T^r = {a·h_j/2 + (≤ m−1 lengths) + (≤ m values of T^{r−1}) : 0 ≤ a ≤ 2n−1}`
///
/// with `m = ⌈1/ε⌉`, values above `bound` pruned and 0 adjoined. All values
/// are multiples of `1/(2n)`, which is the stored denominator.
pub fn build_candidate_coords(lengths: &[u64], n: usize, eps: Eps, r: u32, bound: u64, budget: u64) -> Result<CandidateCoords> {
    let m = snap(eps)?;
    if r == 0 {
        return Err(Error::invalid("level r must be at least 1"));
    }
    let n = n.max(1) as u64;
    let denom = 2 * n;
    let limit = bound * denom;
    if limit.saturating_add(1) > budget {
        return Err(Error::Budget {
            what: "candidate coordinates",
            needed: limit as u128 + 1,
            budget: budget as u128,
        });
    }
    let lengths: BTreeSet<u64> = lengths.iter().copied().collect();
    // a·h/(2n) in units of 1/(2n) is a·h.
    let mut level: BTreeSet<u64> = BTreeSet::from([0]);
    for &h in &lengths {
        for a in 1..=4 * n * n {
            let v = a * h;
            if v > limit {
                break;
            }
            level.insert(v);
        }
    }
    for _ in 1..r {
        let mut base = BTreeSet::new();
        for &h in &lengths {
            for a in 0..2 * n {
                let v = a * h * n;
                if v > limit {
                    break;
                }
                base.insert(v);
            }
        }
        let heights: Vec<u64> = lengths.iter().map(|h| h * denom).collect();
        let with_heights = sumset(&base, &heights, m.saturating_sub(1), limit);
        let prev: Vec<u64> = level.iter().copied().collect();
        level = sumset(&with_heights, &prev, m, limit);
    }
    Ok(CandidateCoords {
        denom,
        units: level.into_iter().collect(),
    })
}

/// `{s + x_1 + … + x_c : s ∈ start, c ≤ times, x_i ∈ add}` below `limit`.
fn sumset(start: &BTreeSet<u64>, add: &[u64], times: u64, limit: u64) -> BTreeSet<u64> {
    let mut all = start.clone();
    let mut frontier = start.clone();
    for _ in 0..times {
        let mut next = BTreeSet::new();
        for &s in &frontier {
            for &x in add {
                let v = s + x;
                if v <= limit && !all.contains(&v) {
                    next.insert(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        all.extend(next.iter().copied());
        frontier = next;
    }
    all
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LSolution {
    pub packing: Packing,
    pub profit: u64,
}

struct Dp<'a> {
    side: u64,
    hor: Vec<&'a Item>,
    ver: Vec<&'a Item>,
    t: &'a CandidateCoords,
    r: &'a CandidateCoords,
    memo: HashMap<(usize, usize, usize, usize), u64>,
    budget: u64,
}

#[derive(Clone, Copy, Debug)]
enum Step {
    SkipH,
    SkipV,
    PlaceH(usize),
    PlaceV(usize),
}

impl Dp<'_> {
    /// Smallest index whose value is at least `units`.
    fn ceil_index(set: &CandidateCoords, units: u64) -> Option<usize> {
        let k = set.units.partition_point(|&u| u < units);
        (k < set.units.len()).then_some(k)
    }

    fn steps(&self, i: usize, ti: usize, j: usize, ri: usize) -> Vec<Step> {
        let mut out = Vec::with_capacity(4);
        let t = self.t.units[ti];
        let r = self.r.units[ri];
        if let Some(h) = self.hor.get(i) {
            // top t' ≥ t + h(h_i), and w(h_i) ≤ N − r
            if h.width * self.r.denom + r <= self.side * self.r.denom {
                if let Some(k) = Self::ceil_index(self.t, t + h.height * self.t.denom) {
                    out.push(Step::PlaceH(k));
                }
            }
        }
        if let Some(v) = self.ver.get(j) {
            if v.height * self.t.denom + t <= self.side * self.t.denom {
                if let Some(k) = Self::ceil_index(self.r, r + v.width * self.r.denom) {
                    out.push(Step::PlaceV(k));
                }
            }
        }
        if i < self.hor.len() {
            out.push(Step::SkipH);
        }
        if j < self.ver.len() {
            out.push(Step::SkipV);
        }
        out
    }

    fn next(&self, s: Step, i: usize, ti: usize, j: usize, ri: usize) -> ((usize, usize, usize, usize), u64) {
        match s {
            Step::SkipH => ((i + 1, ti, j, ri), 0),
            Step::SkipV => ((i, ti, j + 1, ri), 0),
            Step::PlaceH(k) => ((i + 1, k, j, ri), self.hor[i].profit),
            Step::PlaceV(k) => ((i, ti, j + 1, k), self.ver[j].profit),
        }
    }

    fn value(&mut self, i: usize, ti: usize, j: usize, ri: usize) -> Result<u64> {
        if i == self.hor.len() && j == self.ver.len() {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(&(i, ti, j, ri)) {
            return Ok(v);
        }
        if self.memo.len() as u64 >= self.budget {
            return Err(Error::Budget {
                what: "L-packing DP states",
                needed: self.memo.len() as u128 + 1,
                budget: self.budget as u128,
            });
        }
        let mut best = 0;
        for s in self.steps(i, ti, j, ri) {
            let ((a, b, c, d), gain) = self.next(s, i, ti, j, ri);
            best = best.max(gain + self.value(a, b, c, d)?);
        }
        self.memo.insert((i, ti, j, ri), best);
        Ok(best)
    }
}

fn restrict(set: &CandidateCoords, bound: u64) -> CandidateCoords {
    let limit = bound * set.denom;
    let mut units: Vec<u64> = set.units.iter().copied().filter(|&u| u <= limit).collect();
    if units.first() != Some(&0) {
        units.insert(0, 0);
    }
    CandidateCoords {
        denom: set.denom,
        units,
    }
}

/// Optimal `(T, R)`-restricted L-packing. Horizontal items are taken in
/// non-increasing width order, vertical ones in non-increasing height order;
/// each is either skipped or placed with the smallest admissible top (right)
/// coordinate beyond a guillotine cut. Placements are emitted on integer
/// coordinates by replaying the chosen steps with exact cumulative sums.
pub fn lpack_dp(instance: &LInstance, t: &CandidateCoords, r: &CandidateCoords) -> Result<LSolution> {
    lpack_dp_with_budget(instance, t, r, DEFAULT_BUDGET)
}

pub fn lpack_dp_with_budget(instance: &LInstance, t: &CandidateCoords, r: &CandidateCoords, budget: u64) -> Result<LSolution> {
    let t = restrict(t, instance.h_l);
    let r = restrict(r, instance.w_l);
    let mut hor: Vec<&Item> = instance.horizontal.iter().collect();
    hor.sort_by(|a, b| b.width.cmp(&a.width).then(b.height.cmp(&a.height)).then(a.id.cmp(&b.id)));
    let mut ver: Vec<&Item> = instance.vertical.iter().collect();
    ver.sort_by(|a, b| b.height.cmp(&a.height).then(b.width.cmp(&a.width)).then(a.id.cmp(&b.id)));
    let mut dp = Dp {
        side: instance.side,
        hor,
        ver,
        t: &t,
        r: &r,
        memo: HashMap::new(),
        budget,
    };
    let profit = dp.value(0, 0, 0, 0)?;

    let n = instance.side;
    let mut placements = Vec::new();
    let (mut i, mut ti, mut j, mut ri) = (0, 0, 0, 0);
    let (mut top, mut right) = (0u64, 0u64);
    let mut remaining = profit;
    while remaining > 0 {
        let mut moved = false;
        for s in dp.steps(i, ti, j, ri) {
            let ((a, b, c, d), gain) = dp.next(s, i, ti, j, ri);
            if gain + dp.value(a, b, c, d)? != remaining {
                continue;
            }
            match s {
                Step::PlaceH(_) => {
                    let it = dp.hor[i];
                    placements.push(Placement::new(it.id, n - it.width, top));
                    top += it.height;
                }
                Step::PlaceV(_) => {
                    let it = dp.ver[j];
                    placements.push(Placement::new(it.id, right, n - it.height));
                    right += it.width;
                }
                Step::SkipH | Step::SkipV => {}
            }
            remaining -= gain;
            (i, ti, j, ri) = (a, b, c, d);
            moved = true;
            break;
        }
        debug_assert!(moved, "DP value must be reproducible");
        if !moved {
            break;
        }
    }
    Ok(LSolution {
        packing: Packing {
            region: instance.region(),
            placements,
        },
        profit,
    })
}

/// Exact L-packing: the DP over every integer top and right coordinate.
pub fn lpack_exact(instance: &LInstance) -> Result<LSolution> {
    lpack_dp(
        instance,
        &CandidateCoords::integers(instance.h_l),
        &CandidateCoords::integers(instance.w_l),
    )
}

/// PTAS: the best restricted packing over `T^{r_h} × R^{r_v}` for
/// `r_h, r_v ∈ {1, …, ⌈1/ε⌉}`.
pub fn lpack_ptas(instance: &LInstance, eps: Eps) -> Result<LSolution> {
    if eps < MIN_EPS {
        return Err(Error::Invalid(format!("eps {eps} is below the supported minimum {MIN_EPS}")));
    }
    let m = snap(eps)?;
    let snapped = Eps::new(1, m as i64);
    let n = instance.horizontal.len() + instance.vertical.len();
    let heights: Vec<u64> = instance.horizontal.iter().map(|i| i.height).collect();
    let widths: Vec<u64> = instance.vertical.iter().map(|i| i.width).collect();
    let mut ts: Vec<CandidateCoords> = Vec::new();
    let mut rs: Vec<CandidateCoords> = Vec::new();
    for level in 1..=m as u32 {
        let t = restrict(&build_candidate_coords(&heights, n, snapped, level, instance.h_l, DEFAULT_BUDGET)?, instance.h_l);
        if ts.last() != Some(&t) {
            ts.push(t);
        }
        let r = restrict(&build_candidate_coords(&widths, n, snapped, level, instance.w_l, DEFAULT_BUDGET)?, instance.w_l);
        if rs.last() != Some(&r) {
            rs.push(r);
        }
    }
    let mut best: Option<LSolution> = None;
    for t in &ts {
        for r in &rs {
            let sol = lpack_dp(instance, t, r)?;
            if best.as_ref().is_none_or(|b| sol.profit > b.profit) {
                best = Some(sol);
            }
        }
    }
    Ok(best.unwrap_or(LSolution {
        packing: Packing::empty(Region::L {
            n: instance.side,
            w_l: instance.w_l,
            h_l: instance.h_l,
        }),
        profit: 0,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Instance;
    use crate::validate::validate_packing;

    fn coords(values: &[(i64, i64)]) -> CandidateCoords {
        CandidateCoords::from_values(&values.iter().map(|&(a, b)| Coord::new(a, b)).collect::<Vec<_>>())
    }

    #[test]
    fn t1_for_heights_two_and_three() {
        let t = build_candidate_coords(&[2, 3], 2, Eps::new(1, 2), 1, 12, 1_000_000).unwrap();
        let mut expect: BTreeSet<Coord> = BTreeSet::from([Coord::from_integer(0)]);
        for a in 1..=16 {
            expect.insert(Coord::new(a, 2));
            expect.insert(Coord::new(3 * a, 4));
        }
        assert_eq!(t.values(), expect.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn t1_contains_the_height() {
        let t = build_candidate_coords(&[7], 1, Eps::new(1, 2), 1, 20, 1_000_000).unwrap();
        assert!(t.values().contains(&Coord::from_integer(7)));
    }

    #[test]
    fn levels_are_nested() {
        let t1 = build_candidate_coords(&[3, 5], 3, Eps::new(1, 2), 1, 12, 1_000_000).unwrap();
        let t2 = build_candidate_coords(&[3, 5], 3, Eps::new(1, 2), 2, 12, 1_000_000).unwrap();
        assert!(t1.units.iter().all(|u| t2.units.contains(u)));
    }

    #[test]
    fn horizontal_only_capacity_four() {
        let l = LInstance::new(10, 0, 4, vec![Item::new(0, 6, 2, 5), Item::new(1, 7, 3, 6)]).unwrap();
        let t = coords(&[(2, 1), (3, 1), (5, 1)]);
        let sol = lpack_dp(&l, &t, &CandidateCoords::integers(0)).unwrap();
        assert_eq!(sol.profit, 6);
        assert_eq!(lpack_exact(&l).unwrap().profit, 6);
    }

    #[test]
    fn empty_instance() {
        let l = LInstance::new(10, 3, 3, vec![]).unwrap();
        assert_eq!(lpack_exact(&l).unwrap().profit, 0);
    }

    #[test]
    fn zero_arms_hold_nothing() {
        let l = LInstance::new(8, 0, 0, vec![Item::new(0, 6, 1, 3), Item::new(1, 1, 6, 3)]).unwrap();
        assert_eq!(lpack_exact(&l).unwrap().profit, 0);
    }

    #[test]
    fn corner_conflict() {
        // 8×3 and 3×8 both need the corner; only one fits.
        let l = LInstance::new(8, 3, 3, vec![Item::new(0, 8, 3, 4), Item::new(1, 3, 8, 5)]).unwrap();
        let sol = lpack_exact(&l).unwrap();
        assert_eq!(sol.profit, 5);
        let inst: Instance = l.clone().into();
        assert!(validate_packing(&inst, &sol.packing).unwrap().is_feasible());
    }

    #[test]
    fn mixed_instance_is_feasible() {
        let l = LInstance::new(8, 8, 8, vec![
            Item::new(0, 6, 2, 3),
            Item::new(1, 2, 6, 3),
            Item::new(2, 5, 3, 4),
        ])
        .unwrap();
        let sol = lpack_exact(&l).unwrap();
        assert_eq!(sol.profit, 10);
        let inst: Instance = l.clone().into();
        assert!(validate_packing(&inst, &sol.packing).unwrap().is_feasible());
        let approx = lpack_ptas(&l, Eps::new(1, 4)).unwrap();
        assert!(approx.profit <= sol.profit);
        assert!(validate_packing(&inst, &approx.packing).unwrap().is_feasible());
    }

    #[test]
    fn small_eps_rejected() {
        let l = LInstance::new(8, 8, 8, vec![]).unwrap();
        assert!(lpack_ptas(&l, Eps::new(1, 10)).is_err());
    }

    #[test]
    fn budget_guard() {
        let items: Vec<Item> = (0..6).map(|i| Item::new(i, 60, 1 + i as u64, 1)).collect();
        let l = LInstance::new(100, 100, 100, items).unwrap();
        let err = lpack_dp_with_budget(&l, &CandidateCoords::integers(100), &CandidateCoords::integers(100), 3).unwrap_err();
        assert!(err.is_budget());
    }
}
