//! Packing under Steinberg's sufficient condition
//! `2·a ≤ w·h − (2·w_max − w)₊·(2·h_max − h)₊`.
//!
//! The construction is a recursive reduction over sub-boxes with exact
//! rational sides. Every reduction only recurses on sub-boxes whose own item
//! lists satisfy the condition again:
//!
//! * wide stack: items at least half the box wide are stacked at the
//!   bottom-left, the rest goes above and to the right of the stack;
//! * tall stack: the transposed wide stack;
//! * corner: one item goes into the bottom-left corner and the L-shaped rest
//!   is cut into two boxes;
//! * split: the list is cut into two parts along a sorted order and the box
//!   is cut at the smallest width (height) that keeps the first part within
//!   the condition.
//!
//! A sub-box is first tried with shelf and maximal-rectangle heuristics, and
//! small lists are settled by the exact grid search. The final rational
//! placement is compacted left and down onto integer coordinates. If the
//! reductions run out of budget the exact search runs on the whole box.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::maxrects::maxrects_any;
use crate::model::{total_area, Item, ItemId, Packing, Placement, Region};
use crate::nfdh::StripPacking;
use crate::oracle::pack_all;

type Q = BigRational;

/// Reduction nodes explored before falling back to the exact search.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000;

/// Exact-search nodes for the fallback.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

const LEAF_ITEMS: usize = 5;
const LEAF_SEARCH: u64 = 20_000;
const CANDIDATES: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinbergProblem {
    pub width: u64,
    pub height: u64,
    pub items: Vec<Item>,
}

impl SteinbergProblem {
    /// Rejects items that exceed the box in either dimension.
    pub fn new(width: u64, height: u64, items: Vec<Item>) -> Result<Self> {
        for it in &items {
            if it.width == 0 || it.height == 0 {
                return Err(Error::ZeroDimension(it.id));
            }
            if it.width > width || it.height > height {
                return Err(Error::precondition(it.id, format!("larger than the {width}x{height} box")));
            }
        }
        Ok(SteinbergProblem { width, height, items })
    }

    pub fn w_max(&self) -> u64 {
        self.items.iter().map(|i| i.width).max().unwrap_or(0)
    }

    pub fn h_max(&self) -> u64 {
        self.items.iter().map(|i| i.height).max().unwrap_or(0)
    }
}

pub(crate) fn condition_holds(width: u64, height: u64, items: &[Item]) -> bool {
    let a: i128 = items.iter().map(|i| i.area() as i128).sum();
    let wm = items.iter().map(|i| i.width).max().unwrap_or(0) as i128;
    let hm = items.iter().map(|i| i.height).max().unwrap_or(0) as i128;
    let (w, h) = (width as i128, height as i128);
    wm <= w && hm <= h && 2 * a <= w * h - (2 * wm - w).max(0) * (2 * hm - h).max(0)
}

pub fn steinberg_feasible(problem: &SteinbergProblem) -> bool {
    condition_holds(problem.width, problem.height, &problem.items)
}

/// Which stage produced the packing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Heuristic placement of the whole box.
    Heuristic,
    /// The recursive reductions.
    Reduction,
    /// Exact search fallback.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinbergPacking {
    pub packing: Packing,
    pub construction: Construction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SteinbergOptions {
    /// Try heuristics on every (sub-)box before reducing.
    pub heuristics: bool,
    pub node_budget: u64,
    pub search_budget: u64,
}

impl Default for SteinbergOptions {
    fn default() -> Self {
        SteinbergOptions {
            heuristics: true,
            node_budget: DEFAULT_NODE_BUDGET,
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

pub fn steinberg_pack(problem: &SteinbergProblem) -> Result<SteinbergPacking> {
    steinberg_pack_with(problem, SteinbergOptions::default())
}

pub fn steinberg_pack_with(problem: &SteinbergProblem, options: SteinbergOptions) -> Result<SteinbergPacking> {
    if !steinberg_feasible(problem) {
        return Err(Error::Infeasible(format!(
            "items of total area {} do not meet the condition for a {}x{} box",
            total_area(&problem.items),
            problem.width,
            problem.height
        )));
    }
    let region = Region::Rect {
        w: problem.width,
        h: problem.height,
    };
    let done = |placements, construction| SteinbergPacking {
        packing: Packing { region, placements },
        construction,
    };
    if options.heuristics {
        if let Some(p) = maxrects_any(&problem.items, problem.width, problem.height) {
            return Ok(done(p, Construction::Heuristic));
        }
    }
    let mut solver = Reducer {
        heuristics: options.heuristics,
        nodes: 0,
        budget: options.node_budget,
    };
    let frame = Frame {
        x: Q::zero(),
        y: Q::zero(),
        w: int(problem.width),
        h: int(problem.height),
    };
    if let Some(spots) = solver.solve(&frame, problem.items.clone()) {
        return Ok(done(compact(&problem.items, &spots), Construction::Reduction));
    }
    match pack_all(&problem.items, problem.width, problem.height, false, options.search_budget) {
        Ok(Some(p)) => Ok(done(p, Construction::Search)),
        Ok(None) => Err(Error::Infeasible("exact search found no packing".into())),
        Err(e) => Err(e),
    }
}

fn int(v: u64) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn floor_u64(q: &Q) -> u64 {
    q.floor().to_integer().to_u64().unwrap_or(0)
}

#[derive(Clone, Debug)]
struct Frame {
    x: Q,
    y: Q,
    w: Q,
    h: Q,
}

impl Frame {
    fn transposed(&self) -> Frame {
        Frame {
            x: self.y.clone(),
            y: self.x.clone(),
            w: self.h.clone(),
            h: self.w.clone(),
        }
    }
}

fn cond_q(w: &Q, h: &Q, items: &[Item]) -> bool {
    if items.is_empty() {
        return true;
    }
    let a = int(total_area(items));
    let wm = int(items.iter().map(|i| i.width).max().unwrap_or(0));
    let hm = int(items.iter().map(|i| i.height).max().unwrap_or(0));
    if &wm > w || &hm > h {
        return false;
    }
    let two = int(2);
    let pw = (&two * &wm - w).max(Q::zero());
    let ph = (&two * &hm - h).max(Q::zero());
    &two * a <= w * h - pw * ph
}

/// Smallest `u ≥ w_max` such that the group satisfies the condition in a
/// `u × v` box; `None` if some item is taller than `v`.
fn min_width(group: &[Item], v: &Q) -> Option<Q> {
    if group.is_empty() {
        return Some(Q::zero());
    }
    let a = int(group.iter().map(|i| i.width).max().unwrap_or(0));
    let b = int(group.iter().map(|i| i.height).max().unwrap_or(0));
    if &b > v {
        return None;
    }
    let s = int(total_area(group));
    let two = int(2);
    let beta = (&two * &b - v).max(Q::zero());
    let cand = a.clone().max((&two * &s + &two * &a * &beta) / (v + &beta));
    if cand < &two * &a {
        Some(cand)
    } else {
        Some((&two * &a).max(&two * &s / v))
    }
}

fn transpose_items(items: &[Item]) -> Vec<Item> {
    items
        .iter()
        .map(|i| Item {
            width: i.height,
            height: i.width,
            ..*i
        })
        .collect()
}

type Spot = (ItemId, Q, Q);

/// Items fixed in place plus sub-boxes with their item lists.
struct Candidate {
    fixed: Vec<Spot>,
    parts: Vec<(Frame, Vec<Item>)>,
}

impl Candidate {
    fn transposed(self) -> Candidate {
        Candidate {
            fixed: self.fixed.into_iter().map(|(id, x, y)| (id, y, x)).collect(),
            parts: self
                .parts
                .into_iter()
                .map(|(f, items)| (f.transposed(), transpose_items(&items)))
                .collect(),
        }
    }
}

fn sort_orders(items: &[Item]) -> Vec<Vec<Item>> {
    let mut out = Vec::with_capacity(3);
    for k in 0..3 {
        let mut v = items.to_vec();
        v.sort_by(|a, b| {
            let key = |i: &Item| match k {
                0 => (i.width, i.height),
                1 => (i.height, i.width),
                _ => (i.area(), i.longer_side()),
            };
            key(b).cmp(&key(a)).then(a.id.cmp(&b.id))
        });
        out.push(v);
    }
    out
}

/// Ways to send the items to two boxes so both satisfy the condition.
fn split_two(items: &[Item], fa: &Frame, fb: &Frame) -> Vec<(Vec<Item>, Vec<Item>)> {
    let mut out: Vec<(Vec<Item>, Vec<Item>)> = Vec::new();
    for order in sort_orders(items) {
        for k in 0..=order.len() {
            let (p, s) = order.split_at(k);
            for (a, b) in [(p, s), (s, p)] {
                if cond_q(&fa.w, &fa.h, a) && cond_q(&fb.w, &fb.h, b) {
                    let mut ids_a: Vec<ItemId> = a.iter().map(|i| i.id).collect();
                    ids_a.sort();
                    let seen = out.iter().any(|(x, _)| {
                        let mut ids: Vec<ItemId> = x.iter().map(|i| i.id).collect();
                        ids.sort();
                        ids == ids_a
                    });
                    if !seen {
                        out.push((a.to_vec(), b.to_vec()));
                        if out.len() >= CANDIDATES {
                            return out;
                        }
                    }
                }
            }
        }
    }
    out
}

fn wide_stack(f: &Frame, items: &[Item]) -> Vec<Candidate> {
    let two = int(2);
    let mut wide: Vec<Item> = items.iter().filter(|i| &two * int(i.width) >= f.w).copied().collect();
    if wide.is_empty() {
        return Vec::new();
    }
    wide.sort_by(|a, b| b.width.cmp(&a.width).then(b.height.cmp(&a.height)).then(a.id.cmp(&b.id)));
    let mut out = Vec::new();
    for k in (1..=wide.len()).rev() {
        let stack = &wide[..k];
        let h1 = int(stack.iter().map(|i| i.height).sum());
        if h1 > f.h {
            continue;
        }
        let mut fixed = Vec::with_capacity(k);
        let mut y = f.y.clone();
        for it in stack {
            fixed.push((it.id, f.x.clone(), y.clone()));
            y += int(it.height);
        }
        let rest: Vec<Item> = items.iter().filter(|i| !stack.iter().any(|s| s.id == i.id)).copied().collect();
        let top = Frame {
            x: f.x.clone(),
            y: &f.y + &h1,
            w: f.w.clone(),
            h: &f.h - &h1,
        };
        if rest.is_empty() || cond_q(&top.w, &top.h, &rest) {
            out.push(Candidate {
                fixed: fixed.clone(),
                parts: vec![(top.clone(), rest.clone())],
            });
        }
        let w1 = int(stack[0].width);
        let right = Frame {
            x: &f.x + &w1,
            y: f.y.clone(),
            w: &f.w - &w1,
            h: h1.clone(),
        };
        for (a, b) in split_two(&rest, &right, &top) {
            out.push(Candidate {
                fixed: fixed.clone(),
                parts: vec![(right.clone(), a), (top.clone(), b)],
            });
        }
        if out.len() >= CANDIDATES {
            break;
        }
    }
    out
}

fn corner(f: &Frame, items: &[Item]) -> Vec<Candidate> {
    let mut picks: Vec<Item> = Vec::new();
    let mut by_area = items.to_vec();
    by_area.sort_by(|a, b| b.area().cmp(&a.area()).then(a.id.cmp(&b.id)));
    picks.extend(by_area.iter().take(2));
    for key in [0, 1] {
        if let Some(it) = items.iter().max_by(|a, b| {
            let k = |i: &Item| if key == 0 { (i.width, i.height) } else { (i.height, i.width) };
            k(a).cmp(&k(b)).then(b.id.cmp(&a.id))
        }) {
            if !picks.iter().any(|p| p.id == it.id) {
                picks.push(*it);
            }
        }
    }
    let mut out = Vec::new();
    for c in picks {
        let (cw, ch) = (int(c.width), int(c.height));
        let rest: Vec<Item> = items.iter().filter(|i| i.id != c.id).copied().collect();
        let fixed = vec![(c.id, f.x.clone(), f.y.clone())];
        let layouts = [
            (
                Frame { x: &f.x + &cw, y: f.y.clone(), w: &f.w - &cw, h: f.h.clone() },
                Frame { x: f.x.clone(), y: &f.y + &ch, w: cw.clone(), h: &f.h - &ch },
            ),
            (
                Frame { x: f.x.clone(), y: &f.y + &ch, w: f.w.clone(), h: &f.h - &ch },
                Frame { x: &f.x + &cw, y: f.y.clone(), w: &f.w - &cw, h: ch.clone() },
            ),
        ];
        for (fa, fb) in layouts {
            for (a, b) in split_two(&rest, &fa, &fb) {
                out.push(Candidate {
                    fixed: fixed.clone(),
                    parts: vec![(fa.clone(), a), (fb.clone(), b)],
                });
            }
        }
    }
    out
}

fn vertical_split(f: &Frame, items: &[Item]) -> Vec<Candidate> {
    let mut out = Vec::new();
    for order in sort_orders(items) {
        for k in 1..order.len() {
            let (g1, g2) = order.split_at(k);
            let (Some(t1), Some(t2)) = (min_width(g1, &f.h), min_width(g2, &f.h)) else {
                continue;
            };
            if &t1 + &t2 <= f.w {
                let left = Frame { x: f.x.clone(), y: f.y.clone(), w: t1.clone(), h: f.h.clone() };
                let right = Frame { x: &f.x + &t1, y: f.y.clone(), w: &f.w - &t1, h: f.h.clone() };
                out.push(Candidate {
                    fixed: Vec::new(),
                    parts: vec![(left, g1.to_vec()), (right, g2.to_vec())],
                });
                if out.len() >= CANDIDATES {
                    return out;
                }
            }
        }
    }
    out
}

struct Reducer {
    heuristics: bool,
    nodes: u64,
    budget: u64,
}

impl Reducer {
    fn solve(&mut self, f: &Frame, items: Vec<Item>) -> Option<Vec<Spot>> {
        if items.is_empty() {
            return Some(Vec::new());
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let (fw, fh) = (floor_u64(&f.w), floor_u64(&f.h));
        let place = |p: Vec<Placement>| -> Vec<Spot> {
            p.into_iter()
                .map(|p| (p.item, &f.x + int(p.x), &f.y + int(p.y)))
                .collect()
        };
        if self.heuristics {
            if let Some(p) = maxrects_any(&items, fw, fh) {
                return Some(place(p));
            }
        }
        if items.len() <= LEAF_ITEMS {
            if let Ok(Some(p)) = pack_all(&items, fw, fh, false, LEAF_SEARCH) {
                return Some(place(p));
            }
        }
        let t = f.transposed();
        let ti = transpose_items(&items);
        let mut candidates = wide_stack(f, &items);
        candidates.extend(wide_stack(&t, &ti).into_iter().map(Candidate::transposed));
        candidates.extend(corner(f, &items));
        candidates.extend(vertical_split(f, &items));
        candidates.extend(vertical_split(&t, &ti).into_iter().map(Candidate::transposed));
        'next: for c in candidates {
            let mut spots = c.fixed;
            for (frame, part) in c.parts {
                match self.solve(&frame, part) {
                    Some(s) => spots.extend(s),
                    None => continue 'next,
                }
                if self.nodes > self.budget {
                    return None;
                }
            }
            return Some(spots);
        }
        None
    }
}

/// Pushes every item left, then down, onto integer coordinates. Order of
/// processing follows the rational coordinates, so disjointness is kept.
fn compact(items: &[Item], spots: &[Spot]) -> Vec<Placement> {
    let dims = |id: ItemId| {
        let it = items.iter().find(|i| i.id == id).expect("placed item exists");
        (it.width, it.height)
    };
    let n = spots.len();
    let w: Vec<u64> = spots.iter().map(|s| dims(s.0).0).collect();
    let h: Vec<u64> = spots.iter().map(|s| dims(s.0).1).collect();
    let overlap = |a0: &Q, a1: &Q, b0: &Q, b1: &Q| a0 < b1 && b0 < a1;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| spots[a].1.cmp(&spots[b].1));
    let mut nx = vec![0u64; n];
    for (k, &i) in order.iter().enumerate() {
        let (yi0, yi1) = (spots[i].2.clone(), &spots[i].2 + int(h[i]));
        nx[i] = order[..k]
            .iter()
            .filter(|&&j| overlap(&spots[j].2, &(&spots[j].2 + int(h[j])), &yi0, &yi1))
            .map(|&j| nx[j] + w[j])
            .max()
            .unwrap_or(0);
    }
    order.sort_by(|&a, &b| spots[a].2.cmp(&spots[b].2));
    let mut ny = vec![0u64; n];
    for (k, &i) in order.iter().enumerate() {
        ny[i] = order[..k]
            .iter()
            .filter(|&&j| nx[j] < nx[i] + w[i] && nx[i] < nx[j] + w[j])
            .map(|&j| ny[j] + h[j])
            .max()
            .unwrap_or(0);
    }
    (0..n).map(|i| Placement::new(spots[i].0, nx[i], ny[i])).collect()
}

/// Strip packing through the condition: the smallest height `h` in
/// `[h_max, h_max + ⌈2a/W⌉]` meeting it (the condition is monotone in `h`
/// and holds at the upper end), then [`steinberg_pack`] on `W × h`. The
/// reported height is that of the packing found.
pub fn steinberg_strip(items: &[Item], width: u64) -> Result<StripPacking> {
    if let Some(it) = items.iter().find(|i| i.width > width) {
        return Err(Error::precondition(it.id, format!("wider than the strip ({width})")));
    }
    let region = Region::Strip { w: width };
    if items.is_empty() {
        return Ok(StripPacking {
            packing: Packing::empty(region),
            height: 0,
        });
    }
    let h_max = items.iter().map(|i| i.height).max().unwrap_or(0);
    let (mut lo, mut hi) = (h_max, h_max + (2 * total_area(items)).div_ceil(width));
    debug_assert!(condition_holds(width, hi, items));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if condition_holds(width, mid, items) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let problem = SteinbergProblem::new(width, lo, items.to_vec())?;
    let packed = steinberg_pack(&problem)?;
    let packing = Packing {
        region,
        placements: packed.packing.placements,
    };
    let height = packing.height(items);
    Ok(StripPacking { packing, height })
}
