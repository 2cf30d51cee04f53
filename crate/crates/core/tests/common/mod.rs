//! Generators and independent oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rectpack::gap::GapInstance;
use rectpack::{Item, Placement, Region};

/// A down-closed region on the unit grid.
#[derive(Clone, Copy, Debug)]
pub enum Shape {
    Rect { w: u64, h: u64 },
    L { n: u64, w_l: u64, h_l: u64 },
}

impl Shape {
    fn bounds(self) -> (usize, usize) {
        match self {
            Shape::Rect { w, h } => (w as usize, h as usize),
            Shape::L { n, .. } => (n as usize, n as usize),
        }
    }

    fn has(self, x: usize, y: usize) -> bool {
        match self {
            Shape::Rect { w, h } => (x as u64) < w && (y as u64) < h,
            Shape::L { n, w_l, h_l } => {
                let (x, y) = (x as u64, y as u64);
                x < n && y < n && (y < h_l || x < w_l)
            }
        }
    }

    fn cells(self) -> u64 {
        let (w, h) = self.bounds();
        (0..h)
            .flat_map(|y| (0..w).map(move |x| (x, y)))
            .filter(|&(x, y)| self.has(x, y))
            .count() as u64
    }
}

/// Occupancy bitmap with one bit per cell, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Grid {
    w: usize,
    h: usize,
    bits: Vec<u64>,
}

impl Grid {
    fn new(shape: Shape) -> Self {
        let (w, h) = shape.bounds();
        let mut g = Grid {
            w,
            h,
            bits: vec![0; (w * h).div_ceil(64).max(1)],
        };
        for y in 0..h {
            for x in 0..w {
                if !shape.has(x, y) {
                    g.set(x + y * w);
                }
            }
        }
        g
    }

    fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    fn first_free(&self) -> Option<usize> {
        (0..self.w * self.h).find(|&i| !self.get(i))
    }

    fn fits(&self, x: usize, y: usize, w: usize, h: usize) -> bool {
        x + w <= self.w && y + h <= self.h && (y..y + h).all(|r| (x..x + w).all(|c| !self.get(c + r * self.w)))
    }

    fn fill(&mut self, x: usize, y: usize, w: usize, h: usize, on: bool) {
        for r in y..y + h {
            for c in x..x + w {
                if on {
                    self.set(c + r * self.w);
                } else {
                    self.clear(c + r * self.w);
                }
            }
        }
    }
}

struct Filler<'a> {
    items: &'a [Item],
    rotations: bool,
    failed: HashSet<(Grid, u32)>,
    placed: Vec<Placement>,
}

impl Filler<'_> {
    /// Fills the lowest-then-leftmost free cell with the corner of some
    /// remaining item, or declares it waste.
    fn run(&mut self, grid: &mut Grid, left: u32, free: u64, need: u64) -> bool {
        if left == 0 {
            return true;
        }
        if free < need || self.failed.contains(&(grid.clone(), left)) {
            return false;
        }
        let Some(cell) = grid.first_free() else {
            return false;
        };
        let (x, y) = (cell % grid.w, cell / grid.w);
        let mut tried = HashSet::new();
        for i in 0..self.items.len() {
            if left >> i & 1 == 0 {
                continue;
            }
            let it = &self.items[i];
            for rot in [false, true] {
                if rot && (!self.rotations || !it.rotatable || it.width == it.height) {
                    continue;
                }
                let (w, h) = it.dims(rot);
                if !tried.insert((w, h)) {
                    continue;
                }
                let (w, h) = (w as usize, h as usize);
                if !grid.fits(x, y, w, h) {
                    continue;
                }
                grid.fill(x, y, w, h, true);
                self.placed.push(Placement::new(it.id, x as u64, y as u64).rotated(rot));
                let a = it.area();
                if self.run(grid, left & !(1 << i), free - a, need - a) {
                    return true;
                }
                self.placed.pop();
                grid.fill(x, y, w, h, false);
            }
        }
        if free > need {
            grid.set(cell);
            let ok = self.run(grid, left, free - 1, need);
            grid.clear(cell);
            if ok {
                return true;
            }
        }
        self.failed.insert((grid.clone(), left));
        false
    }
}

/// Places every item of `items` in `shape`, if possible.
pub fn place_all(items: &[Item], shape: Shape, rotations: bool) -> Option<Vec<Placement>> {
    assert!(items.len() <= 32);
    let need: u64 = items.iter().map(Item::area).sum();
    let free = shape.cells();
    let mut grid = Grid::new(shape);
    let mut f = Filler {
        items,
        rotations,
        failed: HashSet::new(),
        placed: Vec::new(),
    };
    f.run(&mut grid, ((1u64 << items.len()) - 1) as u32, free, need)
        .then_some(f.placed)
}

/// Maximum-profit subset of `items` packable in `shape`.
pub fn best_subset(items: &[Item], shape: Shape, rotations: bool) -> (u64, Vec<Placement>) {
    let n = items.len();
    let mut subsets: Vec<(u64, u32)> = (0..1u32 << n)
        .map(|m| {
            let p = (0..n).filter(|i| m >> i & 1 == 1).map(|i| items[i].profit).sum();
            (p, m)
        })
        .collect();
    subsets.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let cells = shape.cells();
    for (p, m) in subsets {
        let chosen: Vec<Item> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| items[i]).collect();
        if chosen.iter().map(Item::area).sum::<u64>() > cells {
            continue;
        }
        if let Some(pl) = place_all(&chosen, shape, rotations) {
            return (p, pl);
        }
    }
    (0, Vec::new())
}

/// Optimal strip height by exhaustive placement at each candidate height.
pub fn strip_optimum(items: &[Item], width: u64) -> u64 {
    let a: u64 = items.iter().map(Item::area).sum();
    let h_max = items.iter().map(|i| i.height).max().unwrap_or(0);
    let h_sum: u64 = items.iter().map(|i| i.height).sum();
    let lo = h_max.max(a.div_ceil(width));
    (lo..=h_sum.max(lo))
        .find(|&h| place_all(items, Shape::Rect { w: width, h }, false).is_some())
        .expect("stacking every item always fits")
}

/// Optimal GAP profit by trying all `(k+1)^n` assignments.
pub fn gap_exhaustive(g: &GapInstance, caps: &[u64]) -> u64 {
    let (n, k) = (g.elements(), g.bins());
    let mut best = 0;
    let mut bins: Vec<Option<usize>> = vec![None; n];
    loop {
        let ok = bins.iter().enumerate().all(|(i, b)| b.is_none_or(|j| g.sizes[i][j].is_some()))
            && g.loads_of(&bins).iter().zip(caps).all(|(l, c)| l <= c);
        if ok {
            best = best.max(g.profit_of(&bins));
        }
        // Odometer over None, Some(0), ..., Some(k-1).
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            bins[i] = match bins[i] {
                None if k > 0 => Some(0),
                Some(j) if j + 1 < k => Some(j + 1),
                _ => None,
            };
            if bins[i].is_some() {
                break;
            }
            i += 1;
        }
    }
}

pub fn random_gap(rng: &mut ChaCha8Rng, max_n: usize, max_k: usize, max_cap: u64) -> GapInstance {
    let k = rng.gen_range(1..=max_k);
    let n = rng.gen_range(0..=max_n);
    let caps = (0..k).map(|_| rng.gen_range(1..=max_cap)).collect();
    let mut g = GapInstance::new(caps);
    for _ in 0..n {
        let sizes = (0..k)
            .map(|_| rng.gen_bool(0.85).then(|| rng.gen_range(1..=max_cap)))
            .collect();
        let profits = (0..k).map(|_| rng.gen_range(0..=20)).collect();
        g.push(sizes, profits);
    }
    g
}

pub fn random_items(rng: &mut ChaCha8Rng, n: usize, max_w: u64, max_h: u64, max_p: u64) -> Vec<Item> {
    (0..n as u32)
        .map(|id| {
            Item::new(id, rng.gen_range(1..=max_w), rng.gen_range(1..=max_h), rng.gen_range(1..=max_p))
                .rotatable(rng.gen_bool(0.7))
        })
        .collect()
}

/// Items each with one side longer than `N/2`.
pub fn random_long_items(rng: &mut ChaCha8Rng, n: usize, side: u64, max_p: u64) -> Vec<Item> {
    (0..n as u32)
        .map(|id| {
            let long = rng.gen_range(side / 2 + 1..=side);
            let short = rng.gen_range(1..=(side / 2).max(1));
            let p = rng.gen_range(1..=max_p);
            if rng.gen_bool(0.5) {
                Item::new(id, long, short, p)
            } else {
                Item::new(id, short, long, p)
            }
        })
        .collect()
}

/// Steinberg's condition `2a ≤ wh − (2w_max − w)_+ (2h_max − h)_+`.
pub fn steinberg_condition(w: u64, h: u64, items: &[Item]) -> bool {
    let a: i128 = items.iter().map(|i| i.area() as i128).sum();
    let wm = items.iter().map(|i| i.width).max().unwrap_or(0) as i128;
    let hm = items.iter().map(|i| i.height).max().unwrap_or(0) as i128;
    let (w, h) = (w as i128, h as i128);
    2 * a <= w * h - (2 * wm - w).max(0) * (2 * hm - h).max(0)
}

/// A box and items meeting Steinberg's condition, drawn from several size
/// styles (arbitrary, wide, tall, small, large, mixed skewed, medium).
pub fn random_steinberg(rng: &mut ChaCha8Rng) -> (u64, u64, Vec<Item>) {
    let w = rng.gen_range(1..=30);
    let h = rng.gen_range(1..=30);
    let style = rng.gen_range(0..7);
    let mut items = Vec::new();
    for t in 0..rng.gen_range(1..60) {
        let (iw, ih) = match style {
            0 => (rng.gen_range(1..=w), rng.gen_range(1..=h)),
            1 => (rng.gen_range((w / 2).max(1)..=w), rng.gen_range(1..=h)),
            2 => (rng.gen_range(1..=w), rng.gen_range((h / 2).max(1)..=h)),
            3 => (rng.gen_range(1..=(w / 3).max(1)), rng.gen_range(1..=(h / 3).max(1))),
            4 => (rng.gen_range((w / 3).max(1)..=w), rng.gen_range((h / 3).max(1)..=h)),
            5 if rng.gen_bool(0.5) => (rng.gen_range((w / 2).max(1)..=w), rng.gen_range(1..=(h / 4).max(1))),
            5 => (rng.gen_range(1..=(w / 4).max(1)), rng.gen_range((h / 2).max(1)..=h)),
            _ => (
                rng.gen_range((w / 4).max(1)..=(w / 2).max(1)),
                rng.gen_range((h / 4).max(1)..=(h / 2).max(1)),
            ),
        };
        items.push(Item::new(t, iw, ih, 1));
        if !steinberg_condition(w, h, &items) {
            items.pop();
        }
    }
    (w, h, items)
}

/// Checks placements against `region` without the library validator.
pub fn disjoint_inside(items: &[Item], placements: &[Placement], region: Region) -> bool {
    let rects: Vec<_> = placements
        .iter()
        .map(|p| {
            let it = items.iter().find(|i| i.id == p.item).expect("placed item exists");
            let (w, h) = it.dims(p.rotated);
            (p.x, p.y, w, h)
        })
        .collect();
    let inside = rects.iter().all(|&(x, y, w, h)| match region {
        Region::Rect { w: bw, h: bh } => x + w <= bw && y + h <= bh,
        Region::Strip { w: bw } => x + w <= bw,
        Region::L { n, w_l, h_l } => (x + w <= n && y + h <= h_l) || (x + w <= w_l && y + h <= n),
    });
    let apart = rects.iter().enumerate().all(|(i, a)| {
        rects[i + 1..]
            .iter()
            .all(|b| a.0 + a.2 <= b.0 || b.0 + b.2 <= a.0 || a.1 + a.3 <= b.1 || b.1 + b.3 <= a.1)
    });
    let mut ids: Vec<_> = placements.iter().map(|p| p.item).collect();
    ids.sort();
    ids.dedup();
    inside && apart && ids.len() == placements.len()
}
