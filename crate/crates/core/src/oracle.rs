//! Exact placement search on the integer grid.
//!
//! Cells are scanned bottom row first, left to right. At the first free cell
//! either some unplaced item gets its bottom-left corner there, or the cell
//! is declared waste. Every integral packing is reachable this way, so the
//! search decides feasibility exactly. Failed states are memoised on the
//! occupied cells and the set of placed items.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{Item, Placement};

/// Default cap on search nodes.
pub const DEFAULT_NODES: u64 = 5_000_000;

/// Largest item count the search accepts.
pub const MAX_ITEMS: usize = 64;

struct Grid {
    w: usize,
    h: usize,
    cells: Vec<u64>,
}

impl Grid {
    fn new(w: usize, h: usize) -> Self {
        Grid {
            w,
            h,
            cells: vec![0; (w * h).div_ceil(64)],
        }
    }

    fn get(&self, idx: usize) -> bool {
        self.cells[idx / 64] >> (idx % 64) & 1 == 1
    }

    fn flip(&mut self, idx: usize) {
        self.cells[idx / 64] ^= 1 << (idx % 64);
    }

    fn first_free(&self, from: usize) -> Option<usize> {
        (from..self.w * self.h).find(|&i| !self.get(i))
    }

    fn fits(&self, x: usize, y: usize, w: usize, h: usize) -> bool {
        if x + w > self.w || y + h > self.h {
            return false;
        }
        (y..y + h).all(|r| (x..x + w).all(|c| !self.get(r * self.w + c)))
    }

    fn toggle(&mut self, x: usize, y: usize, w: usize, h: usize) {
        for r in y..y + h {
            for c in x..x + w {
                self.flip(r * self.w + c);
            }
        }
    }
}

struct Search<'a> {
    items: &'a [Item],
    /// Per item: allowed orientations as (w, h, rotated).
    shapes: Vec<Vec<(usize, usize, bool)>>,
    /// Index of an earlier identical item, to skip symmetric branches.
    twin: Vec<Option<usize>>,
    grid: Grid,
    placed: Vec<Option<Placement>>,
    slack: u64,
    nodes: u64,
    budget: u64,
    failed: HashSet<(Vec<u64>, u64)>,
}

impl Search<'_> {
    fn mask(&self) -> u64 {
        self.placed
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_some())
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    fn run(&mut self, from: usize, remaining: usize) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget {
                what: "placement search nodes",
                needed: self.nodes as u128,
                budget: self.budget as u128,
            });
        }
        let Some(cell) = self.grid.first_free(from) else {
            return Ok(false);
        };
        let key = (self.grid.cells.clone(), self.mask());
        if self.failed.contains(&key) {
            return Ok(false);
        }
        let (x, y) = (cell % self.grid.w, cell / self.grid.w);
        for i in 0..self.items.len() {
            if self.placed[i].is_some() {
                continue;
            }
            if self.twin[i].is_some_and(|t| self.placed[t].is_none()) {
                continue;
            }
            for s in 0..self.shapes[i].len() {
                let (w, h, rotated) = self.shapes[i][s];
                if !self.grid.fits(x, y, w, h) {
                    continue;
                }
                self.grid.toggle(x, y, w, h);
                self.placed[i] = Some(Placement::new(self.items[i].id, x as u64, y as u64).rotated(rotated));
                let ok = self.run(cell + 1, remaining - 1)?;
                if ok {
                    return Ok(true);
                }
                self.placed[i] = None;
                self.grid.toggle(x, y, w, h);
            }
        }
        if self.slack > 0 {
            self.slack -= 1;
            self.grid.flip(cell);
            let ok = self.run(cell + 1, remaining)?;
            self.grid.flip(cell);
            self.slack += 1;
            if ok {
                return Ok(true);
            }
        }
        self.failed.insert(key);
        Ok(false)
    }
}

/// Finds a placement of all `items` inside `w × h`, or proves there is none.
/// Items with `rotatable` set may be turned when `rotations` is true.
pub fn pack_all(items: &[Item], w: u64, h: u64, rotations: bool, budget: u64) -> Result<Option<Vec<Placement>>> {
    if items.len() > MAX_ITEMS {
        return Err(Error::Invalid(format!("placement search supports at most {MAX_ITEMS} items")));
    }
    let area: u128 = items.iter().map(|i| i.area() as u128).sum();
    let cells = w as u128 * h as u128;
    if area > cells {
        return Ok(None);
    }
    if items.is_empty() {
        return Ok(Some(Vec::new()));
    }
    if cells > budget as u128 {
        return Err(Error::Budget {
            what: "placement grid cells",
            needed: cells,
            budget: budget as u128,
        });
    }
    let mut order: Vec<Item> = items.to_vec();
    order.sort_by(|a, b| b.area().cmp(&a.area()).then(b.longer_side().cmp(&a.longer_side())).then(a.id.cmp(&b.id)));
    let shapes: Vec<Vec<(usize, usize, bool)>> = order
        .iter()
        .map(|it| {
            let mut s = vec![(it.width as usize, it.height as usize, false)];
            if rotations && it.rotatable && it.width != it.height {
                s.push((it.height as usize, it.width as usize, true));
            }
            s.retain(|&(a, b, _)| a as u64 <= w && b as u64 <= h);
            s
        })
        .collect();
    if shapes.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let twin = (0..order.len())
        .map(|i| {
            (0..i).rev().find(|&j| {
                order[j].width == order[i].width
                    && order[j].height == order[i].height
                    && order[j].rotatable == order[i].rotatable
            })
        })
        .collect();
    let mut search = Search {
        items: &order,
        shapes,
        twin,
        grid: Grid::new(w as usize, h as usize),
        placed: vec![None; order.len()],
        slack: (cells - area) as u64,
        nodes: 0,
        budget,
        failed: HashSet::new(),
    };
    if search.run(0, order.len())? {
        Ok(Some(search.placed.into_iter().map(|p| p.expect("all placed")).collect()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{KnapsackInstance, Packing, Region};
    use crate::validate::validate_packing;

    fn check(items: &[Item], w: u64, h: u64, p: &[Placement]) {
        let inst = KnapsackInstance::with_options(w.max(h), items.to_vec(), Default::default(), true).unwrap();
        let packing = Packing {
            region: Region::Rect { w, h },
            placements: p.to_vec(),
        };
        assert!(validate_packing(&inst.into(), &packing).unwrap().is_feasible());
    }

    #[test]
    fn exact_tiling_found() {
        let items = vec![Item::new(0, 2, 3, 1), Item::new(1, 3, 2, 1), Item::new(2, 3, 3, 1), Item::new(3, 2, 2, 1)];
        let p = pack_all(&items, 5, 5, false, DEFAULT_NODES).unwrap().unwrap();
        check(&items, 5, 5, &p);
    }

    #[test]
    fn pinwheel_needs_no_guillotine() {
        // Four 1×2 / 2×1 bars around a unit hole tile 3×3.
        let items = vec![
            Item::new(0, 2, 1, 1),
            Item::new(1, 1, 2, 1),
            Item::new(2, 2, 1, 1),
            Item::new(3, 1, 2, 1),
            Item::new(4, 1, 1, 1),
        ];
        let p = pack_all(&items, 3, 3, false, DEFAULT_NODES).unwrap().unwrap();
        check(&items, 3, 3, &p);
    }

    #[test]
    fn infeasible_by_geometry() {
        let items = vec![Item::new(0, 6, 6, 1), Item::new(1, 6, 6, 1)];
        assert_eq!(pack_all(&items, 10, 11, false, DEFAULT_NODES).unwrap(), None);
    }

    #[test]
    fn rotation_makes_it_fit() {
        let items = vec![Item::new(0, 1, 4, 1).rotatable(true), Item::new(1, 4, 3, 1)];
        assert_eq!(pack_all(&items, 4, 4, false, DEFAULT_NODES).unwrap(), None);
        let p = pack_all(&items, 4, 4, true, DEFAULT_NODES).unwrap().unwrap();
        check(&items, 4, 4, &p);
    }

    #[test]
    fn budget_is_reported() {
        let items: Vec<Item> = (0..12).map(|i| Item::new(i, 3, 2, 1)).collect();
        assert!(pack_all(&items, 9, 9, false, 3).unwrap_err().is_budget());
    }
}
