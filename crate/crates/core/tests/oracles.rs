mod common;

use common::{best_subset, disjoint_inside, place_all, strip_optimum, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rectpack::knap2d::brute_force_2dgk;
use rectpack::oracle::pack_all;
use rectpack::strip::brute_force_strip;
use rectpack::{Instance, Item, KnapsackInstance, Mode, StripInstance};

#[test]
fn grid_oracle_basics() {
    let squares: Vec<Item> = (0..4).map(|i| Item::new(i, 5, 5, 1)).collect();
    assert!(place_all(&squares, Shape::Rect { w: 10, h: 10 }, false).is_some());
    let five: Vec<Item> = (0..5).map(|i| Item::new(i, 5, 5, 1)).collect();
    assert!(place_all(&five, Shape::Rect { w: 10, h: 10 }, false).is_none());
    // A 3x1 bar only fits the 1-wide arm when turned.
    let bar = [Item::new(0, 3, 1, 1).rotatable(true)];
    let l = Shape::L { n: 3, w_l: 1, h_l: 0 };
    assert!(place_all(&bar, l, false).is_none());
    assert!(place_all(&bar, l, true).is_some());
}

#[test]
fn knapsack_oracles_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..200 {
        let side = rng.gen_range(2..=10);
        let n = rng.gen_range(1..=5);
        let items = common::random_items(&mut rng, n, side, side, 10);
        let rotations = rng.gen_bool(0.5);
        let inst = KnapsackInstance::with_options(side, items.clone(), Mode::Weighted, rotations).unwrap();
        let lib = brute_force_2dgk(&inst).unwrap();
        let (grid, placements) = best_subset(&items, Shape::Rect { w: side, h: side }, rotations);
        assert_eq!(lib.profit, grid, "N={side} rot={rotations} {items:?}");
        assert!(disjoint_inside(&items, &placements, inst.region()));
        let report = rectpack::validate_packing(&Instance::Knapsack(inst), &lib.packing).unwrap();
        assert!(report.is_feasible());
    }
}

#[test]
fn strip_oracles_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..150 {
        let width = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=5);
        let items: Vec<Item> = common::random_items(&mut rng, n, width, 6, 1)
            .into_iter()
            .map(|i| i.rotatable(false))
            .collect();
        let inst = StripInstance::new(width, items.clone()).unwrap();
        let lib = brute_force_strip(&inst).unwrap();
        assert_eq!(lib.height, strip_optimum(&items, width), "W={width} {items:?}");
    }
}

#[test]
fn pack_all_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..300 {
        let (w, h) = (rng.gen_range(1..=9), rng.gen_range(1..=9));
        let n = rng.gen_range(1..=6);
        let items = common::random_items(&mut rng, n, w, h, 1);
        let rotations = rng.gen_bool(0.5);
        let lib = pack_all(&items, w, h, rotations, u64::MAX).unwrap();
        let grid = place_all(&items, Shape::Rect { w, h }, rotations);
        assert_eq!(lib.is_some(), grid.is_some(), "{w}x{h} rot={rotations} {items:?}");
        if let Some(p) = lib {
            assert!(disjoint_inside(&items, &p, rectpack::Region::Rect { w, h }));
        }
    }
}
