//! Maximal-rectangles placement heuristic on an integer box.

use crate::model::{Item, Placement, Rect};

/// Item orders tried by [`maxrects_any`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Area,
    Height,
    Width,
    LongSide,
    Perimeter,
}

pub const ORDERS: [Order; 5] = [Order::Area, Order::Height, Order::Width, Order::LongSide, Order::Perimeter];

fn key(order: Order, it: &Item) -> (u64, u64) {
    match order {
        Order::Area => (it.area(), it.longer_side()),
        Order::Height => (it.height, it.width),
        Order::Width => (it.width, it.height),
        Order::LongSide => (it.longer_side(), it.width.min(it.height)),
        Order::Perimeter => (it.width + it.height, it.area()),
    }
}

pub fn sorted(items: &[Item], order: Order) -> Vec<Item> {
    let mut v = items.to_vec();
    v.sort_by(|a, b| key(order, b).cmp(&key(order, a)).then(a.id.cmp(&b.id)));
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Best short side fit.
    ShortSide,
    /// Lowest top edge, then leftmost.
    BottomLeft,
    /// Most contact with placed items and the box walls.
    Contact,
}

pub const RULES: [Rule; 3] = [Rule::ShortSide, Rule::BottomLeft, Rule::Contact];

/// Places every item of `items` (in the given order) into `w × h`, or gives up.
pub fn maxrects(items: &[Item], w: u64, h: u64, rule: Rule) -> Option<Vec<Placement>> {
    let mut free = vec![Rect::new(0, 0, w, h)];
    let mut placed: Vec<Rect> = Vec::with_capacity(items.len());
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        let mut best: Option<((u64, u64), Rect)> = None;
        for f in &free {
            if it.width > f.w || it.height > f.h {
                continue;
            }
            let r = Rect::new(f.x, f.y, it.width, it.height);
            let score = match rule {
                Rule::ShortSide => {
                    let (dw, dh) = (f.w - it.width, f.h - it.height);
                    (dw.min(dh), dw.max(dh))
                }
                Rule::BottomLeft => (r.top(), r.x),
                Rule::Contact => (u64::MAX - contact(&r, &placed, w, h), r.top()),
            };
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, r));
            }
        }
        let (_, r) = best?;
        split_free(&mut free, &r);
        placed.push(r);
        out.push(Placement::new(it.id, r.x, r.y));
    }
    Some(out)
}

fn overlap_len(a0: u64, a1: u64, b0: u64, b1: u64) -> u64 {
    a1.min(b1).saturating_sub(a0.max(b0))
}

fn contact(r: &Rect, placed: &[Rect], w: u64, h: u64) -> u64 {
    let mut c = 0;
    if r.x == 0 || r.right() == w {
        c += r.h;
    }
    if r.y == 0 || r.top() == h {
        c += r.w;
    }
    for p in placed {
        if p.right() == r.x || r.right() == p.x {
            c += overlap_len(p.y, p.top(), r.y, r.top());
        }
        if p.top() == r.y || r.top() == p.y {
            c += overlap_len(p.x, p.right(), r.x, r.right());
        }
    }
    c
}

fn split_free(free: &mut Vec<Rect>, used: &Rect) {
    let mut next = Vec::with_capacity(free.len() + 4);
    for f in free.drain(..) {
        if f.interior_overlap(used).is_none() {
            next.push(f);
            continue;
        }
        if used.x > f.x {
            next.push(Rect::new(f.x, f.y, used.x - f.x, f.h));
        }
        if used.right() < f.right() {
            next.push(Rect::new(used.right(), f.y, f.right() - used.right(), f.h));
        }
        if used.y > f.y {
            next.push(Rect::new(f.x, f.y, f.w, used.y - f.y));
        }
        if used.top() < f.top() {
            next.push(Rect::new(f.x, used.top(), f.w, f.top() - used.top()));
        }
    }
    // Drop rectangles contained in others.
    let mut keep = vec![true; next.len()];
    for i in 0..next.len() {
        for j in 0..next.len() {
            if i != j && keep[j] && next[j].contains(&next[i]) && (next[i] != next[j] || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    *free = next.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect();
}

/// Tries every order and rule; the first complete placement wins.
pub fn maxrects_any(items: &[Item], w: u64, h: u64) -> Option<Vec<Placement>> {
    for order in ORDERS {
        let list = sorted(items, order);
        for rule in RULES {
            if let Some(p) = maxrects(&list, w, h, rule) {
                return Some(p);
            }
        }
    }
    None
}
