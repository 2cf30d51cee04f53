//! Containers, layouts and guillotine layout enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Eps, Rect, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContainerKind {
    /// Items stacked bottom to top.
    Horizontal,
    /// Items side by side, left to right.
    Vertical,
    /// Items at most `ε·w` wide and `ε·h` tall, packed by NFDH.
    Area(Eps),
}

impl ContainerKind {
    pub fn name(&self) -> &'static str {
        match self {
            ContainerKind::Horizontal => "horizontal",
            ContainerKind::Vertical => "vertical",
            ContainerKind::Area(_) => "area",
        }
    }
}

impl fmt::Display for ContainerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContainerKind::Area(e) => write!(f, "area({e})"),
            k => f.write_str(k.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ContainerRecord", into = "ContainerRecord")]
pub struct Container {
    pub kind: ContainerKind,
    pub rect: Rect,
}

impl Container {
    pub fn new(kind: ContainerKind, x: u64, y: u64, w: u64, h: u64) -> Self {
        Container {
            kind,
            rect: Rect::new(x, y, w, h),
        }
    }

    /// The GAP capacity of this container: height, width or area.
    pub fn capacity(&self) -> u64 {
        match self.kind {
            ContainerKind::Horizontal => self.rect.h,
            ContainerKind::Vertical => self.rect.w,
            ContainerKind::Area(_) => self.rect.area(),
        }
    }

    /// Kind and size, ignoring position.
    pub fn shape(&self) -> (ContainerKind, u64, u64) {
        (self.kind, self.rect.w, self.rect.h)
    }
}

#[derive(Serialize, Deserialize)]
struct ContainerRecord {
    kind: String,
    x: u64,
    y: u64,
    w: u64,
    h: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eps: Option<String>,
}

impl TryFrom<ContainerRecord> for Container {
    type Error = String;

    fn try_from(r: ContainerRecord) -> std::result::Result<Self, String> {
        let kind = match r.kind.as_str() {
            "horizontal" => ContainerKind::Horizontal,
            "vertical" => ContainerKind::Vertical,
            "area" => {
                let text = r.eps.ok_or("area container needs eps")?;
                ContainerKind::Area(parse_eps(&text)?)
            }
            other => return Err(format!("unknown container kind {other:?}")),
        };
        Ok(Container::new(kind, r.x, r.y, r.w, r.h))
    }
}

impl From<Container> for ContainerRecord {
    fn from(c: Container) -> Self {
        ContainerRecord {
            kind: c.kind.name().to_string(),
            x: c.rect.x,
            y: c.rect.y,
            w: c.rect.w,
            h: c.rect.h,
            eps: match c.kind {
                ContainerKind::Area(e) => Some(e.to_string()),
                _ => None,
            },
        }
    }
}

/// Parses `"p/q"` or an integer into a rational in `(0, 1]`.
pub fn parse_eps(text: &str) -> std::result::Result<Eps, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: i64 = num.parse().map_err(|_| format!("bad rational {text:?}"))?;
    let den: i64 = den.parse().map_err(|_| format!("bad rational {text:?}"))?;
    if den <= 0 || num <= 0 || num > den {
        return Err(format!("rational {text:?} must lie in (0, 1]"));
    }
    Ok(Eps::new(num, den))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layout {
    pub containers: Vec<Container>,
}

impl Layout {
    pub fn new(containers: Vec<Container>) -> Self {
        Layout { containers }
    }

    pub fn len(&self) -> usize {
        self.containers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.containers.is_empty()
    }

    /// Containers inside `region` with pairwise disjoint interiors.
    pub fn check(&self, region: &Region) -> Result<()> {
        for (i, c) in self.containers.iter().enumerate() {
            if c.rect.w == 0 || c.rect.h == 0 {
                return Err(Error::Invalid(format!("container {i} is empty")));
            }
            if !region.contains(&c.rect) {
                return Err(Error::Invalid(format!("container {i} leaves the region")));
            }
            for (j, d) in self.containers[..i].iter().enumerate() {
                if c.rect.interior_overlap(&d.rect).is_some() {
                    return Err(Error::Invalid(format!("containers {j} and {i} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Sorted container shapes; layouts with equal signatures admit the same
    /// assignments.
    pub fn signature(&self) -> Vec<(ContainerKind, u64, u64)> {
        let mut s: Vec<_> = self.containers.iter().map(Container::shape).collect();
        s.sort();
        s
    }
}

/// Guillotine partitions of `region` into at most `k_max` pieces, cutting at
/// offsets from `sizes` measured from either side. Sorted by piece count,
/// then geometry.
pub fn enumerate_geometries(region: Rect, k_max: usize, sizes: &[u64], budget: u64) -> Result<Vec<Vec<Rect>>> {
    if k_max == 0 || region.w == 0 || region.h == 0 {
        return Ok(Vec::new());
    }
    let sizes: BTreeSet<u64> = sizes.iter().copied().collect();
    let mut memo = BTreeMap::new();
    let mut count = 0u64;
    let all = partitions(region, k_max, &sizes, &mut memo, &mut count, budget)?;
    let mut out: Vec<Vec<Rect>> = all.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

type Memo = BTreeMap<(u64, u64, usize), BTreeSet<Vec<Rect>>>;

fn partitions(
    r: Rect,
    k: usize,
    sizes: &BTreeSet<u64>,
    memo: &mut Memo,
    count: &mut u64,
    budget: u64,
) -> Result<BTreeSet<Vec<Rect>>> {
    // Partitions are translation invariant, so memoise at the origin.
    let key = (r.w, r.h, k);
    if let Some(found) = memo.get(&key) {
        return Ok(translate(found, r.x, r.y));
    }
    let origin = Rect::new(0, 0, r.w, r.h);
    let mut out = BTreeSet::from([vec![origin]]);
    if k >= 2 {
        for vertical in [true, false] {
            let len = if vertical { r.w } else { r.h };
            let cuts: BTreeSet<u64> = sizes
                .iter()
                .flat_map(|&s| [s, len.saturating_sub(s)])
                .filter(|&c| c > 0 && c < len)
                .collect();
            for c in cuts {
                let (a, b) = if vertical {
                    (Rect::new(0, 0, c, r.h), Rect::new(c, 0, r.w - c, r.h))
                } else {
                    (Rect::new(0, 0, r.w, c), Rect::new(0, c, r.w, r.h - c))
                };
                let left = partitions(a, k - 1, sizes, memo, count, budget)?;
                for pa in &left {
                    let right = partitions(b, k - pa.len(), sizes, memo, count, budget)?;
                    for pb in &right {
                        let mut merged: Vec<Rect> = pa.iter().chain(pb).copied().collect();
                        merged.sort();
                        if out.insert(merged) {
                            *count += 1;
                            if *count > budget {
                                return Err(Error::Budget {
                                    what: "layout enumeration",
                                    needed: *count as u128,
                                    budget: budget as u128,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    memo.insert(key, out.clone());
    Ok(translate(&out, r.x, r.y))
}

fn translate(set: &BTreeSet<Vec<Rect>>, dx: u64, dy: u64) -> BTreeSet<Vec<Rect>> {
    if dx == 0 && dy == 0 {
        return set.clone();
    }
    set.iter()
        .map(|p| {
            p.iter()
                .map(|r| Rect::new(r.x + dx, r.y + dy, r.w, r.h))
                .collect()
        })
        .collect()
}

/// Every guillotine geometry of [`enumerate_geometries`] with every
/// assignment of container kinds; area containers get granularity `area_eps`.
pub fn enumerate_layouts(
    region: Rect,
    k_max: usize,
    sizes: &[u64],
    area_eps: Eps,
    budget: u64,
) -> Result<Vec<Layout>> {
    let kinds = [
        ContainerKind::Horizontal,
        ContainerKind::Vertical,
        ContainerKind::Area(area_eps),
    ];
    let mut out = Vec::new();
    for pieces in enumerate_geometries(region, k_max, sizes, budget)? {
        let combos = 3usize.pow(pieces.len() as u32);
        if (out.len() + combos) as u64 > budget {
            return Err(Error::Budget {
                what: "layout enumeration",
                needed: (out.len() + combos) as u128,
                budget: budget as u128,
            });
        }
        for code in 0..combos {
            let mut rest = code;
            let containers = pieces
                .iter()
                .map(|r| {
                    let kind = kinds[rest % 3];
                    rest /= 3;
                    Container { kind, rect: *r }
                })
                .collect();
            out.push(Layout::new(containers));
        }
    }
    Ok(out)
}
