//! JSON file formats for instances, container layouts and packings.
//!
//! An instance document:
//!
//! ```json
//! {
//!   "kind": "knapsack",
//!   "N": 10,
//!   "rotations": true,
//!   "items": [{ "id": 0, "w": 3, "h": 4, "p": 5 }]
//! }
//! ```
//!
//! `kind` is `knapsack` (needs `N`, optional `mode`: `weighted` or
//! `cardinality`), `strip` (needs `W`) or `lpack` (needs `N`, `wL`, `hL`).
//! `rotations` defaults to false; an item may carry `"rotatable": false` to
//! opt out. `p` defaults to 1. Unknown fields are rejected. Lengths are at
//! most 2^24, profits at most 2^32, and there are at most 2^16 items.

use serde::{Deserialize, Serialize};

use crate::containers::Layout;
use crate::error::{Error, Result};
use crate::model::{Instance, Item, ItemId, KnapsackInstance, LInstance, Mode, Packing, StripInstance};

pub const MAX_LENGTH: u64 = 1 << 24;
pub const MAX_PROFIT: u64 = 1 << 32;
pub const MAX_ITEMS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Knapsack,
    Strip,
    Lpack,
}

fn yes() -> bool {
    true
}

fn one() -> u64 {
    1
}

fn is_true(b: &bool) -> bool {
    *b
}

fn is_weighted(m: &Mode) -> bool {
    *m == Mode::Weighted
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemRecord {
    id: u32,
    w: u64,
    h: u64,
    #[serde(default = "one")]
    p: u64,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    rotatable: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRecord {
    kind: Kind,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    w: Option<u64>,
    #[serde(rename = "wL", default, skip_serializing_if = "Option::is_none")]
    w_l: Option<u64>,
    #[serde(rename = "hL", default, skip_serializing_if = "Option::is_none")]
    h_l: Option<u64>,
    #[serde(default)]
    rotations: bool,
    #[serde(default, skip_serializing_if = "is_weighted")]
    mode: Mode,
    items: Vec<ItemRecord>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn need(value: Option<u64>, field: &str, kind: &str) -> Result<u64> {
    let v = value.ok_or_else(|| Error::Invalid(format!("{kind} instance needs {field}")))?;
    if v > MAX_LENGTH {
        return Err(Error::Invalid(format!("{field} = {v} exceeds {MAX_LENGTH}")));
    }
    Ok(v)
}

fn forbid(value: Option<u64>, field: &str, kind: &str) -> Result<()> {
    match value {
        Some(_) => Err(Error::Invalid(format!("{field} is not a {kind} field"))),
        None => Ok(()),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let rec: InstanceRecord = serde_json::from_str(text).map_err(json_error)?;
    if rec.items.len() > MAX_ITEMS {
        return Err(Error::Invalid(format!("more than {MAX_ITEMS} items")));
    }
    let mut items = Vec::with_capacity(rec.items.len());
    for r in &rec.items {
        if r.w > MAX_LENGTH || r.h > MAX_LENGTH || r.p > MAX_PROFIT {
            return Err(Error::precondition(ItemId(r.id), "size or profit out of range"));
        }
        items.push(Item::new(r.id, r.w, r.h, r.p).rotatable(r.rotatable));
    }
    match rec.kind {
        Kind::Knapsack => {
            forbid(rec.w, "W", "knapsack")?;
            forbid(rec.w_l, "wL", "knapsack")?;
            forbid(rec.h_l, "hL", "knapsack")?;
            let n = need(rec.n, "N", "knapsack")?;
            Ok(KnapsackInstance::with_options(n, items, rec.mode, rec.rotations)?.into())
        }
        Kind::Strip => {
            forbid(rec.n, "N", "strip")?;
            forbid(rec.w_l, "wL", "strip")?;
            forbid(rec.h_l, "hL", "strip")?;
            if rec.rotations || rec.mode != Mode::Weighted {
                return Err(Error::invalid("strip instances take neither rotations nor mode"));
            }
            let w = need(rec.w, "W", "strip")?;
            Ok(StripInstance::new(w, items)?.into())
        }
        Kind::Lpack => {
            forbid(rec.w, "W", "lpack")?;
            if rec.rotations || rec.mode != Mode::Weighted {
                return Err(Error::invalid("lpack instances take neither rotations nor mode"));
            }
            let n = need(rec.n, "N", "lpack")?;
            let w_l = need(rec.w_l, "wL", "lpack")?;
            let h_l = need(rec.h_l, "hL", "lpack")?;
            if let Some(it) = items.iter().find(|i| i.width > n || i.height > n) {
                return Err(Error::ItemTooLarge(it.id));
            }
            Ok(LInstance::new(n, w_l, h_l, items)?.into())
        }
    }
}

fn record(it: &Item) -> ItemRecord {
    ItemRecord {
        id: it.id.0,
        w: it.width,
        h: it.height,
        p: it.profit,
        rotatable: it.rotatable,
    }
}

/// Pretty JSON with a trailing newline.
pub fn instance_to_string(instance: &Instance) -> String {
    let blank = InstanceRecord {
        kind: Kind::Knapsack,
        n: None,
        w: None,
        w_l: None,
        h_l: None,
        rotations: false,
        mode: Mode::Weighted,
        items: instance.items().iter().map(record).collect(),
    };
    let rec = match instance {
        Instance::Knapsack(k) => InstanceRecord {
            n: Some(k.side),
            rotations: k.rotations,
            mode: k.mode,
            ..blank
        },
        Instance::Strip(s) => InstanceRecord {
            kind: Kind::Strip,
            w: Some(s.width),
            ..blank
        },
        Instance::L(l) => InstanceRecord {
            kind: Kind::Lpack,
            n: Some(l.side),
            w_l: Some(l.w_l),
            h_l: Some(l.h_l),
            ..blank
        },
    };
    pretty(&rec)
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// `{"containers": [{"kind": "area", "x": 0, "y": 0, "w": 4, "h": 4, "eps": "1/4"}]}`
pub fn parse_layout(text: &str) -> Result<Layout> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn layout_to_string(layout: &Layout) -> String {
    pretty(layout)
}

/// `{"region": {"kind": "rect", "w": 10, "h": 10}, "placements": [{"id": 0, "x": 0, "y": 0}]}`
pub fn parse_packing(text: &str) -> Result<Packing> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn packing_to_string(packing: &Packing) -> String {
    pretty(packing)
}
