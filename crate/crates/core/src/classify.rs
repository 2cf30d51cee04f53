//! Five-way item classification and the averaging choice of its thresholds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Item, ItemId, KnapsackInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Small,
    Large,
    Horizontal,
    Vertical,
    Intermediate,
}

impl Label {
    pub fn is_skewed(self) -> bool {
        matches!(self, Label::Horizontal | Label::Vertical)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub eps_large: BigRational,
    pub eps_small: BigRational,
    pub labels: Vec<(ItemId, Label)>,
}

impl Classification {
    pub fn ids(&self, label: Label) -> Vec<ItemId> {
        self.labels
            .iter()
            .filter(|(_, l)| *l == label)
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn skewed(&self) -> Vec<ItemId> {
        self.labels
            .iter()
            .filter(|(_, l)| l.is_skewed())
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn label_of(&self, id: ItemId) -> Option<Label> {
        self.labels.iter().find(|(i, _)| *i == id).map(|(_, l)| *l)
    }
}

pub(crate) fn big(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `side ≤ eps·n`, exactly.
fn at_most(side: u64, eps: &BigRational, n: u64) -> bool {
    big(side) <= eps * big(n)
}

pub fn label_item(item: &Item, side: u64, eps_large: &BigRational, eps_small: &BigRational) -> Label {
    let w_small = at_most(item.width, eps_small, side);
    let h_small = at_most(item.height, eps_small, side);
    let w_large = !at_most(item.width, eps_large, side);
    let h_large = !at_most(item.height, eps_large, side);
    match (w_small, h_small, w_large, h_large) {
        (true, true, _, _) => Label::Small,
        (_, _, true, true) => Label::Large,
        (_, true, true, _) => Label::Horizontal,
        (true, _, _, true) => Label::Vertical,
        _ => Label::Intermediate,
    }
}

pub fn classify_items(
    instance: &KnapsackInstance,
    eps_large: &BigRational,
    eps_small: &BigRational,
) -> Result<Classification> {
    if !(eps_large > eps_small && eps_small > &BigRational::zero() && eps_large <= &BigRational::one()) {
        return Err(Error::invalid("need 1 >= eps_large > eps_small > 0"));
    }
    let labels = instance
        .items
        .iter()
        .map(|it| (it.id, label_item(it, instance.side, eps_large, eps_small)))
        .collect();
    Ok(Classification {
        eps_large: eps_large.clone(),
        eps_small: eps_small.clone(),
        labels,
    })
}

/// The default shrink map `x ↦ x²`.
pub fn square(x: &BigRational) -> BigRational {
    x * x
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub eps_large: BigRational,
    pub eps_small: BigRational,
    /// 1-based index `j` of the chosen range `(ε_{j+1}N, ε_j N]`.
    pub level: usize,
    /// Profit of items with a side in each range, indexed from range 1.
    pub level_profits: Vec<u64>,
}

impl Thresholds {
    pub fn intermediate_profit(&self) -> u64 {
        self.level_profits[self.level - 1]
    }
}

/// Builds the levels `ε_1 = f(ε), ε_{i+1} = f(ε_i)` (`⌈2/ε⌉ + 1` of them) and
/// returns the adjacent pair whose range carries the least profit. Ties go to
/// the lowest level.
pub fn choose_thresholds(
    instance: &KnapsackInstance,
    eps: &BigRational,
    shrink: &dyn Fn(&BigRational) -> BigRational,
) -> Result<Thresholds> {
    if !(eps > &BigRational::zero() && eps < &BigRational::one()) {
        return Err(Error::invalid("eps must lie in (0, 1)"));
    }
    let ranges = (BigRational::from_integer(2.into()) / eps)
        .ceil()
        .to_integer();
    let ranges: usize = ranges
        .try_into()
        .map_err(|_| Error::invalid("eps too small"))?;
    let mut levels = Vec::with_capacity(ranges + 1);
    let mut cur = eps.clone();
    for _ in 0..=ranges {
        let next = shrink(&cur);
        if !(next < cur && next > BigRational::zero()) {
            return Err(Error::invalid("shrink map must satisfy 0 < f(x) < x"));
        }
        levels.push(next.clone());
        cur = next;
    }
    let n = big(instance.side);
    let bounds: Vec<BigRational> = levels.iter().map(|e| e * &n).collect();
    let level_profits: Vec<u64> = (0..ranges)
        .map(|j| {
            let (lo, hi) = (&bounds[j + 1], &bounds[j]);
            instance
                .items
                .iter()
                .filter(|it| {
                    [it.width, it.height].iter().any(|&s| {
                        let s = big(s);
                        &s > lo && &s <= hi
                    })
                })
                .map(|it| it.profit)
                .sum()
        })
        .collect();
    let (best, _) = level_profits
        .iter()
        .enumerate()
        .min_by_key(|(j, p)| (**p, *j))
        .expect("at least one range");
    Ok(Thresholds {
        eps_large: levels[best].clone(),
        eps_small: levels[best + 1].clone(),
        level: best + 1,
        level_profits,
    })
}
