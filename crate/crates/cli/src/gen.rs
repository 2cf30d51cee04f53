//! Random instance generator.
//!
//! Side lengths are uniform integers. Mixes:
//!
//! * `uniform`: both sides in `[1, side]`;
//! * `small`: both sides in `[1, max(1, side/10)]`;
//! * `long`: one side in `(side/2, side]`, the other in `[1, max(1, side/4)]`,
//!   horizontal or vertical with equal probability;
//! * `mixed`: each item draws one of the three above.
//!
//! `lpack` instances always use `long` items and arm widths in
//! `[0, side/2]`. Profits are uniform in `[1, max_profit]`, or 1 with
//! `cardinality`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rectpack::{Instance, Item, KnapsackInstance, LInstance, Mode, StripInstance};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Knapsack,
    Strip,
    Lpack,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mix {
    #[default]
    Uniform,
    Small,
    Long,
    Mixed,
}

fn ten() -> u64 {
    10
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub kind: GenKind,
    pub n: usize,
    /// `N` for knapsack and lpack, `W` for strip.
    pub side: u64,
    #[serde(default)]
    pub mix: Mix,
    #[serde(default = "ten")]
    pub max_profit: u64,
    #[serde(default)]
    pub rotations: bool,
    #[serde(default)]
    pub cardinality: bool,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn dims(rng: &mut ChaCha8Rng, mix: Mix, side: u64) -> (u64, u64) {
    match mix {
        Mix::Uniform => (rng.gen_range(1..=side), rng.gen_range(1..=side)),
        Mix::Small => {
            let s = (side / 10).max(1);
            (rng.gen_range(1..=s), rng.gen_range(1..=s))
        }
        Mix::Long => {
            let long = rng.gen_range(side / 2 + 1..=side);
            let short = rng.gen_range(1..=(side / 4).max(1));
            if rng.gen_bool(0.5) {
                (long, short)
            } else {
                (short, long)
            }
        }
        Mix::Mixed => {
            let pick = [Mix::Uniform, Mix::Small, Mix::Long][rng.gen_range(0..3)];
            dims(rng, pick, side)
        }
    }
}

/// Deterministic in `spec` and `seed` (the spec's own seed wins).
pub fn generate(spec: &GenSpec, seed: u64) -> Result<Instance, CliError> {
    if spec.side == 0 {
        return Err(CliError::Usage("side must be positive".into()));
    }
    if spec.max_profit == 0 {
        return Err(CliError::Usage("max_profit must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed.unwrap_or(seed));
    let mix = if spec.kind == GenKind::Lpack { Mix::Long } else { spec.mix };
    let items: Vec<Item> = (0..spec.n)
        .map(|i| {
            let (w, h) = dims(&mut rng, mix, spec.side);
            let p = if spec.cardinality { 1 } else { rng.gen_range(1..=spec.max_profit) };
            Item::new(i as u32, w, h, p).rotatable(true)
        })
        .collect();
    let inst: Instance = match spec.kind {
        GenKind::Knapsack => {
            let mode = if spec.cardinality { Mode::Cardinality } else { Mode::Weighted };
            KnapsackInstance::with_options(spec.side, items, mode, spec.rotations)?.into()
        }
        GenKind::Strip => StripInstance::new(spec.side, items)?.into(),
        GenKind::Lpack => {
            let w_l = rng.gen_range(0..=spec.side / 2);
            let h_l = rng.gen_range(0..=spec.side / 2);
            LInstance::new(spec.side, w_l, h_l, items)?.into()
        }
    };
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: GenKind, mix: Mix) -> GenSpec {
        GenSpec {
            kind,
            n: 20,
            side: 20,
            mix,
            max_profit: 5,
            rotations: false,
            cardinality: false,
            seed: None,
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let s = spec(GenKind::Knapsack, Mix::Mixed);
        assert_eq!(generate(&s, 4).unwrap(), generate(&s, 4).unwrap());
        assert_ne!(generate(&s, 4).unwrap(), generate(&s, 5).unwrap());
    }

    #[test]
    fn mixes_respect_ranges() {
        let small = generate(&spec(GenKind::Strip, Mix::Small), 1).unwrap();
        assert!(small.items().iter().all(|i| i.width <= 2 && i.height <= 2));
        let long = generate(&spec(GenKind::Knapsack, Mix::Long), 1).unwrap();
        assert!(long.items().iter().all(|i| i.longer_side() > 10));
        let l = generate(&spec(GenKind::Lpack, Mix::Uniform), 1).unwrap();
        assert!(matches!(l, Instance::L(_)));
    }

    #[test]
    fn cardinality_profits() {
        let mut s = spec(GenKind::Knapsack, Mix::Uniform);
        s.cardinality = true;
        assert!(generate(&s, 0).unwrap().items().iter().all(|i| i.profit == 1));
    }
}
