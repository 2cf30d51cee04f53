//! Maximum Generalized Assignment with a constant number of bins.
//!
//! Three solvers share one table-based core: the exact pseudo-polynomial DP
//! over residual capacities, a resource-augmented variant that rescales sizes
//! so the table is polynomial, and a PTAS that guesses the few big elements of
//! each bin before running the augmented DP on the rest.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::Eps;

/// Default cap on DP table cells (elements × capacity states).
pub const DEFAULT_BUDGET: u128 = 60_000_000;

/// Largest supported bin count.
pub const MAX_BINS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapInstance {
    pub capacities: Vec<u64>,
    /// `sizes[i][j]`: size of element `i` in bin `j`, `None` if it cannot go there.
    pub sizes: Vec<Vec<Option<u64>>>,
    /// `profits[i][j]`.
    pub profits: Vec<Vec<u64>>,
}

impl GapInstance {
    pub fn new(capacities: Vec<u64>) -> Self {
        GapInstance {
            capacities,
            sizes: Vec::new(),
            profits: Vec::new(),
        }
    }

    pub fn push(&mut self, sizes: Vec<Option<u64>>, profits: Vec<u64>) {
        assert_eq!(sizes.len(), self.capacities.len());
        assert_eq!(profits.len(), self.capacities.len());
        self.sizes.push(sizes);
        self.profits.push(profits);
    }

    pub fn bins(&self) -> usize {
        self.capacities.len()
    }

    pub fn elements(&self) -> usize {
        self.sizes.len()
    }

    fn check(&self) -> Result<()> {
        if self.bins() > MAX_BINS {
            return Err(Error::invalid(format!(
                "{} bins exceed the supported {MAX_BINS}",
                self.bins()
            )));
        }
        for (s, p) in self.sizes.iter().zip(&self.profits) {
            if s.len() != self.bins() || p.len() != self.bins() {
                return Err(Error::invalid("size/profit rows must have one entry per bin"));
            }
        }
        Ok(())
    }

    pub fn profit_of(&self, bins: &[Option<usize>]) -> u64 {
        bins.iter()
            .enumerate()
            .filter_map(|(i, b)| b.map(|j| self.profits[i][j]))
            .sum()
    }

    pub fn loads_of(&self, bins: &[Option<usize>]) -> Vec<u64> {
        let mut loads = vec![0; self.bins()];
        for (i, b) in bins.iter().enumerate() {
            if let Some(j) = *b {
                loads[j] += self.sizes[i][j].expect("assigned to an allowed bin");
            }
        }
        loads
    }
}

/// A partial map element → bin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub bins: Vec<Option<usize>>,
    pub profit: u64,
    /// Loads may exceed capacities by the augmentation factor.
    pub augmented: bool,
}

impl Assignment {
    pub fn empty(n: usize) -> Self {
        Assignment {
            bins: vec![None; n],
            profit: 0,
            augmented: false,
        }
    }

    pub fn assigned(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bins
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.map(|j| (i, j)))
    }
}

/// Exact DP `P[i, d_1..d_k] = max(P[i−1, d], max_j p_ij + P[i−1, .., d_j − s_ij, ..])`
/// with a per-element choice log for backtracking.
pub fn gap_exact_dp(instance: &GapInstance, budget: u128) -> Result<Assignment> {
    instance.check()?;
    let n = instance.elements();
    let k = instance.bins();
    // A bin never needs more room than the total of what can go in it.
    let caps: Vec<u64> = (0..k)
        .map(|j| {
            let c = instance.capacities[j];
            let fitting: u64 = instance
                .sizes
                .iter()
                .filter_map(|s| s[j].filter(|&s| s <= c))
                .sum();
            c.min(fitting)
        })
        .collect();
    let active: Vec<usize> = (0..n)
        .filter(|&i| (0..k).any(|j| instance.sizes[i][j].is_some_and(|s| s <= caps[j])))
        .collect();
    if active.is_empty() {
        return Ok(Assignment::empty(n));
    }
    let mut strides = vec![1usize; k];
    let mut cells: u128 = 1;
    for j in 0..k {
        strides[j] = cells as usize;
        cells *= caps[j] as u128 + 1;
    }
    let needed = cells * (active.len() as u128 + 1);
    if needed > budget {
        return Err(Error::Budget {
            what: "GAP table",
            needed,
            budget,
        });
    }
    let cells = cells as usize;
    let mut value = vec![0u64; cells];
    let mut choice = vec![0u8; cells * active.len()];
    let mut digits = vec![0u64; k];
    for (layer, &i) in active.iter().enumerate() {
        let log = &mut choice[layer * cells..(layer + 1) * cells];
        // Descending so lower cells still hold the previous layer.
        for idx in (0..cells).rev() {
            let mut rem = idx;
            for j in (0..k).rev() {
                digits[j] = (rem / strides[j]) as u64;
                rem %= strides[j];
            }
            let mut best = value[idx];
            let mut pick = 0u8;
            for j in 0..k {
                if let Some(s) = instance.sizes[i][j] {
                    if s <= digits[j] {
                        let cand = instance.profits[i][j] + value[idx - s as usize * strides[j]];
                        if cand > best {
                            best = cand;
                            pick = j as u8 + 1;
                        }
                    }
                }
            }
            value[idx] = best;
            log[idx] = pick;
        }
    }
    let mut bins = vec![None; n];
    let mut idx = cells - 1;
    for (layer, &i) in active.iter().enumerate().rev() {
        let pick = choice[layer * cells + idx];
        if pick > 0 {
            let j = pick as usize - 1;
            bins[i] = Some(j);
            idx -= instance.sizes[i][j].expect("chosen bin allows element") as usize * strides[j];
        }
    }
    let profit = instance.profit_of(&bins);
    debug_assert_eq!(profit, value[cells - 1]);
    Ok(Assignment {
        bins,
        profit,
        augmented: false,
    })
}

type Q = Ratio<i128>;

fn eps_q(eps: Eps) -> Q {
    Q::new(*eps.numer() as i128, *eps.denom() as i128)
}

/// Solves `elements` (indices into `instance`) against rational capacities
/// with sizes rounded up to multiples of `μ_j = ε·cap_j/n`; every bin ends up
/// with load at most `(1+ε)·cap_j` and profit at least the optimum under `cap`.
fn augmented_on(
    instance: &GapInstance,
    elements: &[usize],
    caps: &[Q],
    eps: Eps,
    budget: u128,
) -> Result<Vec<Option<usize>>> {
    let n = elements.len();
    let k = instance.bins();
    let mut out = vec![None; instance.elements()];
    if n == 0 {
        return Ok(out);
    }
    let e = eps_q(eps);
    let nq = Q::from_integer(n as i128);
    let scaled_cap = ((Q::one() + e) * nq / e).floor().to_integer();
    let scaled_cap = u64::try_from(scaled_cap).map_err(|_| Error::invalid("eps too small"))?;
    let mut scaled = GapInstance::new(
        caps.iter()
            .map(|c| if c.is_zero() { 0 } else { scaled_cap })
            .collect(),
    );
    for &i in elements {
        let sizes = (0..k)
            .map(|j| {
                let s = instance.sizes[i][j]?;
                if caps[j].is_zero() {
                    return None;
                }
                let mu = e * caps[j] / nq;
                let r = (Q::from_integer(s as i128) / mu).ceil().to_integer();
                u64::try_from(r).ok().filter(|&r| r <= scaled_cap)
            })
            .collect();
        scaled.push(sizes, instance.profits[i].clone());
    }
    let sol = gap_exact_dp(&scaled, budget)?;
    for (pos, b) in sol.bins.iter().enumerate() {
        out[elements[pos]] = *b;
    }
    Ok(out)
}

/// Resource-augmented GAP: profit at least the unaugmented optimum, loads at
/// most `(1+ε)·c_j`.
pub fn gap_resource_augmented(instance: &GapInstance, eps: Eps, budget: u128) -> Result<Assignment> {
    instance.check()?;
    if eps <= Eps::zero() {
        return Err(Error::invalid("eps must be positive"));
    }
    let caps: Vec<Q> = instance
        .capacities
        .iter()
        .map(|&c| Q::from_integer(c as i128))
        .collect();
    let elements: Vec<usize> = (0..instance.elements()).collect();
    let bins = augmented_on(instance, &elements, &caps, eps, budget)?;
    let profit = instance.profit_of(&bins);
    Ok(Assignment {
        bins,
        profit,
        augmented: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtasOutcome {
    pub assignment: Assignment,
    /// Set when `guess_cap` reaches `⌊1/ε²⌋`, so `profit ≥ (1−3ε)·opt` holds.
    pub guarantee: bool,
    pub guesses: u64,
}

/// GAP PTAS: enumerate up to `guess_cap` elements per bin, then pack the
/// rest with the augmented DP into `(1−ε)` of each residual capacity, which
/// stays within the residual after the `(1+ε)` augmentation. Deterministic
/// argmax over guesses in enumeration order.
pub fn gap_ptas(instance: &GapInstance, eps: Eps, guess_cap: usize, budget: u128) -> Result<PtasOutcome> {
    instance.check()?;
    if eps <= Eps::zero() {
        return Err(Error::invalid("eps must be positive"));
    }
    let n = instance.elements();
    let inv_sq = (*eps.denom() as u128).pow(2) / (*eps.numer() as u128).pow(2);
    let guarantee = guess_cap as u128 >= inv_sq;
    let mut search = Search {
        instance,
        eps,
        guess_cap,
        budget,
        current: vec![None; n],
        residual: instance.capacities.clone(),
        best: Assignment::empty(n),
        guesses: 0,
    };
    search.bin(0, 0, 0)?;
    Ok(PtasOutcome {
        assignment: search.best,
        guarantee,
        guesses: search.guesses,
    })
}

struct Search<'a> {
    instance: &'a GapInstance,
    eps: Eps,
    guess_cap: usize,
    budget: u128,
    current: Vec<Option<usize>>,
    residual: Vec<u64>,
    best: Assignment,
    guesses: u64,
}

impl Search<'_> {
    /// Chooses the guessed set of bin `j` element by element (indices ≥ `from`).
    fn bin(&mut self, j: usize, from: usize, taken: usize) -> Result<()> {
        if j == self.instance.bins() {
            return self.evaluate();
        }
        self.bin(j + 1, 0, 0)?;
        if taken == self.guess_cap {
            return Ok(());
        }
        for i in from..self.instance.elements() {
            if self.current[i].is_some() {
                continue;
            }
            let Some(s) = self.instance.sizes[i][j] else {
                continue;
            };
            if s > self.residual[j] {
                continue;
            }
            self.current[i] = Some(j);
            self.residual[j] -= s;
            let r = self.bin(j, i + 1, taken + 1);
            self.residual[j] += s;
            self.current[i] = None;
            r?;
        }
        Ok(())
    }

    fn evaluate(&mut self) -> Result<()> {
        self.guesses += 1;
        let shrink = Q::one() - eps_q(self.eps);
        let caps: Vec<Q> = self
            .residual
            .iter()
            .map(|&r| {
                if shrink <= Q::zero() {
                    Q::zero()
                } else {
                    shrink * Q::from_integer(r as i128)
                }
            })
            .collect();
        let rest: Vec<usize> = (0..self.instance.elements())
            .filter(|&i| self.current[i].is_none())
            .collect();
        let filled = augmented_on(self.instance, &rest, &caps, self.eps, self.budget)?;
        let bins: Vec<Option<usize>> = self
            .current
            .iter()
            .zip(&filled)
            .map(|(g, f)| g.or(*f))
            .collect();
        let profit = self.instance.profit_of(&bins);
        if profit > self.best.profit {
            debug_assert!(self
                .instance
                .loads_of(&bins)
                .iter()
                .zip(&self.instance.capacities)
                .all(|(l, c)| l <= c));
            self.best = Assignment {
                bins,
                profit,
                augmented: false,
            };
        }
        Ok(())
    }
}

/// `⌊(1+ε)·c⌋`, the load ceiling of an augmented bin.
pub fn augmented_limit(capacity: u64, eps: Eps) -> u64 {
    let (p, q) = (*eps.numer() as u128, *eps.denom() as u128);
    let v = Integer::div_floor(&(capacity as u128 * (q + p)), &q);
    v.min(u64::MAX as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(cap: u64, size: Option<u64>, profit: u64) -> GapInstance {
        let mut g = GapInstance::new(vec![cap]);
        g.push(vec![size], vec![profit]);
        g
    }

    #[test]
    fn one_element_one_bin() {
        let a = gap_exact_dp(&single(5, Some(3), 7), DEFAULT_BUDGET).unwrap();
        assert_eq!(a.bins, vec![Some(0)]);
        assert_eq!(a.profit, 7);
    }

    #[test]
    fn infeasible_everywhere_stays_unassigned() {
        let mut g = GapInstance::new(vec![4, 4]);
        g.push(vec![None, Some(9)], vec![3, 3]);
        let a = gap_exact_dp(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.bins, vec![None]);
        assert_eq!(a.profit, 0);
    }

    #[test]
    fn empty_instance() {
        let g = GapInstance::new(vec![3, 3]);
        assert_eq!(gap_exact_dp(&g, DEFAULT_BUDGET).unwrap().profit, 0);
        assert_eq!(
            gap_resource_augmented(&g, Eps::new(1, 2), DEFAULT_BUDGET).unwrap().bins,
            Vec::<Option<usize>>::new()
        );
    }

    #[test]
    fn budget_error_is_explicit() {
        let mut g = GapInstance::new(vec![1000, 1000, 1000]);
        for _ in 0..4 {
            g.push(vec![Some(400); 3], vec![1; 3]);
        }
        let err = gap_exact_dp(&g, 1_000_000).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn bin_dependent_sizes() {
        // Element 0 is cheap in bin 1, element 1 only fits bin 0.
        let mut g = GapInstance::new(vec![5, 5]);
        g.push(vec![Some(5), Some(2)], vec![4, 4]);
        g.push(vec![Some(5), None], vec![6, 0]);
        g.push(vec![Some(3), Some(3)], vec![2, 5]);
        let a = gap_exact_dp(&g, DEFAULT_BUDGET).unwrap();
        assert_eq!(a.profit, 15);
        assert_eq!(a.bins, vec![Some(1), Some(0), Some(1)]);
    }

    #[test]
    fn augmented_limit_rounds_down() {
        assert_eq!(augmented_limit(10, Eps::new(1, 4)), 12);
        assert_eq!(augmented_limit(7, Eps::new(1, 2)), 10);
    }

    #[test]
    fn ptas_guarantee_flag() {
        let g = single(5, Some(3), 7);
        assert!(!gap_ptas(&g, Eps::new(1, 4), 2, DEFAULT_BUDGET).unwrap().guarantee);
        assert!(gap_ptas(&g, Eps::new(1, 2), 4, DEFAULT_BUDGET).unwrap().guarantee);
    }

    #[test]
    fn ptas_boundary_eps_is_feasible() {
        let mut g = GapInstance::new(vec![4]);
        g.push(vec![Some(3)], vec![2]);
        g.push(vec![Some(2)], vec![2]);
        let out = gap_ptas(&g, Eps::new(1, 3), 2, DEFAULT_BUDGET).unwrap();
        let loads = g.loads_of(&out.assignment.bins);
        assert!(loads[0] <= 4);
    }
}
