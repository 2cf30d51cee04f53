//! Candidate size sets `P^(k)`.

use std::collections::BTreeSet;

use crate::model::Item;

/// `P^(k) = {(p_1 + … + p_l) + i·p_{l+1} : p_j ∈ P, l ≤ k, 0 ≤ i ≤ n}`,
/// sorted and deduplicated.
pub fn expand_candidate_set(p: &[u64], k: usize, n: u64) -> Vec<u64> {
    expand_capped(p, k, n, None)
}

/// As [`expand_candidate_set`], dropping values above `cap`.
pub fn expand_candidate_set_capped(p: &[u64], k: usize, n: u64, cap: u64) -> Vec<u64> {
    expand_capped(p, k, n, Some(cap))
}

fn expand_capped(p: &[u64], k: usize, n: u64, cap: Option<u64>) -> Vec<u64> {
    let base: BTreeSet<u64> = p.iter().copied().collect();
    let within = |v: u64| cap.is_none_or(|c| v <= c);
    // Sums of at most k values of P, with repetition.
    let mut sums: BTreeSet<u64> = BTreeSet::from([0]);
    let mut frontier = sums.clone();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for &s in &frontier {
            for &q in &base {
                let v = s + q;
                if within(v) && !sums.contains(&v) {
                    next.insert(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        sums.extend(next.iter().copied());
        frontier = next;
    }
    let mut out = sums.clone();
    for &s in &sums {
        for &q in &base {
            for i in 1..=n {
                let v = s + i * q;
                if !within(v) {
                    break;
                }
                out.insert(v);
            }
        }
    }
    out.into_iter().collect()
}

pub fn widths(items: &[Item]) -> Vec<u64> {
    sorted_unique(items.iter().map(|i| i.width))
}

pub fn heights(items: &[Item]) -> Vec<u64> {
    sorted_unique(items.iter().map(|i| i.height))
}

/// `WIDTHS ∪ HEIGHTS`, used when rotations are allowed.
pub fn sizes(items: &[Item]) -> Vec<u64> {
    sorted_unique(items.iter().flat_map(|i| [i.width, i.height]))
}

fn sorted_unique(values: impl Iterator<Item = u64>) -> Vec<u64> {
    values.collect::<BTreeSet<_>>().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        assert_eq!(expand_candidate_set(&[2, 3], 1, 2), vec![0, 2, 3, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn k_zero_is_multiples() {
        assert_eq!(expand_candidate_set(&[3, 5], 0, 2), vec![0, 3, 5, 6, 10]);
    }

    #[test]
    fn cap_prunes() {
        assert_eq!(expand_candidate_set_capped(&[2, 3], 1, 2, 5), vec![0, 2, 3, 4, 5]);
    }

    #[test]
    fn empty_base() {
        assert_eq!(expand_candidate_set(&[], 3, 4), vec![0]);
    }
}
