use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::{binomial, factorial, pow_u};
use crate::error::{Error, Result};

/// Number of forests on `n` labeled vertices with `m` edges (Renyi's sum).
pub fn count_forests(n: u64, m: u64) -> Result<BigUint> {
    if n == 0 || m >= n {
        return Err(Error::Domain(format!("forests need 0 <= m < n, got n = {n}, m = {m}")));
    }
    Ok(renyi(n, m))
}

/// `#F(n, m)` extended by zero outside `0 <= m < n`, with `#F(0, 0) = 1`.
pub fn forest_count_or_zero(n: i64, m: i64) -> BigUint {
    if n == 0 && m == 0 {
        return BigUint::one();
    }
    if n <= 0 || m < 0 || m >= n {
        return BigUint::zero();
    }
    renyi(n as u64, m as u64)
}

// (n-m)! 2^(n-m) n #F(n,m) = sum_i C(n-m,i) (-1)^i 2^(n-m-i) (n-m+i) n^(m-i) n!/(m-i)!
fn renyi(n: u64, m: u64) -> BigUint {
    let r = n - m;
    let nf = factorial(n);
    let mut total = BigInt::zero();
    let mut falling_tail = BigUint::one(); // n!/(m-i)! built as n!/m! * m (m-1) ... (m-i+1)
    let base = &nf / factorial(m);
    for i in 0..=r.min(m) {
        if i > 0 {
            falling_tail *= m - i + 1;
        }
        let term = binomial(r, i) * pow_u(2, r - i) * (r + i) * pow_u(n, m - i) * &base * &falling_tail;
        if i % 2 == 0 {
            total += BigInt::from(term);
        } else {
            total -= BigInt::from(term);
        }
    }
    let den = BigInt::from(factorial(r) * pow_u(2, r) * n);
    debug_assert!((&total % &den).is_zero());
    let q = total / den;
    debug_assert!(!q.is_negative());
    q.to_biguint().expect("non-negative count")
}

fn edges_of_complete_graph(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b));
        }
    }
    edges
}

fn root(label: &[usize], mut v: usize) -> usize {
    while label[v] != v {
        v = label[v];
    }
    v
}

fn walk(
    edges: &[(usize, usize)],
    start: usize,
    need: usize,
    parent: &mut Vec<usize>,
    chosen: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) {
    if need == 0 {
        visit(chosen);
        return;
    }
    if edges.len() - start < need {
        return;
    }
    for i in start..edges.len() {
        if edges.len() - i < need {
            break;
        }
        let (a, b) = edges[i];
        let (ra, rb) = (root(parent, a), root(parent, b));
        if ra == rb {
            continue;
        }
        parent[rb] = ra;
        chosen.push((a, b));
        walk(edges, i + 1, need - 1, parent, chosen, visit);
        chosen.pop();
        parent[rb] = rb;
    }
}

fn for_each_forest(n: usize, m: usize, visit: &mut dyn FnMut(&[(usize, usize)])) {
    let edges = edges_of_complete_graph(n);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(m);
    walk(&edges, 0, m, &mut parent, &mut chosen, visit);
}

/// Counts acyclic `m`-subsets of the edges of `K_n` by exhaustive search.
pub fn brute_force_forests(n: usize, m: usize) -> Result<BigUint> {
    if n > 8 {
        return Err(Error::Resource(format!("brute-force forests limited to n <= 8, got {n}")));
    }
    let mut count = 0u64;
    for_each_forest(n, m, &mut |_| count += 1);
    Ok(BigUint::from(count))
}

/// All forests of `K_n` with `m` edges, each as a sorted list of `(a, b)` with `a < b`.
pub fn list_forests(n: usize, m: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    if n > 8 {
        return Err(Error::Resource(format!("forest listing limited to n <= 8, got {n}")));
    }
    let mut out = Vec::new();
    for_each_forest(n, m, &mut |f| out.push(f.to_vec()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(count_forests(3, 1).unwrap(), BigUint::from(3u32));
        assert_eq!(count_forests(4, 3).unwrap(), BigUint::from(16u32));
        for n in 1..10 {
            assert_eq!(count_forests(n, 0).unwrap(), BigUint::one());
            assert_eq!(count_forests(n, n - 1).unwrap(), pow_u(n, n.saturating_sub(2)));
        }
        assert!(count_forests(3, 3).is_err());
    }

    #[test]
    fn brute_force_values() {
        assert_eq!(brute_force_forests(4, 2).unwrap(), BigUint::from(15u32));
        assert_eq!(brute_force_forests(3, 2).unwrap(), BigUint::from(3u32));
        assert!(brute_force_forests(9, 1).is_err());
    }

    #[test]
    fn renyi_matches_brute_force_small() {
        for n in 1..=6u64 {
            for m in 0..n {
                assert_eq!(
                    count_forests(n, m).unwrap(),
                    brute_force_forests(n as usize, m as usize).unwrap(),
                    "n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn extension_by_zero() {
        assert_eq!(forest_count_or_zero(0, 0), BigUint::one());
        assert_eq!(forest_count_or_zero(0, 1), BigUint::zero());
        assert_eq!(forest_count_or_zero(2, -1), BigUint::zero());
        assert_eq!(forest_count_or_zero(3, 3), BigUint::zero());
    }
}
