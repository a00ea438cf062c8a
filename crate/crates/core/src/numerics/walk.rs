use super::mu::MuLaw;

/// `P(S_j = t)` for `1 <= j <= steps` and `0 <= t <= target`, where `S` is the
/// walk with i.i.d. `mu` steps. Steps are at least 1, so entries with
/// `t <= target` only involve `mu(1..=target)`: the table carries no
/// truncation error, and the row deficit `1 - sum_t q_j[t]` is `P(S_j > target)`.
#[derive(Clone, Debug)]
pub struct WalkPmfTable {
    target: usize,
    rows: Vec<Vec<f64>>,
}

impl WalkPmfTable {
    pub fn new(steps: usize, target: usize) -> Self {
        let law = MuLaw::new(target.max(1));
        let mu = law.pmf_slice();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(steps);
        if steps == 0 {
            return Self { target, rows };
        }
        let mut first = vec![0.0; target + 1];
        first[1..=target].copy_from_slice(&mu[1..=target]);
        rows.push(first);
        for j in 1..steps {
            let prev = &rows[j - 1];
            let mut next = vec![0.0; target + 1];
            for t in (j + 1)..=target {
                let mut acc = 0.0;
                for k in 1..=(t - j) {
                    acc += mu[k] * prev[t - k];
                }
                next[t] = acc;
            }
            rows.push(next);
        }
        Self { target, rows }
    }

    pub fn steps(&self) -> usize {
        self.rows.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// `P(S_j = t)`.
    pub fn get(&self, j: usize, t: usize) -> f64 {
        if j == 0 {
            return if t == 0 { 1.0 } else { 0.0 };
        }
        self.rows[j - 1][t]
    }

    pub fn row_sum(&self, j: usize) -> f64 {
        self.rows[j - 1].iter().sum()
    }

    /// Mass of row `j` beyond `target`.
    pub fn row_deficit(&self, j: usize) -> f64 {
        (1.0 - self.row_sum(j)).max(0.0)
    }

    /// Absolute error bound on any stored entry from truncation: none.
    pub fn truncation_bound(&self) -> f64 {
        0.0
    }
}

fn convolve_truncated(a: &[f64], b: &[f64], lo_a: usize, lo_b: usize) -> Vec<f64> {
    let len = a.len();
    let mut out = vec![0.0; len];
    for i in lo_a..len {
        let ai = a[i];
        if ai == 0.0 {
            continue;
        }
        for j in lo_b..(len - i) {
            out[i + j] += ai * b[j];
        }
    }
    out
}

/// `P(S_steps = target)` by binary powering of the step law truncated at `target`.
/// Exact up to rounding; returns 0 when `target < steps`.
pub fn walk_pmf(steps: usize, target: usize) -> f64 {
    if steps == 0 {
        return if target == 0 { 1.0 } else { 0.0 };
    }
    if target < steps {
        return 0.0;
    }
    let law = MuLaw::new(target);
    let mut base = law.pmf_slice().to_vec();
    let mut base_lo = 1usize;
    let mut acc: Option<(Vec<f64>, usize)> = None;
    let mut e = steps;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => (base.clone(), base_lo),
                Some((v, lo)) => (convolve_truncated(&v, &base, lo, base_lo), lo + base_lo),
            });
        }
        e >>= 1;
        if e > 0 && 2 * base_lo <= target {
            base = convolve_truncated(&base, &base, base_lo, base_lo);
            base_lo *= 2;
        } else if e > 0 {
            // Any further factor would push the minimum beyond target.
            return 0.0;
        }
    }
    acc.map(|(v, _)| v[target]).unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::mu_pmf;

    #[test]
    fn small_cases() {
        for k in 1..20 {
            assert!((walk_pmf(1, k) - mu_pmf(k as u64).unwrap()).abs() < 1e-16);
        }
        let expected = 4.0 * (-2f64).exp();
        assert!((walk_pmf(2, 2) - expected).abs() < 1e-15);
        assert_eq!(walk_pmf(5, 4), 0.0);
    }

    #[test]
    fn powering_matches_table() {
        let table = WalkPmfTable::new(60, 120);
        for j in [1usize, 2, 3, 7, 16, 33, 60] {
            for t in [j, j + 1, 2 * j, 120] {
                if t > 120 {
                    continue;
                }
                let a = table.get(j, t);
                let b = walk_pmf(j, t);
                assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "j={j} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rows_are_subprobabilities() {
        let table = WalkPmfTable::new(40, 100);
        for j in 1..=40 {
            let s = table.row_sum(j);
            assert!(s <= 1.0 + 1e-12);
            assert!(table.row_deficit(j) >= 0.0);
        }
    }
}
