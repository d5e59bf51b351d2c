//! Integer transition coefficients between the power-sum and monomial bases.

use std::collections::HashMap;

use crate::partition::Partition;

/// Coefficient of `m_mu` in `p_rho`: the number of ways to send the parts of
/// `rho` to the rows of `mu` so that every row `j` receives total `mu_j`.
/// Zero unless `rho ≤ mu` in dominance order.
pub fn power_to_monomial_coeff(rho: &Partition, mu: &Partition) -> i128 {
    if rho.weight() != mu.weight() || rho.len() < mu.len() {
        return 0;
    }
    let mut memo = HashMap::new();
    count_fillings(rho.parts(), 0, mu.parts().to_vec(), &mut memo)
}

// Rows with equal remaining capacity are interchangeable, so the state is
// the sorted capacity vector and each distinct capacity is tried once.
fn count_fillings(
    parts: &[usize],
    j: usize,
    rem: Vec<usize>,
    memo: &mut HashMap<(usize, Vec<usize>), i128>,
) -> i128 {
    if j == parts.len() {
        return i128::from(rem.iter().all(|&r| r == 0));
    }
    if let Some(&v) = memo.get(&(j, rem.clone())) {
        return v;
    }
    let p = parts[j];
    let mut total = 0i128;
    let mut i = 0;
    while i < rem.len() {
        let r = rem[i];
        let mult = rem[i..].iter().take_while(|&&x| x == r).count();
        if r >= p {
            let mut next = rem.clone();
            next[i] = r - p;
            next.sort_unstable_by(|a, b| b.cmp(a));
            total += mult as i128 * count_fillings(parts, j + 1, next, memo);
        }
        i += mult;
    }
    memo.insert((j, rem), total);
    total
}

/// `p_rho` expanded in monomials, keeping only `m_mu` with at most `nvars`
/// parts (`None` keeps all).
pub fn power_to_monomial(rho: &Partition, nvars: Option<usize>) -> Vec<(Partition, i128)> {
    crate::partition::partitions_of(rho.weight())
        .into_iter()
        .filter(|mu| nvars.is_none_or(|n| mu.len() <= n))
        .filter_map(|mu| {
            let c = power_to_monomial_coeff(rho, &mu);
            (c != 0).then_some((mu, c))
        })
        .collect()
}

/// Power-sum expansion of the augmented monomial `prod_i m_i(mu)! · m_mu`,
/// which has integer coefficients. Summation over set partitions of the
/// parts of `mu` weighted by the Möbius function of the partition lattice.
pub struct AugmentedMonomials {
    memo: HashMap<Vec<(usize, usize)>, HashMap<Partition, i128>>,
}

impl Default for AugmentedMonomials {
    fn default() -> Self {
        Self::new()
    }
}

impl AugmentedMonomials {
    pub fn new() -> Self {
        AugmentedMonomials { memo: HashMap::new() }
    }

    /// `prod_i m_i(mu)!`.
    pub fn augmentation(mu: &Partition) -> i128 {
        multiset(mu)
            .iter()
            .map(|&(_, m)| (1..=m as i128).product::<i128>())
            .product()
    }

    pub fn expand(&mut self, mu: &Partition) -> HashMap<Partition, i128> {
        self.expand_multiset(multiset(mu))
    }

    fn expand_multiset(&mut self, ms: Vec<(usize, usize)>) -> HashMap<Partition, i128> {
        if ms.is_empty() {
            return HashMap::from([(Partition::empty(), 1)]);
        }
        if let Some(v) = self.memo.get(&ms) {
            return v.clone();
        }
        // The block containing one fixed copy of the first value; the rest
        // of the block is a sub-multiset of what remains.
        let (v0, _) = ms[0];
        let mut rest = ms.clone();
        rest[0].1 -= 1;
        let mut out: HashMap<Partition, i128> = HashMap::new();
        let mut choice = vec![0usize; rest.len()];
        loop {
            let mut ways = 1i128;
            let mut size = 1usize;
            let mut sum = v0;
            let mut remaining = Vec::new();
            for (k, &(v, m)) in rest.iter().enumerate() {
                ways *= binomial(m, choice[k]);
                size += choice[k];
                sum += choice[k] * v;
                if m > choice[k] {
                    remaining.push((v, m - choice[k]));
                }
            }
            let sign = if size % 2 == 1 { 1 } else { -1 };
            let weight = ways * sign * (1..size as i128).product::<i128>();
            for (key, c) in self.expand_multiset(remaining) {
                *out.entry(key.union(&Partition::new(vec![sum]))).or_insert(0) += weight * c;
            }
            // next sub-multiset
            let mut k = 0;
            while k < rest.len() && choice[k] == rest[k].1 {
                choice[k] = 0;
                k += 1;
            }
            if k == rest.len() {
                break;
            }
            choice[k] += 1;
        }
        out.retain(|_, c| *c != 0);
        self.memo.insert(ms, out.clone());
        out
    }
}

fn multiset(mu: &Partition) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &p in mu.parts().iter().rev() {
        match out.last_mut() {
            Some((v, m)) if *v == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}
