//! Integer partitions and the combinatorial maps used to index polynomials
//! and norms.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A weakly decreasing list of positive parts. Trailing zeros are dropped on
/// construction, so `(2,1,0)` and `(2,1)` are the same value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

/// Outcome of comparing two partitions of equal weight in dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// The first partition is dominated by (or equal to) the second.
    Leq,
    /// The first partition strictly dominates the second.
    Greater,
    Incomparable,
}

impl Partition {
    /// Sorts the parts and removes zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The rectangle `(cols^rows)`.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if cols == 0 {
            return Self::empty();
        }
        Partition { parts: vec![cols; rows] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `λ_i` with 1-based indexing and zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(1);
        let parts = (1..=first)
            .map(|k| self.parts.iter().take_while(|&&p| p >= k).count())
            .collect();
        Partition { parts }
    }

    pub fn dominance(&self, other: &Partition) -> Result<Dominance> {
        if self.weight() != other.weight() {
            return Err(Error::WeightMismatch(self.weight(), other.weight()));
        }
        let len = self.len().max(other.len());
        let (mut s, mut o) = (0usize, 0usize);
        let (mut leq, mut geq) = (true, true);
        for i in 1..=len {
            s += self.part(i);
            o += other.part(i);
            leq &= s <= o;
            geq &= s >= o;
        }
        Ok(if leq {
            Dominance::Leq
        } else if geq {
            Dominance::Greater
        } else {
            Dominance::Incomparable
        })
    }

    /// `self ≤ other` in dominance order; false for different weights.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        matches!(self.dominance(other), Ok(Dominance::Leq))
    }

    /// Merge of the two part lists.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::new(parts)
    }

    /// Elementwise sum `λ_i + μ_i`.
    pub fn sum(&self, other: &Partition) -> Partition {
        let len = self.len().max(other.len());
        Partition::new((1..=len).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// `inner ⊆ self`, i.e. `inner_i ≤ self_i` for all `i`.
    pub fn contains(&self, inner: &Partition) -> bool {
        inner.len() <= self.len() && inner.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// `z_λ = prod_i i^{m_i} m_i!`.
    pub fn z(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut m = 0u128;
            while i < self.parts.len() && self.parts[i] == p {
                m += 1;
                i += 1;
                acc *= p as u128 * m;
            }
        }
        acc
    }

    /// Membership in the fat hook `H_{n,m}`: `λ_{n+1} ≤ m`.
    pub fn in_fat_hook(&self, n: usize, m: usize) -> bool {
        self.part(n + 1) <= m
    }

    /// The east and south partitions `(e(λ), s(λ))` of a `λ ∈ H_{n,m}`
    /// containing the rectangle `(m^n)`.
    pub fn east_south(&self, n: usize, m: usize) -> Result<(Partition, Partition)> {
        if !self.in_fat_hook(n, m) {
            return Err(Error::NotInFatHook { lambda: self.clone(), n, m });
        }
        if !self.contains(&Partition::rectangle(n, m)) {
            return Err(Error::RectangleNotContained { lambda: self.clone(), n, m });
        }
        let east = Partition::new((1..=n).map(|i| self.part(i) - m).collect());
        let south = Partition::new(self.parts.iter().skip(n).copied().collect()).conjugate();
        Ok((east, south))
    }

    /// The cells `(j, k)` of the Young diagram, 1-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(j, &p)| (1..=p).map(move |k| (j + 1, k)))
    }

    /// Pads the parts with zeros to length `n`; `None` when longer than `n`.
    pub fn padded(&self, n: usize) -> Option<Vec<usize>> {
        if self.len() > n {
            return None;
        }
        let mut v = self.parts.clone();
        v.resize(n, 0);
        Some(v)
    }
}

/// `b_λ(q,t) = prod_{(j,k)∈λ} (1 - q^{λ_j-k} t^{λ'_k-j+1}) / (1 - q^{λ_j-k+1} t^{λ'_k-j})`.
pub fn b_lambda<F: Scalar>(lambda: &Partition, q: &F, t: &F) -> Result<F> {
    let conj = lambda.conjugate();
    let mut num = F::one();
    let mut den = F::one();
    for (j, k) in lambda.cells() {
        let arm = (lambda.part(j) - k) as i32;
        let leg = (conj.part(k) - j) as i32;
        num = num * (F::one() - q.powi(arm) * t.powi(leg + 1));
        den = den * (F::one() - q.powi(arm + 1) * t.powi(leg));
    }
    Ok(num * den.checked_inv("b_lambda")?)
}

/// All partitions of `weight`, lexicographically decreasing: `(d), (d-1,1), …, (1^d)`.
pub fn partitions_of(weight: usize) -> Vec<Partition> {
    partitions_bounded(weight, weight, usize::MAX)
}

/// Partitions of `weight` with parts ≤ `max_part` and at most `max_len` parts,
/// lexicographically decreasing.
pub fn partitions_bounded(weight: usize, max_part: usize, max_len: usize) -> Vec<Partition> {
    fn rec(rest: usize, max_part: usize, max_len: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if max_len == 0 {
            return;
        }
        for p in (1..=rest.min(max_part)).rev() {
            cur.push(p);
            rec(rest - p, p, max_len - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, max_part, max_len, &mut Vec::new(), &mut out);
    out
}

/// All partitions of weight at most `max_weight`, by increasing weight.
pub fn partitions_up_to(max_weight: usize) -> Vec<Partition> {
    (0..=max_weight).flat_map(partitions_of).collect()
}

/// The order ideal `{μ : μ ≤ λ}` in dominance order, lexicographically
/// increasing (a linear extension of dominance).
pub fn dominance_ideal(lambda: &Partition) -> Vec<Partition> {
    let mut ideal: Vec<Partition> = partitions_bounded(lambda.weight(), lambda.part(1), usize::MAX)
        .into_iter()
        .filter(|mu| mu.dominated_by(lambda))
        .collect();
    ideal.reverse();
    ideal
}

/// Partitions `μ` with `lower ⊆ μ ⊆ upper` (as padded part lists of equal length).
pub fn partitions_between(lower: &[usize], upper: &[usize]) -> Vec<Partition> {
    fn rec(i: usize, lower: &[usize], upper: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == upper.len() {
            out.push(Partition::new(cur.clone()));
            return;
        }
        let cap = if i == 0 { upper[0] } else { upper[i].min(cur[i - 1]) };
        for v in lower[i]..=cap {
            cur.push(v);
            rec(i + 1, lower, upper, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, lower, upper, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Partition::new(parts))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Lexicographic comparison used to pick maximal elements: a lex-larger
/// partition is never dominated by a lex-smaller one.
pub fn lex_cmp(a: &Partition, b: &Partition) -> Ordering {
    a.parts.cmp(&b.parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ParamSet, Rational};
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p("3,1").conjugate(), p("2,1,1"));
        assert_eq!(p("2,1").conjugate(), p("2,1"));
    }

    #[test]
    fn trailing_zeros_normalised() {
        assert_eq!(Partition::new(vec![2, 1, 0, 0]), p("2,1"));
        assert_eq!(p(""), Partition::empty());
        assert!("1,2".parse::<Partition>().is_err());
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(p("1,1,1").dominance(&p("3")).unwrap(), Dominance::Leq);
        assert_eq!(p("2,2").dominance(&p("3,1")).unwrap(), Dominance::Leq);
        assert_eq!(p("3,1").dominance(&p("2,2")).unwrap(), Dominance::Greater);
        assert_eq!(p("3,1,1,1").dominance(&p("2,2,2")).unwrap(), Dominance::Incomparable);
        assert_eq!(p("2,1").dominance(&p("2,1")).unwrap(), Dominance::Leq);
        assert_eq!(p("2").dominance(&p("2,1")), Err(Error::WeightMismatch(2, 3)));
    }

    #[test]
    fn union_sum_contains() {
        assert_eq!(p("2,1").union(&p("1")), p("2,1,1"));
        assert_eq!(p("2,1").sum(&p("1,1")), p("3,2"));
        assert!(p("2,1").contains(&p("1,1")));
        assert!(!p("1,1").contains(&p("2")));
    }

    #[test]
    fn z_values() {
        assert_eq!(Partition::empty().z(), 1);
        assert_eq!(p("2,1").z(), 2);
        assert_eq!(p("1,1").z(), 2);
        assert_eq!(p("2,2,1").z(), 2 * 2 * 2);
        assert_eq!(p("1,1,1").z(), 6);
    }

    #[test]
    fn b_lambda_examples() {
        let e = ParamSet::default_exact();
        let (q, t) = (e.q(), e.t());
        assert_eq!(b_lambda(&Partition::empty(), &q, &t).unwrap(), Rational::from_i64(1));
        let one = Rational::from_i64(1);
        assert_eq!(
            b_lambda(&p("1"), &q, &t).unwrap(),
            (one.clone() - t.clone()) / (one.clone() - q.clone())
        );
        let exact = b_lambda(&p("1,1"), &q, &t).unwrap();
        let float = b_lambda(&p("1,1"), &0.49, &0.25).unwrap();
        assert!((crate::scalar::rational_to_f64(&exact) - float).abs() < 1e-14);
        assert!(b_lambda(&p("1"), &0.3, &0.3).is_ok());
        assert!(b_lambda(&p("1"), &Rational::from_i64(1), &t).is_err());
    }

    #[test]
    fn b_lambda_conjugate_reciprocity() {
        let e = ParamSet::default_exact();
        let (q, t) = (e.q(), e.t());
        for lam in partitions_up_to(8) {
            let lhs = b_lambda(&lam, &q, &t).unwrap() * b_lambda(&lam.conjugate(), &t, &q).unwrap();
            assert_eq!(lhs, Rational::from_i64(1), "{lam:?}");
        }
    }

    #[test]
    fn fat_hook_membership() {
        assert!(p("2,2,2").in_fat_hook(1, 2));
        assert!(!p("3,3").in_fat_hook(1, 2));
        assert!(Partition::empty().in_fat_hook(3, 0));
    }

    #[test]
    fn east_south_examples() {
        let (e, s) = p("3,2,1").east_south(1, 2).unwrap();
        assert_eq!((e, s), (p("1"), p("2,1")));
        let (e, s) = Partition::rectangle(2, 3).east_south(2, 3).unwrap();
        assert!(e.is_empty() && s.is_empty());
        let (e, s) = p("1").east_south(1, 1).unwrap();
        assert!(e.is_empty() && s.is_empty());
        assert!(matches!(p("1").east_south(2, 1), Err(Error::RectangleNotContained { .. })));
        assert!(matches!(p("3,3").east_south(1, 2), Err(Error::NotInFatHook { .. })));
    }

    #[test]
    fn east_south_two_forms_agree_and_reconstruct() {
        for lam in partitions_up_to(10) {
            for n in 1..=3 {
                for m in 0..=3 {
                    let Ok((e, s)) = lam.east_south(n, m) else { continue };
                    // s(λ) = (λ'_1 - n, …, λ'_m - n)
                    let conj = lam.conjugate();
                    let s2 = Partition::new((1..=m).map(|j| conj.part(j) - n).collect());
                    assert_eq!(s, s2);
                    // e(λ) = (λ'_{m+1}, λ'_{m+2}, …)'
                    let e2 = Partition::new(conj.parts().iter().skip(m).copied().collect()).conjugate();
                    assert_eq!(e, e2);
                    // λ = (e + (m^n), s')
                    let mut parts = e.sum(&Partition::rectangle(n, m)).padded(n).unwrap();
                    parts.extend_from_slice(s.conjugate().parts());
                    assert_eq!(Partition::new(parts), lam);
                }
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|d| partitions_of(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn ideal_is_linear_extension() {
        let ideal = dominance_ideal(&p("3,3"));
        for (i, a) in ideal.iter().enumerate() {
            assert!(a.dominated_by(&p("3,3")));
            for b in &ideal[i + 1..] {
                assert!(!b.dominated_by(a) || a == b);
            }
        }
        assert_eq!(dominance_ideal(&p("1,1,1")), vec![p("1,1,1")]);
    }

    #[test]
    fn between_enumerates_window() {
        let got = partitions_between(&[0, 0], &[2, 1]);
        assert_eq!(got, vec![p(""), p("1"), p("1,1"), p("2"), p("2,1")]);
    }

    fn arb_partition(max_weight: usize) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(1usize..=max_weight, 0..=max_weight)
            .prop_map(move |mut v| {
                while v.iter().sum::<usize>() > max_weight {
                    v.pop();
                }
                Partition::new(v)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn conjugation_is_involution(lam in arb_partition(20)) {
            prop_assert_eq!(lam.conjugate().conjugate(), lam.clone());
            prop_assert_eq!(lam.conjugate().weight(), lam.weight());
        }

        #[test]
        fn union_conjugates_to_sum(a in arb_partition(6), b in arb_partition(6)) {
            prop_assert_eq!(a.union(&b).conjugate(), a.conjugate().sum(&b.conjugate()));
        }
    }
}
