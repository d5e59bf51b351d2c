//! Symmetric functions in the monomial, power-sum and Macdonald bases, the
//! (q,t) scalar product, and the Macdonald polynomials themselves.

mod macdonald;
pub mod transition;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::scalar::{Lift, Scalar};

pub use macdonald::{merge_expand_residual, MacdonaldContext};
use transition::{power_to_monomial, AugmentedMonomials};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    #[serde(rename = "m")]
    Monomial,
    #[serde(rename = "p")]
    PowerSum,
    #[serde(rename = "P")]
    Macdonald,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Monomial => "m",
            Basis::PowerSum => "p",
            Basis::Macdonald => "P",
        }
    }
}

/// A finite linear combination of basis elements indexed by partitions.
///
/// With `nvars = Some(n)` the function lives in `n` variables: monomial and
/// Macdonald terms indexed by partitions longer than `n` vanish and are
/// dropped. Power sums carry no such restriction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymFunc<F> {
    basis: Basis,
    terms: BTreeMap<Partition, F>,
    nvars: Option<usize>,
}

impl<F: Scalar> SymFunc<F> {
    pub fn zero(basis: Basis, nvars: Option<usize>) -> Self {
        SymFunc { basis, terms: BTreeMap::new(), nvars }
    }

    pub fn basis_element(basis: Basis, lambda: Partition, nvars: Option<usize>) -> Self {
        let mut f = Self::zero(basis, nvars);
        f.add_term(lambda, F::one());
        f
    }

    pub fn one(basis: Basis) -> Self {
        Self::basis_element(basis, Partition::empty(), None)
    }

    pub fn from_terms(basis: Basis, nvars: Option<usize>, terms: impl IntoIterator<Item = (Partition, F)>) -> Self {
        let mut f = Self::zero(basis, nvars);
        for (k, v) in terms {
            f.add_term(k, v);
        }
        f
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn nvars(&self) -> Option<usize> {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Partition, F> {
        &self.terms
    }

    pub fn coeff(&self, lambda: &Partition) -> F {
        self.terms.get(lambda).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Partition::weight).max().unwrap_or(0)
    }

    fn truncated(&self, lambda: &Partition) -> bool {
        self.basis != Basis::PowerSum && self.nvars.is_some_and(|n| lambda.len() > n)
    }

    /// Adds `c` to the coefficient of `lambda`, dropping exact zeros.
    pub fn add_term(&mut self, lambda: Partition, c: F) {
        if self.truncated(&lambda) {
            return;
        }
        let entry = self.terms.entry(lambda.clone()).or_insert_with(F::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch { expected: self.basis.name(), found: other.basis.name() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.basis, self.nvars, self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())))
    }

    /// Restricts to `n` variables.
    pub fn with_nvars(&self, n: usize) -> Self {
        Self::from_terms(self.basis, Some(n), self.terms.clone())
    }

    pub fn lift<E: Lift<F>>(&self) -> SymFunc<E> {
        SymFunc {
            basis: self.basis,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), E::lift(v))).collect(),
        }
    }

    fn expect_basis(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(Error::BasisMismatch { expected: basis.name(), found: self.basis.name() });
        }
        Ok(())
    }

    /// Product of two power-sum expansions.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.expect_basis(Basis::PowerSum)?;
        other.expect_basis(Basis::PowerSum)?;
        let mut out = Self::zero(Basis::PowerSum, self.nvars.or(other.nvars));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.union(b), x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    /// Power sums to monomials in `nvars` variables (`None`: as many as needed).
    pub fn p_to_m(&self, nvars: Option<usize>) -> Result<Self> {
        self.expect_basis(Basis::PowerSum)?;
        let mut out = Self::zero(Basis::Monomial, nvars);
        for (rho, c) in &self.terms {
            for (mu, r) in power_to_monomial(rho, nvars) {
                out.add_term(mu, c.clone() * F::from_i128(r));
            }
        }
        Ok(out)
    }

    /// Monomials to power sums. Fails when `nvars` is smaller than the
    /// degree, where the monomials with too many parts have already been
    /// lost and the transition cannot be inverted.
    pub fn m_to_p(&self) -> Result<Self> {
        self.expect_basis(Basis::Monomial)?;
        let degree = self.max_degree();
        if let Some(n) = self.nvars {
            if n < degree {
                return Err(Error::NotInvertible { nvars: n, degree });
            }
        }
        let mut aug = AugmentedMonomials::new();
        let mut out = Self::zero(Basis::PowerSum, self.nvars);
        for (mu, c) in &self.terms {
            let a = F::from_i128(AugmentedMonomials::augmentation(mu));
            let c = c.clone() / a;
            for (rho, r) in aug.expand(mu) {
                out.add_term(rho, c.clone() * F::from_i128(r));
            }
        }
        Ok(out)
    }

    /// `ω_{q,t}: p_r ↦ (-1)^{r-1} (1-q^r)/(1-t^r) p_r`, extended multiplicatively.
    pub fn omega(&self, q: &F, t: &F) -> Result<Self> {
        self.expect_basis(Basis::PowerSum)?;
        let mut out = Self::zero(Basis::PowerSum, self.nvars);
        for (rho, c) in &self.terms {
            let mut factor = c.clone();
            for &r in rho.parts() {
                let ratio = crate::scalar::qt_ratio(q, t, r as u32)?;
                factor = factor * if r % 2 == 0 { -ratio } else { ratio };
            }
            out.add_term(rho.clone(), factor);
        }
        Ok(out)
    }

    /// Evaluates a monomial expansion at the point `x`.
    pub fn evaluate<E: Lift<F>>(&self, x: &[E]) -> Result<E> {
        self.expect_basis(Basis::Monomial)?;
        let mut total = E::zero();
        for (mu, c) in &self.terms {
            let mut m = E::zero();
            for expo in monomial_expand(mu, x.len()) {
                let mut term = E::one();
                for (xi, &e) in x.iter().zip(&expo) {
                    term = term * xi.powi(e as i32);
                }
                m = m + term;
            }
            total = total + E::lift(c) * m;
        }
        Ok(total)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let mut obj = serde_json::Map::new();
                obj.insert("partition".into(), k.to_string().into());
                if let serde_json::Value::Object(fields) = v.to_json() {
                    obj.extend(fields);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({
            "basis": self.basis.name(),
            "nvars": self.nvars,
            "terms": terms,
        })
    }
}

/// `⟨p_λ, p_μ⟩_{q,t} = δ_{λμ} z_λ prod_i (1-q^{λ_i})/(1-t^{λ_i})`, extended
/// linearly in the first and antilinearly in the second argument.
pub fn inner_product_qt<F: Scalar>(f: &SymFunc<F>, g: &SymFunc<F>, q: &F, t: &F) -> Result<F> {
    f.expect_basis(Basis::PowerSum)?;
    g.expect_basis(Basis::PowerSum)?;
    let mut total = F::zero();
    for (lambda, a) in &f.terms {
        if let Some(b) = g.terms.get(lambda) {
            total = total + a.clone() * b.conj() * power_norm(lambda, q, t)?;
        }
    }
    Ok(total)
}

/// `⟨p_λ, p_λ⟩_{q,t}`.
pub fn power_norm<F: Scalar>(lambda: &Partition, q: &F, t: &F) -> Result<F> {
    let mut v = F::from_i128(lambda.z() as i128);
    for &r in lambda.parts() {
        v = v * crate::scalar::qt_ratio(q, t, r as u32)?;
    }
    Ok(v)
}

/// The distinct permutations of `lambda` padded to length `n`, i.e. the
/// exponent vectors of `m_λ(x_1,…,x_n)`. Empty when `ℓ(λ) > n`.
pub fn monomial_expand(lambda: &Partition, n: usize) -> Vec<Vec<usize>> {
    let Some(mut v) = lambda.padded(n) else { return Vec::new() };
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // lexicographic next-permutation over a multiset
    while let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) {
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot");
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
    out
}

/// All monomials `m_μ` of degree `d`, as a helper for building test inputs.
pub fn monomial_basis<F: Scalar>(d: usize) -> Vec<SymFunc<F>> {
    partitions_of(d).into_iter().map(|mu| SymFunc::basis_element(Basis::Monomial, mu, None)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ParamSet, Rational};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn monomial_expand_examples() {
        assert_eq!(monomial_expand(&p("1"), 2), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(monomial_expand(&p("2,1"), 2), vec![vec![1, 2], vec![2, 1]]);
        assert!(monomial_expand(&p("1,1,1"), 2).is_empty());
        assert_eq!(monomial_expand(&p("2,1,1"), 4).len(), 12);
    }

    #[test]
    fn power_to_monomial_examples() {
        let f: SymFunc<Rational> = SymFunc::basis_element(Basis::PowerSum, p("1,1"), None);
        let m = f.p_to_m(None).unwrap();
        assert_eq!(m.coeff(&p("2")), rat(1, 1));
        assert_eq!(m.coeff(&p("1,1")), rat(2, 1));
        let f: SymFunc<Rational> = SymFunc::basis_element(Basis::PowerSum, p("2"), None);
        assert_eq!(f.p_to_m(None).unwrap(), SymFunc::basis_element(Basis::Monomial, p("2"), None));
    }

    #[test]
    fn transitions_are_mutually_inverse() {
        for d in 0..=7 {
            for f in monomial_basis::<Rational>(d) {
                let back = f.with_nvars(d).m_to_p().unwrap().p_to_m(Some(d)).unwrap();
                assert_eq!(back, f.with_nvars(d));
            }
        }
    }

    #[test]
    fn m_to_p_needs_enough_variables() {
        let f: SymFunc<Rational> = SymFunc::basis_element(Basis::Monomial, p("2,1"), Some(2));
        assert_eq!(f.m_to_p(), Err(Error::NotInvertible { nvars: 2, degree: 3 }));
    }

    #[test]
    fn inner_product_examples() {
        let e = ParamSet::default_exact();
        let (q, t) = (e.q(), e.t());
        let one = rat(1, 1);
        let p1: SymFunc<Rational> = SymFunc::basis_element(Basis::PowerSum, p("1"), None);
        let p2: SymFunc<Rational> = SymFunc::basis_element(Basis::PowerSum, p("2"), None);
        assert_eq!(inner_product_qt(&p1, &p1, &q, &t).unwrap(), (&one - &q) / (&one - &t));
        assert_eq!(inner_product_qt(&p1, &p2, &q, &t).unwrap(), rat(0, 1));
        let expect = rat(2, 1) * (&one - &q * &q) / (&one - &t * &t);
        assert_eq!(inner_product_qt(&p2, &p2, &q, &t).unwrap(), expect);
        assert!(inner_product_qt(&p1, &p1, &q, &one).is_err());
    }

    #[test]
    fn omega_examples() {
        let e = ParamSet::default_exact();
        let (q, t) = (e.q(), e.t());
        let one = rat(1, 1);
        let p1: SymFunc<Rational> = SymFunc::basis_element(Basis::PowerSum, p("1"), None);
        let p2: SymFunc<Rational> = SymFunc::basis_element(Basis::PowerSum, p("2"), None);
        assert_eq!(p1.omega(&q, &t).unwrap().coeff(&p("1")), (&one - &q) / (&one - &t));
        assert_eq!(p2.omega(&q, &t).unwrap().coeff(&p("2")), -(&one - &q * &q) / (&one - &t * &t));
        assert!(p1.omega(&q, &one).is_err());
    }

    #[test]
    fn evaluation_of_monomials() {
        let f: SymFunc<Rational> = SymFunc::basis_element(Basis::Monomial, p("2,1"), None);
        let v = f.evaluate(&[2.0, 3.0]).unwrap();
        assert_eq!(v, 4.0 * 3.0 + 2.0 * 9.0);
    }

    #[test]
    fn json_shape() {
        let f: SymFunc<Rational> = SymFunc::from_terms(Basis::Monomial, None, [(p("2"), rat(3, 4))]);
        let j = f.to_json();
        assert_eq!(j["basis"], "m");
        assert_eq!(j["terms"][0]["partition"], "2");
        assert_eq!(j["terms"][0]["numerator"], "3");
        let g = f.lift::<f64>().to_json();
        assert_eq!(g["terms"][0]["float"], 0.75);
    }
}
