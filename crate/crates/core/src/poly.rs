//! Polynomials in two sets of variables `x = (x_1..x_n)`, `y = (y_1..y_m)`,
//! symmetric in each set separately.

use std::collections::{BTreeMap, HashMap};

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{Lift, Scalar};
use crate::symfunc::{monomial_expand, Basis, SymFunc};

/// Sparse polynomial stored through its sorted exponent blocks: the key
/// `(α, β)` stands for `m_α(x) m_β(y)`, i.e. every monomial whose x- and
/// y-exponents are permutations of `α` and `β` carries the same coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSymPoly<F> {
    n: usize,
    m: usize,
    terms: BTreeMap<(Partition, Partition), F>,
}

impl<F: Scalar> BiSymPoly<F> {
    pub fn zero(n: usize, m: usize) -> Self {
        BiSymPoly { n, m, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, m: usize, c: F) -> Self {
        let mut p = Self::zero(n, m);
        p.add_term(Partition::empty(), Partition::empty(), c);
        p
    }

    pub fn one(n: usize, m: usize) -> Self {
        Self::constant(n, m, F::one())
    }

    /// `p_r(x) = sum_i x_i^r`.
    pub fn x_power_sum(n: usize, m: usize, r: usize) -> Self {
        let mut p = Self::zero(n, m);
        p.add_term(Partition::new(vec![r]), Partition::empty(), F::one());
        p
    }

    /// `p_r(y) = sum_j y_j^r`.
    pub fn y_power_sum(n: usize, m: usize, r: usize) -> Self {
        let mut p = Self::zero(n, m);
        p.add_term(Partition::empty(), Partition::new(vec![r]), F::one());
        p
    }

    /// Builds a polynomial from explicit monomials `(x-exponents,
    /// y-exponents, coefficient)`, which must describe a polynomial symmetric
    /// in `x` and in `y` separately.
    pub fn from_monomials(n: usize, m: usize, monomials: impl IntoIterator<Item = (Vec<usize>, Vec<usize>, F)>) -> Result<Self> {
        let mut raw: HashMap<(Vec<usize>, Vec<usize>), F> = HashMap::new();
        for (ex, ey, c) in monomials {
            if ex.len() != n || ey.len() != m {
                return Err(Error::InvalidSpec(format!("monomial exponent lengths must be {n} and {m}")));
            }
            let e = raw.entry((ex, ey)).or_insert_with(F::zero);
            *e = e.clone() + c;
        }
        raw.retain(|_, c| !c.is_zero());
        let mut p = Self::zero(n, m);
        for ((ex, ey), c) in &raw {
            let (a, b) = (Partition::new(ex.clone()), Partition::new(ey.clone()));
            if p.terms.contains_key(&(a.clone(), b.clone())) {
                continue;
            }
            for ox in monomial_expand(&a, n) {
                for oy in monomial_expand(&b, m) {
                    if raw.get(&(ox.clone(), oy)) != Some(c) {
                        return Err(Error::InvalidSpec("polynomial is not symmetric in each set of variables".into()));
                    }
                }
            }
            p.add_term(a, b, c.clone());
        }
        Ok(p)
    }

    /// `f(x) g(y)` for monomial expansions `f` in `n` and `g` in `m` variables.
    pub fn from_product(n: usize, m: usize, f: &SymFunc<F>, g: &SymFunc<F>) -> Result<Self> {
        for h in [f, g] {
            if h.basis() != Basis::Monomial {
                return Err(Error::BasisMismatch { expected: "m", found: h.basis().name() });
            }
        }
        let mut p = Self::zero(n, m);
        for (a, c) in f.terms() {
            for (b, d) in g.terms() {
                p.add_term(a.clone(), b.clone(), c.clone() * d.clone());
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<(Partition, Partition), F> {
        &self.terms
    }

    pub fn coeff(&self, alpha: &Partition, beta: &Partition) -> F {
        self.terms.get(&(alpha.clone(), beta.clone())).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(a, b)| a.weight() + b.weight()).max().unwrap_or(0)
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Adds `c · m_α(x) m_β(y)`; terms that vanish identically in `n`, `m`
    /// variables are dropped.
    pub fn add_term(&mut self, alpha: Partition, beta: Partition, c: F) {
        if alpha.len() > self.n || beta.len() > self.m {
            return;
        }
        let key = (alpha, beta);
        let e = self.terms.entry(key.clone()).or_insert_with(F::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.n, self.m) != (other.n, other.m) {
            return Err(Error::InvalidSpec(format!(
                "variable counts differ: ({}, {}) vs ({}, {})",
                self.n, self.m, other.n, other.m
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for ((a, b), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut cache: HashMap<(Partition, Partition, usize), Vec<(Partition, i128)>> = HashMap::new();
        let mut prod = |a: &Partition, b: &Partition, k: usize| {
            cache.entry((a.clone(), b.clone(), k)).or_insert_with(|| monomial_product(a, b, k)).clone()
        };
        let mut out = Self::zero(self.n, self.m);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let xs = prod(a1, a2, self.n);
                let ys = prod(b1, b2, self.m);
                let c = c1.clone() * c2.clone();
                for (ka, na) in &xs {
                    for (kb, nb) in &ys {
                        out.add_term(ka.clone(), kb.clone(), c.clone() * F::from_i128(na * nb));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let mut out = Self::one(self.n, self.m);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `P(x, s·y)`.
    pub fn scale_y(&self, s: &F) -> Self {
        let mut out = Self::zero(self.n, self.m);
        for ((a, b), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), v.clone() * s.powi(b.weight() as i32));
        }
        out
    }

    pub fn lift<E: Lift<F>>(&self) -> BiSymPoly<E> {
        BiSymPoly {
            n: self.n,
            m: self.m,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), E::lift(v))).collect(),
        }
    }

    /// Exact or floating evaluation at `(x, y)`.
    pub fn evaluate<E: Lift<F>>(&self, x: &[E], y: &[E]) -> Result<E> {
        self.check_point(x.len(), y.len())?;
        let mut total = E::zero();
        let mut xcache: HashMap<&Partition, E> = HashMap::new();
        let mut ycache: HashMap<&Partition, E> = HashMap::new();
        for ((a, b), c) in &self.terms {
            let mx = xcache.entry(a).or_insert_with(|| eval_monomial(a, x)).clone();
            let my = ycache.entry(b).or_insert_with(|| eval_monomial(b, y)).clone();
            total = total + E::lift(c) * mx * my;
        }
        Ok(total)
    }

    fn check_point(&self, nx: usize, ny: usize) -> Result<()> {
        if (nx, ny) != (self.n, self.m) {
            return Err(Error::InvalidSpec(format!(
                "point has ({nx}, {ny}) coordinates, polynomial has ({}, {}) variables",
                self.n, self.m
            )));
        }
        Ok(())
    }

    /// Flattens into explicit monomials for fast repeated complex evaluation.
    pub fn compile(&self) -> CompiledPoly {
        let mut monomials = Vec::new();
        for ((a, b), c) in &self.terms {
            let c = c.to_c64();
            for ex in monomial_expand(a, self.n) {
                for ey in monomial_expand(b, self.m) {
                    let expo: Vec<u8> = ex.iter().chain(&ey).map(|&e| e as u8).collect();
                    monomials.push((expo, c));
                }
            }
        }
        let max_exp = monomials.iter().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0) as usize;
        CompiledPoly { n: self.n, m: self.m, max_exp, monomials }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|((a, b), c)| {
                let mut obj = serde_json::Map::new();
                obj.insert("x".into(), a.to_string().into());
                obj.insert("y".into(), b.to_string().into());
                if let serde_json::Value::Object(fields) = c.to_json() {
                    obj.extend(fields);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "n": self.n, "m": self.m, "terms": terms })
    }
}

fn eval_monomial<E: Scalar>(a: &Partition, x: &[E]) -> E {
    let mut total = E::zero();
    for expo in monomial_expand(a, x.len()) {
        let mut term = E::one();
        for (xi, &e) in x.iter().zip(&expo) {
            if e > 0 {
                term = term * xi.powi(e as i32);
            }
        }
        total = total + term;
    }
    total
}

/// `m_a m_b = sum_κ c_κ m_κ` in `k` variables.
pub fn monomial_product(a: &Partition, b: &Partition, k: usize) -> Vec<(Partition, i128)> {
    // c_κ counts pairs (u, v) from the two orbits with u + v = κ sorted.
    let ua = monomial_expand(a, k);
    let vb = monomial_expand(b, k);
    let mut out: BTreeMap<Partition, i128> = BTreeMap::new();
    for u in &ua {
        for v in &vb {
            let s: Vec<usize> = u.iter().zip(v).map(|(x, y)| x + y).collect();
            if s.windows(2).all(|w| w[0] >= w[1]) {
                *out.entry(Partition::new(s)).or_insert(0) += 1;
            }
        }
    }
    out.into_iter().collect()
}

/// A polynomial flattened to explicit monomials with complex coefficients.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    n: usize,
    m: usize,
    max_exp: usize,
    monomials: Vec<(Vec<u8>, Complex64)>,
}

impl CompiledPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_exp(&self) -> usize {
        self.max_exp
    }

    /// Evaluates using a table `powers[v][e] = z_v^e` over all `n + m`
    /// coordinates.
    pub fn eval_with_powers(&self, powers: &[Vec<Complex64>]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (expo, c) in &self.monomials {
            let mut term = *c;
            for (v, &e) in expo.iter().enumerate() {
                if e > 0 {
                    term *= powers[v][e as usize];
                }
            }
            total += term;
        }
        total
    }

    pub fn eval(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let powers = power_table(x.iter().chain(y), self.max_exp);
        self.eval_with_powers(&powers)
    }

    /// `P*(x, y) = conj(P(1/conj(x), 1/conj(y)))`.
    pub fn eval_star(&self, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
        let inv = |z: &Complex64| {
            if z.norm() == 0.0 {
                Err(Error::Pole("zero coordinate in conjugate evaluation".into()))
            } else {
                Ok(1.0 / z.conj())
            }
        };
        let xi = x.iter().map(inv).collect::<Result<Vec<_>>>()?;
        let yi = y.iter().map(inv).collect::<Result<Vec<_>>>()?;
        Ok(self.eval(&xi, &yi).conj())
    }

    /// `Q(1/x, 1/y)` without complex conjugation.
    pub fn eval_reflected(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let xi: Vec<Complex64> = x.iter().map(|z| 1.0 / z).collect();
        let yi: Vec<Complex64> = y.iter().map(|z| 1.0 / z).collect();
        self.eval(&xi, &yi)
    }
}

/// `table[v][e] = z_v^e` for `e ≤ max_exp`.
pub fn power_table<'a>(coords: impl Iterator<Item = &'a Complex64>, max_exp: usize) -> Vec<Vec<Complex64>> {
    coords
        .map(|&z| {
            let mut row = Vec::with_capacity(max_exp + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=max_exp {
                row.push(acc);
                acc *= z;
            }
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn symmetrisation_is_checked() {
        let ok = BiSymPoly::from_monomials(2, 1, [(vec![1, 0], vec![0], rat(1, 1)), (vec![0, 1], vec![0], rat(1, 1))]).unwrap();
        assert_eq!(ok, BiSymPoly::x_power_sum(2, 1, 1));
        let bad = BiSymPoly::from_monomials(2, 1, [(vec![1, 0], vec![0], rat(1, 1))]);
        assert!(bad.is_err());
    }

    #[test]
    fn monomial_products() {
        // m_1 m_1 = m_2 + 2 m_11 in two variables, m_2 in one
        assert_eq!(monomial_product(&p("1"), &p("1"), 2), vec![(p("1,1"), 2), (p("2"), 1)]);
        assert_eq!(monomial_product(&p("1"), &p("1"), 1), vec![(p("2"), 1)]);
        assert_eq!(monomial_product(&p("2,1"), &p("1"), 3).len(), 3);
    }

    #[test]
    fn product_matches_pointwise() {
        let a = BiSymPoly::x_power_sum(2, 2, 1).add(&BiSymPoly::y_power_sum(2, 2, 2).scale(&rat(-3, 2))).unwrap();
        let b = BiSymPoly::x_power_sum(2, 2, 2).add(&BiSymPoly::one(2, 2)).unwrap();
        let ab = a.mul(&b).unwrap();
        let x = [rat(2, 3), rat(-5, 7)];
        let y = [rat(3, 1), rat(1, 4)];
        assert_eq!(
            ab.evaluate(&x, &y).unwrap(),
            a.evaluate(&x, &y).unwrap() * b.evaluate(&x, &y).unwrap()
        );
    }

    #[test]
    fn compiled_evaluation_agrees() {
        let a = BiSymPoly::x_power_sum(2, 1, 3).add(&BiSymPoly::y_power_sum(2, 1, 2).scale(&rat(1, 3))).unwrap();
        let a = a.mul(&a).unwrap();
        let x = [Complex64::new(0.3, 1.2), Complex64::new(-0.7, 0.1)];
        let y = [Complex64::new(1.1, -0.4)];
        let direct = a.evaluate(&x, &y).unwrap();
        let compiled = a.compile().eval(&x, &y);
        assert!((direct - compiled).norm() < 1e-12);
    }

    #[test]
    fn star_examples() {
        let one = BiSymPoly::<Rational>::one(1, 0).compile();
        assert_eq!(one.eval_star(&[Complex64::new(0.0, 2.0)], &[]).unwrap(), Complex64::new(1.0, 0.0));
        let x1 = BiSymPoly::<Rational>::x_power_sum(1, 0, 1).compile();
        let v = x1.eval_star(&[Complex64::new(0.0, 2.0)], &[]).unwrap();
        assert!((v - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        let z = Complex64::from_polar(1.0, 0.7);
        let v = x1.eval_star(&[z], &[]).unwrap();
        assert!((v - x1.eval(&[z], &[]).conj()).norm() < 1e-15);
        assert!(x1.eval_star(&[Complex64::new(0.0, 0.0)], &[]).is_err());
    }

    #[test]
    fn y_scaling() {
        let a = BiSymPoly::y_power_sum(1, 1, 1);
        assert_eq!(a.scale_y(&rat(7, 20)).coeff(&Partition::empty(), &p("1")), rat(7, 20));
    }
}
