//! Macdonald polynomials by Gram–Schmidt orthogonalisation of monomials
//! against the (q,t) scalar product, and the structure constants built
//! from them.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::complex::Complex64;

use super::transition::AugmentedMonomials;
use super::{power_norm, Basis, SymFunc};
use crate::error::{Error, Result};
use crate::partition::{b_lambda, dominance_ideal, partitions_of, Partition};
use crate::scalar::{Lift, ParamSet, Scalar};

/// Per-degree state: the scalar product in the augmented monomial basis
/// `m~_μ = prod_i m_i(μ)! m_μ` and every `P_μ` computed so far.
///
/// All power-sum norms of the degree are multiplied by one common factor
/// (which clears denominators in exact arithmetic), so the stored Gram
/// entries and norms carry that factor. Only ratios of them are used.
struct Degree<F> {
    index: HashMap<Partition, usize>,
    scaled_norms: Vec<F>,
    aug: AugmentedMonomials,
    rows: HashMap<usize, Vec<(usize, i128)>>,
    gram: HashMap<(usize, usize), F>,
    // P_μ in augmented-monomial coordinates, and its scaled norm.
    polys: HashMap<usize, (BTreeMap<usize, F>, F)>,
}

impl<F: Scalar> Degree<F> {
    fn new(d: usize, q: &F, t: &F) -> Result<Self> {
        let parts = partitions_of(d);
        let norms = parts.iter().map(|rho| power_norm(rho, q, t)).collect::<Result<Vec<F>>>()?;
        let scale = F::common_scale(&norms);
        Ok(Degree {
            index: parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect(),
            scaled_norms: norms.into_iter().map(|v| v * scale.clone()).collect(),
            aug: AugmentedMonomials::new(),
            rows: HashMap::new(),
            gram: HashMap::new(),
            polys: HashMap::new(),
        })
    }

    fn idx(&self, mu: &Partition) -> usize {
        self.index[mu]
    }

    fn row(&mut self, mu: &Partition) -> Vec<(usize, i128)> {
        let i = self.idx(mu);
        if let Some(r) = self.rows.get(&i) {
            return r.clone();
        }
        let mut r: Vec<(usize, i128)> = self.aug.expand(mu).into_iter().map(|(rho, c)| (self.index[&rho], c)).collect();
        r.sort_unstable();
        self.rows.insert(i, r.clone());
        r
    }

    fn gram(&mut self, mu: &Partition, nu: &Partition) -> F {
        let (i, j) = (self.idx(mu), self.idx(nu));
        let key = (i.min(j), i.max(j));
        if let Some(g) = self.gram.get(&key) {
            return g.clone();
        }
        let (a, b) = (self.row(mu), self.row(nu));
        let mut terms = Vec::new();
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    terms.push((a[x].1, b[y].1, &self.scaled_norms[a[x].0]));
                    x += 1;
                    y += 1;
                }
            }
        }
        let total = F::integer_weighted_sum(&terms);
        self.gram.insert(key, total.clone());
        total
    }

    /// `⟨m~_μ, f⟩` for `f` in augmented-monomial coordinates.
    fn pair(&mut self, mu: &Partition, f: &BTreeMap<usize, F>, parts: &[Partition]) -> F {
        let mut total = F::zero();
        for (&j, c) in f {
            total = total + c.clone() * self.gram(mu, &parts[j]);
        }
        total
    }

    /// Orthogonalises `m~_μ` against the given earlier vectors and returns the
    /// monic result with its scaled norm.
    fn orthogonalise<'a>(
        &mut self,
        mu: &Partition,
        earlier: impl Iterator<Item = &'a (BTreeMap<usize, F>, F)>,
        parts: &[Partition],
    ) -> Result<(BTreeMap<usize, F>, F)>
    where
        F: 'a,
    {
        let i = self.idx(mu);
        let mut v = BTreeMap::from([(i, F::one())]);
        for (w, norm) in earlier {
            let ip = self.pair(mu, w, parts);
            if ip.is_zero() {
                continue;
            }
            let c = ip / norm.clone();
            for (&j, x) in w {
                let e = v.entry(j).or_insert_with(F::zero);
                *e = e.clone() - c.clone() * x.clone();
            }
        }
        v.retain(|_, x| !x.is_zero());
        let a = F::from_i128(AugmentedMonomials::augmentation(mu));
        for x in v.values_mut() {
            *x = x.clone() / a.clone();
        }
        let norm = v[&i].clone() * self.pair(mu, &v, parts);
        if norm.is_degenerate() {
            return Err(Error::Degenerate(format!("Gram-Schmidt norm of P_({mu})")));
        }
        Ok((v, norm))
    }

    fn to_symfunc(&self, w: &BTreeMap<usize, F>, parts: &[Partition]) -> SymFunc<F> {
        SymFunc::from_terms(
            Basis::Monomial,
            None,
            w.iter().map(|(&j, c)| {
                let mu = parts[j].clone();
                let a = F::from_i128(AugmentedMonomials::augmentation(&mu));
                (mu, c.clone() * a)
            }),
        )
    }
}

/// Macdonald polynomials at fixed `(q, t)`, with caches shared by all
/// computations at these parameters. Safe to share between threads.
pub struct MacdonaldContext<F: Scalar> {
    q: F,
    t: F,
    degrees: Mutex<HashMap<usize, Arc<Mutex<Degree<F>>>>>,
    partitions: Mutex<HashMap<usize, Arc<Vec<Partition>>>>,
    dual: OnceLock<Arc<MacdonaldContext<F>>>,
}

impl<F: Scalar> MacdonaldContext<F> {
    pub fn new(q: F, t: F) -> Self {
        MacdonaldContext {
            q,
            t,
            degrees: Mutex::new(HashMap::new()),
            partitions: Mutex::new(HashMap::new()),
            dual: OnceLock::new(),
        }
    }

    pub fn from_params(params: &ParamSet<F>) -> Self {
        Self::new(params.q(), params.t())
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn t(&self) -> &F {
        &self.t
    }

    /// The context at swapped parameters `(t, q)`.
    pub fn dual(&self) -> Arc<MacdonaldContext<F>> {
        self.dual.get_or_init(|| Arc::new(MacdonaldContext::new(self.t.clone(), self.q.clone()))).clone()
    }

    fn degree(&self, d: usize) -> Result<Arc<Mutex<Degree<F>>>> {
        let mut map = self.degrees.lock().expect("poisoned");
        if let Some(deg) = map.get(&d) {
            return Ok(deg.clone());
        }
        let deg = Arc::new(Mutex::new(Degree::new(d, &self.q, &self.t)?));
        map.insert(d, deg.clone());
        Ok(deg)
    }

    fn parts(&self, d: usize) -> Arc<Vec<Partition>> {
        self.partitions.lock().expect("poisoned").entry(d).or_insert_with(|| Arc::new(partitions_of(d))).clone()
    }

    /// `P_λ` in the monomial basis, with no restriction on the number of
    /// variables.
    ///
    /// Every `P_μ` with `μ ≤ λ` is produced on the way, by orthogonalising
    /// `m_μ` against the `P_κ` with `κ < μ`; visiting the dominance ideal of
    /// `λ` in increasing lexicographic order guarantees those are ready.
    pub fn p(&self, lambda: &Partition) -> Result<SymFunc<F>> {
        let d = lambda.weight();
        let deg = self.degree(d)?;
        let parts = self.parts(d);
        let mut deg = deg.lock().expect("poisoned");
        let ideal = dominance_ideal(lambda);
        for (k, mu) in ideal.iter().enumerate() {
            let i = deg.idx(mu);
            if deg.polys.contains_key(&i) {
                continue;
            }
            let lower: Vec<(BTreeMap<usize, F>, F)> = ideal[..k]
                .iter()
                .filter(|kappa| kappa.dominated_by(mu))
                .map(|kappa| deg.polys[&deg.idx(kappa)].clone())
                .collect();
            let entry = deg.orthogonalise(mu, lower.iter(), &parts)?;
            deg.polys.insert(i, entry);
        }
        let w = deg.polys[&deg.idx(lambda)].0.clone();
        Ok(deg.to_symfunc(&w, &parts))
    }

    /// `P_λ` in `n` variables.
    pub fn p_in(&self, lambda: &Partition, n: usize) -> Result<SymFunc<F>> {
        if lambda.len() > n {
            return Ok(SymFunc::zero(Basis::Monomial, Some(n)));
        }
        Ok(self.p(lambda)?.with_nvars(n))
    }

    /// `P_λ` in the power-sum basis.
    pub fn p_power(&self, lambda: &Partition) -> Result<SymFunc<F>> {
        self.p(lambda)?.m_to_p()
    }

    /// `Q_λ = b_λ P_λ` in the monomial basis.
    pub fn q_fn(&self, lambda: &Partition) -> Result<SymFunc<F>> {
        Ok(self.p(lambda)?.scale(&b_lambda(lambda, &self.q, &self.t)?))
    }

    pub fn b(&self, lambda: &Partition) -> Result<F> {
        b_lambda(lambda, &self.q, &self.t)
    }

    /// Plain Gram–Schmidt over `order`, each vector orthogonalised against
    /// all earlier ones. For any linear extension of an order ideal of the
    /// dominance order this reproduces the `P_μ`, which the tests use to
    /// check independence of the chosen extension.
    pub fn gram_schmidt(&self, order: &[Partition]) -> Result<Vec<SymFunc<F>>> {
        let Some(first) = order.first() else { return Ok(Vec::new()) };
        let d = first.weight();
        if let Some(bad) = order.iter().find(|mu| mu.weight() != d) {
            return Err(Error::WeightMismatch(d, bad.weight()));
        }
        let deg = self.degree(d)?;
        let parts = self.parts(d);
        let mut deg = deg.lock().expect("poisoned");
        let mut done: Vec<(BTreeMap<usize, F>, F)> = Vec::new();
        for mu in order {
            let entry = deg.orthogonalise(mu, done.iter(), &parts)?;
            done.push(entry);
        }
        Ok(done.iter().map(|(w, _)| deg.to_symfunc(w, &parts)).collect())
    }

    /// Expands a monomial expansion in the Macdonald basis by peeling off
    /// lexicographically leading terms, which are always dominance-maximal.
    pub fn to_macdonald_basis(&self, f: &SymFunc<F>) -> Result<SymFunc<F>> {
        if f.basis() != Basis::Monomial {
            return Err(Error::BasisMismatch { expected: "m", found: f.basis().name() });
        }
        let mut rest = f.clone();
        let mut out = SymFunc::zero(Basis::Macdonald, f.nvars());
        while let Some((kappa, c)) = rest.terms().iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            let mut pk = self.p(&kappa)?;
            if let Some(n) = f.nvars() {
                pk = pk.with_nvars(n);
            }
            rest = rest.sub(&pk.scale(&c))?;
            out.add_term(kappa, c);
        }
        Ok(out)
    }

    /// Converts a Macdonald-basis expansion back to monomials.
    pub fn from_macdonald_basis(&self, f: &SymFunc<F>) -> Result<SymFunc<F>> {
        if f.basis() != Basis::Macdonald {
            return Err(Error::BasisMismatch { expected: "P", found: f.basis().name() });
        }
        let mut out = SymFunc::zero(Basis::Monomial, f.nvars());
        for (kappa, c) in f.terms() {
            let mut pk = self.p(kappa)?;
            if let Some(n) = f.nvars() {
                pk = pk.with_nvars(n);
            }
            out = out.add(&pk.scale(c))?;
        }
        Ok(out)
    }

    /// `P_μ P_ν = sum_λ f^λ_{μν} P_λ`.
    pub fn product(&self, mu: &Partition, nu: &Partition) -> Result<SymFunc<F>> {
        let prod = self.p_power(mu)?.mul(&self.p_power(nu)?)?.p_to_m(None)?;
        self.to_macdonald_basis(&prod)
    }

    /// The structure constant `f^λ_{μν}(q,t)`; zero when weights do not add up.
    pub fn pieri_f(&self, lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<F> {
        if lambda.weight() != mu.weight() + nu.weight() {
            return Ok(F::zero());
        }
        Ok(self.product(mu, nu)?.coeff(lambda))
    }

    /// `P_{λ/μ} = sum_ν f^{λ'}_{μ'ν'}(t,q) P_ν` in the Macdonald basis,
    /// restricted to `n` variables when given.
    pub fn skew_p(&self, lambda: &Partition, mu: &Partition, n: Option<usize>) -> Result<SymFunc<F>> {
        let mut out = SymFunc::zero(Basis::Macdonald, n);
        if mu.weight() > lambda.weight() || !lambda.contains(mu) {
            return Ok(out);
        }
        let dual = self.dual();
        let (lc, mc) = (lambda.conjugate(), mu.conjugate());
        for nu in partitions_of(lambda.weight() - mu.weight()) {
            if n.is_some_and(|n| nu.len() > n) {
                continue;
            }
            let c = dual.pieri_f(&lc, &mc, &nu.conjugate())?;
            out.add_term(nu, c);
        }
        Ok(out)
    }

    /// `P_{λ/μ}` in the monomial basis.
    pub fn skew_p_monomial(&self, lambda: &Partition, mu: &Partition, n: Option<usize>) -> Result<SymFunc<F>> {
        self.from_macdonald_basis(&self.skew_p(lambda, mu, n)?)
    }
}

/// Largest residual of `P_λ(x,y) = sum_{μ⊆λ} P_{λ/μ}(x) P_μ(y)` over the
/// given points, relative to `1 + |P_λ(x,y)|`.
pub fn merge_expand_residual<F: Scalar>(
    ctx: &MacdonaldContext<F>,
    lambda: &Partition,
    points: &[(Vec<Complex64>, Vec<Complex64>)],
) -> Result<f64>
where
    Complex64: Lift<F>,
{
    let Some((x0, y0)) = points.first() else { return Ok(0.0) };
    let (n1, n2) = (x0.len(), y0.len());
    let full = ctx.p_in(lambda, n1 + n2)?;
    let mut pieces = Vec::new();
    for d in 0..=lambda.weight() {
        for mu in partitions_of(d) {
            if mu.len() > n2 || !lambda.contains(&mu) {
                continue;
            }
            let skew = ctx.skew_p_monomial(lambda, &mu, Some(n1))?;
            if skew.is_zero() {
                continue;
            }
            pieces.push((skew, ctx.p_in(&mu, n2)?));
        }
    }
    let mut worst = 0.0f64;
    for (x, y) in points {
        let xy: Vec<Complex64> = x.iter().chain(y).copied().collect();
        let lhs = full.evaluate(&xy)?;
        let mut rhs = Complex64::new(0.0, 0.0);
        for (skew, pm) in &pieces {
            rhs += skew.evaluate(x)? * pm.evaluate(y)?;
        }
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    Ok(worst)
}
