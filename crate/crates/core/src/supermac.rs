//! Super-Macdonald polynomials: images of the Macdonald polynomials under the
//! homomorphism `p_r ↦ p_r(x) - κ_r p_r(y)` with deformed Newton coefficients
//! `κ_r = (q^{r/2} - q^{-r/2}) / (t^{r/2} - t^{-r/2})`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::partition::{partitions_between, Partition};
use crate::poly::BiSymPoly;
use crate::scalar::{Lift, ParamSet, Scalar};
use crate::symfunc::transition::power_to_monomial;
use crate::symfunc::{Basis, MacdonaldContext, SymFunc};

/// `κ_r = (a^r - a^{-r}) / (b^r - b^{-r})` with `a = q^{1/2}`, `b = t^{1/2}`.
pub fn deformed_coefficient<F: Scalar>(r: usize, params: &ParamSet<F>) -> Result<F> {
    if r == 0 {
        return Err(Error::InvalidSpec("deformed Newton sums start at r = 1".into()));
    }
    let r = r as i32;
    let num = params.a.powi(r) - params.a.powi(-r);
    let den = params.b.powi(r) - params.b.powi(-r);
    Ok(num * den.checked_inv("t^{r/2} - t^{-r/2}")?)
}

/// `p_r(x) - κ_r p_r(y)`.
pub fn deformed_newton<F: Scalar>(r: usize, n: usize, m: usize, params: &ParamSet<F>) -> Result<BiSymPoly<F>> {
    let k = deformed_coefficient(r, params)?;
    BiSymPoly::x_power_sum(n, m, r).add(&BiSymPoly::y_power_sum(n, m, r).scale(&-k))
}

/// Applies the homomorphism to `f` given in power sums.
pub fn phi<F: Scalar>(f: &SymFunc<F>, n: usize, m: usize, params: &ParamSet<F>) -> Result<BiSymPoly<F>> {
    if f.basis() != Basis::PowerSum {
        return Err(Error::BasisMismatch { expected: "p", found: f.basis().name() });
    }
    let mut kappa: HashMap<usize, F> = HashMap::new();
    // p_ρ = prod over parts, so expanding picks which parts go to y.
    let mut split: BTreeMap<(Partition, Partition), F> = BTreeMap::new();
    for (rho, c) in f.terms() {
        let ms = multiset(rho);
        for &(v, _) in &ms {
            if let std::collections::hash_map::Entry::Vacant(e) = kappa.entry(v) {
                e.insert(-deformed_coefficient(v, params)?);
            }
        }
        let mut choice = vec![0usize; ms.len()];
        loop {
            let mut coeff = c.clone();
            let (mut px, mut py) = (Vec::new(), Vec::new());
            for (&(v, mult), &k) in ms.iter().zip(&choice) {
                coeff = coeff * F::from_i128(binomial(mult, k)) * kappa[&v].powi(k as i32);
                px.extend(std::iter::repeat_n(v, mult - k));
                py.extend(std::iter::repeat_n(v, k));
            }
            let e = split.entry((Partition::new(px), Partition::new(py))).or_insert_with(F::zero);
            *e = e.clone() + coeff;
            let mut i = 0;
            while i < ms.len() && choice[i] == ms[i].1 {
                choice[i] = 0;
                i += 1;
            }
            if i == ms.len() {
                break;
            }
            choice[i] += 1;
        }
    }
    let mut xcache: HashMap<Partition, Vec<(Partition, i128)>> = HashMap::new();
    let mut ycache: HashMap<Partition, Vec<(Partition, i128)>> = HashMap::new();
    let mut out = BiSymPoly::zero(n, m);
    for ((px, py), c) in split {
        if c.is_zero() {
            continue;
        }
        let xs = xcache.entry(px.clone()).or_insert_with(|| power_to_monomial(&px, Some(n))).clone();
        let ys = ycache.entry(py.clone()).or_insert_with(|| power_to_monomial(&py, Some(m))).clone();
        for (a, ca) in &xs {
            for (b, cb) in &ys {
                out.add_term(a.clone(), b.clone(), c.clone() * F::from_i128(ca * cb));
            }
        }
    }
    Ok(out)
}

fn multiset(rho: &Partition) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &p in rho.parts() {
        match out.last_mut() {
            Some((v, k)) if *v == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Super-Macdonald polynomials at fixed parameters.
pub struct SuperMacdonald<F: Scalar> {
    params: ParamSet<F>,
    ctx: MacdonaldContext<F>,
    cache: Mutex<HashMap<(Partition, usize, usize), BiSymPoly<F>>>,
}

impl<F: Scalar> SuperMacdonald<F> {
    pub fn new(params: ParamSet<F>) -> Self {
        let ctx = MacdonaldContext::from_params(&params);
        SuperMacdonald { params, ctx, cache: Mutex::new(HashMap::new()) }
    }

    pub fn params(&self) -> &ParamSet<F> {
        &self.params
    }

    pub fn context(&self) -> &MacdonaldContext<F> {
        &self.ctx
    }

    /// `SP_λ` as the image of `P_λ`; vanishes exactly when `λ` is outside
    /// the fat hook `H_{n,m}`.
    pub fn sp(&self, lambda: &Partition, n: usize, m: usize) -> Result<BiSymPoly<F>> {
        let key = (lambda.clone(), n, m);
        if let Some(p) = self.cache.lock().expect("poisoned").get(&key) {
            return Ok(p.clone());
        }
        let p = phi(&self.ctx.p_power(lambda)?, n, m, &self.params)?;
        self.cache.lock().expect("poisoned").insert(key, p.clone());
        Ok(p)
    }

    /// `SP_λ` from the two-alphabet expansion
    /// `sum_μ (-q^{-1/2} t^{1/2})^{|μ|} P_{λ/μ'}(x; q,t) Q_μ(y; t,q)`, where
    /// `μ` runs over partitions between `(⟨λ'_j - n⟩)_{j≤m}` and
    /// `(λ'_1, …, λ'_m)`.
    pub fn sp_via_expansion(&self, lambda: &Partition, n: usize, m: usize) -> Result<BiSymPoly<F>> {
        if !lambda.in_fat_hook(n, m) {
            return Err(Error::NotInFatHook { lambda: lambda.clone(), n, m });
        }
        let lc = lambda.conjugate();
        let upper: Vec<usize> = (1..=m).map(|j| lc.part(j)).collect();
        let lower: Vec<usize> = upper.iter().map(|&c| c.saturating_sub(n)).collect();
        let dual = self.ctx.dual();
        let ratio = self.params.b.clone() * self.params.a.checked_inv("q^{1/2}")?;
        let mut out = BiSymPoly::zero(n, m);
        for mu in partitions_between(&lower, &upper) {
            let skew = self.ctx.skew_p_monomial(lambda, &mu.conjugate(), Some(n))?;
            if skew.is_zero() {
                continue;
            }
            let qm = dual.q_fn(&mu)?.with_nvars(m);
            let sign = if mu.weight() % 2 == 0 { F::one() } else { -F::one() };
            let c = sign * ratio.powi(mu.weight() as i32);
            out = out.add(&BiSymPoly::from_product(n, m, &skew, &qm)?.scale(&c))?;
        }
        Ok(out)
    }

    /// Coefficient-level comparison of `SP_λ` at `(q,t)` and `(q^{-1},t^{-1})`.
    pub fn inversion_invariant(&self, lambda: &Partition, n: usize, m: usize) -> Result<bool> {
        let inverse = SuperMacdonald::new(self.params.inverted());
        let (a, b) = (self.sp(lambda, n, m)?, inverse.sp(lambda, n, m)?);
        if F::EXACT {
            return Ok(a == b);
        }
        let diff = a.sub(&b)?.max_coeff();
        Ok(diff <= 1e-10 * (1.0 + a.max_coeff()))
    }
}

/// Convention for translating to the variables `y ↦ q^{1/2} t^{1/2} y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvDirection {
    ToSv,
    FromSv,
}

/// Rescales every `y_j` by `(qt)^{±1/2}`.
pub fn sv_translate<F: Scalar>(p: &BiSymPoly<F>, params: &ParamSet<F>, direction: SvDirection) -> Result<BiSymPoly<F>> {
    let s = params.a.clone() * params.b.clone();
    let s = match direction {
        SvDirection::ToSv => s,
        SvDirection::FromSv => s.checked_inv("(qt)^{1/2}")?,
    };
    Ok(p.scale_y(&s))
}

/// Outcome of the shift-symmetry test on the hyperplanes `q^{1/2} x_i = t^{-1/2} y_j`.
#[derive(Debug, Clone)]
pub struct Membership<E> {
    pub holds: bool,
    pub max_residual: f64,
    pub checked: usize,
    /// A point `(x, y)` with the constraint imposed, and the pair `(i, j)`.
    pub witness: Option<(Vec<E>, Vec<E>, usize, usize)>,
}

/// Tests `P(.., q x_i, ..; y_j = q^{1/2} t^{1/2} x_i) = P(x; y_j = q^{1/2} t^{-1/2} x_i)`
/// at every given point and every pair `(i, j)`. Exact scalars must agree
/// exactly; floats to `1e-10` relative.
pub fn check_membership<F: Scalar, E: Lift<F>>(
    p: &BiSymPoly<F>,
    params: &ParamSet<E>,
    points: &[(Vec<E>, Vec<E>)],
) -> Result<Membership<E>> {
    let (q, ab) = (params.q(), params.a.clone() * params.b.clone());
    let a_over_b = params.a.clone() * params.b.checked_inv("t^{1/2}")?;
    let mut out = Membership { holds: true, max_residual: 0.0, checked: 0, witness: None };
    for (x, y) in points {
        for i in 0..p.n() {
            for j in 0..p.m() {
                let mut y1 = y.clone();
                y1[j] = ab.clone() * x[i].clone();
                let mut x1 = x.clone();
                x1[i] = q.clone() * x[i].clone();
                let lhs = p.evaluate(&x1, &y1)?;
                let mut y2 = y.clone();
                y2[j] = a_over_b.clone() * x[i].clone();
                let rhs = p.evaluate(x, &y2)?;
                let diff = lhs.clone() - rhs;
                let res = diff.magnitude() / (1.0 + lhs.magnitude());
                out.checked += 1;
                out.max_residual = out.max_residual.max(res);
                let bad = if E::EXACT { !diff.is_zero() } else { res > 1e-10 };
                if bad && out.witness.is_none() {
                    out.holds = false;
                    out.witness = Some((x.clone(), y1, i, j));
                }
            }
        }
    }
    Ok(out)
}
