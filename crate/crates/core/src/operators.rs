//! The deformed Macdonald–Ruijsenaars operators as pointwise evaluators.
//!
//! `ℳ = t^{1-n}/(1-q) sum_i A_i (T_{q,x_i} - 1) + q^{m-1}/(1-t^{-1}) sum_j B_j (T_{t^{-1},y_j} - 1)`
//! with
//! `A_i = prod_{i'≠i} (t x_i - x_{i'})/(x_i - x_{i'}) · prod_j (t^{1/2} x_i - q^{1/2} y_j)/(t^{1/2} x_i - q^{-1/2} y_j)`,
//! `B_j = prod_{j'≠j} (q^{-1} y_j - y_{j'})/(y_j - y_{j'}) · prod_i (q^{-1/2} y_j - t^{-1/2} x_i)/(q^{-1/2} y_j - t^{1/2} x_i)`.
//! Dropping the `-1`'s gives the shift-only operator `M = ℳ + C` with
//! `C = (1 - t^{-n} q^m) / ((1 - t^{-1})(1 - q))`.

use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::poly::CompiledPoly;
use crate::sampling::Sampler;
use crate::scalar::{ParamSet, Scalar};

/// A point `(x, y)` of `C^n × C^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig<E> {
    pub x: Vec<E>,
    pub y: Vec<E>,
}

impl<E: Scalar> PointConfig<E> {
    pub fn new(x: Vec<E>, y: Vec<E>) -> Self {
        PointConfig { x, y }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> usize {
        self.y.len()
    }
}

/// Which of the two commuting operators: at `(q, t)` or at `(q^{-1}, t^{-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Qt,
    Inverse,
}

impl Variant {
    pub fn params<E: Scalar>(self, params: &ParamSet<E>) -> ParamSet<E> {
        match self {
            Variant::Qt => params.clone(),
            Variant::Inverse => params.inverted(),
        }
    }
}

fn ratio<E: Scalar>(num: E, den: E, what: &str) -> Result<E> {
    if den.is_degenerate() {
        return Err(Error::Pole(what.to_string()));
    }
    Ok(num / den)
}

pub fn coeff_a<E: Scalar>(i: usize, pt: &PointConfig<E>, params: &ParamSet<E>) -> Result<E> {
    let (a, b, t) = (&params.a, &params.b, params.t());
    let ainv = a.checked_inv("q^{1/2}")?;
    let xi = &pt.x[i];
    let mut acc = E::one();
    for (k, xk) in pt.x.iter().enumerate() {
        if k != i {
            let what = format!("x_{} = x_{}", i + 1, k + 1);
            acc = acc * ratio(t.clone() * xi.clone() - xk.clone(), xi.clone() - xk.clone(), &what)?;
        }
    }
    for (j, yj) in pt.y.iter().enumerate() {
        let what = format!("t^(1/2) x_{} = q^(-1/2) y_{}", i + 1, j + 1);
        let num = b.clone() * xi.clone() - a.clone() * yj.clone();
        acc = acc * ratio(num, b.clone() * xi.clone() - ainv.clone() * yj.clone(), &what)?;
    }
    Ok(acc)
}

pub fn coeff_b<E: Scalar>(j: usize, pt: &PointConfig<E>, params: &ParamSet<E>) -> Result<E> {
    let (a, b, q) = (&params.a, &params.b, params.q());
    let ainv = a.checked_inv("q^{1/2}")?;
    let binv = b.checked_inv("t^{1/2}")?;
    let qinv = q.checked_inv("q")?;
    let yj = &pt.y[j];
    let mut acc = E::one();
    for (k, yk) in pt.y.iter().enumerate() {
        if k != j {
            let what = format!("y_{} = y_{}", j + 1, k + 1);
            acc = acc * ratio(qinv.clone() * yj.clone() - yk.clone(), yj.clone() - yk.clone(), &what)?;
        }
    }
    for (i, xi) in pt.x.iter().enumerate() {
        let what = format!("q^(-1/2) y_{} = t^(1/2) x_{}", j + 1, i + 1);
        let num = ainv.clone() * yj.clone() - binv.clone() * xi.clone();
        acc = acc * ratio(num, ainv.clone() * yj.clone() - b.clone() * xi.clone(), &what)?;
    }
    Ok(acc)
}

/// The prefactors `t^{1-n}/(1-q)` and `q^{m-1}/(1-t^{-1})`.
fn prefactors<E: Scalar>(n: usize, m: usize, params: &ParamSet<E>) -> Result<(E, E)> {
    let (q, t) = (params.q(), params.t());
    let alpha = t.powi(1 - n as i32) * (E::one() - q.clone()).checked_inv("1 - q")?;
    let tinv = t.checked_inv("t")?;
    let beta = q.powi(m as i32 - 1) * (E::one() - tinv).checked_inv("1 - t^{-1}")?;
    Ok((alpha, beta))
}

/// `C = (1 - t^{-n} q^m) / ((1 - t^{-1})(1 - q))`.
pub fn identity_constant<E: Scalar>(n: usize, m: usize, params: &ParamSet<E>) -> Result<E> {
    let (q, t) = (params.q(), params.t());
    let num = E::one() - t.powi(-(n as i32)) * q.powi(m as i32);
    let den = (E::one() - t.checked_inv("t")?) * (E::one() - q);
    Ok(num * den.checked_inv("(1 - t^{-1})(1 - q)")?)
}

/// `t^{1-n}/(1-q) sum_i A_i + q^{m-1}/(1-t^{-1}) sum_j B_j - C`, which
/// vanishes identically.
pub fn identity_residual<E: Scalar>(pt: &PointConfig<E>, params: &ParamSet<E>) -> Result<E> {
    let (n, m) = (pt.n(), pt.m());
    let (alpha, beta) = prefactors(n, m, params)?;
    let mut acc = E::zero();
    for i in 0..n {
        acc = acc + alpha.clone() * coeff_a(i, pt, params)?;
    }
    for j in 0..m {
        acc = acc + beta.clone() * coeff_b(j, pt, params)?;
    }
    Ok(acc - identity_constant(n, m, params)?)
}

/// `d_λ = sum_i t^{1-i} (q^{λ_i} - 1)/(1 - q)` at the variant's parameters.
pub fn eigenvalue_d<E: Scalar>(lambda: &Partition, params: &ParamSet<E>, variant: Variant) -> Result<E> {
    let p = variant.params(params);
    let (q, t) = (p.q(), p.t());
    let inv = (E::one() - q.clone()).checked_inv("1 - q")?;
    let mut acc = E::zero();
    for (i, &l) in lambda.parts().iter().enumerate() {
        acc = acc + t.powi(-(i as i32)) * (q.powi(l as i32) - E::one()) * inv.clone();
    }
    Ok(acc)
}

/// Which operator to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Operator {
    pub variant: Variant,
    /// The shift-only form `M` instead of `ℳ`.
    pub shift_only: bool,
}

impl Operator {
    pub const QT: Operator = Operator { variant: Variant::Qt, shift_only: false };
    pub const INVERSE: Operator = Operator { variant: Variant::Inverse, shift_only: false };
    pub const SHIFT_QT: Operator = Operator { variant: Variant::Qt, shift_only: true };
    pub const SHIFT_INVERSE: Operator = Operator { variant: Variant::Inverse, shift_only: true };

    /// `(O f)(pt)` for any function `f` evaluable at the shifted points.
    pub fn apply<E: Scalar>(
        self,
        pt: &PointConfig<E>,
        params: &ParamSet<E>,
        f: &dyn Fn(&PointConfig<E>) -> Result<E>,
    ) -> Result<E> {
        let p = self.variant.params(params);
        let (n, m) = (pt.n(), pt.m());
        let (alpha, beta) = prefactors(n, m, &p)?;
        let (q, tinv) = (p.q(), p.t().checked_inv("t")?);
        let here = if self.shift_only { E::zero() } else { f(pt)? };
        let mut acc = E::zero();
        for i in 0..n {
            let mut s = pt.clone();
            s.x[i] = q.clone() * s.x[i].clone();
            acc = acc + alpha.clone() * coeff_a(i, pt, &p)? * (f(&s)? - here.clone());
        }
        for j in 0..m {
            let mut s = pt.clone();
            s.y[j] = tinv.clone() * s.y[j].clone();
            acc = acc + beta.clone() * coeff_b(j, pt, &p)? * (f(&s)? - here.clone());
        }
        Ok(acc)
    }
}

/// `(ℳ P)(pt)` for a compiled polynomial.
pub fn apply_m(p: &CompiledPoly, pt: &PointConfig<Complex64>, params: &ParamSet<Complex64>, variant: Variant) -> Result<Complex64> {
    let op = Operator { variant, shift_only: false };
    op.apply(pt, params, &|s: &PointConfig<Complex64>| Ok(p.eval(&s.x, &s.y)))
}

/// Smallest denominator magnitude among the coefficients of both variants
/// at `pt`.
pub fn pole_distance(pt: &PointConfig<Complex64>, params: &ParamSet<Complex64>) -> f64 {
    let mut d = f64::INFINITY;
    for p in [params.clone(), params.inverted()] {
        let (a, b) = (p.a, p.b);
        for (i, xi) in pt.x.iter().enumerate() {
            for (k, xk) in pt.x.iter().enumerate() {
                if k != i {
                    d = d.min((xi - xk).norm());
                }
            }
            for yj in &pt.y {
                d = d.min((b * xi - yj / a).norm());
                d = d.min((yj / a - b * xi).norm());
            }
        }
        for (j, yj) in pt.y.iter().enumerate() {
            for (k, yk) in pt.y.iter().enumerate() {
                if k != j {
                    d = d.min((yj - yk).norm());
                }
            }
        }
    }
    d
}

/// Points from `sampler` at least `min_distance` from every coefficient pole.
pub fn sample_points(
    sampler: &mut Sampler,
    n: usize,
    m: usize,
    params: &ParamSet<Complex64>,
    count: usize,
    min_distance: f64,
) -> Vec<PointConfig<Complex64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (x, y) = sampler.complex_point(n, m);
        let pt = PointConfig::new(x, y);
        if pole_distance(&pt, params) >= min_distance {
            out.push(pt);
        }
    }
    out
}

/// Rational points where every coefficient of both variants is finite.
pub fn sample_rational_points(
    sampler: &mut Sampler,
    n: usize,
    m: usize,
    params: &ParamSet<crate::scalar::Rational>,
    count: usize,
) -> Vec<PointConfig<crate::scalar::Rational>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (x, y) = sampler.rational_point(n, m);
        let pt = PointConfig::new(x, y);
        let ok = [Variant::Qt, Variant::Inverse].iter().all(|v| {
            let p = v.params(params);
            (0..n).all(|i| coeff_a(i, &pt, &p).is_ok()) && (0..m).all(|j| coeff_b(j, &pt, &p).is_ok())
        });
        if ok {
            out.push(pt);
        }
    }
    out
}

/// `max |ℳP - d_λ P| / (1 + |P|)` over the points.
pub fn eigen_residual(
    p: &CompiledPoly,
    lambda: &Partition,
    params: &ParamSet<Complex64>,
    variant: Variant,
    points: &[PointConfig<Complex64>],
) -> Result<f64> {
    let d = eigenvalue_d(lambda, params, variant)?;
    let mut worst = 0.0f64;
    for pt in points {
        let v = p.eval(&pt.x, &pt.y);
        let mv = apply_m(p, pt, params, variant)?;
        worst = worst.max((mv - d * v).norm() / (1.0 + v.norm()));
    }
    Ok(worst)
}

/// `B = i sum_i log x_i / log q - i sum_j log y_j / log t` with principal logarithms.
pub fn boost(pt: &PointConfig<Complex64>, params: &ParamSet<Complex64>) -> Complex64 {
    let (lq, lt) = (params.q().ln(), params.t().ln());
    let i = Complex64::new(0.0, 1.0);
    let sx: Complex64 = pt.x.iter().map(|z| z.ln() / lq).sum();
    let sy: Complex64 = pt.y.iter().map(|z| z.ln() / lt).sum();
    i * sx - i * sy
}

/// Residuals of the commutation relations at one point.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct CommutatorResiduals {
    /// `[M, M']` with `M'` the inverse-parameter operator.
    pub m_m_inverse: f64,
    /// `[H, P]` with `H = (M + M')/2`, `P = (M - M')/2`.
    pub h_p: f64,
    /// `[M, B] - i M` and `[M', B] + i M'`.
    pub m_boost: f64,
    /// `[H, B] - i P` and `[P, B] - i H`.
    pub hp_boost: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.m_m_inverse.max(self.h_p).max(self.m_boost).max(self.hp_boost)
    }

    pub fn merge(&mut self, other: &Self) {
        self.m_m_inverse = self.m_m_inverse.max(other.m_m_inverse);
        self.h_p = self.h_p.max(other.h_p);
        self.m_boost = self.m_boost.max(other.m_boost);
        self.hp_boost = self.hp_boost.max(other.hp_boost);
    }
}

type Func<'a> = dyn Fn(&PointConfig<Complex64>) -> Result<Complex64> + 'a;

/// Evaluates every commutator on `f` at `pt`, each residual taken relative
/// to `1 + ` the size of the terms it compares. Uses the shift-only
/// operators, for which the boost relations hold exactly.
pub fn commutator_residuals(f: &Func<'_>, pt: &PointConfig<Complex64>, params: &ParamSet<Complex64>) -> Result<CommutatorResiduals> {
    let i = Complex64::new(0.0, 1.0);
    let m = |g: &Func<'_>, s: &PointConfig<Complex64>| Operator::SHIFT_QT.apply(s, params, g);
    let mi = |g: &Func<'_>, s: &PointConfig<Complex64>| Operator::SHIFT_INVERSE.apply(s, params, g);
    let h = |g: &Func<'_>, s: &PointConfig<Complex64>| Ok::<_, Error>((m(g, s)? + mi(g, s)?) * 0.5);
    let pp = |g: &Func<'_>, s: &PointConfig<Complex64>| Ok::<_, Error>((m(g, s)? - mi(g, s)?) * 0.5);
    let bf = |s: &PointConfig<Complex64>| Ok(boost(s, params) * f(s)?);
    let b_here = boost(pt, params);
    let rel = |d: Complex64, scale: f64| d.norm() / (1.0 + scale);

    let m_f = |s: &PointConfig<Complex64>| m(f, s);
    let mi_f = |s: &PointConfig<Complex64>| mi(f, s);
    let h_f = |s: &PointConfig<Complex64>| h(f, s);
    let p_f = |s: &PointConfig<Complex64>| pp(f, s);

    let (mmi, mim) = (m(&mi_f, pt)?, mi(&m_f, pt)?);
    let (hp, ph) = (h(&p_f, pt)?, pp(&h_f, pt)?);
    let (mf, mif, hf, pf) = (m_f(pt)?, mi_f(pt)?, h_f(pt)?, p_f(pt)?);
    let (mb, mib, hb, pb) = (m(&bf, pt)?, mi(&bf, pt)?, h(&bf, pt)?, pp(&bf, pt)?);
    let bscale = b_here.norm() + 1.0;

    let m_boost = rel(mb - b_here * mf - i * mf, bscale * mf.norm().max(mb.norm()))
        .max(rel(mib - b_here * mif + i * mif, bscale * mif.norm().max(mib.norm())));
    let hp_boost = rel(hb - b_here * hf - i * pf, bscale * hf.norm().max(hb.norm()))
        .max(rel(pb - b_here * pf - i * hf, bscale * pf.norm().max(pb.norm())));
    Ok(CommutatorResiduals {
        m_m_inverse: rel(mmi - mim, mmi.norm()),
        h_p: rel(hp - ph, hp.norm()),
        m_boost,
        hp_boost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::supermac::SuperMacdonald;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cparams() -> ParamSet<Complex64> {
        ParamSet::default_exact().to_f64().lift()
    }

    #[test]
    fn coefficient_examples() {
        let params = ParamSet::default_exact();
        let pt = PointConfig::new(vec![rat(2, 1)], vec![]);
        assert_eq!(coeff_a(0, &pt, &params).unwrap(), rat(1, 1));
        let pt = PointConfig::new(vec![rat(2, 1)], vec![rat(1, 1)]);
        assert_eq!(coeff_a(0, &pt, &params).unwrap(), rat(-7, 10));
        // only the x-product survives when m = 1
        let b = coeff_b(0, &pt, &params).unwrap();
        let (a, bb) = (rat(7, 10), rat(1, 2));
        let one = rat(1, 1);
        assert_eq!(b, (&one / &a - &rat(2, 1) / &bb) / (&one / &a - &bb * &rat(2, 1)));
        let bad = PointConfig::new(vec![rat(1, 1), rat(1, 1)], vec![]);
        assert!(matches!(coeff_a(0, &bad, &params), Err(Error::Pole(_))));
    }

    #[test]
    fn eigenvalue_examples() {
        let params = ParamSet::default_exact();
        let (q, t) = (params.q(), params.t());
        let one = rat(1, 1);
        assert_eq!(eigenvalue_d(&Partition::empty(), &params, Variant::Qt).unwrap(), rat(0, 1));
        assert_eq!(eigenvalue_d(&p("1"), &params, Variant::Qt).unwrap(), -one.clone());
        assert_eq!(eigenvalue_d(&p("1,1"), &params, Variant::Qt).unwrap(), -one.clone() - &one / &t);
        assert_eq!(eigenvalue_d(&p("2"), &params, Variant::Qt).unwrap(), -one.clone() - &q);
    }

    #[test]
    fn identity_examples() {
        let params = ParamSet::default_exact();
        let pt = PointConfig::new(vec![rat(3, 1)], vec![]);
        assert_eq!(identity_residual(&pt, &params).unwrap(), rat(0, 1));
        let mut s = Sampler::new(3);
        for pt in sample_rational_points(&mut s, 2, 1, &params, 3) {
            assert_eq!(identity_residual(&pt, &params).unwrap(), rat(0, 1));
        }
        let cp = cparams();
        for pt in sample_points(&mut s, 1, 2, &cp, 5, 1e-6) {
            assert!(identity_residual(&pt, &cp).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn operator_examples() {
        let cp = cparams();
        let one = crate::poly::BiSymPoly::<Rational>::one(1, 1).compile();
        let mut s = Sampler::new(5);
        let pts = sample_points(&mut s, 1, 1, &cp, 5, 1e-6);
        for pt in &pts {
            assert_eq!(apply_m(&one, pt, &cp, Variant::Qt).unwrap(), Complex64::new(0.0, 0.0));
            let c = Operator::SHIFT_QT.apply(pt, &cp, &|_| Ok(Complex64::new(1.0, 0.0))).unwrap();
            assert!((c - identity_constant(1, 1, &cp).unwrap()).norm() < 1e-12);
        }
        let sm = SuperMacdonald::new(ParamSet::default_exact());
        let sp1 = sm.sp(&p("1"), 1, 1).unwrap().compile();
        assert!(eigen_residual(&sp1, &p("1"), &cp, Variant::Qt, &pts).unwrap() < 1e-12);
        let sp21 = sm.sp(&p("2,1"), 2, 1).unwrap().compile();
        let pts = sample_points(&mut s, 2, 1, &cp, 20, 1e-6);
        for v in [Variant::Qt, Variant::Inverse] {
            assert!(eigen_residual(&sp21, &p("2,1"), &cp, v, &pts).unwrap() < 1e-10);
        }
    }

    #[test]
    fn commutator_examples() {
        let cp = cparams();
        let mut s = Sampler::new(9);
        let one = |_: &PointConfig<Complex64>| Ok(Complex64::new(1.0, 0.0));
        let sm = SuperMacdonald::new(ParamSet::default_exact());
        let sp2 = sm.sp(&p("2"), 2, 1).unwrap().compile();
        let f = |pt: &PointConfig<Complex64>| Ok(sp2.eval(&pt.x, &pt.y));
        for pt in sample_points(&mut s, 2, 1, &cp, 10, 1e-6) {
            assert!(commutator_residuals(&one, &pt, &cp).unwrap().max() < 1e-12);
            let r = commutator_residuals(&f, &pt, &cp).unwrap();
            assert!(r.max() < 1e-9, "{r:?}");
        }
    }
}
