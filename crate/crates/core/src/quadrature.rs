//! The torus-integral Hermitian form
//! `⟨P,Q⟩' = 1/(n! m!) ∮_{|x|=ξ} ∮_{|y|=ξ'} Δ_{n,m}(x,y) P(x,y) Q*(x,y)`,
//! its weight functions and the closed-form norms.

use std::f64::consts::PI;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{b_lambda, Partition};
use crate::poly::{power_table, CompiledPoly};
use crate::scalar::ParamSet;

/// Radii, grid size per angle and Pochhammer truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub xi: f64,
    pub xip: f64,
    pub grid: usize,
    pub truncation: usize,
}

/// Which side of the forbidden band `|log(ξ/ξ')| ≤ |log(q/t)|/2` the radii lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Below,
    Above,
    Excluded,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { xi: 4.0, xip: 1.0, grid: 64, truncation: 40 }
    }
}

impl QuadratureSpec {
    /// The default grid with the radii exchanged.
    pub fn alternate() -> Self {
        QuadratureSpec { xi: 1.0, xip: 4.0, ..Self::default() }
    }

    pub fn with_radii(self, xi: f64, xip: f64) -> Self {
        QuadratureSpec { xi, xip, ..self }
    }

    pub fn with_grid(self, grid: usize) -> Self {
        QuadratureSpec { grid, ..self }
    }

    pub fn region(&self, params: &ParamSet<f64>) -> Region {
        let r = self.xi / self.xip;
        let bound = params.max_ratio();
        if r < 1.0 / bound {
            Region::Below
        } else if r > bound {
            Region::Above
        } else {
            Region::Excluded
        }
    }

    /// `ξ/ξ' < (qt)^{1/2}` or `ξ/ξ' > (qt)^{-1/2}`, needed for the operator
    /// to act under the integral.
    pub fn in_strong_region(&self, params: &ParamSet<f64>) -> bool {
        let r = self.xi / self.xip;
        let s = params.a * params.b;
        r < s || r > 1.0 / s
    }

    /// Grid and truncation bounds only.
    pub fn validate_shape(&self) -> Result<()> {
        if self.grid < 8 || self.truncation < 10 {
            return Err(Error::InvalidSpec(format!(
                "need grid >= 8 and truncation >= 10, got {} and {}",
                self.grid, self.truncation
            )));
        }
        if !(self.xi > 0.0 && self.xip > 0.0 && self.xi.is_finite() && self.xip.is_finite()) {
            return Err(Error::InvalidRadii { xi: self.xi, xip: self.xip });
        }
        Ok(())
    }

    /// Shape bounds plus the radii condition, which only matters when both
    /// sets of variables are present.
    pub fn validate(&self, params: &ParamSet<f64>, n: usize, m: usize) -> Result<()> {
        self.validate_shape()?;
        if n > 0 && m > 0 && self.region(params) == Region::Excluded {
            return Err(Error::InvalidRadii { xi: self.xi, xip: self.xip });
        }
        Ok(())
    }
}

const POLE_TOL: f64 = 1e-8;

/// `prod_{i≠j} (x_i/x_j; q)_K / (t x_i/x_j; q)_K`.
pub fn delta_n(x: &[Complex64], q: f64, t: f64, truncation: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(1.0, 0.0);
    for (i, xi) in x.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            if i == j {
                continue;
            }
            let z = xi / xj;
            if (z - 1.0).norm() < POLE_TOL {
                return Err(Error::Pole(format!("coincident variables {} and {}", i + 1, j + 1)));
            }
            let (mut num, mut den) = (z, z * t);
            for _ in 0..truncation {
                let d = Complex64::new(1.0, 0.0) - den;
                if d.norm() < POLE_TOL {
                    return Err(Error::Pole(format!("t q^k x_{}/x_{} = 1", i + 1, j + 1)));
                }
                acc *= (Complex64::new(1.0, 0.0) - num) / d;
                num *= q;
                den *= q;
            }
        }
    }
    Ok(acc)
}

/// `Δ_n(x;q,t) Δ_m(y;t,q) / prod_{i,j} (1 - c x_i/y_j)(1 - c y_j/x_i)` with
/// `c = q^{-1/2} t^{1/2}`.
pub fn delta_nm(x: &[Complex64], y: &[Complex64], params: &ParamSet<f64>, truncation: usize) -> Result<Complex64> {
    let (q, t) = (params.q(), params.t());
    let c = params.b / params.a;
    let mut acc = delta_n(x, q, t, truncation)? * delta_n(y, t, q, truncation)?;
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            let d = (1.0 - c * xi / yj) * (1.0 - c * yj / xi);
            if d.norm() < POLE_TOL {
                return Err(Error::Pole(format!(
                    "x_{} near the hyperplane q^(±1/2) x = t^(±1/2) y_{}; choose radii further apart",
                    i + 1,
                    j + 1
                )));
            }
            acc /= d;
        }
    }
    Ok(acc)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), v: f64) {
    let (s, c) = *acc;
    let t = s + v;
    let c = if s.abs() >= v.abs() { c + ((s - t) + v) } else { c + ((v - t) + s) };
    *acc = (t, c);
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Tensor-product trapezoid grid on `T_ξ^n × T_ξ'^m`. Variable `v` sits at
/// angles `2π(k + v/(n+m))/N`, so no two variables ever coincide.
#[derive(Debug, Clone)]
pub struct TorusGrid {
    n: usize,
    m: usize,
    grid: usize,
    circles: Vec<Vec<Complex64>>,
}

const BLOCK: usize = 2048;

impl TorusGrid {
    pub fn new(n: usize, m: usize, xi: f64, xip: f64, grid: usize) -> Self {
        let nv = n + m;
        let circles = (0..nv)
            .map(|v| {
                let r = if v < n { xi } else { xip };
                (0..grid)
                    .map(|k| Complex64::from_polar(r, 2.0 * PI * (k as f64 + v as f64 / nv as f64) / grid as f64))
                    .collect()
            })
            .collect();
        TorusGrid { n, m, grid, circles }
    }

    pub fn len(&self) -> usize {
        self.grid.pow((self.n + self.m) as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, mut idx: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut coords = Vec::with_capacity(self.n + self.m);
        for circle in &self.circles {
            coords.push(circle[idx % self.grid]);
            idx /= self.grid;
        }
        let y = coords.split_off(self.n);
        (coords, y)
    }

    /// Mean of `f` over all nodes. Blocks of nodes are reduced in parallel
    /// and combined in a fixed order, so the result does not depend on
    /// scheduling.
    pub fn mean<T, F>(&self, width: usize, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(&[Complex64], &[Complex64], &mut [CompensatedSum]) -> Result<T> + Sync,
    {
        let total = self.len();
        let blocks = total.div_ceil(BLOCK);
        let partial: Vec<Vec<CompensatedSum>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut acc = vec![CompensatedSum::default(); width];
                for idx in b * BLOCK..((b + 1) * BLOCK).min(total) {
                    let (x, y) = self.node(idx);
                    f(&x, &y, &mut acc)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut out = vec![CompensatedSum::default(); width];
        for block in &partial {
            for (o, s) in out.iter_mut().zip(block) {
                o.add(s.value());
            }
        }
        Ok(out.iter().map(|s| s.value() / total as f64).collect())
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn check_shapes(polys: &[&CompiledPoly], n: usize, m: usize) -> Result<()> {
    if let Some(p) = polys.iter().find(|p| (p.n(), p.m()) != (n, m)) {
        return Err(Error::InvalidSpec(format!(
            "polynomial in ({}, {}) variables, form in ({n}, {m})",
            p.n(),
            p.m()
        )));
    }
    Ok(())
}

fn gram_impl(polys: &[&CompiledPoly], n: usize, m: usize, spec: &QuadratureSpec, params: &ParamSet<f64>) -> Result<Vec<Vec<Complex64>>> {
    check_shapes(polys, n, m)?;
    let k = polys.len();
    let max_exp = polys.iter().map(|p| p.max_exp()).max().unwrap_or(0);
    let grid = TorusGrid::new(n, m, spec.xi, spec.xip, spec.grid);
    let flat = grid.mean(k * k, |x, y, acc| {
        let w = delta_nm(x, y, params, spec.truncation)?;
        let pw = power_table(x.iter().chain(y), max_exp);
        let refl: Vec<Complex64> = x.iter().chain(y).map(|z| 1.0 / z.conj()).collect();
        let pr = power_table(refl.iter(), max_exp);
        let vals: Vec<Complex64> = polys.iter().map(|p| w * p.eval_with_powers(&pw)).collect();
        let stars: Vec<Complex64> = polys.iter().map(|p| p.eval_with_powers(&pr).conj()).collect();
        for (a, va) in vals.iter().enumerate() {
            for (b, sb) in stars.iter().enumerate() {
                acc[a * k + b].add(va * sb);
            }
        }
        Ok(())
    })?;
    let norm = factorial(n) * factorial(m);
    Ok((0..k).map(|a| (0..k).map(|b| flat[a * k + b] / norm).collect()).collect())
}

/// `G[a][b] = ⟨P_a, P_b⟩'` for all pairs, in one pass over the grid.
pub fn gram_matrix(polys: &[&CompiledPoly], n: usize, m: usize, spec: &QuadratureSpec, params: &ParamSet<f64>) -> Result<Vec<Vec<Complex64>>> {
    spec.validate(params, n, m)?;
    gram_impl(polys, n, m, spec, params)
}

pub fn hermitian_form(p: &CompiledPoly, q: &CompiledPoly, spec: &QuadratureSpec, params: &ParamSet<f64>) -> Result<Complex64> {
    Ok(gram_matrix(&[p, q], p.n(), p.m(), spec, params)?[0][1])
}

/// The same quadrature with the radii condition lifted, for probing the
/// excluded band. Its values are not those of the form.
pub fn gram_matrix_unchecked(polys: &[&CompiledPoly], n: usize, m: usize, spec: &QuadratureSpec, params: &ParamSet<f64>) -> Result<Vec<Vec<Complex64>>> {
    spec.validate_shape()?;
    gram_impl(polys, n, m, spec, params)
}

/// `N_n(λ;q,t) = prod_{i<j} (q^{λ_i-λ_j} t^{j-i}; q)(q^{λ_i-λ_j+1} t^{j-i}; q)
///   / ((q^{λ_i-λ_j} t^{j-i+1}; q)(q^{λ_i-λ_j+1} t^{j-i-1}; q))`,
/// the norm of `P_λ` in `n` variables under the `1/n!`-normalised form.
pub fn norm_nn(lambda: &Partition, n: usize, q: f64, t: f64, truncation: usize) -> Result<f64> {
    let l = lambda
        .padded(n)
        .ok_or_else(|| Error::InvalidSpec(format!("({lambda}) has more than {n} parts")))?;
    let poch = |z: f64| crate::scalar::qpochhammer(&z, &q, truncation);
    let mut acc = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            let d = (l[i] - l[j]) as i32;
            let k = (j - i) as i32;
            let num = poch(q.powi(d) * t.powi(k)) * poch(q.powi(d + 1) * t.powi(k));
            let den = poch(q.powi(d) * t.powi(k + 1)) * poch(q.powi(d + 1) * t.powi(k - 1));
            acc *= num / den;
        }
    }
    Ok(acc)
}

/// `⟨SP_λ, SP_λ⟩'`: zero unless `(m^n) ⊆ λ`, and otherwise
/// `(t/q)^{|s|} b_e(q,t) b_s(t,q) / b_λ(q,t) · N_n(e;q,t) N_m(s;t,q)` with
/// `(e, s)` the east and south parts of `λ`.
pub fn norm_nnm(lambda: &Partition, n: usize, m: usize, params: &ParamSet<f64>, truncation: usize) -> Result<f64> {
    if !lambda.in_fat_hook(n, m) {
        return Err(Error::NotInFatHook { lambda: lambda.clone(), n, m });
    }
    if !lambda.contains(&Partition::rectangle(n, m)) {
        return Ok(0.0);
    }
    let (q, t) = (params.q(), params.t());
    let (e, s) = lambda.east_south(n, m)?;
    let pre = (t / q).powi(s.weight() as i32) * b_lambda(&e, &q, &t)? * b_lambda(&s, &t, &q)? / b_lambda(lambda, &q, &t)?;
    Ok(pre * norm_nn(&e, n, q, t, truncation)? * norm_nn(&s, m, t, q, truncation)?)
}

/// Closed-form versus quadrature norm of one polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    pub lambda: Partition,
    pub formula: f64,
    pub quad_re: f64,
    pub quad_im: f64,
    pub rel_error: f64,
    pub spec: QuadratureSpec,
}

impl NormReport {
    pub fn new(lambda: Partition, formula: f64, quad: Complex64, spec: QuadratureSpec) -> Self {
        let rel_error = (quad - formula).norm() / formula.abs().max(1.0);
        NormReport { lambda, formula, quad_re: quad.re, quad_im: quad.im, rel_error, spec }
    }
}

/// Integrals over the tori `|x| = ξ`, `|y| = ξ'` for one `x` and one `y`.
pub struct ResidueExperiment<'a> {
    pub params: ParamSet<f64>,
    pub grid: usize,
    pub f: &'a (dyn Fn(Complex64, Complex64) -> Complex64 + Sync),
}

/// Residue balance for `n = m = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueReport {
    pub xi: f64,
    pub xip: f64,
    pub i_xi_xip: [f64; 2],
    pub i_xi_xi: [f64; 2],
    pub residue_term: [f64; 2],
    pub balance_residual: f64,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl ResidueExperiment<'_> {
    /// `∮∮ f(x,y) / ((1 - c x/y)(1 - c y/x))` on `|x| = ξ`, `|y| = ξ'`.
    pub fn integral(&self, xi: f64, xip: f64) -> Result<Complex64> {
        let c = self.params.b / self.params.a;
        let grid = TorusGrid::new(1, 1, xi, xip, self.grid);
        let v = grid.mean(1, |x, y, acc| {
            let d = (1.0 - c * x[0] / y[0]) * (1.0 - c * y[0] / x[0]);
            if d.norm() < POLE_TOL {
                return Err(Error::Pole("weight pole on the integration contour".into()));
            }
            acc[0].add((self.f)(x[0], y[0]) / d);
            Ok(())
        })?;
        Ok(v[0])
    }

    /// `∮_{|x|=ξ} f(x, s x) dx/(2πi x)`.
    fn line(&self, xi: f64, s: f64) -> Result<Complex64> {
        let grid = TorusGrid::new(1, 0, xi, 1.0, self.grid);
        let v = grid.mean(1, |x, _, acc| {
            acc[0].add((self.f)(x[0], s * x[0]));
            Ok(())
        })?;
        Ok(v[0])
    }

    /// Moves the `y` contour from `|y| = ξ` to `|y| = ξ'`, collecting the
    /// residues at `y = c x` (`+q/(q-t) f(x, cx)`) and `y = x/c`
    /// (`-q/(q-t) f(x, x/c)`) that lie between the two circles.
    pub fn balance(&self, xi: f64, xip: f64) -> Result<ResidueReport> {
        let (q, t) = (self.params.q(), self.params.t());
        let c = self.params.b / self.params.a;
        let k = q / (q - t);
        let full = self.integral(xi, xip)?;
        let diag = self.integral(xi, xi)?;
        let (lo, hi) = if xip < xi { (xip, xi) } else { (xi, xip) };
        let sign = if xip < xi { -1.0 } else { 1.0 };
        let mut term = Complex64::new(0.0, 0.0);
        for (s, res_sign) in [(c, 1.0), (1.0 / c, -1.0)] {
            let r = s * xi;
            if lo < r && r < hi {
                term += sign * res_sign * k * self.line(xi, s)?;
            }
        }
        let balance_residual = (full - diag - term).norm() / (1.0 + full.norm());
        Ok(ResidueReport {
            xi,
            xip,
            i_xi_xip: pair(full),
            i_xi_xi: pair(diag),
            residue_term: pair(term),
            balance_residual,
        })
    }
}

/// `1/G(r,a;z) = prod_{k<K} (1 - exp(2ir(z + iak + ia/2)))`, entire in `z`.
fn trig_gamma_recip(r: f64, a: f64, z: Complex64, truncation: usize) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    (0..truncation)
        .map(|k| 1.0 - (2.0 * i * r * (z + i * a * k as f64 + i * a / 2.0)).exp())
        .product()
}

/// `G(r,a;z) = prod_{k<K} (1 - exp(2ir(z + iak + ia/2)))^{-1}`.
pub fn trig_gamma(r: f64, a: f64, z: Complex64, truncation: usize) -> Result<Complex64> {
    let d = trig_gamma_recip(r, a, z, truncation);
    if d.norm() < POLE_TOL {
        return Err(Error::Pole(format!("trigonometric Gamma at z = {z}")));
    }
    Ok(1.0 / d)
}

/// `w(r,a,b;z) = G(z+ib-ia/2) G(-z+ib-ia/2) / (G(z-ia/2) G(-z-ia/2))`.
/// Nonnegative on the real line, with double zeros at `z ∈ (π/r)Z`.
pub fn ruijsenaars_w(r: f64, a: f64, b: f64, z: Complex64, truncation: usize) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let g = |z: Complex64| trig_gamma_recip(r, a, z, truncation);
    let den = g(z + i * b - i * a / 2.0) * g(-z + i * b - i * a / 2.0);
    if den.norm() < POLE_TOL {
        return Err(Error::Pole(format!("weight function at z = {z}")));
    }
    Ok(g(z - i * a / 2.0) * g(-z - i * a / 2.0) / den)
}

/// The ground state `Ψ_0(u, v; β, γ)` on a circle of circumference `L`.
/// The square roots are principal, which is the positive root when the
/// `u` (and the `v`) share an imaginary part.
pub fn psi0(u: &[Complex64], v: &[Complex64], l: f64, beta: f64, gamma: f64, truncation: usize) -> Result<Complex64> {
    let r = PI / l;
    let i = Complex64::new(0.0, 1.0);
    let mut wx = Complex64::new(1.0, 0.0);
    for a in 0..u.len() {
        for b in a + 1..u.len() {
            wx *= ruijsenaars_w(r, beta, gamma, u[a] - u[b], truncation)?;
        }
    }
    let mut wy = Complex64::new(1.0, 0.0);
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            wy *= ruijsenaars_w(r, gamma, beta, v[a] - v[b], truncation)?;
        }
    }
    let mut den = Complex64::new(1.0, 0.0);
    for ui in u {
        for vj in v {
            den *= 2.0 * (r * (ui - vj + i * gamma / 2.0 - i * beta / 2.0)).sin();
        }
    }
    if den.norm() < POLE_TOL {
        return Err(Error::Pole("ground state denominator".into()));
    }
    Ok(wx.sqrt() * wy.sqrt() / den)
}

/// Relative difference between `Δ_{n,m}(x,y)` and
/// `exp(nmπ(γ-β)/L) Ψ_0(u,v) conj(Ψ_0(ū,v̄))` with `x = e^{2πiu/L}`,
/// `y = e^{2πiv/L}`, `q = e^{-2πβ/L}`, `t = e^{-2πγ/L}`.
pub fn factorization_residual(x: &[Complex64], y: &[Complex64], params: &ParamSet<f64>, l: f64, truncation: usize) -> Result<f64> {
    let (q, t) = (params.q(), params.t());
    let beta = -l * q.ln() / (2.0 * PI);
    let gamma = -l * t.ln() / (2.0 * PI);
    let to_add = |z: &Complex64| z.ln() * l / (2.0 * PI * Complex64::new(0.0, 1.0));
    let u: Vec<Complex64> = x.iter().map(to_add).collect();
    let v: Vec<Complex64> = y.iter().map(to_add).collect();
    let ubar: Vec<Complex64> = u.iter().map(|z| z.conj()).collect();
    let vbar: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    let (n, m) = (x.len() as f64, y.len() as f64);
    let rhs = (n * m * PI * (gamma - beta) / l).exp()
        * psi0(&u, &v, l, beta, gamma, truncation)?
        * psi0(&ubar, &vbar, l, beta, gamma, truncation)?.conj();
    let lhs = delta_nm(x, y, params, truncation)?;
    Ok((lhs - rhs).norm() / lhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::BiSymPoly;
    use crate::scalar::Rational;
    use crate::supermac::SuperMacdonald;

    fn params() -> ParamSet<f64> {
        ParamSet::from_qt(0.49, 0.25).unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn weight_examples() {
        let c1 = Complex64::new(1.0, 0.0);
        assert_eq!(delta_n(&[c1], 0.5, 0.25, 40).unwrap(), c1);
        let x = [c1, -c1];
        let v = delta_n(&x, 0.5, 0.25, 60).unwrap();
        let reference = delta_n(&x, 0.5, 0.25, 200).unwrap();
        assert!((v - reference).norm() < 1e-12);
        assert!(v.im.abs() < 1e-15 && v.re > 0.0);
        assert!(delta_n(&[c1, c1], 0.5, 0.25, 40).is_err());

        let pr = params();
        assert_eq!(delta_nm(&[c1], &[], &pr, 40).unwrap(), c1);
        let v = delta_nm(&[2.0 * c1], &[c1], &pr, 40).unwrap();
        assert!((v.re - (-3.6296296296296298)).abs() < 1e-12, "{v}");
        let (x, y) = ([Complex64::new(0.3, 1.7), Complex64::new(-1.1, 0.4)], [Complex64::new(0.9, -0.2)]);
        let inv = |z: &[Complex64]| z.iter().map(|w| 1.0 / w).collect::<Vec<_>>();
        let a = delta_nm(&x, &y, &pr, 40).unwrap();
        let b = delta_nm(&inv(&x), &inv(&y), &pr, 40).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn spec_validation() {
        let pr = params();
        assert!(QuadratureSpec::default().validate(&pr, 1, 1).is_ok());
        assert!(QuadratureSpec::default().with_radii(1.0, 1.0).validate(&pr, 1, 1).is_err());
        assert!(QuadratureSpec::default().with_radii(1.0, 1.0).validate(&pr, 2, 0).is_ok());
        assert!(QuadratureSpec::default().with_grid(4).validate(&pr, 1, 1).is_err());
        assert_eq!(QuadratureSpec::alternate().region(&pr), Region::Below);
        assert!(QuadratureSpec::default().in_strong_region(&pr));
    }

    #[test]
    fn form_examples() {
        let pr = params();
        let spec = QuadratureSpec::default();
        let one10 = BiSymPoly::<Rational>::one(1, 0).compile();
        assert!((hermitian_form(&one10, &one10, &spec, &pr).unwrap() - 1.0).norm() < 1e-14);
        let one = BiSymPoly::<Rational>::one(1, 1).compile();
        assert!(hermitian_form(&one, &one, &spec, &pr).unwrap().norm() < 1e-10);
        let sm = SuperMacdonald::new(ParamSet::default_exact());
        let sp1 = sm.sp(&p("1"), 1, 1).unwrap().compile();
        let v = hermitian_form(&sp1, &sp1, &spec, &pr).unwrap();
        assert!((v - 0.68).norm() < 1e-10, "{v}");
    }

    #[test]
    fn norm_examples() {
        let pr = params();
        assert_eq!(norm_nn(&p("3"), 1, 0.49, 0.25, 40).unwrap(), 1.0);
        assert_eq!(norm_nnm(&Partition::empty(), 1, 1, &pr, 40).unwrap(), 0.0);
        assert!((norm_nnm(&p("1"), 1, 1, &pr, 40).unwrap() - 0.68).abs() < 1e-14);
        let a = norm_nn(&p("2,1"), 2, 0.49, 0.25, 40).unwrap();
        let b = norm_nn(&p("4,3"), 2, 0.49, 0.25, 40).unwrap();
        assert!((a - b).abs() < 1e-14);
        assert!(norm_nnm(&p("3,3"), 1, 2, &pr, 40).is_err());
    }

    #[test]
    fn residue_constant() {
        let pr = params();
        let f = |_: Complex64, _: Complex64| Complex64::new(1.0, 0.0);
        let exp = ResidueExperiment { params: pr.clone(), grid: 64, f: &f };
        let r = exp.balance(4.0, 1.0).unwrap();
        let k = 0.49 / (0.49 - 0.25);
        assert!((r.residue_term[0] + k).abs() < 1e-12);
        assert!(r.balance_residual < 1e-8);
        assert!(exp.balance(1.0, 4.0).unwrap().balance_residual < 1e-8);
    }

    #[test]
    fn factorization_examples() {
        let pr = params();
        let c = |r: f64, th: f64| Complex64::from_polar(r, th);
        assert!(factorization_residual(&[c(1.0, 0.3)], &[], &pr, 1.0, 40).unwrap() < 1e-14);
        assert!(factorization_residual(&[c(1.0, 0.3), c(1.0, -2.0)], &[], &pr, 1.0, 40).unwrap() < 1e-8);
        assert!(factorization_residual(&[c(2.0, 0.3)], &[c(1.0, 1.9)], &pr, 3.0, 40).unwrap() < 1e-8);
        let u = [Complex64::new(0.0, 0.0)];
        assert_eq!(psi0(&u, &[], 1.0, 0.2, 0.3, 40).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(ruijsenaars_w(PI, 0.4, 0.7, Complex64::new(0.0, 0.0), 40).unwrap().norm(), 0.0);
        for k in 0..20 {
            let z = Complex64::new(-2.95 + 0.3 * k as f64, 0.0);
            let w = ruijsenaars_w(PI, 0.4, 0.7, z, 40).unwrap();
            assert!(w.re > 0.0 && w.im.abs() < 1e-12 * w.re);
        }
        let z = Complex64::new(0.3, 0.05);
        let (g, g40) = (trig_gamma(PI, 0.4, z, 200).unwrap(), trig_gamma(PI, 0.4, z, 60).unwrap());
        assert!((g - g40).norm() < 1e-12);
        let gc = trig_gamma(PI, 0.4, -z.conj(), 60).unwrap();
        assert!((g40.conj() - gc).norm() < 1e-14);
    }
}
