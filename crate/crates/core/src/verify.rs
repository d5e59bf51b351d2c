//! Verification suites. Each returns a [`SuiteReport`] listing every check
//! with its measured residual and tolerance.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::operators::{
    commutator_residuals, eigen_residual, identity_residual, sample_points, sample_rational_points, Operator,
    PointConfig, Variant,
};
use crate::partition::{partitions_of, partitions_up_to, Partition};
use crate::poly::{BiSymPoly, CompiledPoly};
use crate::quadrature::{
    factorization_residual, gram_matrix, gram_matrix_unchecked, norm_nn, norm_nnm, NormReport, QuadratureSpec,
    ResidueExperiment, TorusGrid,
};
use crate::sampling::Sampler;
use crate::scalar::{ParamSet, Rational, Scalar};
use crate::supermac::{check_membership, SuperMacdonald};
use crate::symfunc::{inner_product_qt, Basis, MacdonaldContext, SymFunc};

/// Tolerances of the suites.
pub mod tol {
    pub const EIGEN: f64 = 1e-10;
    pub const IDENTITY_FLOAT: f64 = 1e-12;
    pub const NORM_REL: f64 = 1e-6;
    pub const ZERO_NORM: f64 = 1e-10;
    pub const OFF_DIAGONAL: f64 = 1e-8;
    pub const RADII: f64 = 1e-8;
    pub const HERMITIAN: f64 = 1e-9;
    pub const PROBE_GAP: f64 = 1e-3;
    pub const RESIDUE: f64 = 1e-8;
    pub const FACTORIZATION: f64 = 1e-8;
    pub const COMMUTATOR: f64 = 1e-9;
    pub const M0_REL: f64 = 1e-8;
    pub const CONVERGENCE: f64 = 1e-8;
    pub const SELF_ADJOINT: f64 = 1e-8;
    /// Sample points closer than this to a coefficient pole are redrawn.
    pub const POLE_DISTANCE: f64 = 1e-6;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// Counts towards the verdict.
    Assert,
    /// Reported only.
    Diagnostic,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64, worst: Option<String>) -> Self {
        let passed = value <= tolerance;
        Check {
            name: name.into(),
            kind: CheckKind::Assert,
            passed,
            value,
            tolerance,
            counterexample: if passed { None } else { worst },
        }
    }

    /// Passes when `value > tolerance`.
    pub fn above(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), kind: CheckKind::Assert, passed: value > tolerance, value, tolerance, counterexample: None }
    }

    /// Exact check: `failures` lists counterexamples, the value is their count.
    pub fn exact(name: impl Into<String>, total: usize, failures: Vec<String>) -> Self {
        Check {
            name: name.into(),
            kind: CheckKind::Assert,
            passed: failures.is_empty(),
            value: failures.len() as f64,
            tolerance: 0.0,
            counterexample: failures.into_iter().next().map(|f| format!("{f} (of {total} cases)")),
        }
    }

    pub fn diagnostic(mut self) -> Self {
        self.kind = CheckKind::Diagnostic;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub norms: Vec<NormReport>,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed || c.kind == CheckKind::Diagnostic);
        SuiteReport { suite: suite.to_string(), passed, checks, norms: Vec::new() }
    }

    pub fn with_norms(mut self, norms: Vec<NormReport>) -> Self {
        self.norms = norms;
        self
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed && c.kind == CheckKind::Assert)
    }
}

/// Tracks the largest residual seen and where it occurred.
#[derive(Default)]
struct Worst {
    value: f64,
    at: Option<String>,
}

impl Worst {
    fn record(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || (value.is_nan() && !self.value.is_nan()) {
            self.value = value;
            self.at = Some(at());
        }
    }

    fn check(self, name: &str, tolerance: f64) -> Check {
        Check::at_most(name, self.value, tolerance, self.at)
    }
}

/// Partitions in the fat hook `H_{n,m}` of weight at most `max_weight`.
pub fn fat_hook_partitions(n: usize, m: usize, max_weight: usize) -> Vec<Partition> {
    partitions_up_to(max_weight).into_iter().filter(|l| l.in_fat_hook(n, m)).collect()
}

fn shape_label(n: usize, m: usize) -> String {
    format!("(n,m)=({n},{m})")
}

/// `λ + (k^n)` for `ℓ(λ) ≤ n`.
fn add_rectangle(lambda: &Partition, n: usize, k: usize) -> Option<Partition> {
    lambda.padded(n).map(|p| Partition::new(p.into_iter().map(|v| v + k).collect()))
}

/// Which `(λ, n, k)` the box identity `(x_1⋯x_n)^k P_λ = P_{λ+(k^n)}` is checked on.
#[derive(Debug, Clone, Copy)]
pub struct BoxRange {
    /// `k = 1`, `n = ℓ(λ)` for `|λ|` up to this.
    pub k1: usize,
    /// `k = 2`, `n = ℓ(λ)` for `|λ|` up to this.
    pub k2: usize,
    /// `k ∈ {1,2}`, `n = ℓ(λ) + 1` for `|λ|` up to this.
    pub extra_variable: usize,
}

impl Default for BoxRange {
    fn default() -> Self {
        BoxRange { k1: 8, k2: 6, extra_variable: 5 }
    }
}

/// `(x_1⋯x_n)^k P_λ(x_1..x_n) = P_{λ+(k^n)}(x_1..x_n)`, compared coefficientwise.
pub fn box_identity_holds<F: Scalar>(ctx: &MacdonaldContext<F>, lambda: &Partition, n: usize, k: usize) -> Result<bool> {
    let Some(big) = add_rectangle(lambda, n, k) else { return Ok(true) };
    let lhs = ctx.p_in(lambda, n)?;
    let shifted: BTreeMap<Partition, F> = lhs
        .terms()
        .iter()
        .filter_map(|(mu, c)| add_rectangle(mu, n, k).map(|s| (s, c.clone())))
        .collect();
    Ok(&shifted == ctx.p_in(&big, n)?.terms())
}

/// Exact checks on `P_λ` for `|λ| ≤ max_weight`: triangularity, orthogonality,
/// the norm `⟨P_λ,P_λ⟩ = 1/b_λ`, `ω_{q,t} P_λ(q,t) = Q_{λ'}(t,q)` and the box identity.
pub fn macdonald_core(ctx: &MacdonaldContext<Rational>, max_weight: usize, boxes: BoxRange) -> Result<SuiteReport> {
    let (q, t) = (ctx.q().clone(), ctx.t().clone());
    let dual = ctx.dual();
    let one = Rational::from_integer(1.into());
    let (mut tri, mut orth, mut norm, mut dual_fail, mut box_fail) = (vec![], vec![], vec![], vec![], vec![]);
    let (mut n_tri, mut n_orth, mut n_box) = (0, 0, 0);
    for d in 0..=max_weight {
        let parts = partitions_of(d);
        let mut power = Vec::new();
        for lambda in &parts {
            let p = ctx.p(lambda)?;
            n_tri += 1;
            let leading = p.coeff(lambda) == one;
            if !leading || p.terms().keys().any(|mu| !mu.dominated_by(lambda)) {
                tri.push(format!("λ=({lambda})"));
            }
            let pp = p.m_to_p()?;
            if inner_product_qt(&pp, &pp, &q, &t)? * ctx.b(lambda)? != one {
                norm.push(format!("λ=({lambda})"));
            }
            let lhs = pp.omega(&q, &t)?;
            if lhs != dual.q_fn(&lambda.conjugate())?.m_to_p()? {
                dual_fail.push(format!("λ=({lambda})"));
            }
            power.push(pp);
        }
        for (i, a) in power.iter().enumerate() {
            for (j, b) in power.iter().enumerate().skip(i + 1) {
                n_orth += 1;
                if !inner_product_qt(a, b, &q, &t)?.is_zero() {
                    orth.push(format!("λ=({}), μ=({})", parts[i], parts[j]));
                }
            }
        }
    }
    for lambda in partitions_up_to(max_weight) {
        let w = lambda.weight();
        let l = lambda.len().max(1);
        let mut cases = Vec::new();
        if w <= boxes.k1 {
            cases.push((l, 1));
        }
        if w <= boxes.k2 {
            cases.push((l, 2));
        }
        if w <= boxes.extra_variable {
            cases.extend([(l + 1, 1), (l + 1, 2)]);
        }
        for (n, k) in cases {
            n_box += 1;
            if !box_identity_holds(ctx, &lambda, n, k)? {
                box_fail.push(format!("λ=({lambda}), n={n}, k={k}"));
            }
        }
    }
    let n_all = n_tri;
    Ok(SuiteReport::new(
        "macdonald",
        vec![
            Check::exact("triangularity", n_tri, tri),
            Check::exact("orthogonality", n_orth, orth),
            Check::exact("norm b_λ⟨P_λ,P_λ⟩ = 1", n_all, norm),
            Check::exact("duality ω P_λ(q,t) = Q_λ'(t,q)", n_all, dual_fail),
            Check::exact("box identity", n_box, box_fail),
        ],
    ))
}

/// `SP_λ` against the two-alphabet expansion, vanishing outside `H_{n,m}`,
/// invariance under `(q,t) → (q^{-1},t^{-1})` and exact membership at
/// rational points.
pub fn super_cross(
    sm: &SuperMacdonald<Rational>,
    shapes: &[(usize, usize)],
    max_weight: usize,
    membership_points: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let inverse = SuperMacdonald::new(sm.params().inverted());
    let mut sampler = Sampler::new(seed);
    let (mut cross, mut vanish, mut inv, mut member) = (vec![], vec![], vec![], vec![]);
    let (mut n_cross, mut n_all) = (0, 0);
    for &(n, m) in shapes {
        let pts: Vec<_> = (0..membership_points).map(|_| sampler.rational_point(n, m)).collect();
        for lambda in partitions_up_to(max_weight) {
            n_all += 1;
            let label = || format!("λ=({lambda}) {}", shape_label(n, m));
            let sp = sm.sp(&lambda, n, m)?;
            let inside = lambda.in_fat_hook(n, m);
            if sp.is_zero() == inside {
                vanish.push(label());
            }
            if sp != inverse.sp(&lambda, n, m)? {
                inv.push(label());
            }
            if !check_membership(&sp, sm.params(), &pts)?.holds {
                member.push(label());
            }
            if inside {
                n_cross += 1;
                if sp != sm.sp_via_expansion(&lambda, n, m)? {
                    cross.push(label());
                }
            }
        }
    }
    Ok(SuiteReport::new(
        "super",
        vec![
            Check::exact("SP = expansion", n_cross, cross),
            Check::exact("SP ≠ 0 iff λ ∈ H", n_all, vanish),
            Check::exact("inversion invariance", n_all, inv),
            Check::exact("membership", n_all, member),
        ],
    ))
}

fn compiled_basis(sm: &SuperMacdonald<Rational>, n: usize, m: usize, lambdas: &[Partition]) -> Result<Vec<CompiledPoly>> {
    lambdas.iter().map(|l| Ok(sm.sp(l, n, m)?.compile())).collect()
}

fn float_params(sm: &SuperMacdonald<Rational>) -> ParamSet<f64> {
    sm.params().to_f64()
}

/// `ℳ SP_λ = d_λ SP_λ` at seeded points for both operators.
pub fn eigen(sm: &SuperMacdonald<Rational>, shapes: &[(usize, usize)], lambdas: Option<&[Partition]>, max_weight: usize, points: usize, seed: u64) -> Result<SuiteReport> {
    let cp: ParamSet<Complex64> = float_params(sm).lift();
    let mut checks = Vec::new();
    for &(n, m) in shapes {
        let labels = match lambdas {
            Some(l) => l.to_vec(),
            None => fat_hook_partitions(n, m, max_weight),
        };
        let mut sampler = Sampler::new(seed);
        let pts = sample_points(&mut sampler, n, m, &cp, points, tol::POLE_DISTANCE);
        for variant in [Variant::Qt, Variant::Inverse] {
            let mut worst = Worst::default();
            for lambda in &labels {
                let p = sm.sp(lambda, n, m)?.compile();
                let r = eigen_residual(&p, lambda, &cp, variant, &pts)?;
                worst.record(r, || format!("λ=({lambda})"));
            }
            let name = format!("eigen {:?} {}", variant, shape_label(n, m)).to_lowercase();
            checks.push(worst.check(&name, tol::EIGEN));
        }
    }
    Ok(SuiteReport::new("eigen", checks))
}

/// The coefficient sum of `ℳ` equals its constant, exactly at rational points
/// and to rounding at complex ones.
pub fn identity(params: &ParamSet<Rational>, shapes: &[(usize, usize)], points: usize, seed: u64) -> Result<SuiteReport> {
    let mut sampler = Sampler::new(seed);
    let cp: ParamSet<Complex64> = params.to_f64().lift();
    let mut exact_fail = Vec::new();
    let mut worst = Worst::default();
    let mut total = 0;
    for &(n, m) in shapes {
        for pt in sample_rational_points(&mut sampler, n, m, params, points) {
            total += 1;
            if !identity_residual(&pt, params)?.is_zero() {
                exact_fail.push(format!("{} x={:?} y={:?}", shape_label(n, m), pt.x, pt.y));
            }
        }
        for pt in sample_points(&mut sampler, n, m, &cp, points, tol::POLE_DISTANCE) {
            let r = identity_residual(&pt, &cp)?.norm();
            worst.record(r, || format!("{} x={:?} y={:?}", shape_label(n, m), pt.x, pt.y));
        }
    }
    Ok(SuiteReport::new(
        "identity",
        vec![Check::exact("coefficient identity (exact)", total, exact_fail), worst.check("coefficient identity (float)", tol::IDENTITY_FLOAT)],
    ))
}

/// Quadrature norms against the closed form, the zero-norm kernel, and
/// orthogonality of distinct `SP_λ`.
pub fn norms(sm: &SuperMacdonald<Rational>, shapes: &[(usize, usize)], max_weight: usize, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let fp = float_params(sm);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for &(n, m) in shapes {
        let label = shape_label(n, m);
        let lambdas = fat_hook_partitions(n, m, max_weight);
        let polys = compiled_basis(sm, n, m, &lambdas)?;
        let refs: Vec<&CompiledPoly> = polys.iter().collect();
        let g = gram_matrix(&refs, n, m, spec, &fp)?;
        let (mut rel, mut zero, mut off, mut neg) = (Worst::default(), Worst::default(), Worst::default(), Vec::new());
        let formulas: Vec<f64> = lambdas.iter().map(|l| norm_nnm(l, n, m, &fp, spec.truncation)).collect::<Result<_>>()?;
        for (a, lambda) in lambdas.iter().enumerate() {
            let f = formulas[a];
            if f < 0.0 {
                neg.push(format!("λ=({lambda}) {label}"));
            }
            let report = NormReport::new(lambda.clone(), f, g[a][a], *spec);
            if f == 0.0 {
                zero.record(g[a][a].norm(), || format!("λ=({lambda})"));
            } else {
                rel.record(report.rel_error, || format!("λ=({lambda})"));
            }
            rows.push(report);
        }
        for a in 0..lambdas.len() {
            for b in 0..lambdas.len() {
                if a == b {
                    continue;
                }
                let scale = if formulas[a] > 0.0 && formulas[b] > 0.0 {
                    (g[a][a].norm() * g[b][b].norm()).sqrt()
                } else {
                    sm.sp(&lambdas[a], n, m)?.max_coeff().max(sm.sp(&lambdas[b], n, m)?.max_coeff())
                };
                off.record(g[a][b].norm() / scale, || format!("λ=({}), μ=({})", lambdas[a], lambdas[b]));
            }
        }
        checks.push(rel.check(&format!("norm formula {label}"), tol::NORM_REL));
        checks.push(zero.check(&format!("zero norms {label}"), tol::ZERO_NORM));
        checks.push(off.check(&format!("orthogonality {label}"), tol::OFF_DIAGONAL));
        checks.push(Check::exact(format!("nonnegative norms {label}"), lambdas.len(), neg));
    }
    Ok(SuiteReport::new("norms", checks).with_norms(rows))
}

/// Doubling the grid leaves the nonzero norms unchanged.
pub fn convergence(sm: &SuperMacdonald<Rational>, shapes: &[(usize, usize)], max_weight: usize, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let fp = float_params(sm);
    let coarse = spec.with_grid(spec.grid / 2);
    let mut checks = Vec::new();
    for &(n, m) in shapes {
        let lambdas: Vec<Partition> = fat_hook_partitions(n, m, max_weight)
            .into_iter()
            .filter(|l| l.contains(&Partition::rectangle(n, m)))
            .collect();
        let polys = compiled_basis(sm, n, m, &lambdas)?;
        let mut worst = Worst::default();
        for (l, p) in lambdas.iter().zip(&polys) {
            let fine = gram_matrix(&[p], n, m, spec, &fp)?[0][0];
            let rough = gram_matrix(&[p], n, m, &coarse, &fp)?[0][0];
            worst.record((fine - rough).norm() / fine.norm(), || format!("λ=({l})"));
        }
        checks.push(worst.check(&format!("grid {} vs {} {}", coarse.grid, spec.grid, shape_label(n, m)), tol::CONVERGENCE));
    }
    Ok(SuiteReport::new("convergence", checks))
}

/// Independence of the form from the radii inside and across both regions,
/// Hermiticity, the inversion relation `⟨P,Q⟩(ξ,ξ') = conj⟨Q,P⟩(1/ξ,1/ξ')`,
/// and optionally the excluded-band probe `ξ = ξ'`.
pub fn radii(
    sm: &SuperMacdonald<Rational>,
    shapes: &[(usize, usize)],
    max_weight: usize,
    spec: &QuadratureSpec,
    configs: &[(f64, f64)],
    probe_excluded: bool,
) -> Result<SuiteReport> {
    let fp = float_params(sm);
    let mut checks = Vec::new();
    for &(n, m) in shapes {
        let label = shape_label(n, m);
        let lambdas = fat_hook_partitions(n, m, max_weight);
        let polys = compiled_basis(sm, n, m, &lambdas)?;
        let refs: Vec<&CompiledPoly> = polys.iter().collect();
        let reference = gram_matrix(&refs, n, m, spec, &fp)?;
        let k = lambdas.len();
        let pair = |a: usize, b: usize| format!("λ=({}), μ=({})", lambdas[a], lambdas[b]);

        let mut indep = Worst::default();
        for &(xi, xip) in configs {
            let g = gram_matrix(&refs, n, m, &spec.with_radii(xi, xip), &fp)?;
            for a in 0..k {
                for b in 0..k {
                    let d = (g[a][b] - reference[a][b]).norm() / (1.0 + reference[a][b].norm());
                    indep.record(d, || format!("{} at ξ={xi}, ξ'={xip}", pair(a, b)));
                }
            }
        }
        checks.push(indep.check(&format!("radii independence {label}"), tol::RADII));

        let mut herm = Worst::default();
        for a in 0..k {
            for b in 0..k {
                herm.record((reference[a][b] - reference[b][a].conj()).norm(), || pair(a, b));
            }
        }
        checks.push(herm.check(&format!("hermiticity {label}"), tol::HERMITIAN));

        let inv = gram_matrix(&refs, n, m, &spec.with_radii(1.0 / spec.xi, 1.0 / spec.xip), &fp)?;
        let mut invw = Worst::default();
        for a in 0..k {
            for b in 0..k {
                let d = (reference[a][b] - inv[b][a].conj()).norm() / (1.0 + reference[a][b].norm());
                invw.record(d, || pair(a, b));
            }
        }
        checks.push(invw.check(&format!("inversion relation {label}"), tol::RADII));

        if probe_excluded && n > 0 && m > 0 {
            let probe = gram_matrix_unchecked(&refs, n, m, &spec.with_radii(1.0, 1.0), &fp)?;
            let nonkernel: Vec<usize> = (0..k).filter(|&a| lambdas[a].contains(&Partition::rectangle(n, m))).collect();
            let mut gap = 0.0f64;
            for &a in &nonkernel {
                for &b in &nonkernel {
                    gap = gap.max((probe[a][b] - reference[a][b]).norm());
                }
            }
            checks.push(Check::above(format!("excluded band ξ=ξ'=1 differs {label}"), gap, tol::PROBE_GAP).diagnostic());
        }
    }
    Ok(SuiteReport::new("radii", checks))
}

/// Radii configurations for the independence check: the defaults plus
/// further points of both regions.
pub fn default_radii_configs() -> Vec<(f64, f64)> {
    vec![(2.0, 1.0), (4.0, 1.0), (3.0, 1.2), (1.0, 2.0), (1.0, 4.0)]
}

type Integrand = dyn Fn(Complex64, Complex64) -> Complex64 + Sync;

/// Residue bookkeeping for `n = m = 1`: moving the `y` contour changes the
/// integral by the residues crossed; for integrands `P Q*` with `P, Q` in
/// the algebra the two regions agree, for other polynomials they need not.
pub fn appendix_d(sm: &SuperMacdonald<Rational>, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let fp = float_params(sm);
    let sp = |s: &str| -> Result<CompiledPoly> { Ok(sm.sp(&s.parse().expect("partition"), 1, 1)?.compile()) };
    // x and y are not members, and x y* is not invariant under x <-> y, so the
    // contour swap has nothing to cancel against.
    let x_only = BiSymPoly::<Rational>::x_power_sum(1, 1, 1).compile();
    let y_only = BiSymPoly::<Rational>::y_power_sum(1, 1, 1).compile();
    let (sp1, sp2, sp11) = (sp("1")?, sp("2")?, sp("1,1")?);
    // P(x,y) Q*(x,y) continued off the torus; the coefficients are real, so
    // Q*(x,y) = Q(1/x, 1/y).
    let product = |a: &CompiledPoly, b: &CompiledPoly| {
        let (a, b) = (a.clone(), b.clone());
        move |x: Complex64, y: Complex64| a.eval(&[x], &[y]) * b.eval_reflected(&[x], &[y])
    };
    let f_one = |_: Complex64, _: Complex64| Complex64::new(1.0, 0.0);
    let f_11 = product(&sp1, &sp1);
    let f_21 = product(&sp2, &sp1);
    let f_211 = product(&sp11, &sp2);
    let f_naive = product(&x_only, &y_only);
    let (xi, xip) = (spec.xi, spec.xip);
    let integrands: Vec<(&str, &Integrand)> = vec![
        ("1", &f_one),
        ("SP_1 SP_1*", &f_11),
        ("x y*", &f_naive),
        ("SP_2 SP_1*", &f_21),
    ];
    let mut checks = Vec::new();
    let mut balance = Worst::default();
    for (name, f) in &integrands {
        let e = ResidueExperiment { params: fp.clone(), grid: spec.grid, f: *f };
        for (a, b) in [(xi, xip), (xip, xi)] {
            let r = e.balance(a, b)?;
            balance.record(r.balance_residual, || format!("f={name} ξ={a} ξ'={b}"));
        }
    }
    checks.push(balance.check("residue balance", tol::RESIDUE));
    let mut sym = Worst::default();
    for (name, f) in [("SP_1 SP_1*", &f_11 as &Integrand), ("SP_2 SP_1*", &f_21), ("SP_11 SP_2*", &f_211)] {
        let e = ResidueExperiment { params: fp.clone(), grid: spec.grid, f };
        let (u, v) = (e.integral(xi, xip)?, e.integral(xip, xi)?);
        sym.record((u - v).norm() / (1.0 + u.norm()), || format!("f={name}"));
    }
    checks.push(sym.check("I(ξ,ξ') = I(ξ',ξ) on the algebra", tol::RADII));
    let e = ResidueExperiment { params: fp.clone(), grid: spec.grid, f: &f_naive };
    let gap = (e.integral(xi, xip)? - e.integral(xip, xi)?).norm();
    checks.push(Check::above("I(ξ,ξ') ≠ I(ξ',ξ) for x y*", gap, tol::PROBE_GAP));
    Ok(SuiteReport::new("appendix-d", checks))
}

/// `Δ_{n,m} = exp(nmπ(γ-β)/L) Ψ_0 conj(Ψ_0)` at random torus points.
pub fn factorization(params: &ParamSet<f64>, shapes: &[(usize, usize)], spec: &QuadratureSpec, points: usize, seed: u64) -> Result<SuiteReport> {
    let mut sampler = Sampler::new(seed);
    let mut checks = Vec::new();
    for &(n, m) in shapes {
        let mut worst = Worst::default();
        for _ in 0..points {
            let (x, y) = sampler.torus_point(n, spec.xi, m, spec.xip);
            let r = factorization_residual(&x, &y, params, 1.0, spec.truncation)?;
            worst.record(r, || format!("x={x:?} y={y:?}"));
        }
        checks.push(worst.check(&format!("factorization {}", shape_label(n, m)), tol::FACTORIZATION));
    }
    Ok(SuiteReport::new("factorization", checks))
}

/// `[M, M'] = 0`, `[H, P] = 0` and the boost relations on the `SP_λ`, `|λ| ≤ degree`.
pub fn commutators(sm: &SuperMacdonald<Rational>, shapes: &[(usize, usize)], degree: usize, points: usize, seed: u64) -> Result<SuiteReport> {
    let cp: ParamSet<Complex64> = float_params(sm).lift();
    let mut checks = Vec::new();
    for &(n, m) in shapes {
        let mut sampler = Sampler::new(seed);
        let pts = sample_points(&mut sampler, n, m, &cp, points, tol::POLE_DISTANCE);
        let (mut mm, mut hp, mut mb, mut hb) = (Worst::default(), Worst::default(), Worst::default(), Worst::default());
        let mut skipped = 0usize;
        for lambda in fat_hook_partitions(n, m, degree) {
            let p = sm.sp(&lambda, n, m)?.compile();
            let f = |pt: &PointConfig<Complex64>| Ok(p.eval(&pt.x, &pt.y));
            for pt in &pts {
                match commutator_residuals(&f, pt, &cp) {
                    Ok(r) => {
                        let at = || format!("λ=({lambda}) x={:?} y={:?}", pt.x, pt.y);
                        mm.record(r.m_m_inverse, at);
                        hp.record(r.h_p, at);
                        mb.record(r.m_boost, at);
                        hb.record(r.hp_boost, at);
                    }
                    Err(crate::Error::Pole(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        let label = shape_label(n, m);
        checks.push(mm.check(&format!("[M, M'] {label}"), tol::COMMUTATOR));
        checks.push(hp.check(&format!("[H, P] {label}"), tol::COMMUTATOR));
        checks.push(mb.check(&format!("[M, B] = iM, [M', B] = -iM' {label}"), tol::COMMUTATOR));
        checks.push(hb.check(&format!("[H, B] = iP, [P, B] = iH {label}"), tol::COMMUTATOR));
        checks.push(Check::at_most(format!("points skipped at poles {label}"), skipped as f64, 0.0, None).diagnostic());
    }
    Ok(SuiteReport::new("commutators", checks))
}

/// The `m = 0` form on the unit torus reproduces `N_n(λ)` and orthogonality
/// of the ordinary Macdonald polynomials.
pub fn m0_regression(ctx: &MacdonaldContext<Rational>, max_n: usize, max_weight: usize, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let (q, t) = (crate::scalar::rational_to_f64(ctx.q()), crate::scalar::rational_to_f64(ctx.t()));
    let fp = ParamSet::from_qt(q, t)?;
    let unit = spec.with_radii(1.0, 1.0);
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let lambdas: Vec<Partition> = partitions_up_to(max_weight).into_iter().filter(|l| l.len() <= n).collect();
        let polys: Vec<CompiledPoly> = lambdas
            .iter()
            .map(|l| Ok(BiSymPoly::from_product(n, 0, &ctx.p_in(l, n)?, &SymFunc::one(Basis::Monomial))?.compile()))
            .collect::<Result<_>>()?;
        let refs: Vec<&CompiledPoly> = polys.iter().collect();
        let g = gram_matrix(&refs, n, 0, &unit, &fp)?;
        let (mut rel, mut off) = (Worst::default(), Worst::default());
        for (a, l) in lambdas.iter().enumerate() {
            let f = norm_nn(l, n, q, t, spec.truncation)?;
            let row = NormReport::new(l.clone(), f, g[a][a], unit);
            rel.record((g[a][a] - f).norm() / f.abs(), || format!("λ=({l})"));
            rows.push(row);
            for b in 0..lambdas.len() {
                if a != b {
                    off.record(g[a][b].norm() / (g[a][a].norm() * g[b][b].norm()).sqrt(), || format!("λ=({l}), μ=({})", lambdas[b]));
                }
            }
        }
        checks.push(rel.check(&format!("N_n formula n={n}"), tol::M0_REL));
        checks.push(off.check(&format!("orthogonality n={n}"), tol::OFF_DIAGONAL));
    }
    Ok(SuiteReport::new("m0", checks).with_norms(rows))
}

/// `⟨ℳP, Q⟩' = ⟨P, ℳQ⟩'` on the `SP_λ` with the operator applied under the
/// integral, alongside the eigenvalue form `(d_λ - d_μ)⟨SP_λ, SP_μ⟩'`.
pub fn self_adjoint(sm: &SuperMacdonald<Rational>, shapes: &[(usize, usize)], degree: usize, spec: &QuadratureSpec) -> Result<SuiteReport> {
    let fp = float_params(sm);
    let cp: ParamSet<Complex64> = fp.lift();
    let mut checks = Vec::new();
    if !spec.in_strong_region(&fp) {
        return Err(crate::Error::InvalidRadii { xi: spec.xi, xip: spec.xip });
    }
    for &(n, m) in shapes {
        spec.validate(&fp, n, m)?;
        let lambdas = fat_hook_partitions(n, m, degree);
        let polys = compiled_basis(sm, n, m, &lambdas)?;
        let k = lambdas.len();
        let grid = TorusGrid::new(n, m, spec.xi, spec.xip, spec.grid);
        let apply = |p: &CompiledPoly, x: &[Complex64], y: &[Complex64]| {
            let pt = PointConfig::new(x.to_vec(), y.to_vec());
            Operator::QT.apply(&pt, &cp, &|s: &PointConfig<Complex64>| Ok(p.eval(&s.x, &s.y)))
        };
        // entries: <MP_a, P_b>, <P_a, MP_b>, <P_a, P_b>
        let flat = grid.mean(3 * k * k, |x, y, acc| {
            let w = crate::quadrature::delta_nm(x, y, &fp, spec.truncation)?;
            let xr: Vec<Complex64> = x.iter().map(|z| 1.0 / z.conj()).collect();
            let yr: Vec<Complex64> = y.iter().map(|z| 1.0 / z.conj()).collect();
            let mut v = Vec::with_capacity(k);
            let mut mv = Vec::with_capacity(k);
            let mut s = Vec::with_capacity(k);
            let mut ms = Vec::with_capacity(k);
            for p in &polys {
                v.push(p.eval(x, y));
                mv.push(apply(p, x, y)?);
                s.push(p.eval(&xr, &yr).conj());
                ms.push(apply(p, &xr, &yr)?.conj());
            }
            for a in 0..k {
                for b in 0..k {
                    let i = a * k + b;
                    acc[i].add(w * mv[a] * s[b]);
                    acc[k * k + i].add(w * v[a] * ms[b]);
                    acc[2 * k * k + i].add(w * v[a] * s[b]);
                }
            }
            Ok(())
        })?;
        let norm = (1..=n).product::<usize>() as f64 * (1..=m).product::<usize>() as f64;
        let d: Vec<f64> = lambdas.iter().map(|l| crate::operators::eigenvalue_d(l, &fp, Variant::Qt)).collect::<Result<_>>()?;
        let (mut direct, mut shortcut) = (Worst::default(), Worst::default());
        for a in 0..k {
            for b in 0..k {
                let i = a * k + b;
                let (lhs, rhs, g) = (flat[i] / norm, flat[k * k + i] / norm, flat[2 * k * k + i] / norm);
                let scale = 1.0 + lhs.norm().max(rhs.norm());
                let pair = || format!("λ=({}), μ=({})", lambdas[a], lambdas[b]);
                direct.record((lhs - rhs).norm() / scale, pair);
                shortcut.record(((d[a] - d[b]) * g).norm() / (1.0 + g.norm() * (d[a].abs() + d[b].abs())), pair);
            }
        }
        let label = shape_label(n, m);
        checks.push(direct.check(&format!("⟨ℳP,Q⟩ = ⟨P,ℳQ⟩ {label}"), tol::SELF_ADJOINT));
        checks.push(shortcut.check(&format!("(d_λ - d_μ)⟨SP_λ,SP_μ⟩ = 0 {label}"), tol::SELF_ADJOINT));
    }
    Ok(SuiteReport::new("self-adjoint", checks))
}
