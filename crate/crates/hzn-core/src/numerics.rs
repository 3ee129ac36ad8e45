//! Deterministic summation and quadrature engine.
//!
//! Everything here is a pure function of its inputs: accumulation is
//! compensated (Kahan/Neumaier) in a fixed index order, so repeated runs on
//! the same platform are bit-identical. Error fields are heuristic estimates
//! (differences of refinements, Abel-type tail bounds), not rigorous bounds.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// A double-precision complex value with an attached absolute-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue {
    pub val: Complex64,
    pub err: f64,
}

impl ComplexValue {
    pub fn new(val: Complex64, err: f64) -> Self {
        Self { val, err }
    }

    pub fn exact(val: Complex64) -> Self {
        Self { val, err: 0.0 }
    }
}

/// Budget and accuracy knobs for the phased series engine.
#[derive(Debug, Clone, Copy)]
pub struct SeriesConfig {
    /// Target absolute error.
    pub abs_tol: f64,
    /// Hard cap on the number of coefficient evaluations.
    pub max_terms: u64,
    /// Number of summation-by-parts passes applied before direct summation.
    pub parts_depth: u32,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            max_terms: 2_000_000,
            parts_depth: 2,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidConfig("abs_tol must be > 0"));
        }
        if self.max_terms < 16 {
            return Err(Error::InvalidConfig("max_terms must be >= 16"));
        }
        if self.parts_depth > 8 {
            return Err(Error::InvalidConfig("parts_depth must be <= 8"));
        }
        Ok(())
    }

    pub fn with_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }

    pub fn with_depth(self, parts_depth: u32) -> Self {
        Self { parts_depth, ..self }
    }

    pub fn with_max_terms(self, max_terms: u64) -> Self {
        Self { max_terms, ..self }
    }
}

/// Neumaier-compensated scalar accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

const TAU: f64 = core::f64::consts::TAU;

/// `e^{2 pi i beta q}` with the product `beta * q` reduced mod 1 in
/// double-double arithmetic, so the phase stays accurate for q up to 2^53.
pub fn unit_phase_pow(beta: f64, q: u64) -> Complex64 {
    let qf = q as f64;
    let p = beta * qf;
    let e = beta.mul_add(qf, -p);
    let frac = (p - p.floor()) + e;
    let (s, c) = (TAU * frac).sin_cos();
    Complex64::new(c, s)
}

/// `e^{2 pi i alpha}`.
pub fn unit_phase(alpha: f64) -> Complex64 {
    let frac = alpha - alpha.floor();
    let (s, c) = (TAU * frac).sin_cos();
    Complex64::new(c, s)
}

/// Distance of `x` to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    let f = x - x.floor();
    f.min(1.0 - f)
}

pub(crate) fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * ((n - i) as f64) / ((i + 1) as f64);
    }
    acc
}

/// Phased sum `sum_{q>=0} e^{2 pi i beta q} coeff(q)` for a non-integral
/// phase `beta` and eventually smooth, decaying coefficients.
///
/// Applies `parts_depth` passes of summation by parts, built on the identity
/// `c_{q+1} - c_q = e^{2 pi i beta q}` with `c_q = e^{2 pi i beta q}/(z - 1)`,
/// then sums the remaining smoothed tail directly with an Abel-type stopping
/// bound.
pub fn sum_phased<F>(coeff: F, beta: f64, cfg: &SeriesConfig) -> Result<ComplexValue>
where
    F: FnMut(u64) -> Complex64,
{
    sum_phased_stats(coeff, beta, cfg).map(|(v, _)| v)
}

/// As [`sum_phased`], additionally reporting the number of coefficient
/// evaluations.
pub fn sum_phased_stats<F>(
    mut coeff: F,
    beta: f64,
    cfg: &SeriesConfig,
) -> Result<(ComplexValue, u64)>
where
    F: FnMut(u64) -> Complex64,
{
    cfg.validate()?;
    if dist_to_int(beta) < 1e-12 {
        return Err(Error::DegeneratePhase);
    }
    let z = unit_phase(beta);
    let zm1 = z - 1.0;
    let g = -z / zm1; // prefactor picked up by each parts pass
    let d = cfg.parts_depth as usize;

    // Difference triangle on a(0..=d) gives the boundary terms a_i(0).
    let mut evals: u64 = 0;
    let mut window: Vec<Complex64> = (0..=d as u64)
        .map(|q| {
            evals += 1;
            coeff(q)
        })
        .collect();
    let mut boundary = KahanComplex::default();
    {
        let mut row = window.clone();
        let mut gpow = Complex64::new(1.0, 0.0);
        for _ in 0..d {
            boundary.add(gpow * (-row[0] / zm1));
            for j in 0..row.len() - 1 {
                row[j] = row[j + 1] - row[j];
            }
            row.pop();
            gpow *= g;
        }
    }
    let gd = g.powu(d as u32);

    // Signed binomial weights for the d-th forward difference.
    let signs: Vec<f64> = (0..=d as u64)
        .map(|j| {
            let b = binomial(d as u64, j);
            if (d as u64 - j) % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .collect();

    let abel = 2.0 / zm1.norm();
    let amp = gd.norm();
    let mut tail = KahanComplex::default();
    let mut abs_sum = 0.0f64;
    let mut q: u64 = 0;
    let mut below = 0u32;
    #[allow(unused_assignments)]
    let mut last_bound = f64::INFINITY;
    loop {
        let mut delta = Complex64::new(0.0, 0.0);
        for (j, s) in signs.iter().enumerate() {
            delta += window[j] * *s;
        }
        let term = unit_phase_pow(beta, q) * delta;
        tail.add(term);
        abs_sum += term.norm();

        let bound = delta.norm() * abel * amp;
        last_bound = bound;
        if q >= 16 {
            if bound <= cfg.abs_tol {
                below += 1;
                if below >= 2 {
                    break;
                }
            } else {
                below = 0;
            }
        }
        if evals >= cfg.max_terms {
            return Err(Error::NonConvergent);
        }
        // Slide the window one step.
        let next = coeff(q + 1 + d as u64);
        evals += 1;
        window.rotate_left(1);
        let last = window.len() - 1;
        window[last] = next;
        q += 1;
    }

    let total = boundary.total() + gd * tail.total();
    let noise = f64::EPSILON * (abs_sum * amp + total.norm()) * 4.0;
    Ok((ComplexValue::new(total, last_bound + noise), evals))
}

/// Quadrature rule kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    /// Panels on a finite interval.
    FinitePanel,
    /// Geometric panels on `(0, inf)` for exponentially decaying integrands.
    HalfLineExponential,
}

/// A Gauss-Legendre rule: nodes and weights on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    nodes: Vec<(f64, f64)>,
    kind: RuleKind,
}

impl QuadratureRule {
    /// Gauss-Legendre rule with `n` nodes for finite panels.
    pub fn gauss_legendre(n: usize) -> Self {
        Self {
            nodes: gauss_legendre_nodes(n),
            kind: RuleKind::FinitePanel,
        }
    }

    /// Gauss-Legendre rule with `n` nodes, marked for half-line use.
    pub fn half_line(n: usize) -> Self {
        Self {
            nodes: gauss_legendre_nodes(n),
            kind: RuleKind::HalfLineExponential,
        }
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    /// Single-panel Gauss-Legendre estimate of `int_a^b f`.
    fn panel<F>(&self, f: &mut F, a: f64, b: f64) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = KahanComplex::default();
        for &(x, w) in &self.nodes {
            acc.add(f(mid + half * x) * w);
        }
        acc.total() * half
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
fn gauss_legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2, "rule needs at least two nodes");
    let mut out = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 1..=n {
        // Tricomi initial guess.
        let mut x = (core::f64::consts::PI * (i as f64 - 0.25) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' at x.
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((-x, w)); // negate so abscissae come out increasing
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// `int_a^b f(t) dt` by panel refinement, with the error estimated from the
/// difference of the last two refinements.
pub fn quad_panel<F>(
    mut f: F,
    a: f64,
    b: f64,
    rule: &QuadratureRule,
    abs_tol: f64,
) -> Result<ComplexValue>
where
    F: FnMut(f64) -> Complex64,
{
    if !(a < b) {
        return Err(Error::DomainError("quad_panel requires a < b"));
    }
    let mut prev = rule.panel(&mut f, a, b);
    let mut panels = 2usize;
    for _ in 0..14 {
        let h = (b - a) / panels as f64;
        let mut acc = KahanComplex::default();
        for j in 0..panels {
            let lo = a + h * j as f64;
            acc.add(rule.panel(&mut f, lo, lo + h));
        }
        let cur = acc.total();
        let diff = (cur - prev).norm();
        if diff <= abs_tol {
            return Ok(ComplexValue::new(cur, diff));
        }
        prev = cur;
        panels *= 2;
    }
    Err(Error::NonConvergent)
}

/// `int_0^inf f(t) dt` for integrands decaying like `exp(-t/scale)`, by
/// geometric panels `[2^j scale, 2^{j+1} scale]` ascending and descending.
/// Each panel is checked against its own two-half refinement; panels stop
/// once their contribution falls below `abs_tol / 10`.
pub fn quad_halfline<F>(
    mut f: F,
    scale: f64,
    rule: &QuadratureRule,
    abs_tol: f64,
) -> Result<ComplexValue>
where
    F: FnMut(f64) -> Complex64,
{
    if !(scale > 0.0) {
        return Err(Error::DomainError("scale must be > 0"));
    }
    let mut acc = KahanComplex::default();
    let mut err = 0.0f64;
    let cut = abs_tol / 10.0;

    let eval_panel = |f: &mut F, lo: f64, hi: f64, err: &mut f64| -> Complex64 {
        let coarse = rule.panel(f, lo, hi);
        let mid = 0.5 * (lo + hi);
        let fine = rule.panel(f, lo, mid) + rule.panel(f, mid, hi);
        *err += (fine - coarse).norm();
        fine
    };

    // Ascending panels.
    let mut below = 0u32;
    for j in 0..=64i32 {
        let lo = scale * 2f64.powi(j);
        let hi = scale * 2f64.powi(j + 1);
        let v = eval_panel(&mut f, lo, hi, &mut err);
        acc.add(v);
        if v.norm() < cut {
            below += 1;
            if below >= 2 {
                break;
            }
        } else {
            below = 0;
        }
        if j == 64 {
            return Err(Error::NonConvergent);
        }
    }

    // Descending panels toward zero.
    below = 0;
    let mut gap_hi = scale;
    for j in 1..=64 {
        let lo = scale * 2f64.powi(-j);
        let hi = scale * 2f64.powi(-(j - 1));
        let v = eval_panel(&mut f, lo, hi, &mut err);
        acc.add(v);
        gap_hi = lo;
        if v.norm() < cut {
            below += 1;
            if below >= 2 {
                break;
            }
        } else {
            below = 0;
        }
    }
    // Estimate the remaining [0, gap_hi] sliver from the midpoint value.
    let sliver = f(0.5 * gap_hi) * gap_hi;
    acc.add(sliver);
    err += sliver.norm();

    let total = acc.total();
    if err > abs_tol.max(1e-12 * (1.0 + total.norm())) * 100.0 {
        return Err(Error::NonConvergent);
    }
    Ok(ComplexValue::new(total, err))
}
