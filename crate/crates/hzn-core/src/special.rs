//! Classical special functions used by the twisted-series modules:
//! integer-order polylogarithms on the closed unit disk, double
//! polylogarithms, digamma/polygamma, and the Lerch-type phased series
//! `psi_beta(x) = sum_{q >= 0} e^{2 pi i beta q} / (x + q)`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::numerics::{
    self, dist_to_int, quad_halfline, sum_phased, ComplexValue, Kahan, KahanComplex,
    QuadratureRule, SeriesConfig,
};

const TAU: f64 = core::f64::consts::TAU;
#[cfg(test)]
const PI: f64 = core::f64::consts::PI;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649015328606;

/// Tolerance under which a phase counts as integral.
pub const PHASE_EPS: f64 = 1e-12;

/// A point `e^{2 pi i alpha}` on the unit circle, with its mod-1 reduction
/// and an integrality flag. The reduction happens once, at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitPhase {
    frac: f64,
    z: Complex64,
    integral: bool,
}

impl UnitPhase {
    pub fn new(alpha: f64) -> Self {
        let frac = alpha - alpha.floor();
        let frac = if frac >= 1.0 { 0.0 } else { frac };
        let integral = dist_to_int(frac) < PHASE_EPS;
        let z = if integral {
            Complex64::new(1.0, 0.0)
        } else {
            numerics::unit_phase(frac)
        };
        Self { frac, z, integral }
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(&self) -> f64 {
        self.frac
    }

    /// Signed representative in `[-1/2, 1/2)`.
    pub fn signed_frac(&self) -> f64 {
        if self.frac >= 0.5 {
            self.frac - 1.0
        } else {
            self.frac
        }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// `|1 - z|`.
    pub fn gap(&self) -> f64 {
        (self.z - 1.0).norm()
    }

    /// Angular distance `2 pi * dist(alpha, Z)` to the singular phase.
    pub fn pole_distance(&self) -> f64 {
        TAU * dist_to_int(self.frac)
    }

    /// The phase `-alpha` (conjugate point).
    pub fn neg(&self) -> Self {
        Self::new(-self.frac)
    }
}

// ---------------------------------------------------------------------------
// Constant tables: zeta values and Bernoulli numbers.
// ---------------------------------------------------------------------------

/// Small Bernoulli numbers as exact rationals (B_1 = -1/2 convention).
const BERN_SMALL: [f64; 13] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
];

const ZETA_MAX: usize = 80;

fn zeta_table() -> &'static [f64; ZETA_MAX + 1] {
    static TABLE: OnceBox<[f64; ZETA_MAX + 1]> = OnceBox::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0f64; ZETA_MAX + 1];
        for j in 2..=ZETA_MAX {
            t[j] = zeta_em(j as i32);
        }
        Box::new(t)
    })
}

/// zeta(j) for integer j >= 2 by Euler-Maclaurin with N = 64.
fn zeta_em(j: i32) -> f64 {
    let n = 64u64;
    let mut acc = Kahan::default();
    for k in 1..n {
        acc.add((k as f64).powi(-j));
    }
    let nf = n as f64;
    let s = j as f64;
    // Tail: integral + half term + Bernoulli corrections.
    let mut tail = nf.powi(1 - j) / (s - 1.0) + 0.5 * nf.powi(-j);
    let mut fac = s;
    let mut pw = nf.powi(-j - 1);
    for i in 1..=6usize {
        tail += BERN_SMALL[2 * i] / factorial(2 * i) * fac * pw;
        fac *= (s + 2.0 * i as f64 - 1.0) * (s + 2.0 * i as f64);
        pw /= nf * nf;
    }
    acc.add(tail);
    acc.total()
}

fn factorial(n: usize) -> f64 {
    let mut f = 1.0f64;
    for i in 2..=n {
        f *= i as f64;
    }
    f
}

const BERN_MAX: usize = 80;

/// B_n for even n via the zeta relation; odd n > 1 give 0.
fn bernoulli_table() -> &'static [f64; BERN_MAX + 1] {
    static TABLE: OnceBox<[f64; BERN_MAX + 1]> = OnceBox::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0f64; BERN_MAX + 1];
        t[0] = 1.0;
        t[1] = -0.5;
        for m in 1..=BERN_MAX / 2 {
            let tm = 2 * m;
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            t[tm] = sign * 2.0 * factorial(tm) * zeta_int(tm as i32) / TAU.powi(tm as i32);
        }
        Box::new(t)
    })
}

/// zeta at positive integer argument >= 2.
pub(crate) fn zeta_int(j: i32) -> f64 {
    debug_assert!(j >= 2);
    if (j as usize) <= ZETA_MAX {
        zeta_table()[j as usize]
    } else {
        1.0 + 2f64.powi(-j) + 3f64.powi(-j)
    }
}

/// zeta at any integer except 1: table for j >= 2, -1/2 at 0, Bernoulli
/// values at negative integers.
pub(crate) fn zeta_any(j: i32) -> f64 {
    if j >= 2 {
        zeta_int(j)
    } else if j == 0 {
        -0.5
    } else if j == 1 {
        f64::NAN
    } else {
        let n = (-j) as usize; // zeta(-n) = -B_{n+1}/(n+1)
        if n % 2 == 0 {
            0.0
        } else if n + 1 <= BERN_MAX {
            -bernoulli_table()[n + 1] / (n as f64 + 1.0)
        } else {
            f64::NAN
        }
    }
}

pub(crate) fn bernoulli(n: usize) -> f64 {
    bernoulli_table()[n]
}

/// Bernoulli polynomial B_n(x) for n <= 12.
pub(crate) fn bernoulli_poly(n: usize, x: f64) -> f64 {
    debug_assert!(n <= 12);
    let mut acc = 0.0;
    for k in 0..=n {
        acc += numerics::binomial(n as u64, k as u64) * BERN_SMALL[k] * x.powi((n - k) as i32);
    }
    acc
}

fn harmonic(n: usize) -> f64 {
    let mut h = 0.0;
    for i in 1..=n {
        h += 1.0 / i as f64;
    }
    h
}

// ---------------------------------------------------------------------------
// Polylogarithms.
// ---------------------------------------------------------------------------

/// `1 - e^mu` without cancellation for small `mu`.
pub(crate) fn one_minus_exp(mu: Complex64) -> Complex64 {
    if mu.norm() < 0.5 {
        // -(e^mu - 1) = -mu (1 + mu/2 + mu^2/6 + ...)
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(1.0, 0.0);
        for n in 2..30 {
            term *= mu / n as f64;
            acc += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        -mu * acc
    } else {
        1.0 - mu.exp()
    }
}

/// `ln(1 - e^mu)` stable near `mu = 0` (principal branch).
pub(crate) fn ln_one_minus_exp(mu: Complex64) -> Complex64 {
    if mu.norm() < 0.5 {
        let ratio = one_minus_exp(mu) / -mu; // ~ 1 + mu/2 + ...
        (-mu).ln() + ratio.ln()
    } else {
        (1.0 - mu.exp()).ln()
    }
}

/// Direct power series for Li_k(z), |z| bounded away from 1.
fn li_series(k: i32, z: Complex64) -> Complex64 {
    let mut acc = KahanComplex::default();
    let mut zp = Complex64::new(1.0, 0.0);
    let r = z.norm();
    for n in 1..10_000u32 {
        zp *= z;
        let term = zp * (n as f64).powi(-k);
        acc.add(term);
        if n > 8 && term.norm() * r / (1.0 - r) < 1e-18 {
            break;
        }
    }
    acc.total()
}

/// Li_k(e^mu) for k >= 2 by the expansion about mu = 0
/// (valid for |mu| < 2 pi, mu not on the positive real axis):
/// `sum_{n != k-1} zeta(k - n) mu^n / n! + mu^{k-1}/(k-1)! (H_{k-1} - ln(-mu))`.
fn li_mu_expansion(k: i32, mu: Complex64) -> Complex64 {
    debug_assert!(k >= 2);
    let mut acc = KahanComplex::default();
    let mut mupow = Complex64::new(1.0, 0.0); // mu^n / n!
    let mut small = 0u32;
    for n in 0..90i32 {
        if n == k - 1 {
            if mu.norm() > 0.0 {
                acc.add(mupow * (harmonic((k - 1) as usize) - (-mu).ln()));
            }
        } else {
            let zc = zeta_any(k - n);
            if zc != 0.0 {
                let term = mupow * zc;
                acc.add(term);
                // Terms regrow through the Bernoulli factors; stop only on
                // two consecutive tiny nonzero terms past the log slot.
                if n > k + 4 {
                    if term.norm() < 1e-19 {
                        small += 1;
                        if small >= 2 {
                            break;
                        }
                    } else {
                        small = 0;
                    }
                }
            }
        }
        mupow *= mu / (n as f64 + 1.0);
    }
    acc.total()
}

/// Li_{-m}(z) for m >= 0 via Stirling numbers of the second kind:
/// `sum_{j=1}^{m+1} S(m+1, j) (j-1)! (z/(1-z))^j`.
fn li_negative(m: u32, z: Complex64, one_minus_z: Complex64) -> Complex64 {
    let mm = m as usize;
    let rows = mm + 2;
    let mut s2 = alloc::vec![0.0f64; rows * rows];
    s2[rows + 1] = 1.0;
    for n in 2..rows {
        for j in 1..=n {
            s2[n * rows + j] = j as f64 * s2[(n - 1) * rows + j] + s2[(n - 1) * rows + j - 1];
        }
    }
    let u = z / one_minus_z;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut upow = Complex64::new(1.0, 0.0);
    let mut fact = 1.0f64;
    for j in 1..=mm + 1 {
        upow *= u;
        if j >= 2 {
            fact *= (j - 1) as f64;
        }
        acc += upow * (s2[(mm + 1) * rows + j] * fact);
    }
    acc
}

/// Li_k(e^mu) for integer k (any sign), Re(mu) <= 0. Dispatches between the
/// direct power series, the expansion about mu = 0, and closed forms.
#[doc(hidden)]
pub fn li_exp_dbg(k: i32, mu: Complex64) -> Complex64 { li_exp(k, mu) }

pub(crate) fn li_exp(k: i32, mu: Complex64) -> Complex64 {
    let z = mu.exp();
    if z.norm() <= 0.55 {
        if k >= 0 {
            return li_series(k, z);
        }
        return li_negative((-k) as u32, z, 1.0 - z);
    }
    if k >= 2 {
        li_mu_expansion(k, mu)
    } else if k == 1 {
        -ln_one_minus_exp(mu)
    } else {
        let omz = one_minus_exp(mu);
        if k == 0 {
            z / omz
        } else {
            li_negative((-k) as u32, z, omz)
        }
    }
}

/// Polylogarithm `Li_k(z) = sum_{n>=1} z^n / n^k` for integer order `k` and
/// `|z| <= 1`. `z = 1` requires `k >= 2`.
pub fn polylog(k: i32, z: Complex64) -> Result<ComplexValue> {
    let r = z.norm();
    if r > 1.0 + 1e-12 {
        return Err(Error::DomainError("polylog requires |z| <= 1"));
    }
    if (z - 1.0).norm() < PHASE_EPS {
        if k >= 2 {
            return Ok(ComplexValue::new(
                Complex64::new(zeta_int(k), 0.0),
                f64::EPSILON,
            ));
        }
        return Err(Error::DomainError("polylog diverges at z = 1 for k <= 1"));
    }
    let val = if r <= 0.55 {
        if k >= 0 {
            li_series(k, z)
        } else {
            li_negative((-k) as u32, z, 1.0 - z)
        }
    } else {
        li_exp(k, z.ln())
    };
    Ok(ComplexValue::new(
        val,
        4.0 * f64::EPSILON * (1.0 + val.norm()),
    ))
}

/// `ln(1 - e^{2 pi i alpha})` for a unit phase, stable near the singular
/// point (principal branch).
pub fn ln_one_minus_exp_phase(phase: &UnitPhase) -> Complex64 {
    ln_one_minus_exp(Complex64::new(0.0, TAU * phase.signed_frac()))
}

/// Polylogarithm at a unit-circle point given by its phase.
pub fn polylog_phase(k: i32, phase: &UnitPhase) -> Result<ComplexValue> {
    if phase.is_integral() {
        if k >= 2 {
            return Ok(ComplexValue::new(
                Complex64::new(zeta_int(k), 0.0),
                f64::EPSILON,
            ));
        }
        return Err(Error::DomainError("polylog diverges at z = 1 for k <= 1"));
    }
    let mu = Complex64::new(0.0, TAU * phase.signed_frac());
    let val = li_exp(k, mu);
    Ok(ComplexValue::new(
        val,
        4.0 * f64::EPSILON * (1.0 + val.norm()),
    ))
}

/// `d/ds Li_s(e^{2 pi i alpha}) |_{s=1} = -sum_{n>=2} e^{2 pi i n alpha} ln(n)/n`.
pub fn polylog_order_deriv_s1(alpha: &UnitPhase, cfg: &SeriesConfig) -> Result<ComplexValue> {
    if alpha.is_integral() {
        return Err(Error::DomainError(
            "order derivative at s=1 needs a non-integral phase",
        ));
    }
    let depth = if alpha.gap() < 0.3 { 4 } else { cfg.parts_depth };
    let local = cfg
        .with_depth(depth)
        .with_max_terms(cfg.max_terms.max(10_000_000));
    let z2 = alpha.z() * alpha.z();
    let s = sum_phased(
        |q| {
            let n = (q + 2) as f64;
            Complex64::new(n.ln() / n, 0.0)
        },
        alpha.frac(),
        &local,
    )?;
    Ok(ComplexValue::new(-z2 * s.val, s.err))
}

// ---------------------------------------------------------------------------
// Digamma and polygamma.
// ---------------------------------------------------------------------------

fn off_cut(z: Complex64) -> bool {
    !(z.im.abs() < PHASE_EPS && z.re <= PHASE_EPS)
}

/// Digamma `psi(z)` for complex `z` off the cut `(-inf, 0]`.
pub fn digamma(z: Complex64) -> Result<ComplexValue> {
    polygamma(0, z)
}

/// Polygamma `psi^{(n)}(z)` off the cut: upward recurrence to
/// `Re z >= 12 + n`, then the 8-term asymptotic series.
pub fn polygamma(n: u32, z: Complex64) -> Result<ComplexValue> {
    if !off_cut(z) {
        return Err(Error::DomainError("polygamma argument on the cut (-inf, 0]"));
    }
    let threshold = 12.0 + n as f64;
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    let nf = factorial(n as usize);
    let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut loss = 0.0f64;
    // psi^{(n)}(z) = psi^{(n)}(z+1) - (-1)^n n! z^{-(n+1)}
    while w.re < threshold {
        let t = w.powi(-(n as i32) - 1) * (sign_n * nf);
        shift -= t;
        loss += t.norm();
        w += 1.0;
    }
    let asym = if n == 0 {
        // ln w - 1/(2w) - sum B_{2j}/(2j w^{2j})
        let mut acc = w.ln() - 0.5 / w;
        let w2 = w * w;
        let mut pw = Complex64::new(1.0, 0.0);
        for j in 1..=8usize {
            pw /= w2;
            acc -= pw * (bernoulli(2 * j) / (2.0 * j as f64));
        }
        acc
    } else {
        // (-1)^{n-1} [ (n-1)!/w^n + n!/(2 w^{n+1})
        //             + sum B_{2j} (2j+n-1)!/((2j)! w^{2j+n}) ]
        let sgn = if n % 2 == 1 { 1.0 } else { -1.0 };
        let mut acc = w.powi(-(n as i32)) * factorial(n as usize - 1)
            + w.powi(-(n as i32) - 1) * (nf / 2.0);
        let w2 = w * w;
        let mut pw = w.powi(-(n as i32));
        for j in 1..=8usize {
            pw /= w2;
            acc += pw * (bernoulli(2 * j) * factorial(2 * j + n as usize - 1) / factorial(2 * j));
        }
        acc * sgn
    };
    let val = asym + shift;
    Ok(ComplexValue::new(
        val,
        f64::EPSILON * (4.0 * val.norm() + loss),
    ))
}

/// Hurwitz zeta at integer order `s >= 2`: `zeta(s, a) = sum_{n>=0} (a+n)^{-s}`.
pub(crate) fn hurwitz_int(s: u32, a: Complex64) -> Result<Complex64> {
    debug_assert!(s >= 2);
    let pg = polygamma(s - 1, a)?;
    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
    Ok(pg.val * (sign / factorial(s as usize - 1)))
}

// ---------------------------------------------------------------------------
// Phased Lerch engine.
// ---------------------------------------------------------------------------

/// Evaluator for the family `S_m(y) = sum_{q>=0} z^q (y+q)^{-m}` at a fixed
/// unit phase `z = e^{2 pi i beta}`, `beta` non-integral.
///
/// Direct compensated summation to an index `Q` past which the
/// large-argument expansion in the Taylor coefficients `a_n(beta)` of
/// `1/(1 - e^{-t} z)` takes over. No finite differences are formed, so the
/// evaluation stays stable uniformly in `beta`.
#[derive(Debug, Clone)]
pub(crate) struct PhasedLerch {
    beta: f64,
    z: Complex64,
    rho: f64,
    coeffs: Vec<Complex64>,
}

impl PhasedLerch {
    pub fn new(phase: &UnitPhase) -> Result<Self> {
        if phase.is_integral() {
            return Err(Error::DegeneratePhase);
        }
        let z = phase.z();
        let rho = phase.pole_distance();
        let coeffs = phase_taylor_coeffs(z, 72);
        Ok(Self {
            beta: phase.frac(),
            z,
            rho,
            coeffs,
        })
    }

    /// `sum_{q>=0} z^q (y+q)^{-m}`.
    pub fn sum_inv_pow(&self, y: Complex64, m: u32) -> Complex64 {
        let r = 38.0 + 3.0 * m as f64;
        let q_split = ((r / self.rho - y.re).ceil().max(48.0)) as u64;
        let q_split = q_split.min(80_000_000);
        let mut acc = KahanComplex::default();
        let mi = -(m as i32);
        for q in 0..q_split {
            let term = numerics::unit_phase_pow(self.beta, q) * (y + q as f64).powi(mi);
            acc.add(term);
        }
        // Tail: z^Q sum_n a_n C(n+m-1, n) Y^{-(n+m)}.
        let yy = y + q_split as f64;
        let zq = numerics::unit_phase_pow(self.beta, q_split);
        let inv = Complex64::new(1.0, 0.0) / yy;
        let mut pw = inv.powu(m);
        let mut tail = KahanComplex::default();
        let mut best = f64::INFINITY;
        let mut amax = 0.0f64;
        for (n, &a) in self.coeffs.iter().enumerate() {
            let an = a.norm();
            amax = amax.max(an);
            // Coefficients that vanish analytically come out as rounding
            // dust; skip them rather than letting them trip the stop rules.
            if an > 1e-13 * amax {
                let term = a * numerics::binomial((n as u64) + (m as u64) - 1, n as u64) * pw;
                let tn = term.norm();
                if n > 6 && tn > best * 4.0 {
                    break; // asymptotic series turned; stop at its best stretch
                }
                best = best.min(tn);
                tail.add(term);
                if tn < 1e-19 {
                    break;
                }
            }
            pw *= inv;
        }
        acc.add(zq * tail.total());
        acc.total()
    }

    /// `sum_{q>=1} z^q (y+q)^{-m}`.
    pub fn sum_inv_pow_from1(&self, y: Complex64, m: u32) -> Complex64 {
        self.z * self.sum_inv_pow(y + 1.0, m)
    }

    /// `psi_beta(y) = sum_{q>=0} z^q/(y+q)`.
    pub fn psi(&self, y: Complex64) -> Complex64 {
        self.sum_inv_pow(y, 1)
    }
}

/// Taylor coefficients `a_n = d^n/dt^n (1 - e^{-t} z)^{-1} |_{t=0}` by
/// Cauchy-product inversion of the exponential series.
pub(crate) fn phase_taylor_coeffs(z: Complex64, count: usize) -> Vec<Complex64> {
    let g = z / (1.0 - z);
    let mut a: Vec<Complex64> = Vec::with_capacity(count);
    a.push(Complex64::new(1.0, 0.0) / (1.0 - z));
    for n in 1..count {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut sign = -1.0;
        for m in 1..=n {
            acc += a[n - m] * (sign * numerics::binomial(n as u64, m as u64));
            sign = -sign;
        }
        let next = g * acc;
        if !(next.re.is_finite() && next.im.is_finite()) || next.norm() > 1e250 {
            break;
        }
        a.push(next);
    }
    a
}

/// Evaluation route for [`lerch_psi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LerchRoute {
    /// Phased series with an asymptotic tail.
    Series,
    /// Binet-type integral representation (x real positive, 0 < beta < 1).
    Binet,
}

/// `psi_beta(x) = sum_{q>=0} e^{2 pi i beta q}/(x+q)` for non-integral beta
/// and `x` off `(-inf, 0]`.
pub fn lerch_psi(beta: f64, x: Complex64, route: LerchRoute) -> Result<ComplexValue> {
    let phase = UnitPhase::new(beta);
    if phase.is_integral() {
        return Err(Error::DomainError("lerch_psi requires a non-integral phase"));
    }
    if !off_cut(x) {
        return Err(Error::DomainError("lerch_psi argument on the cut (-inf, 0]"));
    }
    match route {
        LerchRoute::Series => {
            let engine = PhasedLerch::new(&phase)?;
            let val = engine.psi(x);
            Ok(ComplexValue::new(
                val,
                8.0 * f64::EPSILON * (1.0 + val.norm()),
            ))
        }
        LerchRoute::Binet => {
            let b = phase.frac();
            if !(x.im == 0.0 && x.re > 0.0) {
                return Err(Error::DomainError("binet route requires real x > 0"));
            }
            if !(b > 0.0 && b < 1.0) {
                return Err(Error::DomainError("binet route requires 0 < beta < 1"));
            }
            let psi_b = digamma(Complex64::new(b, 0.0))?.val;
            let psi_1mb = digamma(Complex64::new(1.0 - b, 0.0))?.val;
            let head = 0.5 / x - Complex64::i() * (psi_b - psi_1mb) / (TAU * x);
            // (1/x) int_0^inf y g(y) [ e^{-2 pi b y}/(x + i y)
            //                        + e^{-2 pi (1-b) y}/(x - i y) ] dy,
            // with y g(y) = y / (1 - e^{-2 pi y}) regular at 0.
            let rule = QuadratureRule::half_line(24);
            let scale = 1.0 / (TAU * b.min(1.0 - b));
            let integral = quad_halfline(
                |y| {
                    let yg = if y < 1e-10 {
                        1.0 / TAU + 0.5 * y
                    } else {
                        y / -(-TAU * y).exp_m1()
                    };
                    let ea = (-TAU * b * y).exp();
                    let ec = (-TAU * (1.0 - b) * y).exp();
                    Complex64::new(yg * ea, 0.0) / (x + Complex64::new(0.0, y))
                        + Complex64::new(yg * ec, 0.0) / (x - Complex64::new(0.0, y))
                },
                scale,
                &rule,
                1e-13,
            )?;
            let val = head + integral.val / x;
            Ok(ComplexValue::new(val, integral.err + 1e-15))
        }
    }
}

// ---------------------------------------------------------------------------
// Double polylogarithm.
// ---------------------------------------------------------------------------

/// Inner tail `U(p) = sum_{j>=0} z2^j / (p+1+j)^b`.
enum InnerTail<'a> {
    Interior(Complex64),
    Circle(&'a PhasedLerch),
    One,
}

impl InnerTail<'_> {
    fn eval(&self, p: u64, b: u32) -> Result<Complex64> {
        let y = Complex64::new((p + 1) as f64, 0.0);
        match self {
            InnerTail::Interior(z2) => {
                let mut acc = KahanComplex::default();
                let mut zp = Complex64::new(1.0, 0.0);
                let r = z2.norm();
                let mut j = 0u64;
                loop {
                    let term = zp * (y + j as f64).powi(-(b as i32));
                    acc.add(term);
                    if j > 4 && term.norm() * r / (1.0 - r) < 1e-18 {
                        break;
                    }
                    zp *= *z2;
                    j += 1;
                    if j > 2_000_000 {
                        return Err(Error::NonConvergent);
                    }
                }
                Ok(acc.total())
            }
            InnerTail::Circle(engine) => Ok(engine.sum_inv_pow(y, b)),
            InnerTail::One => hurwitz_int(b, y),
        }
    }
}

/// Double polylogarithm `Li_{a,b}(z1, z2) = sum_{0<p<q} z1^p z2^q / (p^a q^b)`
/// for integer `a, b >= 1` and `|z1|, |z2| <= 1`.
pub fn double_polylog(
    a: u32,
    b: u32,
    z1: Complex64,
    z2: Complex64,
    cfg: &SeriesConfig,
) -> Result<ComplexValue> {
    if a < 1 || b < 1 {
        return Err(Error::DomainError("double_polylog needs a, b >= 1"));
    }
    if z1.norm() > 1.0 + 1e-12 || z2.norm() > 1.0 + 1e-12 {
        return Err(Error::DomainError("double_polylog requires |z| <= 1"));
    }
    let z2_at_one = (z2 - 1.0).norm() < PHASE_EPS;
    if b == 1 && z2_at_one {
        return Err(Error::DomainError("inner series diverges: b = 1 with z2 = 1"));
    }
    let w = z1 * z2;
    let w_at_one = (w - 1.0).norm() < PHASE_EPS;
    if w_at_one && z2_at_one && a + b < 3 {
        return Err(Error::DomainError("outer series diverges"));
    }

    let on_circle2 = z2.norm() > 0.999 && !z2_at_one;
    let engine2;
    let inner = if z2_at_one {
        InnerTail::One
    } else if on_circle2 {
        let beta2 = z2.arg() / TAU;
        engine2 = PhasedLerch::new(&UnitPhase::new(beta2))?;
        InnerTail::Circle(&engine2)
    } else {
        InnerTail::Interior(z2)
    };

    // term_p = z2 * w^p * U(p) / p^a
    if w_at_one {
        // Unphased outer sum with a zeta-matched tail.
        let pmax = 60_000u64;
        let mut acc = KahanComplex::default();
        let mut last = Complex64::new(0.0, 0.0);
        for p in 1..=pmax {
            last = inner.eval(p, b)? * (p as f64).powi(-(a as i32));
            acc.add(last);
        }
        let sigma = (a + b) as i32;
        let mut partial = Kahan::default();
        for p in 1..=pmax {
            partial.add((p as f64).powi(-sigma));
        }
        let c0 = last * (pmax as f64).powi(sigma);
        let tail = c0 * (zeta_int(sigma) - partial.total());
        let val = z2 * (acc.total() + tail);
        return Ok(ComplexValue::new(val, tail.norm() / pmax as f64 + 1e-14));
    }

    if w.norm() > 0.999 {
        // Outer phase on the unit circle.
        let gamma = w.arg() / TAU;
        let depth = if (w - 1.0).norm() < 0.3 { 4 } else { cfg.parts_depth };
        let local = cfg.with_depth(depth);
        let mut inner_err: Option<Error> = None;
        let s = sum_phased(
            |q| {
                let p = q + 1;
                match inner.eval(p, b) {
                    Ok(u) => u * (p as f64).powi(-(a as i32)),
                    Err(e) => {
                        inner_err = Some(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            gamma,
            &local,
        )?;
        if let Some(e) = inner_err {
            return Err(e);
        }
        let w1 = numerics::unit_phase(gamma);
        let val = z2 * w1 * s.val;
        return Ok(ComplexValue::new(val, s.err));
    }

    // |w| < 1: direct geometric decay.
    let mut acc = KahanComplex::default();
    let r = w.norm();
    let mut wp = Complex64::new(1.0, 0.0);
    for p in 1..2_000_000u64 {
        wp *= w;
        let term = wp * inner.eval(p, b)? * (p as f64).powi(-(a as i32));
        acc.add(term);
        if p > 4 && term.norm() * r / (1.0 - r) < 1e-16 {
            let val = z2 * acc.total();
            return Ok(ComplexValue::new(val, 1e-15 * (1.0 + val.norm())));
        }
    }
    Err(Error::NonConvergent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const LN2: f64 = core::f64::consts::LN_2;

    #[test]
    fn polylog_at_zero_and_closed_forms() {
        for k in [0, 1, 2, 5] {
            let v = polylog(k, Complex64::new(0.0, 0.0)).unwrap();
            assert_abs_diff_eq!(v.val.norm(), 0.0, epsilon = 1e-15);
        }
        // Li_2(-1) = -pi^2/12.
        let v = polylog(2, Complex64::new(-1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.val.re, -PI * PI / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.val.im, 0.0, epsilon = 1e-15);
        // Li_1(e^{2 pi i 0.3}) = -ln(1 - e^{0.6 pi i}).
        let z = numerics::unit_phase(0.3);
        let v = polylog(1, z).unwrap();
        let expect = -(1.0 - z).ln();
        assert!((v.val - expect).norm() < 1e-14);
    }

    #[test]
    fn polylog_series_vs_mu_expansion_consistency() {
        for k in [2i32, 3, 6] {
            for arg in [0.7f64, 2.0, 3.0] {
                let z = Complex64::from_polar(0.6, arg);
                let a = li_series(k, z);
                let b = li_exp(k, z.ln());
                assert!((a - b).norm() < 1e-14, "k={k} arg={arg}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn polylog_conjugation_symmetry() {
        for k in [1i32, 2, 3, 4] {
            for &al in &[0.17f64, 0.3, 0.45] {
                let z = numerics::unit_phase(al);
                let v = polylog(k, z).unwrap().val;
                let vc = polylog(k, z.conj()).unwrap().val;
                assert!((vc - v.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn polylog_negative_orders() {
        // Li_0(z) = z/(1-z), Li_{-1}(z) = z/(1-z)^2 at an interior point.
        let z = Complex64::new(0.3, 0.2);
        let l0 = polylog(0, z).unwrap().val;
        assert!((l0 - z / (1.0 - z)).norm() < 1e-14);
        let lm1 = polylog(-1, z).unwrap().val;
        assert!((lm1 - z / ((1.0 - z) * (1.0 - z))).norm() < 1e-14);
        // Circle point: Li_{-2}(z) = z(1+z)/(1-z)^3.
        let zc = numerics::unit_phase(0.37);
        let lm2 = polylog(-2, zc).unwrap().val;
        let expect = zc * (1.0 + zc) / (1.0 - zc).powu(3);
        assert!((lm2 - expect).norm() < 1e-12);
    }

    #[test]
    fn digamma_classic_values() {
        let v = digamma(Complex64::new(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.val.re, -EULER_GAMMA, epsilon = 1e-14);
        let v = digamma(Complex64::new(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(v.val.re, -EULER_GAMMA - 2.0 * LN2, epsilon = 1e-13);
        let v = digamma(Complex64::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.val.re, 1.0 - EULER_GAMMA, epsilon = 1e-14);
        assert!(digamma(Complex64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn polygamma_vs_series() {
        // psi'(x) = sum 1/(x+n)^2 and psi''(x) = -2 sum 1/(x+n)^3.
        let x = Complex64::new(1.7, 0.4);
        let mut s1 = KahanComplex::default();
        let mut s2 = KahanComplex::default();
        let nn = 400_000u64;
        for n in 0..nn {
            let d = x + n as f64;
            s1.add(d.powi(-2));
            s2.add(d.powi(-3));
        }
        let nf = nn as f64;
        let p1 = polygamma(1, x).unwrap().val;
        let p2 = polygamma(2, x).unwrap().val;
        assert!((p1 - (s1.total() + 1.0 / nf)).norm() < 1e-9);
        assert!((p2 - (-2.0 * (s2.total() + 0.5 / (nf * nf)))).norm() < 1e-9);
    }

    #[test]
    fn lerch_series_log2_and_recurrence() {
        let v = lerch_psi(0.5, Complex64::new(1.0, 0.0), LerchRoute::Series).unwrap();
        assert_abs_diff_eq!(v.val.re, LN2, epsilon = 1e-13);
        assert_abs_diff_eq!(v.val.im, 0.0, epsilon = 1e-14);
        let b = 0.3;
        let x = Complex64::new(2.5, 0.0);
        let z = numerics::unit_phase(b);
        let l = lerch_psi(b, x, LerchRoute::Series).unwrap().val;
        let r = lerch_psi(b, x + 1.0, LerchRoute::Series).unwrap().val;
        assert!((l - z * r - 1.0 / x).norm() < 1e-13);
    }

    #[test]
    fn lerch_recurrence_grid() {
        for i in 0..20 {
            let b = 0.05 + 0.045 * i as f64;
            let x = Complex64::new(0.3 + 0.37 * i as f64, 0.0);
            let z = numerics::unit_phase(b);
            let l = lerch_psi(b, x, LerchRoute::Series).unwrap().val;
            let r = lerch_psi(b, x + 1.0, LerchRoute::Series).unwrap().val;
            assert!((l - z * r - 1.0 / x).norm() < 1e-12, "i={i}");
        }
    }

    #[test]
    fn lerch_binet_vs_series() {
        let v_s = lerch_psi(0.3, Complex64::new(2.5, 0.0), LerchRoute::Series).unwrap();
        let v_b = lerch_psi(0.3, Complex64::new(2.5, 0.0), LerchRoute::Binet).unwrap();
        assert!(
            (v_s.val - v_b.val).norm() < 1e-10,
            "series {} vs binet {}",
            v_s.val,
            v_b.val
        );
    }

    #[test]
    fn lerch_conjugation() {
        let x = Complex64::new(1.7, 0.0);
        let a = lerch_psi(0.3, x, LerchRoute::Series).unwrap().val;
        let b = lerch_psi(-0.3, x, LerchRoute::Series).unwrap().val;
        assert!((b - a.conj()).norm() < 1e-13);
    }

    #[test]
    fn lerch_small_phase_stable() {
        // Near-integral (but legal) phases. At x = 1 there is a closed form:
        // sum z^q/(1+q) = -ln(1-z)/z.
        let x = Complex64::new(1.0, 0.0);
        for &b in &[1e-3f64, 1e-4, 0.2, 0.5, 0.9999] {
            let z = numerics::unit_phase(b);
            let oracle = -(1.0 - z).ln() / z;
            let v = lerch_psi(b, x, LerchRoute::Series).unwrap().val;
            assert!((v - oracle).norm() < 1e-12, "b={b}: {v} vs {oracle}");
        }
    }

    #[test]
    fn order_deriv_eta_value() {
        // -sum (-1)^n ln n / n = (ln 2)^2/2 - gamma ln 2.
        let v = polylog_order_deriv_s1(&UnitPhase::new(0.5), &SeriesConfig::default()).unwrap();
        let expect = LN2 * LN2 / 2.0 - EULER_GAMMA * LN2;
        assert_abs_diff_eq!(v.val.re, expect, epsilon = 1e-12);
        assert_abs_diff_eq!(v.val.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn order_deriv_third_vs_brute() {
        let alpha = 1.0 / 3.0;
        let mut partial = Vec::new();
        let mut acc = KahanComplex::default();
        let n = 2_000_000u64;
        for q in 2..n {
            let nf = q as f64;
            acc.add(numerics::unit_phase_pow(alpha, q) * (nf.ln() / nf));
            if q >= n - 128 {
                partial.push(acc.total());
            }
        }
        let mut row = partial;
        while row.len() > 1 {
            for j in 0..row.len() - 1 {
                row[j] = (row[j] + row[j + 1]) * 0.5;
            }
            row.pop();
        }
        let oracle = -row[0];
        let v = polylog_order_deriv_s1(&UnitPhase::new(alpha), &SeriesConfig::default()).unwrap();
        assert!((v.val - oracle).norm() < 1e-10, "{} vs {}", v.val, oracle);
    }

    #[test]
    fn order_deriv_conjugate_symmetry() {
        let a = polylog_order_deriv_s1(&UnitPhase::new(0.25), &SeriesConfig::default()).unwrap();
        let b = polylog_order_deriv_s1(&UnitPhase::new(0.75), &SeriesConfig::default()).unwrap();
        assert!((a.val - b.val.conj()).norm() < 1e-12);
    }

    #[test]
    fn double_polylog_basics() {
        let cfg = SeriesConfig::default();
        let v = double_polylog(2, 2, Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), &cfg)
            .unwrap();
        assert!(v.val.norm() < 1e-15);
        // Li_{1,1}(-1,-1) = ((ln 2)^2 - zeta(2)) / 2.
        let m1 = Complex64::new(-1.0, 0.0);
        let v = double_polylog(1, 1, m1, m1, &cfg).unwrap();
        let expect = (LN2 * LN2 - PI * PI / 6.0) / 2.0;
        assert_abs_diff_eq!(v.val.re, expect, epsilon = 1e-9);
        assert_abs_diff_eq!(v.val.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn double_polylog_brute_force_check() {
        let cfg = SeriesConfig::default();
        let z1 = Complex64::new(0.4, 0.3);
        let z2 = Complex64::new(-0.5, 0.2);
        let (a, b) = (1u32, 2u32);
        let mut brute = KahanComplex::default();
        for p in 1..400u64 {
            for q in p + 1..p + 400 {
                brute.add(
                    z1.powu(p as u32) * z2.powu(q as u32)
                        / ((p as f64).powi(a as i32) * (q as f64).powi(b as i32)),
                );
            }
        }
        let v = double_polylog(a, b, z1, z2, &cfg).unwrap();
        assert!((v.val - brute.total()).norm() < 1e-10);
    }

    #[test]
    fn double_polylog_stuffle() {
        // Li_a(z1) Li_b(z2) = Li_{a,b}(z1,z2) + Li_{b,a}(z2,z1) + Li_{a+b}(z1 z2)
        let cfg = SeriesConfig::default();
        let z1 = numerics::unit_phase(0.2);
        let z2 = numerics::unit_phase(0.4);
        let (a, b) = (2u32, 2u32);
        let lhs = polylog(a as i32, z1).unwrap().val * polylog(b as i32, z2).unwrap().val;
        let rhs = double_polylog(a, b, z1, z2, &cfg).unwrap().val
            + double_polylog(b, a, z2, z1, &cfg).unwrap().val
            + polylog((a + b) as i32, z1 * z2).unwrap().val;
        assert!((lhs - rhs).norm() < 1e-11, "{lhs} vs {rhs}");
    }

    #[test]
    fn double_polylog_domain_errors() {
        let cfg = SeriesConfig::default();
        let one = Complex64::new(1.0, 0.0);
        assert!(double_polylog(2, 1, Complex64::new(0.5, 0.0), one, &cfg).is_err());
        assert!(double_polylog(1, 1, one, one, &cfg).is_err());
    }

    #[test]
    fn zeta_values_sane() {
        assert_abs_diff_eq!(zeta_int(2), PI * PI / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta_int(4), PI.powi(4) / 90.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta_int(3), 1.2020569031595943, epsilon = 1e-14);
        assert_abs_diff_eq!(zeta_any(0), -0.5, epsilon = 0.0);
        assert_abs_diff_eq!(zeta_any(-1), -1.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta_any(-2), 0.0, epsilon = 0.0);
        assert_abs_diff_eq!(zeta_any(-3), 1.0 / 120.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bernoulli(2), 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(bernoulli(12), -691.0 / 2730.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_phase_reduction() {
        let p = UnitPhase::new(2.9748);
        assert_abs_diff_eq!(p.frac(), 0.9748, epsilon = 1e-12);
        assert!((p.z().norm() - 1.0).abs() < 1e-14);
        assert!(!p.is_integral());
        assert!(UnitPhase::new(3.0 + 4e-13).is_integral());
        assert_abs_diff_eq!(UnitPhase::new(-0.4052).frac(), 0.5948, epsilon = 1e-12);
    }
}
