//! Exact reduction theory for real quadratic fields: quadratic irrationals,
//! minus/plus continued fractions, narrow class cycles, fundamental units,
//! indefinite forms of discriminant one, and the admissible twist set.
//!
//! All continued-fraction iteration runs in exact integer arithmetic on the
//! `(P + sqrt(D))/Q` representation; floating point appears only at the
//! [`IndefForm`] boundary.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Integer square root (floor) for non-negative `n`.
fn isqrt(n: i64) -> i64 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n);
    r * r == n
}

fn squarefree(mut n: i64) -> bool {
    debug_assert!(n > 0);
    if n % 4 == 0 {
        return false;
    }
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An exact quadratic irrational `(P + sqrt(D))/Q` with `Q | (D - P^2)`.
///
/// `D > 0` is a fixed nonsquare; the representation of a given value is
/// unique, so equality is structural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    p: i64,
    q: i64,
    d: i64,
}

impl QuadIrr {
    pub fn new(p: i64, q: i64, d: i64) -> Result<Self> {
        if d <= 0 || is_square(d) {
            return Err(Error::DomainError("D must be a positive nonsquare"));
        }
        if q == 0 {
            return Err(Error::DomainError("Q must be nonzero"));
        }
        if (d - p * p) % q != 0 {
            return Err(Error::DomainError("Q must divide D - P^2"));
        }
        Ok(Self { p, q, d })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Numeric value `(P + sqrt(D))/Q`.
    pub fn value(&self) -> f64 {
        (self.p as f64 + (self.d as f64).sqrt()) / self.q as f64
    }

    /// Algebraic conjugate `(P - sqrt(D))/Q`, kept in `+sqrt(D)` form.
    pub fn conj(&self) -> Self {
        Self {
            p: -self.p,
            q: -self.q,
            d: self.d,
        }
    }

    /// Value of the conjugate.
    pub fn conj_value(&self) -> f64 {
        (self.p as f64 - (self.d as f64).sqrt()) / self.q as f64
    }

    /// Exact comparison of the value against an integer `m`.
    fn cmp_int(&self, m: i64) -> core::cmp::Ordering {
        // (P + sqrt(D))/Q vs m  <=>  sign(P - mQ + sqrt(D)) * sign(Q)
        let t = self.p - m * self.q;
        let s = isqrt(self.d);
        // t + sqrt(D) > 0 iff t >= -s (sqrt irrational, never equal)
        let pos = t >= -s;
        let sign = if pos { 1 } else { -1 } * self.q.signum();
        sign.cmp(&0)
    }

    /// Exact floor of the value.
    pub fn floor(&self) -> i64 {
        let mut m = self.value().floor() as i64;
        while self.cmp_int(m) == core::cmp::Ordering::Less {
            m -= 1;
        }
        while self.cmp_int(m + 1) != core::cmp::Ordering::Less {
            m += 1;
        }
        m
    }

    /// Exact ceiling (the value is irrational, so `ceil = floor + 1`).
    pub fn ceil(&self) -> i64 {
        self.floor() + 1
    }

    /// `self - n`.
    pub fn sub_int(&self, n: i64) -> Self {
        Self {
            p: self.p - n * self.q,
            q: self.q,
            d: self.d,
        }
    }

    /// `1 / self`, exact.
    pub fn recip(&self) -> Self {
        // 1 / ((P + sqrt(D))/Q) = Q (sqrt(D) - P) / (D - P^2)
        //                       = (-P + sqrt(D)) / ((D - P^2)/Q)
        let q2 = (self.d - self.p * self.p) / self.q;
        Self {
            p: -self.p,
            q: q2,
            d: self.d,
        }
    }

    /// Exactly reduced: `w > 1 > w' > 0`.
    pub fn is_reduced(&self) -> bool {
        use core::cmp::Ordering::*;
        // w > 1
        if self.cmp_int(1) != Greater {
            return false;
        }
        // 0 < w' < 1
        let c = self.conj();
        c.cmp_int(0) == Greater && c.cmp_int(1) == Less
    }

    /// Wide-sense reduced: `x > 1` and `-1 < x' < 0`.
    pub fn is_wide_reduced(&self) -> bool {
        use core::cmp::Ordering::*;
        if self.cmp_int(1) != Greater {
            return false;
        }
        let c = self.conj();
        c.cmp_int(0) == Less && c.cmp_int(-1) == Greater
    }

    /// One minus-continued-fraction step: returns `(b, next)` with
    /// `self = b - 1/next`, `b = ceil(self)`.
    pub fn minus_step(&self) -> (i64, Self) {
        let b = self.ceil();
        // b - w = ((bQ - P) - sqrt(D)) / Q = ((P - bQ) + sqrt(D)) / (-Q)
        let t = Self {
            p: self.p - b * self.q,
            q: -self.q,
            d: self.d,
        };
        (b, t.recip())
    }

    /// One plus-continued-fraction step: returns `(a, next)` with
    /// `self = a + 1/next`, `a = floor(self)`.
    pub fn plus_step(&self) -> (i64, Self) {
        let a = self.floor();
        let frac = self.sub_int(a);
        (a, frac.recip())
    }
}

/// A purely periodic minus-continued-fraction cycle `((b_1, ..., b_r))`
/// together with the reduced numbers it visits, rotated so the digit string
/// is lexicographically minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusCycle {
    digits: Vec<i64>,
    members: Vec<QuadIrr>,
}

impl MinusCycle {
    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn members(&self) -> &[QuadIrr] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    fn canonical_rotation(digits: &mut Vec<i64>, members: &mut Vec<QuadIrr>) {
        let n = digits.len();
        let mut best = 0usize;
        for start in 1..n {
            for k in 0..n {
                let a = digits[(start + k) % n];
                let b = digits[(best + k) % n];
                match a.cmp(&b) {
                    core::cmp::Ordering::Less => {
                        best = start;
                        break;
                    }
                    core::cmp::Ordering::Greater => break,
                    core::cmp::Ordering::Equal => continue,
                }
            }
        }
        digits.rotate_left(best);
        members.rotate_left(best);
    }
}

/// Minus continued fraction cycle of a reduced quadratic irrational,
/// computed exactly by `b = ceil(w)`, `next = 1/(b - w)` until the starting
/// triple recurs.
pub fn minus_cf(w: &QuadIrr) -> Result<MinusCycle> {
    if !w.is_reduced() {
        return Err(Error::NotReduced);
    }
    let mut digits = Vec::new();
    let mut members = Vec::new();
    let mut cur = *w;
    loop {
        members.push(cur);
        let (b, next) = cur.minus_step();
        digits.push(b);
        if next == *w {
            break;
        }
        cur = next;
        if digits.len() > 10_000_000 {
            return Err(Error::NonConvergent);
        }
    }
    if digits.iter().all(|&b| b == 2) {
        return Err(Error::DomainError("all-2 minus cycle is degenerate"));
    }
    MinusCycle::canonical_rotation(&mut digits, &mut members);
    Ok(MinusCycle { digits, members })
}

/// Field-level data: discriminant, fundamental unit `(t + u sqrt(D))/2`,
/// the norm of the unit, and `N(eps - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldData {
    d: i64,
    eps_t: BigInt,
    eps_u: BigInt,
    norm_eps: i8,
    norm_eps_minus_1: BigInt,
}

impl FieldData {
    pub fn discriminant(&self) -> i64 {
        self.d
    }

    /// Fundamental unit as the pair `(t, u)` in `eps = (t + u sqrt(D))/2`.
    pub fn unit(&self) -> (&BigInt, &BigInt) {
        (&self.eps_t, &self.eps_u)
    }

    pub fn norm_eps(&self) -> i8 {
        self.norm_eps
    }

    pub fn norm_eps_minus_1(&self) -> &BigInt {
        &self.norm_eps_minus_1
    }

    /// Numeric value of the fundamental unit (approximate for huge units).
    pub fn unit_value(&self) -> f64 {
        big_to_f64(&self.eps_t) / 2.0 + big_to_f64(&self.eps_u) / 2.0 * (self.d as f64).sqrt()
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    b.to_f64().unwrap_or(f64::INFINITY)
}

/// Checks that `d` is a fundamental discriminant: either `d = 1 mod 4`
/// squarefree, or `d = 4m` with `m = 2, 3 mod 4` squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d <= 1 || is_square(d) {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            let r = m.rem_euclid(4);
            (r == 2 || r == 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Fundamental unit and related data for the field of discriminant `d`.
///
/// The totally positive fundamental unit is the exact cycle product
/// `w_1 w_2 ... w_r` over any minus-continued-fraction cycle; the
/// fundamental unit itself is its square root when one exists in the order
/// (then `N(eps) = -1`), otherwise the product (then `N(eps) = +1`).
pub fn fundamental_unit(d: i64) -> Result<FieldData> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamentalDiscriminant);
    }
    let reds = reduced_irrationals(d);
    let w0 = reds
        .first()
        .ok_or(Error::DomainError("no reduced elements found"))?;
    let cycle = minus_cf(w0)?;

    // Product of (P_j + sqrt(D)) over the cycle, in Z[sqrt(D)], divided by
    // the product of the Q_j.
    let mut x = BigInt::one();
    let mut y = BigInt::zero();
    let mut qprod = BigInt::one();
    for m in cycle.members() {
        let p = BigInt::from(m.p());
        // (x + y sqrt(D)) (p + sqrt(D)) = (x p + y D) + (x + y p) sqrt(D)
        let nx = &x * &p + &y * BigInt::from(d);
        let ny = &x + &y * &p;
        x = nx;
        y = ny;
        qprod *= BigInt::from(m.q());
    }
    // eps_plus = (x + y sqrt(D)) / qprod, rewritten as (t + u sqrt(D))/2.
    let two = BigInt::from(2);
    let tq = &x * &two;
    let uq = &y * &two;
    let (t, tr) = tq.div_rem(&qprod);
    let (u, ur) = uq.div_rem(&qprod);
    if !tr.is_zero() || !ur.is_zero() {
        return Err(Error::DomainError("cycle product is not a unit of the order"));
    }
    // Sanity: N(eps_plus) = (t^2 - D u^2)/4 = +1.
    let norm4 = &t * &t - BigInt::from(d) * &u * &u;
    if norm4 != BigInt::from(4) {
        return Err(Error::DomainError("cycle product has unexpected norm"));
    }

    // Square root test: eps = (a + b sqrt(D))/2 with eps^2 = eps_plus needs
    // a^2 = t - 2 (norm -1 case) and b = u / a.
    let tm2 = &t - &two;
    let a = tm2.sqrt();
    if &a * &a == tm2 && !a.is_zero() {
        let (b, br) = u.div_rem(&a);
        if br.is_zero() {
            let norm4 = &a * &a - BigInt::from(d) * &b * &b;
            if norm4 == BigInt::from(-4) {
                let nm1 = -&a; // N(eps - 1) = N(eps) + 1 - tr(eps) = -a
                return Ok(FieldData {
                    d,
                    eps_t: a,
                    eps_u: b,
                    norm_eps: -1,
                    norm_eps_minus_1: nm1,
                });
            }
        }
    }
    let nm1 = &two - &t; // N(eps - 1) = 2 - tr(eps) when N(eps) = 1
    Ok(FieldData {
        d,
        eps_t: t,
        eps_u: u,
        norm_eps: 1,
        norm_eps_minus_1: nm1,
    })
}

/// All exactly reduced quadratic irrationals of discriminant `d`,
/// enumerated through the forms `[a, -B, c]` with `B^2 = d + 4ac` and
/// `(B - 2a)^2 < d`; the bound `(a-c)^2 + 2(a+c) <= d - 1` makes the search
/// box provably exhaustive.
fn reduced_irrationals(d: i64) -> Vec<QuadIrr> {
    let mut out = Vec::new();
    // (a-c)^2 + 2(a+c) <= d-1 solved for c gives |c - (a-1)| <= sqrt(d-4a),
    // so a ranges up to d/4.
    for a in 1..=d / 4 {
        let s = isqrt(d - 4 * a);
        let clo = (a - 1 - s).max(1);
        let chi = a - 1 + s;
        for c in clo..=chi {
            if (a - c) * (a - c) + 2 * (a + c) > d - 1 {
                continue;
            }
            let b2 = d + 4 * a * c;
            if is_square(b2) {
                let b = isqrt(b2);
                if (b - 2 * a) * (b - 2 * a) < d {
                    // w = (B + sqrt(d)) / (2a)
                    if let Ok(w) = QuadIrr::new(b, 2 * a, d) {
                        debug_assert!(w.is_reduced());
                        out.push(w);
                    }
                }
            }
        }
    }
    out.sort_by_key(|w| (w.q, w.p));
    out
}

/// All narrow class cycles of the field, in a deterministic canonical order
/// (shortest cycle first, then lexicographic digits).
pub fn narrow_classes(fd: &FieldData) -> Result<Vec<MinusCycle>> {
    let reds = reduced_irrationals(fd.d);
    let mut seen: Vec<QuadIrr> = Vec::new();
    let mut cycles: Vec<MinusCycle> = Vec::new();
    for w in &reds {
        if seen.contains(w) {
            continue;
        }
        let cyc = minus_cf(w)?;
        for m in cyc.members() {
            seen.push(*m);
        }
        cycles.push(cyc);
    }
    // Every enumerated reduced element must lie on some cycle.
    debug_assert_eq!(seen.len(), reds.len());
    cycles.sort_by(|a, b| {
        (a.len(), a.digits()).cmp(&(b.len(), b.digits()))
    });
    Ok(cycles)
}

/// The reduced numbers `w_1, ..., w_r` of a cycle (per-class view of
/// [`narrow_classes`]); `w_i` starts with digit `b_i`.
pub fn red_set(cycle: &MinusCycle) -> Vec<QuadIrr> {
    cycle.members().to_vec()
}

/// A normalized indefinite binary quadratic form, represented by its root
/// pair `(w, w')` with `w > w' > 0`:
/// `Q(x, y) = (y + x w)(y + x w') / (w - w')`, discriminant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndefForm {
    w: f64,
    wp: f64,
    exact: Option<(QuadIrr, QuadIrr)>,
}

impl IndefForm {
    /// Form from floating-point roots.
    pub fn from_roots(w: f64, wp: f64) -> Result<Self> {
        if !(w > wp && wp > 0.0) {
            return Err(Error::DomainError("need w > w' > 0"));
        }
        Ok(Self { w, wp, exact: None })
    }

    /// Form attached to a reduced quadratic irrational (roots `(w, w')`).
    pub fn from_quad_irr(w: &QuadIrr) -> Result<Self> {
        if !w.is_reduced() {
            return Err(Error::NotReduced);
        }
        Ok(Self {
            w: w.value(),
            wp: w.conj_value(),
            exact: Some((*w, w.conj())),
        })
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn wp(&self) -> f64 {
        self.wp
    }

    pub fn exact(&self) -> Option<&(QuadIrr, QuadIrr)> {
        self.exact.as_ref()
    }

    /// `Q(x, y) = (y + x w)(y + x w')/(w - w')`.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (y + x * self.w) * (y + x * self.wp) / (self.w - self.wp)
    }

    /// Coefficients `(a, b, c)` of `a x^2 + b x y + c y^2`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        let den = self.w - self.wp;
        (self.w * self.wp / den, (self.w + self.wp) / den, 1.0 / den)
    }

    /// `b^2 - 4 a c`; equals 1 by construction.
    pub fn discriminant(&self) -> f64 {
        let (a, b, c) = self.coefficients();
        b * b - 4.0 * a * c
    }
}

/// Forms attached to a list of reduced numbers (the class correspondence).
pub fn forms_of(reds: &[QuadIrr]) -> Result<Vec<IndefForm>> {
    reds.iter().map(IndefForm::from_quad_irr).collect()
}

/// Wide-sense reduced representatives `(Red_w(B), Red_w(B*))` extracted from
/// the plus-continued-fraction cycle attached to a narrow class.
///
/// The anchor is `x_1 = w_1 - 1` where `w_1` is the cycle member at a digit
/// `>= 3`; odd-indexed plus-cycle elements form the first set, even-indexed
/// the second. An odd plus period cannot be split and is reported as
/// [`Error::DegenerateCycle`].
pub fn wide_red_sets(cycle: &MinusCycle) -> Result<(Vec<QuadIrr>, Vec<QuadIrr>)> {
    let start = cycle
        .digits()
        .iter()
        .position(|&b| b >= 3)
        .ok_or(Error::DomainError("all-2 minus cycle is degenerate"))?;
    let w1 = cycle.members()[start];
    let x1 = w1.sub_int(1);
    if !x1.is_wide_reduced() {
        return Err(Error::DegenerateCycle);
    }
    let mut xs = Vec::new();
    let mut cur = x1;
    loop {
        xs.push(cur);
        let (_, next) = cur.plus_step();
        if next == x1 {
            break;
        }
        cur = next;
        if xs.len() > 10_000_000 {
            return Err(Error::NonConvergent);
        }
    }
    if xs.len() % 2 != 0 {
        return Err(Error::DegenerateCycle);
    }
    let class_b = xs.iter().step_by(2).copied().collect();
    let class_b_star = xs.iter().skip(1).step_by(2).copied().collect();
    Ok((class_b, class_b_star))
}

/// Locates the conjugate narrow class `B* = Theta B` among the enumerated
/// cycles: its minus cycle is the one through `1 + x_2`.
pub fn conjugate_class(fd: &FieldData, cycle: &MinusCycle) -> Result<MinusCycle> {
    let (_, star) = wide_red_sets(cycle)?;
    let x2 = star
        .first()
        .ok_or(Error::DegenerateCycle)?;
    let w_star = QuadIrr::new(x2.p() + x2.q(), x2.q(), fd.d)?;
    minus_cf(&w_star)
}

/// Exact rational twist `n/m` reduced to lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalTwist {
    pub num: i64,
    pub den: i64,
}

impl RationalTwist {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::NonRationalInput);
        }
        let g = num.gcd(&den);
        let s = den.signum();
        Ok(Self {
            num: s * num / g,
            den: s * den / g,
        })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Membership test of a rational twist pair `(alpha, beta)` in the set of
/// pairs with `N(eps - 1) * (alpha, beta)` integral.
pub fn in_set_s(alpha: &RationalTwist, beta: &RationalTwist, fd: &FieldData) -> bool {
    let n = &fd.norm_eps_minus_1;
    let a_ok = (n * BigInt::from(alpha.num)) % BigInt::from(alpha.den) == BigInt::zero();
    let b_ok = (n * BigInt::from(beta.num)) % BigInt::from(beta.den) == BigInt::zero();
    a_ok && b_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(p: i64, q: i64, d: i64) -> QuadIrr {
        QuadIrr::new(p, q, d).unwrap()
    }

    #[test]
    fn quad_irr_basics() {
        // 2 + sqrt(3) = (4 + sqrt(12)) / 2
        let w = qi(4, 2, 12);
        assert!((w.value() - (2.0 + 3f64.sqrt())).abs() < 1e-14);
        assert!(w.is_reduced());
        assert_eq!(w.floor(), 3);
        assert_eq!(w.ceil(), 4);
        let c = w.conj();
        assert!((c.value() - (2.0 - 3f64.sqrt())).abs() < 1e-14);
        // 1/w = 2 - sqrt(3) ... reciprocal of 2+sqrt(3)
        let r = w.recip();
        assert!((r.value() - 1.0 / w.value()).abs() < 1e-14);
    }

    #[test]
    fn minus_cycle_d12() {
        // 2 + sqrt(3): cycle ((4)), since 2+sqrt(3) = 4 - 1/(2+sqrt(3)).
        let w = qi(4, 2, 12);
        let cyc = minus_cf(&w).unwrap();
        assert_eq!(cyc.digits(), &[4]);
        assert_eq!(cyc.members(), &[w]);

        // (3+sqrt(3))/2 = (6 + sqrt(12))/4: cycle ((2,3)) canonically.
        let w = qi(6, 4, 12);
        let cyc = minus_cf(&w).unwrap();
        assert_eq!(cyc.digits(), &[2, 3]);
        // member with digit 2 is (3+sqrt(3))/3 = (6+sqrt(12))/6
        assert_eq!(cyc.members()[0], qi(6, 6, 12));
        assert_eq!(cyc.members()[1], qi(6, 4, 12));
    }

    #[test]
    fn minus_cycle_periodicity_exact() {
        // Iterating r steps returns the exact starting triple.
        for d in [5i64, 8, 12, 13, 17, 21, 24, 28] {
            let fd = fundamental_unit(d).unwrap();
            for cyc in narrow_classes(&fd).unwrap() {
                let w0 = cyc.members()[0];
                let mut cur = w0;
                for _ in 0..cyc.len() {
                    let (_, next) = cur.minus_step();
                    cur = next;
                }
                assert_eq!(cur, w0, "d={d}");
                // each w satisfies w = b - 1/w_next exactly: check numerically
                for (i, m) in cyc.members().iter().enumerate() {
                    let b = cyc.digits()[i];
                    let next = cyc.members()[(i + 1) % cyc.len()];
                    assert!((m.value() - (b as f64 - 1.0 / next.value())).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn units_small_discriminants() {
        // D = 12: eps = 2 + sqrt(3), N = +1, N(eps-1) = -2.
        let fd = fundamental_unit(12).unwrap();
        assert_eq!(fd.norm_eps(), 1);
        assert_eq!(fd.unit(), (&BigInt::from(4), &BigInt::from(1)));
        assert_eq!(fd.norm_eps_minus_1(), &BigInt::from(-2));

        // D = 5: eps = (1+sqrt(5))/2, N = -1.
        let fd = fundamental_unit(5).unwrap();
        assert_eq!(fd.norm_eps(), -1);
        assert_eq!(fd.unit(), (&BigInt::from(1), &BigInt::from(1)));

        // D = 8: eps = 1 + sqrt(2) = (2 + sqrt(8))/2, N = -1.
        let fd = fundamental_unit(8).unwrap();
        assert_eq!(fd.norm_eps(), -1);
        assert_eq!(fd.unit(), (&BigInt::from(2), &BigInt::from(1)));

        assert!(fundamental_unit(16).is_err());
        assert!(fundamental_unit(9).is_err());
        assert!(fundamental_unit(45).is_err()); // 45 = 9*5 not squarefree
    }

    #[test]
    fn pell_oracle_units() {
        // Independent oracle: smallest (a, b), b >= 1, with a^2 - D b^2 = +-4.
        for d in [5i64, 8, 12, 13, 17, 21, 24, 28, 29, 33] {
            let fd = fundamental_unit(d).unwrap();
            let mut found = None;
            'outer: for b in 1..100_000i64 {
                for &s in &[-4i64, 4] {
                    let a2 = d * b * b + s;
                    if a2 > 0 && is_square(a2) {
                        found = Some((isqrt(a2), b, s));
                        break 'outer;
                    }
                }
            }
            let (a, b, s) = found.unwrap();
            assert_eq!(fd.unit(), (&BigInt::from(a), &BigInt::from(b)), "d={d}");
            assert_eq!(fd.norm_eps() as i64 * 4, s, "d={d}");
        }
    }

    #[test]
    fn narrow_classes_d12_verbatim() {
        let fd = fundamental_unit(12).unwrap();
        let classes = narrow_classes(&fd).unwrap();
        assert_eq!(classes.len(), 2);
        // B0 = {2 + sqrt(3)}
        assert_eq!(classes[0].members(), &[qi(4, 2, 12)]);
        // B1 = {1 + 1/sqrt(3), (3+sqrt(3))/2} = {(6+sqrt(12))/6, (6+sqrt(12))/4}
        assert_eq!(classes[1].members(), &[qi(6, 6, 12), qi(6, 4, 12)]);
    }

    #[test]
    fn narrow_class_counts() {
        for (d, h) in [(5i64, 1usize), (8, 1), (12, 2), (13, 1), (17, 1), (21, 2)] {
            let fd = fundamental_unit(d).unwrap();
            let classes = narrow_classes(&fd).unwrap();
            assert_eq!(classes.len(), h, "d={d}");
        }
    }

    #[test]
    fn class_cycles_cover_all_reduced() {
        for d in [5i64, 8, 12, 13, 17, 21, 40, 44, 56, 61] {
            let fd = fundamental_unit(d).unwrap();
            let classes = narrow_classes(&fd).unwrap();
            let total: usize = classes.iter().map(|c| c.len()).sum();
            assert_eq!(total, reduced_irrationals(d).len(), "d={d}");
            for c in &classes {
                for m in c.members() {
                    assert!(m.is_reduced());
                }
            }
        }
    }

    #[test]
    fn forms_have_unit_discriminant() {
        let fd = fundamental_unit(12).unwrap();
        for cyc in narrow_classes(&fd).unwrap() {
            for f in forms_of(&red_set(&cyc)).unwrap() {
                assert!((f.discriminant() - 1.0).abs() < 1e-13);
                // Q(1, -w) = 0 in floating point.
                assert!(f.eval(1.0, -f.w()).abs() < 1e-13);
                assert!(f.eval(1.0, -f.wp()).abs() < 1e-13);
                // positive coefficients
                assert!(f.eval(1.0, 0.0) > 0.0);
                let (a, b, c) = f.coefficients();
                assert!(a > 0.0 && b > 0.0 && c > 0.0);
            }
        }
        // Explicit expansion for w = 2 + sqrt(3): Q(p, q) = (q^2+4pq+p^2)/(2 sqrt 3)
        let f = IndefForm::from_quad_irr(&qi(4, 2, 12)).unwrap();
        let s12 = 12f64.sqrt();
        for (p, q) in [(1.0, 0.0), (2.0, 3.0), (1.0, 5.0)] {
            let expect = (q * q + 4.0 * p * q + p * p) / s12;
            assert!((f.eval(p, q) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn wide_sets_d12() {
        let fd = fundamental_unit(12).unwrap();
        let classes = narrow_classes(&fd).unwrap();
        // B0 = ((4)): plus cycle (2,1): Red_w(B0) = {1+sqrt(3)},
        // Red_w(B0*) = {(1+sqrt(3))/2}.
        let (b, bs) = wide_red_sets(&classes[0]).unwrap();
        assert_eq!(b, alloc::vec![qi(2, 2, 12)]); // (2+sqrt(12))/2 = 1+sqrt(3)
        assert_eq!(bs, alloc::vec![qi(2, 4, 12)]); // (2+sqrt(12))/4
        // B1 = ((2,3)): anchored at digit 3: x1 = (1+sqrt(3))/2.
        let (b1, b1s) = wide_red_sets(&classes[1]).unwrap();
        assert_eq!(b1, alloc::vec![qi(2, 4, 12)]);
        assert_eq!(b1s, alloc::vec![qi(2, 2, 12)]);
        // Conjugate classes: B0* = B1 and B1* = B0.
        let c0 = conjugate_class(&fd, &classes[0]).unwrap();
        assert_eq!(&c0, &classes[1]);
        let c1 = conjugate_class(&fd, &classes[1]).unwrap();
        assert_eq!(&c1, &classes[0]);
    }

    #[test]
    fn wide_reduced_relations() {
        // w_1 = 1 + x_1, and the minus-cycle identity
        // w_j - w_j' = -1/w_{j+1} + 1/w_{j+1}'.
        for d in [12i64, 21, 24, 28, 44] {
            let fd = fundamental_unit(d).unwrap();
            for cyc in narrow_classes(&fd).unwrap() {
                let (b, _) = wide_red_sets(&cyc).unwrap();
                let x1 = b[0];
                assert!(x1.is_wide_reduced());
                for (i, m) in cyc.members().iter().enumerate() {
                    let next = cyc.members()[(i + 1) % cyc.len()];
                    let lhs = m.value() - m.conj_value();
                    let rhs = -1.0 / next.value() + 1.0 / next.conj_value();
                    assert!((lhs - rhs).abs() < 1e-12, "d={d}");
                }
                // plus-cycle identity x_i - x_i' = 1/x_{i+1} - 1/x_{i+1}'
                let (mut all, second) = wide_red_sets(&cyc).unwrap();
                for (j, x) in second.iter().enumerate() {
                    all.insert(2 * j + 1, *x);
                }
                for (i, x) in all.iter().enumerate() {
                    let next = all[(i + 1) % all.len()];
                    let lhs = x.value() - x.conj_value();
                    let rhs = 1.0 / next.value() - 1.0 / next.conj_value();
                    assert!((lhs - rhs).abs() < 1e-12, "d={d}");
                }
            }
        }
    }

    #[test]
    fn set_s_membership() {
        let fd = fundamental_unit(12).unwrap();
        let half = RationalTwist::new(1, 2).unwrap();
        let third = RationalTwist::new(1, 3).unwrap();
        let zero = RationalTwist::new(0, 1).unwrap();
        assert!(in_set_s(&half, &half, &fd)); // -2 * (1/2, 1/2) integral
        assert!(!in_set_s(&third, &half, &fd));
        assert!(in_set_s(&zero, &zero, &fd));
    }

    #[test]
    fn search_box_stable_under_enlargement() {
        // Doubling the search bound must not find new reduced elements.
        for d in [12i64, 21, 40] {
            let base = reduced_irrationals(d);
            let mut wide = Vec::new();
            let bound = 2 * d;
            for a in 1..=bound {
                for c in 1..=bound {
                    if (a - c) * (a - c) + 2 * (a + c) > 2 * (d - 1) {
                        continue;
                    }
                    let b2 = d + 4 * a * c;
                    if is_square(b2) {
                        let b = isqrt(b2);
                        if (b - 2 * a) * (b - 2 * a) < d {
                            if let Ok(w) = QuadIrr::new(b, 2 * a, d) {
                                if w.is_reduced() {
                                    wide.push(w);
                                }
                            }
                        }
                    }
                }
            }
            wide.sort_by_key(|w| (w.q, w.p));
            wide.dedup();
            assert_eq!(base, wide, "d={d}");
        }
    }
}
