//! Integral binary cubic forms under the twisted GL2(Z)-action.
//!
//! A form `(a, b, c, d)` stands for `a x^3 + b x^2 y + c x y^2 + d y^3`. The
//! group acts by `(g . f)(x, y) = f(px + ry, qx + sy) / det g` for
//! `g = [[p, q], [r, s]]`, so `act(g2, act(g1, f)) == act(g2 * g1, f)`.
//!
//! Orbit representatives are chosen through reduction. For positive
//! discriminant the Hessian is a positive definite quadratic form and is
//! Gauss-reduced. For negative discriminant the Hessian is indefinite, so we
//! reduce the complex root `w` of `f(x, 1)` into the closed fundamental domain
//! `|Re w| <= 1/2, |w| >= 1`; every comparison is done exactly by locating the
//! unique real root with sign evaluations at rationals.
//!
//! Two reduced forms in one orbit differ by a matrix with entries in
//! `{-1, 0, 1}`, and so does every element of the stabilizer of a reduced
//! form. The canonical representative is the lexicographically least reduced
//! form reachable through those matrices.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::gcd3;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BinaryCubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

/// A 2x2 integer matrix with determinant +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
}

/// Hessian covariant `t x^2 + s xy + r y^2` together with its content.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hessian {
    pub t: i64,
    pub s: i64,
    pub r: i64,
    pub content: i64,
}

fn narrow(v: i128, what: &'static str) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(what))
}

impl UnimodularMatrix {
    /// The matrix `[[p, q], [r, s]]`; rejects determinants other than ±1.
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        let det = p as i128 * s as i128 - q as i128 * r as i128;
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular(det.clamp(i64::MIN as i128, i64::MAX as i128) as i64));
        }
        Ok(UnimodularMatrix { p, q, r, s })
    }

    pub const IDENTITY: UnimodularMatrix = UnimodularMatrix { p: 1, q: 0, r: 0, s: 1 };
    pub const SWAP: UnimodularMatrix = UnimodularMatrix { p: 0, q: 1, r: 1, s: 0 };

    pub fn entries(&self) -> [i64; 4] {
        [self.p, self.q, self.r, self.s]
    }

    pub fn det(&self) -> i64 {
        self.p * self.s - self.q * self.r
    }

    pub fn transpose(&self) -> Self {
        UnimodularMatrix { p: self.p, q: self.r, r: self.q, s: self.s }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let m = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(u, v)| u.checked_add(v))
                .ok_or(Error::Overflow("matrix product"))
        };
        Ok(UnimodularMatrix {
            p: m(self.p, o.p, self.q, o.r)?,
            q: m(self.p, o.q, self.q, o.s)?,
            r: m(self.r, o.p, self.s, o.r)?,
            s: m(self.r, o.q, self.s, o.s)?,
        })
    }
}

impl BinaryCubicForm {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    pub fn coeffs(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    fn wide(&self) -> [i128; 4] {
        [self.a as i128, self.b as i128, self.c as i128, self.d as i128]
    }

    /// Discriminant `b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 + 18abcd`, in 128 bits.
    pub fn disc_wide(&self) -> i128 {
        let [a, b, c, d] = self.wide();
        b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d
    }

    pub fn disc(&self) -> i64 {
        i64::try_from(self.disc_wide()).expect("discriminant exceeds 64 bits")
    }

    pub fn is_zmat(&self) -> bool {
        self.b % 3 == 0 && self.c % 3 == 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs() == [0; 4]
    }

    pub fn content(&self) -> i64 {
        gcd3(gcd3(self.a, self.b, self.c), self.d, 0)
    }

    pub fn neg(&self) -> Self {
        BinaryCubicForm::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn scale(&self, k: i64) -> Self {
        BinaryCubicForm::new(k * self.a, k * self.b, k * self.c, k * self.d)
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        let [a, b, c, d] = self.wide();
        a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y
    }

    pub fn hessian(&self) -> Hessian {
        let [a, b, c, d] = self.wide();
        let t = narrow(b * b - 3 * a * c, "hessian").expect("hessian overflow");
        let s = narrow(b * c - 9 * a * d, "hessian").expect("hessian overflow");
        let r = narrow(c * c - 3 * b * d, "hessian").expect("hessian overflow");
        Hessian { t, s, r, content: gcd3(t, s, r) }
    }

    /// `f(m00 x + m01 y, m10 x + m11 y)` without any determinant twist.
    pub(crate) fn substitute(&self, m: [i64; 4]) -> Result<Self> {
        let [m00, m01, m10, m11] = m.map(|v| v as i128);
        let [a, b, c, d] = self.wide();
        // X = m00 x + m01 y, Y = m10 x + m11 y
        let (u, v, w, z) = (m00, m01, m10, m11);
        let x3 = [u * u * u, 3 * u * u * v, 3 * u * v * v, v * v * v];
        let x2y = [
            u * u * w,
            u * u * z + 2 * u * v * w,
            v * v * w + 2 * u * v * z,
            v * v * z,
        ];
        let xy2 = [
            u * w * w,
            v * w * w + 2 * u * w * z,
            u * z * z + 2 * v * w * z,
            v * z * z,
        ];
        let y3 = [w * w * w, 3 * w * w * z, 3 * w * z * z, z * z * z];
        let mut out = [0i64; 4];
        for i in 0..4 {
            let coef = a
                .checked_mul(x3[i])
                .and_then(|t| t.checked_add(b.checked_mul(x2y[i])?))
                .and_then(|t| t.checked_add(c.checked_mul(xy2[i])?))
                .and_then(|t| t.checked_add(d.checked_mul(y3[i])?))
                .ok_or(Error::Overflow("form substitution"))?;
            out[i] = narrow(coef, "form substitution")?;
        }
        Ok(BinaryCubicForm::new(out[0], out[1], out[2], out[3]))
    }

    /// Substitution followed by division by the determinant of `m`.
    pub(crate) fn twisted_substitute(&self, m: [i64; 4]) -> Result<Self> {
        let f = self.substitute(m)?;
        Ok(if m[0] * m[3] - m[1] * m[2] == -1 { f.neg() } else { f })
    }

    /// The twisted action `(1/det g) f(px + ry, qx + sy)`.
    pub fn act(&self, g: &UnimodularMatrix) -> Result<Self> {
        self.twisted_substitute([g.p, g.r, g.q, g.s])
    }

    pub fn is_degenerate(&self) -> bool {
        self.disc_wide() == 0
    }
}

pub fn disc(form: &BinaryCubicForm) -> i64 {
    form.disc()
}

pub fn act(g: &UnimodularMatrix, form: &BinaryCubicForm) -> Result<BinaryCubicForm> {
    form.act(g)
}

pub fn is_zmat(form: &BinaryCubicForm) -> bool {
    form.is_zmat()
}

pub fn hessian(form: &BinaryCubicForm) -> Hessian {
    form.hessian()
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for BinaryCubicForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad form {s:?}: {e}")))?;
        match parts.as_slice() {
            &[a, b, c, d] => Ok(BinaryCubicForm::new(a, b, c, d)),
            _ => Err(Error::InvalidArgument(format!("form {s:?} needs four coefficients"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Exact location of the real root (negative discriminant).

/// Sign of `a n^3 + b n^2 m + c n m^2 + d m^3` compared against `theta = n/m`:
/// returns the ordering of the unique real root `theta` of `f(x, 1)` against
/// the rational `n/m` (with `m > 0`). Requires `a != 0` and one real root.
fn cmp_root(f: &BinaryCubicForm, n: i128, m: i128) -> Ordering {
    debug_assert!(m > 0 && f.a != 0);
    let v = f.eval(n, m);
    if v == 0 {
        Ordering::Equal
    } else if (v > 0) == (f.a > 0) {
        // f has the sign of a to the right of its only real root
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Floor of the real root of `f(x, 1)` (negative discriminant, `a != 0`).
fn floor_root(f: &BinaryCubicForm) -> i128 {
    let below = |k: i128| cmp_root(f, k, 1) != Ordering::Less; // root >= k
    let (mut lo, mut hi): (i128, i128);
    if below(0) {
        lo = 0;
        hi = 1;
        while below(hi) {
            lo = hi;
            hi *= 2;
        }
    } else {
        hi = 0;
        lo = -1;
        while !below(lo) {
            hi = lo;
            lo *= 2;
        }
    }
    // invariant: root >= lo, root < hi
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Is `lo_num/den <= theta <= hi_num/den`?  (`den > 0`.)
fn root_between(f: &BinaryCubicForm, lo_num: i128, hi_num: i128, den: i128) -> bool {
    cmp_root(f, lo_num, den) != Ordering::Less && cmp_root(f, hi_num, den) != Ordering::Greater
}

/// Where the complex root `w` of a negative-discriminant form sits relative to
/// the strip `|Re w - n| <= 1/2`.
fn re_omega_within(f: &BinaryCubicForm, n: i128) -> bool {
    let [a, b, c, _] = f.wide();
    if a == 0 {
        // w is a root of b x^2 + c x + d: Re w = -c / 2b; |(-c - 2nb)| <= |b|
        return (c + 2 * n * b).abs() <= b.abs();
    }
    // Re w = (-b/a - theta)/2, so |Re w - n| <= 1/2 iff
    // -b/a - 2n - 1 <= theta <= -b/a - 2n + 1.
    let (num, den) = if a > 0 { (-b, a) } else { (b, -a) };
    let centre = num - 2 * n * den;
    root_between(f, centre - den, centre + den, den)
}

/// Ordering of `|w|^2` against 1.
fn abs_omega_cmp_one(f: &BinaryCubicForm) -> Ordering {
    let [a, b, c, d] = f.wide();
    if a == 0 {
        // |w|^2 = d / b
        return if b > 0 { d.cmp(&b) } else { (-d).cmp(&(-b)) };
    }
    if d == 0 {
        // theta = 0, w is a root of a x^2 + b x + c: |w|^2 = c / a
        return if a > 0 { c.cmp(&a) } else { (-c).cmp(&(-a)) };
    }
    // |w|^2 = -d / (a theta); compare -d/a with theta.
    let (num, den) = if a > 0 { (-d, a) } else { (d, -a) };
    let theta_positive = cmp_root(f, 0, 1) == Ordering::Greater;
    let rel = cmp_root(f, num, den); // theta vs -d/a
    // theta > 0: |w|^2 >= 1 iff -d/a >= theta; theta < 0: iff -d/a <= theta
    let ord = if theta_positive { rel } else { rel.reverse() };
    // ord compares theta against -d/a; |w|^2 vs 1 is the reverse
    ord.reverse()
}

/// Nearest integer to `Re w` (negative discriminant).
fn round_re_omega(f: &BinaryCubicForm) -> i128 {
    let [a, b, c, _] = f.wide();
    if a == 0 {
        // Re w = -c / 2b
        let (num, den) = if b > 0 { (-c, 2 * b) } else { (c, -2 * b) };
        return (2 * num + den).div_euclid(2 * den);
    }
    let fl = floor_root(f);
    let (num, den) = if a > 0 { (-b, a) } else { (b, -a) };
    // Re w lies in ((-b/a - fl - 1)/2, (-b/a - fl)/2]
    let guess = (num - fl * den).div_euclid(2 * den);
    for n in [guess, guess + 1, guess - 1, guess + 2, guess - 2] {
        if re_omega_within(f, n) {
            return n;
        }
    }
    unreachable!("nearest integer to Re w not bracketed")
}

// ---------------------------------------------------------------------------
// Reduction.

/// Substitution matrices (row-major `[m00, m01, m10, m11]`) with entries in
/// `{-radius..=radius}` and determinant ±1.
pub(crate) fn small_matrices(radius: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for m00 in -radius..=radius {
        for m01 in -radius..=radius {
            for m10 in -radius..=radius {
                for m11 in -radius..=radius {
                    let det = m00 * m11 - m01 * m10;
                    if det == 1 || det == -1 {
                        out.push([m00, m01, m10, m11]);
                    }
                }
            }
        }
    }
    out
}

fn unit_matrices() -> &'static [[i64; 4]] {
    static CELL: OnceLock<Vec<[i64; 4]>> = OnceLock::new();
    CELL.get_or_init(|| small_matrices(1))
}

/// Is the form in the reduction domain? Rejects nothing: degenerate forms are
/// simply never reduced.
pub(crate) fn is_reduced(f: &BinaryCubicForm) -> bool {
    let disc = f.disc_wide();
    match disc.cmp(&0) {
        Ordering::Equal => false,
        Ordering::Greater => {
            let h = f.hessian();
            h.s.abs() <= h.t && h.t <= h.r
        }
        Ordering::Less => {
            (f.a != 0 || f.b != 0)
                && re_omega_within(f, 0)
                && abs_omega_cmp_one(f) != Ordering::Less
        }
    }
}

const TRANSLATE_STEP_LIMIT: usize = 100_000;

/// Moves a nondegenerate form into the reduction domain.
pub(crate) fn reduce(f: &BinaryCubicForm) -> Result<BinaryCubicForm> {
    let disc = f.disc_wide();
    if disc == 0 {
        return Err(Error::Degenerate);
    }
    let mut f = *f;
    for _ in 0..TRANSLATE_STEP_LIMIT {
        if disc > 0 {
            let h = f.hessian();
            let (p, q, r) = (h.t as i128, h.s as i128, h.r as i128);
            debug_assert!(p > 0, "positive discriminant forms have definite Hessian");
            if q > p || q <= -p {
                let n = (p - q).div_euclid(2 * p);
                f = f.substitute([1, n as i64, 0, 1])?;
                continue;
            }
            if p > r {
                f = f.substitute([0, -1, 1, 0])?;
                continue;
            }
            return Ok(f);
        } else {
            let n = round_re_omega(&f);
            if n != 0 {
                f = f.substitute([1, i64::try_from(n).map_err(|_| Error::Overflow("reduce"))?, 0, 1])?;
            }
            if abs_omega_cmp_one(&f) == Ordering::Less {
                f = f.substitute([0, -1, 1, 0])?;
                continue;
            }
            return Ok(f);
        }
    }
    Err(Error::Overflow("reduction did not terminate"))
}

/// Least reduced form among `M . f` for the unit-entry matrices `M`; `f` must
/// already be reduced.
pub(crate) fn least_reduced_neighbour(f: &BinaryCubicForm, radius: i64) -> BinaryCubicForm {
    let owned;
    let mats: &[[i64; 4]] = if radius == 1 {
        unit_matrices()
    } else {
        owned = small_matrices(radius);
        &owned
    };
    mats.iter()
        .filter_map(|m| f.twisted_substitute(*m).ok())
        .filter(is_reduced)
        .min()
        .unwrap_or(*f)
}

/// Canonical orbit representative; identical for two forms iff they are
/// GL2(Z)-equivalent.
pub fn canonicalize(form: &BinaryCubicForm) -> Result<BinaryCubicForm> {
    let f = reduce(form)?;
    Ok(least_reduced_neighbour(&f, 1))
}

/// Like [`canonicalize`] but scanning matrices with entries up to `radius`;
/// used to confirm that radius 1 already sees every reduced orbit member.
pub fn canonicalize_with_radius(form: &BinaryCubicForm, radius: i64) -> Result<BinaryCubicForm> {
    let f = reduce(form)?;
    Ok(least_reduced_neighbour(&f, radius))
}

/// All stabilizing matrices, in the twisted action, of a form.
pub fn stabilizer(form: &BinaryCubicForm) -> Result<Vec<UnimodularMatrix>> {
    stabilizer_with_radius(form, 1)
}

/// Stabilizer computed by scanning matrices with entries up to `radius`
/// around a reduced representative, conjugated back to the input's frame.
pub fn stabilizer_with_radius(form: &BinaryCubicForm, radius: i64) -> Result<Vec<UnimodularMatrix>> {
    // Track the reducing substitution so stabilizers can be conjugated back.
    let (reduced, m) = reduce_tracking(form)?;
    let mut out = Vec::new();
    for s in small_matrices(radius) {
        if reduced.twisted_substitute(s)? == reduced {
            // f = reduced o M^{-1}; substitution S fixes reduced, so
            // M S M^{-1} fixes f as a substitution.
            let conj = mat_mul(&mat_mul(&m, &s)?, &mat_inv(&m))?;
            // substitution matrix N corresponds to g = N^T
            out.push(UnimodularMatrix::new(conj[0], conj[2], conj[1], conj[3])?);
        }
    }
    Ok(out)
}

/// `|Aut C|` of the ring attached to the form.
pub fn stabilizer_order(form: &BinaryCubicForm) -> Result<usize> {
    let f = reduce(form)?;
    Ok(stabilizer_order_reduced(&f))
}

pub(crate) fn stabilizer_order_reduced(f: &BinaryCubicForm) -> usize {
    unit_matrices()
        .iter()
        .filter(|m| f.twisted_substitute(**m).ok().as_ref() == Some(f))
        .count()
}

fn mat_mul(x: &[i64; 4], y: &[i64; 4]) -> Result<[i64; 4]> {
    let a = UnimodularMatrix { p: x[0], q: x[1], r: x[2], s: x[3] };
    let b = UnimodularMatrix { p: y[0], q: y[1], r: y[2], s: y[3] };
    let c = a.mul(&b)?;
    Ok([c.p, c.q, c.r, c.s])
}

fn mat_inv(x: &[i64; 4]) -> [i64; 4] {
    let det = x[0] * x[3] - x[1] * x[2];
    [x[3] * det, -x[1] * det, -x[2] * det, x[0] * det]
}

/// Reduction that also returns the accumulated substitution matrix `M` with
/// `reduced = f o M` (untwisted).
fn reduce_tracking(f: &BinaryCubicForm) -> Result<(BinaryCubicForm, [i64; 4])> {
    let disc = f.disc_wide();
    if disc == 0 {
        return Err(Error::Degenerate);
    }
    let mut g = *f;
    let mut m = [1, 0, 0, 1];
    for _ in 0..TRANSLATE_STEP_LIMIT {
        let step: Option<[i64; 4]> = if disc > 0 {
            let h = g.hessian();
            let (p, q, r) = (h.t as i128, h.s as i128, h.r as i128);
            if q > p || q <= -p {
                let n = (p - q).div_euclid(2 * p);
                Some([1, n as i64, 0, 1])
            } else if p > r {
                Some([0, -1, 1, 0])
            } else {
                None
            }
        } else {
            let n = round_re_omega(&g);
            if n != 0 {
                Some([1, n as i64, 0, 1])
            } else if abs_omega_cmp_one(&g) == Ordering::Less {
                Some([0, -1, 1, 0])
            } else {
                None
            }
        };
        match step {
            Some(s) => {
                g = g.substitute(s)?;
                m = mat_mul(&m, &s)?;
            }
            None => return Ok((g, m)),
        }
    }
    Err(Error::Overflow("reduction did not terminate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form(a: i64, b: i64, c: i64, d: i64) -> BinaryCubicForm {
        BinaryCubicForm::new(a, b, c, d)
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(form(1, 0, 0, -1).disc(), -27);
        assert_eq!(form(0, 0, 0, 0).disc(), 0);
        assert_eq!(form(0, 1, 1, 0).disc(), 1);
    }

    #[test]
    fn swap_action() {
        let f = form(2, -3, 5, 7);
        assert_eq!(f.act(&UnimodularMatrix::IDENTITY).unwrap(), f);
        assert_eq!(f.act(&UnimodularMatrix::SWAP).unwrap(), form(-7, -5, 3, -2));
    }

    #[test]
    fn rejects_non_unimodular() {
        assert_eq!(UnimodularMatrix::new(2, 0, 0, 1), Err(Error::NotUnimodular(2)));
    }

    #[test]
    fn zmat_examples() {
        assert!(form(1, 3, -3, 2).is_zmat());
        assert!(!form(1, 1, 0, 0).is_zmat());
    }

    #[test]
    fn hessian_examples() {
        let h = form(1, 0, 0, -1).hessian();
        assert_eq!((h.t, h.s, h.r, h.content), (0, 9, 0, 9));
        let h = form(0, 0, 0, 0).hessian();
        assert_eq!((h.t, h.s, h.r), (0, 0, 0));
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(stabilizer_order(&form(0, 1, 1, 0)).unwrap(), 6);
        assert_eq!(stabilizer_order(&form(1, 0, 0, -1)).unwrap(), 2);
        // x^3 - 2 generates a non-Galois cubic field
        assert_eq!(stabilizer_order(&form(1, 0, 0, -2)).unwrap(), 1);
        // x^3 - 3x + 1 is cyclic: three automorphisms
        assert_eq!(stabilizer_order(&form(1, 0, -3, 1)).unwrap(), 3);
        assert_eq!(stabilizer_order(&form(0, 0, 0, 0)), Err(Error::Degenerate));
    }

    #[test]
    fn swap_fixes_cube_roots_of_unity_orbit() {
        let f = form(1, 0, 0, -1);
        let g = f.act(&UnimodularMatrix::SWAP).unwrap();
        assert_eq!(g, f);
        assert_eq!(canonicalize(&f).unwrap(), canonicalize(&g).unwrap());
    }

    #[test]
    fn degenerate_rejected() {
        assert_eq!(canonicalize(&form(1, 2, 1, 0)), Err(Error::Degenerate));
    }

    #[test]
    fn parse_and_print() {
        let f: BinaryCubicForm = " 1, -2,3 ,4".parse().unwrap();
        assert_eq!(f, form(1, -2, 3, 4));
        assert_eq!(f.to_string(), "1,-2,3,4");
        assert!("1,2,3".parse::<BinaryCubicForm>().is_err());
    }

    #[test]
    fn stabilizer_is_a_group() {
        for f in [form(0, 1, 1, 0), form(1, 0, 0, -1), form(1, 0, -3, 1), form(3, 1, 4, -7)] {
            let g = f.act(&UnimodularMatrix::new(2, 3, 1, 2).unwrap()).unwrap();
            let stab = stabilizer(&g).unwrap();
            assert!(stab.contains(&UnimodularMatrix::IDENTITY));
            assert_eq!(6 % stab.len(), 0);
            for x in &stab {
                assert_eq!(g.act(x).unwrap(), g);
                for y in &stab {
                    assert!(stab.contains(&x.mul(y).unwrap()));
                }
            }
        }
    }

    fn arb_matrix() -> impl Strategy<Value = UnimodularMatrix> {
        // products of elementary generators keep the determinant ±1
        prop::collection::vec(0u8..4, 0..8).prop_map(|steps| {
            let mut m = UnimodularMatrix::IDENTITY;
            for s in steps {
                let e = match s {
                    0 => UnimodularMatrix::new(1, 1, 0, 1),
                    1 => UnimodularMatrix::new(1, 0, -1, 1),
                    2 => UnimodularMatrix::new(0, 1, 1, 0),
                    _ => UnimodularMatrix::new(-1, 0, 0, 1),
                }
                .unwrap();
                m = m.mul(&e).unwrap();
            }
            m
        })
    }

    fn arb_form() -> impl Strategy<Value = BinaryCubicForm> {
        (-9i64..=9, -9i64..=9, -9i64..=9, -9i64..=9).prop_map(|(a, b, c, d)| form(a, b, c, d))
    }

    proptest! {
        #[test]
        fn action_law(f in arb_form(), g1 in arb_matrix(), g2 in arb_matrix()) {
            let lhs = f.act(&g1).unwrap().act(&g2).unwrap();
            let rhs = f.act(&g2.mul(&g1).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hessian_is_covariant(f in arb_form(), g in arb_matrix()) {
            let h = f.hessian();
            let h2 = f.act(&g).unwrap().hessian();
            // H(g.f)(x, y) = H(f)(px + ry, qx + sy)
            let [p, q, r, s] = g.entries();
            let (t, u, v) = (h.t, h.s, h.r);
            let t2 = t * p * p + u * p * q + v * q * q;
            let u2 = 2 * t * p * r + u * (p * s + q * r) + 2 * v * q * s;
            let v2 = t * r * r + u * r * s + v * s * s;
            prop_assert_eq!((h2.t, h2.s, h2.r), (t2, u2, v2));
            prop_assert_eq!(h2.content, h.content);
        }

        #[test]
        fn canonical_is_orbit_invariant(f in arb_form(), g in arb_matrix()) {
            prop_assume!(f.disc() != 0);
            let c = canonicalize(&f).unwrap();
            prop_assert_eq!(canonicalize(&f.act(&g).unwrap()).unwrap(), c);
            prop_assert_eq!(canonicalize(&c).unwrap(), c);
            prop_assert_eq!(c.disc(), f.disc());
            prop_assert!(is_reduced(&c));
        }

        #[test]
        fn radius_one_is_enough(f in arb_form()) {
            prop_assume!(f.disc() != 0);
            prop_assert_eq!(canonicalize_with_radius(&f, 2).unwrap(), canonicalize(&f).unwrap());
            prop_assert_eq!(
                stabilizer_with_radius(&f, 2).unwrap().len(),
                stabilizer_order(&f).unwrap()
            );
        }

        #[test]
        fn stabilizer_order_divides_six(f in arb_form(), g in arb_matrix()) {
            prop_assume!(f.disc() != 0);
            let n = stabilizer_order(&f).unwrap();
            prop_assert!(matches!(n, 1 | 2 | 3 | 6));
            prop_assert_eq!(stabilizer_order(&f.act(&g).unwrap()).unwrap(), n);
        }
    }
}
