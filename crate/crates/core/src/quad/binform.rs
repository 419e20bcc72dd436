//! Binary quadratic forms `ax² + bxy + cy²`, used to decide principality.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::isqrt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

/// Substitution matrix `[[p, q], [r, s]]`: `(x, y) ↦ (px + qy, rx + sy)`.
type Mat = [[BigInt; 2]; 2];

fn identity() -> Mat {
    [[BigInt::one(), BigInt::from(0)], [BigInt::from(0), BigInt::one()]]
}

fn mat_mul(m: &Mat, n: [[i128; 2]; 2]) -> Mat {
    let e = |i: usize, j: usize| &m[i][0] * BigInt::from(n[0][j]) + &m[i][1] * BigInt::from(n[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

const STEP_LIMIT: usize = 1_000_000;

impl QuadraticForm {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// `f(x + ty, y)`.
    fn translate(&self, t: i128) -> Self {
        QuadraticForm { a: self.a, b: self.b + 2 * self.a * t, c: self.a * t * t + self.b * t + self.c }
    }

    /// Gauss reduction of a positive definite form, returning the reduced
    /// form and the substitution reaching it.
    pub fn reduce_definite(&self) -> (Self, Mat) {
        debug_assert!(self.disc() < 0 && self.a > 0);
        let mut f = *self;
        let mut m = identity();
        loop {
            // b into (-a, a]
            let t = (f.a - f.b).div_euclid(2 * f.a);
            if t != 0 {
                f = f.translate(t);
                m = mat_mul(&m, [[1, t], [0, 1]]);
            }
            if f.a > f.c {
                // (x, y) ↦ (-y, x)
                f = QuadraticForm { a: f.c, b: -f.b, c: f.a };
                m = mat_mul(&m, [[0, -1], [1, 0]]);
                continue;
            }
            if f.a == f.c && f.b < 0 {
                f = QuadraticForm { a: f.c, b: -f.b, c: f.a };
                m = mat_mul(&m, [[0, -1], [1, 0]]);
            }
            return (f, m);
        }
    }

    /// Reduced in the sense of indefinite forms: `0 < b < √D` and
    /// `√D - b < 2|a| < √D + b`.
    fn is_reduced_indefinite(&self, s: i128) -> bool {
        let a2 = 2 * self.a.abs();
        self.b > 0 && self.b <= s && a2 + self.b > s && a2 - self.b <= s
    }

    /// One step of the reduction operator for indefinite forms and its
    /// substitution `(x, y) ↦ (-y, x + ty)`.
    fn rho(&self, s: i128) -> (Self, i128) {
        let c = self.c;
        let c2 = 2 * c.abs();
        let bstar = if c.abs() > s {
            // b* ≡ -b mod 2|c| in (-|c|, |c|]
            let lo = -c.abs() + 1;
            lo + (-self.b - lo).rem_euclid(c2)
        } else {
            // b* in (√D - 2|c|, √D)
            let lo = s + 1 - c2;
            lo + (-self.b - lo).rem_euclid(c2)
        };
        let t = (bstar + self.b) / (2 * c);
        let disc = self.disc();
        (QuadraticForm { a: c, b: bstar, c: (bstar * bstar - disc) / (4 * c) }, t)
    }

    /// A primitive solution of `f(x, y) = ±1`, if one exists. The form must
    /// be primitive with non-square discriminant.
    pub fn unit_representation(&self) -> Option<(BigInt, BigInt)> {
        self.unit_search(true).map(|(x, y)| (x.unwrap(), y.unwrap()))
    }

    /// Whether `f` represents `±1`.
    pub fn represents_unit(&self) -> bool {
        self.unit_search(false).is_some()
    }

    #[allow(clippy::type_complexity)]
    fn unit_search(&self, track: bool) -> Option<(Option<BigInt>, Option<BigInt>)> {
        let disc = self.disc();
        let found = |m: &Mat| {
            if track {
                (Some(m[0][0].clone()), Some(m[1][0].clone()))
            } else {
                (None, None)
            }
        };
        let mut m = identity();
        if disc < 0 {
            let (f, sub) = if self.a > 0 {
                self.reduce_definite()
            } else {
                let (f, sub) = QuadraticForm::new(-self.a, -self.b, -self.c).reduce_definite();
                (QuadraticForm::new(-f.a, -f.b, -f.c), sub)
            };
            return (f.a.abs() == 1).then(|| found(&sub));
        }
        let s = isqrt(disc).unwrap();
        debug_assert!(s * s != disc);
        let mut f = *self;
        let mut steps = 0;
        while !f.is_reduced_indefinite(s) {
            if f.a.abs() == 1 {
                return Some(found(&m));
            }
            let (g, t) = f.rho(s);
            if track {
                m = mat_mul(&m, [[0, -1], [1, t]]);
            }
            f = g;
            steps += 1;
            assert!(steps < STEP_LIMIT, "indefinite reduction did not terminate");
        }
        let start = f;
        loop {
            if f.a.abs() == 1 {
                return Some(found(&m));
            }
            let (g, t) = f.rho(s);
            if track {
                m = mat_mul(&m, [[0, -1], [1, t]]);
            }
            f = g;
            if f == start {
                return None;
            }
            steps += 1;
            assert!(steps < STEP_LIMIT, "reduced cycle did not close");
        }
    }
}
