//! Small-integer number theory used throughout the crate.

use num_integer::{Integer, Roots};
use num_rational::Ratio;

/// Exact rational used for weighted counts.
pub type Rational = Ratio<i64>;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    gcd(gcd(a, b), c)
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Floor of the square root; `None` for negative input.
pub fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    Some(n.sqrt())
}

/// Exact square root if `n` is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    let r = isqrt(n)?;
    (r * r == n).then_some(r)
}

pub fn is_square(n: i64) -> bool {
    exact_sqrt(n as i128).is_some()
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization of |n| as (prime, exponent) pairs in increasing order.
pub fn factorize(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.unsigned_abs() as i64;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of |n| in increasing order.
pub fn divisors(n: i64) -> Vec<i64> {
    let mut out = vec![1];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: i64, p: i64) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn is_cubefree(n: i64) -> bool {
    factorize(n).iter().all(|&(_, e)| e < 3)
}

pub fn mod_pow(base: i64, mut exp: u64, m: i64) -> i64 {
    let m128 = m as i128;
    let mut b = (base as i128).rem_euclid(m128);
    let mut acc: i128 = 1 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as i64
}

/// Kronecker symbol (d | p) for a prime p.
pub fn kronecker_prime(d: i64, p: i64) -> i32 {
    debug_assert!(is_prime(p));
    if p == 2 {
        if d % 2 == 0 {
            return 0;
        }
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    let r = d.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    if mod_pow(r, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

/// Membership in (4Z \ 0) ∪ (1 + 4Z).
pub fn is_disc(d: i64) -> bool {
    d != 0 && matches!(d.rem_euclid(4), 0 | 1)
}

/// Writes a discriminant as `d0 * f^2` with `d0` fundamental and `f >= 1`.
pub fn fundamental_part(d: i64) -> (i64, i64) {
    debug_assert!(is_disc(d));
    let mut f = 1;
    for (p, e) in factorize(d) {
        f *= p.pow(e / 2);
    }
    // Largest f with f^2 | d and d/f^2 still a discriminant.
    loop {
        if d % (f * f) == 0 && is_disc(d / (f * f)) {
            return (d / (f * f), f);
        }
        // only the power of 2 can spoil the congruence
        f /= 2;
    }
}

pub fn is_fundamental(d: i64) -> bool {
    is_disc(d) && fundamental_part(d).1 == 1
}

/// `p^k` for small exponents, checked.
pub fn checked_pow(p: i64, k: u32) -> Option<i64> {
    p.checked_pow(k)
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

/// Serializes a rational as "num/den" in lowest terms with positive denominator.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses "num/den" or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => Some(Ratio::from_integer(s.trim().parse().ok()?)),
    }
}
