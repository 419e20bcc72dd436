//! Quadratic orders `O_Δ = Z[ξ]` with `ξ² = rξ - n0`, `r = Δ mod 2`,
//! `n0 = (r² - Δ)/4`. One code path covers maximal and non-maximal, real,
//! imaginary and split (square `Δ`) orders.

mod binform;
mod ideal;
mod pic;

pub use binform::QuadraticForm;
pub use ideal::{ideals_of_norm, is_principal, principal_witness, QuadIdeal};
pub use pic::{conductor_of_char, mu3_characters, order_change_map, pic_3_torsion, picard_group, Mu3Char, PicCache, PicGroup};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, fundamental_part, is_disc, is_square, isqrt};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadOrder {
    pub disc: i64,
    /// Fundamental discriminant with `disc = d0 * conductor²`.
    pub d0: i64,
    pub conductor: i64,
    /// Trace of `ξ`.
    pub r: i64,
    /// Norm of `ξ`.
    pub n0: i64,
}

/// `x + yξ` in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadElt {
    pub x: i128,
    pub y: i128,
}

impl QuadElt {
    pub const ONE: QuadElt = QuadElt { x: 1, y: 0 };
    pub const XI: QuadElt = QuadElt { x: 0, y: 1 };

    pub fn new(x: i128, y: i128) -> Self {
        QuadElt { x, y }
    }

    pub fn scale(&self, k: i128) -> Self {
        QuadElt { x: self.x * k, y: self.y * k }
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadElt { x: self.x + o.x, y: self.y + o.y }
    }
}

pub fn order(disc: i64) -> Result<QuadOrder> {
    QuadOrder::new(disc)
}

impl QuadOrder {
    pub fn new(disc: i64) -> Result<Self> {
        if !is_disc(disc) {
            return Err(Error::NotADiscriminant(disc));
        }
        let (d0, conductor) = fundamental_part(disc);
        let r = disc.rem_euclid(2);
        Ok(QuadOrder { disc, d0, conductor, r, n0: (r * r - disc) / 4 })
    }

    pub fn is_square(&self) -> bool {
        is_square(self.disc)
    }

    pub fn mul(&self, p: &QuadElt, q: &QuadElt) -> QuadElt {
        let (r, n0) = (self.r as i128, self.n0 as i128);
        QuadElt { x: p.x * q.x - n0 * p.y * q.y, y: p.x * q.y + p.y * q.x + r * p.y * q.y }
    }

    pub fn norm(&self, p: &QuadElt) -> i128 {
        p.x * p.x + self.r as i128 * p.x * p.y + self.n0 as i128 * p.y * p.y
    }

    pub fn trace(&self, p: &QuadElt) -> i128 {
        2 * p.x + self.r as i128 * p.y
    }

    pub fn conj(&self, p: &QuadElt) -> QuadElt {
        QuadElt { x: p.x + self.r as i128 * p.y, y: -p.y }
    }

    /// For square `Δ = m²`, the two ring maps to `Z` sending `ξ` to
    /// `(r ± m)/2`.
    pub fn split_embeddings(&self, p: &QuadElt) -> Option<(i128, i128)> {
        let m = exact_sqrt(self.disc as i128)?;
        let r = self.r as i128;
        Some((p.x + p.y * (r + m) / 2, p.x + p.y * (r - m) / 2))
    }

    /// Inverse of [`split_embeddings`](Self::split_embeddings) when the pair
    /// lies in the order.
    pub fn from_split(&self, u: i128, v: i128) -> Option<QuadElt> {
        let m = exact_sqrt(self.disc as i128)?;
        if (u - v) % m != 0 {
            return None;
        }
        let y = (u - v) / m;
        Some(QuadElt { x: u - y * (self.r as i128 + m) / 2, y })
    }

    /// Coordinates in this order of an element of the suborder of
    /// discriminant `disc * k²`.
    pub fn from_suborder(&self, k: i64, p: &QuadElt) -> QuadElt {
        let sub_r = (self.disc * k * k).rem_euclid(2) as i128;
        let k = k as i128;
        // ξ_sub = k ξ + (r_sub - k r) / 2
        let shift = (sub_r - k * self.r as i128) / 2;
        QuadElt { x: p.x + p.y * shift, y: p.y * k }
    }

    /// Coordinates of `x + y√Δ`, using `√Δ = 2ξ - r`.
    pub fn from_sqrt_coords(&self, x: i128, y: i128) -> QuadElt {
        QuadElt { x: x - y * self.r as i128, y: 2 * y }
    }
}

/// Fundamental unit `ε > 1` of a real order: the unit `x + yξ` with least
/// positive `y`, located among the convergents of `(√Δ - r)/2`.
pub fn fundamental_unit(disc: i64) -> Result<(BigInt, BigInt)> {
    let o = QuadOrder::new(disc)?;
    if disc < 0 || o.is_square() {
        return Err(Error::InvalidArgument(format!("{disc} is not a positive non-square")));
    }
    let s = isqrt(disc as i128).unwrap();
    // complete quotient (P + √D) / Q
    let (mut p, mut q): (i128, i128) = (-(o.r as i128), 2);
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let (r, n0) = (BigInt::from(o.r), BigInt::from(o.n0));
    for _ in 0..1_000_000 {
        let a = if q > 0 { (p + s).div_euclid(q) } else { (-p - s - 1).div_euclid(-q) };
        let h = BigInt::from(a) * &h1 + &h2;
        let k = BigInt::from(a) * &k1 + &k2;
        let norm = &h * &h + &r * &h * &k + &n0 * &k * &k;
        if k.is_positive() && norm.abs().is_one() {
            return Ok((h, k));
        }
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
        let p_next = a * q - p;
        q = (disc as i128 - p_next * p_next) / q;
        p = p_next;
    }
    Err(Error::Overflow("fundamental unit search"))
}

/// `|O^× / (O^×)³|`.
pub fn unit_cube_classes(disc: i64) -> i64 {
    if disc == -3 || (disc > 0 && !is_square(disc)) {
        3
    } else {
        1
    }
}
