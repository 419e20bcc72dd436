//! Ideals of quadratic orders in the triangular form `g⟨a, b + ξ⟩`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::binform::QuadraticForm;
use super::{QuadElt, QuadOrder};
use crate::arith::{divisors, is_square};
use crate::error::{Error, Result};

/// The lattice `g·(aZ + (b + ξ)Z)` with `0 <= b < a`; an ideal when
/// `a | N(b + ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadIdeal {
    pub disc: i64,
    pub g: i64,
    pub a: i64,
    pub b: i64,
}

/// Largest norm accepted by [`ideals_of_norm`].
pub const IDEAL_NORM_BUDGET: i64 = 10_000_000;

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("ideal coordinates"))
}

impl QuadIdeal {
    pub fn unit(disc: i64) -> Self {
        QuadIdeal { disc, g: 1, a: 1, b: 0 }
    }

    pub fn order(&self) -> QuadOrder {
        QuadOrder::new(self.disc).expect("ideal of a valid order")
    }

    pub fn norm(&self) -> i64 {
        self.g * self.g * self.a
    }

    pub fn basis(&self) -> [QuadElt; 2] {
        let (g, a, b) = (self.g as i128, self.a as i128, self.b as i128);
        [QuadElt::new(g * a, 0), QuadElt::new(g * b, g)]
    }

    /// The ideal spanned by `gens` as a lattice. Fails unless the lattice
    /// has full rank and is stable under multiplication by `ξ`.
    pub fn from_generators(order: &QuadOrder, gens: &[QuadElt]) -> Result<Self> {
        let mut rows: Vec<(i128, i128)> = gens.iter().map(|e| (e.x, e.y)).filter(|&r| r != (0, 0)).collect();
        // eliminate the ξ-coordinate down to a single row
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].1 != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i].1.abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let q = rows[i].1.div_euclid(rows[piv].1);
                    rows[i] = (rows[i].0 - q * rows[piv].0, rows[i].1 - q * rows[piv].1);
                }
            }
        }
        let top = rows.iter().position(|r| r.1 != 0).ok_or(Error::NotAnIdeal)?;
        let (mut bb, mut cc) = rows.swap_remove(top);
        let aa = rows.iter().fold(0i128, |acc, r| acc.gcd(&r.0));
        if aa == 0 {
            return Err(Error::NotAnIdeal);
        }
        if cc < 0 {
            (bb, cc) = (-bb, -cc);
        }
        bb = bb.rem_euclid(aa);
        if aa % cc != 0 || bb % cc != 0 {
            return Err(Error::NotAnIdeal);
        }
        let ideal = QuadIdeal { disc: order.disc, g: narrow(cc)?, a: narrow(aa / cc)?, b: narrow(bb / cc)? };
        let nb = order.norm(&QuadElt::new(ideal.b as i128, 1));
        if nb % ideal.a as i128 != 0 {
            return Err(Error::NotAnIdeal);
        }
        Ok(ideal)
    }

    pub fn principal(order: &QuadOrder, x: &QuadElt) -> Result<Self> {
        QuadIdeal::from_generators(order, &[*x, order.mul(x, &QuadElt::XI)])
    }

    pub fn contains(&self, e: &QuadElt) -> bool {
        let [u, v] = self.basis();
        if e.y % v.y != 0 {
            return false;
        }
        let k = e.y / v.y;
        (e.x - k * v.x) % u.x == 0
    }

    pub fn is_subset_of(&self, other: &QuadIdeal) -> bool {
        self.basis().iter().all(|e| other.contains(e))
    }

    pub fn mul(&self, other: &QuadIdeal) -> Result<Self> {
        if self.disc != other.disc {
            return Err(Error::InvalidArgument("ideals of different orders".into()));
        }
        let o = self.order();
        let mut gens = Vec::with_capacity(4);
        for x in self.basis() {
            for y in other.basis() {
                gens.push(o.mul(&x, &y));
            }
        }
        QuadIdeal::from_generators(&o, &gens)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = QuadIdeal::unit(self.disc);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn conj(&self) -> Self {
        let o = self.order();
        let gens: Vec<QuadElt> = self.basis().iter().map(|e| o.conj(e)).collect();
        QuadIdeal::from_generators(&o, &gens).expect("conjugate of an ideal is an ideal")
    }

    /// `I Ī = N(I) O`.
    pub fn is_invertible(&self) -> bool {
        let n = self.norm();
        self.mul(&self.conj()).is_ok_and(|p| p == QuadIdeal { disc: self.disc, g: n, a: 1, b: 0 })
    }

    /// The quadratic form `N(x a + y (b + ξ)) / a` of the primitive part.
    pub fn attached_form(&self) -> QuadraticForm {
        let o = self.order();
        let a = self.a as i128;
        let nb = o.norm(&QuadElt::new(self.b as i128, 1));
        QuadraticForm::new(a, 2 * self.b as i128 + o.r as i128, nb / a)
    }

    /// `I·O'` for the order `O'` of discriminant `target_disc`, which must
    /// contain this order.
    pub fn extend(&self, target_disc: i64) -> Result<Self> {
        if self.disc % target_disc != 0 || !is_square(self.disc / target_disc) {
            return Err(Error::InvalidArgument(format!("{target_disc} is not an overorder of {}", self.disc)));
        }
        let k = crate::arith::exact_sqrt((self.disc / target_disc) as i128).unwrap() as i64;
        let t = QuadOrder::new(target_disc)?;
        let mut gens = Vec::with_capacity(4);
        for e in self.basis() {
            let e = t.from_suborder(k, &e);
            gens.push(e);
            gens.push(t.mul(&e, &QuadElt::XI));
        }
        QuadIdeal::from_generators(&t, &gens)
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}@{}", self.g, self.a, self.b, self.disc)
    }
}

impl FromStr for QuadIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad ideal {s:?}"));
        let (coords, disc) = s.split_once('@').ok_or_else(bad)?;
        let disc: i64 = disc.trim().parse().map_err(|_| bad())?;
        let v: Vec<i64> = coords
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let &[g, a, b] = v.as_slice() else { return Err(bad()) };
        if g < 1 || a < 1 || b < 0 || b >= a {
            return Err(bad());
        }
        let order = QuadOrder::new(disc)?;
        let ideal = QuadIdeal { disc, g, a, b };
        let check = QuadIdeal::from_generators(&order, &ideal.basis())?;
        if check != ideal {
            return Err(Error::NotAnIdeal);
        }
        Ok(ideal)
    }
}

/// All ideals of norm `n`, optionally only the invertible ones.
pub fn ideals_of_norm(disc: i64, n: i64, invertible_only: bool) -> Result<Vec<QuadIdeal>> {
    let o = QuadOrder::new(disc)?;
    if n < 1 {
        return Err(Error::InvalidArgument(format!("norm {n} must be positive")));
    }
    if n > IDEAL_NORM_BUDGET {
        return Err(Error::BudgetExceeded { what: "ideal norm", requested: n, limit: IDEAL_NORM_BUDGET });
    }
    let mut out = Vec::new();
    for g in divisors(n) {
        if n % (g * g) != 0 {
            continue;
        }
        let a = n / (g * g);
        for b in 0..a {
            if o.norm(&QuadElt::new(b as i128, 1)) % a as i128 == 0 {
                let ideal = QuadIdeal { disc, g, a, b };
                if !invertible_only || ideal.is_invertible() {
                    out.push(ideal);
                }
            }
        }
    }
    Ok(out)
}

/// Whether an invertible ideal is principal.
pub fn is_principal(ideal: &QuadIdeal) -> Result<bool> {
    if !ideal.is_invertible() {
        return Err(Error::NotInvertible);
    }
    if is_square(ideal.disc) {
        return Ok(split_generator(ideal).is_some());
    }
    Ok(ideal.attached_form().represents_unit())
}

/// A generator `x + yξ` of a principal invertible ideal, or `None` if the
/// ideal is not principal.
pub fn principal_witness(ideal: &QuadIdeal) -> Result<Option<(BigInt, BigInt)>> {
    if !ideal.is_invertible() {
        return Err(Error::NotInvertible);
    }
    if is_square(ideal.disc) {
        return Ok(split_generator(ideal).map(|e| (BigInt::from(e.x), BigInt::from(e.y))));
    }
    let Some((x, y)) = ideal.attached_form().unit_representation() else { return Ok(None) };
    let (g, a, b) = (BigInt::from(ideal.g), BigInt::from(ideal.a), BigInt::from(ideal.b));
    Ok(Some((&g * (&x * &a + &y * &b), g * y)))
}

/// Generator search for split orders: a generator has image `(u, v)` in
/// `Z × Z` with `|uv| = N(I)`.
fn split_generator(ideal: &QuadIdeal) -> Option<QuadElt> {
    let o = ideal.order();
    let n = ideal.norm() as i128;
    for u in divisors(ideal.norm()) {
        let u = u as i128;
        for (su, sv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            if let Some(e) = o.from_split(su * u, sv * (n / u)) {
                if ideal.contains(&e) {
                    return Some(e);
                }
            }
        }
    }
    None
}
