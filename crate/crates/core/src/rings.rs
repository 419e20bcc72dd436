//! Cubic rings as explicit multiplication tables on the basis `[1, α, β]`.
//!
//! The table attached to the form `(a, b, c, d)` is
//! `α² = -ac - bα + aβ`, `αβ = -ad`, `β² = -bd - dα + cβ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, is_prime};
use crate::error::{Error, Result};
use crate::forms::BinaryCubicForm;

/// Sign of the chosen generator of the top exterior power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicRing {
    pub form: BinaryCubicForm,
    pub orientation: Orientation,
}

/// Coordinates `(x0, x1, x2)` of `x0 + x1 α + x2 β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement(pub [i128; 3]);

impl RingElement {
    pub const ONE: RingElement = RingElement([1, 0, 0]);
    pub const ALPHA: RingElement = RingElement([0, 1, 0]);
    pub const BETA: RingElement = RingElement([0, 0, 1]);
    pub const ZERO: RingElement = RingElement([0, 0, 0]);

    pub fn new(x0: i128, x1: i128, x2: i128) -> Self {
        RingElement([x0, x1, x2])
    }

    pub fn add(&self, o: &Self) -> Self {
        RingElement([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn sub(&self, o: &Self) -> Self {
        RingElement([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }

    pub fn scale(&self, k: i128) -> Self {
        RingElement(self.0.map(|x| x * k))
    }
}

/// The five splitting types of a prime in a cubic algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SplittingType {
    /// `111`
    TotallySplit,
    /// `12`
    PartiallySplit,
    /// `3`
    Inert,
    /// `1²1`
    PartiallyRamified,
    /// `1³`
    TotallyRamified,
}

impl SplittingType {
    pub const ALL: [SplittingType; 5] = [
        SplittingType::TotallySplit,
        SplittingType::PartiallySplit,
        SplittingType::Inert,
        SplittingType::PartiallyRamified,
        SplittingType::TotallyRamified,
    ];

    /// `(s1, s2)`: subrings of index `p` and `p²` in a maximal ring.
    pub fn seeds(self) -> (i64, i64) {
        match self {
            SplittingType::TotallySplit => (3, 4),
            SplittingType::PartiallySplit => (1, 2),
            SplittingType::Inert => (0, 1),
            SplittingType::PartiallyRamified => (2, 2),
            SplittingType::TotallyRamified => (1, 1),
        }
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplittingType::TotallySplit => "111",
            SplittingType::PartiallySplit => "12",
            SplittingType::Inert => "3",
            SplittingType::PartiallyRamified => "1^2 1",
            SplittingType::TotallyRamified => "1^3",
        })
    }
}

pub fn ring_from_form(form: BinaryCubicForm, orientation: Orientation) -> CubicRing {
    CubicRing { form, orientation }
}

impl CubicRing {
    pub fn new(form: BinaryCubicForm) -> Self {
        ring_from_form(form, Orientation::Positive)
    }

    /// The Levi form with respect to the chosen orientation.
    pub fn oriented_form(&self) -> BinaryCubicForm {
        self.form.scale(self.orientation.sign())
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let f = &self.form;
        let (a, b, c, d) = (f.a as i128, f.b as i128, f.c as i128, f.d as i128);
        let [x0, x1, x2] = x.0;
        let [y0, y1, y2] = y.0;
        let aa = x1 * y1; // coefficient of α²
        let ab = x1 * y2 + x2 * y1; // coefficient of αβ
        let bb = x2 * y2; // coefficient of β²
        RingElement([
            x0 * y0 - a * c * aa - a * d * ab - b * d * bb,
            x0 * y1 + x1 * y0 - b * aa - d * bb,
            x0 * y2 + x2 * y0 + a * aa + c * bb,
        ])
    }

    /// Matrix of multiplication by `x`; row `i` is `x * e_i`.
    pub fn mult_matrix(&self, x: &RingElement) -> [[i128; 3]; 3] {
        [
            self.mul(x, &RingElement::ONE).0,
            self.mul(x, &RingElement::ALPHA).0,
            self.mul(x, &RingElement::BETA).0,
        ]
    }

    pub fn trace(&self, x: &RingElement) -> i128 {
        let [x0, x1, x2] = x.0;
        3 * x0 - self.form.b as i128 * x1 + self.form.c as i128 * x2
    }

    pub fn norm(&self, x: &RingElement) -> i128 {
        det3(&self.mult_matrix(x))
    }

    /// Discriminant as the determinant of the trace pairing.
    pub fn discriminant(&self) -> i128 {
        let basis = [RingElement::ONE, RingElement::ALPHA, RingElement::BETA];
        let mut m = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.trace(&self.mul(&basis[i], &basis[j]));
            }
        }
        det3(&m)
    }

    pub fn is_associative(&self) -> bool {
        let basis = [RingElement::ONE, RingElement::ALPHA, RingElement::BETA];
        basis.iter().all(|x| {
            basis.iter().all(|y| {
                self.mul(x, y) == self.mul(y, x)
                    && basis
                        .iter()
                        .all(|z| self.mul(&self.mul(x, y), z) == self.mul(x, &self.mul(y, z)))
            })
        })
    }

    pub fn is_zmat(&self) -> bool {
        is_zmat_ring(self)
    }
}

pub fn trace(ring: &CubicRing, x: &RingElement) -> i128 {
    ring.trace(x)
}

/// Every trace is divisible by 3; by linearity the basis suffices.
pub fn is_zmat_ring(ring: &CubicRing) -> bool {
    [RingElement::ONE, RingElement::ALPHA, RingElement::BETA]
        .iter()
        .all(|e| ring.trace(e) % 3 == 0)
}

pub(crate) fn det3(m: &[[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

// ---------------------------------------------------------------------------
// Full-rank sublattices of Z^3.

/// Hermite normal form of a full-rank lattice in Z^3, pivots taken in the
/// column order `order`. Row `i` has zeros in `order[..i]` and a positive
/// pivot at `order[i]`; entries after a pivot are reduced modulo later pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Lattice {
    order: [usize; 3],
    rows: [[i128; 3]; 3],
}

impl Lattice {
    pub(crate) fn new(gens: &[[i128; 3]], order: [usize; 3]) -> Option<Self> {
        let mut rows: Vec<[i128; 3]> = gens.iter().copied().filter(|g| *g != [0; 3]).collect();
        let mut out = [[0i128; 3]; 3];
        for (i, &col) in order.iter().enumerate() {
            // gcd-combine every remaining row into one pivot row for `col`
            loop {
                let nonzero: Vec<usize> = (0..rows.len()).filter(|&k| rows[k][col] != 0).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let pivot = *nonzero.iter().min_by_key(|&&k| rows[k][col].abs()).unwrap();
                for &k in &nonzero {
                    if k != pivot {
                        let q = rows[k][col].div_euclid(rows[pivot][col]);
                        let p = rows[pivot];
                        for j in 0..3 {
                            rows[k][j] -= q * p[j];
                        }
                    }
                }
            }
            let idx = (0..rows.len()).find(|&k| rows[k][col] != 0)?;
            let mut row = rows.swap_remove(idx);
            if row[col] < 0 {
                row = row.map(|x| -x);
            }
            out[i] = row;
            rows.retain(|r| *r != [0; 3]);
        }
        // reduce earlier rows against later pivots
        for i in (0..3).rev() {
            let col = order[i];
            for k in 0..i {
                let q = out[k][col].div_euclid(out[i][col]);
                for j in 0..3 {
                    out[k][j] -= q * out[i][j];
                }
            }
        }
        Some(Lattice { order, rows: out })
    }

    pub(crate) fn rows(&self) -> &[[i128; 3]; 3] {
        &self.rows
    }

    pub(crate) fn index(&self) -> i128 {
        (0..3).map(|i| self.rows[i][self.order[i]]).product()
    }

    pub(crate) fn contains(&self, x: &[i128; 3]) -> bool {
        let mut v = *x;
        for i in 0..3 {
            let col = self.order[i];
            let piv = self.rows[i][col];
            if v[col] % piv != 0 {
                return false;
            }
            let k = v[col] / piv;
            for j in 0..3 {
                v[j] -= k * self.rows[i][j];
            }
        }
        v == [0; 3]
    }
}

// ---------------------------------------------------------------------------
// Subrings.

/// A finite-index subring of a cubic ring, with a normal basis `1, u, v`
/// (`uv ∈ Z`) and the ring it defines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subring {
    pub basis: [RingElement; 3],
    pub index: i64,
    pub ring: CubicRing,
}

/// The subring spanned by `gens` together with 1, if that lattice is closed
/// under multiplication and of full rank.
pub fn subring_from_generators(ring: &CubicRing, gens: &[RingElement]) -> Result<Subring> {
    let mut all: Vec<[i128; 3]> = gens.iter().map(|g| g.0).collect();
    all.push(RingElement::ONE.0);
    let lat = Lattice::new(&all, [1, 2, 0]).ok_or(Error::NotASubring("lattice is not of full rank"))?;
    let rows = lat.rows();
    if rows[2] != [1, 0, 0] {
        return Err(Error::NotASubring("lattice meets Z in a proper subgroup"));
    }
    let basis = [RingElement::ONE, RingElement(rows[0]), RingElement(rows[1])];
    for x in &basis {
        for y in &basis {
            if !lat.contains(&ring.mul(x, y).0) {
                return Err(Error::NotASubring("not closed under multiplication"));
            }
        }
    }
    subring_from_basis(ring, basis[1], basis[2])
}

/// Reads off the form of the subring `Z + Zu + Zv` (assumed closed).
fn subring_from_basis(ring: &CubicRing, u: RingElement, v: RingElement) -> Result<Subring> {
    let solve = |x: &RingElement, u: &RingElement, v: &RingElement| -> Result<[i128; 3]> {
        let det = u.0[1] * v.0[2] - u.0[2] * v.0[1];
        let n1 = x.0[1] * v.0[2] - x.0[2] * v.0[1];
        let n2 = u.0[1] * x.0[2] - u.0[2] * x.0[1];
        if det == 0 || n1 % det != 0 || n2 % det != 0 {
            return Err(Error::NotASubring("product outside the lattice"));
        }
        let (k1, k2) = (n1 / det, n2 / det);
        Ok([x.0[0] - k1 * u.0[0] - k2 * v.0[0], k1, k2])
    };
    let uv = solve(&ring.mul(&u, &v), &u, &v)?;
    // uv = t + p u + q v: shift to u - q, v - p so the product is rational
    let u2 = u.sub(&RingElement::ONE.scale(uv[2]));
    let mut v2 = v.sub(&RingElement::ONE.scale(uv[1]));
    let det = u2.0[1] * v2.0[2] - u2.0[2] * v2.0[1];
    if det < 0 {
        v2 = v2.scale(-1);
    }
    if det == 0 {
        return Err(Error::NotASubring("degenerate basis"));
    }
    let sq_u = solve(&ring.mul(&u2, &u2), &u2, &v2)?;
    let sq_v = solve(&ring.mul(&v2, &v2), &u2, &v2)?;
    let prod = solve(&ring.mul(&u2, &v2), &u2, &v2)?;
    let a = sq_u[2];
    let b = -sq_u[1];
    let c = sq_v[2];
    let d = -sq_v[1];
    if sq_u[0] != -a * c || sq_v[0] != -b * d || prod != [-a * d, 0, 0] {
        return Err(Error::NotASubring("table is not of Levi shape"));
    }
    let narrow = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("subring form"));
    let form = BinaryCubicForm::new(narrow(a)?, narrow(b)?, narrow(c)?, narrow(d)?);
    Ok(Subring {
        basis: [RingElement::ONE, u2, v2],
        index: narrow(det.abs())?,
        ring: ring_from_form(form, ring.orientation),
    })
}

/// `{x ∈ C : x³ ∈ Z + 3C}`, the largest subring all of whose traces are
/// divisible by 3.
pub fn max_zmat_subring(ring: &CubicRing) -> Result<Subring> {
    if ring.form.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let mut gens = vec![RingElement::ALPHA.scale(3), RingElement::BETA.scale(3)];
    for x1 in 0..3 {
        for x2 in 0..3 {
            let x = RingElement::new(0, x1, x2);
            let cube = ring.mul(&ring.mul(&x, &x), &x);
            if cube.0[1] % 3 == 0 && cube.0[2] % 3 == 0 {
                gens.push(x);
            }
        }
    }
    subring_from_generators(ring, &gens)
}

/// Roots of the form modulo `p` in `P¹(F_p)` with multiplicities; `[1:0]` is
/// reported as `None`. The form must not vanish identically mod `p`.
fn roots_mod_p(form: &BinaryCubicForm, p: i64) -> Vec<(Option<i64>, u32)> {
    let m = |x: i64| x.rem_euclid(p);
    let coeffs = [m(form.a), m(form.b), m(form.c), m(form.d)];
    let mut out = Vec::new();
    // multiplicity at infinity: number of vanishing leading coefficients
    let inf = coeffs.iter().take_while(|&&x| x == 0).count() as u32;
    if inf > 0 {
        out.push((None, inf));
    }
    // remaining polynomial in x (dehomogenized at y = 1), high degree first
    let poly: Vec<i64> = coeffs[inf as usize..].to_vec();
    for r in 0..p {
        let mut q = poly.clone();
        let mut mult = 0;
        while q.len() > 1 {
            // synthetic division by (x - r)
            let mut next = Vec::with_capacity(q.len() - 1);
            let mut acc = 0;
            for &co in &q[..q.len() - 1] {
                acc = m(acc * r + co);
                next.push(acc);
            }
            let rem = m(acc * r + q[q.len() - 1]);
            if rem != 0 {
                break;
            }
            mult += 1;
            q = next;
        }
        if mult > 0 {
            out.push((Some(r), mult));
        }
    }
    out
}

/// Number of roots of the form in `P¹(F_p)`, ignoring multiplicity.
pub fn root_count_mod_p(form: &BinaryCubicForm, p: i64) -> usize {
    roots_mod_p(form, p).len()
}

fn check_prime(p: i64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Root criterion: the ring is non-maximal at `p` iff `p` divides the form or,
/// after moving some root mod `p` to `[1:0]`, `p | b` and `p² | a`.
pub fn is_maximal_at_p(form: &BinaryCubicForm, p: i64) -> Result<bool> {
    check_prime(p)?;
    if form.is_degenerate() {
        return Err(Error::Degenerate);
    }
    if form.coeffs().iter().all(|x| x % p == 0) {
        return Ok(false);
    }
    for (root, _) in roots_mod_p(form, p) {
        let moved = match root {
            None => *form,
            Some(x) => form.substitute([x, -1, 1, 0])?,
        };
        if moved.b % p == 0 && moved.a % (p * p) == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Superring oracle: is there a ring strictly between `C` and `(1/p)C`?
/// Lattices `L` with `pC ⊆ L ⊆ C` give candidate rings `L/p`, which are
/// closed iff `L·L ⊆ pL`.
pub fn has_superring_at_p(form: &BinaryCubicForm, p: i64) -> Result<bool> {
    check_prime(p)?;
    let ring = CubicRing::new(*form);
    let p128 = p as i128;
    let base = [[p128, 0, 0], [0, p128, 0], [0, 0, p128]];
    let vectors: Vec<[i128; 3]> = (0..p128 * p128 * p128)
        .map(|k| [k % p128, (k / p128) % p128, k / (p128 * p128)])
        .collect();
    for (i, v) in vectors.iter().enumerate() {
        for w in &vectors[i..] {
            let gens = [base[0], base[1], base[2], *v, *w];
            let lat = Lattice::new(&gens, [0, 1, 2]).expect("full rank");
            if lat.index() == p128 * p128 * p128 {
                continue;
            }
            if lattice_is_p_closed(&ring, &lat, p128) {
                return Ok(true);
            }
        }
    }
    // the whole of (1/p)C
    Ok(form.coeffs().iter().all(|x| x % p == 0))
}

fn lattice_is_p_closed(ring: &CubicRing, lat: &Lattice, p: i128) -> bool {
    let rows = lat.rows();
    for x in rows {
        for y in rows {
            let prod = ring.mul(&RingElement(*x), &RingElement(*y)).0;
            if prod.iter().any(|c| c % p != 0) {
                return false;
            }
            if !lat.contains(&prod.map(|c| c / p)) {
                return false;
            }
        }
    }
    true
}

/// Splitting type of a ring maximal at `p`, read from the factorization of
/// the form modulo `p`.
pub fn splitting_type(form: &BinaryCubicForm, p: i64) -> Result<SplittingType> {
    if !is_maximal_at_p(form, p)? {
        return Err(Error::NotMaximal(p));
    }
    let mut mults: Vec<u32> = roots_mod_p(form, p).into_iter().map(|(_, m)| m).collect();
    mults.sort_unstable();
    Ok(match mults.as_slice() {
        [1, 1, 1] => SplittingType::TotallySplit,
        [1] => SplittingType::PartiallySplit,
        [] => SplittingType::Inert,
        [1, 2] => SplittingType::PartiallyRamified,
        [3] => SplittingType::TotallyRamified,
        other => unreachable!("impossible root pattern {other:?}"),
    })
}

/// Largest index accepted by [`subrings_of_index`].
pub const SUBRING_INDEX_BUDGET: i64 = 20_000;

/// All subrings of index `n`: the lattices `Z + Z(h11 α + h12 β) + Z h22 β`
/// with `h11 h22 = n`, `0 <= h12 < h22`, that are closed under multiplication.
pub fn subrings_of_index(ring: &CubicRing, n: i64) -> Result<Vec<Subring>> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("index {n} must be positive")));
    }
    if n > SUBRING_INDEX_BUDGET {
        return Err(Error::BudgetExceeded { what: "subring index", requested: n, limit: SUBRING_INDEX_BUDGET });
    }
    let mut out = Vec::new();
    for h11 in divisors(n) {
        let h22 = n / h11;
        for h12 in 0..h22 {
            let u = RingElement::new(0, h11 as i128, h12 as i128);
            let v = RingElement::new(0, 0, h22 as i128);
            if let Ok(s) = subring_from_generators(ring, &[u, v]) {
                out.push(s);
            }
        }
    }
    Ok(out)
}
