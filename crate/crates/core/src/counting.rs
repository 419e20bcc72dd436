//! Orbit enumeration by discriminant, the weighted counts `h` and `ĥ`, and
//! local subring counts.
//!
//! Orbits of a fixed discriminant are enumerated directly inside the
//! reduction domain. For `D > 0` we run over reduced Hessians `(P, Q, R)` with
//! `4PR - Q² = 3D` and solve for the form; for `D < 0` the position of the
//! roots bounds `a`, `b`, `c` and `d` is the integer root of a quadratic.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, factorize, is_disc, isqrt, ratio, Rational};
use crate::error::{Error, Result};
use crate::forms::{canonicalize, is_reduced, least_reduced_neighbour, stabilizer_order_reduced, BinaryCubicForm};
use crate::rings::{splitting_type, SplittingType};

/// Largest `|disc|` enumerated unless configured otherwise.
pub const DEFAULT_DISC_BUDGET: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_disc: i64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_disc: DEFAULT_DISC_BUDGET }
    }
}

impl Budget {
    pub fn new(max_disc: i64) -> Self {
        Budget { max_disc }
    }

    fn check(&self, disc: i64) -> Result<()> {
        let requested = disc.checked_abs().unwrap_or(i64::MAX);
        if requested > self.max_disc {
            return Err(Error::BudgetExceeded { what: "|disc|", requested, limit: self.max_disc });
        }
        Ok(())
    }
}

fn fourth_root(x: f64) -> i64 {
    x.max(0.0).powf(0.25).floor() as i64
}

/// Reduced forms of discriminant `disc`, possibly several per orbit.
fn reduced_forms_of_disc(disc: i64, zmat_only: bool) -> Vec<BinaryCubicForm> {
    let mut out = Vec::new();
    let keep = |f: BinaryCubicForm, out: &mut Vec<BinaryCubicForm>| {
        if f.disc_wide() == disc as i128 && (!zmat_only || f.is_zmat()) && is_reduced(&f) {
            out.push(f);
        }
    };
    let d = disc as i128;
    if disc > 0 {
        let pmax = isqrt(d).unwrap();
        for p in 1..=pmax {
            if zmat_only && p % 3 != 0 {
                continue;
            }
            for q in -p..=p {
                let num = 3 * d + q * q;
                if num % (4 * p) != 0 {
                    continue;
                }
                let r = num / (4 * p);
                if r < p || (zmat_only && (q % 9 != 0 || r % 3 != 0)) {
                    continue;
                }
                // 27 D a² <= 4 P³
                let amax = isqrt(4 * p * p * p / (27 * d)).unwrap();
                for a in -amax..=amax {
                    if a == 0 {
                        let Some(s) = exact_sqrt(p) else { continue };
                        for b in [s, -s] {
                            if q % b != 0 {
                                continue;
                            }
                            let c = q / b;
                            if (c * c - r) % (3 * b) != 0 {
                                continue;
                            }
                            let dd = (c * c - r) / (3 * b);
                            push_form(0, b, c, dd, &mut out, &keep);
                        }
                        continue;
                    }
                    let Some(root) = exact_sqrt(4 * p * p * p - 27 * d * a * a) else { continue };
                    for num in [3 * a * q + root, 3 * a * q - root] {
                        if num % (2 * p) != 0 {
                            continue;
                        }
                        let b = num / (2 * p);
                        if (b * b - p) % (3 * a) != 0 {
                            continue;
                        }
                        let c = (b * b - p) / (3 * a);
                        if (b * c - q) % (9 * a) != 0 {
                            continue;
                        }
                        let dd = (b * c - q) / (9 * a);
                        push_form(a, b, c, dd, &mut out, &keep);
                    }
                }
            }
        }
    } else {
        let abs = -(disc as f64);
        // a = 0: the root at infinity is real and w is a root of b x² + c x + d
        for b in 1..=fourth_root(abs / 3.0) as i128 + 1 {
            if d % (b * b) != 0 {
                continue;
            }
            let e = d / (b * b);
            for c in -b..=b {
                let num = c * c - e;
                if num % (4 * b) == 0 {
                    push_form(0, b, c, num / (4 * b), &mut out, &keep);
                }
            }
        }
        let amax = fourth_root(16.0 * abs / 27.0) as i128 + 1;
        for a in 1..=amax {
            let af = a as f64;
            let l = (abs / (3.0 * af.powi(4))).powf(0.25);
            let m2 = (abs / (4.0 * af.powi(4))).powf(1.0 / 3.0);
            let bmax = (af * (1.5 + l)).ceil() as i128 + 1;
            let cmax = (af * (0.75 + l + m2)).ceil() as i128 + 1;
            for b in -bmax..=bmax {
                if zmat_only && b % 3 != 0 {
                    continue;
                }
                for c in -cmax..=cmax {
                    if zmat_only && c % 3 != 0 {
                        continue;
                    }
                    // disc as a quadratic in d: -27a² d² + (18abc - 4b³) d + (b²c² - 4ac³)
                    let qa = -27 * a * a;
                    let qb = 18 * a * b * c - 4 * b * b * b;
                    let qc = b * b * c * c - 4 * a * c * c * c - d;
                    let Some(root) = exact_sqrt(qb * qb - 4 * qa * qc) else { continue };
                    for num in [-qb + root, -qb - root] {
                        if num % (2 * qa) == 0 {
                            push_form(a, b, c, num / (2 * qa), &mut out, &keep);
                        }
                        if root == 0 {
                            break;
                        }
                    }
                }
            }
        }
    }
    out
}

fn push_form(
    a: i128,
    b: i128,
    c: i128,
    d: i128,
    out: &mut Vec<BinaryCubicForm>,
    keep: &impl Fn(BinaryCubicForm, &mut Vec<BinaryCubicForm>),
) {
    let fit = |x: i128| i64::try_from(x).ok();
    if let (Some(a), Some(b), Some(c), Some(d)) = (fit(a), fit(b), fit(c), fit(d)) {
        keep(BinaryCubicForm::new(a, b, c, d), out);
    }
}

/// Canonical representatives of all orbits of discriminant exactly `disc`.
pub fn orbits_of_disc(disc: i64, zmat_only: bool, budget: &Budget) -> Result<Vec<BinaryCubicForm>> {
    budget.check(disc)?;
    if disc == 0 {
        return Err(Error::Degenerate);
    }
    if !is_disc(disc) || (zmat_only && disc % 27 != 0) {
        return Ok(Vec::new());
    }
    let set: BTreeSet<BinaryCubicForm> = reduced_forms_of_disc(disc, zmat_only)
        .iter()
        .map(|f| least_reduced_neighbour(f, 1))
        .collect();
    Ok(set.into_iter().collect())
}

/// One canonical representative per orbit with `0 < |disc| <= x`, sorted by
/// discriminant and then lexicographically.
pub fn enumerate_orbits(x: i64, zmat_only: bool, budget: &Budget) -> Result<Vec<BinaryCubicForm>> {
    budget.check(x)?;
    let discs: Vec<i64> = (-x..=x).filter(|&d| is_disc(d)).collect();
    let per_disc: Vec<Vec<BinaryCubicForm>> = discs
        .par_iter()
        .map(|&d| orbits_of_disc(d, zmat_only, budget))
        .collect::<Result<_>>()?;
    Ok(per_disc.into_iter().flatten().collect())
}

/// Orbit enumeration over the coefficient box `(a, b, c) ∈ [-bound, bound]³`,
/// with `d` solved from each target discriminant, followed by
/// canonicalization; an independent check on [`enumerate_orbits`].
pub fn enumerate_orbits_by_box(x: i64, zmat_only: bool, bound: i64) -> BTreeMap<i64, BTreeSet<BinaryCubicForm>> {
    let mut out: BTreeMap<i64, BTreeSet<BinaryCubicForm>> = BTreeMap::new();
    let step = if zmat_only { 3 } else { 1 };
    let range = |s: i64| (-bound..=bound).filter(move |v| v % s == 0);
    let discs: Vec<i128> = (-x..=x).filter(|&d| d != 0).map(|d| d as i128).collect();
    for a in range(1) {
        for b in range(step) {
            for c in range(step) {
                let (a, b, c) = (a as i128, b as i128, c as i128);
                // disc = qa d² + qb d + qc
                let qa = -27 * a * a;
                let qb = 18 * a * b * c - 4 * b * b * b;
                for &disc in &discs {
                    let qc = b * b * c * c - 4 * a * c * c * c - disc;
                    let mut ds = Vec::new();
                    if qa == 0 {
                        if qb != 0 && qc % qb == 0 {
                            ds.push(-qc / qb);
                        }
                    } else if let Some(root) = exact_sqrt(qb * qb - 4 * qa * qc) {
                        for num in [-qb + root, -qb - root] {
                            if num % (2 * qa) == 0 {
                                ds.push(num / (2 * qa));
                            }
                        }
                    }
                    for d in ds {
                        let f = BinaryCubicForm::new(a as i64, b as i64, c as i64, d as i64);
                        debug_assert_eq!(f.disc_wide(), disc);
                        let canon = canonicalize(&f).expect("nondegenerate");
                        out.entry(disc as i64).or_default().insert(canon);
                    }
                }
            }
        }
    }
    out
}

fn weighted_count(disc: i64, zmat_only: bool, budget: &Budget) -> Result<Rational> {
    if disc == 0 || !is_disc(disc) {
        return Ok(Rational::zero());
    }
    Ok(orbits_of_disc(disc, zmat_only, budget)?
        .iter()
        .map(|f| ratio(1, stabilizer_order_reduced(f) as i64))
        .sum())
}

/// Cubic rings of discriminant `delta` weighted by `1/|Aut|`; zero outside
/// the set of discriminants.
pub fn h(delta: i64, budget: &Budget) -> Result<Rational> {
    weighted_count(delta, false, budget)
}

/// Z-mat cubic rings of discriminant `-27 delta` weighted by `1/|Aut|`.
pub fn hhat(delta: i64, budget: &Budget) -> Result<Rational> {
    let disc = delta.checked_mul(-27).ok_or(Error::Overflow("-27 delta"))?;
    weighted_count(disc, true, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassNumberTable {
    pub entries: BTreeMap<i64, (Rational, Rational)>,
}

impl ClassNumberTable {
    pub fn h(&self, delta: i64) -> Option<Rational> {
        self.entries.get(&delta).map(|e| e.0)
    }

    pub fn hhat(&self, delta: i64) -> Option<Rational> {
        self.entries.get(&delta).map(|e| e.1)
    }

    pub fn merge(&mut self, other: ClassNumberTable) {
        self.entries.extend(other.entries);
    }
}

/// `h` and `ĥ` for every discriminant `delta` with `lo <= delta <= hi`.
pub fn class_numbers_in(lo: i64, hi: i64, budget: &Budget) -> Result<ClassNumberTable> {
    let widest = lo.unsigned_abs().max(hi.unsigned_abs()) as i64;
    budget.check(widest.checked_mul(27).ok_or(Error::Overflow("27 |delta|"))?)?;
    let discs: Vec<i64> = (lo..=hi).filter(|&d| is_disc(d)).collect();
    let rows: Vec<(i64, (Rational, Rational))> = discs
        .par_iter()
        .map(|&d| Ok((d, (h(d, budget)?, hhat(d, budget)?))))
        .collect::<Result<_>>()?;
    Ok(ClassNumberTable { entries: rows.into_iter().collect() })
}

/// `h` and `ĥ` for all discriminants with `0 < |delta| <= x`.
pub fn class_numbers(x: i64, budget: &Budget) -> Result<ClassNumberTable> {
    class_numbers_in(-x, x, budget)
}

/// Dirichlet coefficients, indexed from 1, of the two Shintani zeta functions
/// and their Z-mat analogues (rescaled to be indexed by `delta`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaCoefficients {
    pub zeta_plus: Vec<Rational>,
    pub zeta_minus: Vec<Rational>,
    pub zhat_plus: Vec<Rational>,
    pub zhat_minus: Vec<Rational>,
}

impl ZetaCoefficients {
    /// Coefficient `n` (1-based) of each series.
    pub fn at(&self, n: usize) -> [Rational; 4] {
        let i = n - 1;
        [self.zeta_plus[i], self.zeta_minus[i], self.zhat_plus[i], self.zhat_minus[i]]
    }
}

pub fn zeta_coefficients(x: i64, budget: &Budget) -> Result<ZetaCoefficients> {
    let table = class_numbers(x, budget)?;
    let get = |d: i64, hat: bool| -> Rational {
        table
            .entries
            .get(&d)
            .map(|e| if hat { e.1 } else { e.0 })
            .unwrap_or_else(Rational::zero)
    };
    let ns = 1..=x;
    Ok(ZetaCoefficients {
        zeta_plus: ns.clone().map(|n| get(n, false)).collect(),
        zeta_minus: ns.clone().map(|n| get(-n, false)).collect(),
        // positive Z-mat discriminant 27n belongs to delta = -n
        zhat_plus: ns.clone().map(|n| get(-n, true)).collect(),
        zhat_minus: ns.map(|n| get(n, true)).collect(),
    })
}

// ---------------------------------------------------------------------------
// Local subring counts.

/// `s_n`: subrings of index `p^n` in a maximal ring of the given type at `p`.
pub fn s_sequence(sigma: SplittingType, p: i64, n: u32) -> i64 {
    let (s1, s2) = sigma.seeds();
    // s_{-2}, s_{-1}, s_0, s_1, s_2
    let mut s: Vec<i64> = vec![0, 0, 1, s1, s2];
    while s.len() < n as usize + 3 {
        let k = s.len();
        // s_{m+3} = s_{m+2} + p (s_m - s_{m-1}), with m + 3 = k - 2
        s.push(s[k - 1] + p * (s[k - 3] - s[k - 4]));
    }
    s[n as usize + 2]
}

/// Closed form of [`s_sequence`] through floor exponents.
pub fn s_closed_form(sigma: SplittingType, p: i64, n: u32) -> i64 {
    let (s1, s2) = sigma.seeds();
    let pk = |e: u32| p.pow(e) - 1;
    let num = pk((n + 3) / 3) + (s1 - 1) * pk((n + 2) / 3) + (s2 - s1) * pk((n + 1) / 3);
    num / (p - 1)
}

/// Subrings of index `m` in a ring maximal at every prime dividing `m`.
pub fn subring_count(maximal_form: &BinaryCubicForm, m: i64) -> Result<i64> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("index {m} must be positive")));
    }
    let mut total = 1;
    for (p, v) in factorize(m) {
        total *= s_sequence(splitting_type(maximal_form, p)?, p, v);
    }
    Ok(total)
}

/// Both sides of the `h` and `ĥ` recursions at `(D, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionReport {
    pub d: i64,
    pub p: i64,
    pub h_lhs: Rational,
    pub h_rhs: Rational,
    pub hhat_lhs: Rational,
    pub hhat_rhs: Rational,
}

impl RecursionReport {
    pub fn holds(&self) -> bool {
        self.h_lhs == self.h_rhs && self.hhat_lhs == self.hhat_rhs
    }
}

/// `f(p⁶D) = f(p⁴D) + p (f(D) - f(D/p²))` for `f = h` and `f = ĥ`, every term
/// obtained by separate enumeration. Terms off the set of discriminants
/// (including non-integral `D/p²`) count as zero.
pub fn check_recursion(d: i64, p: i64, budget: &Budget) -> Result<RecursionReport> {
    if !is_disc(d) {
        return Err(Error::NotADiscriminant(d));
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let p2 = p * p;
    let p4 = p2 * p2;
    let p6 = p4 * p2;
    let big = d.checked_mul(p6).ok_or(Error::Overflow("p^6 D"))?;
    budget.check(big.checked_mul(27).ok_or(Error::Overflow("27 p^6 D"))?)?;
    let side = |f: &dyn Fn(i64) -> Result<Rational>| -> Result<(Rational, Rational)> {
        let lower = if d % p2 == 0 { f(d / p2)? } else { Rational::zero() };
        Ok((f(big)?, f(d * p4)? + Rational::from_integer(p) * (f(d)? - lower)))
    };
    let (h_lhs, h_rhs) = side(&|x| h(x, budget))?;
    let (hhat_lhs, hhat_rhs) = side(&|x| hhat(x, budget))?;
    Ok(RecursionReport { d, p, h_lhs, h_rhs, hhat_lhs, hhat_rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{subrings_of_index, CubicRing};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn disc_one() {
        let orbits = enumerate_orbits(1, false, &b()).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].disc(), 1);
        assert_eq!(h(1, &b()).unwrap(), ratio(1, 6));
        assert_eq!(hhat(1, &b()).unwrap(), ratio(1, 2));
    }

    #[test]
    fn disc_minus_23() {
        assert_eq!(orbits_of_disc(-23, false, &b()).unwrap().len(), 2);
        assert_eq!(h(-23, &b()).unwrap(), ratio(3, 2));
    }

    #[test]
    fn zmat_disc_minus_27() {
        let orbits = enumerate_orbits(27, true, &b()).unwrap();
        let target = canonicalize(&BinaryCubicForm::new(1, 0, 0, -1)).unwrap();
        assert!(orbits.contains(&target));
    }

    #[test]
    fn non_discriminants_are_empty() {
        assert_eq!(h(2, &b()).unwrap(), Rational::zero());
        assert_eq!(h(-1, &b()).unwrap(), Rational::zero());
        assert!(orbits_of_disc(3, false, &b()).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let small = Budget::new(100);
        assert!(matches!(h(101, &small), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(hhat(4, &small), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn table_entries() {
        for t in SplittingType::ALL {
            let (s1, s2) = t.seeds();
            assert_eq!(s_sequence(t, 5, 1), s1);
            assert_eq!(s_sequence(t, 5, 2), s2);
            assert_eq!(s_sequence(t, 5, 0), 1);
        }
        assert_eq!(s_sequence(SplittingType::TotallySplit, 2, 2), 4);
        assert_eq!(s_sequence(SplittingType::TotallySplit, 2, 3), 6);
        assert_eq!(s_sequence(SplittingType::Inert, 7, 1), 0);
    }

    #[test]
    fn closed_form_matches() {
        for t in SplittingType::ALL {
            for p in [2, 3, 5, 7] {
                for n in 0..=12 {
                    assert_eq!(s_closed_form(t, p, n), s_sequence(t, p, n), "{t} p={p} n={n}");
                }
            }
        }
    }

    #[test]
    fn subring_counts_of_z_cubed() {
        let f = BinaryCubicForm::new(0, 1, 1, 0);
        assert_eq!(subring_count(&f, 1).unwrap(), 1);
        assert_eq!(subring_count(&f, 2).unwrap(), 3);
        assert_eq!(subring_count(&f, 6).unwrap(), 9);
        let r = CubicRing::new(f);
        assert_eq!(subrings_of_index(&r, 6).unwrap().len(), 9);
    }

    #[test]
    fn zeta_prefix() {
        let z = zeta_coefficients(4, &b()).unwrap();
        assert_eq!(z.at(1), [ratio(1, 6), Rational::zero(), Rational::zero(), ratio(1, 2)]);
        for n in 1..=4 {
            let [zp, zm, hp, hm] = z.at(n);
            assert_eq!(hp, zm);
            assert_eq!(hm, zp * 3);
        }
    }

    #[test]
    fn recursion_small() {
        let r = check_recursion(1, 2, &b()).unwrap();
        assert!(r.holds(), "{r:?}");
        let r = check_recursion(5, 2, &b()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(check_recursion(2, 2, &b()), Err(Error::NotADiscriminant(2)));
    }

    #[test]
    fn box_agrees_with_reduction_scan() {
        for zmat in [false, true] {
            let x = if zmat { 27 * 30 } else { 200 };
            let by_box = enumerate_orbits_by_box(x, zmat, if zmat { 18 } else { 12 });
            let mut by_scan: BTreeMap<i64, BTreeSet<BinaryCubicForm>> = BTreeMap::new();
            for f in enumerate_orbits(x, zmat, &b()).unwrap() {
                by_scan.entry(f.disc()).or_default().insert(f);
            }
            assert_eq!(by_box, by_scan, "zmat={zmat}");
        }
    }
}
