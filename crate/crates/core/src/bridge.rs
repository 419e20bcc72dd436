//! Links between cubic rings and quadratic orders: self-balanced triples,
//! the ideal count for `ĥ`, the character count for `h`, and checks derived
//! from them.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, ext_gcd, factorize, fundamental_part, is_cubefree, is_disc, is_fundamental, is_prime, kronecker_prime, ratio};
use crate::counting::{h, hhat, orbits_of_disc, s_sequence, Budget};
use crate::error::{Error, Result};
use crate::forms::{stabilizer_order, BinaryCubicForm};
use crate::quad::{ideals_of_norm, mu3_characters, conductor_of_char, order_change_map, Mu3Char, PicCache, PicGroup, QuadElt, QuadIdeal, QuadOrder};
use crate::rings::{det3, is_maximal_at_p, CubicRing, Orientation, RingElement, SplittingType};
use crate::Rational;

type Q = Ratio<i128>;

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

/// `x + y√Δ` with rational coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SqrtElt {
    pub x: Q,
    pub y: Q,
}

impl SqrtElt {
    pub fn new(x: Q, y: Q) -> Self {
        SqrtElt { x, y }
    }

    pub fn integer(n: i128) -> Self {
        SqrtElt { x: q(n), y: Q::zero() }
    }

    pub fn mul(&self, o: &SqrtElt, disc: i64) -> SqrtElt {
        SqrtElt { x: self.x * o.x + self.y * o.y * q(disc as i128), y: self.x * o.y + self.y * o.x }
    }

    pub fn add(&self, o: &SqrtElt) -> SqrtElt {
        SqrtElt { x: self.x + o.x, y: self.y + o.y }
    }

    pub fn scale(&self, k: Q) -> SqrtElt {
        SqrtElt { x: self.x * k, y: self.y * k }
    }

    pub fn conj(&self) -> SqrtElt {
        SqrtElt { x: self.x, y: -self.y }
    }

    pub fn norm(&self, disc: i64) -> Q {
        self.x * self.x - self.y * self.y * q(disc as i128)
    }

    pub fn pow(&self, k: u32, disc: i64) -> SqrtElt {
        (0..k).fold(SqrtElt::integer(1), |acc, _| acc.mul(self, disc))
    }

    /// Coordinates in `O_Δ = Z[ξ]`, if integral.
    pub fn in_order(&self, order: &QuadOrder) -> Option<QuadElt> {
        // x + y√Δ = (x - y r) + 2y ξ
        let y2 = self.y * q(2);
        let x = self.x - self.y * q(order.r as i128);
        (y2.is_integer() && x.is_integer()).then(|| QuadElt::new(x.to_integer(), y2.to_integer()))
    }
}

/// A triple `(O_Δ, I, γ)` with `I = Z + Zτ`, `τ = (s + √Δ)/(2t)` and
/// `γ = (-u + φ√Δ)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfBalancedTriple {
    pub disc: i64,
    pub t: i64,
    pub s: i64,
    pub r: i64,
    pub u: i64,
    pub phi: i64,
    /// The element of the ring used to build the triple.
    pub alpha: RingElement,
    /// Images of `1` and `√Δ` in the trace-zero part, in the basis
    /// `[α + b/3, β - c/3]`.
    embed: [[Q; 2]; 2],
}

impl SelfBalancedTriple {
    pub fn gamma(&self) -> SqrtElt {
        let half = Q::new(1, 2);
        SqrtElt::new(q(-self.u as i128) * half, q(self.phi as i128) * half)
    }

    pub fn tau(&self) -> SqrtElt {
        let den = q(2 * self.t as i128);
        SqrtElt::new(q(self.s as i128) / den, den.recip())
    }

    pub fn ideal_basis(&self) -> [SqrtElt; 2] {
        [SqrtElt::integer(1), self.tau()]
    }

    fn order(&self) -> QuadOrder {
        QuadOrder::new(self.disc).expect("triple over a valid order")
    }

    /// `γ τ^k ∈ O_Δ` for `k = 0..=3`, which span `γ I³`.
    pub fn is_contained(&self) -> bool {
        let (o, g, tau) = (self.order(), self.gamma(), self.tau());
        (0..=3).all(|k| g.mul(&tau.pow(k, self.disc), self.disc).in_order(&o).is_some())
    }

    /// `N(I)` as a fractional ideal of `O_Δ`.
    pub fn ideal_norm(&self) -> Q {
        let [one, tau] = self.ideal_basis();
        // covolume of I over covolume of O_Δ = 1/2
        (one.x * tau.y - one.y * tau.x).abs() * q(2)
    }

    /// `|N(γ)| N(I)³`.
    pub fn balance(&self) -> Q {
        self.gamma().norm(self.disc).abs() * self.ideal_norm().pow(3)
    }

    pub fn is_balanced(&self) -> bool {
        self.is_contained() && self.balance().is_one()
    }

    /// Membership in the lattice `I`.
    pub fn ideal_contains(&self, e: &SqrtElt) -> bool {
        let tau = self.tau();
        let b = e.y / tau.y;
        let a = e.x - b * tau.x;
        a.is_integer() && b.is_integer()
    }

    /// `I` is stable under `ω = (-1 + √-3)/2`, so the triple is equivalent
    /// to one with `I = Z[ω]`.
    pub fn has_order3_symmetry(&self) -> bool {
        if self.disc >= 0 || self.disc % 3 != 0 {
            return false;
        }
        let Some(k) = crate::arith::exact_sqrt((-self.disc / 3) as i128) else { return false };
        let omega = SqrtElt::new(Q::new(-1, 2), Q::new(1, 2 * k));
        self.ideal_basis().iter().all(|e| self.ideal_contains(&omega.mul(e, self.disc)))
    }

    /// The Levi form `ξ ↦ (γξ³ - γ̄ξ̄³)/√Δ` on the basis `[1, τ]`.
    pub fn levi_form(&self) -> Result<BinaryCubicForm> {
        let (g, tau) = (self.gamma(), self.tau());
        let val = |x: i128, y: i128| -> Result<i64> {
            let xi = SqrtElt::integer(x).add(&tau.scale(q(y)));
            let v = g.mul(&xi.pow(3, self.disc), self.disc).y * q(2);
            if !v.is_integer() {
                return Err(Error::NotAnIdeal);
            }
            i64::try_from(v.to_integer()).map_err(|_| Error::Overflow("levi form"))
        };
        let (a, d) = (val(1, 0)?, val(0, 1)?);
        let (p, m) = (val(1, 1)?, val(1, -1)?);
        // p = a + b + c + d, m = a - b + c - d
        let c = (p + m) / 2 - a;
        let b = (p - m) / 2 - d;
        Ok(BinaryCubicForm::new(a, b, c, d))
    }

    /// Preimage in `K₂` of a trace-zero element of the ring.
    pub fn pull_back(&self, ring: &CubicRing, e: &RingElement) -> SqrtElt {
        let v = trace_zero_coords(ring, e);
        let [va, vs] = self.embed;
        let det = va[0] * vs[1] - va[1] * vs[0];
        SqrtElt::new((v[0] * vs[1] - v[1] * vs[0]) / det, (va[0] * v[1] - va[1] * v[0]) / det)
    }

    /// A scalar `λ` with `other = (λI, λ⁻³γ)`, if one exists; both triples
    /// must come from the same ring.
    pub fn equivalence_scalar(&self, other: &SelfBalancedTriple, ring: &CubicRing) -> Option<SqrtElt> {
        let lambda = other.pull_back(ring, &self.alpha);
        let d = self.disc;
        let cube_ok = other.gamma().mul(&lambda.pow(3, d), d) == self.gamma();
        let lattice_ok = self.ideal_basis().iter().all(|e| other.ideal_contains(&lambda.mul(e, d)))
            && lambda.norm(d).abs() * self.ideal_norm() == other.ideal_norm();
        (cube_ok && lattice_ok).then_some(lambda)
    }
}

/// `(x1, x2)` of a trace-zero `x0 + x1 α + x2 β`.
fn trace_zero_coords(_ring: &CubicRing, e: &RingElement) -> [Q; 2] {
    [q(e.0[1]), q(e.0[2])]
}

/// The trace-zero element with coordinates `(x1, x2)`.
fn trace_zero_element(ring: &CubicRing, x1: i128, x2: i128) -> RingElement {
    let f = &ring.form;
    RingElement::new((f.b as i128 * x1 - f.c as i128 * x2) / 3, x1, x2)
}

/// `1 ∧ ξ ∧ ξ²` relative to the orientation.
fn levi_value(ring: &CubicRing, xi: &RingElement) -> i128 {
    let sq = ring.mul(xi, xi);
    ring.orientation.sign() as i128 * det3(&[RingElement::ONE.0, xi.0, sq.0])
}

/// Candidate trace-zero elements `(x1, x2)`, primitive, by increasing
/// max-coordinate.
fn generic_candidates(limit: i128) -> impl Iterator<Item = (i128, i128)> {
    (1..=limit).flat_map(|m| {
        let mut v = Vec::new();
        for k in -m..=m {
            v.push((m, k));
            if k != -m && k != m {
                v.push((k, m));
            }
        }
        v.push((m, -m));
        v.sort();
        v.dedup();
        v.into_iter()
            .filter(|&(a, b)| a.gcd(&b) == 1 && !(a < 0 || (a == 0 && b < 0)))
    })
}

/// The self-balanced triple attached to an oriented Z-mat ring, using the
/// first generic primitive trace-zero element.
pub fn extract_triple(ring: &CubicRing) -> Result<SelfBalancedTriple> {
    if ring.form.is_degenerate() {
        return Err(Error::Degenerate);
    }
    if !ring.form.is_zmat() {
        return Err(Error::NotZmat);
    }
    for (x1, x2) in generic_candidates(64) {
        if let Some(t) = extract_triple_with(ring, x1, x2)? {
            return Ok(t);
        }
    }
    Err(Error::NoGenericElement)
}

/// The triple built from the trace-zero element with coordinates
/// `(x1, x2)`, or `None` when that element is not generic.
pub fn extract_triple_with(ring: &CubicRing, x1: i128, x2: i128) -> Result<Option<SelfBalancedTriple>> {
    if !ring.form.is_zmat() {
        return Err(Error::NotZmat);
    }
    if x1.gcd(&x2) != 1 {
        return Ok(None);
    }
    let disc = -ring.form.disc_wide() / 27;
    let delta = i64::try_from(disc).map_err(|_| Error::Overflow("discriminant"))?;
    let alpha = trace_zero_element(ring, x1, x2);
    let sq = ring.mul(&alpha, &alpha);
    let tr2 = ring.trace(&sq);
    let phi = levi_value(ring, &alpha);
    if tr2 == 0 || phi == 0 {
        return Ok(None);
    }
    let t = -tr2 / 6;
    let u = -ring.norm(&alpha);
    if tr2 % 6 != 0 || u * u + 4 * t * t * t != phi * phi * disc {
        return Err(Error::InvalidArgument(format!("inconsistent characteristic data for {}", ring.form)));
    }
    // c(√Δ) = (4t² - uα + 2tα²)/φ, written in trace-zero coordinates
    let c_sqrt = [q(-u * alpha.0[1] + 2 * t * sq.0[1]) / q(phi), q(-u * alpha.0[2] + 2 * t * sq.0[2]) / q(phi)];
    let v_alpha = [q(x1), q(x2)];
    // w with det[v_α; w] matching the orientation
    let (_, p, qq) = ext_gcd(x1 as i64, x2 as i64);
    let sign = ring.orientation.sign() as i128;
    let w = [q(-qq as i128 * sign), q(p as i128 * sign)];
    let det = v_alpha[0] * c_sqrt[1] - v_alpha[1] * c_sqrt[0];
    let tx = (w[0] * c_sqrt[1] - w[1] * c_sqrt[0]) / det;
    let ty = (v_alpha[0] * w[1] - v_alpha[1] * w[0]) / det;
    if ty != Q::new(1, 2 * t) {
        return Err(Error::InvalidArgument(format!("orientation mismatch for {}", ring.form)));
    }
    let s = q(2 * t) * tx;
    if !s.is_integer() {
        return Err(Error::InvalidArgument(format!("non-integral s for {}", ring.form)));
    }
    let s = s.to_integer().rem_euclid(2 * t.abs());
    let s = if s > t.abs() { s - 2 * t.abs() } else { s };
    let r = (s * s - disc) / (4 * t);
    let narrow = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("triple coefficient"));
    Ok(Some(SelfBalancedTriple {
        disc: delta,
        t: narrow(t)?,
        s: narrow(s)?,
        r: narrow(r)?,
        u: narrow(u)?,
        phi: narrow(phi)?,
        alpha,
        embed: [v_alpha, c_sqrt],
    }))
}

/// `(Δ', g, J)` with `g = gcd(t, s, r)`, `Δ' = Δ/g²` and `J = γI³/g`, an
/// invertible ideal of `O_{Δ'}` of norm `g`.
pub fn triple_to_j(triple: &SelfBalancedTriple) -> Result<(i64, i64, QuadIdeal)> {
    let g = crate::arith::gcd3(triple.t, triple.s, triple.r);
    let disc2 = triple.disc / (g * g);
    let o2 = QuadOrder::new(disc2)?;
    let (gamma, tau) = (triple.gamma(), triple.tau());
    let mut gens = Vec::with_capacity(4);
    for k in 0..=3 {
        let e = gamma.mul(&tau.pow(k, triple.disc), triple.disc).scale(Q::new(1, g as i128));
        // √Δ = g√Δ'
        let e = SqrtElt::new(e.x, e.y * q(g as i128));
        gens.push(e.in_order(&o2).ok_or(Error::NotAnIdeal)?);
    }
    Ok((disc2, g, QuadIdeal::from_generators(&o2, &gens)?))
}

/// `w_Δ` and `η_Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightConstants {
    pub w: i64,
    pub eta: Rational,
}

pub fn weight_constants(disc: i64) -> WeightConstants {
    WeightConstants {
        w: if crate::arith::is_square(disc) { 3 } else { 1 },
        eta: if disc > 0 { ratio(1, 3) } else { Rational::one() },
    }
}

/// Shared state for the checks: memoised Picard groups and the
/// enumeration budget.
#[derive(Debug, Default)]
pub struct Context {
    pub pics: PicCache,
    pub budget: Budget,
}

impl Context {
    pub fn new(budget: Budget) -> Self {
        Context { pics: PicCache::new(), budget }
    }
}

/// `(g, Δ')` with `Δ' g² = Δ` and `Δ'` a discriminant.
fn square_factorizations(disc: i64) -> Vec<(i64, i64)> {
    divisors(disc.abs())
        .into_iter()
        .filter(|&g| disc % (g * g) == 0 && is_disc(disc / (g * g)))
        .map(|g| (g, disc / (g * g)))
        .collect()
}

/// Invertible ideals of norm `g` with cube class in `O_{Δ'}`, weighted by
/// `|Pic(O_{Δ'})[3]|`, summed over the `(g, Δ')` accepted by `keep`.
fn weighted_cube_ideals(disc: i64, ctx: &Context, keep: impl Fn(i64) -> bool) -> Result<i64> {
    let mut total = 0;
    for (g, d2) in square_factorizations(disc) {
        if !keep(g) {
            continue;
        }
        let pic = ctx.pics.get(d2)?;
        let cubes = pic.cubes();
        let mut n = 0;
        for j in ideals_of_norm(d2, g, true)? {
            if cubes.contains(&pic.class_of(&j)?) {
                n += 1;
            }
        }
        total += n * pic.torsion3().len() as i64;
    }
    Ok(total)
}

/// Ideal-theoretic count equal to `2 w η ĥ(Δ)`.
pub fn rhs_count(disc: i64, ctx: &Context) -> Result<i64> {
    QuadOrder::new(disc)?;
    weighted_cube_ideals(disc, ctx, |_| true)
}

/// `2 w η ĥ(Δ)` from the enumeration of Z-mat rings.
pub fn rhs_target(disc: i64, ctx: &Context) -> Result<Rational> {
    let wc = weight_constants(disc);
    Ok(Rational::from_integer(2 * wc.w) * wc.eta * hhat(disc, &ctx.budget)?)
}

/// Splitting type at `p` of the algebra attached to a primitive character
/// on `Pic(O_{Δ₀d²})`.
pub fn splitting_type_from_char(group: &PicGroup, chi: &Mu3Char, p: i64, ctx: &Context) -> Result<SplittingType> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let o = QuadOrder::new(group.disc)?;
    let d = o.conductor;
    if conductor_of_char(group, chi, &ctx.pics)?.0 != d {
        return Err(Error::NotPrimitive);
    }
    if d % p == 0 {
        return Ok(SplittingType::TotallyRamified);
    }
    if o.d0 % p == 0 {
        return Ok(SplittingType::PartiallyRamified);
    }
    if kronecker_prime(group.disc, p) == -1 {
        return Ok(SplittingType::PartiallySplit);
    }
    let above = ideals_of_norm(group.disc, p, true)?;
    let prime = above.first().ok_or(Error::InvalidArgument(format!("{p} does not split in {}", group.disc)))?;
    Ok(if chi.eval(group.class_of(prime)?) == 0 { SplittingType::TotallySplit } else { SplittingType::Inert })
}

/// Per-character contribution: subrings of index `m / cond χ` in the
/// algebra attached to `χ`.
pub fn character_subring_count(group: &PicGroup, chi: &Mu3Char, ctx: &Context) -> Result<i64> {
    let o = QuadOrder::new(group.disc)?;
    let (c, induced) = conductor_of_char(group, chi, &ctx.pics)?;
    let base = ctx.pics.get(o.d0 * c * c)?;
    let mut count = 1;
    for (p, v) in factorize(o.conductor / c) {
        count *= s_sequence(splitting_type_from_char(&base, &induced, p, ctx)?, p, v);
    }
    Ok(count)
}

/// Character-theoretic count equal to `2 w h(Δ)`.
pub fn lhs_count(disc: i64, ctx: &Context) -> Result<i64> {
    let o = QuadOrder::new(disc)?;
    if !is_cubefree(o.conductor) {
        return Err(Error::NotCubefree(o.conductor));
    }
    character_sum(disc, ctx)
}

/// The sum in [`lhs_count`] without the cubefree restriction, for
/// exploring conductors with a cube factor.
pub fn character_sum(disc: i64, ctx: &Context) -> Result<i64> {
    let group = ctx.pics.get(disc)?;
    mu3_characters(&group).iter().map(|chi| character_subring_count(&group, chi, ctx)).sum()
}

/// `2 w h(Δ)` from the enumeration of cubic rings.
pub fn lhs_target(disc: i64, ctx: &Context) -> Result<Rational> {
    Ok(Rational::from_integer(2 * weight_constants(disc).w) * h(disc, &ctx.budget)?)
}

/// The sum `Σ_{c'f = m₁} Σ_{I ⊆ O_{Δ₁c'²}, N(I) = f} χ(I)` as an element
/// `n₀ + n₁ζ + n₂ζ²` of `Z[ζ₃]`.
pub fn character_ideal_sum(group: &PicGroup, chi: &Mu3Char, ctx: &Context) -> Result<[i64; 3]> {
    let o = QuadOrder::new(group.disc)?;
    let (c1, induced) = conductor_of_char(group, chi, &ctx.pics)?;
    let base = ctx.pics.get(o.d0 * c1 * c1)?;
    let m1 = o.conductor / c1;
    let mut sum = [0i64; 3];
    for cp in divisors(m1) {
        let f = m1 / cp;
        let d = base.disc * cp * cp;
        let pic = ctx.pics.get(d)?;
        let map = order_change_map(&pic, &base)?;
        for i in ideals_of_norm(d, f, true)? {
            sum[induced.eval(map[pic.class_of(&i)?]) as usize] += 1;
        }
    }
    Ok(sum)
}

/// Both sides of the field count: `(fields, (|Pic[3]| - 1)/2)`.
pub fn check_fields_pic(disc: i64, ctx: &Context) -> Result<(i64, Rational)> {
    QuadOrder::new(disc)?;
    let mut fields = 0;
    for k in divisors(disc.abs()) {
        if disc % (k * k) != 0 {
            continue;
        }
        let d = disc / (k * k);
        for f in orbits_of_disc(d, false, &ctx.budget)? {
            if is_irreducible(&f) && is_maximal(&f)? {
                fields += 1;
            }
        }
    }
    let torsion = ctx.pics.get(disc)?.torsion3().len() as i64;
    Ok((fields, ratio(torsion - 1, 2)))
}

/// No root in `P¹(Q)`.
pub fn is_irreducible(f: &BinaryCubicForm) -> bool {
    if f.a == 0 || f.d == 0 {
        return false;
    }
    // a root x/y in lowest terms has x | d and y | a
    for x in divisors(f.d.abs()) {
        for y in divisors(f.a.abs()) {
            for sx in [1, -1] {
                if f.eval((sx * x) as i128, y as i128) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn is_maximal(f: &BinaryCubicForm) -> Result<bool> {
    for (p, v) in factorize(f.disc().abs()) {
        if v >= 2 && !is_maximal_at_p(f, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both sides of the relation for `3 ∤ Δ`: `6 w η h(Δ)` against the part
/// of the ideal count at `-27Δ` with `3 ∤ g`.
pub fn check_prop_3notdiv(disc: i64, ctx: &Context) -> Result<(Rational, Rational)> {
    QuadOrder::new(disc)?;
    if disc % 3 == 0 {
        return Err(Error::InvalidArgument(format!("3 divides {disc}")));
    }
    let big = -27 * disc;
    let wc = weight_constants(-3 * disc);
    let lhs = Rational::from_integer(6 * wc.w) * wc.eta * h(disc, &ctx.budget)?;
    let rhs = weighted_cube_ideals(big, ctx, |g| g % 3 != 0)?;
    Ok((lhs, Rational::from_integer(rhs)))
}

/// `|Pic(O_{Δ'})[3]| / |Pic(O_{Δ₀})[3]|` with `Δ'` the fundamental
/// discriminant of `Q(√-3Δ₀)`, and whether it lies in the allowed set.
pub fn check_scholz(d0: i64, ctx: &Context) -> Result<(Rational, bool)> {
    if d0 == 1 || !is_fundamental(d0) {
        return Err(Error::NotFundamental(d0));
    }
    let (reflected, _) = fundamental_part(-3 * d0);
    let num = ctx.pics.get(reflected)?.torsion3().len() as i64;
    let den = ctx.pics.get(d0)?.torsion3().len() as i64;
    let ratio = ratio(num, den);
    let allowed = if d0 > 0 { [ratio_int(3), ratio_int(1)] } else { [ratio_int(1), crate::arith::ratio(1, 3)] };
    Ok((ratio, allowed.contains(&ratio)))
}

fn ratio_int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Oriented Z-mat rings of discriminant `-27Δ` with their triples and ideals.
pub fn triples_of_disc(disc: i64, ctx: &Context) -> Result<Vec<(CubicRing, SelfBalancedTriple, i64, QuadIdeal)>> {
    let mut out = Vec::new();
    for f in orbits_of_disc(-27 * disc, true, &ctx.budget)? {
        for orientation in [Orientation::Positive, Orientation::Negative] {
            let ring = CubicRing { form: f, orientation };
            let t = extract_triple(&ring)?;
            let (_, g, j) = triple_to_j(&t)?;
            out.push((ring, t, g, j));
        }
    }
    Ok(out)
}

/// Whether the ring has an automorphism of order 3.
pub fn has_order3_automorphism(form: &BinaryCubicForm) -> Result<bool> {
    Ok(stabilizer_order(form)? % 3 == 0)
}

/// Every character of `Pic(O_Δ)` grouped by conductor.
pub fn characters_by_conductor(disc: i64, ctx: &Context) -> Result<BTreeMap<i64, usize>> {
    let group = ctx.pics.get(disc)?;
    let mut out = BTreeMap::new();
    for chi in mu3_characters(&group) {
        *out.entry(conductor_of_char(&group, &chi, &ctx.pics)?.0).or_insert(0) += 1;
    }
    Ok(out)
}
