//! Picard groups of quadratic orders, their cubic characters and the maps
//! induced by enlarging the order.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use super::binform::QuadraticForm;
use super::ideal::{ideals_of_norm, is_principal, QuadIdeal};
use super::QuadOrder;
use crate::arith::{divisors, isqrt};
use crate::error::{Error, Result};

/// A finite abelian group given by representative ideals and a
/// multiplication table on their indices. Index 0 is the trivial class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicGroup {
    pub disc: i64,
    pub reps: Vec<QuadIdeal>,
    pub table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    keys: Option<HashMap<QuadraticForm, usize>>,
}

/// Largest `|Δ|` for which a Picard group is built.
pub const PIC_DISC_BUDGET: i64 = 2_000_000;

fn definite_key(ideal: &QuadIdeal) -> QuadraticForm {
    ideal.attached_form().reduce_definite().0
}

/// Default norm bound for class representatives.
pub fn generation_bound(disc: i64) -> i64 {
    let s = isqrt(disc.unsigned_abs() as i128).unwrap() as i64;
    let s = if s * s == disc.abs() { s } else { s + 1 };
    (2 * s).max(6)
}

impl PicGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Identity, inverses, commutativity and associativity of the table.
    pub fn satisfies_axioms(&self) -> bool {
        let h = self.order();
        (0..h).all(|a| {
            self.mul(0, a) == a
                && self.mul(a, self.inverse[a]) == 0
                && (0..h).all(|b| {
                    self.mul(a, b) == self.mul(b, a) && (0..h).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))
                })
        })
    }

    /// Index of the class of an invertible ideal.
    pub fn class_of(&self, ideal: &QuadIdeal) -> Result<usize> {
        if ideal.disc != self.disc {
            return Err(Error::InvalidArgument(format!("ideal {ideal} is not in disc {}", self.disc)));
        }
        if let Some(keys) = &self.keys {
            if !ideal.is_invertible() {
                return Err(Error::NotInvertible);
            }
            return keys.get(&definite_key(ideal)).copied().ok_or(Error::NotInvertible);
        }
        find_class(&self.reps, ideal)?.ok_or(Error::InvalidArgument(format!("class of {ideal} missing")))
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn pow(&self, i: usize, k: u64) -> usize {
        (0..k).fold(0, |acc, _| self.table[acc][i])
    }

    /// Indices of the classes killed by 3.
    pub fn torsion3(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.pow(i, 3) == 0).collect()
    }

    pub fn is_cube_class(&self, i: usize) -> bool {
        (0..self.order()).any(|j| self.pow(j, 3) == i)
    }

    /// Indices of the subgroup of cubes.
    pub fn cubes(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.is_cube_class(i)).collect()
    }
}

fn find_class(reps: &[QuadIdeal], ideal: &QuadIdeal) -> Result<Option<usize>> {
    for (k, r) in reps.iter().enumerate() {
        if is_principal(&ideal.mul(&r.conj())?)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn picard_group(disc: i64) -> Result<PicGroup> {
    picard_group_with_bound(disc, generation_bound(disc))
}

/// The Picard group generated by invertible ideals of norm at most `bound`,
/// closed under products.
pub fn picard_group_with_bound(disc: i64, bound: i64) -> Result<PicGroup> {
    QuadOrder::new(disc)?;
    if disc.abs() > PIC_DISC_BUDGET {
        return Err(Error::BudgetExceeded { what: "Picard group discriminant", requested: disc.abs(), limit: PIC_DISC_BUDGET });
    }
    let definite = disc < 0;
    let mut reps = Vec::new();
    let mut keys: HashMap<QuadraticForm, usize> = HashMap::new();
    let mut add = |ideal: QuadIdeal, reps: &mut Vec<QuadIdeal>| -> Result<bool> {
        let new = if definite {
            let k = definite_key(&ideal);
            if keys.contains_key(&k) {
                false
            } else {
                keys.insert(k, reps.len());
                true
            }
        } else {
            find_class(reps, &ideal)?.is_none()
        };
        if new {
            reps.push(ideal);
        }
        Ok(new)
    };
    for n in 1..=bound.max(1) {
        for ideal in ideals_of_norm(disc, n, true)? {
            add(ideal, &mut reps)?;
        }
    }
    // close under products in case the bound was too small
    let mut queue: VecDeque<(usize, usize)> = (0..reps.len()).flat_map(|i| (i..reps.len()).map(move |j| (i, j))).collect();
    while let Some((i, j)) = queue.pop_front() {
        let p = reps[i].mul(&reps[j])?;
        if add(p, &mut reps)? {
            let k = reps.len() - 1;
            queue.extend((0..=k).map(|i| (i, k)));
        }
    }
    let mut group = PicGroup { disc, reps, table: Vec::new(), inverse: Vec::new(), keys: definite.then_some(keys) };
    let h = group.order();
    let mut table = vec![vec![0; h]; h];
    for i in 0..h {
        for j in i..h {
            let c = group.class_of(&group.reps[i].mul(&group.reps[j])?)?;
            table[i][j] = c;
            table[j][i] = c;
        }
    }
    group.inverse = (0..h).map(|i| (0..h).find(|&j| table[i][j] == 0).expect("group has inverses")).collect();
    group.table = table;
    Ok(group)
}

/// Representatives of the 3-torsion classes.
pub fn pic_3_torsion(disc: i64) -> Result<Vec<QuadIdeal>> {
    let g = picard_group(disc)?;
    Ok(g.torsion3().into_iter().map(|i| g.reps[i]).collect())
}

/// A homomorphism `Pic → μ3`, stored as exponents of `e^{2πi/3}` indexed
/// by class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mu3Char {
    pub disc: i64,
    pub values: Vec<u8>,
}

impl Mu3Char {
    pub fn trivial(group: &PicGroup) -> Self {
        Mu3Char { disc: group.disc, values: vec![0; group.order()] }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn eval(&self, class: usize) -> u8 {
        self.values[class]
    }

    pub fn inverse(&self) -> Self {
        Mu3Char { disc: self.disc, values: self.values.iter().map(|&v| (3 - v) % 3).collect() }
    }
}

fn generators(group: &PicGroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = vec![false; group.order()];
    span[0] = true;
    for i in 0..group.order() {
        if span[i] {
            continue;
        }
        gens.push(i);
        // closure of the span under the new generator
        loop {
            let mut grew = false;
            for j in 0..group.order() {
                if span[j] && !span[group.mul(j, i)] {
                    span[group.mul(j, i)] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
    }
    gens
}

/// All characters `Pic → μ3`, the trivial one first.
pub fn mu3_characters(group: &PicGroup) -> Vec<Mu3Char> {
    let gens = generators(group);
    let h = group.order();
    let mut out = Vec::new();
    for code in 0..3usize.pow(gens.len() as u32) {
        let mut values: Vec<Option<u8>> = vec![None; h];
        values[0] = Some(0);
        let mut stack = vec![0usize];
        let mut ok = true;
        let assign = |k: usize| ((code / 3usize.pow(k as u32)) % 3) as u8;
        while let Some(i) = stack.pop() {
            for (k, &g) in gens.iter().enumerate() {
                let j = group.mul(i, g);
                let v = (values[i].unwrap() + assign(k)) % 3;
                match values[j] {
                    None => {
                        values[j] = Some(v);
                        stack.push(j);
                    }
                    Some(w) if w != v => ok = false,
                    _ => {}
                }
            }
        }
        if ok {
            out.push(Mu3Char { disc: group.disc, values: values.into_iter().map(Option::unwrap).collect() });
        }
    }
    out
}

/// The map `Pic(O) → Pic(O')` induced by `I ↦ I O'`, where `O ⊆ O'`.
pub fn order_change_map(from: &PicGroup, to: &PicGroup) -> Result<Vec<usize>> {
    from.reps.iter().map(|r| to.class_of(&r.extend(to.disc)?)).collect()
}

/// Memoised Picard groups keyed by discriminant.
#[derive(Debug, Default)]
pub struct PicCache {
    groups: Mutex<HashMap<i64, Arc<PicGroup>>>,
}

impl PicCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, disc: i64) -> Result<Arc<PicGroup>> {
        if let Some(g) = self.groups.lock().unwrap().get(&disc) {
            return Ok(g.clone());
        }
        let g = Arc::new(picard_group(disc)?);
        self.groups.lock().unwrap().entry(disc).or_insert(g.clone());
        Ok(g)
    }

    /// Every group computed so far, by discriminant.
    pub fn groups(&self) -> Vec<Arc<PicGroup>> {
        let mut v: Vec<_> = self.groups.lock().unwrap().values().cloned().collect();
        v.sort_by_key(|g| g.disc);
        v
    }
}

/// The least `c` dividing the conductor of `chi`'s order such that `chi`
/// factors through `Pic` of the order of conductor `c`, together with the
/// induced character there.
pub fn conductor_of_char(group: &PicGroup, chi: &Mu3Char, cache: &PicCache) -> Result<(i64, Mu3Char)> {
    let o = QuadOrder::new(group.disc)?;
    for c in divisors(o.conductor) {
        let target = cache.get(o.d0 * c * c)?;
        let map = order_change_map(group, &target)?;
        let mut values: Vec<Option<u8>> = vec![None; target.order()];
        let mut ok = true;
        for (i, &j) in map.iter().enumerate() {
            match values[j] {
                None => values[j] = Some(chi.values[i]),
                Some(v) if v != chi.values[i] => {
                    ok = false;
                    break;
                }
                _ => {}
            }
        }
        if ok {
            let values = values.into_iter().map(|v| v.ok_or(Error::InvalidArgument("order change map is not onto".into()))).collect::<Result<_>>()?;
            return Ok((c, Mu3Char { disc: target.disc, values }));
        }
    }
    unreachable!("chi factors through its own order")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_groups() {
        assert_eq!(picard_group(-23).unwrap().order(), 3);
        assert_eq!(picard_group(-3).unwrap().order(), 1);
        assert_eq!(picard_group(-4).unwrap().order(), 1);
        assert_eq!(picard_group(1).unwrap().order(), 1);
        assert_eq!(picard_group(-20).unwrap().order(), 2);
        assert_eq!(picard_group(-56).unwrap().order(), 4);
        assert_eq!(picard_group(40).unwrap().order(), 2);
        // Z[√3] has class number 1
        assert_eq!(picard_group(12).unwrap().order(), 1);
        // Z[3i] has class number 2
        assert_eq!(picard_group(-36).unwrap().order(), 2);
        // (Z/5)^× / ±1
        assert_eq!(picard_group(25).unwrap().order(), 2);
    }

    #[test]
    fn cyclic_cubic_characters() {
        let g = picard_group(-23).unwrap();
        assert_eq!(g.torsion3().len(), 3);
        assert_eq!(g.cubes(), vec![0]);
        let chars = mu3_characters(&g);
        assert_eq!(chars.len(), 3);
        assert!(chars[0].is_trivial());
        assert_eq!(pic_3_torsion(-23).unwrap().len(), 3);
    }

    #[test]
    fn bound_is_idempotent_under_doubling() {
        for d in (-400i64..=400).filter(|&d| crate::arith::is_disc(d)) {
            let b = generation_bound(d);
            let g = picard_group_with_bound(d, b).unwrap();
            let g2 = picard_group_with_bound(d, 2 * b).unwrap();
            assert_eq!(g.order(), g2.order(), "disc {d}");
        }
    }

    #[test]
    fn order_change_is_onto() {
        let cache = PicCache::new();
        for (d0, f) in [(-3, 2), (-3, 3), (-4, 3), (-23, 2), (5, 3), (-31, 2), (8, 3), (1, 7)] {
            let big = cache.get(d0 * f * f).unwrap();
            let small = cache.get(d0).unwrap();
            let map = order_change_map(&big, &small).unwrap();
            for j in 0..small.order() {
                assert!(map.contains(&j), "{d0} {f}");
            }
            // homomorphism
            for a in 0..big.order() {
                for b in 0..big.order() {
                    assert_eq!(map[big.mul(a, b)], small.mul(map[a], map[b]));
                }
            }
        }
    }

    #[test]
    fn conductors() {
        let cache = PicCache::new();
        // disc -23·4: characters lifted from disc -23 have conductor 1
        let g = cache.get(-92).unwrap();
        let chars = mu3_characters(&g);
        assert_eq!(chars.len(), 3);
        for chi in &chars {
            let (c, induced) = conductor_of_char(&g, chi, &cache).unwrap();
            assert_eq!(c, 1);
            assert_eq!(induced.is_trivial(), chi.is_trivial());
        }
        // disc -3·49 has Pic of order 3 not coming from disc -3
        let g = cache.get(-147).unwrap();
        let chars = mu3_characters(&g);
        assert!(chars.iter().filter(|c| !c.is_trivial()).all(|c| conductor_of_char(&g, c, &cache).unwrap().0 == 7));
    }

    #[test]
    fn definite_class_numbers_match_reduced_forms() {
        // reduced primitive forms: |b| <= a <= c, b >= 0 when |b| = a or a = c
        for d in (-600i64..0).filter(|&d| crate::arith::is_disc(d)) {
            let mut count = 0;
            let mut a = 1;
            while 3 * a * a <= -d {
                for b in -a + 1..=a {
                    let num = b * b - d;
                    if num % (4 * a) != 0 {
                        continue;
                    }
                    let c = num / (4 * a);
                    if c < a || (c == a && b < 0) || crate::arith::gcd3(a, b, c) != 1 {
                        continue;
                    }
                    count += 1;
                }
                a += 1;
            }
            assert_eq!(picard_group(d).unwrap().order(), count, "disc {d}");
        }
    }

    #[test]
    fn conjugates_are_inverses_and_integers_are_trivial() {
        for d in [-23, -56, -92, -147, 40, 229, 316, 25, 49] {
            let g = picard_group(d).unwrap();
            let chars = mu3_characters(&g);
            for (i, rep) in g.reps.iter().enumerate() {
                assert_eq!(g.class_of(&rep.conj()).unwrap(), g.inverse[i], "{d}");
            }
            for n in [2, 3, 5, 7] {
                let i = QuadIdeal { disc: d, g: n, a: 1, b: 0 };
                let k = g.class_of(&i).unwrap();
                assert_eq!(k, 0);
                assert!(chars.iter().all(|c| c.eval(k) == 0));
            }
        }
    }

    fn arb_disc() -> impl Strategy<Value = i64> {
        (-1500i64..=1500).prop_filter("discriminant", |d| crate::arith::is_disc(*d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn group_axioms(d in arb_disc()) {
            let g = picard_group(d).unwrap();
            let h = g.order();
            for a in 0..h {
                prop_assert_eq!(g.mul(0, a), a);
                prop_assert_eq!(g.mul(a, g.inverse[a]), 0);
                for b in 0..h {
                    prop_assert_eq!(g.mul(a, b), g.mul(b, a));
                    for c in 0..h {
                        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
            // the number of cubic characters equals |Pic[3]| = |Pic/Pic³|
            let chars = mu3_characters(&g);
            prop_assert_eq!(chars.len(), g.torsion3().len());
            prop_assert_eq!(chars.len() * g.cubes().len(), h);
        }
    }
}
