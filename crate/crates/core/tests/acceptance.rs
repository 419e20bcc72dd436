use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cubring::arith::{is_cubefree, is_disc, is_fundamental, ratio};
use cubring::bridge::{
    check_fields_pic, check_scholz, lhs_count, lhs_target, rhs_count, rhs_target, triples_of_disc, Context,
};
use cubring::counting::{
    check_recursion, class_numbers, enumerate_orbits, h, hhat, s_closed_form, s_sequence, Budget,
};
use cubring::forms::{act, disc, is_zmat};
use cubring::quad::QuadOrder;
use cubring::rings::{is_maximal_at_p, splitting_type, subrings_of_index, CubicRing, SplittingType};
use cubring::{BinaryCubicForm, Rational, UnimodularMatrix};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn example_at_one() -> Outcome {
    let start = Instant::now();
    let b = Budget::default();
    let (hv, hh) = (h(1, &b).map_err(|e| e.to_string())?, hhat(1, &b).map_err(|e| e.to_string())?);
    let took = start.elapsed();
    if hv != ratio(1, 6) || hh != ratio(1, 2) {
        return Err(format!("h(1) = {hv}, ĥ(1) = {hh}"));
    }
    if took >= Duration::from_secs(1) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("h(1) = 1/6, ĥ(1) = 1/2 in {took:?}"))
}

fn on_identity() -> Outcome {
    let table = class_numbers(300, &Budget::default()).map_err(|e| e.to_string())?;
    for (&d, &(hv, hh)) in &table.entries {
        let expected = if d > 0 { hv * 3 } else { hv };
        if hh != expected {
            return Err(format!("Δ = {d}: ĥ = {hh}, h = {hv}"));
        }
    }
    Ok(format!("{} discriminants with 0 < |Δ| <= 300", table.entries.len()))
}

fn recursion() -> Outcome {
    let mut n = 0;
    for d in (-20..=20).filter(|&d| is_disc(d)) {
        for p in [2, 3] {
            let rep = check_recursion(d, p, &Budget::default()).map_err(|e| e.to_string())?;
            if !rep.holds() {
                return Err(format!("{rep:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} pairs (D, p), both recursions"))
}

fn subring_oracle() -> Outcome {
    let seeds: BTreeMap<SplittingType, (i64, i64)> = [
        (SplittingType::TotallySplit, (3, 4)),
        (SplittingType::PartiallySplit, (1, 2)),
        (SplittingType::Inert, (0, 1)),
        (SplittingType::PartiallyRamified, (2, 2)),
        (SplittingType::TotallyRamified, (1, 1)),
    ]
    .into_iter()
    .collect();
    for (&t, &s) in &seeds {
        if t.seeds() != s || (s_sequence(t, 7, 1), s_sequence(t, 7, 2)) != s {
            return Err(format!("seed table for {t}"));
        }
    }
    let orbits = enumerate_orbits(1000, false, &Budget::default()).map_err(|e| e.to_string())?;
    let mut seen: BTreeMap<(i64, SplittingType), usize> = BTreeMap::new();
    let mut rings = 0;
    for p in [2i64, 3, 5] {
        for f in &orbits {
            let maximal = is_maximal_at_p(f, p).map_err(|e| e.to_string())?;
            if !maximal {
                continue;
            }
            let t = splitting_type(f, p).map_err(|e| e.to_string())?;
            let slot = seen.entry((p, t)).or_insert(0);
            if *slot >= 2 {
                continue;
            }
            *slot += 1;
            rings += 1;
            let ring = CubicRing::new(*f);
            for k in 1..=3 {
                let brute = subrings_of_index(&ring, p.pow(k)).map_err(|e| e.to_string())?.len() as i64;
                if brute != s_sequence(t, p, k) {
                    return Err(format!("{f} at p = {p}, index p^{k}: {brute} vs {}", s_sequence(t, p, k)));
                }
            }
        }
    }
    let types = seen.keys().map(|k| k.1).collect::<std::collections::BTreeSet<_>>().len();
    if rings < 20 || types < 5 {
        return Err(format!("only {rings} rings over {types} splitting types"));
    }
    for t in SplittingType::ALL {
        for p in [2, 3, 5, 7] {
            for n in 0..=12 {
                if s_closed_form(t, p, n) != s_sequence(t, p, n) {
                    return Err(format!("closed form at {t}, p = {p}, n = {n}"));
                }
            }
        }
    }
    Ok(format!("{rings} maximal rings, {} (p, type) cells, closed form n <= 12", seen.len()))
}

fn small_discs(x: i64) -> Vec<i64> {
    (-x..=x).filter(|&d| is_disc(d)).collect()
}

fn rhs(ctx: &Context) -> Outcome {
    for d in small_discs(150) {
        let count = rhs_count(d, ctx).map_err(|e| e.to_string())?;
        let target = rhs_target(d, ctx).map_err(|e| e.to_string())?;
        if int(count) != target {
            return Err(format!("Δ = {d}: {count} vs {target}"));
        }
    }
    Ok("0 < |Δ| <= 150".into())
}

fn lhs_and_fields(ctx: &Context) -> Outcome {
    let mut n = 0;
    for d in small_discs(150) {
        let (fields, expected) = check_fields_pic(d, ctx).map_err(|e| e.to_string())?;
        if int(fields) != expected {
            return Err(format!("fields at Δ = {d}: {fields} vs {expected}"));
        }
        if !is_cubefree(QuadOrder::new(d).map_err(|e| e.to_string())?.conductor) {
            continue;
        }
        let count = lhs_count(d, ctx).map_err(|e| e.to_string())?;
        let target = lhs_target(d, ctx).map_err(|e| e.to_string())?;
        if int(count) != target {
            return Err(format!("Δ = {d}: {count} vs {target}"));
        }
        n += 1;
    }
    Ok(format!("{n} cubefree Δ, field counts on all |Δ| <= 150"))
}

fn triples(ctx: &Context) -> Outcome {
    let mut n = 0;
    for d in small_discs(2000 / 27) {
        for (ring, t, g, j) in triples_of_disc(d, ctx).map_err(|e| e.to_string())? {
            if !t.is_contained() || t.balance() != num_rational::Ratio::from_integer(1) || j.norm() != g {
                return Err(format!("{} {:?}", ring.form, ring.orientation));
            }
            n += 1;
        }
    }
    Ok(format!("{n} oriented Z-mat rings with |disc| <= 2000"))
}

fn scholz(ctx: &Context) -> Outcome {
    let mut n = 0;
    for d in small_discs(150).into_iter().filter(|&d| d != 1 && is_fundamental(d)) {
        let (r, ok) = check_scholz(d, ctx).map_err(|e| e.to_string())?;
        if !ok {
            return Err(format!("Δ₀ = {d}: ratio {r}"));
        }
        n += 1;
    }
    Ok(format!("{n} fundamental discriminants"))
}

fn arb_matrix() -> impl Strategy<Value = UnimodularMatrix> {
    (-9i64..=9, -9i64..=9, -9i64..=9)
        .prop_filter_map("unimodular", |(p, q, r)| {
            if p != 0 && (1 + q * r) % p == 0 {
                UnimodularMatrix::new(p, q, r, (1 + q * r) / p).ok()
            } else if p != 0 && (q * r - 1) % p == 0 {
                UnimodularMatrix::new(p, q, r, (q * r - 1) / p).ok()
            } else {
                None
            }
        })
}

fn properties(ctx: &Context) -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 10_000, failure_persistence: None, ..Config::default() });
    let strategy = (arb_matrix(), (-30i64..=30, -30i64..=30, -30i64..=30, -30i64..=30));
    runner
        .run(&strategy, |(g, (a, b, c, d))| {
            let f = BinaryCubicForm::new(a, b, c, d);
            let image = act(&g, &f).unwrap();
            prop_assert_eq!(disc(&image), disc(&f));
            prop_assert_eq!(is_zmat(&image), is_zmat(&f));
            Ok(())
        })
        .map_err(|e| format!("action invariance: {e}"))?;
    let orbits = enumerate_orbits(2000, false, &Budget::default()).map_err(|e| e.to_string())?;
    for f in &orbits {
        let ring = CubicRing::new(*f);
        if !ring.is_associative() {
            return Err(format!("{f} is not associative"));
        }
        let d = ring.discriminant();
        if d != f.disc() as i128 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(format!("Stickelberger fails at {f}"));
        }
    }
    let groups = ctx.pics.groups();
    if let Some(g) = groups.iter().find(|g| !g.satisfies_axioms()) {
        return Err(format!("Picard group of {} fails the axioms", g.disc));
    }
    Ok(format!("10000 action pairs, {} rings, {} Picard groups", orbits.len(), groups.len()))
}

fn main() -> ExitCode {
    let ctx = Context::new(Budget::default());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("1 example at Δ = 1", Box::new(example_at_one)),
        ("2 ĥ = 3h / h up to 300", Box::new(on_identity)),
        ("3 recursion", Box::new(recursion)),
        ("4 subring oracle", Box::new(subring_oracle)),
        ("5 ideal count for ĥ", Box::new(|| rhs(&ctx))),
        ("6 character count for h and field count", Box::new(|| lhs_and_fields(&ctx))),
        ("7 self-balanced triples", Box::new(|| triples(&ctx))),
        ("8 Scholz reflection", Box::new(|| scholz(&ctx))),
        ("9 property suites", Box::new(|| properties(&ctx))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} ({took:.2?})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} ({took:.2?})");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
