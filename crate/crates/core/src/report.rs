//! Named checks over ranges of discriminants, producing one record per
//! comparison.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::arith::{fmt_rational, is_cubefree, is_disc, is_fundamental, Rational};
use crate::bridge::{
    character_sum, check_fields_pic, check_prop_3notdiv, check_scholz, lhs_count, lhs_target, rhs_count, rhs_target,
    Context,
};
use crate::counting::{check_recursion, enumerate_orbits_by_box, h, hhat, orbits_of_disc};
use crate::error::{Error, Result};
use crate::quad::QuadOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    On,
    Recursion,
    Rhs,
    Lhs,
    FieldsPic,
    Prop6,
    Scholz,
    Oracle,
}

impl Check {
    pub const ALL: [Check; 8] =
        [Check::On, Check::Recursion, Check::Rhs, Check::Lhs, Check::FieldsPic, Check::Prop6, Check::Scholz, Check::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Check::On => "on",
            Check::Recursion => "recursion",
            Check::Rhs => "rhs",
            Check::Lhs => "lhs",
            Check::FieldsPic => "fields-pic",
            Check::Prop6 => "prop6",
            Check::Scholz => "scholz",
            Check::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {s:?}")))
    }
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// One comparison. Informational records report behaviour outside the
/// proven range and never count as failures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub delta: i64,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub pass: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, delta: i64, lhs: Rational, rhs: Rational) -> Self {
        CheckRecord { check: check.into(), delta, pass: lhs == rhs, lhs, rhs, informational: false }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn is_failure(&self) -> bool {
        !self.pass && !self.informational
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} delta={} lhs={} rhs={} {}",
            self.check,
            self.delta,
            fmt_rational(&self.lhs),
            fmt_rational(&self.rhs),
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Records of `check` at one discriminant; empty where the check does not
/// apply. `primes` is used by the recursion check only.
pub fn run_check(check: Check, delta: i64, primes: &[i64], ctx: &Context) -> Result<Vec<CheckRecord>> {
    if !is_disc(delta) {
        return Ok(Vec::new());
    }
    let one = |r: CheckRecord| Ok(vec![r]);
    match check {
        Check::On => {
            let (hh, hv) = (hhat(delta, &ctx.budget)?, h(delta, &ctx.budget)?);
            let factor = if delta > 0 { 3 } else { 1 };
            one(CheckRecord::new("on", delta, hh, int(factor) * hv))
        }
        Check::Recursion => {
            let mut out = Vec::new();
            for &p in primes {
                let rep = check_recursion(delta, p, &ctx.budget)?;
                out.push(CheckRecord::new(format!("recursion[p={p}]"), delta, rep.h_lhs, rep.h_rhs));
                out.push(CheckRecord::new(format!("recursion-hat[p={p}]"), delta, rep.hhat_lhs, rep.hhat_rhs));
            }
            Ok(out)
        }
        Check::Rhs => one(CheckRecord::new("rhs", delta, int(rhs_count(delta, ctx)?), rhs_target(delta, ctx)?)),
        Check::Lhs => {
            let m = QuadOrder::new(delta)?.conductor;
            if is_cubefree(m) {
                one(CheckRecord::new("lhs", delta, int(lhs_count(delta, ctx)?), lhs_target(delta, ctx)?))
            } else {
                one(CheckRecord::new("lhs-cubeful", delta, int(character_sum(delta, ctx)?), lhs_target(delta, ctx)?)
                    .informational())
            }
        }
        Check::FieldsPic => {
            let (fields, expected) = check_fields_pic(delta, ctx)?;
            one(CheckRecord::new("fields-pic", delta, int(fields), expected))
        }
        Check::Prop6 => {
            if delta % 3 == 0 {
                return Ok(Vec::new());
            }
            let (l, r) = check_prop_3notdiv(delta, ctx)?;
            one(CheckRecord::new("prop6", delta, l, r))
        }
        Check::Scholz => {
            if delta == 1 || !is_fundamental(delta) {
                return Ok(Vec::new());
            }
            let (ratio, ok) = check_scholz(delta, ctx)?;
            // rhs echoes the ratio when it is allowed
            let mut rec = CheckRecord::new("scholz", delta, ratio, if ok { ratio } else { Rational::zero() });
            rec.pass = ok;
            one(rec)
        }
        Check::Oracle => run_oracle(&[delta], ctx),
    }
}

/// Box size that covers a reduced representative of every orbit with
/// `|disc| <= x` in practice; validated against the scan in tests.
pub fn oracle_box(x: i64) -> i64 {
    let mut b = 1;
    while b * b * b < x {
        b += 1;
    }
    2 * b
}

/// Orbit sets from the reduction scan against the coefficient-box oracle.
pub fn run_oracle(deltas: &[i64], ctx: &Context) -> Result<Vec<CheckRecord>> {
    let deltas: Vec<i64> = deltas.iter().copied().filter(|&d| is_disc(d)).collect();
    let Some(x) = deltas.iter().map(|d| d.abs()).max() else { return Ok(Vec::new()) };
    let boxed = enumerate_orbits_by_box(x, false, oracle_box(x));
    let mut out = Vec::new();
    for d in deltas {
        let scan = orbits_of_disc(d, false, &ctx.budget)?;
        let other = boxed.get(&d).map(|s| s.iter().copied().collect::<Vec<_>>()).unwrap_or_default();
        let mut rec = CheckRecord::new("oracle", d, int(scan.len() as i64), int(other.len() as i64));
        rec.pass = scan == other;
        out.push(rec);
    }
    Ok(out)
}

/// All records of `check` over `deltas`, in the given order.
pub fn run_checks(check: Check, deltas: &[i64], primes: &[i64], ctx: &Context) -> Result<Vec<CheckRecord>> {
    if check == Check::Oracle {
        return run_oracle(deltas, ctx);
    }
    let mut out = Vec::new();
    for &d in deltas {
        out.extend(run_check(check, d, primes, ctx)?);
    }
    Ok(out)
}

/// `0 < |Δ| <= x` in increasing order, restricted to discriminants.
pub fn discriminants_up_to(x: i64) -> Vec<i64> {
    (-x..=x).filter(|&d| is_disc(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }

    #[test]
    fn json_shape() {
        let r = CheckRecord::new("on", 5, int(3), int(3));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v, serde_json::json!({"check": "on", "delta": 5, "lhs": "3/1", "rhs": "3/1", "pass": true}));
    }

    #[test]
    fn every_check_passes_on_a_small_range() {
        let ctx = Context::default();
        let deltas = discriminants_up_to(24);
        for c in Check::ALL {
            let recs = run_checks(c, &deltas, &[2], &ctx).unwrap();
            assert!(!recs.is_empty(), "{c}");
            for r in recs {
                assert!(!r.is_failure(), "{r}");
            }
        }
    }
}
