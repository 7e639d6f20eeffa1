//! Pinned reproduction bundles. Parameters live here, not in flags.

use clap::ValueEnum;
use serde_json::json;
use shiftlab::{
    attracting_check, certify_ict, find_delta_chain, find_delta_chain_min_steps, is_ict, omega_prefixes,
    realize_ict, realize_invariant_sft, shadowing_modulus, synthesize_shadow, verify_shadow, Direction, DyadicDistance,
    Point, PseudoOrbit, SetPresentation, Subshift, Word,
};

use crate::cert::{window_reachability, Outcome};
use crate::report::Report;
use crate::verbs::describe;

const LADDER: (usize, usize) = (64, 4);
const MONOTONE_BOUND: u64 = 16;
const CONFINEMENT_HORIZON: usize = 1 << 10;
const ATTRACT_EXPONENT: u32 = 6;
const ATTRACT_HORIZON: usize = 1 << 12;
const SHADOW_HORIZON: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    Remark1,
    Remark2,
    Monotone,
    DichotomyFinite,
    SbtIct,
    SftRealize,
}

pub fn run(demo: Demo) -> Report {
    let name = demo.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut r = Report::new("demo");
    r.input("name", &name);
    r.pin("ladder", json!({ "t0": LADDER.0, "levels": LADDER.1 }));
    match demo {
        Demo::Remark1 => remark1(&mut r),
        Demo::Remark2 => remark2(&mut r),
        Demo::Monotone => monotone(&mut r),
        Demo::DichotomyFinite => dichotomy_finite(&mut r),
        Demo::SbtIct => sbt_ict(&mut r),
        Demo::SftRealize => sft_realize(&mut r),
    }
    r
}

fn pow(n: u32) -> DyadicDistance {
    DyadicDistance::pow2_neg(n)
}

fn ep(pre: &[u64], per: &[u64]) -> Point {
    Point::periodic(Word::from_values(pre.to_vec()), Word::from_values(per.to_vec())).expect("nonempty period")
}

fn finite(points: impl IntoIterator<Item = Point>) -> SetPresentation {
    SetPresentation::finite(points).expect("eventually periodic points")
}

fn zero_one() -> SetPresentation {
    finite([Point::constant(0), Point::constant(1)])
}

fn omega_matches(r: &mut Report, label: &str, x: &Point, z: &SetPresentation, depths: std::ops::RangeInclusive<usize>) {
    for n in depths {
        let got = omega_prefixes(x, n, LADDER.0, LADDER.1);
        let want = shiftlab::z_prefixes(z, n);
        let ok = got.prefixes == want;
        let words: Vec<String> = got.prefixes.iter().map(|w| w.to_string()).collect();
        let scope = if got.exact { "exact" } else { "ladder" };
        r.assert(format!("{label}: omega prefixes at depth {n}"), ok, format!("{scope} {{{}}}", words.join(", ")));
    }
}

fn remark1(r: &mut Report) {
    let z = zero_one();
    r.output("set", z.to_spec());
    omega_matches(r, "remark1", &Point::remark1(), &z, 1..=3);
    let ict = is_ict(&z, pow(1), 16).unwrap_or(true);
    r.assert("{0^ω,1^ω} not ICT at 1/2", !ict, "no 1/2-chain between the fixed points");
}

fn remark2(r: &mut Report) {
    let got = omega_prefixes(&Point::remark2(), 3, LADDER.0, LADDER.1);
    let want: std::collections::BTreeSet<Word> =
        [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1]].into_iter().map(Word::from_values).collect();
    r.output("omega", &got);
    r.assert("remark2: omega prefixes at depth 3", got.prefixes == want, "{000, 001, 011, 111}");
    let family = SetPresentation::remark2_truncated(8);
    let x = ep(&[0], &[1]);
    r.pin("family_truncation", 8);
    let chain = find_delta_chain_min_steps(&family, &x, &x, pow(2), 20, 1);
    let absent = matches!(chain, Ok(None));
    r.assert("no nontrivial 1/4-chain from 0 1^ω to itself", absent, "truncated family, k ≤ 8, max_len 20");
}

/// A `2^(1-m)`-pseudo-orbit of non-increasing points: each point keeps
/// `σ(previous)[0, m)` and then repeats a symbol no larger than its last.
fn monotone_pseudo_orbit(m: usize, len: usize) -> PseudoOrbit {
    let mut points = vec![ep(&[15, 15, 13, 13, 13, 11, 9, 9, 8, 6, 6, 4], &[2])];
    for i in 1..len {
        let keep = points[i - 1].window(1, 1 + m);
        let last = keep.last().map_or(0, |s| s.0);
        let tail = last.saturating_sub((i % 3 == 0) as u64);
        points.push(Point::periodic(keep, Word::from_values([tail])).expect("nonempty period"));
    }
    PseudoOrbit::new(points, pow((m - 1) as u32))
}

fn monotone(r: &mut Report) {
    let gamma = Subshift::monotone(Direction::NonIncreasing, MONOTONE_BOUND);
    r.output("subshift", gamma.to_spec());
    describe(r, &gamma);
    r.assert("SBT but not SFT", gamma.is_sbt() && !gamma.is_sft(), "bounded rule of length 2");
    r.pin("shadow_horizon", SHADOW_HORIZON);
    for e in 1..=5u32 {
        let label = format!("shadowing at ε = 2^-{e}");
        let result = shadowing_modulus(&gamma, pow(e)).and_then(|(m, _)| {
            let po = monotone_pseudo_orbit(m, 24);
            synthesize_shadow(&gamma, &po, SHADOW_HORIZON).map(|z| (po, z))
        });
        let Some((po, z)) = r.assert_ok(&label, result, |(po, _)| format!("{} points at δ = {}", po.points.len(), po.delta))
        else {
            continue;
        };
        let traced = verify_shadow(&z, &po, pow(e)).is_ok() && gamma.contains(&z, 1024);
        r.assert(format!("{label}: shadow in Γ traces the pseudo-orbit"), traced, format!("{z}"));
    }
    for a in 0..=4u64 {
        let (x, y) = (Point::constant(a), Point::constant(a + 1));
        let pair = finite([x.clone(), y.clone()]);
        let in_pair = matches!(find_delta_chain(&pair, &x, &y, pow(1), 16), Ok(None));
        let in_gamma = matches!(window_reachability(&gamma, &x, &y, pow(1)), Outcome::Absent(_));
        r.assert(format!("no 1/2-chain {a}^ω → {}^ω", a + 1), in_pair && in_gamma, "absent in the pair and in Γ");
    }
    r.pin("confinement_horizon", CONFINEMENT_HORIZON);
    let samples = [ep(&[15, 12, 12, 9], &[4]), ep(&[7, 7, 7], &[7]), ep(&[], &[0]), ep(&[9, 3, 3, 2, 1], &[1])];
    for x in samples {
        let top = x.symbol_at(0);
        let confined = gamma.contains(&x, 64)
            && (0..=CONFINEMENT_HORIZON).all(|n| x.shift(n).symbols().is_some_and(|s| s.iter().all(|c| *c <= top)));
        r.assert(format!("orbit of {x} stays below {top}"), confined, "");
    }
}

fn dichotomy_finite(r: &mut Report) {
    let gamma = Subshift::two_symbol_barrier(3).expect("valid basis");
    r.output("subshift", gamma.to_spec());
    describe(r, &gamma);
    r.assert("SFT", gamma.is_sft(), "finite basis over {0, 1, 2}");
    let z = zero_one();
    let ict = is_ict(&z, pow(1), 16).unwrap_or(true);
    r.assert("{0^ω,1^ω} not ICT at 1/2", !ict, "");
    let (x, y) = (Point::constant(0), Point::constant(1));
    let absent = matches!(window_reachability(&gamma, &x, &y, pow(1)), Outcome::Absent(_));
    r.assert("no 1/2-chain 0^ω → 1^ω in Γ", absent, "window graph");
}

fn ict_targets() -> Vec<(&'static str, SetPresentation)> {
    vec![
        ("{0^ω}", finite([Point::constant(0)])),
        ("{(01)^ω,(10)^ω}", finite([ep(&[], &[0, 1]), ep(&[], &[1, 0])])),
        ("orbit of (001)^ω", SetPresentation::orbit_of(&ep(&[], &[0, 0, 1])).expect("periodic")),
    ]
}

fn hosts() -> Vec<(&'static str, Subshift)> {
    vec![
        ("full shift", Subshift::full()),
        ("forbid 2 1", Subshift::explicit([Word::from_values([2, 1])]).expect("valid basis")),
    ]
}

fn hosted(gamma: &Subshift, z: &SetPresentation) -> bool {
    z.points().is_some_and(|ps| ps.iter().all(|p| gamma.contains(p, 64)))
}

fn sbt_ict(r: &mut Report) {
    r.pin("attract", json!({ "eps": pow(ATTRACT_EXPONENT), "horizon": ATTRACT_HORIZON }));
    for (hname, gamma) in hosts() {
        for (zname, z) in ict_targets() {
            if !hosted(&gamma, &z) {
                continue;
            }
            let label = format!("{zname} in {hname}");
            r.assert(format!("{label}: Z is ICT"), certify_ict(&z).unwrap_or(false), "at every scale");
            let Some((_, s)) = r.assert_ok(&format!("{label}: construction"), realize_ict(&gamma, &z, 256), |(_, s)| {
                format!("{}", s.point)
            }) else {
                continue;
            };
            omega_matches(r, &label, &s.point, &z, 1..=3);
            let from = s.modulus(ATTRACT_EXPONENT as usize);
            let attract = attracting_check(&s.point, &z, pow(ATTRACT_EXPONENT), from, ATTRACT_HORIZON);
            r.assert_ok(&format!("{label}: attracting"), attract, |_| format!("from index {from}"));
        }
    }
}

fn sft_realize(r: &mut Report) {
    let mut targets = ict_targets();
    targets.push(("{0^ω,1^ω}", zero_one()));
    for (hname, gamma) in hosts() {
        for (zname, z) in &targets {
            if !hosted(&gamma, z) {
                continue;
            }
            let label = format!("{zname} in {hname}");
            let Some(x) = r.assert_ok(&format!("{label}: construction"), realize_invariant_sft(&gamma, z), |x| format!("{x}"))
            else {
                continue;
            };
            r.assert(format!("{label}: point in Γ"), gamma.contains(&x, 4096), "");
            omega_matches(r, &label, &x, z, 1..=4);
        }
    }
    r.assert("{0^ω,1^ω} is not ICT", !certify_ict(&zero_one()).unwrap_or(true), "realized anyway");
}
