use std::path::Path;

use anyhow::{bail, Result};
use serde_json::json;
use shiftlab::{
    attracting_check, certify_ict, check_closed_invariant, find_delta_chain, is_ict, omega_equals, omega_prefixes,
    realize_ict, realize_invariant_sft, shadowing_modulus, stable_exponent, synthesize_shadow, verify_pseudo_orbit,
    verify_shadow, DyadicDistance, Point, SetPresentation, Subshift, Word,
};

use crate::cert::{window_reachability, Outcome};
use crate::report::Report;
use crate::{load, Mode};

/// Symbols scanned when membership of a non-periodic point is checked.
const MEMBERSHIP_HORIZON: usize = 1024;
/// Attraction is checked at `ε = 2^-ATTRACT_EXPONENT`.
const ATTRACT_EXPONENT: u32 = 6;

pub fn describe(r: &mut Report, gamma: &Subshift) {
    r.output("is_sft", gamma.is_sft());
    r.output("is_sbt", gamma.is_sbt());
    r.output("max_basis_length", gamma.max_basis_length());
    r.output("gluing_bound", gamma.gluing_bound());
    r.output("active_alphabet", gamma.active_alphabet());
    r.output("unrestricted_alphabet", gamma.has_fresh_symbols());
}

pub fn check(path: &Path, point: Option<Point>, horizon: usize) -> Result<Report> {
    let (spec, gamma) = load::subshift(path)?;
    let mut r = Report::new("check");
    r.input("subshift", &spec);
    r.pin("horizon", horizon);
    describe(&mut r, &gamma);
    r.assert("spec validates", true, "basis accepted");
    if let Some(x) = point {
        r.input("point", &x);
        let v = gamma.point_in_subshift(&x, horizon)?;
        r.output("membership", v);
        let scope = if v.exact { "exact" } else { "up to the horizon" };
        r.assert("point in subshift", v.holds, scope);
    }
    Ok(r)
}

pub fn allowed(path: &Path, w: &Word) -> Result<Report> {
    let (spec, gamma) = load::subshift(path)?;
    let mut r = Report::new("allowed");
    r.input("subshift", &spec);
    r.input("word", w);
    let (local, global) = (gamma.is_locally_allowed(w), gamma.is_globally_allowed(w));
    r.output("locally_allowed", local);
    r.output("globally_allowed", global);
    if gamma.has_fresh_symbols() {
        r.assert("local equals global", local == global, "unrestricted alphabet");
    }
    r.assert("word allowed", global, if global { "factor of a point" } else { "no point contains it" });
    Ok(r)
}

pub fn glue(path: &Path, u: &Word, w: &Word, v: &Word) -> Result<Report> {
    let (spec, gamma) = load::subshift(path)?;
    let mut r = Report::new("glue");
    r.input("subshift", &spec);
    r.input("u", u);
    r.input("w", w);
    r.input("v", v);
    r.output("gluing_bound", gamma.gluing_bound());
    let holds = gamma.verify_gluing(u, w, v)?;
    let uw = gamma.is_globally_allowed(&u.concat(w));
    let wv = gamma.is_globally_allowed(&w.concat(v));
    r.output("uw_allowed", uw);
    r.output("wv_allowed", wv);
    r.output("uwv_allowed", gamma.is_globally_allowed(&u.concat(w).concat(v)));
    let detail = if uw && wv { "premises hold" } else { "premises fail, implication vacuous" };
    r.assert("gluing", holds, detail);
    Ok(r)
}

pub fn shadow(path: &Path, po_path: &Path, eps: DyadicDistance, horizon: usize) -> Result<Report> {
    let (spec, gamma) = load::subshift(path)?;
    let po = load::pseudo_orbit(po_path)?;
    let mut r = Report::new("shadow");
    r.input("subshift", &spec);
    r.input("pseudo_orbit", &po);
    r.input("eps", eps);
    r.pin("horizon", horizon);
    r.pin("membership_horizon", MEMBERSHIP_HORIZON);
    let Some((m, delta)) = r.assert_ok("shadowing modulus", shadowing_modulus(&gamma, eps), |(m, d)| format!("M = {m}, δ = {d}"))
    else {
        return Ok(r);
    };
    r.output("modulus", json!({ "m": m, "delta": delta }));
    r.assert("pseudo-orbit within modulus", po.delta <= delta, format!("claimed {} against {delta}", po.delta));
    r.assert_ok("pseudo-orbit defects", verify_pseudo_orbit(&po), |_| format!("every step below {}", po.delta));
    let Some(z) = r.assert_ok("synthesis", synthesize_shadow(&gamma, &po, horizon), |z| format!("{z}")) else {
        return Ok(r);
    };
    r.output("point", &z);
    let inside = gamma.contains(&z, MEMBERSHIP_HORIZON);
    r.assert("shadow in subshift", inside, "");
    r.assert_ok("shadow traces pseudo-orbit", verify_shadow(&z, &po, eps), |_| format!("every step within {eps}"));
    Ok(r)
}

pub fn chain(
    from: &Point,
    to: &Point,
    delta: DyadicDistance,
    set: Option<&Path>,
    subshift: Option<&Path>,
    max_len: usize,
) -> Result<Report> {
    let mut r = Report::new("chain");
    r.input("from", from);
    r.input("to", to);
    r.input("delta", delta);
    r.pin("max_len", max_len);
    let z = match set {
        Some(p) => {
            let (spec, z) = load::set(p)?;
            r.input("set", spec);
            z
        }
        None => SetPresentation::finite([from.clone(), to.clone()])?,
    };
    let Some(points) = z.points() else { bail!("chain search needs a finite set") };
    if !points.contains(from) || !points.contains(to) {
        bail!("--from and --to must belong to the searched set");
    }
    r.output("searched", points);
    let gamma = match subshift {
        Some(p) => {
            let (spec, gamma) = load::subshift(p)?;
            r.input("subshift", spec);
            for x in points {
                r.assert(format!("{x} in subshift"), gamma.contains(x, MEMBERSHIP_HORIZON), "");
            }
            Some(gamma)
        }
        None => None,
    };
    match find_delta_chain(&z, from, to, delta, max_len)? {
        Some(c) => {
            let detail = format!("{} entries", c.entries.len());
            r.output("chain", &c);
            r.assert("chain exists", c.is_valid(), detail);
        }
        None => {
            let mut cert = json!({ "searched_set": "no chain within the searched set" });
            if let Some(gamma) = &gamma {
                cert["subshift"] = match window_reachability(gamma, from, to, delta) {
                    Outcome::Absent(c) => json!(c),
                    Outcome::Connected => json!("prefix graph connects the endpoints; no verdict for the subshift"),
                    Outcome::Unknown(why) => json!(format!("no verdict: {why}")),
                };
            }
            r.output("absence_certificate", cert);
            r.assert("chain exists", false, "no chain");
        }
    }
    Ok(r)
}

pub fn ict(path: &Path, delta: DyadicDistance, max_len: usize) -> Result<Report> {
    let (spec, z) = load::set(path)?;
    let mut r = Report::new("ict");
    r.input("set", spec);
    r.input("delta", delta);
    r.pin("max_len", max_len);
    let Some(points) = z.points() else { bail!("ICT checks need a finite set") };
    let holds = is_ict(&z, delta, max_len)?;
    if !holds {
        let missing = points
            .iter()
            .flat_map(|a| points.iter().map(move |b| (a, b)))
            .find(|(a, b)| matches!(find_delta_chain(&z, a, b, delta, max_len), Ok(None)));
        if let Some((a, b)) = missing {
            r.output("missing_chain", json!({ "from": a, "to": b }));
        }
    }
    r.output("stable_exponent", stable_exponent(&z)?);
    r.output("ict_at_every_scale", certify_ict(&z)?);
    r.output("closed_invariant", check_closed_invariant(&z)?);
    r.assert("set is δ-ICT", holds, format!("at δ = {delta}"));
    Ok(r)
}

pub fn realize(
    path: &Path,
    set_path: &Path,
    mode: Mode,
    depth: usize,
    ladder: (usize, usize),
    horizon: usize,
) -> Result<Report> {
    let (spec, gamma) = load::subshift(path)?;
    let (zspec, z) = load::set(set_path)?;
    let mut r = Report::new("realize");
    r.input("subshift", spec);
    r.input("set", zspec);
    r.input("mode", mode);
    r.pin("depths", json!([1, depth]));
    r.pin("ladder", json!({ "t0": ladder.0, "levels": ladder.1 }));
    r.pin("attract", json!({ "eps": DyadicDistance::pow2_neg(ATTRACT_EXPONENT), "horizon": horizon }));
    let mode = match mode {
        Mode::Auto if gamma.is_sbt() && certify_ict(&z).unwrap_or(false) => Mode::Ict,
        Mode::Auto => Mode::Invariant,
        m => m,
    };
    r.output("construction", mode);
    let realized = match mode {
        Mode::Ict => realize_ict(&gamma, &z, horizon).map(|(_, s)| (s.point.clone(), Some(s))),
        _ => realize_invariant_sft(&gamma, &z).map(|x| (x, None)),
    };
    let Some((x, shadow)) = r.assert_ok("construction", realized, |(x, _)| format!("{x}")) else {
        return Ok(r);
    };
    r.output("point", &x);
    r.assert("point in subshift", gamma.contains(&x, MEMBERSHIP_HORIZON), "");
    for n in 1..=depth {
        let ok = omega_equals(&x, &z, n, ladder.0, ladder.1);
        r.assert(format!("omega prefixes at depth {n}"), ok, "ladder intersection equals Z prefixes");
    }
    if let Some(s) = shadow {
        let from = s.modulus(ATTRACT_EXPONENT as usize);
        r.output("attract_from", from);
        let eps = DyadicDistance::pow2_neg(ATTRACT_EXPONENT);
        r.assert_ok("attracting", attracting_check(&x, &z, eps, from, horizon), |_| format!("from index {from}"));
    }
    Ok(r)
}

pub fn omega(x: &Point, depth: usize, t0: usize, levels: usize, set: Option<&Path>) -> Result<Report> {
    let mut r = Report::new("omega");
    r.input("point", x);
    r.pin("ladder", json!({ "t0": t0, "levels": levels }));
    let approx = omega_prefixes(x, depth, t0, levels);
    r.output("omega", &approx);
    if let Some(p) = set {
        let (spec, z) = load::set(p)?;
        r.input("set", spec);
        let want = shiftlab::z_prefixes(&z, depth);
        let detail = if approx.exact { "exact" } else { "ladder approximation" };
        r.assert("omega prefixes equal set prefixes", approx.prefixes == want, detail);
    }
    Ok(r)
}
