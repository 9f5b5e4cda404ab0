//! Re-verification of the embedded records: models, torsion, and rank
//! lower bounds from the published points.

use std::time::Instant;

use crate::dataset::{paper_dataset, PaperRecord, TAGS};
use crate::descent::{rank_lower_bound, RankOptions};
use crate::error::Result;
use crate::factor::FactorBudget;
use crate::height::gram_regulator;
use crate::minimal::minimal_model;
use crate::rational::{rat, Rational};
use crate::torsion::{point_order, torsion_subgroup, Certainty};
use crate::triples::{canonical_points, extend_to_quadruple, induced_curve, make_triple};
use crate::weierstrass::{Curve, Point};

/// Printed at the end of every verification report.
pub const EXACT_RANK_NOTE: &str = "ranks: only lower bounds are certified (descent images or regulators \
of the listed points) together with exact torsion; upper bounds for the rank are not computed";

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub long: bool,
    pub eps: f64,
    pub prime_count: usize,
    pub budget: FactorBudget,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { long: false, eps: 1e-6, prime_count: 20, budget: FactorBudget::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub scope: String,
    pub name: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }
}

/// Every scope `verify` accepts.
pub fn scopes() -> Vec<&'static str> {
    let mut v = vec!["all", "identities"];
    v.extend(TAGS);
    v
}

/// `(n1, n2)` expected from the record tag.
fn expected_shape(tag: &str) -> (u32, u32) {
    match &tag[..4] {
        "z2z4" => (2, 4),
        "z2z6" => (2, 6),
        "z2z8" => (2, 8),
        _ => (2, 2),
    }
}

/// Points of finite order, their count, and whether they exhaust the group.
fn check_torsion(rep: &mut Report, e: &Curve<Rational>, listed: &[Point<Rational>], rec: &PaperRecord, opts: &VerifyOptions) -> Vec<Point<Rational>> {
    let g = torsion_subgroup(e, opts.prime_count);
    let (n1, n2) = expected_shape(&rec.tag);
    let exact = g.certainty == Certainty::Exact;
    rep.check(
        "torsion group",
        (g.n1, g.n2) == (n1, n2) && exact,
        format!("{g} ({:?}, reduction bound {})", g.certainty, g.bound),
    );
    if !listed.is_empty() {
        let finite = listed.iter().all(|p| matches!(point_order(e, p), Ok(Some(_))));
        let elements = g.elements(e);
        let all_in = listed.iter().all(|p| elements.contains(p));
        rep.check(
            "torsion points",
            finite && all_in && listed.len() as u64 + 1 == g.order(),
            format!("{} listed + O, group order {}", listed.len(), g.order()),
        );
    }
    g.generators
}

pub fn verify_record(rec: &PaperRecord, opts: &VerifyOptions) -> Report {
    let start = Instant::now();
    let mut rep = Report { scope: rec.tag.clone(), name: rec.name.clone(), checks: Vec::new(), seconds: 0.0 };
    if let Some(p) = &rec.printed {
        let valid = p.parse::<crate::triples::Triple>().is_ok();
        rep.check("printed triple", !valid, format!("{p} fails validation as printed; using {}", rec.triple));
    }
    if let Some((f, k)) = &rec.family {
        let ok = f.member(k).map(|t| t.same_up_to_sign(&rec.triple)).unwrap_or(false);
        rep.check("family member", ok, format!("{f} at {k}"));
    }
    let ep = match induced_curve(&rec.triple) {
        Ok(e) => e,
        Err(err) => {
            rep.check("induced curve", false, err.to_string());
            rep.seconds = start.elapsed().as_secs_f64();
            return rep;
        }
    };
    let model = match &rec.curve {
        Some(c) => {
            let iso = ep.find_isomorphism(c).is_some();
            rep.check("isomorphic to published model", iso, c.to_string());
            if let Ok(m) = minimal_model(&ep, opts.budget) {
                rep.check(
                    "minimal model",
                    m.curve == *c,
                    if m.certified { "certified".to_string() } else { "not certified".to_string() },
                );
            }
            c.clone()
        }
        None => ep,
    };
    let gens = check_torsion(&mut rep, &model, &rec.torsion, rec, opts);
    if !rec.points.is_empty() {
        let ro = RankOptions { eps: opts.eps, use_heights: opts.long };
        let need = if rec.tag == "z2z8-big" && !opts.long { 2 } else { rec.points.len() };
        match rank_lower_bound(&model, &rec.points, &gens, &ro) {
            Ok(c) => rep.check("rank lower bound", c.rank >= need, format!("{c} (need {need}, claimed {})", rec.claimed_rank)),
            Err(err) => rep.check("rank lower bound", false, err.to_string()),
        }
        if opts.long {
            match gram_regulator(&model, &rec.points, opts.eps) {
                Ok((det, err)) => rep.check("regulator", det > err, format!("{det:.6e} +- {err:.1e}")),
                Err(err) => rep.check("regulator", false, err.to_string()),
            }
        }
    }
    rep.seconds = start.elapsed().as_secs_f64();
    rep
}

/// The construction identities on small triples.
pub fn verify_identities() -> Report {
    let start = Instant::now();
    let mut rep = Report { scope: "identities".into(), name: "construction".into(), checks: Vec::new(), seconds: 0.0 };
    let fermat = make_triple(rat(1), rat(3), rat(8)).unwrap();
    let q2r = [(1, 3, 8), (2, 4, 12), (3, 5, 16), (1, 8, 120)].iter().all(|&(a, b, c)| {
        make_triple(rat(a), rat(b), rat(c)).map(|t| canonical_points(&t).is_ok()).unwrap_or(false)
    });
    rep.check("Q = 2R", q2r, "{1,3,8}, {2,4,12}, {3,5,16}, {1,8,120}");
    let euler = [(1, 3, 8), (2, 4, 12), (3, 5, 16)].iter().all(|&(a, b, c)| {
        let t = make_triple(rat(a), rat(b), rat(c)).unwrap();
        let e = induced_curve(&t).unwrap();
        let pts = canonical_points(&t).unwrap();
        e.double(&pts.p).unwrap() == e.neg(&e.double(&pts.r).unwrap())
    });
    rep.check("2P = -2R for a+b+2r", euler, "{1,3,8}, {2,4,12}, {3,5,16}");
    let ext = extend_to_quadruple(&fermat).map(|x| {
        let mut v = [x.d, x.e];
        v.sort();
        v == [rat(0), rat(120)]
    });
    rep.check("extension of {1,3,8}", ext == Ok(true), "{0, 120}");
    rep.seconds = start.elapsed().as_secs_f64();
    rep
}

/// Reports for a scope from `scopes()`; `None` for an unknown scope.
pub fn verify_scope(scope: &str, opts: &VerifyOptions) -> Option<Result<Vec<Report>>> {
    if !scopes().contains(&scope) {
        return None;
    }
    Some((|| {
        let mut out = Vec::new();
        if scope == "all" || scope == "identities" {
            out.push(verify_identities());
        }
        for r in paper_dataset()? {
            if scope == "all" || scope == r.tag {
                out.push(verify_record(r, opts));
            }
        }
        Ok(out)
    })())
}
