//! The per-triple pipeline and its JSON record.

use std::time::Instant;

use serde::Serialize;
use tricurve::descent::{rank_lower_bound, RankOptions};
use tricurve::factor::FactorBudget;
use tricurve::families::FamilyId;
use tricurve::height::naive_point_search;
use tricurve::mestre_nagao::{mestre_nagao_sum, SieveScore};
use tricurve::minimal::minimal_model;
use tricurve::torsion::{torsion_subgroup, Certainty};
use tricurve::triples::{canonical_points, extend_to_quadruple, induced_curve, Triple};
use tricurve::{Error, Point, Rational};

use crate::config::Config;

pub const SCHEMA_VERSION: u32 = 1;

/// Search points passed to the rank certificate, smallest x first.
const MAX_SEARCH_POINTS: usize = 24;

#[derive(Serialize)]
pub struct SieveJson {
    #[serde(rename = "N")]
    pub n: u64,
    pub score: f64,
    pub primes_used: usize,
    pub skipped_bad: usize,
}

impl From<&SieveScore> for SieveJson {
    fn from(s: &SieveScore) -> Self {
        SieveJson { n: s.n, score: s.score, primes_used: s.primes_used, skipped_bad: s.skipped_bad }
    }
}

#[derive(Serialize)]
pub struct TorsionJson {
    pub group: String,
    pub n1: u32,
    pub n2: u32,
    pub certainty: &'static str,
    pub bound: u64,
}

#[derive(Serialize)]
pub struct RankJson {
    pub lower_bound: usize,
    pub method: String,
    pub subset: Vec<usize>,
    pub regulator: Option<[f64; 2]>,
}

#[derive(Serialize)]
pub struct ExtensionJson {
    pub d: String,
    pub e: String,
}

#[derive(Serialize)]
pub struct SearchRecord {
    pub version: u32,
    pub family: Option<String>,
    pub parameter: Option<String>,
    pub triple: String,
    pub induced_curve: Option<String>,
    pub curve: Option<String>,
    pub minimal: bool,
    pub certified: bool,
    pub sieve: Option<SieveJson>,
    pub torsion: Option<TorsionJson>,
    pub rank: Option<RankJson>,
    pub points: Vec<[String; 2]>,
    pub search_count: usize,
    pub extension: Option<ExtensionJson>,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl SearchRecord {
    fn empty(triple: &Triple, family: Option<(FamilyId, &Rational)>) -> Self {
        SearchRecord {
            version: SCHEMA_VERSION,
            family: family.map(|(f, _)| f.to_string()),
            parameter: family.map(|(_, p)| p.to_string()),
            triple: triple.to_string(),
            induced_curve: None,
            curve: None,
            minimal: false,
            certified: false,
            sieve: None,
            torsion: None,
            rank: None,
            points: Vec::new(),
            search_count: 0,
            extension: None,
            error: None,
            timing_ms: None,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

fn point_json(p: &Point<Rational>) -> [String; 2] {
    match (p.x(), p.y()) {
        (Some(x), Some(y)) => [x.to_string(), y.to_string()],
        _ => ["inf".into(), "inf".into()],
    }
}

/// Runs every stage; a failing stage is recorded in `error` and ends the run.
pub fn process(
    triple: &Triple,
    family: Option<(FamilyId, &Rational)>,
    score: Option<SieveScore>,
    cfg: &Config,
) -> SearchRecord {
    let start = Instant::now();
    let mut rec = SearchRecord::empty(triple, family);
    if let Err(e) = run(triple, score, cfg, &mut rec) {
        rec.error = Some(e.to_string());
    }
    if cfg.timings {
        rec.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

fn run(triple: &Triple, score: Option<SieveScore>, cfg: &Config, rec: &mut SearchRecord) -> Result<(), Error> {
    let ep = induced_curve(triple)?;
    rec.induced_curve = Some(ep.to_string());
    let (e, map) = match minimal_model(&ep, FactorBudget(cfg.factor_budget)) {
        Ok(m) => {
            rec.minimal = true;
            rec.certified = m.certified;
            (m.curve, Some(m.map))
        }
        Err(_) => (ep.clone(), None),
    };
    rec.curve = Some(e.to_string());
    let to_e = |p: &Point<Rational>| map.as_ref().map_or_else(|| p.clone(), |m| m.map_point(p));

    let g = torsion_subgroup(&e, cfg.primes);
    rec.torsion = Some(TorsionJson {
        group: g.to_string(),
        n1: g.n1,
        n2: g.n2,
        certainty: match g.certainty {
            Certainty::Exact => "exact",
            Certainty::UpperBoundOnly => "upper_bound_only",
        },
        bound: g.bound,
    });

    let score = score.unwrap_or_else(|| mestre_nagao_sum(&ep, cfg.n));
    rec.sieve = Some(SieveJson::from(&score));

    let pts = canonical_points(triple)?;
    let found = naive_point_search(&e, cfg.height_bound);
    rec.search_count = found.len();
    let mut candidates: Vec<Point<Rational>> = vec![to_e(&pts.p), to_e(&pts.r)];
    for p in found {
        if candidates.len() >= MAX_SEARCH_POINTS + 2 {
            break;
        }
        if !candidates.contains(&p) {
            candidates.push(p);
        }
    }
    let opts = RankOptions { eps: cfg.eps, use_heights: true };
    let cert = rank_lower_bound(&e, &candidates, &g.generators, &opts)?;
    rec.points = cert.subset.iter().map(|&i| point_json(&candidates[i])).collect();
    rec.rank = Some(RankJson {
        lower_bound: cert.rank,
        method: cert.method.to_string(),
        subset: cert.subset.clone(),
        regulator: cert.regulator.map(|(r, err)| [r, err]),
    });

    let ext = extend_to_quadruple(triple)?;
    rec.extension = Some(ExtensionJson { d: ext.d.to_string(), e: ext.e.to_string() });
    Ok(())
}

/// True for errors caused by the input rather than by a computation.
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::NotDiophantine(_)
            | Error::NotDiophantinePair
            | Error::ZeroEntry
            | Error::DegenerateTriple
            | Error::DegenerateParameter(_)
    )
}

