//! Embedded published records: triples, minimal models and point lists.
//! The text resource is checksummed and every listed point is checked on
//! its curve at load.

use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::families::FamilyId;
use crate::rational::{parse_rational, Rational};
use crate::triples::Triple;
use crate::weierstrass::{Curve, Point};

const RECORDS: &str = include_str!("../data/records.txt");
pub const RECORDS_SHA256: &str = "fd11996932d196d8ca539e45beeba683c440942cb45aebdf1841eb69c1b4ab0b";

/// Scope names accepted by `records_in`.
pub const TAGS: [&str; 9] = [
    "z2z2-rank9",
    "z2z2-rank8",
    "z2z4-rank5",
    "z2z4-rank7",
    "z2z6-rank3",
    "z2z6-rank4",
    "z2z8-connell",
    "z2z8-rank3",
    "z2z8-big",
];

#[derive(Clone, Debug, PartialEq)]
pub struct PaperRecord {
    pub tag: String,
    pub name: String,
    pub family: Option<(FamilyId, Rational)>,
    pub triple: Triple,
    /// The published text of the triple when it does not validate as printed.
    pub printed: Option<String>,
    pub curve: Option<Curve<Rational>>,
    pub torsion: Vec<Point<Rational>>,
    pub points: Vec<Point<Rational>>,
    pub claimed_rank: u32,
}

#[derive(Default)]
struct Draft {
    tag: String,
    name: String,
    family: Option<(FamilyId, Rational)>,
    triple: Option<Triple>,
    printed: Option<String>,
    curve: Option<Curve<Rational>>,
    torsion: Vec<String>,
    points: Vec<String>,
    rank: Option<u32>,
}

fn corrupt(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::DatasetCorrupt(format!("line {line}: {msg}"))
}

fn finish(d: Draft, line: usize) -> Result<PaperRecord> {
    let triple = match (d.triple, &d.family) {
        (Some(t), Some((f, p))) => {
            let m = f.member(p).map_err(|e| corrupt(line, e))?;
            if !m.same_up_to_sign(&t) {
                return Err(corrupt(line, format!("{} does not match {f} at {p}", t)));
            }
            t
        }
        (Some(t), None) => t,
        (None, Some((f, p))) => f.member(p).map_err(|e| corrupt(line, e))?,
        (None, None) => return Err(corrupt(line, "record without triple or family")),
    };
    let parse_points = |v: &[String]| -> Result<Vec<Point<Rational>>> {
        v.iter()
            .map(|s| match &d.curve {
                Some(e) => Point::parse_on(s, e).map_err(|err| corrupt(line, format!("{s}: {err}"))),
                None => Err(corrupt(line, "points listed without a curve")),
            })
            .collect()
    };
    let torsion = parse_points(&d.torsion)?;
    let points = parse_points(&d.points)?;
    Ok(PaperRecord {
        tag: d.tag,
        name: d.name,
        family: d.family,
        triple,
        printed: d.printed,
        curve: d.curve,
        torsion,
        points,
        claimed_rank: d.rank.ok_or_else(|| corrupt(line, "missing rank"))?,
    })
}

/// Parses the record format documented at the top of the resource.
pub fn parse_records(text: &str) -> Result<Vec<PaperRecord>> {
    let mut out = Vec::new();
    let mut cur: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (key, rest) = l.split_once(' ').unwrap_or((l, ""));
        let rest = rest.trim();
        if key == "record" {
            if cur.is_some() {
                return Err(corrupt(line, "nested record"));
            }
            let (tag, name) = rest.split_once(' ').ok_or_else(|| corrupt(line, "record needs tag and name"))?;
            cur = Some(Draft { tag: tag.into(), name: name.trim().into(), ..Draft::default() });
            continue;
        }
        let d = cur.as_mut().ok_or_else(|| corrupt(line, "field outside a record"))?;
        match key {
            "family" => {
                let (f, p) = rest.split_once(' ').ok_or_else(|| corrupt(line, "family needs id and parameter"))?;
                let f: FamilyId = f.parse().map_err(|e| corrupt(line, e))?;
                d.family = Some((f, parse_rational(p).map_err(|e| corrupt(line, e))?));
            }
            "triple" => d.triple = Some(rest.parse().map_err(|e| corrupt(line, e))?),
            "printed" => d.printed = Some(rest.into()),
            "curve" => d.curve = Some(rest.parse().map_err(|e| corrupt(line, e))?),
            "torsion" => d.torsion.push(rest.into()),
            "point" => d.points.push(rest.into()),
            "rank" => d.rank = Some(rest.parse().map_err(|_| corrupt(line, "bad rank"))?),
            "end" => out.push(finish(cur.take().unwrap(), line)?),
            _ => return Err(corrupt(line, format!("unknown field {key:?}"))),
        }
    }
    if cur.is_some() {
        return Err(Error::DatasetCorrupt("unterminated record".into()));
    }
    Ok(out)
}

pub fn checksum(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn load() -> Result<Vec<PaperRecord>> {
    let sum = checksum(RECORDS);
    if sum != RECORDS_SHA256 {
        return Err(Error::DatasetCorrupt(format!("checksum {sum}")));
    }
    parse_records(RECORDS)
}

/// The embedded dataset, parsed and validated once.
pub fn paper_dataset() -> Result<&'static [PaperRecord]> {
    static DATA: OnceLock<Result<Vec<PaperRecord>>> = OnceLock::new();
    match DATA.get_or_init(load) {
        Ok(v) => Ok(v),
        Err(e) => Err(e.clone()),
    }
}

pub fn records_in(tag: &str) -> Result<Vec<&'static PaperRecord>> {
    Ok(paper_dataset()?.iter().filter(|r| r.tag == tag).collect())
}

pub fn record(name: &str) -> Result<&'static PaperRecord> {
    paper_dataset()?
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| Error::Parse(format!("no record named {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::triples::induced_curve;

    #[test]
    fn loads_and_validates() {
        let data = paper_dataset().unwrap();
        assert_eq!(data.len(), 52);
        for tag in TAGS {
            assert!(!records_in(tag).unwrap().is_empty(), "{tag}");
        }
        for r in data {
            assert!(TAGS.contains(&r.tag.as_str()), "{}", r.tag);
            if let Some(e) = &r.curve {
                for p in r.torsion.iter().chain(&r.points) {
                    assert!(e.contains(p));
                }
            }
        }
        let c = record("connell").unwrap();
        assert_eq!(c.torsion.len(), 15);
        assert!(c.torsion.contains(&Point::new(rat(2346026160), rat(-1173013080))));
        assert_eq!(c.points.len(), 3);
        let r9 = record("kpm-3593/2323").unwrap();
        assert_eq!(r9.claimed_rank, 9);
        assert_eq!((r9.torsion.len(), r9.points.len()), (3, 9));
        let big = record("a-451352/974415").unwrap();
        assert!(big.points[2].x().unwrap().numer().to_string().len() > 90);
    }

    #[test]
    fn printed_forms_are_flagged() {
        let r = record("doubled-12/5").unwrap();
        let printed: Result<Triple> = r.printed.as_ref().unwrap().parse();
        assert!(matches!(printed, Err(Error::NotDiophantine(_))));
        let c = record("connell").unwrap();
        let printed: Result<Triple> = c.printed.as_ref().unwrap().parse();
        assert!(printed.is_err());
        assert!(induced_curve(&c.triple).is_ok());
    }

    #[test]
    fn corruption_is_detected() {
        let bad = RECORDS.replacen("[391223566189142,0]", "[391223566189143,0]", 1);
        assert!(matches!(parse_records(&bad), Err(Error::DatasetCorrupt(_))));
        assert_ne!(checksum(&bad), RECORDS_SHA256);
        let bad = RECORDS.replacen("rank 9\nend", "rank 9", 1);
        assert!(parse_records(&bad).is_err());
        let bad = "record x y\nfamily K_PLUSMINUS 2\ntriple {1,3,8}\nrank 1\nend\n";
        assert!(matches!(parse_records(bad), Err(Error::DatasetCorrupt(_))));
    }
}
