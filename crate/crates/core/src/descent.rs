//! Complete 2-descent images and rank lower bounds for curves with full
//! rational 2-torsion.
//!
//! For roots `e1, e2, e3` the map `P -> (x - e1, x - e2, x - e3)` into
//! `(Q*/Q*^2)^3` is a homomorphism with kernel `2E(Q)`. Points are
//! independent modulo `2E(Q)` together with the torsion when their images
//! span a space of the full dimension; the torsion contributes exactly two
//! dimensions when the 2-torsion is full.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::factor::FactorBudget;
use crate::height::{gram_regulator_with, HeightContext};
use crate::rational::{square_class_with_budget, Rational};
use crate::sqclass::{f2_rank, SquareClassBasis};
use crate::torsion::{descent_components, root_form, two_torsion_point};
use crate::weierstrass::{Curve, Point};

/// Squarefree representatives of the three descent components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClassVector(pub [BigInt; 3]);

impl fmt::Display for SquareClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.0;
        write!(f, "({a},{b},{c})")
    }
}

/// The descent image of `p` as squarefree integers. Needs complete
/// factorization of every component.
pub fn descent_map(e: &Curve<Rational>, p: &Point<Rational>, budget: FactorBudget) -> Result<SquareClassVector> {
    if !e.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let roots = root_form(e)?;
    let Some(x) = p.x() else {
        return Ok(SquareClassVector(std::array::from_fn(|_| BigInt::from(1))));
    };
    let comps = descent_components(x, &roots);
    let mut out = Vec::with_capacity(3);
    for c in &comps {
        out.push(square_class_with_budget(c, budget)?);
    }
    Ok(SquareClassVector(out.try_into().unwrap()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Independent,
    Inconclusive,
}

/// F2 images of points over a common coprime base, no factoring needed.
struct DescentImages {
    basis: SquareClassBasis,
    roots: [Rational; 3],
}

impl DescentImages {
    fn new(e: &Curve<Rational>, points: &[Point<Rational>]) -> Result<Self> {
        let roots = root_form(e)?;
        let mut values = Vec::new();
        for p in points {
            if !e.contains(p) {
                return Err(Error::PointNotOnCurve);
            }
            if let Some(x) = p.x() {
                values.extend(descent_components(x, &roots));
            }
        }
        for r in &roots {
            values.extend(descent_components(r, &roots));
        }
        Ok(DescentImages { basis: SquareClassBasis::new(values.iter()), roots })
    }

    fn image(&self, p: &Point<Rational>) -> Option<Vec<bool>> {
        let Some(x) = p.x() else {
            return Some(vec![false; 3 * self.basis.dim()]);
        };
        let mut v = Vec::with_capacity(3 * self.basis.dim());
        for c in descent_components(x, &self.roots) {
            v.extend(self.basis.vector(&c)?);
        }
        Some(v)
    }
}

fn with_torsion(e: &Curve<Rational>, torsion: &[Point<Rational>]) -> Result<Vec<Point<Rational>>> {
    let roots = root_form(e)?;
    let mut t: Vec<Point<Rational>> = roots.iter().map(|r| two_torsion_point(e, r)).collect();
    t.extend(torsion.iter().cloned());
    Ok(t)
}

/// Whether `points` are independent in `E(Q)/2E(Q)` modulo the subgroup
/// generated by the torsion points (the 2-torsion is always included).
pub fn independent_mod_2e(
    e: &Curve<Rational>,
    points: &[Point<Rational>],
    torsion: &[Point<Rational>],
) -> Result<Verdict> {
    let tors = with_torsion(e, torsion)?;
    let all: Vec<Point<Rational>> = tors.iter().chain(points).cloned().collect();
    let img = DescentImages::new(e, &all)?;
    let Some(rows) = all.iter().map(|p| img.image(p)).collect::<Option<Vec<_>>>() else {
        return Ok(Verdict::Inconclusive);
    };
    let t = f2_rank(&rows[..tors.len()]);
    let total = f2_rank(&rows);
    Ok(if total == t + points.len() { Verdict::Independent } else { Verdict::Inconclusive })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankOptions {
    pub eps: f64,
    pub use_heights: bool,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions { eps: 1e-6, use_heights: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Descent,
    Regulator,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Descent => "descent",
            Method::Regulator => "regulator",
        })
    }
}

/// A certified lower bound: the points at `subset` are independent.
#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate {
    pub rank: usize,
    pub method: Method,
    pub subset: Vec<usize>,
    /// Regulator of the subset and its error radius, when heights were used.
    pub regulator: Option<(f64, f64)>,
}

impl fmt::Display for RankCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.subset.iter().map(|i| i.to_string()).collect();
        write!(f, "rank>={} method={} subset=[{}]", self.rank, self.method, idx.join(","))?;
        if let Some((r, err)) = self.regulator {
            write!(f, " regulator={r:.6e}+-{err:.1e}")?;
        }
        Ok(())
    }
}

/// Greedy lower bound for the rank from the given points. Descent images
/// are tried first; points they cannot separate are tested with the
/// regulator of the enlarged subset.
pub fn rank_lower_bound(
    e: &Curve<Rational>,
    points: &[Point<Rational>],
    torsion: &[Point<Rational>],
    opts: &RankOptions,
) -> Result<RankCertificate> {
    let tors = with_torsion(e, torsion)?;
    let all: Vec<Point<Rational>> = tors.iter().chain(points).cloned().collect();
    let img = DescentImages::new(e, &all)?;
    let mut rows: Vec<Vec<bool>> = tors.iter().filter_map(|p| img.image(p)).collect();
    let base_dim = f2_rank(&rows);
    let mut subset = Vec::new();
    let mut rest = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let Some(v) = img.image(p) else {
            rest.push(i);
            continue;
        };
        rows.push(v);
        if f2_rank(&rows) == base_dim + subset.len() + 1 {
            subset.push(i);
        } else {
            rows.pop();
            rest.push(i);
        }
    }
    // with full 2-torsion the torsion image has dimension 2
    let descent_rank = (base_dim + subset.len()).saturating_sub(2);
    if descent_rank < subset.len() {
        subset.truncate(descent_rank);
    }
    let mut method = Method::Descent;
    let mut regulator = None;
    if opts.use_heights && !rest.is_empty() {
        let ctx = HeightContext::new(e);
        for i in rest {
            let mut trial = subset.clone();
            trial.push(i);
            let pts: Vec<Point<Rational>> = trial.iter().map(|&k| points[k].clone()).collect();
            let (det, err) = gram_regulator_with(&ctx, &pts, opts.eps)?;
            if det > err {
                subset = trial;
                method = Method::Regulator;
                regulator = Some((det, err));
            }
        }
        if method == Method::Regulator {
            subset.sort_unstable();
        }
    }
    Ok(RankCertificate { rank: subset.len(), method, subset, regulator })
}
