//! Exact arithmetic on elliptic curves induced by rational Diophantine
//! triples: group law, torsion, 2-descent, canonical heights and
//! Mestre–Nagao sieving.

pub mod dataset;
pub mod descent;
pub mod error;
pub mod factor;
pub mod families;
pub mod height;
pub mod mestre_nagao;
pub mod minimal;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod sqclass;
pub mod torsion;
pub mod triples;
pub mod verify;
pub mod weierstrass;

pub use error::{Error, Result};
pub use rational::Rational;
pub use weierstrass::{Curve, Invariants, ModelMap, Point};

pub type CurveQ = Curve<Rational>;
pub type PointQ = Point<Rational>;
pub type MapQ = ModelMap<Rational>;
