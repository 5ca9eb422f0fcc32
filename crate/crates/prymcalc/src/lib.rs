//! Exact divisor-class calculus on moduli spaces of curves and of
//! (pointed, 2-branched) Prym curves.
//!
//! The core types are generic over an exact [`Scalar`]; the aliases at the
//! crate root fix it to arbitrary-precision rationals, which is what the
//! catalog, certificates and command-line front end use.

pub mod bound;
pub mod catalog;
pub mod certificates;
pub mod class;
pub mod error;
pub mod grammar;
pub mod linalg;
pub mod morphisms;
pub mod pd;
pub mod reference;
pub mod scalar;
pub mod series;
pub mod singularity;
pub mod space;
pub mod test_curves;

pub use bound::CoeffBound;
pub use catalog::{Catalog, CatalogEntry};
pub use certificates::{Certificate, Source, Verdict};
pub use class::DivisorClass;
pub use error::{Error, Result};
pub use grammar::{format_class, parse_class, parse_generator};
pub use linalg::Affine;
pub use morphisms::PullbackMap;
pub use scalar::Scalar;
pub use space::{Family, GeneratorId, Label, MarkSet, SpaceId};
pub use pd::Partition;

pub use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;
pub type Class = DivisorClass<Rational>;
pub type Bound = CoeffBound<Rational>;
pub type Map = PullbackMap<Rational>;
