//! Exact-arithmetic engine for the generating-function identities attached
//! to Hilbert schemes of points on surfaces.
//!
//! The crate is organized around a truncated power-series ring over exact
//! rationals ([`series`]), with the surface data carried by a finite
//! Frobenius-algebra model ([`surface`]). On top of that substrate:
//!
//! - [`hilb`] expands the Betti/Euler generating functions of the Hilbert
//!   schemes `S^[n]` and their symmetric-power stratification,
//! - [`fock`] and [`virasoro`] realize the Heisenberg and Virasoro operators
//!   on the Fock space over the model and verify their commutation
//!   relations exactly,
//! - [`orbifold`] computes orbifold Euler numbers and age-graded dimensions
//!   for symmetric products, with a brute-force commuting-pair cross-check,
//! - [`dmvv`] expands and inverts the elliptic-genus product formula,
//! - [`curves`] builds the rational-curve-counting series, quasimodular
//!   ingredients, and the node-polynomial machinery,
//! - [`walls`] handles the lattice combinatorics of walls and chambers.
//!
//! All values are immutable and all operations are pure; everything is safe
//! to use concurrently. Where modules parallelize internally the result is
//! bit-exact deterministic.

pub mod rat;
pub mod series;
pub mod laurent;
pub mod invariants;
pub mod eta;
pub mod partitions;
pub mod linalg;
pub mod surface;
pub mod hilb;
pub mod orbifold;
pub mod report;
pub mod fock;
pub mod virasoro;
pub mod dmvv;
pub mod curves;
pub mod walls;

pub use curves::{BSeriesPair, Invariants, KnownCount, NodePolynomial};
pub use dmvv::DmvvTable;
pub use eta::EtaPower;
pub use fock::{FockState, HeisenbergOp, Monomial};
pub use hilb::PoincareTable;
pub use invariants::InvariantPoly;
pub use laurent::LaurentPoly;
pub use orbifold::OrbifoldDatum;
pub use partitions::Partition;
pub use rat::Rat;
pub use report::CheckReport;
pub use series::{Coeff, PowerSeries, SeriesError};
pub use surface::{FrobeniusModel, LineBundleData, SurfaceFixture, SurfaceTopology};
pub use virasoro::VirasoroOp;
pub use walls::Lattice;
