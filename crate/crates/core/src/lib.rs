//! Twisted knots as Gauss codes with bars.
//!
//! The crate covers the data model and grammar ([`gauss`]), exact bivariate
//! polynomials ([`poly`]), the index, odd writhe and affine-index polynomial
//! `Q(s,t)` ([`invariants`]), Gauss-level diagram moves ([`moves`]), bounded
//! unknotting search with certified bounds ([`search`]) and the generated
//! knot families ([`families`]).
#![no_std]

extern crate alloc;

pub mod families;
pub mod gauss;
pub mod invariants;
pub mod moves;
pub mod poly;
pub mod search;

pub use gauss::{
    canonicalize, is_trivial, parse_gauss_code, serialize, validate, CanonicalCode, Chord, ChordId, Entry, ParseError,
    Passage, Role, Sign, TrivialKind, TwistedGaussCode, Violation,
};
pub use invariants::{
    affine_data, bounds, crossing_index, odd_writhe, q_delta_class, q_polynomial, AffineData, BarParity, Bounds,
    DeltaClass, DeltaVerdict, UnknownChord,
};
pub use moves::{apply, arc_shift_sites, enumerate_moves, MoveError, MoveInstance, MoveKind};
pub use poly::Poly2;
pub use search::{
    certify, random_code, reduce, unknotting_search, Certificate, CountedSet, SearchConfig, SearchOutcome, SearchTrace,
};
