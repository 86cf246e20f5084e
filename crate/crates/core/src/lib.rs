//! Twisted Weyl group combinatorics and exact certificates for the
//! affineness criterion of Deligne-Lusztig varieties attached to minimal
//! length elements.

pub mod classes;
pub mod criterion;
pub mod error;
pub mod exactnum;
pub mod papertables;
pub mod reduce;
pub mod rootdata;
pub mod weyl;

pub use error::{Error, Result};
pub use exactnum::{quad_cmp, quad_sign, QuadExt, Rational};
pub use rootdata::{
    apply_twist_to_coweight, build_twist, pairing, Coweight, Family, GroupDesc, RootSystem, Twist,
};
pub use classes::{DeltaClass, Direction};
pub use criterion::{check_certificate, Certificate, Form, IneqSystem, Verdict, Witness};
pub use papertables::{AggregateReport, CaseReport, Verifier, VerifyOptions};
pub use reduce::{reduce_certify_class, reduce_pipeline, LocalCert, ReduceOutcome};
pub use weyl::{word_from_bracket, EltKey, WeylElt, WeylGroup};
