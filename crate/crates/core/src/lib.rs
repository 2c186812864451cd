//! Lower bounds for sparse polynomials via sums of nonnegative circuits, computed
//! with a second-order cone program and turned into exact rational certificates.

pub mod certify;
pub mod cover;
pub mod error;
pub mod gen;
pub mod linalg;
pub mod mediated;
pub mod poly;
pub mod rat;
pub mod socp;

pub use certify::{
    certify_bound, exact_sobs, verify_certificate, CertMode, CertifyOptions, Certified, ExactTriple, RejectReason,
    SobsCertificate, Verdict,
};
pub use cover::{simplex_cover, AnchorRule, SimplexCoverResult};
pub use error::{Error, Result};
pub use gen::{InstanceClass, InstanceSpec};
pub use mediated::{med_seq, med_set, med_set_odd, MediatedSet, MediatedTriple, RationalPoint};
pub use poly::{support_partition, to_pn, Circuit, Exponent, SparsePoly, SupportPartition};
pub use rat::Rational;
pub use socp::{
    assemble, build_plan, lower_bound, ConeTriplePlan, LowerBound, Mode, PhaseTimings, PipelineOptions, SocpProblem,
    SocpSolution, SolverSettings, SolverStatus,
};
