//! Certified bounds for the analytic inequalities: interval enclosures,
//! exact piecewise-quadratic maxima, branch and bound with replayable
//! certificates, and exact identity suites.

mod bnb;
mod forms;
mod functions;
mod identities;
mod interval;
mod targets;

pub use bnb::{
    certify_sup, replay, Certificate, CertificateStats, CertifyOptions, FailureReport, Leaf, LeafMethod,
    ReplayReport, SurvivingBox, WitnessPoint, CERTIFICATE_VERSION, DEFAULT_CERTIFY_BUDGET,
};
pub use forms::{max_at_most, solve, Affine, Quadratic};
pub use functions::{
    enclose_f, enclose_g, enclose_u, enclose_v, eval_f, eval_g, eval_u, eval_v, f, f_claim1, g, u, v, Atom,
    Expr, Poly, Term,
};
pub use identities::{
    critical_point_report, verify_balancing_identity, verify_claim1_specialization, verify_g_balancing,
    verify_min_side, verify_xy_lemma, CriticalPoint, CriticalPointReport, IdentityReport,
};
pub use interval::{g_interval, interval, IntervalValue, ROUND_BITS};
pub use targets::{
    above_phi, below_phi, claim1, claim2_u, claim2_v, lemma_inequality, phi_bracket, target_by_name, Target,
    PHI_MAX_DEN, TARGET_NAMES,
};
