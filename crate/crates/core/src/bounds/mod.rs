//! Recoverability bounds: lemma vectors, generic split-point bounds, per-theorem
//! certificates and the sufficiency equivalence suite.

mod certificate;
mod equivalence;
mod generic;
mod instance;
mod vectors;

pub use certificate::{
    certificate, k_forward_quasi, k_reverse_entropy, k_reverse_quasi, BoundCertificate, BoundParams,
    CertificateContext, ParamFamily, TheoremId, DEFAULT_TOLERANCE, SATURATION_TOL,
};
pub use equivalence::{
    equivalence_suite, standard_sample, Condition, EquivalenceReport, EquivalenceResidual, ROTATIONS,
    SANDWICHED_ORDERS,
};
pub use generic::{generic_recovery_bound, optimized_value, BoundDirection, RecoveryBound, NEGATIVE_DIFFERENCE_TOL};
pub use instance::{Instance, InstanceRecord};
pub use vectors::{
    f_lambda, hs_isometry_v, lemma_key_residual, u_t_vector, v_t_vector, w_t_vector, BridgeCheck, BridgeKind,
    KeyResidual, LemmaSetup, ISOMETRY_TOL,
};
