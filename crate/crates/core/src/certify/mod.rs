//! Certificates for the witness `φ_{s,t}`: partial-transpose checks, the
//! full spanning property, exposedness of the ray through `C_φ`, PPT
//! entangled states it detects, and classification of its zeros.

mod classify;
mod detect;
mod exposed;
mod linalg;
mod ppt;
mod spanning;

pub use classify::{kernel_classify, Classification};
pub use detect::{find_ppt_entangled, perturbation_check, DetectionCertificate, DirectionKind, PerturbationReport};
pub use exposed::{
    constraint_matrices, dual_face_span, exposedness_certificate, prune_directions, ConstraintSet, DualFaceSpan,
    EqualityCase, ExposednessCertificate, ExposednessOptions, PruneRecord,
};
pub use linalg::{herm_from_vec, herm_to_vec, nullspace, Nullspace};
pub use ppt::{ppt_check, PptReport, PPT_TOL};
pub use spanning::{
    spanning_check, spanning_check_families, spanning_check_vectors, SpanningReport, SubsetRank, RANK_TOL,
};
