//! Building rigidity circuits and Assur graphs: construction moves,
//! enumeration by vertex count, and replayable certificates.

mod certificate;
mod enumerate;
mod ops;

pub use certificate::{
    certify, certify_within, replay, verify_certificate, Base, Certificate, ConstructionStep, Replayed,
    DEFAULT_CERTIFY_BUDGET,
};
pub use enumerate::{
    assur_sweep, circuit_sweep, combinations, enumerate_assur, enumerate_circuits, pinned_isostatic_sweep,
    set_partitions, AssurCatalog, CircuitCatalog, ENUMERATION_MAX_VERTICES,
};
pub use ops::{
    edge_split, pin_rearrangement, pinned_edge_split, pinned_vertex_split, two_sum, two_sum_pinned,
    vertex_addition, vertex_split,
};
