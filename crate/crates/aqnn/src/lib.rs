//! Numerical toolkit for attractor quantum neural networks modeled as
//! quantum channels.
//!
//! The crate provides:
//!
//! * dense complex linear algebra sized for small Hilbert spaces
//!   ([`linalg`]), including a Jacobi Hermitian eigensolver that keeps
//!   eigenvectors supported inside exactly-decoupled blocks;
//! * density matrices, pure states, and maximally coherent states with
//!   validated construction and JSON wire formats ([`states`]);
//! * the attractor channel families — ideal and faulty — with Choi
//!   matrices, CPTP verdicts, Kraus decompositions, and iterated or
//!   bystander-extended application ([`channels`]).

pub mod channels;
pub mod classify;
pub mod cli;
pub mod coherence;
pub mod diamond;
pub mod dilation;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod states;
pub mod testutil;

pub use channels::{
    apply, apply_extended, apply_unchecked, choi, choi_of, is_cptp, iterate, kraus_from_choi,
    AlphaMatrix, ChannelSpec, ChannelVariant, ChoiState, CptpVerdict, KrausSet, QuantumChannel,
};
pub use classify::{
    check_activation, check_gio, check_mio, classify_channel, classify_channel_with,
    io_structural_check, search_incoherent_decomposition, sio_structural_check, CertificateMode,
    ClassReport,
};
pub use coherence::{
    c_l1, c_relative_entropy, closest_attractor, decohering_power, depth,
    estimate_decohering_power, relative_entropy, von_neumann_entropy, DepthQuery, DepthReport,
};
pub use diamond::{
    diamond_analytic_diagonal, diamond_distance, diamond_interior_point, diamond_lower_bound,
    DiamondProgram, DiamondResult, SolveMethod,
};
pub use dilation::{
    build_generic_dilation, build_gio_dilation, build_sio_dilation, dilation_round_trip,
    gram_factorize, verify_dilation, DilationUnitary, GramVectors,
};
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentSummary};
pub use linalg::{herm_eig, kron, partial_trace, trace_norm, ComplexMatrix, Keep};
pub use states::{
    dephase, maximally_coherent, purify, random_density, reduce, DensityMatrix,
    MaximallyCoherentState, PureState,
};
