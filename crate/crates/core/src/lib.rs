//! Locality analysis for quantum subsystem and stabilizer codes embedded in
//! `R^D`: exact code parameters and correctability over GF(2), interaction
//! lengths of embeddings, the lower bounds on long-range interactions, and
//! executable versions of the geometric arguments behind them.

pub mod bounds;
pub mod certify;
pub mod code;
pub mod constructions;
pub mod contours;
pub mod correct;
pub mod geometry;
pub mod gf2;
pub mod pauli;

pub use code::{CodeError, CodeParameters, DistanceResult, LogicalPair, SubsystemCode};
pub use correct::{is_correctable, is_dressed_cleanable, CodeClass, Region};
pub use pauli::{in_span, kernel_on_support, symplectic_product, BitMatrix, PauliVector};
pub use bounds::{projector_bounds, proof_constants, regime_check, subsystem_bounds, BoundMode, BoundReport};
pub use certify::{expansion_sweep, holographic_certify, theorem_partition_builder, Certificate, Mode, Outcome, PartitionVariant};
pub use constructions::{bacon_shor, build_concat_embedding, concatenate, small_inner_codes, surface_code, ConcatPlan, EmbeddedCode};
pub use contours::{emit_contours, ContourTable};
pub use geometry::{extract_interactions, find_tiling, subdivide, AxisBox, Embedding, InteractionSet};
