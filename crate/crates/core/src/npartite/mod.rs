//! ℕ-partite (layered) graphs and monotone path covers.
//!
//! A layered graph has finite layers Γ_0, Γ_1, ... with edges only between
//! consecutive layers. Graphs are either finite truncations or eventually
//! periodic; in the periodic case every question about "all large layers"
//! is answered exactly by cycle detection on the repeating block.

mod cover;
mod layered;
mod matching;
mod prune;
mod relation;
mod sphere;
mod verify;

pub use cover::{
    find_hall_failure, find_matching_stride, lift_path, monotone_cover, CoverResult, CoverTrace, HallFailureWitness,
};
pub use layered::{
    monotone_reachability, LayerSelection, LayeredGraph, LayeredSpec, MonotonePath, PathDescription, Seq,
    TruncationSpec,
};
pub use matching::{layer_matching, partition_by_matchings};
pub use prune::{prune_to_spanning, Pruned};
pub use relation::{HallViolator, MatchOutcome, Relation, MAX_LAYER};
pub use sphere::{
    lift_to_ray, ray_to_monotone, sphere_quotient, sphere_quotient_auto, SphereQuotient, DEFAULT_RECURRENCE,
};
pub use verify::{intersection_minimum, spanning_paths, verify_cover, DepthCheck};
