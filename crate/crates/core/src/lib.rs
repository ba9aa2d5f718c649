//! Equivariant index of tamed Dirac operators for torus actions, computed
//! two independent ways.
//!
//! * [`fixed_point`] expands the module along the fixed set into weight
//!   blocks and sums their local indices, in exact [`characters`]
//!   arithmetic.
//! * [`analytic`] discretizes the deformed operator `D + i f c(v)` on a model
//!   space mode by mode and counts kernel dimensions.
//!
//! [`config`] and [`report`] tie the two together behind the `tamed-index`
//! command line tool.

pub mod analytic;
pub mod characters;
pub mod config;
pub mod fixed_point;
pub mod report;
pub mod taming;

pub use characters::{orient_normal_weights, sym_series, Character, CharacterError, Rational, Weight, Window};
pub use fixed_point::{
    component_blocks, local_index, topological_index, FixedComponent, LocalIndexTable, LocalIndexTables,
    NormalWeight, Parity, Summand, WeightBlock,
};
pub use taming::{admissibility_report, support_bound, AdmissibilityProfile, TamingData};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
    #[doc = include_str!("../../../book/src/fixed_points.md")]
    mod fixed_points {}
    #[doc = include_str!("../../../book/src/deformed_operator.md")]
    mod deformed_operator {}
    #[doc = include_str!("../../../book/src/model_operator.md")]
    mod model_operator {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
