//! Deterministic simulators of TGAT, TGN-Att and CAW.

pub mod caw;
pub mod nn;
pub mod tgat;
pub mod tgn_att;

pub use caw::{
    anon_vector, caw_anonymize, caw_encode_event, caw_graph_code, caw_walk_set, render_walks,
    Walk, WalkSet,
};
pub use tgat::{tgat_aggregate, time_encode, TgatLayer, TgatModel, TgatTrace, TimeEncoderParams};
pub use tgn_att::{TgnAttMemory, TgnAttModel};
