//! Algorithms for reasoning about the expressive power of temporal graph
//! networks: temporal computation trees, temporal Weisfeiler-Leman
//! refinement, exact injective aggregation, relative positional features,
//! an exact PINT engine, baseline simulators, and a counterexample corpus.

pub mod baselines;
pub mod error;
pub mod expressiveness;
pub mod gen;
pub mod graph;
pub mod injective;
pub mod intern;
pub mod pint;
pub mod posfeat;
pub mod tct;
pub mod twl;

pub use error::{Result, TgxError};
pub use graph::{
    ctdg_to_dtdg, dtdg_to_ctdg, load_events, load_snapshots, save_events, Event, Features,
    NeighborhoodEntry, NodeId, Snapshot, SnapshotSequence, TemporalGraph, Timestamp, DUMMY_NODE,
};
pub use injective::{
    enumerate_pair, exhaustive_injectivity, injective_multiset_sum, time_decay_term, AggParams,
    ExactScalar, InjectivityReport,
};
pub use intern::{intern, CanonicalId, Value};
pub use tct::{
    build_monotone_tct, build_tct, feature_states, tct_canonical, tct_isomorphic,
    temporal_diameter, Depth, StateMap, Tct, TctNode,
};
