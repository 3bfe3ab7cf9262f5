//! Firefighter games on infinite, locally finite graphs.

pub mod budget;
pub mod certify;
pub mod error;
pub mod expansion;
pub mod families;
pub mod flow;
pub mod game;
pub mod graph;
pub mod growth;
pub mod key;
pub mod oracle;
pub mod qi;
pub mod rational;
pub mod series;
pub mod server;
pub mod service;
pub mod synth;

pub use budget::BudgetSeq;
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use game::{GameTrace, Outcome, Strategy};
pub use graph::LazyGraph;
pub use key::VertexKey;
