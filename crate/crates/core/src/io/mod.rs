//! Configuration, state specs, eigendata cache and CSV output.

pub mod cache;
pub mod config;
pub mod csv;
pub mod state_spec;

pub use cache::{load_cache, save_cache};
pub use config::{parse_config, RunConfig};
pub use state_spec::{parse_state_spec, StateSpec, Target, Term};
