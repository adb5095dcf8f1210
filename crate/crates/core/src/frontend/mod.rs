//! Text front end: the ket expression language and the JSON state file.

pub mod exact;
pub mod ket;
pub mod state_file;

pub use exact::ExactScalar;
pub use ket::{evaluate, parse_ket, KetExpr};
pub use state_file::{load_state, save_state, StateFile};
