//! Exact-arithmetic kernel for period-domain differential systems.

pub mod chern;
pub mod flag;
pub mod hodge;
pub mod integral;
pub mod jacobian;
pub mod linalg;
pub mod nl;
