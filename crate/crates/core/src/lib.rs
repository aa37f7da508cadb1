//! Exact computations around minimal log discrepancies.

pub mod germs;
pub mod lattice;
pub mod newton;
pub mod par;
pub mod rat;
pub mod reid;
pub mod thresholds;
pub mod toric;
pub mod verify;
pub mod weighted;
