pub mod cli;
pub mod coordinate;
pub mod invariant_character;
pub mod log_monoid;
pub mod modes;
pub mod series;
pub mod vertex;
