pub mod assign;
pub mod bench;
pub mod compare;
pub mod render;
pub mod stats;
