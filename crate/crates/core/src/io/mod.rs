//! Text format, bundled examples, random diagrams and machine records.

pub mod builders;
pub mod generate;
pub mod machine;
pub mod sd;

pub use generate::random_diagram;
pub use sd::{parse_sd, parse_sd_unchecked, write_sd};
