//! Surface syntax: parsing, printing and JSON export.

pub mod json;
mod parser;
mod printer;

pub use parser::{
    parse_context, parse_cp, parse_cp_judgment, parse_judgment, parse_process, parse_scp,
    parse_scp_judgment, parse_type, AnyProcess, ParseError,
};
pub use printer::{judgment, type_unicode};
