//! Text input and output for functions, forms and multivectors.

mod parser;
mod print;

pub use parser::{parse, parse_element, parse_form, parse_function, parse_multivector, Value};
pub use print::{format_element, format_polynomial, format_rational_function};
