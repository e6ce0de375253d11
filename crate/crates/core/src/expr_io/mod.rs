//! Text and JSON interchange for polynomials and polynomial matrices.
//!
//! Text grammar: variables `x<digits>`, the cube root of unity `w`, integer
//! and `p/q` literals, `+ - * ^`, parentheses. Whitespace is ignored.

mod json;
mod parse;
mod print;

pub use json::{
    matrix_from_json, matrix_to_json, point_from_json, point_to_json, poly_from_json, poly_to_json,
    MatrixJson, PolyJson, TermJson,
};
pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use print::{print_monomial, print_poly};
