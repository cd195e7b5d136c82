//! Taylor expansion of Λ₊ terms into resource combinations, truncated by bag size.

mod coeff;
mod nf;
mod support;

pub use coeff::{coeff, coeff_simple};
pub use nf::{nf_taylor, nf_taylor_limited, NfRow, NfTaylorReport, DEFAULT_SUPPORT_LIMIT};
pub use support::{
    in_support, in_support_simple, linear_expansion, support_enum, support_enum_limited, SupportQuery,
};
