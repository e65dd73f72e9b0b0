//! Exact bivariate rational functions, hypergeometric terms in Gamma-product
//! form, WZ-certificate checking and generalized hypergeometric series.

mod fixture;
mod hyperterm;
mod pfq;
mod poly;
mod ratfunc;
mod wz;

pub use fixture::{builtin_pair, parse_pairs, print_pairs, BUILTIN_PAIRS};
pub use hyperterm::{
    term_cross_ratio, term_eval_exact, term_eval_numeric, term_shift_ratio, Geom, HyperTerm,
    LinForm,
};
pub use pfq::{pfq_eval, pfq_series};
pub use poly::{Monomial, MultiPoly};
pub use ratfunc::{ratfunc_arith, RatFunc, RatOp};
pub use wz::{wz_verify, CertStatus, CertificateReport, WzPair};
