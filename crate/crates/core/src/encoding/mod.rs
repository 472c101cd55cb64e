//! Reduction of brave and skeptical reasoning to SAT.

pub mod cnf;
pub mod formula;
pub mod query;
pub mod vartable;

pub use cnf::{
    decode_model, dimacs_string, emit_dimacs, emit_var_map, parse_dimacs, tseitin_cnf, CnfFormula,
};
pub use formula::{Formula, Var};
pub use query::{
    block_conditions, build_f_lm_block, build_f_min_block, build_f_mod, build_query,
    BlockConditions, EncodedQuery, Mode, QuerySpec,
};
pub use vartable::{VarRole, VarTable};
