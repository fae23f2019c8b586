//! Exact workbench for the categorified tensor powers of the spin module of
//! so(7,C).
//!
//! The n-th tensor power of the 8-dimensional spin module is identified,
//! label by label, with the Grothendieck group of a direct sum of blocks of
//! category O for gl(n): the word `(a_1,…,a_n)` over `0..=7` names both the
//! Verma class `[M(a_1,…,a_n)]` and the tensor vector `v_{a_1}⊗…⊗v_{a_n}`.
//! Under that identification the Chevalley action corresponds to the induced
//! maps of explicit projective functors (translations through the
//! fundamental gl(n)-module, its dual, and their symmetric and alternating
//! squares), and every defining relation of U(so(7,C)) becomes an exact
//! integer matrix identity between direct sums of compositions of those
//! functors. Since induced maps determine projective functors up to
//! isomorphism, checking the matrix identities certifies the functor
//! isomorphisms; this crate performs all of those checks.
//!
//! Module map:
//!
//! * [`basis`] — words, contents, class invariants, enumeration;
//! * [`zmod`] — sparse integer vectors, linear operators, class matrices;
//! * [`spin`] — the spin action table, tensor/word actions, Cartan matrix;
//! * [`functors`] — the named operator rules and their translation-functor
//!   oracle;
//! * [`exprlang`] — parser/printer/evaluator for operator expressions;
//! * [`verify`] — the suites and the 46-instance relation catalog.

pub mod basis;
pub mod error;
pub mod exprlang;
pub mod functors;
pub mod spin;
pub mod verify;
pub mod zmod;

pub use basis::{class_key, content, enumerate_class, seq_class_key, ClassKey, Content, Seq};
pub use error::{Error, Result};
pub use exprlang::{eval, parse, print, Mode, OpExpr};
pub use functors::{gen_rule, named_op, oracle_generator, Generator, WeightMultisetId};
pub use spin::{gamma, gamma_inv, spin_act, tensor_act, word_act, GenSymbol, GenWord, CARTAN};
pub use verify::{catalog, Report, RunMode, Suite};
pub use zmod::{apply, matrix_of, op_equal, ColumnSelection, LinearOp, SparseIntMatrix, ZVec};
