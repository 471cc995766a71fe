//! Exact-arithmetic toolkit for fuzzy bi-Gödel modal logics and their
//! paraconsistent relatives: formula parsing, weighted Kripke model
//! evaluation with one or two valuations and relations, syntactic
//! translations between the languages, exact frame-local validity, bounded
//! countermodel search, frame-property checkers, and Hilbert-style
//! derivation checking.

pub mod decide;
pub mod fixtures;
pub mod formula;
pub mod frames;
pub mod gvalue;
pub mod hilbert;
pub mod kripke;
pub mod transform;
