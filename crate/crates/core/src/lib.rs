//! Localization of finite presented categories.
//!
//! Two constructions of `C[Σ⁻¹]` for a finite category `C` and a set `Σ` of
//! its morphisms: the quotient of the free category on zigzags, and, when
//! `Σ` admits a calculus of left fractions, the category of equivalence
//! classes of fraction symbols `t⁻¹∘f`. The [`verify`] module cross-checks
//! the two.

pub mod cat;
pub mod corpus;
pub mod fixtures;
pub mod format;
pub mod fractions;
pub mod free;
pub mod quotient;
pub mod verify;
pub mod words;

pub use cat::{CategoryBuilder, CompositionTable, FiniteCategory, Functor, MorId, ObjId, SigmaSet};
pub use fractions::{build_fraction_category, FractionCategory, FractionSymbol};
pub use words::{LocalizedPresentation, Token, Verdict, ZigzagWord};
