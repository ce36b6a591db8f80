//! Exact computations on harmonious labelings of rooted trees, with trees
//! encoded as functions `f: Z_n -> Z_n` whose iterates collapse onto a
//! single attracting fixed point (the root, carrying a loop edge).
//!
//! Modules, bottom up:
//!
//! - [`zmod`]: function tables, iteration, the tree predicate, rerooting.
//! - [`perms`]: permutations, tree automorphism groups, coset transversals.
//! - [`treegen`]: rooted trees up to isomorphism via canonical level sequences.
//! - [`harmony`]: edge-sum profiles, labeling searches, translations,
//!   completion of near-harmonious labelings and the per-tree theorem check.
//! - [`certalg`]: exact cyclotomic arithmetic, factor multisets, lattice
//!   certificates, stabilizers, power sums and the telescoping identity.

pub mod certalg;
pub mod codec;
mod error;
pub mod harmony;
pub mod perms;
pub mod treegen;
pub mod zmod;

pub use error::{Error, Result};
pub use perms::{AutGroup, Perm};
pub use treegen::CanonicalCode;
pub use zmod::{EdgeList, FuncMap, TreeFunc};
