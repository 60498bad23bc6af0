//! Exact and numeric engines for finite skew braces, post-Lie algebras and
//! closed-form Lie group laws.
//!
//! * [`linalg`]: exact rational matrices and canonical subspaces.
//! * [`group`]: Cayley-table groups, automorphisms, the holomorph.
//! * [`brace`]: finite skew braces, ideals, quotients, derived series and
//!   enumeration through regular subgroups of the holomorph.
//! * [`lie`]: Lie and post-Lie algebras over the rationals.
//! * [`grouplaw`]: closed-form group laws on `R^n`, numeric checks and
//!   extraction of infinitesimal tensors.
//! * [`formats`] and [`presets`]: text files and named built-ins.

pub mod brace;
pub mod formats;
pub mod group;
pub mod grouplaw;
pub mod lie;
pub mod linalg;
pub mod presets;
