//! Generator and verifier for special unextendible entangled bases of type
//! `k` (SUEBk) in `C^d ⊗ C^d'`.
//!
//! States are handled as `d × d'` complex matrices. Sets are built by
//! placing rows of weighing matrices on coordinate-distinct blocks of a grid
//! ordered by [`order::OrderedGrid`], and certified by [`verify`].
//!
//! ```
//! use suebk::{construct::auto_generate, verify::{check_unextendible, Verdict}, Tolerance};
//!
//! let set = auto_generate(7, 7, 3, 47).unwrap();
//! let report = check_unextendible(&set, 3, Tolerance::default()).unwrap();
//! assert_eq!(report.verdict, Verdict::Unextendible);
//! ```

pub mod construct;
pub mod error;
pub mod frobenius;
pub mod numerics;
pub mod order;
pub mod state_file;
pub mod verify;
pub mod weighing;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, Tolerance, C64};
pub use order::{Coord, OrderedGrid};
