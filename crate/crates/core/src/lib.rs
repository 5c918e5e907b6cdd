//! Minimum weight general cover: greedy and GSEMO solvers, an exact oracle
//! for small instances, and instrumentation that checks the solvers'
//! approximation guarantees on concrete runs.
//!
//! ```
//! use mingc::zoo::{set_cover_problem, SetSystemInstance};
//! use mingc::{greedy_solve, gsemo, GsemoConfig};
//!
//! let inst = SetSystemInstance::new("three", 3, vec![
//!     (1.0, vec![0, 1]),
//!     (1.0, vec![2]),
//!     (3.0, vec![0, 1, 2]),
//! ]);
//! let problem = set_cover_problem(&inst)?;
//! assert_eq!(greedy_solve(&problem)?.cost, 2.0);
//!
//! let t = gsemo::default_iterations(&problem, 10.0);
//! let run = gsemo::run(&problem, &GsemoConfig::new(t, 7));
//! assert_eq!(run.best.unwrap().f2(), 2.0);
//! # Ok::<(), mingc::Error>(())
//! ```

pub mod archive;
pub mod bintrack;
mod error;
pub mod greedy;
pub mod gsemo;
pub mod individual;
pub mod oracle;
pub mod problem;
pub mod rng;
pub mod subset;
pub mod verify;
pub mod zoo;

pub use archive::{InsertOutcome, ParetoArchive};
pub use bintrack::BinSystem;
pub use error::{Error, Result};
pub use greedy::{greedy_solve, GreedySolution};
pub use gsemo::{GsemoConfig, RunResult, TraceLevel};
pub use individual::{Fitness, Individual};
pub use oracle::{exact_opt, OracleMode, OracleResult};
pub use problem::{CoverProblem, DeltaSource, Utility};
pub use rng::{RngStream, RNG_ALGORITHM};
pub use subset::Subset;

/// Book chapters, compiled as doc-tests so the guide stays in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/problems.md")]
    pub struct Problems;
    #[doc = include_str!("../../../book/src/greedy.md")]
    pub struct Greedy;
    #[doc = include_str!("../../../book/src/gsemo.md")]
    pub struct Gsemo;
    #[doc = include_str!("../../../book/src/bintrack.md")]
    pub struct Bintrack;
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub struct Oracle;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
