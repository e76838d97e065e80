//! Joint placement and sizing of intelligent reflecting surfaces (IRSs)
//! assisting a two-way full-duplex point-to-point link.
//!
//! The library minimizes an upper bound on the system outage probability by
//! choosing which candidate IRS locations to install and how many reflecting
//! elements each installed surface gets, subject to cardinality, total-element
//! and total-cost budgets. The discrete problem is attacked three ways:
//!
//! * [`solvers::exhaustive`] — exact enumeration, usable at desk scale and as
//!   a correctness oracle;
//! * [`solvers::lpr_ga`] — deterministic greedy rounding of the linear
//!   relaxation solved by [`lp::lower_bound`];
//! * [`randomized::lpr_ra`] — randomized rounding with Hoeffding-style
//!   expectation and deviation guarantees ([`randomized::guarantees`]).
//!
//! [`mcsim`] provides a channel-level Monte Carlo simulator that validates the
//! outage bound chain, and [`cli`] orchestrates reproducible parameter sweeps
//! and verification suites for the `irsopt` binary.

pub mod channel;
pub mod cli;
pub mod lp;
pub mod mcsim;
pub mod problem;
pub mod randomized;
pub mod seeding;
pub mod solvers;
