//! Surrogate-assisted evolutionary multi-objective optimization.
//!
//! The crate bundles everything needed to run and benchmark SAEA/ME, a
//! Gaussian-process assisted evolutionary algorithm for expensive
//! multi-objective problems with up to ~50 decision variables:
//!
//! * [`problems`]: the ZDT and DTLZ benchmark suites plus true-front samplers,
//! * [`gp`]: exact GP regression with a squared-exponential kernel,
//! * [`acquisition`]: classic single-objective acquisition functions and a
//!   generic surrogate-assisted loop built from them,
//! * [`moea`]: NSGA-II and its variation operators,
//! * [`metrics`]: hypervolume, IGD, and a rank-sum significance test,
//! * [`algorithm`]: the SAEA/ME main loop tying the pieces together.

pub mod acquisition;
pub mod algorithm;
pub mod gp;
pub mod metrics;
pub mod moea;
pub mod problems;
