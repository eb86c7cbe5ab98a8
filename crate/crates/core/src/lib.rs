//! Signal temporal logic monitoring over uniformly sampled traces.
//!
//! The crate evaluates STL specifications in four ways:
//!
//! * offline robustness over a complete trace,
//! * online robust intervals over a prefix (bounds on the robustness of every completion),
//! * online violation causation distance, which keeps reacting to the current instant after
//!   a violation has already happened,
//! * a log-sum-exp smoothed variant of the causation distance, usable as a dense RL reward.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases at the crate root
//! pin the common `f64` instantiations.
//!
//! ```
//! use stlmon_core::{parse_spec, formula::to_nnf, semantics::offline_robustness, Trace64};
//!
//! let spec = parse_spec::<f64>("var v in [0, 20]\nspec G[0,2] (v > 5)").unwrap();
//! let phi = to_nnf(&spec.formula).unwrap();
//! let trace = Trace64::new(1.0, vec!["v".into()], vec![vec![10.0], vec![9.0], vec![12.0]]).unwrap();
//! let rho = offline_robustness(&trace, &phi, &spec.decls, 0.0, None).unwrap();
//! assert_eq!(rho, 4.0);
//! ```

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod formula;
pub mod metrics;
pub mod monitor;
pub mod scalar;
pub mod semantics;
pub mod trace;

pub use error::{Error, Result};
pub use formula::{parse_spec, Formula, Predicate, SpecFile, TimeInterval, VariableDeclarations};
pub use scalar::Scalar;
pub use semantics::{CausationConfig, CausationMode, CausationResult, RobustInterval};
pub use trace::{PrefixView, SampledTrace, TauWindow, WindowView};

pub type Formula64 = Formula<f64>;
pub type Formula32 = Formula<f32>;
pub type Trace64 = SampledTrace<f64>;
pub type Trace32 = SampledTrace<f32>;
pub type TauWindow64 = TauWindow<f64>;
pub type Interval64 = RobustInterval<f64>;
pub type Decls64 = VariableDeclarations<f64>;
pub type Spec64 = SpecFile<f64>;
