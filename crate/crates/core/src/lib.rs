//! Bounds and duality for multiobjective integer programs.
//!
//! Points in objective space are [`ObjVec`]s; sets of them live in the
//! extended family [`ExtendedSet`] (finite antichains plus `±M∞`) ordered by
//! [`pareto::preceq`]. Instances are [`MoipInstance`]s over finite integer
//! boxes, small enough to enumerate.

pub mod bounds;
pub mod chain;
pub mod error;
pub mod harness;
pub mod model;
pub mod pareto;
pub mod relax;
pub mod solver;
pub mod superadditive;

pub use bounds::{BoundMethod, BoundReport, GammaMode};
pub use chain::FrontierChain;
pub use error::{MoipError, Result};
pub use model::{FrontierEntry, MoipInstance, SupportedFrontier};
pub use pareto::{Antichain, ExtendedSet, ObjVec, Sense, EPS_DOM};
pub use relax::{LagrangianContext, MultiplierGrid, MultiplierMatrix};
pub use superadditive::{HyperplaneFamily, SdmolpProgram};
