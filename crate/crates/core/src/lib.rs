pub mod checker;
pub mod comparison;
pub mod contraction;
pub mod document;
pub mod error;
pub mod map;
pub mod properties;
pub mod relation;
pub mod report;
pub mod solver;
pub mod space;
pub mod verdict;

pub use error::{Error, Result};
pub use map::{AffinePiece, SelfMap};
pub use relation::{PairList, Path, Relation};
pub use space::{Interval, IntervalUnion, Metric, MetricSpace, PointSet};
pub use verdict::{Verdict, VerdictKind, Witness};
pub use comparison::{ComparisonFunction, PhiReport};
pub use contraction::{ConditionKind, ContractionInstance};
pub use solver::{Orbit, OrbitStatus, SolveResult};
