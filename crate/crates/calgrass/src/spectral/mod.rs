//! First-quadrant spectral sequences of fibrations over exactly computed
//! abelian groups: page turning, bounded differential search, extension
//! bookkeeping, and consistency verdicts for scenario files.

pub mod page;
pub mod scenario;
pub mod solver;

pub use page::{build_e2, turn_page, Page, Position};
pub use scenario::{Scenario, SlotValue};
pub use solver::{assemble_limit, solve, DiagonalAssembly, SolveOptions, SolveReport};
