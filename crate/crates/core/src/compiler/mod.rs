//! Circuits, measurement programs, the lowering between them, an executor
//! and an equivalence checker.

pub mod circuit;
pub mod exec;
pub mod program;

pub use circuit::{parse_circuit, random_circuit, Circuit, Op};
pub use exec::{check_equivalence, execute, execute_forced, EquivalenceReport, RunRecord, TrialRecord};
pub use program::{compile_to_measurements, Instruction, MeasurementProgram, Mode, Primitive, Wire};
