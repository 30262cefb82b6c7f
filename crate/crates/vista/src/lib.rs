//! Multi-agent generation of mathematically validated visual aids and
//! problem text.
//!
//! The pipeline drives seven specialized LLM-backed agents through a
//! deterministic state machine: a numeric calculator works the problem, a
//! geometry or function validator checks the result (backed by a hard,
//! non-LLM kernel), a visualizer emits figure code, a code executor runs it
//! in a confined working directory, a question generator writes new
//! problems from the figure, and a summarizer closes the run. An
//! LLM-as-judge evaluation harness scores the output on five metrics and
//! compares against a single-shot baseline.

pub mod cli;
pub mod core;
pub mod evaluator;
pub mod executor;
pub mod func;
pub mod geom;
pub mod llm;
pub mod orchestrator;
