pub mod arith;
pub mod ring;
pub mod scheme;
pub mod estimator;
pub mod lemma_lab;
pub mod opcounts;
pub mod cli;
