//! Text front-end, analysis reports and the command-line driver for
//! [`monge_core`].

pub mod dsl;
pub mod examples;
pub mod report;
