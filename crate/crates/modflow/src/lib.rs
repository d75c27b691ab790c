//! Command-line front end for `modflow-core`: config layering, report
//! writers (CSV, JSON, SVG) and the five subcommands.

// `!(a > b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod svg;
