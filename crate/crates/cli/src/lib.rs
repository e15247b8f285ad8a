//! Command-line front end: the `.qk` format and the `qk` subcommands.

#![allow(clippy::needless_range_loop)]

pub mod commands;
pub mod qk;
