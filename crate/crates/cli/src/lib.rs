//! Front end for `levicav`: configuration parsing and the subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;

pub use commands::{cmd_cool, cmd_params, cmd_sweep, cmd_validate, CliError, Status};
pub use config::{parse_config, ConfigError, Overrides, RunConfig};
