//! File formats, Monte Carlo experiments and output writers behind the
//! `orichrom` command-line tool.

pub mod experiments;
pub mod formats;
pub mod output;
