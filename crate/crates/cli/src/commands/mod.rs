pub mod classical;
pub mod evolve;
pub mod husimi;
pub mod sweep;
pub mod tomo;
pub mod tunnel;

use std::path::PathBuf;

use crate::config::GlobalArgs;

fn out_path(global: &GlobalArgs, default: &str) -> PathBuf {
    global.out.clone().unwrap_or_else(|| PathBuf::from(default))
}
