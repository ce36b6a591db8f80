//! Verification campaigns over rooted trees: per-tree checks, a
//! content-addressed result cache and deterministic JSON-lines/CSV reports.

pub mod cache;
pub mod campaign;
pub mod checks;
pub mod config;
mod error;

pub use cache::{cache_lookup, cache_store, Cache, CHECK_VERSION};
pub use campaign::{collect_codes, read_tree_file, run_campaign, write_report, CampaignReport};
pub use checks::{compute_record, verify_record, CampaignRecord, Check, CheckSet};
pub use config::{CampaignConfig, ConfigFile, Format, NRange, Overrides, TreeSource};
pub use error::CliError;
