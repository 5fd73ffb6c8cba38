//! Shared plumbing for the `svdd` command-line tool: CSV ingestion, model
//! persistence, and the error-to-exit-code mapping.

pub mod csv_io;
pub mod error;
pub mod model_file;

pub use csv_io::{read_dataset, read_table, CsvSpec, CsvTable, HeaderMode};
pub use error::{CliError, CliResult};
pub use model_file::{load_model, save_model, write_atomic, FORMAT_VERSION, RNG_ID};
