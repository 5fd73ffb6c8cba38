//! Versioned plain-text model persistence.
//!
//! Layout: a magic line, `key: value` pairs, then one row per support
//! vector (`alpha` followed by the coordinates). Reals are rendered with 17
//! significant digits, so a saved model scores bit-for-bit identically
//! after loading.

use std::io::Write;
use std::path::Path;

use svdd::{Criterion, Provenance, SvddModel};

use crate::csv_io::fmt_full;
use crate::error::{CliError, CliResult};

const MAGIC: &str = "svdd-model";
pub const FORMAT_VERSION: u32 = 1;
/// Identifier of the random generator recorded for provenance.
pub const RNG_ID: &str = "chacha8";

pub fn save_model(model: &SvddModel, path: &Path) -> CliResult<()> {
    let mut out = String::new();
    let p = model.provenance();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("format_version: {FORMAT_VERSION}\n"));
    out.push_str(&format!("p: {}\n", model.dim()));
    out.push_str(&format!("n_sv: {}\n", model.n_support_vectors()));
    out.push_str(&format!("n_train: {}\n", p.n_train));
    out.push_str(&format!("bandwidth: {}\n", fmt_full(model.bandwidth())));
    out.push_str(&format!("penalty: {}\n", fmt_full(model.penalty())));
    out.push_str(&format!("threshold: {}\n", fmt_full(model.threshold())));
    out.push_str(&format!("sv_self_term: {}\n", fmt_full(model.sv_self_term())));
    out.push_str(&format!("criterion: {}\n", p.criterion.name()));
    out.push_str(&format!("delta: {}\n", fmt_full(p.delta)));
    out.push_str(&format!("f: {}\n", fmt_full(p.outlier_fraction)));
    out.push_str(&format!("converged: {}\n", p.converged));
    out.push_str(&format!("kkt_violation: {}\n", fmt_full(p.kkt_violation)));
    out.push_str(&format!("iterations: {}\n", p.iterations));
    match p.seed {
        Some(seed) => out.push_str(&format!("seed: {seed}\n")),
        None => out.push_str("seed: none\n"),
    }
    out.push_str(&format!("rng: {RNG_ID}\n"));
    out.push_str(&format!("data_min: {}\n", join_full(model.data_min())));
    out.push_str(&format!("data_max: {}\n", join_full(model.data_max())));
    out.push_str("sv:\n");
    for (i, alpha) in model.alphas().iter().enumerate() {
        out.push_str(&fmt_full(*alpha));
        for v in model.support_vectors().row(i) {
            out.push(' ');
            out.push_str(&fmt_full(*v));
        }
        out.push('\n');
    }
    write_atomic(path, &out)
}

pub fn load_model(path: &Path) -> CliResult<SvddModel> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| CliError::ModelFile(format!("{}: {e}", path.display())))?;
    let bad = |msg: String| CliError::ModelFile(format!("{}: {msg}", path.display()));

    let mut lines = content.lines();
    if lines.next() != Some(MAGIC) {
        return Err(bad(format!("missing {MAGIC:?} magic line")));
    }

    let mut fields = std::collections::HashMap::new();
    let mut sv_lines = Vec::new();
    let mut in_table = false;
    for line in lines {
        if in_table {
            if !line.trim().is_empty() {
                sv_lines.push(line);
            }
            continue;
        }
        if line.trim() == "sv:" {
            in_table = true;
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("malformed line {line:?}")))?;
        fields.insert(key.trim().to_owned(), value.trim().to_owned());
    }

    let get = |key: &str| {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| bad(format!("missing field {key:?}")))
    };
    let get_f64 = |key: &str| -> CliResult<f64> {
        get(key)?
            .parse::<f64>()
            .map_err(|e| bad(format!("field {key:?}: {e}")))
    };
    let get_usize = |key: &str| -> CliResult<usize> {
        get(key)?
            .parse::<usize>()
            .map_err(|e| bad(format!("field {key:?}: {e}")))
    };

    let version: u32 = get("format_version")?
        .parse()
        .map_err(|e| bad(format!("format_version: {e}")))?;
    if version != FORMAT_VERSION {
        return Err(bad(format!(
            "unsupported format_version {version}, expected {FORMAT_VERSION}"
        )));
    }

    let p = get_usize("p")?;
    let n_sv = get_usize("n_sv")?;
    if sv_lines.len() != n_sv {
        return Err(bad(format!(
            "expected {n_sv} support vector rows, found {}",
            sv_lines.len()
        )));
    }
    let mut alphas = Vec::with_capacity(n_sv);
    let mut flat = Vec::with_capacity(n_sv * p);
    for (i, line) in sv_lines.iter().enumerate() {
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(format!("support vector row {i}: {e}")))?;
        if values.len() != p + 1 {
            return Err(bad(format!(
                "support vector row {i} has {} values, expected {}",
                values.len(),
                p + 1
            )));
        }
        alphas.push(values[0]);
        flat.extend_from_slice(&values[1..]);
    }
    let support_vectors = ndarray_from_flat(n_sv, p, flat)
        .map_err(|msg| bad(format!("support vector table: {msg}")))?;

    let criterion = match get("criterion")?.as_str() {
        "mean" => Criterion::Mean,
        "median" => Criterion::Median,
        "median2" => Criterion::Median2,
        "fixed" => Criterion::Fixed,
        other => return Err(bad(format!("unknown criterion {other:?}"))),
    };
    let seed = match get("seed")?.as_str() {
        "none" => None,
        raw => Some(
            raw.parse::<u64>()
                .map_err(|e| bad(format!("field \"seed\": {e}")))?,
        ),
    };
    let converged = match get("converged")?.as_str() {
        "true" => true,
        "false" => false,
        other => return Err(bad(format!("field \"converged\": got {other:?}"))),
    };
    let parse_vec = |key: &str| -> CliResult<Vec<f64>> {
        let parsed: Result<Vec<f64>, _> = get(key)?
            .split_whitespace()
            .map(|tok| tok.parse::<f64>())
            .collect();
        parsed.map_err(|e| bad(format!("field {key:?}: {e}")))
    };

    let provenance = Provenance {
        criterion,
        delta: get_f64("delta")?,
        outlier_fraction: get_f64("f")?,
        n_train: get_usize("n_train")?,
        converged,
        kkt_violation: get_f64("kkt_violation")?,
        iterations: get_usize("iterations")?,
        seed,
    };

    SvddModel::from_parts(
        support_vectors,
        alphas,
        get_f64("bandwidth")?,
        get_f64("penalty")?,
        get_f64("threshold")?,
        get_f64("sv_self_term")?,
        Vec::new(),
        parse_vec("data_min")?,
        parse_vec("data_max")?,
        provenance,
    )
    .map_err(|e| bad(format!("inconsistent model: {e}")))
}

fn ndarray_from_flat(
    n: usize,
    p: usize,
    flat: Vec<f64>,
) -> Result<svdd::ndarray::Array2<f64>, String> {
    svdd::ndarray::Array2::from_shape_vec((n, p), flat).map_err(|e| e.to_string())
}

fn join_full(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| fmt_full(*v))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Writes via a temp file in the destination directory plus a rename, so a
/// crash never leaves a half-written file behind.
pub fn write_atomic(path: &Path, content: &str) -> CliResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir)?,
        None => tempfile::NamedTempFile::new_in(".")?,
    };
    tmp.write_all(content.as_bytes())?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
