//! Output emission: CSV and JSON writers plus their round-trip readers.
//!
//! CSV carries exactly the row data with a fixed header; floating-point
//! columns use scientific notation with 12 significant digits. JSON carries
//! the same rows (full binary precision — finite values round-trip
//! bit-exactly) plus a metadata block recording what produced the file.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cpforce_core::constants::CODATA_2018;
use cpforce_core::{AtomModel, WallModel};

use crate::config::SweepSpec;
use crate::sweep::SweepRow;

/// Mandatory CSV header: one column per `SweepRow` data field.
pub const CSV_HEADER: &str =
    "a_m,f_total_N,f_alpha_N,f_beta_N,a5_abs_f,deviation_pct,terms_l,est_rel_err";

/// Scientific notation with 12 significant digits (1 leading + 11 after the
/// point); NaN prints as `NaN`.
pub fn format_sci(x: f64) -> String {
    format!("{x:.11e}")
}

/// Render rows as a CSV body (header + one line per row, `\n` endings).
pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(128 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            format_sci(r.a_m),
            format_sci(r.f_total_n),
            format_sci(r.f_alpha_n),
            format_sci(r.f_beta_n),
            format_sci(r.a5_abs_f),
            format_sci(r.deviation_pct),
            r.terms_l,
            format_sci(r.est_rel_err),
        ));
    }
    out
}

/// Write the CSV body to a file.
pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    std::fs::write(path, csv_string(rows))
        .with_context(|| format!("writing CSV to {}", path.display()))
}

/// Parse a CSV body produced by [`csv_string`]. The header must match
/// exactly. Rows containing NaN are marked not converged.
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines();
    let header = lines.next().context("empty CSV input")?;
    if header != CSV_HEADER {
        bail!("unexpected CSV header: {header:?}");
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            bail!("CSV row {} has {} fields, expected 8", i + 2, fields.len());
        }
        let num = |j: usize| -> Result<f64> {
            fields[j]
                .parse::<f64>()
                .with_context(|| format!("CSV row {}, column {}: {:?}", i + 2, j + 1, fields[j]))
        };
        let row = SweepRow {
            a_m: num(0)?,
            f_total_n: num(1)?,
            f_alpha_n: num(2)?,
            f_beta_n: num(3)?,
            a5_abs_f: num(4)?,
            deviation_pct: num(5)?,
            terms_l: fields[6]
                .parse::<u64>()
                .with_context(|| format!("CSV row {}, column 7: {:?}", i + 2, fields[6]))?,
            est_rel_err: num(7)?,
            converged: num(1)?.is_finite(),
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Read rows back from a CSV file.
pub fn read_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading CSV from {}", path.display()))?;
    parse_csv(&text)
}

/// Metadata block of a JSON sweep document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    /// Version of the tool that wrote the file.
    pub artifact_version: String,
    /// SHA-256 of the built-in physical-constants table; two files with the
    /// same hash were computed with identical constants.
    pub constants_sha256: String,
    /// Wall-clock write time (Unix seconds). The only field excluded from
    /// determinism comparisons.
    pub generated_at_unix_s: Option<u64>,
    /// Resolved atom parameters, human-readable.
    pub atom_detail: String,
    /// Resolved wall parameters, human-readable.
    pub wall_detail: String,
    /// The sweep request that produced the rows.
    pub spec: SweepSpec,
}

/// A JSON sweep document: metadata plus the same rows the CSV carries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDocument {
    pub metadata: Metadata,
    pub rows: Vec<SweepRow>,
}

impl SweepDocument {
    pub fn new(spec: SweepSpec, atom: &AtomModel, wall: &WallModel, rows: Vec<SweepRow>) -> Self {
        let generated_at_unix_s = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        SweepDocument {
            metadata: Metadata {
                artifact_version: env!("CARGO_PKG_VERSION").to_string(),
                constants_sha256: constants_table_sha256(),
                generated_at_unix_s,
                atom_detail: format!("{atom:?}"),
                wall_detail: format!("{wall:?}"),
                spec,
            },
            rows,
        }
    }
}

/// SHA-256 over a canonical rendering of the physical-constants table.
pub fn constants_table_sha256() -> String {
    let mut hasher = Sha256::new();
    for (name, value, unit) in CODATA_2018.table() {
        hasher.update(format!("{name}={value:.17e} [{unit}]\n"));
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Write a JSON sweep document (pretty-printed, trailing newline).
pub fn write_json(path: &Path, doc: &SweepDocument) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc).context("serializing sweep document")?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing JSON to {}", path.display()))
}

/// Inverse of [`write_json`].
pub fn read_json(path: &Path) -> Result<SweepDocument> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading JSON from {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> SweepRow {
        SweepRow {
            a_m: 1e-6,
            f_total_n: -2.5364867215e-27,
            f_alpha_n: -2.5360795113e-27,
            f_beta_n: -4.072102e-31,
            a5_abs_f: 2.5364867215e-57,
            deviation_pct: -1.6056e-2,
            terms_l: 7345,
            est_rel_err: 3.2e-13,
            converged: true,
        }
    }

    #[test]
    fn empty_row_list_gives_header_only_csv() {
        assert_eq!(csv_string(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn one_row_gives_two_lines_and_parses_back() {
        let text = csv_string(&[sample_row()]);
        assert_eq!(text.lines().count(), 2);
        let rows = parse_csv(&text).unwrap();
        assert_eq!(rows.len(), 1);
        // 12 significant digits: relative error of the round trip < 1e-11.
        let r = rows[0];
        let o = sample_row();
        assert!((r.a_m - o.a_m).abs() <= 1e-11 * o.a_m.abs());
        assert!((r.f_total_n - o.f_total_n).abs() <= 1e-11 * o.f_total_n.abs());
        assert_eq!(r.terms_l, o.terms_l);
        assert!(r.converged);
    }

    #[test]
    fn scientific_format_has_twelve_significant_digits() {
        assert_eq!(format_sci(1e-6), "1.00000000000e-6");
        assert_eq!(format_sci(-2.536486721549e-27), "-2.53648672155e-27");
        assert_eq!(format_sci(f64::NAN), "NaN");
    }

    #[test]
    fn nan_rows_survive_csv_round_trip_as_flagged() {
        let mut row = sample_row();
        row.f_total_n = f64::NAN;
        row.f_alpha_n = f64::NAN;
        row.f_beta_n = f64::NAN;
        row.a5_abs_f = f64::NAN;
        row.deviation_pct = f64::NAN;
        row.converged = false;
        let rows = parse_csv(&csv_string(&[row])).unwrap();
        assert!(rows[0].f_total_n.is_nan());
        assert!(!rows[0].converged);
        assert_eq!(rows[0].terms_l, row.terms_l);
    }

    #[test]
    fn wrong_header_or_field_count_is_rejected() {
        assert!(parse_csv("a_m,f_total_N\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1.0,2.0\n")).is_err());
    }

    #[test]
    fn constants_hash_is_stable_and_hex() {
        let h1 = constants_table_sha256();
        let h2 = constants_table_sha256();
        assert_eq!(h1, h2);
        assert_eq!(h1.len(), 64);
        assert!(h1.chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn json_round_trip_is_bit_identical_for_finite_fields() {
        let spec = SweepSpec {
            atom: "H".into(),
            wall: "ideal-metal".into(),
            temp_k: 1.0,
            a_min_m: 1e-6,
            a_max_m: 1e-5,
            points: 2,
            spacing: crate::config::Spacing::Log,
            mode: crate::config::Mode::Full,
            sum_rel_tol: 1e-12,
            quad_rel_tol: 1e-12,
            l_max: 1_000_000,
        };
        let doc = SweepDocument::new(
            spec,
            &AtomModel::hydrogen(),
            &WallModel::ideal_metal(),
            vec![sample_row()],
        );
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.json");
        write_json(&path, &doc).unwrap();
        let back = read_json(&path).unwrap();
        assert_eq!(back, doc);
        let (r, o) = (back.rows[0], doc.rows[0]);
        assert_eq!(r.a_m.to_bits(), o.a_m.to_bits());
        assert_eq!(r.f_total_n.to_bits(), o.f_total_n.to_bits());
        assert_eq!(r.f_alpha_n.to_bits(), o.f_alpha_n.to_bits());
        assert_eq!(r.f_beta_n.to_bits(), o.f_beta_n.to_bits());
        assert_eq!(r.a5_abs_f.to_bits(), o.a5_abs_f.to_bits());
        assert_eq!(r.deviation_pct.to_bits(), o.deviation_pct.to_bits());
        assert_eq!(r.est_rel_err.to_bits(), o.est_rel_err.to_bits());
    }

    #[test]
    fn json_null_maps_to_nan_on_read() {
        let mut row = sample_row();
        row.f_beta_n = f64::NAN;
        row.converged = false;
        let text = serde_json::to_string(&row).unwrap();
        assert!(text.contains("\"f_beta_N\":null"));
        let back: SweepRow = serde_json::from_str(&text).unwrap();
        assert!(back.f_beta_n.is_nan());
        assert_eq!(back.f_total_n.to_bits(), row.f_total_n.to_bits());
    }
}
