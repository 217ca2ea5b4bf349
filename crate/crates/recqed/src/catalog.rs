//! Spectroscopic parameters of rare-earth transitions.
//!
//! The catalog file format is line-oriented structured text: one
//! `key = value` pair per line, records separated by blank lines, `#`
//! starts a comment. Wavelengths are stored in nm and lifetimes in
//! microseconds, mirroring how such tables are usually printed; records
//! keep the file-native numbers (which makes serialization an exact
//! inverse of parsing) and expose SI values through accessors.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::constants::C_LIGHT;
use crate::{Error, Result};

/// Bundled default catalog (eight transitions in five crystalline hosts).
pub const BUILTIN_CATALOG: &str = include_str!("../data/transitions.cat");

/// One optical transition of a rare-earth dopant in a crystalline host.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IonTransition {
    /// Label, e.g. `"Pr3+:Y2SiO5 3H4-1D2"`.
    pub id: String,
    /// Vacuum wavelength (nm).
    pub wavelength_nm: f64,
    /// Dimensionless oscillator strength f.
    pub oscillator_strength: f64,
    /// Population lifetime T1 (us).
    pub t1_us: f64,
    /// Coherence time T2 (us).
    pub t2_us: f64,
    /// Magnetic field at which T2 was measured (opaque annotation).
    pub t2_field_note: String,
    /// Host refractive index at the transition wavelength.
    pub host_index: f64,
}

impl IonTransition {
    /// Vacuum wavelength (m).
    pub fn wavelength_vac(&self) -> f64 {
        self.wavelength_nm * 1e-9
    }

    /// Population lifetime T1 (s).
    pub fn t1(&self) -> f64 {
        self.t1_us * 1e-6
    }

    /// Coherence time T2 (s).
    pub fn t2(&self) -> f64 {
        self.t2_us * 1e-6
    }

    /// Transition angular frequency 2*pi*c/lambda (rad/s).
    pub fn angular_frequency(&self) -> f64 {
        std::f64::consts::TAU * C_LIGHT / self.wavelength_vac()
    }

    /// Population decay rate gamma = 1/T1 (rad/s).
    pub fn gamma(&self) -> f64 {
        1.0 / self.t1()
    }

    /// Homogeneous linewidth gamma_h = 1/T2 (rad/s).
    pub fn gamma_h(&self) -> f64 {
        1.0 / self.t2()
    }

    /// Excess dephasing rate gamma_p = gamma_h - gamma/2 (rad/s).
    ///
    /// Non-negative for any record satisfying T2 <= 2*T1.
    pub fn gamma_p(&self) -> f64 {
        self.gamma_h() - 0.5 * self.gamma()
    }

    fn validate(&self) -> Result<()> {
        let fail = |rule: &str| {
            Err(Error::CatalogInvariant {
                record: self.id.clone(),
                rule: rule.to_string(),
            })
        };
        if !(self.wavelength_nm > 0.0) {
            return fail("wavelength_vac > 0");
        }
        if !(self.oscillator_strength > 0.0) {
            return fail("oscillator_strength > 0");
        }
        if !(self.t1_us > 0.0) {
            return fail("T1 > 0");
        }
        if !(self.t2_us > 0.0) {
            return fail("T2 > 0");
        }
        if self.t2_us > 2.0 * self.t1_us {
            return fail("T2 <= 2*T1");
        }
        if !(self.host_index >= 1.0) {
            return fail("host_index >= 1");
        }
        Ok(())
    }
}

/// Immutable collection of [`IonTransition`] records.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    records: Vec<IonTransition>,
}

impl Catalog {
    /// Parse the catalog bundled with the crate.
    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN_CATALOG).expect("bundled catalog is valid")
    }

    /// Load and validate a catalog file.
    pub fn load(path: impl AsRef<Path>) -> Result<Catalog> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Catalog::parse(&text)
    }

    /// Parse catalog text. An empty file yields an empty catalog.
    pub fn parse(text: &str) -> Result<Catalog> {
        let mut records = Vec::new();
        let mut block: Vec<(usize, String, String)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                if !block.is_empty() {
                    records.push(parse_record(&block)?);
                    block.clear();
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::CatalogParse {
                line: lineno,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            block.push((lineno, key.trim().to_string(), value.trim().to_string()));
        }
        if !block.is_empty() {
            records.push(parse_record(&block)?);
        }

        for (i, rec) in records.iter().enumerate() {
            if records[..i].iter().any(|r| r.id == rec.id) {
                return Err(Error::DuplicateId { id: rec.id.clone() });
            }
        }
        Ok(Catalog { records })
    }

    /// Look up a transition by id.
    pub fn get(&self, id: &str) -> Result<&IonTransition> {
        self.records
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| Error::UnknownId {
                requested: id.to_string(),
                available: self.ids().map(str::to_string).collect(),
            })
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|r| r.id.as_str())
    }

    pub fn records(&self) -> &[IonTransition] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Serialize back to catalog text; parsing the output reproduces the
    /// record list exactly (records store the file-native numbers and
    /// floats print in shortest round-trip form).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.records.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            writeln!(out, "id = {}", r.id).unwrap();
            writeln!(out, "wavelength_nm = {}", r.wavelength_nm).unwrap();
            writeln!(out, "oscillator_strength = {}", r.oscillator_strength).unwrap();
            writeln!(out, "T1_us = {}", r.t1_us).unwrap();
            writeln!(out, "T2_us = {}", r.t2_us).unwrap();
            writeln!(out, "T2_field = {}", r.t2_field_note).unwrap();
            writeln!(out, "host_index = {}", r.host_index).unwrap();
        }
        out
    }
}

fn parse_record(block: &[(usize, String, String)]) -> Result<IonTransition> {
    let first_line = block[0].0;
    let find = |key: &str| -> Result<&str> {
        block
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
            .ok_or_else(|| Error::CatalogParse {
                line: first_line,
                message: format!("record is missing field `{key}`"),
            })
    };
    let num = |key: &str| -> Result<f64> {
        let (line, _, v) =
            block
                .iter()
                .find(|(_, k, _)| k == key)
                .ok_or_else(|| Error::CatalogParse {
                    line: first_line,
                    message: format!("record is missing field `{key}`"),
                })?;
        v.parse::<f64>().map_err(|_| Error::CatalogParse {
            line: *line,
            message: format!("field `{key}`: cannot parse `{v}` as a number"),
        })
    };

    for (line, key, _) in block {
        match key.as_str() {
            "id"
            | "wavelength_nm"
            | "oscillator_strength"
            | "T1_us"
            | "T2_us"
            | "T2_field"
            | "host_index" => {}
            other => {
                return Err(Error::CatalogParse {
                    line: *line,
                    message: format!("unknown field `{other}`"),
                })
            }
        }
    }

    let rec = IonTransition {
        id: find("id")?.to_string(),
        wavelength_nm: num("wavelength_nm")?,
        oscillator_strength: num("oscillator_strength")?,
        t1_us: num("T1_us")?,
        t2_us: num("T2_us")?,
        t2_field_note: find("T2_field")?.to_string(),
        host_index: num("host_index")?,
    };
    rec.validate()?;
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_eight_records() {
        let cat = Catalog::builtin();
        assert_eq!(cat.len(), 8);
        let ids: Vec<_> = cat.ids().collect();
        assert!(ids.contains(&"Pr3+:Y2SiO5 3H4-1D2"));
        assert!(ids.contains(&"Er3+:Y2SiO5 4I15/2-4I13/2"));
        assert!(ids.contains(&"Eu3+:Y2SiO5 7F0-5D0"));
    }

    #[test]
    fn builtin_records_satisfy_invariants() {
        for r in Catalog::builtin().records() {
            assert!(r.wavelength_nm > 0.0);
            assert!(r.oscillator_strength > 0.0);
            assert!(r.t1_us > 0.0 && r.t2_us > 0.0);
            assert!(r.t2_us <= 2.0 * r.t1_us, "{}: T2 <= 2 T1", r.id);
            assert!(r.host_index >= 1.0);
            assert!(r.gamma_p() >= 0.0);
        }
    }

    #[test]
    fn er_yso_matches_printed_row() {
        let cat = Catalog::builtin();
        let er = cat.get("Er3+:Y2SiO5 4I15/2-4I13/2").unwrap();
        assert_eq!(er.wavelength_nm, 1536.14);
        assert_eq!(er.oscillator_strength, 2e-7);
        assert_eq!(er.t1_us, 11400.0);
        assert_eq!(er.t2_us, 4080.0);
        assert_eq!(er.t2_field_note, "70kG");
    }

    #[test]
    fn pr_yso_matches_printed_row() {
        let cat = Catalog::builtin();
        let pr = cat.get("Pr3+:Y2SiO5 3H4-1D2").unwrap();
        assert_eq!(pr.wavelength_nm, 605.977);
        assert_eq!(pr.oscillator_strength, 3e-7);
    }

    #[test]
    fn empty_file_is_empty_catalog() {
        let cat = Catalog::parse("").unwrap();
        assert!(cat.is_empty());
        let cat = Catalog::parse("# only comments\n\n").unwrap();
        assert!(cat.is_empty());
    }

    #[test]
    fn t2_bound_violation_names_the_rule() {
        let text = "id = X\nwavelength_nm = 600\noscillator_strength = 1e-7\n\
                    T1_us = 100\nT2_us = 300\nT2_field = none\nhost_index = 1.8\n";
        let err = Catalog::parse(text).unwrap_err();
        match err {
            Error::CatalogInvariant { record, rule } => {
                assert_eq!(record, "X");
                assert!(rule.contains("T2 <= 2*T1"), "rule was: {rule}");
            }
            other => panic!("expected invariant error, got {other:?}"),
        }
    }

    #[test]
    fn parse_error_names_line() {
        let text = "id = X\nwavelength_nm six hundred\n";
        match Catalog::parse(text).unwrap_err() {
            Error::CatalogParse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_number_names_field() {
        let text = "id = X\nwavelength_nm = abc\noscillator_strength = 1e-7\n\
                    T1_us = 100\nT2_us = 100\nT2_field = none\nhost_index = 1.8\n";
        match Catalog::parse(text).unwrap_err() {
            Error::CatalogParse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("wavelength_nm"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_id_lists_available() {
        let cat = Catalog::builtin();
        match cat.get("nonexistent").unwrap_err() {
            Error::UnknownId { available, .. } => assert_eq!(available.len(), 8),
            other => panic!("expected unknown-id error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_id_rejected_at_load() {
        let one = "id = X\nwavelength_nm = 600\noscillator_strength = 1e-7\n\
                   T1_us = 100\nT2_us = 100\nT2_field = none\nhost_index = 1.8\n";
        let text = format!("{one}\n{one}");
        match Catalog::parse(&text).unwrap_err() {
            Error::DuplicateId { id } => assert_eq!(id, "X"),
            other => panic!("expected duplicate-id error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let cat = Catalog::builtin();
        let text = cat.to_text();
        let reparsed = Catalog::parse(&text).unwrap();
        assert_eq!(cat.records(), reparsed.records());
    }

    #[test]
    fn si_accessors_scale_native_units() {
        let er = Catalog::builtin()
            .get("Er3+:Y2SiO5 4I15/2-4I13/2")
            .unwrap()
            .clone();
        assert_eq!(er.wavelength_vac(), 1536.14 * 1e-9);
        assert_eq!(er.t1(), 11400.0 * 1e-6);
        assert_eq!(er.t2(), 4080.0 * 1e-6);
    }
}
