//! JSON form of Σ¹ certificates, schema `sigma-cert/1`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sigma_core::sigma::{CertificateCone, LinearForm, Sigma1Certificate};
use sigma_core::{Character, Presentation, Rational, Word};

use crate::error::{CliError, Result};
use crate::grammar::{digest, parse_rational, print_character};

pub const SCHEMA: &str = "sigma-cert/1";

/// Nonzero coefficients by generator name.
pub type FormFile = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeFile {
    pub strict: Vec<FormFile>,
    pub weak: Vec<FormFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: String,
    /// SHA-256 of the canonical presentation text.
    pub group: String,
    /// Character literal, `name=value` for every generator.
    pub character: String,
    pub t: String,
    pub dict: BTreeMap<String, String>,
    pub cone: ConeFile,
}

fn form_file(f: &LinearForm, p: &Presentation) -> FormFile {
    p.names()
        .iter()
        .zip(&f.0)
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(n, c)| (n.clone(), c.to_string()))
        .collect()
}

fn parse_form(f: &FormFile, p: &Presentation) -> Result<LinearForm> {
    let mut coeffs = vec![Rational::default(); p.rank()];
    for (name, value) in f {
        let g = p
            .generator_index(name)
            .ok_or_else(|| CliError::Certificate(format!("unknown generator `{name}` in cone")))?;
        coeffs[g as usize] = parse_rational(value)
            .ok_or_else(|| CliError::Certificate(format!("`{value}` is not a rational literal")))?;
    }
    Ok(LinearForm(coeffs))
}

fn parse_word(text: &str, p: &Presentation) -> Result<Word> {
    p.parse_word(text).map_err(|e| CliError::Certificate(format!("word `{text}`: {e}")))
}

impl CertificateFile {
    pub fn new(cert: &Sigma1Certificate, cone: &CertificateCone, p: &Presentation, chi: &Character) -> Result<Self> {
        let names = p.names();
        Ok(CertificateFile {
            schema: SCHEMA.to_string(),
            group: digest(p)?,
            character: print_character(chi, p),
            t: cert.t.display(names).to_string(),
            dict: cert.dict.iter().map(|(y, w)| (y.display(names).to_string(), w.display(names).to_string())).collect(),
            cone: ConeFile {
                strict: cone.strict.iter().map(|f| form_file(f, p)).collect(),
                weak: cone.weak.iter().map(|f| form_file(f, p)).collect(),
            },
        })
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("certificate serializes");
        text.push('\n');
        text
    }

    /// Rejects unknown schema versions before looking at other fields.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Certificate(format!("invalid JSON: {e}")))?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(SCHEMA) => {}
            Some(other) => return Err(CliError::Certificate(format!("unsupported schema `{other}`"))),
            None => return Err(CliError::Certificate("missing schema".into())),
        }
        serde_json::from_value(value).map_err(|e| CliError::Certificate(e.to_string()))
    }

    pub fn certificate(&self, p: &Presentation) -> Result<Sigma1Certificate> {
        let t = parse_word(&self.t, p)?;
        let mut dict = BTreeMap::new();
        for (key, value) in &self.dict {
            let letter = match parse_word(key, p)?.letters() {
                [l] => *l,
                _ => return Err(CliError::Certificate(format!("dictionary key `{key}` is not a letter"))),
            };
            dict.insert(letter, parse_word(value, p)?);
        }
        Ok(Sigma1Certificate { t, dict })
    }

    pub fn cone(&self, p: &Presentation) -> Result<CertificateCone> {
        let forms = |list: &[FormFile]| list.iter().map(|f| parse_form(f, p)).collect::<Result<Vec<_>>>();
        Ok(CertificateCone { strict: forms(&self.cone.strict)?, weak: forms(&self.cone.weak)? })
    }
}
