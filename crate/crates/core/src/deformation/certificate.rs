use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Witness,
    SeparatingSet,
}

/// One JSON certificate per table row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub row_id: String,
    pub kind: CertificateKind,
    pub verdict: String,
    pub details: serde_json::Value,
}

impl Certificate {
    pub fn new(row_id: &str, kind: CertificateKind, passed: bool, details: impl Serialize) -> Self {
        Certificate {
            row_id: row_id.to_string(),
            kind,
            verdict: if passed { "pass" } else { "fail" }.to_string(),
            details: serde_json::to_value(details).unwrap_or(serde_json::Value::Null),
        }
    }

    /// File name safe for any row id.
    pub fn file_name(&self) -> String {
        let safe: String = self
            .row_id
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        format!("{safe}.json")
    }
}
