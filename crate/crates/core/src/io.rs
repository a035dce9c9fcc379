//! JSON input: `{"masses": [...]}` for a pmf, `{"matrix": [[...], ...]}` for a joint or channel.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::pmf::{JointPMF, ProbVec};
use crate::sdpi::Channel;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MassesDoc {
    masses: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    matrix: Vec<Vec<f64>>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{origin}: line {}, column {}: {e}", e.line(), e.column())))
}

fn tag(origin: &str, e: Error) -> Error {
    Error::Input(format!("{origin}: {e}"))
}

pub fn parse_pmf(text: &str, origin: &str) -> Result<ProbVec> {
    let doc: MassesDoc = parse(text, origin)?;
    ProbVec::new(doc.masses).map_err(|e| tag(origin, e))
}

pub fn parse_joint(text: &str, origin: &str) -> Result<JointPMF> {
    let doc: MatrixDoc = parse(text, origin)?;
    JointPMF::new(doc.matrix).map_err(|e| tag(origin, e))
}

pub fn parse_channel(text: &str, origin: &str) -> Result<Channel> {
    let doc: MatrixDoc = parse(text, origin)?;
    Channel::new(doc.matrix).map_err(|e| tag(origin, e))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_pmf(path: &Path) -> Result<ProbVec> {
    parse_pmf(&read(path)?, &path.display().to_string())
}

pub fn read_joint(path: &Path) -> Result<JointPMF> {
    parse_joint(&read(path)?, &path.display().to_string())
}

pub fn read_channel(path: &Path) -> Result<Channel> {
    parse_channel(&read(path)?, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let p = parse_pmf(r#"{"masses": [0.25, 0.75]}"#, "p").unwrap();
        assert_eq!(p.masses(), &[0.25, 0.75]);
        let bad = parse_pmf(r#"{"masses": [0.2, 0.7]}"#, "p").unwrap_err();
        assert!(matches!(bad, Error::Input(_)));
        let err = parse_pmf("{\n \"masses\": [0.5,\n }", "p.json").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let j = parse_joint(r#"{"matrix": [[0.5, 0.0], [0.25, 0.25]]}"#, "j").unwrap();
        assert_eq!(j.k(), 2);
    }
}
