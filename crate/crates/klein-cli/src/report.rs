//! The JSON report document. Key order follows field order, so identical
//! runs give identical bytes.

use std::io::Write;

use klein_core::mesh::{IntersectionReport, MeshTopologyReport, Provenance};
use klein_core::surface::SurfaceDescriptor;
use klein_core::verify::{VerificationReport, VerifyConfig};
use serde::Serialize;

use crate::config::RunConfig;
use crate::export::ExportError;

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "klein";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct MeshSection {
    pub provenance: Provenance,
    pub topology: MeshTopologyReport,
    pub self_intersections: IntersectionReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub surface: SurfaceDescriptor,
    /// Effective verifier settings, defaults included.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify_config: Option<VerifyConfig>,
    #[serde(flatten)]
    pub verification: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mesh: Option<MeshSection>,
}

impl Report {
    pub fn new(config: RunConfig, surface: SurfaceDescriptor) -> Self {
        Self {
            schema: SCHEMA,
            tool: TOOL,
            version: VERSION,
            config,
            surface,
            verify_config: None,
            verification: None,
            mesh: None,
        }
    }
}

pub fn write_report<W: Write>(r: &Report, sink: &mut W) -> Result<(), ExportError> {
    serde_json::to_writer_pretty(&mut *sink, r).map_err(std::io::Error::from)?;
    sink.write_all(b"\n")?;
    Ok(())
}

pub fn report_string(r: &Report) -> String {
    let mut buf = Vec::new();
    write_report(r, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
