use std::fs;
use std::process::ExitCode;

use anyhow::Context;
use lattice_gauge::hybrid::{inspect, FormatError};

use crate::args::InspectArgs;

pub fn run(a: &InspectArgs) -> anyhow::Result<ExitCode> {
    let bytes = fs::read(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let report = inspect(&bytes);
    if let Some(h) = &report.header {
        println!("format version: {}", h.version);
        println!("group: {}", h.group.name());
        let dims: Vec<String> = h.extents.iter().map(|e| e.to_string()).collect();
        println!("extents: {}", dims.join("x"));
        println!("beta: {}", h.metadata.beta);
        println!("seed: {}", h.metadata.seed);
        println!("sweep: {}", h.metadata.sweep);
    }
    match report.verdict {
        Ok(()) => {
            println!("OK");
            Ok(ExitCode::SUCCESS)
        }
        Err(FormatError::ChecksumMismatch { detail }) => {
            println!("CHECKSUM MISMATCH ({detail})");
            Ok(ExitCode::FAILURE)
        }
        Err(e) => {
            println!("INVALID ({e})");
            Ok(ExitCode::FAILURE)
        }
    }
}
