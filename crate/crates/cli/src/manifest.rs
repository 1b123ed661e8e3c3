//! Run manifests: enough metadata to reproduce an output byte-for-byte
//! (timestamps excluded).

use sha2::{Digest, Sha256};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

pub fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn digest_hex(path: &Path) -> Result<String, String> {
    let data = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let digest = Sha256::digest(&data);
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    Ok(hex)
}

/// Writes `<output>.manifest` recording the command line, tool version,
/// master seed, input digests and wall-clock bounds.
pub fn write_manifest(
    output: &Path,
    inputs: &[&Path],
    seed: Option<u64>,
    started: u64,
) -> Result<(), String> {
    let mut text = String::from("manifest v1\n");
    let argv: Vec<String> = std::env::args().collect();
    text.push_str(&format!("command: {}\n", argv.join(" ")));
    text.push_str(&format!(
        "version: {} {}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    ));
    match seed {
        Some(s) => text.push_str(&format!("seed: {s}\n")),
        None => text.push_str("seed: -\n"),
    }
    for input in inputs {
        text.push_str(&format!(
            "input {} sha256 {}\n",
            input.display(),
            digest_hex(input)?
        ));
    }
    text.push_str(&format!("started: {started}\nfinished: {}\n", now()));
    let path = output.with_extension(format!(
        "{}manifest",
        output
            .extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))
}
