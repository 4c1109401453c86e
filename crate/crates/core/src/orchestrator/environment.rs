use std::fs;

use serde::{Deserialize, Serialize};

use crate::HARNESS_VERSION;

pub const UNKNOWN: &str = "unknown";

/// Where a trial ran. Capture is best effort; missing facts read "unknown".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EnvironmentInfo {
    pub os_name: String,
    pub os_version: String,
    pub cpu_model: String,
    pub logical_cores: String,
    pub total_memory: String,
    pub harness_version: String,
    pub executor: String,
}

impl EnvironmentInfo {
    pub fn capture(executor: &str) -> Self {
        let (os_name, os_version) = os_release();
        EnvironmentInfo {
            os_name,
            os_version,
            cpu_model: cpu_model(),
            logical_cores: std::thread::available_parallelism()
                .map(|n| n.get().to_string())
                .unwrap_or_else(|_| UNKNOWN.to_string()),
            total_memory: total_memory(),
            harness_version: HARNESS_VERSION.to_string(),
            executor: executor.to_string(),
        }
    }
}

fn os_release() -> (String, String) {
    let mut name = std::env::consts::OS.to_string();
    let mut version = UNKNOWN.to_string();
    if let Ok(text) = fs::read_to_string("/etc/os-release") {
        for line in text.lines() {
            let unquote = |v: &str| v.trim_matches('"').to_string();
            if let Some(v) = line.strip_prefix("NAME=") {
                name = unquote(v);
            } else if let Some(v) = line.strip_prefix("VERSION_ID=") {
                version = unquote(v);
            }
        }
    }
    if let Ok(kernel) = fs::read_to_string("/proc/sys/kernel/osrelease") {
        version = format!("{version} (kernel {})", kernel.trim());
    }
    (name, version)
}

fn cpu_model() -> String {
    fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|text| {
            text.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split_once(':'))
                .map(|(_, v)| v.trim().to_string())
        })
        .unwrap_or_else(|| UNKNOWN.to_string())
}

fn total_memory() -> String {
    fs::read_to_string("/proc/meminfo")
        .ok()
        .and_then(|text| {
            text.lines().find(|l| l.starts_with("MemTotal:")).map(|l| l["MemTotal:".len()..].trim().to_string())
        })
        .unwrap_or_else(|| UNKNOWN.to_string())
}
