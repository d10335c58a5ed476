//! The NF registry: where a source NF finds the network functions it can
//! provision against. In the simulated deployment this is a JSON file
//! listing each NF with its two ports — provisioning (HTTP) and control
//! (framed TCP).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::doc::NfClass;
use crate::nfsim::variant::{AP_VENDORS, GNB_VENDORS};

/// Base port for the HTTP provisioning listeners; NF `i` listens on
/// `PROVISIONING_BASE_PORT + i`.
pub const PROVISIONING_BASE_PORT: u16 = 7700;
/// Base port for the TCP control listeners; NF `i` listens on
/// `CONTROL_BASE_PORT + i`.
pub const CONTROL_BASE_PORT: u16 = 7800;

/// One reachable network function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NfEndpoint {
    pub nf_id: String,
    pub nf_class: NfClass,
    pub vendor: String,
    pub host: String,
    pub provisioning_port: u16,
    pub control_port: u16,
    /// Seed of the simulated vendor variant backing this NF.
    pub seed: u64,
}

impl NfEndpoint {
    pub fn provisioning_url(&self) -> String {
        format!("http://{}:{}", self.host, self.provisioning_port)
    }

    pub fn control_addr(&self) -> String {
        format!("{}:{}", self.host, self.control_port)
    }
}

/// The full deployment roster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NfRegistry {
    pub nfs: Vec<NfEndpoint>,
}

impl NfRegistry {
    /// The standard simulated deployment: five WLAN APs then five gNBs,
    /// one vendor variant each (seeds 1–5), ports assigned by roster
    /// position from the two base ports.
    pub fn default_local() -> Self {
        let mut nfs = Vec::with_capacity(10);
        let classes = [
            (NfClass::WlanAp, "ap", &AP_VENDORS),
            (NfClass::Gnb, "gnb", &GNB_VENDORS),
        ];
        for (class, prefix, vendors) in classes {
            for (vi, vendor) in vendors.iter().enumerate() {
                let i = nfs.len() as u16;
                nfs.push(NfEndpoint {
                    nf_id: format!("{prefix}-{vendor}"),
                    nf_class: class,
                    vendor: vendor.to_string(),
                    host: "127.0.0.1".to_string(),
                    provisioning_port: PROVISIONING_BASE_PORT + i,
                    control_port: CONTROL_BASE_PORT + i,
                    seed: (vi + 1) as u64,
                });
            }
        }
        NfRegistry { nfs }
    }

    pub fn lookup(&self, nf_id: &str) -> Option<&NfEndpoint> {
        self.nfs.iter().find(|nf| nf.nf_id == nf_id)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read registry {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("invalid registry {}: {e}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<(), String> {
        let text = serde_json::to_string_pretty(self).expect("registry serializes");
        std::fs::write(path, text)
            .map_err(|e| format!("cannot write registry {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_roster_has_ten_nfs_with_ladder_ports() {
        let reg = NfRegistry::default_local();
        assert_eq!(reg.nfs.len(), 10);
        for (i, nf) in reg.nfs.iter().enumerate() {
            assert_eq!(nf.provisioning_port, 7700 + i as u16);
            assert_eq!(nf.control_port, 7800 + i as u16);
        }
        assert_eq!(reg.nfs[0].nf_id, "ap-acme");
        assert_eq!(reg.nfs[0].seed, 1);
        assert_eq!(reg.nfs[5].nf_id, "gnb-nordix");
        assert_eq!(reg.nfs[5].seed, 1);
        assert_eq!(reg.nfs[9].nf_id, "gnb-ritek");
        assert_eq!(reg.nfs[9].seed, 5);
        assert!(reg.lookup("ap-cirrus").is_some());
        assert!(reg.lookup("ap-nowhere").is_none());
    }

    #[test]
    fn registry_round_trips_through_json() {
        let reg = NfRegistry::default_local();
        let text = serde_json::to_string(&reg).unwrap();
        let back: NfRegistry = serde_json::from_str(&text).unwrap();
        assert_eq!(back, reg);
    }
}
