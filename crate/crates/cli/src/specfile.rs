//! Human-readable code description that rebuilds the exact same code.

use crate::error::{CliError, CliResult};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;
use varray_core::constructions::{
    build_br, build_cauchy_vesip, build_generalized_rdp, build_vand_vesip_r4, build_vand_vetbr,
};
use varray_core::{BitMatrix, CodeSpec, Family, Poly};

pub const SPEC_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub format_version: u32,
    pub family: String,
    pub p: usize,
    pub tau: usize,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Cauchy row points as hex coefficient integers (bit k = coefficient of x^k).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b: Vec<String>,
    /// SHA-256 of the binary parity-check matrix, see [`hbin_digest`].
    pub hbin_sha256: String,
}

/// SHA-256 over `rows` and `cols` as u64 little-endian followed by the rows
/// packed LSB-first, each padded to a byte boundary.
pub fn hbin_digest(h: &BitMatrix) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update((h.rows() as u64).to_le_bytes());
    hasher.update((h.cols() as u64).to_le_bytes());
    hasher.update(h.to_row_bytes());
    hasher.finalize().into()
}

/// Parameters for building a code from the command line or a spec file.
#[derive(Debug, Clone, Default)]
pub struct BuildParams {
    pub family: String,
    pub p: usize,
    pub tau: usize,
    pub r: Option<usize>,
    pub n0: Option<usize>,
    pub n1: Option<usize>,
    pub n: Option<usize>,
    pub a: Vec<Poly>,
    pub b: Vec<Poly>,
}

fn need(v: Option<usize>, name: &str, family: &str) -> CliResult<usize> {
    v.ok_or_else(|| CliError::Usage(format!("family {family} needs --{name}")))
}

pub fn build(bp: &BuildParams) -> CliResult<CodeSpec> {
    let family: Family = bp.family.parse()?;
    let f = bp.family.as_str();
    let unit_tau = || {
        if bp.tau != 1 {
            Err(CliError::Usage(format!(
                "family {f} is defined for tau = 1 only"
            )))
        } else {
            Ok(())
        }
    };
    let spec = match family {
        Family::CauchyVesip => build_cauchy_vesip(
            bp.p,
            bp.tau,
            need(bp.r, "r", f)?,
            need(bp.n, "n", f)?,
            (!bp.a.is_empty()).then(|| bp.a.clone()),
            (!bp.b.is_empty()).then(|| bp.b.clone()),
        )?,
        Family::VandVetbr => {
            build_vand_vetbr(bp.p, bp.tau, need(bp.r, "r", f)?, need(bp.n0, "n0", f)?)?
        }
        Family::VandVesip4 => {
            if bp.r.is_some_and(|r| r != 4) {
                return Err(CliError::Usage(format!("family {f} has r = 4")));
            }
            build_vand_vesip_r4(bp.p, bp.tau, need(bp.n1, "n1", f)?)?
        }
        Family::GenRdp => {
            unit_tau()?;
            build_generalized_rdp(bp.p, need(bp.r, "r", f)?)?
        }
        Family::Br => {
            unit_tau()?;
            build_br(bp.p, need(bp.r, "r", f)?)?
        }
        Family::Custom(_) => {
            return Err(CliError::Usage(format!(
                "family {f} cannot be built from parameters"
            )))
        }
    };
    Ok(spec)
}

impl SpecFile {
    pub fn from_spec(spec: &CodeSpec) -> CliResult<SpecFile> {
        let family = spec.family();
        if matches!(family, Family::Custom(_)) {
            return Err(CliError::Usage(
                "custom codes have no spec file form".into(),
            ));
        }
        let (a, b) = spec.cauchy_points();
        let rp = spec.params();
        Ok(SpecFile {
            format_version: SPEC_FORMAT_VERSION,
            family: family.tag().to_string(),
            p: rp.p(),
            tau: rp.tau(),
            r: spec.r(),
            n0: (family == Family::VandVetbr)
                .then(|| spec.size_exponent())
                .flatten(),
            n1: (family == Family::VandVesip4)
                .then(|| spec.size_exponent())
                .flatten(),
            n: (family == Family::CauchyVesip).then_some(spec.n()),
            a: a.iter().map(Poly::to_hex).collect(),
            b: b.iter().map(Poly::to_hex).collect(),
            hbin_sha256: hex::encode(hbin_digest(spec.hbin())),
        })
    }

    pub fn build_params(&self) -> CliResult<BuildParams> {
        let parse = |v: &[String]| -> CliResult<Vec<Poly>> {
            v.iter()
                .map(|s| Poly::from_hex(s).map_err(CliError::from))
                .collect()
        };
        Ok(BuildParams {
            family: self.family.clone(),
            p: self.p,
            tau: self.tau,
            r: Some(self.r),
            n0: self.n0,
            n1: self.n1,
            n: self.n,
            a: parse(&self.a)?,
            b: parse(&self.b)?,
        })
    }

    /// Rebuilds the code and checks it against the recorded digest.
    pub fn to_spec(&self) -> CliResult<CodeSpec> {
        if self.format_version != SPEC_FORMAT_VERSION {
            return Err(CliError::Format(format!(
                "unsupported spec format version {}",
                self.format_version
            )));
        }
        let spec = build(&self.build_params()?)?;
        let digest = hex::encode(hbin_digest(spec.hbin()));
        if digest != self.hbin_sha256 {
            return Err(CliError::Format(format!(
                "parity-check digest mismatch: file has {}, rebuilt code has {digest}",
                self.hbin_sha256
            )));
        }
        Ok(spec)
    }

    pub fn digest_bytes(&self) -> CliResult<[u8; 32]> {
        let v = hex::decode(&self.hbin_sha256)
            .map_err(|e| CliError::Format(format!("bad digest hex: {e}")))?;
        v.try_into()
            .map_err(|_| CliError::Format("digest must be 32 bytes".into()))
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string_pretty(self).map_err(|e| CliError::Internal(e.to_string()))
    }

    pub fn from_toml(s: &str) -> CliResult<SpecFile> {
        toml::from_str(s).map_err(|e| CliError::Format(format!("invalid spec file: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<SpecFile> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        Self::from_toml(&s)
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_toml()?)
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }
}
