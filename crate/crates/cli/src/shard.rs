//! Shard file layout (all integers little-endian):
//!
//! ```text
//! offset  size  field
//!      0     4  magic "VTBR"
//!      4     2  format version (1)
//!      6    32  SHA-256 digest of the code's binary parity-check matrix
//!     38     4  column index
//!     42     8  payload byte length (length of the original input)
//!     50     8  stripe count
//!     58     .  one column per stripe, (m - tau) bits packed LSB-first,
//!               each padded to ceil((m - tau) / 8) bytes
//! ```

use crate::error::{CliError, CliResult};
use std::path::{Path, PathBuf};

pub const MAGIC: &[u8; 4] = b"VTBR";
pub const SHARD_FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 58;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShardHeader {
    pub version: u16,
    pub spec_digest: [u8; 32],
    pub column: u32,
    pub payload_len: u64,
    pub stripes: u64,
}

impl ShardHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(MAGIC);
        out[4..6].copy_from_slice(&self.version.to_le_bytes());
        out[6..38].copy_from_slice(&self.spec_digest);
        out[38..42].copy_from_slice(&self.column.to_le_bytes());
        out[42..50].copy_from_slice(&self.payload_len.to_le_bytes());
        out[50..58].copy_from_slice(&self.stripes.to_le_bytes());
        out
    }

    pub fn from_bytes(b: &[u8]) -> CliResult<ShardHeader> {
        if b.len() < HEADER_LEN {
            return Err(CliError::Format(format!(
                "shard shorter than its {HEADER_LEN}-byte header"
            )));
        }
        if &b[0..4] != MAGIC {
            return Err(CliError::Format("bad shard magic".into()));
        }
        let version = u16::from_le_bytes([b[4], b[5]]);
        if version != SHARD_FORMAT_VERSION {
            return Err(CliError::Format(format!(
                "unsupported shard version {version}"
            )));
        }
        let mut spec_digest = [0u8; 32];
        spec_digest.copy_from_slice(&b[6..38]);
        Ok(ShardHeader {
            version,
            spec_digest,
            column: u32::from_le_bytes(b[38..42].try_into().expect("4 bytes")),
            payload_len: u64::from_le_bytes(b[42..50].try_into().expect("8 bytes")),
            stripes: u64::from_le_bytes(b[50..58].try_into().expect("8 bytes")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shard {
    pub header: ShardHeader,
    /// `stripes * bytes_per_column` bytes.
    pub body: Vec<u8>,
}

impl Shard {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.body.len());
        out.extend_from_slice(&self.header.to_bytes());
        out.extend_from_slice(&self.body);
        out
    }

    /// Parses a shard whose columns hold `bytes_per_column` bytes each.
    pub fn from_bytes(b: &[u8], bytes_per_column: usize) -> CliResult<Shard> {
        let header = ShardHeader::from_bytes(b)?;
        let body = b[HEADER_LEN..].to_vec();
        let want = header.stripes as usize * bytes_per_column;
        if body.len() != want {
            return Err(CliError::Format(format!(
                "shard {} body has {} bytes, expected {want}",
                header.column,
                body.len()
            )));
        }
        Ok(Shard { header, body })
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_bytes())
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }
}

pub fn shard_path(dir: &Path, column: usize) -> PathBuf {
    dir.join(format!("shard_{column:04}.vtbr"))
}
