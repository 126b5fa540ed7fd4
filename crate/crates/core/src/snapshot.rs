//! Snapshot file format, one file per scalar field.
//!
//! Layout (bit-exact):
//!   - one ASCII header line `BSQ1 dim nx [ny [nz]] time\n` where the axis
//!     counts are repeated per dimension and `time` prints with Rust's
//!     shortest round-trip `{}` formatting;
//!   - followed immediately by nx·ny(·nz) little-endian IEEE-754 doubles,
//!     the physical field values in row-major order.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::SpectralField;
use crate::grid::GridSpec;

pub const MAGIC: &str = "BSQ1";

/// Physical values plus grid/time metadata, as stored on disk.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub grid: GridSpec,
    pub time: f64,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn from_field(field: &SpectralField, time: f64) -> Snapshot {
        Snapshot {
            grid: field.grid(),
            time,
            values: fft::inverse(field),
        }
    }

    pub fn to_field(&self) -> Result<SpectralField> {
        fft::forward(self.grid, &self.values)
    }

    pub fn header(&self) -> String {
        let n = self.grid.n();
        let axes = vec![n.to_string(); self.grid.dim()].join(" ");
        format!("{MAGIC} {} {} {}\n", self.grid.dim(), axes, self.time)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = self.header().into_bytes();
        bytes.reserve(self.values.len() * 8);
        for v in &self.values {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        bytes
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Snapshot> {
        let nl = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::Config("snapshot has no header line".into()))?;
        let header = std::str::from_utf8(&bytes[..nl])
            .map_err(|_| Error::Config("snapshot header is not UTF-8".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some(MAGIC) {
            return Err(Error::Config(format!("bad snapshot magic in '{header}'")));
        }
        let dim: usize = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Config("snapshot header missing dim".into()))?;
        let mut axes = Vec::with_capacity(dim);
        for _ in 0..dim {
            let n: usize = parts
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Config("snapshot header missing axis count".into()))?;
            axes.push(n);
        }
        let time: f64 = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Config("snapshot header missing time".into()))?;
        if parts.next().is_some() {
            return Err(Error::Config("trailing tokens in snapshot header".into()));
        }
        if axes.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Config(format!("anisotropic snapshot axes {axes:?} unsupported")));
        }
        let grid = GridSpec::new(dim, axes[0])?;
        let payload = &bytes[nl + 1..];
        if payload.len() != grid.num_points() * 8 {
            return Err(Error::Config(format!(
                "snapshot payload has {} bytes, expected {}",
                payload.len(),
                grid.num_points() * 8
            )));
        }
        let values = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Snapshot { grid, time, values })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Snapshot> {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .map_err(|e| Error::io(path, e))?
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io(path, e))?;
        Snapshot::from_bytes(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::field_from_fn;

    #[test]
    fn snapshot_roundtrip_is_bit_exact() {
        let grid = GridSpec::new(2, 16).unwrap();
        let f = field_from_fn(grid, |x| (2.0 * x[0]).cos() * x[1].sin() + 0.125);
        let snap = Snapshot::from_field(&f, 0.6251);
        let bytes = snap.to_bytes();
        let back = Snapshot::from_bytes(&bytes).unwrap();
        assert_eq!(back.grid, grid);
        assert_eq!(back.time.to_bits(), snap.time.to_bits());
        for (a, b) in snap.values.iter().zip(&back.values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn header_layout_is_documented_format() {
        let grid = GridSpec::new(3, 8).unwrap();
        let f = field_from_fn(grid, |_| 0.0);
        let snap = Snapshot::from_field(&f, 1.5);
        assert_eq!(snap.header(), "BSQ1 3 8 8 8 1.5\n");
    }

    #[test]
    fn corrupt_payload_rejected() {
        let grid = GridSpec::new(2, 8).unwrap();
        let f = field_from_fn(grid, |_| 1.0);
        let mut bytes = Snapshot::from_field(&f, 0.0).to_bytes();
        bytes.truncate(bytes.len() - 3);
        assert!(Snapshot::from_bytes(&bytes).is_err());
        assert!(Snapshot::from_bytes(b"NOPE 2 8 8 0.0\n").is_err());
    }
}
