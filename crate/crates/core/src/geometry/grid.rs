//! Grid-sampled fields and their binary file format.
//!
//! Layout, little-endian: magic `FGRD`, `u32` version (1), `u32` component
//! count, four `u32` dimensions, `f64` spacing, four `f64` origin coordinates,
//! then `f64` samples with `x1` varying slowest and the component index fastest.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::field::{Domain, Field};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"FGRD";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub ncomp: usize,
    pub dims: [usize; 4],
    pub spacing: f64,
    pub origin: [f64; 4],
    pub data: Vec<f64>,
    label: String,
}

impl GridField {
    pub fn new(
        ncomp: usize,
        dims: [usize; 4],
        spacing: f64,
        origin: [f64; 4],
        data: Vec<f64>,
    ) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::Parse(
                "grid needs at least 2 samples per axis".into(),
            ));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Parse(format!(
                "grid spacing must be positive, got {spacing}"
            )));
        }
        let expected = dims.iter().product::<usize>() * ncomp;
        if data.len() != expected || ncomp == 0 {
            return Err(Error::Parse(format!(
                "grid holds {} values, header implies {expected}",
                data.len()
            )));
        }
        Ok(GridField {
            ncomp,
            dims,
            spacing,
            origin,
            data,
            label: format!(
                "grid {}x{}x{}x{} h={spacing}",
                dims[0], dims[1], dims[2], dims[3]
            ),
        })
    }

    /// Samples `f` at the grid nodes.
    pub fn sample(f: &dyn Field, dims: [usize; 4], spacing: f64, origin: [f64; 4]) -> Result<Self> {
        let ncomp = f.components();
        let mut data = Vec::with_capacity(dims.iter().product::<usize>() * ncomp);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    for l in 0..dims[3] {
                        let p = [
                            origin[0] + i as f64 * spacing,
                            origin[1] + j as f64 * spacing,
                            origin[2] + k as f64 * spacing,
                            origin[3] + l as f64 * spacing,
                        ];
                        data.extend(f.eval(&p));
                    }
                }
            }
        }
        GridField::new(ncomp, dims, spacing, origin, data)
    }

    fn node(&self, idx: [usize; 4]) -> &[f64] {
        let d = &self.dims;
        let flat = ((idx[0] * d[1] + idx[1]) * d[2] + idx[2]) * d[3] + idx[3];
        &self.data[flat * self.ncomp..(flat + 1) * self.ncomp]
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(MAGIC)?;
        w.write_u32::<LittleEndian>(VERSION)?;
        w.write_u32::<LittleEndian>(self.ncomp as u32)?;
        for &d in &self.dims {
            w.write_u32::<LittleEndian>(d as u32)?;
        }
        w.write_f64::<LittleEndian>(self.spacing)?;
        for &o in &self.origin {
            w.write_f64::<LittleEndian>(o)?;
        }
        for &v in &self.data {
            w.write_f64::<LittleEndian>(v)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse(format!("{}: not a grid file", path.display())));
        }
        let version = r.read_u32::<LittleEndian>()?;
        if version != VERSION {
            return Err(Error::Parse(format!("unsupported grid version {version}")));
        }
        let ncomp = r.read_u32::<LittleEndian>()? as usize;
        let mut dims = [0usize; 4];
        for d in &mut dims {
            *d = r.read_u32::<LittleEndian>()? as usize;
        }
        let spacing = r.read_f64::<LittleEndian>()?;
        let mut origin = [0f64; 4];
        for o in &mut origin {
            *o = r.read_f64::<LittleEndian>()?;
        }
        let n = dims.iter().product::<usize>() * ncomp;
        let mut data = vec![0f64; n];
        r.read_f64_into::<LittleEndian>(&mut data)
            .map_err(|e| Error::Parse(format!("truncated grid data: {e}")))?;
        let mut g = GridField::new(ncomp, dims, spacing, origin, data)?;
        g.label = format!("grid:{}", path.display());
        Ok(g)
    }
}

impl Field for GridField {
    fn components(&self) -> usize {
        self.ncomp
    }

    /// Multilinear interpolation; exact at nodes.
    fn eval(&self, p: &[f64; 4]) -> Vec<f64> {
        let mut base = [0usize; 4];
        let mut frac = [0f64; 4];
        for a in 0..4 {
            let t = (p[a] - self.origin[a]) / self.spacing;
            let r = t.round();
            let t = if (t - r).abs() < 1e-9 { r } else { t };
            let i = (t.floor().max(0.0) as usize).min(self.dims[a] - 2);
            base[a] = i;
            frac[a] = (t - i as f64).clamp(0.0, 1.0);
        }
        let mut out = vec![0f64; self.ncomp];
        for corner in 0..16usize {
            let mut w = 1.0;
            let mut idx = base;
            for a in 0..4 {
                if corner >> a & 1 == 1 {
                    idx[a] += 1;
                    w *= frac[a];
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            if w == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.node(idx)) {
                *o += w * v;
            }
        }
        out
    }

    fn domain(&self) -> Option<Domain> {
        let mut d = Domain {
            lo: self.origin,
            hi: self.origin,
        };
        for a in 0..4 {
            d.hi[a] += (self.dims[a] - 1) as f64 * self.spacing;
        }
        Some(d)
    }

    fn spacing(&self) -> Option<f64> {
        Some(self.spacing)
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}
