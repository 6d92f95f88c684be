//! Binary field format.
//!
//! Layout: 16-byte ASCII magic `TFWEYLFLD\0` (zero-padded), little-endian
//! `u32` dims, per axis `(u32 N, f64 half_extent, u8 space_tag)`, then
//! interleaved `f64 (re, im)` row-major. Phase-space fields carry a kind
//! byte and a lattice metadata block (shift-axis count) between the axes
//! and the values; operator matrices are written as dims = 2 with a
//! convention byte (0 = apply contracts with the axis spacing).
//!
//! Provenance (fixture specs, truncation) travels in the JSON sidecars the
//! CLI writes next to these files; a reloaded sampled function recovers its
//! truncation flag from the boundary modulus.

use std::io::{self, Read, Write};

use num_complex::Complex64;

use crate::grids::{Axis, Grid, SampledFunction, SpaceTag};
use crate::operators::OperatorMatrix;
use crate::tolerances;
use crate::transforms::{FieldKind, PhaseSpaceField};

pub const MAGIC: [u8; 16] = *b"TFWEYLFLD\0\0\0\0\0\0\0";

fn write_axis(w: &mut impl Write, ax: &Axis) -> io::Result<()> {
    w.write_all(&(ax.n as u32).to_le_bytes())?;
    w.write_all(&ax.half_extent.to_le_bytes())?;
    w.write_all(&[match ax.tag {
        SpaceTag::Time => 0u8,
        SpaceTag::Freq => 1u8,
    }])
}

fn read_axis(r: &mut impl Read) -> io::Result<Axis> {
    let mut n4 = [0u8; 4];
    r.read_exact(&mut n4)?;
    let mut h8 = [0u8; 8];
    r.read_exact(&mut h8)?;
    let mut t1 = [0u8; 1];
    r.read_exact(&mut t1)?;
    let tag = match t1[0] {
        0 => SpaceTag::Time,
        1 => SpaceTag::Freq,
        other => {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("unknown space tag {other}"),
            ))
        }
    };
    Ok(Axis {
        n: u32::from_le_bytes(n4) as usize,
        half_extent: f64::from_le_bytes(h8),
        tag,
    })
}

fn write_values(w: &mut impl Write, values: &[Complex64]) -> io::Result<()> {
    for v in values {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

fn read_values(r: &mut impl Read, count: usize) -> io::Result<Vec<Complex64>> {
    let mut buf = vec![0u8; 16 * count];
    r.read_exact(&mut buf)?;
    Ok(buf
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}

fn read_magic(r: &mut impl Read) -> io::Result<()> {
    let mut m = [0u8; 16];
    r.read_exact(&mut m)?;
    if m != MAGIC {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad magic"));
    }
    Ok(())
}

pub fn write_sampled(w: &mut impl Write, f: &SampledFunction) -> io::Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&(f.grid.dims() as u32).to_le_bytes())?;
    for ax in &f.grid.axes {
        write_axis(w, ax)?;
    }
    write_values(w, &f.values)
}

pub fn read_sampled(r: &mut impl Read) -> io::Result<SampledFunction> {
    read_magic(r)?;
    let mut d4 = [0u8; 4];
    r.read_exact(&mut d4)?;
    let dims = u32::from_le_bytes(d4) as usize;
    let mut axes = Vec::with_capacity(dims);
    for _ in 0..dims {
        axes.push(read_axis(r)?);
    }
    let grid = Grid::from_axes(axes);
    let count = grid.len();
    let values = read_values(r, count)?;
    let mut f = SampledFunction::new(grid, values);
    f.truncated = f.boundary_modulus()
        > tolerances::BOUNDARY_DECAY * f.max_modulus().max(f64::MIN_POSITIVE);
    Ok(f)
}

fn kind_byte(kind: FieldKind) -> u8 {
    match kind {
        FieldKind::Stft => 0,
        FieldKind::Wigner => 1,
        FieldKind::Ambiguity => 2,
        FieldKind::Stft4 => 3,
    }
}

pub fn write_field(w: &mut impl Write, f: &PhaseSpaceField) -> io::Result<()> {
    w.write_all(&MAGIC)?;
    let axes = f.axes();
    w.write_all(&(axes.len() as u32).to_le_bytes())?;
    for ax in &axes {
        write_axis(w, ax)?;
    }
    w.write_all(&[kind_byte(f.kind)])?;
    w.write_all(&(f.shift_axes.len() as u32).to_le_bytes())?;
    write_values(w, &f.values)
}

pub fn read_field(r: &mut impl Read) -> io::Result<PhaseSpaceField> {
    read_magic(r)?;
    let mut d4 = [0u8; 4];
    r.read_exact(&mut d4)?;
    let dims = u32::from_le_bytes(d4) as usize;
    let mut axes = Vec::with_capacity(dims);
    for _ in 0..dims {
        axes.push(read_axis(r)?);
    }
    let mut k1 = [0u8; 1];
    r.read_exact(&mut k1)?;
    let kind = match k1[0] {
        0 => FieldKind::Stft,
        1 => FieldKind::Wigner,
        2 => FieldKind::Ambiguity,
        3 => FieldKind::Stft4,
        other => {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                format!("unknown field kind {other}"),
            ))
        }
    };
    r.read_exact(&mut d4)?;
    let n_shift = u32::from_le_bytes(d4) as usize;
    if n_shift > dims {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "bad lattice metadata"));
    }
    let count: usize = axes.iter().map(|a| a.n).product();
    let values = read_values(r, count)?;
    Ok(PhaseSpaceField {
        kind,
        shift_axes: axes[..n_shift].to_vec(),
        mod_axes: axes[n_shift..].to_vec(),
        values,
    })
}

pub fn write_operator(w: &mut impl Write, t: &OperatorMatrix) -> io::Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&2u32.to_le_bytes())?;
    let ax = t.grid.axes[0];
    write_axis(w, &ax)?;
    write_axis(w, &ax)?;
    w.write_all(&[0u8])?; // convention: (Tf)(x_n) = Σ entries[n,s]·f(x_s)·Δ
    write_values(w, &t.entries)
}

pub fn read_operator(r: &mut impl Read) -> io::Result<OperatorMatrix> {
    read_magic(r)?;
    let mut d4 = [0u8; 4];
    r.read_exact(&mut d4)?;
    if u32::from_le_bytes(d4) != 2 {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "operator needs dims=2"));
    }
    let row = read_axis(r)?;
    let col = read_axis(r)?;
    if row != col {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "non-square operator"));
    }
    let mut c1 = [0u8; 1];
    r.read_exact(&mut c1)?;
    if c1[0] != 0 {
        return Err(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("unknown quadrature convention {}", c1[0]),
        ));
    }
    let values = read_values(r, row.n * row.n)?;
    Ok(OperatorMatrix {
        grid: Grid::from_axes(vec![row]),
        entries: values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;
    use crate::transforms::stft;

    #[test]
    fn sampled_function_round_trip() {
        let g = Grid::line(64, 8.0).unwrap();
        let f = Fixture::gaussian(0.3, 1.0, 0.7).sample(&g).unwrap();
        let mut buf = Vec::new();
        write_sampled(&mut buf, &f).unwrap();
        assert_eq!(&buf[..16], &MAGIC);
        let back = read_sampled(&mut buf.as_slice()).unwrap();
        assert_eq!(back.grid, f.grid);
        assert_eq!(back.values, f.values);
        assert_eq!(back.truncated, f.truncated);
    }

    #[test]
    fn truncated_flag_recovers_from_boundary() {
        let g = Grid::line(64, 8.0).unwrap();
        let one = Fixture::constant(1.0).sample(&g).unwrap();
        let mut buf = Vec::new();
        write_sampled(&mut buf, &one).unwrap();
        assert!(read_sampled(&mut buf.as_slice()).unwrap().truncated);
    }

    #[test]
    fn field_round_trip() {
        let g = Grid::line(64, 8.0).unwrap();
        let f = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let field = stft(&f, &f).unwrap();
        let mut buf = Vec::new();
        write_field(&mut buf, &field).unwrap();
        let back = read_field(&mut buf.as_slice()).unwrap();
        assert_eq!(back.kind, field.kind);
        assert_eq!(back.shift_axes, field.shift_axes);
        assert_eq!(back.mod_axes, field.mod_axes);
        assert_eq!(back.values, field.values);
    }

    #[test]
    fn operator_round_trip() {
        let g = Grid::line(32, 6.0).unwrap();
        let a = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let m = crate::operators::multiplication_operator(&a).unwrap();
        let mut buf = Vec::new();
        write_operator(&mut buf, &m).unwrap();
        let back = read_operator(&mut buf.as_slice()).unwrap();
        assert_eq!(back.grid, m.grid);
        assert_eq!(back.entries, m.entries);
    }

    #[test]
    fn corrupted_magic_is_rejected() {
        let g = Grid::line(32, 6.0).unwrap();
        let f = Fixture::gaussian(0.0, 1.0, 0.0).sample(&g).unwrap();
        let mut buf = Vec::new();
        write_sampled(&mut buf, &f).unwrap();
        buf[0] = b'X';
        assert!(read_sampled(&mut buf.as_slice()).is_err());
    }
}
