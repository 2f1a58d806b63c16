//! Dataset files.
//!
//! Binary layout, all little-endian:
//!
//! ```text
//! magic   "L1MD"
//! version u32
//! n, d, s u64 x 3
//! features  f64 x (n*d), row-major
//! labels    i8 x n
//! xi        i8 x n
//! truth     support u64 x s, then values f64 x s
//! seed      master_seed u64, stream_id u64
//! noise     tag u8 (0 none, 1 flip, 2 logistic, 3 prequant), sigma f64
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::{Dataset, GroundTruth, NoiseModel};
use crate::error::{Error, Result};

pub const DATASET_MAGIC: &[u8; 4] = b"L1MD";
pub const DATASET_VERSION: u32 = 1;

pub fn write_dataset<W: Write>(ds: &Dataset, mut out: W) -> Result<()> {
    out.write_all(DATASET_MAGIC)?;
    out.write_u32::<LittleEndian>(DATASET_VERSION)?;
    out.write_u64::<LittleEndian>(ds.n as u64)?;
    out.write_u64::<LittleEndian>(ds.d as u64)?;
    out.write_u64::<LittleEndian>(ds.truth.sparsity() as u64)?;
    for &v in &ds.features {
        out.write_f64::<LittleEndian>(v)?;
    }
    for &y in &ds.labels {
        out.write_i8(y)?;
    }
    for &x in &ds.xi {
        out.write_i8(x)?;
    }
    for &j in &ds.truth.support {
        out.write_u64::<LittleEndian>(j as u64)?;
    }
    for &v in &ds.truth.values {
        out.write_f64::<LittleEndian>(v)?;
    }
    out.write_u64::<LittleEndian>(ds.seed_record.0)?;
    out.write_u64::<LittleEndian>(ds.seed_record.1)?;
    let tag = match ds.noise {
        NoiseModel::Noiseless => 0u8,
        NoiseModel::RandomFlip { .. } => 1,
        NoiseModel::Logistic { .. } => 2,
        NoiseModel::PreQuantGaussian { .. } => 3,
    };
    out.write_u8(tag)?;
    out.write_f64::<LittleEndian>(ds.noise.sigma())?;
    out.flush()?;
    Ok(())
}

pub fn read_dataset<R: Read>(mut input: R) -> Result<Dataset> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != DATASET_MAGIC {
        return Err(Error::Format("not a dataset file (bad magic)".into()));
    }
    let version = input.read_u32::<LittleEndian>()?;
    if version != DATASET_VERSION {
        return Err(Error::Format(format!("unsupported dataset version {version}")));
    }
    let n = input.read_u64::<LittleEndian>()? as usize;
    let d = input.read_u64::<LittleEndian>()? as usize;
    let s = input.read_u64::<LittleEndian>()? as usize;
    if n == 0 || d == 0 || s == 0 || s > d {
        return Err(Error::Format(format!("inconsistent header n={n} d={d} s={s}")));
    }
    let mut features = vec![0.0; n.checked_mul(d).ok_or_else(|| Error::Format("n*d overflows".into()))?];
    input.read_f64_into::<LittleEndian>(&mut features)?;
    let mut labels = vec![0i8; n];
    input.read_i8_into(&mut labels)?;
    let mut xi = vec![0i8; n];
    input.read_i8_into(&mut xi)?;
    let mut support = vec![0u64; s];
    input.read_u64_into::<LittleEndian>(&mut support)?;
    let mut values = vec![0.0; s];
    input.read_f64_into::<LittleEndian>(&mut values)?;
    let seed_record = (input.read_u64::<LittleEndian>()?, input.read_u64::<LittleEndian>()?);
    let tag = input.read_u8()?;
    let sigma = input.read_f64::<LittleEndian>()?;
    let noise = match tag {
        0 => NoiseModel::Noiseless,
        1 => NoiseModel::random_flip(sigma)?,
        2 => NoiseModel::logistic(sigma)?,
        3 => NoiseModel::pre_quant_gaussian(sigma)?,
        t => return Err(Error::Format(format!("unknown noise tag {t}"))),
    };
    let l1_norm = values.iter().map(|v| v.abs()).sum();
    let l2_norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    let support: Vec<usize> = support.into_iter().map(|j| j as usize).collect();
    if support.iter().any(|&j| j >= d) {
        return Err(Error::Format("truth support index out of range".into()));
    }
    let ds = Dataset {
        n,
        d,
        features,
        labels,
        xi,
        truth: GroundTruth {
            dim: d,
            support,
            values,
            l1_norm,
            l2_norm,
        },
        noise,
        seed_record,
    };
    ds.check_invariants()?;
    Ok(ds)
}

impl Dataset {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_dataset(self, BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
        read_dataset(BufReader::new(File::open(path)?))
    }
}

/// One row per sample: `y, xi, x0, ..., x{d-1}`.
pub fn write_dataset_csv<W: Write>(ds: &Dataset, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["y".to_string(), "xi".to_string()];
    header.extend((0..ds.d).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    for i in 0..ds.n {
        let mut rec = vec![ds.labels[i].to_string(), ds.xi[i].to_string()];
        rec.extend(ds.row(i).iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate, make_ground_truth, TruthShape};
    use crate::numerics::Rng;

    fn sample() -> Dataset {
        let mut rng = Rng::new(17, 2);
        let truth = make_ground_truth(7, 3, TruthShape::RandomSigns, &mut rng).unwrap();
        generate(5, &truth, &NoiseModel::random_flip(0.2).unwrap(), &mut rng).unwrap()
    }

    #[test]
    fn binary_round_trip() {
        let ds = sample();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"L1MD");
        assert_eq!(buf.len(), 4 + 4 + 24 + 5 * 7 * 8 + 5 + 5 + 3 * 16 + 16 + 9);
        let back = read_dataset(buf.as_slice()).unwrap();
        assert_eq!(back.features, ds.features);
        assert_eq!(back.labels, ds.labels);
        assert_eq!(back.xi, ds.xi);
        assert_eq!(back.truth.support, ds.truth.support);
        assert_eq!(back.truth.values, ds.truth.values);
        assert_eq!(back.noise, ds.noise);
        assert_eq!(back.seed_record, ds.seed_record);
    }

    #[test]
    fn rejects_bad_magic_and_truncation() {
        let ds = sample();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_dataset(bad.as_slice()), Err(Error::Format(_))));
        assert!(read_dataset(&buf[..buf.len() - 3]).is_err());
    }

    #[test]
    fn tampered_label_fails_invariant() {
        let ds = sample();
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf).unwrap();
        let label_offset = 4 + 4 + 24 + 5 * 7 * 8;
        buf[label_offset] = (-(buf[label_offset] as i8)) as u8;
        assert!(read_dataset(buf.as_slice()).is_err());
    }

    #[test]
    fn csv_shape() {
        let ds = sample();
        let mut buf = Vec::new();
        write_dataset_csv(&ds, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("y,xi,x0"));
        assert_eq!(lines[1].split(',').count(), 9);
    }
}
