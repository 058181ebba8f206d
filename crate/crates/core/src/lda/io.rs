//! Versioned binary model persistence.
//!
//! Layout (little-endian): magic `LLDA`, format version, priors and sampler
//! metadata, the vocabulary block, the count blocks, the posterior-mean phi
//! block, and a JSON metadata block.

use std::collections::BTreeMap;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{LdaModel, Vocabulary};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"LLDA";
const VERSION: u32 = 1;

impl LdaModel {
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut r = BufReader::new(file);
        let model = Self::read_from(&mut r)?;
        model.check_invariants()?;
        Ok(model)
    }

    fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.k as u32).to_le_bytes())?;
        w.write_all(&(self.v() as u32).to_le_bytes())?;
        w.write_all(&self.alpha.to_le_bytes())?;
        w.write_all(&self.eta.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&(self.iterations as u32).to_le_bytes())?;
        w.write_all(&(self.burn_in as u32).to_le_bytes())?;
        w.write_all(&(self.trained_docs as u64).to_le_bytes())?;
        w.write_all(&self.trained_tokens.to_le_bytes())?;
        for i in 0..self.v() {
            let token = self.vocab.token(i).as_bytes();
            w.write_all(&(token.len() as u32).to_le_bytes())?;
            w.write_all(token)?;
            w.write_all(&self.vocab.doc_freq(i).to_le_bytes())?;
        }
        for row in &self.topic_word_counts {
            for &count in row {
                w.write_all(&count.to_le_bytes())?;
            }
        }
        for &total in &self.topic_totals {
            w.write_all(&total.to_le_bytes())?;
        }
        for row in &self.phi {
            for &p in row {
                w.write_all(&p.to_le_bytes())?;
            }
        }
        let metadata = serde_json::to_vec(&self.metadata).expect("string map to json");
        w.write_all(&(metadata.len() as u32).to_le_bytes())?;
        w.write_all(&metadata)?;
        Ok(())
    }

    fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let bad = |msg: &str| Error::ModelFormat(msg.to_string());
        let mut magic = [0u8; 4];
        read_exact(r, &mut magic)?;
        if &magic != MAGIC {
            return Err(bad("bad magic bytes (not an LLDA model file)"));
        }
        let version = read_u32(r)?;
        if version != VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported format version {version} (expected {VERSION})"
            )));
        }
        let k = read_u32(r)? as usize;
        let v = read_u32(r)? as usize;
        let alpha = read_f64(r)?;
        let eta = read_f64(r)?;
        let seed = read_u64(r)?;
        let iterations = read_u32(r)? as usize;
        let burn_in = read_u32(r)? as usize;
        let trained_docs = read_u64(r)? as usize;
        let trained_tokens = read_u64(r)?;

        let mut tokens = Vec::with_capacity(v);
        let mut doc_freq = Vec::with_capacity(v);
        for _ in 0..v {
            let len = read_u32(r)? as usize;
            let mut buf = vec![0u8; len];
            read_exact(r, &mut buf)?;
            tokens.push(
                String::from_utf8(buf).map_err(|_| bad("vocabulary token is not UTF-8"))?,
            );
            doc_freq.push(read_u32(r)?);
        }
        let vocab = Vocabulary::from_parts(tokens, doc_freq);

        let mut topic_word_counts = Vec::with_capacity(k);
        for _ in 0..k {
            let mut row = Vec::with_capacity(v);
            for _ in 0..v {
                row.push(read_u64(r)?);
            }
            topic_word_counts.push(row);
        }
        let mut topic_totals = Vec::with_capacity(k);
        for _ in 0..k {
            topic_totals.push(read_u64(r)?);
        }
        let mut phi = Vec::with_capacity(k);
        for _ in 0..k {
            let mut row = Vec::with_capacity(v);
            for _ in 0..v {
                row.push(read_f64(r)?);
            }
            phi.push(row);
        }
        let metadata_len = read_u32(r)? as usize;
        let mut metadata_buf = vec![0u8; metadata_len];
        read_exact(r, &mut metadata_buf)?;
        let metadata: BTreeMap<String, String> = serde_json::from_slice(&metadata_buf)
            .map_err(|_| bad("metadata block is not a JSON string map"))?;

        Ok(LdaModel {
            k,
            vocab,
            alpha,
            eta,
            topic_word_counts,
            topic_totals,
            phi,
            seed,
            iterations,
            burn_in,
            trained_docs,
            trained_tokens,
            metadata,
        })
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::ModelFormat("truncated model file".into()))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lda::train::tests::disjoint_corpus;
    use crate::lda::{LdaParams, train};

    #[test]
    fn model_round_trips_bit_exactly() {
        let docs = disjoint_corpus(10, 10);
        let params = LdaParams {
            iterations: 20,
            burn_in: Some(10),
            seed: 9,
            min_df: 1,
            ..LdaParams::default()
        };
        let mut model = train(&docs, 2, &params).unwrap();
        model
            .metadata
            .insert("corpus_hash".into(), "deadbeef".into());

        let dir = std::env::temp_dir().join(format!("idr-model-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("model.llda");
        model.save(&path).unwrap();
        let loaded = LdaModel::load(&path).unwrap();
        assert_eq!(model, loaded);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn rejects_wrong_magic() {
        let dir = std::env::temp_dir().join(format!("idr-badmodel-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("not-a-model.llda");
        std::fs::write(&path, b"NOPE").unwrap();
        assert!(matches!(
            LdaModel::load(&path),
            Err(Error::ModelFormat(_))
        ));
        std::fs::remove_dir_all(&dir).ok();
    }
}
