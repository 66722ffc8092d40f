//! Line-delimited JSON persistence for [`InvertedIndex`].
//!
//! ```text
//! {"magic":"duoret-index","format_version":1,"item_count":N,"avg_length":..,"avg_unique":..}
//! {"item_id":0,"external_id":"..","kind":"tweet","metadata":{..},"text":"..","length":L,"unique":M}
//! ...                                   (item_count item records)
//! {"term":"cat","postings":[[item_id,tf,[positions..]],..]}
//! ...                                   (one record per term, lexicographic)
//! {"checksum":"<16 hex digits>"}        (CRC-64/XZ of every preceding byte)
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use crc::{Crc, CRC_64_XZ};
use serde::{Deserialize, Serialize};

use super::{IndexedItem, InvertedIndex, ItemId, Posting};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "duoret-index";
const CHECKSUM: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);

#[derive(Serialize, Deserialize)]
struct Header {
    magic: String,
    format_version: u32,
    item_count: u32,
    avg_length: f64,
    avg_unique: f64,
}

#[derive(Serialize, Deserialize)]
struct TermLine {
    term: String,
    postings: Vec<(ItemId, u32, Vec<u32>)>,
}

#[derive(Serialize, Deserialize)]
struct ChecksumLine {
    checksum: String,
}

impl InvertedIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let header = Header {
            magic: MAGIC.to_string(),
            format_version: FORMAT_VERSION,
            item_count: self.stats.item_count,
            avg_length: self.stats.avg_length,
            avg_unique: self.stats.avg_unique,
        };
        write_line(&mut out, &header);
        for item in &self.items {
            write_line(&mut out, item);
        }
        for (term, list) in self.terms.iter().zip(&self.postings) {
            let line = TermLine {
                term: term.clone(),
                postings: list
                    .iter()
                    .map(|p| (p.item_id, p.term_frequency(), p.positions.clone()))
                    .collect(),
            };
            write_line(&mut out, &line);
        }
        let checksum = CHECKSUM.checksum(&out);
        write_line(
            &mut out,
            &ChecksumLine {
                checksum: format!("{checksum:016x}"),
            },
        );
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut file = fs::File::create(path)
            .map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
        file.write_all(&self.to_bytes())
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes =
            fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes)
            .map_err(|_| Error::Format("index file is not valid UTF-8".into()))?;
        if text.is_empty() {
            return Err(Error::Truncated("file is empty".into()));
        }

        let first_end = text.find('\n').unwrap_or(text.len());
        let header: Header = serde_json::from_str(&text[..first_end])
            .map_err(|_| Error::Format("missing or malformed header record".into()))?;
        if header.magic != MAGIC {
            return Err(Error::Format(format!("bad magic `{}`", header.magic)));
        }
        if header.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: header.format_version,
                expected: FORMAT_VERSION,
            });
        }

        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| Error::Truncated("file does not end with a newline".into()))?;
        let last_start = body.rfind('\n').map_or(0, |i| i + 1);
        let stored = serde_json::from_str::<ChecksumLine>(&body[last_start..])
            .ok()
            .filter(|_| last_start > 0)
            .ok_or_else(|| Error::Truncated("missing checksum record".into()))?;
        let stored = u64::from_str_radix(&stored.checksum, 16)
            .map_err(|_| Error::Format("checksum is not hexadecimal".into()))?;
        let computed = CHECKSUM.checksum(&bytes[..last_start]);
        if stored != computed {
            return Err(Error::Checksum { stored, computed });
        }

        let mut lines = body[..last_start].lines().skip(1).enumerate();
        let mut items = Vec::with_capacity(header.item_count as usize);
        for expected_id in 0..header.item_count {
            let (n, line) = lines.next().ok_or_else(|| {
                Error::Truncated(format!("expected {} item records", header.item_count))
            })?;
            let item: IndexedItem = serde_json::from_str(line)
                .map_err(|e| Error::Format(format!("line {}: {e}", n + 2)))?;
            if item.item_id != expected_id {
                return Err(Error::Format(format!(
                    "line {}: item id {} out of order",
                    n + 2,
                    item.item_id
                )));
            }
            items.push(item);
        }

        let mut postings = BTreeMap::new();
        let mut lengths = vec![0u32; items.len()];
        let mut uniques = vec![0u32; items.len()];
        for (n, line) in lines {
            let record: TermLine = serde_json::from_str(line)
                .map_err(|e| Error::Format(format!("line {}: {e}", n + 2)))?;
            let mut list = Vec::with_capacity(record.postings.len());
            for (item_id, tf, positions) in record.postings {
                let valid = (item_id as usize) < items.len()
                    && tf as usize == positions.len()
                    && tf > 0
                    && positions.windows(2).all(|w| w[0] < w[1]);
                if !valid {
                    return Err(Error::Format(format!(
                        "line {}: inconsistent posting for `{}`",
                        n + 2,
                        record.term
                    )));
                }
                lengths[item_id as usize] += tf;
                uniques[item_id as usize] += 1;
                list.push(Posting { item_id, positions });
            }
            if postings.insert(record.term.clone(), list).is_some() {
                return Err(Error::Format(format!(
                    "line {}: duplicate term `{}`",
                    n + 2,
                    record.term
                )));
            }
        }

        for (item, (&l, &m)) in items.iter().zip(lengths.iter().zip(&uniques)) {
            if item.length != l || item.unique != m {
                return Err(Error::Format(format!(
                    "item {} statistics disagree with postings",
                    item.item_id
                )));
            }
        }
        let index = InvertedIndex::assemble(items, postings);
        if index.stats.avg_length.to_bits() != header.avg_length.to_bits()
            || index.stats.avg_unique.to_bits() != header.avg_unique.to_bits()
        {
            return Err(Error::Format(
                "header statistics disagree with items".into(),
            ));
        }
        Ok(index)
    }
}

fn write_line<T: Serialize>(out: &mut Vec<u8>, value: &T) {
    serde_json::to_writer(&mut *out, value).expect("in-memory serialization");
    out.push(b'\n');
}
