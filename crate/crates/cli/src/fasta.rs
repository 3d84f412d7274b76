//! Multi-record FASTA reading and writing.

use std::fs;
use std::io::Write;
use std::path::Path;

use markov_binning::markov::{Alphabet, Contig};

use crate::failure::Failure;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    /// First whitespace-separated token of the header.
    pub id: String,
    pub header: String,
    pub sequence: Vec<u8>,
}

pub fn read_records(path: &Path) -> Result<Vec<Record>, Failure> {
    let text = fs::read(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let records = parse(&text);
    if records.iter().all(|r| r.sequence.is_empty()) {
        return Err(Failure::input(format!("{} contains no sequence data", path.display())));
    }
    Ok(records)
}

pub fn parse(text: &[u8]) -> Vec<Record> {
    let mut records = Vec::new();
    let mut current: Option<Record> = None;
    for line in text.split(|&b| b == b'\n') {
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if let Some(header) = line.strip_prefix(b">") {
            records.extend(current.take());
            let header = String::from_utf8_lossy(header).trim().to_string();
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            current = Some(Record { id, header, sequence: Vec::new() });
        } else if !line.is_empty() && !line.starts_with(b";") {
            let rec = current.get_or_insert_with(|| Record { id: String::new(), header: String::new(), sequence: Vec::new() });
            rec.sequence.extend(line.iter().filter(|b| !b.is_ascii_whitespace()));
        }
    }
    records.extend(current);
    for (i, r) in records.iter_mut().enumerate() {
        if r.id.is_empty() {
            r.id = format!("record_{}", i + 1);
        }
    }
    records
}

/// 0-based species from a `species=<k>` header field (`k` is 1-based).
pub fn species_label(header: &str) -> Option<usize> {
    header
        .split_whitespace()
        .find_map(|f| f.strip_prefix("species="))
        .and_then(|v| v.parse::<usize>().ok())
        .and_then(|k| k.checked_sub(1))
}

/// Contigs from records, uppercased and stripped of symbols outside the
/// alphabet.
pub fn to_contigs(records: &[Record], alphabet: &Alphabet, min_len: usize) -> Result<Vec<Contig>, Failure> {
    records
        .iter()
        .map(|r| {
            let symbols = alphabet.encode_lossy(&r.sequence);
            if symbols.len() < min_len {
                return Err(Failure::input(format!(
                    "record {} has {} usable symbols, fewer than {min_len}",
                    r.id,
                    symbols.len()
                )));
            }
            Ok(Contig { symbols, label: species_label(&r.header) })
        })
        .collect()
}

/// All records of a file joined into one sequence.
pub fn read_genome(path: &Path, alphabet: &Alphabet, label: Option<usize>) -> Result<Contig, Failure> {
    let records = read_records(path)?;
    let symbols: Vec<u8> = records.iter().flat_map(|r| alphabet.encode_lossy(&r.sequence)).collect();
    if symbols.is_empty() {
        return Err(Failure::input(format!("{} has no symbols from alphabet {alphabet}", path.display())));
    }
    Ok(Contig { symbols, label })
}

pub fn write_contigs(path: &Path, contigs: &[Contig], alphabet: &Alphabet) -> Result<(), Failure> {
    let mut out = Vec::new();
    for (i, c) in contigs.iter().enumerate() {
        match c.label {
            Some(k) => writeln!(out, ">contig_{} species={}", i + 1, k + 1),
            None => writeln!(out, ">contig_{}", i + 1),
        }
        .expect("writing to memory");
        let text = alphabet.decode(&c.symbols);
        for chunk in text.as_bytes().chunks(80) {
            out.extend_from_slice(chunk);
            out.push(b'\n');
        }
    }
    fs::write(path, out).map_err(|e| Failure::io(path, e))
}
