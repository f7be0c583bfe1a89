//! Reading and writing labeled tweet datasets.
//!
//! Two interchange forms carry the same columns: `tweet_id`, `author_id`,
//! `created_at`, `text`, `topic`, `stance`, `motivation` and an optional
//! `location`. Delimited text must have a header row naming them; line
//! records use them as object keys.

use std::collections::HashSet;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDate};
use serde::{Deserialize, Serialize};
use stancescope_core::{Motivation, Stance, Timestamp, TweetRecord};
use thiserror::Error;

pub const COLUMNS: [&str; 8] = [
    "tweet_id",
    "author_id",
    "created_at",
    "text",
    "topic",
    "stance",
    "motivation",
    "location",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    /// Comma-separated values with a header row.
    Csv,
    /// One JSON object per line.
    Jsonl,
}

impl InputFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "csv" => Some(InputFormat::Csv),
            "jsonl" | "ndjson" => Some(InputFormat::Jsonl),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    /// `row` is the 1-based data row for CSV (0 is the header) and the
    /// 1-based line number for JSON lines.
    #[error("row {row}: {reason}")]
    MalformedRow { row: u64, reason: String },
    #[error("duplicate tweet_id {0:?}")]
    DuplicateId(String),
    #[error("input contains no data rows")]
    EmptyInput,
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn malformed(row: u64, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedRow {
        row,
        reason: reason.into(),
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct RawRow {
    tweet_id: String,
    author_id: String,
    created_at: String,
    text: String,
    topic: String,
    stance: String,
    motivation: String,
    #[serde(default)]
    location: Option<String>,
}

/// Parses a whole dataset. Any bad row rejects the file.
pub fn parse_dataset<R: Read>(source: R, format: InputFormat) -> Result<Vec<TweetRecord>, IngestError> {
    let records = match format {
        InputFormat::Csv => parse_csv(source)?,
        InputFormat::Jsonl => parse_jsonl(source)?,
    };
    if records.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    let mut ids = HashSet::with_capacity(records.len());
    if let Some(dup) = records.iter().find(|r| !ids.insert(r.tweet_id.as_str())) {
        return Err(IngestError::DuplicateId(dup.tweet_id.clone()));
    }
    Ok(records)
}

fn parse_csv<R: Read>(source: R) -> Result<Vec<TweetRecord>, IngestError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let headers = reader.headers().map_err(|e| csv_error(0, e))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let mut idx = [0usize; 7];
    for (slot, name) in idx.iter_mut().zip(COLUMNS) {
        *slot = col(name).ok_or_else(|| malformed(0, format!("missing column {name}")))?;
    }
    let location = col("location");

    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i as u64 + 1;
        let row = row.map_err(|e| csv_error(row_no, e))?;
        let field = |j: usize| row.get(j).unwrap_or_default().to_owned();
        let raw = RawRow {
            tweet_id: field(idx[0]),
            author_id: field(idx[1]),
            created_at: field(idx[2]),
            text: field(idx[3]),
            topic: field(idx[4]),
            stance: field(idx[5]),
            motivation: field(idx[6]),
            location: location.map(field),
        };
        out.push(normalize(row_no, raw)?);
    }
    Ok(out)
}

fn csv_error(row: u64, e: csv::Error) -> IngestError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => IngestError::Io(io),
        kind => malformed(row, format!("{:?}", kind)),
    }
}

fn parse_jsonl<R: Read>(source: R) -> Result<Vec<TweetRecord>, IngestError> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row_no = i as u64 + 1;
        let raw: RawRow = serde_json::from_str(&line).map_err(|e| malformed(row_no, e.to_string()))?;
        out.push(normalize(row_no, raw)?);
    }
    Ok(out)
}

fn normalize(row: u64, raw: RawRow) -> Result<TweetRecord, IngestError> {
    for (name, value) in [
        ("tweet_id", &raw.tweet_id),
        ("author_id", &raw.author_id),
        ("topic", &raw.topic),
    ] {
        if value.is_empty() {
            return Err(malformed(row, format!("empty {name}")));
        }
    }
    let created_at = parse_timestamp(&raw.created_at).map_err(|e| malformed(row, e))?;
    let stance: Stance = raw.stance.parse().map_err(|e| malformed(row, format!("{e}")))?;
    let motivation: Motivation = raw
        .motivation
        .parse()
        .map_err(|e| malformed(row, format!("{e}")))?;
    Ok(TweetRecord {
        tweet_id: raw.tweet_id,
        author_id: raw.author_id,
        created_at,
        text: raw.text,
        topic: raw.topic,
        stance,
        motivation,
        location: raw.location.filter(|l| !l.is_empty()),
    })
}

/// Accepts an RFC 3339 timestamp (any offset, converted to UTC; fractional
/// seconds truncated) or a bare `YYYY-MM-DD` date, taken as midnight UTC.
pub fn parse_timestamp(s: &str) -> Result<Timestamp, String> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(Timestamp::from_unix_seconds(dt.timestamp()));
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        let midnight = d.and_hms_opt(0, 0, 0).expect("midnight is valid").and_utc();
        return Ok(Timestamp::from_unix_seconds(midnight.timestamp()));
    }
    Err(format!(
        "invalid created_at {s:?}: expected an RFC 3339 UTC timestamp or a YYYY-MM-DD date"
    ))
}

/// Writes records in `format`; [`parse_dataset`] reads them back unchanged.
pub fn write_dataset<W: Write>(records: &[TweetRecord], format: InputFormat, sink: W) -> io::Result<()> {
    let rows = records.iter().map(|r| RawRow {
        tweet_id: r.tweet_id.clone(),
        author_id: r.author_id.clone(),
        created_at: r.created_at.to_string(),
        text: r.text.clone(),
        topic: r.topic.clone(),
        stance: r.stance.as_str().into(),
        motivation: r.motivation.as_str().into(),
        location: r.location.clone(),
    });
    match format {
        InputFormat::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()
        }
        InputFormat::Jsonl => {
            let mut w = io::BufWriter::new(sink);
            for row in rows {
                serde_json::to_writer(&mut w, &row)?;
                w.write_all(b"\n")?;
            }
            w.flush()
        }
    }
}
