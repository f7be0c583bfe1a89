//! Canonical JSON form of a [`DatasetSnapshot`].
//!
//! Exports are byte-stable: keys appear in a fixed order, integers are
//! written as integers and prominence always has six decimals (ties round
//! to even). Imports re-check every snapshot invariant, recomputing
//! cumulative scores and topic stats from the points.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Read, Write};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use stancescope_core::{
    DatasetId, DatasetSnapshot, InvariantViolation, MonthKey, StancePoint, StanceScore, Timestamp,
    TopicMonthStat, TweetDetail,
};
use thiserror::Error;

use crate::ingest::parse_timestamp;

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("schema violation at {path}: {reason}")]
    SchemaViolation { path: String, reason: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(#[from] InvariantViolation),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Month in `YYYY-MM` text form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WireMonth(pub MonthKey);

impl Serialize for WireMonth {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for WireMonth {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map(WireMonth)
            .map_err(|_| de::Error::custom(format!("invalid month {s:?}, expected YYYY-MM")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireTimestamp(pub Timestamp);

impl Serialize for WireTimestamp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for WireTimestamp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_timestamp(&s).map(WireTimestamp).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireDataset(pub DatasetId);

impl Serialize for WireDataset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.as_str())
    }
}

impl<'de> Deserialize<'de> for WireDataset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "motivating" => Ok(WireDataset(DatasetId::Motivating)),
            "demotivating" => Ok(WireDataset(DatasetId::Demotivating)),
            _ => Err(de::Error::custom(format!("unknown dataset_id {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireScore(pub StanceScore);

impl Serialize for WireScore {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i64(self.0.value())
    }
}

impl<'de> Deserialize<'de> for WireScore {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        StanceScore::new(v)
            .map(WireScore)
            .ok_or_else(|| de::Error::custom(format!("score {v} is not -1, 0 or 1")))
    }
}

/// `numerator / denominator` rounded half-to-even at six decimals, computed
/// on the exact ratio.
pub fn fixed6(numerator: u64, denominator: u64) -> String {
    assert!(denominator > 0, "zero denominator");
    const SCALE: u128 = 1_000_000;
    let scaled = u128::from(numerator) * SCALE;
    let den = u128::from(denominator);
    let (mut q, r) = (scaled / den, scaled % den);
    if 2 * r > den || (2 * r == den && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:06}", q / SCALE, q % SCALE)
}

/// A prominence value as it appears on the wire.
#[derive(Debug, Clone)]
pub struct Prominence(Box<RawValue>);

impl Prominence {
    pub fn from_ratio(frequency: u64, month_total: u64) -> Self {
        Prominence(
            RawValue::from_string(fixed6(frequency, month_total)).expect("decimal literal is valid JSON"),
        )
    }

    pub fn as_f64(&self) -> Option<f64> {
        self.0.get().parse().ok()
    }
}

impl fmt::Display for Prominence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.get())
    }
}

impl Serialize for Prominence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Prominence {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Box::<RawValue>::deserialize(d)?;
        match raw.get().parse::<f64>() {
            Ok(v) if (0.0..=1.0).contains(&v) => Ok(Prominence(raw)),
            _ => Err(de::Error::custom(format!(
                "prominence {} is not a number in [0, 1]",
                raw.get()
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub tweet_id: String,
    pub author_id: String,
    pub created_at: WireTimestamp,
    pub month: WireMonth,
    pub score: WireScore,
    pub cumulative_score: i64,
    pub topic: String,
}

impl From<&StancePoint> for PointDoc {
    fn from(p: &StancePoint) -> Self {
        PointDoc {
            tweet_id: p.tweet_id.clone(),
            author_id: p.author_id.clone(),
            created_at: WireTimestamp(p.created_at),
            month: WireMonth(p.month),
            score: WireScore(p.score),
            cumulative_score: p.cumulative_score,
            topic: p.topic.clone(),
        }
    }
}

impl From<PointDoc> for StancePoint {
    fn from(p: PointDoc) -> Self {
        StancePoint {
            tweet_id: p.tweet_id,
            author_id: p.author_id,
            created_at: p.created_at.0,
            month: p.month.0,
            score: p.score.0,
            cumulative_score: p.cumulative_score,
            topic: p.topic,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatDoc {
    pub topic: String,
    pub month: WireMonth,
    pub frequency: u64,
    pub prominence: Prominence,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetailDoc {
    pub text: String,
    pub location: Option<String>,
    pub topic: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotDoc {
    pub dataset_id: WireDataset,
    pub months: Vec<WireMonth>,
    pub authors: Vec<String>,
    pub points: Vec<PointDoc>,
    pub topic_stats: Vec<StatDoc>,
    pub tweet_index: BTreeMap<String, DetailDoc>,
}

/// Stats rendered with prominence taken from the exact per-month ratio.
pub fn stat_docs<'a, I>(stats: I) -> Vec<StatDoc>
where
    I: IntoIterator<Item = &'a TopicMonthStat>,
    I::IntoIter: Clone,
{
    let stats = stats.into_iter();
    let mut totals: BTreeMap<MonthKey, u64> = BTreeMap::new();
    for s in stats.clone() {
        *totals.entry(s.month).or_default() += s.frequency;
    }
    stats
        .map(|s| StatDoc {
            topic: s.topic.clone(),
            month: WireMonth(s.month),
            frequency: s.frequency,
            prominence: Prominence::from_ratio(s.frequency, totals[&s.month]),
        })
        .collect()
}

impl From<&DatasetSnapshot> for SnapshotDoc {
    fn from(s: &DatasetSnapshot) -> Self {
        SnapshotDoc {
            dataset_id: WireDataset(s.dataset_id),
            months: s.months.iter().copied().map(WireMonth).collect(),
            authors: s.authors.clone(),
            points: s.points.iter().map(PointDoc::from).collect(),
            topic_stats: stat_docs(&s.topic_stats),
            tweet_index: s
                .tweet_index
                .iter()
                .map(|(id, d)| {
                    let doc = DetailDoc {
                        text: d.text.clone(),
                        location: d.location.clone(),
                        topic: d.topic.clone(),
                    };
                    (id.clone(), doc)
                })
                .collect(),
        }
    }
}

impl TryFrom<SnapshotDoc> for DatasetSnapshot {
    type Error = ImportError;

    fn try_from(doc: SnapshotDoc) -> Result<Self, Self::Error> {
        let mut snapshot = DatasetSnapshot {
            dataset_id: doc.dataset_id.0,
            months: doc.months.into_iter().map(|m| m.0).collect(),
            authors: doc.authors,
            points: doc.points.into_iter().map(StancePoint::from).collect(),
            topic_stats: Vec::new(),
            tweet_index: doc
                .tweet_index
                .into_iter()
                .map(|(id, d)| {
                    let detail = TweetDetail {
                        text: d.text,
                        location: d.location,
                        topic: d.topic,
                    };
                    (id, detail)
                })
                .collect(),
        };

        // Prominence is stored rounded; compare it by value against the
        // canonical rendering, then keep the exact recomputed ratio.
        let derived = snapshot.derived_topic_stats();
        let expected = stat_docs(&derived);
        let matches = doc.topic_stats.len() == expected.len()
            && doc.topic_stats.iter().zip(&expected).all(|(got, want)| {
                got.topic == want.topic
                    && got.month == want.month
                    && got.frequency == want.frequency
                    && got.prominence.as_f64() == want.prominence.as_f64()
            });
        if !matches {
            return Err(InvariantViolation::TopicStats.into());
        }
        snapshot.topic_stats = derived;
        snapshot.validate()?;
        Ok(snapshot)
    }
}

/// Canonical document text, ending in a newline.
pub fn to_canonical_string(snapshot: &DatasetSnapshot) -> String {
    let mut s = serde_json::to_string_pretty(&SnapshotDoc::from(snapshot)).expect("snapshot serializes");
    s.push('\n');
    s
}

pub fn export_snapshot<W: Write>(snapshot: &DatasetSnapshot, mut destination: W) -> io::Result<()> {
    destination.write_all(to_canonical_string(snapshot).as_bytes())?;
    destination.flush()
}

pub fn import_snapshot<R: Read>(source: R) -> Result<DatasetSnapshot, ImportError> {
    let mut de = serde_json::Deserializer::from_reader(source);
    let doc: SnapshotDoc = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_io() {
            return ImportError::Io(inner.into());
        }
        ImportError::SchemaViolation {
            path,
            reason: inner.to_string(),
        }
    })?;
    de.end().map_err(|e| ImportError::SchemaViolation {
        path: ".".into(),
        reason: e.to_string(),
    })?;
    DatasetSnapshot::try_from(doc)
}
