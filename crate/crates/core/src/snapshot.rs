//! The derived artifact served for one dataset.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::record::{DatasetId, Motivation, TweetRecord};
use crate::scoring::{
    compute_cumulative, filter_min_activity, find_stance_changers, timeline_order, StancePoint,
};
use crate::time::{month_of, MonthKey};
use crate::topics::{compute_topic_stats, exclude_generic, topic_stats_from, TopicMonthStat};

/// Shown in place of a missing location.
pub const UNKNOWN_LOCATION: &str = "unknown";

/// Per-tweet fields used by the detail panel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetDetail {
    pub text: String,
    pub location: Option<String>,
    pub topic: String,
}

impl TweetDetail {
    pub fn location_label(&self) -> &str {
        self.location.as_deref().unwrap_or(UNKNOWN_LOCATION)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSnapshot {
    pub dataset_id: DatasetId,
    /// Ordered by (created_at, tweet_id).
    pub points: Vec<StancePoint>,
    /// Ordered by (month, descending frequency, topic); generic excluded.
    pub topic_stats: Vec<TopicMonthStat>,
    /// Authors in order of first appearance on the timeline.
    pub authors: Vec<String>,
    /// Every month from the first to the last point, inclusive.
    pub months: Vec<MonthKey>,
    pub tweet_index: BTreeMap<String, TweetDetail>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("tweet {tweet_id} is {found}, but the dataset is {expected}")]
    MixedMotivation {
        tweet_id: String,
        expected: Motivation,
        found: Motivation,
    },
    #[error("no author has at least {min_count} tweets")]
    EmptyAfterFilter { min_count: usize },
}

/// A broken snapshot invariant, as detected by [`DatasetSnapshot::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantViolation {
    #[error("snapshot has no points")]
    Empty,
    #[error("points out of timeline order at index {index}")]
    PointOrder { index: usize },
    #[error("duplicate tweet id {0}")]
    DuplicateTweet(String),
    #[error("point {tweet_id} has month {stored}, but its timestamp falls in {actual}")]
    PointMonth {
        tweet_id: String,
        stored: MonthKey,
        actual: MonthKey,
    },
    #[error("point {tweet_id} has cumulative score {stored}, expected {expected}")]
    CumulativeMismatch {
        tweet_id: String,
        stored: i64,
        expected: i64,
    },
    #[error("authors list does not match first appearance order of points")]
    Authors,
    #[error("months list is not the contiguous range covering all points")]
    Months,
    #[error("tweet index does not cover exactly the points")]
    TweetIndexKeys,
    #[error("tweet index topic for {0} differs from its point")]
    TweetIndexTopic(String),
    #[error("topic stats do not match the points")]
    TopicStats,
}

/// Filters, scores and aggregates one dataset's records.
///
/// Stance points keep generic-topic tweets; only the topic stats drop them.
pub fn build_snapshot(
    records: &[TweetRecord],
    dataset_id: DatasetId,
    min_count: usize,
) -> Result<DatasetSnapshot, BuildError> {
    if let Some(r) = records.iter().find(|r| r.motivation != dataset_id) {
        return Err(BuildError::MixedMotivation {
            tweet_id: r.tweet_id.clone(),
            expected: dataset_id,
            found: r.motivation,
        });
    }
    let kept = filter_min_activity(records, min_count);
    if kept.is_empty() {
        return Err(BuildError::EmptyAfterFilter { min_count });
    }

    let points = compute_cumulative(&kept);
    let topic_stats = compute_topic_stats(&exclude_generic(&kept));
    let tweet_index = kept
        .iter()
        .map(|r| {
            let detail = TweetDetail {
                text: r.text.clone(),
                location: r.location.clone(),
                topic: r.topic.clone(),
            };
            (r.tweet_id.clone(), detail)
        })
        .collect();

    Ok(DatasetSnapshot {
        dataset_id,
        authors: first_appearance(&points),
        months: month_span(&points),
        points,
        topic_stats,
        tweet_index,
    })
}

fn first_appearance(points: &[StancePoint]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    points
        .iter()
        .filter(|p| seen.insert(p.author_id.as_str()))
        .map(|p| p.author_id.clone())
        .collect()
}

fn month_span(points: &[StancePoint]) -> Vec<MonthKey> {
    let first = points.iter().map(|p| p.month).min();
    let last = points.iter().map(|p| p.month).max();
    match (first, last) {
        (Some(a), Some(b)) => a.range_inclusive(b).collect(),
        _ => Vec::new(),
    }
}

impl DatasetSnapshot {
    /// Re-derives everything derivable from the points and checks it
    /// against the stored fields.
    pub fn validate(&self) -> Result<(), InvariantViolation> {
        if self.points.is_empty() {
            return Err(InvariantViolation::Empty);
        }
        for (i, w) in self.points.windows(2).enumerate() {
            let ord = timeline_order(w[0].created_at, &w[0].tweet_id, w[1].created_at, &w[1].tweet_id);
            match ord {
                Ordering::Less => {}
                Ordering::Equal => return Err(InvariantViolation::DuplicateTweet(w[1].tweet_id.clone())),
                Ordering::Greater => return Err(InvariantViolation::PointOrder { index: i + 1 }),
            }
        }

        let mut running: BTreeMap<&str, i64> = BTreeMap::new();
        let mut ids = BTreeSet::new();
        for p in &self.points {
            if !ids.insert(p.tweet_id.as_str()) {
                return Err(InvariantViolation::DuplicateTweet(p.tweet_id.clone()));
            }
            let actual = month_of(p.created_at);
            if p.month != actual {
                return Err(InvariantViolation::PointMonth {
                    tweet_id: p.tweet_id.clone(),
                    stored: p.month,
                    actual,
                });
            }
            let total = running.entry(p.author_id.as_str()).or_insert(0);
            *total += p.score.value();
            if p.cumulative_score != *total {
                return Err(InvariantViolation::CumulativeMismatch {
                    tweet_id: p.tweet_id.clone(),
                    stored: p.cumulative_score,
                    expected: *total,
                });
            }
        }

        if self.authors != first_appearance(&self.points) {
            return Err(InvariantViolation::Authors);
        }
        if self.months != month_span(&self.points) {
            return Err(InvariantViolation::Months);
        }
        if self.tweet_index.len() != ids.len() || !self.tweet_index.keys().all(|k| ids.contains(k.as_str())) {
            return Err(InvariantViolation::TweetIndexKeys);
        }
        if let Some(p) = self
            .points
            .iter()
            .find(|p| self.tweet_index[&p.tweet_id].topic != p.topic)
        {
            return Err(InvariantViolation::TweetIndexTopic(p.tweet_id.clone()));
        }
        if self.topic_stats != self.derived_topic_stats() {
            return Err(InvariantViolation::TopicStats);
        }
        Ok(())
    }

    /// Topic stats recomputed from the points.
    pub fn derived_topic_stats(&self) -> Vec<TopicMonthStat> {
        topic_stats_from(self.points.iter().map(|p| (p.topic.as_str(), p.month)))
    }

    /// Points with month at or before `month`, in timeline order.
    pub fn points_upto(&self, month: MonthKey) -> impl Iterator<Item = &StancePoint> + Clone {
        self.points.iter().filter(move |p| p.month <= month)
    }

    pub fn points_by_author<'a>(&'a self, author_id: &'a str) -> impl Iterator<Item = &'a StancePoint> {
        self.points.iter().filter(move |p| p.author_id == author_id)
    }

    pub fn stats_for_month(&self, month: MonthKey) -> impl Iterator<Item = &TopicMonthStat> + Clone {
        self.topic_stats.iter().filter(move |s| s.month == month)
    }

    /// Stance changers in author (first appearance) order.
    pub fn stance_changers(&self) -> Vec<String> {
        let set = find_stance_changers(&self.points);
        self.authors
            .iter()
            .filter(|a| set.contains(*a))
            .cloned()
            .collect()
    }

    pub fn has_author(&self, author_id: &str) -> bool {
        self.authors.iter().any(|a| a == author_id)
    }
}
