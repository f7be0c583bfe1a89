//! Minimum-activity filtering, stance scores and per-author cumulative
//! stance trajectories.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::record::{Stance, TweetRecord};
use crate::time::{MonthKey, Timestamp};

/// Minimum number of tweets an author needs in a dataset to be kept.
pub const DEFAULT_MIN_COUNT: usize = 20;

/// A single tweet's stance contribution: +1, 0 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StanceScore(i8);

impl StanceScore {
    pub const FAVOR: StanceScore = StanceScore(1);
    pub const UNRELATED: StanceScore = StanceScore(0);
    pub const AGAINST: StanceScore = StanceScore(-1);

    /// `None` unless `value` is -1, 0 or +1.
    pub fn new(value: i64) -> Option<Self> {
        matches!(value, -1..=1).then_some(StanceScore(value as i8))
    }

    pub const fn value(self) -> i64 {
        self.0 as i64
    }
}

pub fn map_stance(stance: Stance) -> StanceScore {
    match stance {
        Stance::Favor => StanceScore::FAVOR,
        Stance::Against => StanceScore::AGAINST,
        Stance::Unrelated => StanceScore::UNRELATED,
    }
}

/// One tweet on the timeline, carrying its author's running stance total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StancePoint {
    pub tweet_id: String,
    pub author_id: String,
    pub created_at: Timestamp,
    pub month: MonthKey,
    pub score: StanceScore,
    /// Sum of the author's scores up to and including this tweet.
    pub cumulative_score: i64,
    pub topic: String,
}

/// Global timeline order: by instant, ties broken by tweet id.
pub fn timeline_order(a_time: Timestamp, a_id: &str, b_time: Timestamp, b_id: &str) -> Ordering {
    a_time.cmp(&b_time).then_with(|| a_id.cmp(b_id))
}

/// Keeps the records of authors with at least `min_count` records, in input order.
pub fn filter_min_activity(records: &[TweetRecord], min_count: usize) -> Vec<TweetRecord> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for r in records {
        *counts.entry(r.author_id.as_str()).or_default() += 1;
    }
    records
        .iter()
        .filter(|r| counts[r.author_id.as_str()] >= min_count)
        .cloned()
        .collect()
}

/// Builds one [`StancePoint`] per record, sorted by (created_at, tweet_id).
///
/// Each author's running sum is accumulated in that same order, so a
/// point's `cumulative_score` covers exactly the author's earlier-or-tied
/// tweets that sort before it.
pub fn compute_cumulative(records: &[TweetRecord]) -> Vec<StancePoint> {
    let mut order: Vec<&TweetRecord> = records.iter().collect();
    order.sort_by(|a, b| timeline_order(a.created_at, &a.tweet_id, b.created_at, &b.tweet_id));

    let mut running: BTreeMap<&str, i64> = BTreeMap::new();
    order
        .into_iter()
        .map(|r| {
            let score = map_stance(r.stance);
            let total = running.entry(r.author_id.as_str()).or_insert(0);
            *total += score.value();
            StancePoint {
                tweet_id: r.tweet_id.clone(),
                author_id: r.author_id.clone(),
                created_at: r.created_at,
                month: r.month(),
                score,
                cumulative_score: *total,
                topic: r.topic.clone(),
            }
        })
        .collect()
}

/// Authors whose timeline holds both a +1 and a -1 score. Zero scores are
/// ignored, so favor → unrelated → against counts as a change.
pub fn find_stance_changers(points: &[StancePoint]) -> BTreeSet<String> {
    let mut first_sign: BTreeMap<&str, i64> = BTreeMap::new();
    let mut changers = BTreeSet::new();
    for p in points {
        let s = p.score.value();
        if s == 0 {
            continue;
        }
        let first = *first_sign.entry(p.author_id.as_str()).or_insert(s);
        if first != s {
            changers.insert(p.author_id.clone());
        }
    }
    changers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::Motivation;
    use alloc::format;
    use proptest::prelude::*;

    fn rec(id: &str, author: &str, secs: i64, stance: Stance) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            author_id: author.into(),
            created_at: Timestamp::from_unix_seconds(secs),
            text: String::new(),
            topic: "t".into(),
            stance,
            motivation: Motivation::Motivating,
            location: None,
        }
    }

    fn point(author: &str, score: i64) -> StancePoint {
        StancePoint {
            tweet_id: String::new(),
            author_id: author.into(),
            created_at: Timestamp::from_unix_seconds(0),
            month: MonthKey::new(1970, 1).unwrap(),
            score: StanceScore::new(score).unwrap(),
            cumulative_score: 0,
            topic: String::new(),
        }
    }

    fn trajectory(points: &[StancePoint]) -> Vec<i64> {
        points.iter().map(|p| p.cumulative_score).collect()
    }

    #[test]
    fn stance_mapping() {
        assert_eq!(map_stance(Stance::Favor).value(), 1);
        assert_eq!(map_stance(Stance::Against).value(), -1);
        assert_eq!(map_stance(Stance::Unrelated).value(), 0);
        assert!(StanceScore::new(2).is_none());
    }

    #[test]
    fn filter_boundary_is_inclusive() {
        let mut rs = Vec::new();
        for i in 0..20 {
            rs.push(rec(&format!("a{i}"), "a", i, Stance::Favor));
        }
        for i in 0..19 {
            rs.push(rec(&format!("b{i}"), "b", i, Stance::Favor));
        }
        let kept = filter_min_activity(&rs, DEFAULT_MIN_COUNT);
        assert_eq!(kept.len(), 20);
        assert!(kept.iter().all(|r| r.author_id == "a"));
        assert!(filter_min_activity(&[], DEFAULT_MIN_COUNT).is_empty());
    }

    #[test]
    fn cumulative_examples() {
        let one = compute_cumulative(&[rec("1", "a", 0, Stance::Favor)]);
        assert_eq!(trajectory(&one), [1]);

        let ffa = compute_cumulative(&[
            rec("1", "a", 0, Stance::Favor),
            rec("2", "a", 10, Stance::Favor),
            rec("3", "a", 20, Stance::Against),
        ]);
        assert_eq!(trajectory(&ffa), [1, 2, 1]);

        let uu = compute_cumulative(&[
            rec("1", "a", 0, Stance::Unrelated),
            rec("2", "a", 10, Stance::Unrelated),
        ]);
        assert_eq!(trajectory(&uu), [0, 0]);
    }

    #[test]
    fn ties_break_on_tweet_id() {
        let pts = compute_cumulative(&[rec("b", "x", 5, Stance::Against), rec("a", "x", 5, Stance::Favor)]);
        assert_eq!(pts[0].tweet_id, "a");
        assert_eq!(trajectory(&pts), [1, 0]);
    }

    #[test]
    fn interleaved_authors_keep_separate_sums() {
        let pts = compute_cumulative(&[
            rec("3", "a", 30, Stance::Favor),
            rec("1", "a", 10, Stance::Favor),
            rec("2", "b", 20, Stance::Against),
            rec("4", "b", 40, Stance::Against),
        ]);
        let ids: Vec<_> = pts.iter().map(|p| p.tweet_id.as_str()).collect();
        assert_eq!(ids, ["1", "2", "3", "4"]);
        assert_eq!(trajectory(&pts), [1, -1, 2, -2]);
    }

    #[test]
    fn changer_examples() {
        let flagged = find_stance_changers(&[point("a", 1), point("a", 0), point("a", -1)]);
        assert_eq!(flagged.into_iter().collect::<Vec<_>>(), ["a"]);
        assert!(find_stance_changers(&[point("a", 1), point("a", 1), point("a", 0)]).is_empty());
        assert!(find_stance_changers(&[]).is_empty());
        // Opposite signs from different authors are not a change.
        assert!(find_stance_changers(&[point("a", 1), point("b", -1)]).is_empty());
    }

    fn stance_strategy() -> impl Strategy<Value = Stance> {
        prop_oneof![
            Just(Stance::Favor),
            Just(Stance::Against),
            Just(Stance::Unrelated)
        ]
    }

    fn records_strategy() -> impl Strategy<Value = Vec<TweetRecord>> {
        proptest::collection::vec((0u8..6, 0i64..40, stance_strategy()), 0..120).prop_map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (a, t, s))| rec(&format!("t{i:03}"), &format!("u{a}"), t, s))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn filter_is_idempotent_and_guarantees_count(rs in records_strategy(), min in 1usize..25) {
            let once = filter_min_activity(&rs, min);
            prop_assert_eq!(&filter_min_activity(&once, min), &once);
            for r in &once {
                prop_assert!(once.iter().filter(|o| o.author_id == r.author_id).count() >= min);
            }
        }

        #[test]
        fn cumulative_bounds(rs in records_strategy()) {
            let pts = compute_cumulative(&rs);
            prop_assert_eq!(pts.len(), rs.len());
            let mut seen: BTreeMap<&str, i64> = BTreeMap::new();
            for p in &pts {
                let n = seen.entry(p.author_id.as_str()).or_insert(0);
                *n += 1;
                prop_assert!(p.cumulative_score.abs() <= *n);
                if *n == 1 {
                    prop_assert_eq!(p.cumulative_score, p.score.value());
                }
            }
        }

        #[test]
        fn unanimous_authors_are_monotone(n in 1usize..30, s in stance_strategy()) {
            let rs: Vec<_> = (0..n).map(|i| rec(&format!("{i:02}"), "a", i as i64, s)).collect();
            let traj = trajectory(&compute_cumulative(&rs));
            for w in traj.windows(2) {
                match s {
                    Stance::Favor => prop_assert!(w[1] > w[0]),
                    Stance::Against => prop_assert!(w[1] < w[0]),
                    Stance::Unrelated => prop_assert!(w[0] == 0 && w[1] == 0),
                }
            }
            prop_assert!(find_stance_changers(&compute_cumulative(&rs)).is_empty());
        }
    }
}
