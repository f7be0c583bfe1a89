//! Monthly topic frequency and prominence.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::record::TweetRecord;
use crate::time::MonthKey;

/// Catch-all topic label. Matched case-insensitively.
pub const GENERIC_TOPIC: &str = "generic";

pub fn is_generic(topic: &str) -> bool {
    topic.eq_ignore_ascii_case(GENERIC_TOPIC)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicMonthStat {
    pub topic: String,
    pub month: MonthKey,
    /// Tweets with this topic in this month. Always at least 1.
    pub frequency: u64,
    /// `frequency` over the month's non-generic tweet count.
    pub prominence: f64,
}

/// Drops generic-topic records, keeping order.
pub fn exclude_generic(records: &[TweetRecord]) -> Vec<TweetRecord> {
    records
        .iter()
        .filter(|r| !is_generic(&r.topic))
        .cloned()
        .collect()
}

pub fn compute_topic_stats(records: &[TweetRecord]) -> Vec<TopicMonthStat> {
    topic_stats_from(records.iter().map(|r| (r.topic.as_str(), r.month())))
}

/// Aggregates `(topic, month)` observations into per-month stats.
///
/// Generic observations are dropped before counting, so they affect neither
/// the emitted rows nor the prominence denominator. Rows come out ordered by
/// month, then descending frequency, then topic.
pub fn topic_stats_from<'a, I>(items: I) -> Vec<TopicMonthStat>
where
    I: IntoIterator<Item = (&'a str, MonthKey)>,
{
    let mut counts: BTreeMap<MonthKey, BTreeMap<&'a str, u64>> = BTreeMap::new();
    for (topic, month) in items {
        if is_generic(topic) {
            continue;
        }
        *counts.entry(month).or_default().entry(topic).or_default() += 1;
    }

    let mut out = Vec::new();
    for (month, by_topic) in counts {
        let total: u64 = by_topic.values().sum();
        let start = out.len();
        out.extend(by_topic.into_iter().map(|(topic, frequency)| TopicMonthStat {
            topic: topic.into(),
            month,
            frequency,
            prominence: frequency as f64 / total as f64,
        }));
        // by_topic was already sorted by topic; the sort is stable.
        out[start..].sort_by_key(|s| core::cmp::Reverse(s.frequency));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::{Motivation, Stance};
    use crate::time::{CivilDateTime, Timestamp};
    use alloc::format;
    use alloc::vec;
    use proptest::prelude::*;

    fn rec(i: usize, topic: &str, year: i32, month: u8) -> TweetRecord {
        let created_at = Timestamp::from_civil(CivilDateTime {
            year,
            month,
            day: 1 + (i % 28) as u8,
            hour: 0,
            minute: 0,
            second: 0,
        })
        .unwrap();
        TweetRecord {
            tweet_id: format!("t{i}"),
            author_id: "a".into(),
            created_at,
            text: String::new(),
            topic: topic.into(),
            stance: Stance::Favor,
            motivation: Motivation::Demotivating,
            location: None,
        }
    }

    #[test]
    fn single_topic_month() {
        let rs: Vec<_> = (0..3).map(|i| rec(i, "religion", 2020, 11)).collect();
        let stats = compute_topic_stats(&rs);
        assert_eq!(
            stats,
            vec![TopicMonthStat {
                topic: "religion".into(),
                month: MonthKey::new(2020, 11).unwrap(),
                frequency: 3,
                prominence: 1.0,
            }]
        );
    }

    #[test]
    fn generic_only_month_emits_nothing() {
        let mut rs: Vec<_> = (0..4).map(|i| rec(i, "generic", 2020, 10)).collect();
        rs.push(rec(9, "GENERIC", 2020, 10));
        rs.push(rec(10, "school", 2020, 11));
        let stats = compute_topic_stats(&rs);
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].month, MonthKey::new(2020, 11).unwrap());
    }

    #[test]
    fn share_excludes_generic_from_denominator() {
        let mut rs = Vec::new();
        for i in 0..3 {
            rs.push(rec(i, "politics", 2021, 1));
        }
        for i in 3..10 {
            rs.push(rec(i, "school", 2021, 1));
        }
        for i in 10..15 {
            rs.push(rec(i, "generic", 2021, 1));
        }
        let stats = compute_topic_stats(&rs);
        assert_eq!(stats[0].topic, "school");
        assert_eq!(stats[1].topic, "politics");
        assert_eq!(stats[1].frequency, 3);
        assert!((stats[1].prominence - 0.3).abs() < 1e-12);
    }

    #[test]
    fn ordering_month_then_frequency_then_topic() {
        let rs = vec![
            rec(0, "b", 2021, 2),
            rec(1, "a", 2021, 2),
            rec(2, "c", 2021, 2),
            rec(3, "c", 2021, 2),
            rec(4, "z", 2021, 1),
        ];
        let keys: Vec<_> = compute_topic_stats(&rs)
            .into_iter()
            .map(|s| format!("{} {} {}", s.month, s.frequency, s.topic))
            .collect();
        assert_eq!(keys, ["2021-01 1 z", "2021-02 2 c", "2021-02 1 a", "2021-02 1 b"]);
    }

    #[test]
    fn topics_are_case_sensitive_except_generic() {
        let rs = vec![rec(0, "Vaccine", 2021, 3), rec(1, "vaccine", 2021, 3)];
        assert_eq!(compute_topic_stats(&rs).len(), 2);
    }

    #[test]
    fn exclude_generic_examples() {
        let rs = vec![rec(0, "generic", 2021, 1), rec(1, "religion", 2021, 1)];
        let kept = exclude_generic(&rs);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].topic, "religion");

        let none = vec![rec(0, "a", 2021, 1), rec(1, "b", 2021, 1)];
        assert_eq!(exclude_generic(&none), none);

        let all = vec![rec(0, "generic", 2021, 1), rec(1, "Generic", 2021, 2)];
        assert!(exclude_generic(&all).is_empty());
    }

    fn records_strategy() -> impl Strategy<Value = Vec<TweetRecord>> {
        let topics = ["generic", "religion", "politics", "school", "Generic"];
        proptest::collection::vec((0usize..5, 1u8..4), 0..200).prop_map(move |rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (t, m))| rec(i, topics[t], 2021, m))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn conservation(rs in records_strategy()) {
            let stats = compute_topic_stats(&rs);
            let non_generic = rs.iter().filter(|r| !is_generic(&r.topic)).count() as u64;
            prop_assert_eq!(stats.iter().map(|s| s.frequency).sum::<u64>(), non_generic);
            prop_assert!(stats.iter().all(|s| !is_generic(&s.topic) && s.frequency >= 1));

            let mut months: Vec<MonthKey> = stats.iter().map(|s| s.month).collect();
            months.dedup();
            for m in months {
                let in_month = rs.iter().filter(|r| r.month() == m && !is_generic(&r.topic)).count() as u64;
                let freq: u64 = stats.iter().filter(|s| s.month == m).map(|s| s.frequency).sum();
                let share: f64 = stats.iter().filter(|s| s.month == m).map(|s| s.prominence).sum();
                prop_assert_eq!(freq, in_month);
                prop_assert!((share - 1.0).abs() <= 1e-9);
            }
        }

        #[test]
        fn stats_match_nested_loop_count(rs in records_strategy()) {
            for s in compute_topic_stats(&rs) {
                let mut n = 0u64;
                for r in &rs {
                    if r.topic == s.topic && r.month() == s.month {
                        n += 1;
                    }
                }
                prop_assert_eq!(s.frequency, n);
            }
        }
    }
}
