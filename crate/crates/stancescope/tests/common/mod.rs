#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stancescope::core::{Motivation, Stance, Timestamp, TweetRecord};

pub const TOPICS: [&str; 6] = [
    "generic",
    "religion",
    "politics",
    "school",
    "statistics",
    "Generic",
];

// 2020-09-01T00:00:00Z
pub const START: i64 = 1_598_918_400;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random labeled records. Timestamps sit on a coarse four-hour grid over
/// about five months so equal instants are common; tweet ids are shuffled
/// relative to time so the id tie-break matters.
pub fn random_records(
    rng: &mut impl Rng,
    tweets: usize,
    authors: usize,
    motivation: Motivation,
) -> Vec<TweetRecord> {
    let stances = [Stance::Favor, Stance::Against, Stance::Unrelated];
    let mut ids: Vec<usize> = (0..tweets).collect();
    for i in (1..ids.len()).rev() {
        ids.swap(i, rng.random_range(0..=i));
    }
    (0..tweets)
        .map(|i| {
            let slot: i64 = rng.random_range(0..900);
            TweetRecord {
                tweet_id: format!("tw{:05}", ids[i]),
                author_id: format!("user{}", rng.random_range(0..authors.max(1))),
                created_at: Timestamp::from_unix_seconds(START + slot * 4 * 3600),
                text: format!("tweet number {i}, with \"quotes\" and a comma"),
                topic: (*TOPICS.choose(rng).unwrap()).to_string(),
                stance: *stances.choose(rng).unwrap(),
                motivation,
                location: rng
                    .random_bool(0.7)
                    .then(|| format!("City {}", rng.random_range(0..5))),
            }
        })
        .collect()
}

/// `per_author[i]` tweets for author `a{i}`, all favor, spread over months.
pub fn fixed_counts(per_author: &[usize], motivation: Motivation) -> Vec<TweetRecord> {
    let mut out = Vec::new();
    for (a, &n) in per_author.iter().enumerate() {
        for k in 0..n {
            out.push(TweetRecord {
                tweet_id: format!("a{a}-{k:03}"),
                author_id: format!("a{a}"),
                created_at: Timestamp::from_unix_seconds(START + (k as i64) * 5 * 86_400 + a as i64),
                text: format!("text {a}/{k}"),
                topic: TOPICS[(a + k) % TOPICS.len()].to_string(),
                stance: if k % 3 == 2 {
                    Stance::Against
                } else {
                    Stance::Favor
                },
                motivation,
                location: None,
            });
        }
    }
    out
}
