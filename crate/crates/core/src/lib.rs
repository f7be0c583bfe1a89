//! Stance trajectories and monthly topic statistics for labeled tweet datasets.
//!
//! The crate is `no_std` and needs only `alloc`. Parsing, file formats and
//! serving live in the `stancescope` crate.
//!
//! The pipeline for one dataset is:
//!
//! 1. [`scoring::filter_min_activity`] keeps authors with enough tweets,
//! 2. [`scoring::compute_cumulative`] maps stances to +1/-1/0 and sums them
//!    per author over time,
//! 3. [`topics::compute_topic_stats`] counts non-generic topics per month,
//!
//! all composed by [`snapshot::build_snapshot`].
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod record;
pub mod scoring;
pub mod snapshot;
pub mod time;
pub mod topics;

pub use record::{DatasetId, LabelError, Motivation, Stance, TweetRecord};
pub use scoring::{
    compute_cumulative, filter_min_activity, find_stance_changers, map_stance, StancePoint, StanceScore,
    DEFAULT_MIN_COUNT,
};
pub use snapshot::{build_snapshot, BuildError, DatasetSnapshot, InvariantViolation, TweetDetail};
pub use time::{month_of, CivilDateTime, MonthKey, ParseMonthError, Timestamp};
pub use topics::{compute_topic_stats, exclude_generic, is_generic, TopicMonthStat, GENERIC_TOPIC};
