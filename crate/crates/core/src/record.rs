use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::time::{month_of, MonthKey, Timestamp};

/// A tweet's labeled position toward the subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stance {
    Favor,
    Against,
    Unrelated,
}

/// Whether a tweet encourages or discourages the subject. Each class forms
/// its own dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Motivation {
    Motivating,
    Demotivating,
}

/// Datasets are keyed by their motivation class.
pub type DatasetId = Motivation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognized {kind} label {value:?}")]
pub struct LabelError {
    pub kind: &'static str,
    pub value: String,
}

impl LabelError {
    fn new(kind: &'static str, value: &str) -> Self {
        LabelError {
            kind,
            value: value.into(),
        }
    }
}

impl Stance {
    pub const fn as_str(self) -> &'static str {
        match self {
            Stance::Favor => "favor",
            Stance::Against => "against",
            Stance::Unrelated => "unrelated",
        }
    }
}

impl FromStr for Stance {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        [Stance::Favor, Stance::Against, Stance::Unrelated]
            .into_iter()
            .find(|v| t.eq_ignore_ascii_case(v.as_str()))
            .ok_or_else(|| LabelError::new("stance", s))
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Motivation {
    pub const fn as_str(self) -> &'static str {
        match self {
            Motivation::Motivating => "motivating",
            Motivation::Demotivating => "demotivating",
        }
    }
}

impl FromStr for Motivation {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        [Motivation::Motivating, Motivation::Demotivating]
            .into_iter()
            .find(|v| t.eq_ignore_ascii_case(v.as_str()))
            .ok_or_else(|| LabelError::new("motivation", s))
    }
}

impl fmt::Display for Motivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One labeled tweet row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub author_id: String,
    pub created_at: Timestamp,
    pub text: String,
    pub topic: String,
    pub stance: Stance,
    pub motivation: Motivation,
    pub location: Option<String>,
}

impl TweetRecord {
    pub fn month(&self) -> MonthKey {
        month_of(self.created_at)
    }
}
