use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::scalar::Scalar;

/// Default decision threshold on the 0-100 sending-decision score.
pub const DEFAULT_THRESHOLD: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Send,
    NotSend,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Send => "send",
            Label::NotSend => "not_send",
        }
    }

    pub fn is_send(self) -> bool {
        self == Label::Send
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "send" => Ok(Label::Send),
            "not_send" | "notsend" | "not-send" | "drop" => Ok(Label::NotSend),
            other => Err(format!("expected `send` or `not_send`, got `{other}`")),
        }
    }
}

/// Label assigned when the score equals the threshold exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
#[derive(Default)]
pub enum TiePolicy {
    #[default]
    Send,
    NotSend,
}


impl FromStr for TiePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<Label>().map(|l| match l {
            Label::Send => TiePolicy::Send,
            Label::NotSend => TiePolicy::NotSend,
        })
    }
}

/// Low scores mean "send": `Send` iff `score < threshold`, with ties
/// resolved by `tie`.
pub fn decide<F: Scalar>(score: F, threshold: F, tie: TiePolicy) -> Label {
    if score < threshold || (score == threshold && tie == TiePolicy::Send) {
        Label::Send
    } else {
        Label::NotSend
    }
}
