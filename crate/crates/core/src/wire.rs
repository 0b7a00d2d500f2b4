//! Line-oriented wire format for running a session over a byte stream.
//!
//! Every message is one JSON object on its own line with a mandatory `type`
//! tag. Elements travel as strings in the platform's canonical encoding
//! (`"[1, -2]"` for braids, `"7"` for table elements).
//!
//! ```text
//! {"type":"hello","version":"1","platform":"laver:8","rounds":20,"mode":"ld"}
//! {"type":"commit","x":"7","x_prime":"7"}
//! {"type":"challenge","c":1}
//! {"type":"response","y":"5"}
//! {"type":"result","accept":true}
//! ```
//!
//! The prover opens with `hello`, then each round is `commit`, `challenge`,
//! `response`. The verifier closes the session with a single `result`.

use std::io::{BufRead, Read};

use serde::{Deserialize, Serialize};

use crate::protocol::LawMode;

pub const PROTOCOL_VERSION: &str = "1";
/// Default upper bound on one encoded line, newline excluded.
pub const MAX_LINE_BYTES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum WireMessage {
    Hello {
        version: String,
        platform: String,
        rounds: u32,
        mode: LawMode,
    },
    Commit {
        x: String,
        x_prime: String,
    },
    Challenge {
        c: u8,
    },
    Response {
        y: String,
    },
    Result {
        accept: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        reason: Option<String>,
    },
}

impl WireMessage {
    pub fn kind(&self) -> &'static str {
        match self {
            WireMessage::Hello { .. } => "hello",
            WireMessage::Commit { .. } => "commit",
            WireMessage::Challenge { .. } => "challenge",
            WireMessage::Response { .. } => "response",
            WireMessage::Result { .. } => "result",
        }
    }

    pub fn hello(platform: impl Into<String>, rounds: u32, mode: LawMode) -> WireMessage {
        WireMessage::Hello {
            version: PROTOCOL_VERSION.into(),
            platform: platform.into(),
            rounds,
            mode,
        }
    }

    /// One line of text, without the trailing newline.
    pub fn encode(&self) -> Result<String, WireError> {
        if let WireMessage::Challenge { c } = self {
            if *c > 1 {
                return Err(WireError::BadChallenge { line: 0, c: *c });
            }
        }
        serde_json::to_string(self).map_err(|e| WireError::Encode(e.to_string()))
    }

    /// Parses one line. `line_no` only labels the error.
    pub fn decode(text: &str, line_no: usize) -> Result<WireMessage, WireError> {
        let msg: WireMessage = serde_json::from_str(text).map_err(|e| WireError::Malformed {
            line: line_no,
            reason: e.to_string(),
        })?;
        if let WireMessage::Challenge { c } = msg {
            if c > 1 {
                return Err(WireError::BadChallenge { line: line_no, c });
            }
        }
        Ok(msg)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum WireError {
    #[error("line {line}: malformed message: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: challenge must be 0 or 1, got {c}")]
    BadChallenge { line: usize, c: u8 },
    #[error("line {line}: longer than {limit} bytes")]
    TooLong { line: usize, limit: usize },
    #[error("line {line}: stream ended before a complete message")]
    Truncated { line: usize },
    #[error("line {line}: expected {expected}, got {got}")]
    Unexpected {
        line: usize,
        expected: &'static str,
        got: &'static str,
    },
    #[error("cannot encode message: {0}")]
    Encode(String),
    #[error("line {line}: {source}")]
    Io {
        line: usize,
        #[source]
        source: std::io::Error,
    },
}

/// Reads newline-delimited messages, counting lines and enforcing the size cap.
pub struct LineReader<R> {
    inner: R,
    line: usize,
    limit: usize,
    buf: Vec<u8>,
}

impl<R: BufRead> LineReader<R> {
    pub fn new(inner: R) -> Self {
        LineReader::with_limit(inner, MAX_LINE_BYTES)
    }

    pub fn with_limit(inner: R, limit: usize) -> Self {
        LineReader {
            inner,
            line: 0,
            limit,
            buf: Vec::new(),
        }
    }

    /// Number of the last line handed out (1-based).
    pub fn line(&self) -> usize {
        self.line
    }

    /// Next message. A clean end of stream and a partial last line are both
    /// reported as [`WireError::Truncated`].
    pub fn next_message(&mut self) -> Result<WireMessage, WireError> {
        self.line += 1;
        let line = self.line;
        self.buf.clear();
        let read = (&mut self.inner)
            .take(self.limit as u64 + 1)
            .read_until(b'\n', &mut self.buf)
            .map_err(|source| WireError::Io { line, source })?;
        let complete = self.buf.last() == Some(&b'\n');
        if complete {
            self.buf.pop();
            if self.buf.last() == Some(&b'\r') {
                self.buf.pop();
            }
        }
        if self.buf.len() > self.limit {
            return Err(WireError::TooLong {
                line,
                limit: self.limit,
            });
        }
        if read == 0 || !complete {
            return Err(WireError::Truncated { line });
        }
        let text = std::str::from_utf8(&self.buf).map_err(|e| WireError::Malformed {
            line,
            reason: e.to_string(),
        })?;
        WireMessage::decode(text, line)
    }

    /// Next message, which must be of kind `expected`.
    pub fn expect(&mut self, expected: &'static str) -> Result<WireMessage, WireError> {
        let msg = self.next_message()?;
        if msg.kind() == expected {
            Ok(msg)
        } else {
            Err(WireError::Unexpected {
                line: self.line,
                expected,
                got: msg.kind(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn challenge_line() {
        let line = WireMessage::Challenge { c: 1 }.encode().unwrap();
        assert_eq!(line, r#"{"type":"challenge","c":1}"#);
        assert!(!line.contains('\n'));
        assert!(WireMessage::Challenge { c: 2 }.encode().is_err());
        assert!(matches!(
            WireMessage::decode(r#"{"type":"challenge","c":2}"#, 4),
            Err(WireError::BadChallenge { line: 4, c: 2 })
        ));
    }

    #[test]
    fn commit_lines() {
        let m = WireMessage::Commit {
            x: "7".into(),
            x_prime: "7".into(),
        };
        assert_eq!(m.encode().unwrap(), r#"{"type":"commit","x":"7","x_prime":"7"}"#);
        let b = WireMessage::Commit {
            x: "[1, -2]".into(),
            x_prime: "[]".into(),
        };
        let line = b.encode().unwrap();
        assert!(line.contains("[1, -2]"));
        assert_eq!(WireMessage::decode(&line, 1).unwrap(), b);
    }

    #[test]
    fn hello_and_result() {
        let hello = WireMessage::hello("laver:8", 20, LawMode::Ld);
        let line = hello.encode().unwrap();
        assert_eq!(
            line,
            r#"{"type":"hello","version":"1","platform":"laver:8","rounds":20,"mode":"ld"}"#
        );
        let result = WireMessage::Result {
            accept: false,
            reason: None,
        };
        assert_eq!(result.encode().unwrap(), r#"{"type":"result","accept":false}"#);
        assert!(WireMessage::decode(r#"{"type":"bogus"}"#, 1).is_err());
        assert!(WireMessage::decode(r#"{"c":1}"#, 1).is_err());
    }

    #[test]
    fn reader_reports_line_numbers() {
        let text = "{\"type\":\"challenge\",\"c\":0}\nnot json\n";
        let mut r = LineReader::new(Cursor::new(text));
        r.next_message().unwrap();
        match r.next_message() {
            Err(WireError::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(r.next_message(), Err(WireError::Truncated { line: 3 })));
    }

    #[test]
    fn reader_flags_partial_and_long_lines() {
        let mut r = LineReader::new(Cursor::new("{\"type\":\"chall"));
        assert!(matches!(r.next_message(), Err(WireError::Truncated { line: 1 })));
        let long = format!("{}\n", "x".repeat(100));
        let mut r = LineReader::with_limit(Cursor::new(long), 50);
        assert!(matches!(r.next_message(), Err(WireError::TooLong { line: 1, limit: 50 })));
        let mut r = LineReader::new(Cursor::new("{\"type\":\"response\",\"y\":\"3\"}\r\n"));
        assert!(matches!(r.expect("commit"), Err(WireError::Unexpected { expected: "commit", .. })));
    }
}
