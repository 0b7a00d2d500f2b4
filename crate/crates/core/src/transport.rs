//! Prover and verifier sessions over a duplex byte stream.
//!
//! Both sides build their transcript from the exchanged messages alone, the
//! prover running the public verification check locally, so an honest
//! session leaves identical transcripts at both ends. Any protocol fault
//! (malformed line, wrong message, mismatched hello, timeout, lost
//! connection) ends the session as a rejection with a diagnostic.

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::time::Duration;

use rand::RngCore;

use crate::platform::LdPlatform;
use crate::protocol::{
    verify_round, Challenge, Commitment, KeyPair, ProtocolConfig, Prover, PublicKey, RoundRecord, Transcript,
    Verifier,
};
use crate::stream_rng;
use crate::wire::{LineReader, WireError, WireMessage, MAX_LINE_BYTES, PROTOCOL_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransportConfig {
    /// Per-message read and write timeout.
    pub timeout: Option<Duration>,
    pub max_line: usize,
}

impl Default for TransportConfig {
    fn default() -> Self {
        TransportConfig {
            timeout: Some(Duration::from_secs(30)),
            max_line: MAX_LINE_BYTES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionOutcome<E> {
    pub transcript: Transcript<E>,
    /// Final verdict as seen by this side.
    pub accepted: bool,
    pub diagnostic: Option<String>,
}

fn send<W: Write>(writer: &mut W, msg: &WireMessage) -> Result<(), String> {
    let line = msg.encode().map_err(|e| e.to_string())?;
    writer
        .write_all(line.as_bytes())
        .and_then(|_| writer.write_all(b"\n"))
        .and_then(|_| writer.flush())
        .map_err(|e| format!("sending {}: {e}", msg.kind()))
}

fn decode_at<P: LdPlatform>(platform: &P, text: &str, line: usize) -> Result<P::Element, String> {
    platform.decode(text).map_err(|e| format!("line {line}: {e}"))
}

fn check_hello<P: LdPlatform>(platform: &P, config: &ProtocolConfig, hello: &WireMessage) -> Result<(), String> {
    let WireMessage::Hello {
        version,
        platform: descriptor,
        rounds,
        mode,
    } = hello
    else {
        unreachable!("caller matched the kind");
    };
    if version != PROTOCOL_VERSION {
        return Err(format!("protocol version {version:?} is not {PROTOCOL_VERSION:?}"));
    }
    let ours = platform.descriptor();
    if *descriptor != ours {
        return Err(format!("platform mismatch: peer uses {descriptor}, verifier uses {ours}"));
    }
    if *rounds != config.rounds {
        return Err(format!("round count mismatch: peer wants {rounds}, verifier wants {}", config.rounds));
    }
    if *mode != config.mode {
        return Err(format!("law mode mismatch: peer uses {mode}, verifier uses {}", config.mode));
    }
    Ok(())
}

/// Runs the verifier side until the session ends, then sends the result.
pub fn verify_session<P, R, W>(
    platform: &P,
    config: &ProtocolConfig,
    public: &PublicKey<P::Element>,
    reader: R,
    mut writer: W,
    rng: &mut dyn RngCore,
    max_line: usize,
) -> SessionOutcome<P::Element>
where
    P: LdPlatform,
    R: BufRead,
    W: Write,
{
    let mut lines = LineReader::with_limit(reader, max_line);
    let mut transcript = Transcript::new();
    let mut run = |transcript: &mut Transcript<P::Element>, lines: &mut LineReader<R>, writer: &mut W| {
        let hello = lines.expect("hello").map_err(|e| e.to_string())?;
        check_hello(platform, config, &hello)?;
        config.check_platform(platform).map_err(|e| e.to_string())?;
        let mut verifier = Verifier::new(platform, public);
        for round in 1..=config.rounds {
            let WireMessage::Commit { x, x_prime } = lines.expect("commit").map_err(|e| e.to_string())? else {
                unreachable!()
            };
            let commitment = Commitment {
                x: decode_at(platform, &x, lines.line())?,
                x_prime: decode_at(platform, &x_prime, lines.line())?,
            };
            verifier.receive_commit(commitment).map_err(|e| e.to_string())?;
            let c = verifier.challenge(rng).map_err(|e| e.to_string())?;
            send(writer, &WireMessage::Challenge { c: c.bit() })?;
            let WireMessage::Response { y } = lines.expect("response").map_err(|e| e.to_string())? else {
                unreachable!()
            };
            let y = decode_at(platform, &y, lines.line())?;
            let record = verifier.receive_response(y).map_err(|e| e.to_string())?;
            let accepted = record.accepted;
            transcript.push(record);
            if !accepted {
                return Err(format!("round {round} failed verification"));
            }
        }
        Ok(())
    };
    let diagnostic = run(&mut transcript, &mut lines, &mut writer).err();
    transcript.finish(config.rounds);
    let accepted = transcript.accepted();
    let mut diagnostic = diagnostic;
    let result = WireMessage::Result {
        accept: accepted,
        reason: diagnostic.clone(),
    };
    if let Err(e) = send(&mut writer, &result) {
        diagnostic.get_or_insert(e);
    }
    SessionOutcome {
        transcript,
        accepted,
        diagnostic,
    }
}

/// Runs the prover side: hello, the rounds, then waits for the verifier's result.
pub fn prove_session<P, R, W>(
    platform: &P,
    config: &ProtocolConfig,
    key: &KeyPair<P::Element>,
    reader: R,
    mut writer: W,
    rng: &mut dyn RngCore,
    max_line: usize,
) -> SessionOutcome<P::Element>
where
    P: LdPlatform,
    R: BufRead,
    W: Write,
{
    let mut lines = LineReader::with_limit(reader, max_line);
    let mut transcript = Transcript::new();
    // Ok(verdict announced by the verifier) or Err(diagnostic).
    let mut run = |transcript: &mut Transcript<P::Element>, lines: &mut LineReader<R>, writer: &mut W| {
        config.check_platform(platform).map_err(|e| e.to_string())?;
        send(writer, &WireMessage::hello(platform.descriptor(), config.rounds, config.mode))?;
        let mut prover = Prover::new(platform, key, config.mode);
        for round in 1..=config.rounds {
            let commitment = prover.commit(rng).map_err(|e| e.to_string())?;
            send(
                writer,
                &WireMessage::Commit {
                    x: platform.encode(&commitment.x),
                    x_prime: platform.encode(&commitment.x_prime),
                },
            )?;
            let c = match lines.next_message().map_err(|e| e.to_string())? {
                WireMessage::Challenge { c } => Challenge::from_bit(c).expect("decoder validates the bit"),
                WireMessage::Result { accept, reason } => {
                    return Ok((accept, reason));
                }
                other => {
                    return Err(WireError::Unexpected {
                        line: lines.line(),
                        expected: "challenge",
                        got: other.kind(),
                    }
                    .to_string())
                }
            };
            let y = prover.respond(c).map_err(|e| e.to_string())?;
            send(writer, &WireMessage::Response { y: platform.encode(&y) })?;
            let accepted = verify_round(platform, &key.public, &commitment, c, &y).map_err(|e| e.to_string())?;
            transcript.push(RoundRecord {
                round,
                commitment,
                challenge: c,
                response: y,
                accepted,
            });
            if !accepted {
                break;
            }
        }
        match lines.expect("result").map_err(|e| e.to_string())? {
            WireMessage::Result { accept, reason } => Ok((accept, reason)),
            _ => unreachable!(),
        }
    };
    let outcome = run(&mut transcript, &mut lines, &mut writer);
    transcript.finish(config.rounds);
    let (accepted, diagnostic) = match outcome {
        Ok((announced, reason)) if announced == transcript.accepted() => (announced, reason),
        Ok((announced, _)) => (
            false,
            Some(format!(
                "verifier announced {} but the local transcript says {}",
                verdict_word(announced),
                verdict_word(transcript.accepted())
            )),
        ),
        Err(diag) => (false, Some(diag)),
    };
    SessionOutcome {
        transcript,
        accepted,
        diagnostic,
    }
}

fn verdict_word(accept: bool) -> &'static str {
    if accept {
        "accept"
    } else {
        "reject"
    }
}

fn prepare(stream: &TcpStream, transport: &TransportConfig) -> std::io::Result<BufReader<TcpStream>> {
    stream.set_read_timeout(transport.timeout)?;
    stream.set_write_timeout(transport.timeout)?;
    stream.set_nodelay(true)?;
    Ok(BufReader::new(stream.try_clone()?))
}

/// Connects to a verifier and runs one session.
pub fn prove_tcp<P: LdPlatform>(
    addr: impl ToSocketAddrs,
    platform: &P,
    config: &ProtocolConfig,
    key: &KeyPair<P::Element>,
    rng: &mut dyn RngCore,
    transport: &TransportConfig,
) -> std::io::Result<SessionOutcome<P::Element>> {
    let stream = match transport.timeout {
        Some(t) => {
            let mut last = None;
            let mut connected = None;
            for a in addr.to_socket_addrs()? {
                match TcpStream::connect_timeout(&a, t) {
                    Ok(s) => {
                        connected = Some(s);
                        break;
                    }
                    Err(e) => last = Some(e),
                }
            }
            match (connected, last) {
                (Some(s), _) => s,
                (None, Some(e)) => return Err(e),
                (None, None) => {
                    return Err(std::io::Error::new(std::io::ErrorKind::InvalidInput, "no address to connect to"))
                }
            }
        }
        None => TcpStream::connect(addr)?,
    };
    let reader = prepare(&stream, transport)?;
    Ok(prove_session(platform, config, key, reader, &stream, rng, transport.max_line))
}

/// Runs the verifier side of one session on an accepted connection.
pub fn serve_connection<P: LdPlatform>(
    stream: TcpStream,
    platform: &P,
    config: &ProtocolConfig,
    public: &PublicKey<P::Element>,
    rng: &mut dyn RngCore,
    transport: &TransportConfig,
) -> std::io::Result<SessionOutcome<P::Element>> {
    let reader = prepare(&stream, transport)?;
    Ok(verify_session(platform, config, public, reader, &stream, rng, transport.max_line))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ServeOptions {
    /// Connection `i` draws challenges from `stream_rng(seed, i)`.
    pub seed: u64,
    /// Stop after this many connections; `None` serves forever.
    pub max_sessions: Option<u64>,
    pub transport: TransportConfig,
}

/// Accepts connections and runs one isolated session per connection, each
/// on its own thread, reporting every outcome to `on_session`.
pub fn serve<P, F>(
    listener: &TcpListener,
    platform: &P,
    config: &ProtocolConfig,
    public: &PublicKey<P::Element>,
    options: &ServeOptions,
    on_session: F,
) -> std::io::Result<()>
where
    P: LdPlatform,
    F: Fn(u64, std::io::Result<SessionOutcome<P::Element>>) + Sync,
{
    std::thread::scope(|scope| {
        let mut index = 0u64;
        while options.max_sessions.is_none_or(|m| index < m) {
            let (stream, _) = listener.accept()?;
            let i = index;
            let on_session = &on_session;
            scope.spawn(move || {
                let mut rng = stream_rng(options.seed, i);
                on_session(i, serve_connection(stream, platform, config, public, &mut rng, &options.transport));
            });
            index += 1;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::LaverPlatform;
    use crate::protocol::{keygen, LawMode};
    use std::io::Cursor;

    #[test]
    fn truncated_stream_is_rejected_with_line_number() {
        let p = LaverPlatform::new(3).unwrap();
        let config = ProtocolConfig::new(3, LawMode::Ld).unwrap();
        let key = KeyPair::from_secret(&p, 2, 1);
        let input = "{\"type\":\"hello\",\"version\":\"1\",\"platform\":\"laver:3\",\"rounds\":3,\"mode\":\"ld\"}\n{\"type\":\"commit\",\"x\":\"7\",\"x_pr";
        let mut out = Vec::new();
        let outcome = verify_session(&p, &config, &key.public, Cursor::new(input), &mut out, &mut stream_rng(0, 0), 1024);
        assert!(!outcome.accepted);
        assert!(outcome.diagnostic.unwrap().contains("line 2"));
        let text = String::from_utf8(out).unwrap();
        assert!(text.ends_with("\n"));
        assert!(text.lines().last().unwrap().contains("\"accept\":false"));
    }

    #[test]
    fn hello_mismatch_is_rejected() {
        let p = LaverPlatform::new(3).unwrap();
        let config = ProtocolConfig::new(3, LawMode::Ld).unwrap();
        let key = keygen(&p, &mut stream_rng(1, 0));
        for hello in [
            WireMessage::hello("laver:4", 3, LawMode::Ld),
            WireMessage::hello("laver:3", 4, LawMode::Ld),
            WireMessage::Hello {
                version: "2".into(),
                platform: "laver:3".into(),
                rounds: 3,
                mode: LawMode::Ld,
            },
        ] {
            let input = format!("{}\n", hello.encode().unwrap());
            let mut out = Vec::new();
            let outcome =
                verify_session(&p, &config, &key.public, Cursor::new(input), &mut out, &mut stream_rng(0, 0), 1024);
            assert!(!outcome.accepted);
            assert!(outcome.diagnostic.is_some());
        }
    }
}
