use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::PlatformError;
use crate::braid::BraidWord;

/// Parsed platform descriptor:
/// `shifted-braid | conj-braid | laver:<n> | int-succ | magma:<file> | fconj:<k>:<word>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlatformSpec {
    ShiftedBraid,
    ConjBraid,
    Laver(u32),
    IntSucc,
    Magma(PathBuf),
    FConj { shift_power: u32, a: BraidWord },
}

impl FromStr for PlatformSpec {
    type Err = PlatformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| PlatformError::Descriptor {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        match s {
            "shifted-braid" => return Ok(PlatformSpec::ShiftedBraid),
            "conj-braid" => return Ok(PlatformSpec::ConjBraid),
            "int-succ" => return Ok(PlatformSpec::IntSucc),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("laver:") {
            let n = n.parse().map_err(|_| bad("laver:<n> needs an integer n"))?;
            return Ok(PlatformSpec::Laver(n));
        }
        if let Some(path) = s.strip_prefix("magma:") {
            if path.is_empty() {
                return Err(bad("magma:<file> needs a path"));
            }
            return Ok(PlatformSpec::Magma(PathBuf::from(path)));
        }
        if let Some(rest) = s.strip_prefix("fconj:") {
            let (k, word) = rest
                .split_once(':')
                .ok_or_else(|| bad("expected fconj:<k>:<word>"))?;
            let shift_power: u32 = k.parse().map_err(|_| bad("shift power must be an integer"))?;
            if shift_power == 0 {
                return Err(bad("shift power must be at least 1"));
            }
            let a = word.parse().map_err(|e: crate::braid::BraidError| bad(&e.to_string()))?;
            return Ok(PlatformSpec::FConj { shift_power, a });
        }
        Err(bad("unknown platform"))
    }
}

impl fmt::Display for PlatformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlatformSpec::ShiftedBraid => f.write_str("shifted-braid"),
            PlatformSpec::ConjBraid => f.write_str("conj-braid"),
            PlatformSpec::Laver(n) => write!(f, "laver:{n}"),
            PlatformSpec::IntSucc => f.write_str("int-succ"),
            PlatformSpec::Magma(path) => write!(f, "magma:{}", path.display()),
            PlatformSpec::FConj { shift_power, a } => write!(f, "fconj:{shift_power}:{a}"),
        }
    }
}

/// Builds the platform named by a [`PlatformSpec`] and evaluates `$body` with it
/// bound to `$p`. `$body` must produce a `Result` whose error type converts from
/// [`PlatformError`].
#[macro_export]
macro_rules! with_platform {
    ($spec:expr, |$p:ident| $body:expr) => {{
        use $crate::platform::{
            ConjBraid, FConjugacy, FiniteMagma, IntSuccessor, LaverPlatform, PlatformSpec, ShiftedBraid,
        };
        match $spec {
            PlatformSpec::ShiftedBraid => {
                let $p = ShiftedBraid::default();
                $body
            }
            PlatformSpec::ConjBraid => {
                let $p = ConjBraid::default();
                $body
            }
            PlatformSpec::Laver(n) => match LaverPlatform::new(*n) {
                Ok($p) => $body,
                Err(e) => Err(e.into()),
            },
            PlatformSpec::IntSucc => {
                let $p = IntSuccessor::default();
                $body
            }
            PlatformSpec::Magma(path) => match FiniteMagma::load(path) {
                Ok($p) => $body,
                Err(e) => Err(e.into()),
            },
            PlatformSpec::FConj { shift_power, a } => {
                let $p = FConjugacy::new(*shift_power, a.clone());
                $body
            }
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::LdPlatform;

    #[test]
    fn parse_and_display() {
        for text in ["shifted-braid", "conj-braid", "laver:8", "int-succ", "magma:tables/m.csv", "fconj:2:[1]"] {
            let spec: PlatformSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("laver:x".parse::<PlatformSpec>().is_err());
        assert!("fconj:0:[1]".parse::<PlatformSpec>().is_err());
        assert!("braid".parse::<PlatformSpec>().is_err());
        assert!("magma:".parse::<PlatformSpec>().is_err());
    }

    #[test]
    fn descriptors_match_built_platforms() {
        for text in ["shifted-braid", "conj-braid", "laver:3", "int-succ", "fconj:2:[1, -2]"] {
            let spec: PlatformSpec = text.parse().unwrap();
            let d: Result<String, PlatformError> = crate::with_platform!(&spec, |p| Ok(p.descriptor()));
            assert_eq!(d.unwrap(), text);
        }
    }
}
