//! JSON key files. The public file holds the platform descriptor and the
//! encoded `p`, `p′`; the secret file adds `s`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::platform::{LdPlatform, PlatformError};
use crate::protocol::{KeyPair, PublicKey};

#[derive(Debug, thiserror::Error)]
pub enum KeyFileError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("key file is for platform {found}, expected {expected}")]
    PlatformMismatch { expected: String, found: String },
    #[error(transparent)]
    Platform(#[from] PlatformError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKeyFile {
    pub platform: String,
    pub p: String,
    pub p_prime: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretKeyFile {
    pub platform: String,
    pub secret: String,
    pub p: String,
    pub p_prime: String,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, KeyFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| KeyFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| KeyFileError::Json {
        path: path.display().to_string(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), KeyFileError> {
    let mut text = serde_json::to_string_pretty(value).expect("key file serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| KeyFileError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn check_platform<P: LdPlatform>(platform: &P, found: &str) -> Result<(), KeyFileError> {
    let expected = platform.descriptor();
    if found == expected {
        Ok(())
    } else {
        Err(KeyFileError::PlatformMismatch {
            expected,
            found: found.to_string(),
        })
    }
}

impl PublicKeyFile {
    pub fn from_key<P: LdPlatform>(platform: &P, key: &PublicKey<P::Element>) -> PublicKeyFile {
        PublicKeyFile {
            platform: platform.descriptor(),
            p: platform.encode(&key.p),
            p_prime: platform.encode(&key.p_prime),
        }
    }

    pub fn to_key<P: LdPlatform>(&self, platform: &P) -> Result<PublicKey<P::Element>, KeyFileError> {
        check_platform(platform, &self.platform)?;
        Ok(PublicKey {
            p: platform.decode(&self.p)?,
            p_prime: platform.decode(&self.p_prime)?,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<PublicKeyFile, KeyFileError> {
        read_json(path.as_ref())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), KeyFileError> {
        write_json(path.as_ref(), self)
    }
}

impl SecretKeyFile {
    pub fn from_key<P: LdPlatform>(platform: &P, key: &KeyPair<P::Element>) -> SecretKeyFile {
        SecretKeyFile {
            platform: platform.descriptor(),
            secret: platform.encode(&key.secret),
            p: platform.encode(&key.public.p),
            p_prime: platform.encode(&key.public.p_prime),
        }
    }

    /// Decodes the key pair. The stored `p′` is kept as is, so a file whose
    /// secret does not match its public part yields an inconsistent pair.
    pub fn to_key<P: LdPlatform>(&self, platform: &P) -> Result<KeyPair<P::Element>, KeyFileError> {
        check_platform(platform, &self.platform)?;
        Ok(KeyPair {
            secret: platform.decode(&self.secret)?,
            public: PublicKey {
                p: platform.decode(&self.p)?,
                p_prime: platform.decode(&self.p_prime)?,
            },
        })
    }

    pub fn public(&self) -> PublicKeyFile {
        PublicKeyFile {
            platform: self.platform.clone(),
            p: self.p.clone(),
            p_prime: self.p_prime.clone(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SecretKeyFile, KeyFileError> {
        read_json(path.as_ref())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), KeyFileError> {
        write_json(path.as_ref(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::{LaverPlatform, ShiftedBraid};
    use crate::protocol::keygen;
    use crate::stream_rng;

    #[test]
    fn round_trip_through_text() {
        let b = ShiftedBraid::default();
        let key = keygen(&b, &mut stream_rng(3, 0));
        let file = SecretKeyFile::from_key(&b, &key);
        let text = serde_json::to_string(&file).unwrap();
        let back: SecretKeyFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_key(&b).unwrap(), key);
        assert_eq!(back.public().to_key(&b).unwrap(), key.public);
    }

    #[test]
    fn platform_must_match() {
        let l = LaverPlatform::new(3).unwrap();
        let file = PublicKeyFile {
            platform: "laver:4".into(),
            p: "1".into(),
            p_prime: "7".into(),
        };
        assert!(matches!(file.to_key(&l), Err(KeyFileError::PlatformMismatch { .. })));
    }
}
