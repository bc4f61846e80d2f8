//! Bearer tokens: `<contributor id>.<hex mac>`, derived from a per-deployment
//! secret so nothing but the secret needs persisting.

use std::path::Path;

use kgrec_core::store::ContributorId;
use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::persist::{write_atomic, PersistError};

#[derive(Clone)]
pub struct TokenIssuer {
    secret: Vec<u8>,
    maintainer: Option<String>,
}

impl std::fmt::Debug for TokenIssuer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TokenIssuer").finish_non_exhaustive()
    }
}

fn constant_time_eq(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && a.iter().zip(b).fold(0u8, |acc, (x, y)| acc | (x ^ y)) == 0
}

impl TokenIssuer {
    pub fn new(secret: Vec<u8>, maintainer: Option<String>) -> Self {
        Self { secret, maintainer }
    }

    /// Loads the secret at `path`, creating a random one on first use.
    pub fn load_or_create(path: &Path, maintainer: Option<String>) -> Result<Self, PersistError> {
        let io = |source| PersistError::Io {
            path: path.to_path_buf(),
            source,
        };
        let secret = match std::fs::read_to_string(path) {
            Ok(s) => hex::decode(s.trim())
                .map_err(|e| io(std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                let mut bytes = vec![0u8; 32];
                rand::thread_rng().fill_bytes(&mut bytes);
                write_atomic(path, hex::encode(&bytes).as_bytes())?;
                bytes
            }
            Err(e) => return Err(io(e)),
        };
        Ok(Self::new(secret, maintainer))
    }

    fn mac(&self, id: ContributorId) -> String {
        let mut h = Sha256::new();
        h.update(&self.secret);
        h.update(b"contributor:");
        h.update(id.0.to_be_bytes());
        hex::encode(h.finalize())
    }

    pub fn issue(&self, id: ContributorId) -> String {
        format!("{}.{}", id.0, self.mac(id))
    }

    pub fn contributor(&self, token: &str) -> Option<ContributorId> {
        let (id, mac) = token.split_once('.')?;
        let id = ContributorId(id.parse().ok()?);
        constant_time_eq(mac.as_bytes(), self.mac(id).as_bytes()).then_some(id)
    }

    pub fn is_maintainer(&self, token: &str) -> bool {
        self.maintainer
            .as_deref()
            .is_some_and(|m| constant_time_eq(m.as_bytes(), token.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip_and_reject_forgery() {
        let a = TokenIssuer::new(b"one".to_vec(), Some("root".into()));
        let b = TokenIssuer::new(b"two".to_vec(), None);
        let t = a.issue(ContributorId(7));
        assert_eq!(a.contributor(&t), Some(ContributorId(7)));
        assert_eq!(b.contributor(&t), None);
        let forged = t.replacen('7', "8", 1);
        assert_eq!(a.contributor(&forged), None);
        assert!(a.is_maintainer("root"));
        assert!(!b.is_maintainer("root"));
    }

    #[test]
    fn secret_persists() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s");
        let a = TokenIssuer::load_or_create(&p, None).unwrap();
        let b = TokenIssuer::load_or_create(&p, None).unwrap();
        assert_eq!(a.issue(ContributorId(1)), b.issue(ContributorId(1)));
    }
}
