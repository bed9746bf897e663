//! Content hashes for models, configs and ensembles.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// First 16 hex digits of the SHA-256 of the value's JSON form.
///
/// `serde_json` maps are ordered by key, so the JSON is canonical for the
/// structs used here.
pub fn digest<V: Serialize + ?Sized>(value: &V) -> String {
    let json = serde_json::to_value(value)
        .and_then(|v| serde_json::to_vec(&v))
        .expect("serializable value");
    let hash = Sha256::digest(&json);
    hex::encode(&hash[..8])
}

/// Hash of raw bytes, same format as [`digest`].
pub fn digest_bytes(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}
