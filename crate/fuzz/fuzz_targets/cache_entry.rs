//! Cache files are untrusted: decoding arbitrary bytes must fail cleanly, and
//! anything that decodes must re-encode byte for byte.

#![no_main]
use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;

use pbwsplit::cache::{CacheEntry, CacheKey};
use pbwsplit::rootsys::{RootSystem, Weight};

fn g2() -> &'static Arc<RootSystem> {
    static RS: OnceLock<Arc<RootSystem>> = OnceLock::new();
    RS.get_or_init(|| Arc::new(RootSystem::from_label("G2").unwrap()))
}

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let Ok(entry) = CacheEntry::from_json(&text) else {
        return;
    };
    assert_eq!(CacheEntry::from_json(&entry.to_json()).unwrap(), entry);
    let key = CacheKey::new(g2(), &Weight(vec![1, 0]), 7);
    if let Ok(m) = entry.decode(g2(), &key) {
        assert_eq!(
            CacheEntry::encode(g2(), &m).payload.layout,
            entry.payload.layout
        );
    }
});
