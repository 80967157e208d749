//! Arbitrary bytes as a run configuration. Accepted configs must survive a
//! serialize/parse round trip unchanged.

#![no_main]
use libfuzzer_sys::fuzz_target;

use pbwsplit_cli::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(cfg) = RunConfig::from_json(&text) {
        let again = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&again).unwrap(), cfg);
    }
});
