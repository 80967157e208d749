#![no_main]
use libfuzzer_sys::fuzz_target;

use pbwsplit::multiindex::{MonomialOrder, MultiIndex};

// Parsed indices print back to a string that parses to the same index.
fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(s) = MultiIndex::parse(&text) {
        assert_eq!(MultiIndex::parse(&s.to_string()).unwrap(), s);
    }
    if let Ok(o) = MonomialOrder::parse(&text) {
        assert_eq!(MonomialOrder::parse(o.name()).unwrap(), o);
    }
});
