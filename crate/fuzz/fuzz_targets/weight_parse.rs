#![no_main]
use libfuzzer_sys::fuzz_target;

use pbwsplit::rootsys::Weight;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(w) = Weight::parse(&text) {
        let csv: Vec<String> = w.coords().iter().map(|c| c.to_string()).collect();
        assert_eq!(Weight::parse(&csv.join(",")).unwrap(), w);
    }
});
