#![no_main]
use libfuzzer_sys::fuzz_target;

use pbwsplit::rootsys::RootSystem;
use pbwsplit_cli::commands::parse_cartan;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(cartan) = parse_cartan(&text) {
        // validation must leave only matrices the builder accepts or rejects cleanly
        if let Ok(rs) = RootSystem::build_with_cap(cartan, 3) {
            assert!(rs.chevalley().jacobi_holds());
        }
    }
});
