#![no_main]
use libfuzzer_sys::fuzz_target;

use pbwsplit::field::PrimeField;
use pbwsplit::weylmod::{parse_residue, SparseMatrix, SparseVector};

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let f = PrimeField::new(7).unwrap();
    if let Ok(m) = serde_json::from_str::<SparseMatrix>(&text) {
        if let Ok(dense) = m.to_matrix(&f, |s| parse_residue(&f, s)) {
            let back = SparseMatrix::from_matrix(&f, &dense);
            assert_eq!(back.to_matrix(&f, |s| parse_residue(&f, s)).unwrap(), dense);
        }
    }
    if let Ok(v) = serde_json::from_str::<SparseVector>(&text) {
        let _ = v.to_vec(&f, |s| parse_residue(&f, s));
    }
});
