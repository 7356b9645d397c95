#![no_main]

use dtt_core::codec::SymbolTable;
use dtt_core::scalar::real;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = SymbolTable::parse(text) {
        for &(c, v) in t.entries() {
            assert_eq!(t.value(c).unwrap(), v);
            if t.len() > 1 {
                assert_eq!(t.lookup(real(v)).unwrap(), c);
            }
        }
    }
});
