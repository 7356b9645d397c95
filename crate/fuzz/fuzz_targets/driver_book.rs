#![no_main]

use dtt_core::codec::DriverBook;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(book) = DriverBook::parse(text) {
        for (i, d) in book.drivers().iter().enumerate() {
            assert_eq!(book.get((i + 1) as f64).unwrap(), d);
        }
        assert!(book.get(0.0).is_err());
    }
});
