#![no_main]

use dtt_core::codec::{wire_read, wire_write};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(w) = wire_read(data) {
        let mut out = Vec::new();
        wire_write(&w, &mut out).unwrap();
        assert_eq!(out, data);
        let _ = w.check_blocks(10);
    }
});
