#![no_main]

use dtt_core::seqio::{format_seq, parse_seq};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_seq(text) {
        if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            assert_eq!(parse_seq(&format_seq(&v)).unwrap(), v);
        }
    }
});
