#![no_main]

use dtt_core::imagelab::{pgm_decode, pgm_encode};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(img) = pgm_decode(data) {
        assert!(img.data().iter().all(|v| (0.0..=1.0).contains(v)));
        // Re-encoding at full depth is lossless.
        let again = pgm_decode(&pgm_encode(&img, 65535).unwrap()).unwrap();
        assert!(again.max_abs_diff(&img) <= 0.5 / 65535.0 + 1e-12);
    }
});
