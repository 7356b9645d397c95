#![no_main]

use dtt_core::imagelab::{neighbor_filter_raw, parse_kernel, GrayImage};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(k) = parse_kernel(text) {
        let img = GrayImage::constant(3, 3, 0.5).unwrap();
        let _ = neighbor_filter_raw(&img, &k, 1.0);
    }
});
