use std::fs;
use std::path::PathBuf;

use dtt_core::codec::{decode, encode, wire_read, wire_write, DriverBook, SymbolTable};
use dtt_core::imagelab::{
    block_recover, block_transform, neighbor_filter_raw, parse_kernel, pgm_decode, pgm_encode, pgm_encode_plain, GrayImage,
    Kernel,
};
use dtt_core::seqio::{format_seq, parse_seq};
use dtt_core::{Driver, Error};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn challenge_ciphertext_parses() {
    let v = parse_seq(&fixture("challenge.json")).unwrap();
    assert_eq!(v.len(), 23);
    assert_eq!(v[0].re, -1917.959);
    assert_eq!(v[22].re, -792.2136);
    assert!(v.iter().all(|z| z.im == 0.0));
    assert_eq!(parse_seq(&format_seq(&v)).unwrap(), v);
}

#[test]
fn small_table_and_book() {
    let table = SymbolTable::parse(&fixture("small_table.tsv")).unwrap();
    assert_eq!(table.len(), 4);
    assert_eq!(table.value(' ').unwrap(), 10.0);
    // '@' is missing, so a message that needs padding cannot be encoded.
    let book = DriverBook::parse(&fixture("book.txt")).unwrap();
    assert_eq!(book.len(), 2);
    assert!(matches!(encode("ab!", &table, &book, 1.0, 4), Err(Error::UnknownSymbol('@'))));

    let w = encode("ab! ba! ", &table, &book, 2.0, 4).unwrap();
    assert_eq!(w.payload.len(), 8);
    let mut bytes = Vec::new();
    wire_write(&w, &mut bytes).unwrap();
    assert_eq!(bytes.len(), 72);
    let back = wire_read(&bytes[..]).unwrap();
    assert_eq!(decode(&back, &table, &book, 4).unwrap(), "ab! ba! ");
}

#[test]
fn default_table_round_trips_through_text() {
    let t = SymbolTable::default_table();
    let again = SymbolTable::parse(&t.to_text()).unwrap();
    assert_eq!(again.entries(), t.entries());
}

#[test]
fn kernel_file_matches_sobel() {
    assert_eq!(parse_kernel(&fixture("edge.kernel")).unwrap(), Kernel::sobel());
}

#[test]
fn image_pipeline_through_pgm() {
    let img = GrayImage::from_fn(24, 17, |i, j| ((i * 17 + j) % 256) as f64 / 255.0).unwrap();
    let bin = pgm_encode(&img, 255).unwrap();
    let plain = pgm_encode_plain(&img, 255).unwrap();
    let a = pgm_decode(&bin).unwrap();
    let b = pgm_decode(&plain).unwrap();
    assert_eq!(a, b);
    assert!(a.max_abs_diff(&img) < 1e-12);

    let d = Driver::from_reals(&dtt_core::generators::harmonic(6)).unwrap();
    let g = block_transform(&a, &d, 6).unwrap();
    let back = block_recover(&g, &d, 6, 24, 17).unwrap();
    assert!(back.max_abs_diff(&a) < 1e-9);

    let raw = neighbor_filter_raw(&a, &Kernel::identity(), 1.0).unwrap();
    assert_eq!(raw.data(), a.data());
}
