//! Byte-for-byte comparison of CLI reports against committed goldens.
//! `UPDATE_GOLDENS=1 cargo test -p moore-tower --test golden` rewrites them.

mod common;

#[test]
fn golden_corpus_is_byte_identical_across_runs() {
    let update = std::env::var_os("UPDATE_GOLDENS").is_some();
    common::check_corpus(update).unwrap();
}
