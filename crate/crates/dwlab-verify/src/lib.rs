//! Holds the `acceptance` test target; run it with
//! `cargo test -p dwlab-verify --test acceptance`.
