#![no_main]

use libfuzzer_sys::fuzz_target;
use mdsarray::cluster::{encode_node_file, parse_node_file};

fuzz_target!(|data: &[u8]| {
    if let Ok(file) = parse_node_file(data) {
        // the format has no slack, so accepted input re-encodes byte-exact
        let reencoded = encode_node_file(file.q, file.sub, &file.symbols);
        assert_eq!(reencoded, data);
    }
});
