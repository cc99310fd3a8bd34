#![no_main]

use libfuzzer_sys::fuzz_target;
use mdsarray::codespec::CodeSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(spec) = CodeSpec::from_json_bytes(data) {
        // reserialization must parse back to the same spec
        let back = CodeSpec::from_json(&spec.to_json()).expect("reserialized spec parses");
        assert_eq!(spec, back);
        // building may reject the parameters but must never crash or blow
        // up; the builders themselves enforce the desk-scale caps
        let _ = spec.build();
    }
});
