#![no_main]

use libfuzzer_sys::fuzz_target;
use mdsarray::cluster::{spec_from_meta, ClusterMeta};

fuzz_target!(|data: &[u8]| {
    if let Ok(meta) = serde_json::from_slice::<ClusterMeta>(data) {
        let text = serde_json::to_string(&meta).expect("meta serializes");
        let _: ClusterMeta = serde_json::from_str(&text).expect("reserialized meta parses");
        // rebuilding the spec (and, when the parameters are sane, the code)
        // must never panic on hostile metadata
        if let Ok(spec) = spec_from_meta(&meta) {
            let _ = spec.build();
        }
    }
});
