#![no_main]

use libfuzzer_sys::fuzz_target;
use surface_foliation::io::{parse_instance, serialize_instance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Anything accepted must survive a round trip unchanged.
    if let Ok(instance) = parse_instance(text) {
        let written = serialize_instance(&instance.complex, &instance.function, &instance.metadata);
        let again = parse_instance(&written).expect("serialized instances parse");
        assert_eq!(serialize_instance(&again.complex, &again.function, &again.metadata), written);
    }
});
