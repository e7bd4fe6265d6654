#![no_main]

use libfuzzer_sys::fuzz_target;
use surface_foliation::fixtures;
use surface_foliation::io::{parse_automorphism, read_automorphism_file, serialize_automorphism};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = read_automorphism_file(text);
    let s = fixtures::octahedron();
    if let Ok(h) = parse_automorphism(text, &s) {
        let _ = h.validate(&s);
        let again = parse_automorphism(&serialize_automorphism(&s, &h), &s).expect("serialized maps parse");
        assert_eq!(again, h);
    }
});
