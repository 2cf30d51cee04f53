#![no_main]
use libfuzzer_sys::fuzz_target;
use rectpack::format::{instance_to_string, parse_instance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = parse_instance(text) {
        let again = parse_instance(&instance_to_string(&inst)).expect("serialized instance parses");
        assert_eq!(again, inst);
    }
});
