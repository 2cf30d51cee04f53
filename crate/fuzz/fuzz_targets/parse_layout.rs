#![no_main]
use libfuzzer_sys::fuzz_target;
use rectpack::format::{layout_to_string, parse_layout};
use rectpack::Region;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(layout) = parse_layout(text) {
        assert_eq!(parse_layout(&layout_to_string(&layout)).unwrap(), layout);
        let _ = layout.check(&Region::Rect { w: 64, h: 64 });
    }
});
