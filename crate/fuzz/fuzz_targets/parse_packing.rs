#![no_main]
use libfuzzer_sys::fuzz_target;
use rectpack::format::{packing_to_string, parse_packing};
use rectpack::{validate_packing, Item, KnapsackInstance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(packing) = parse_packing(text) {
        assert_eq!(parse_packing(&packing_to_string(&packing)).unwrap(), packing);
        let items = (0..4).map(|i| Item::new(i, 1 + i as u64, 2, 1)).collect();
        let inst = KnapsackInstance::new(8, items).unwrap().into();
        let _ = validate_packing(&inst, &packing);
    }
});
