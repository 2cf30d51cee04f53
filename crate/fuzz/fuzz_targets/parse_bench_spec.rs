#![no_main]
use libfuzzer_sys::fuzz_target;
use rectpack_cli::bench::parse_bench_spec;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_bench_spec(text);
    }
});
