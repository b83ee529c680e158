#![no_main]
use crossratio::classify::Golden;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = Golden::parse(s) {
        assert_eq!(Golden::parse(&g.to_text()).unwrap(), g);
    }
});
