#![no_main]
use crossratio::classify::{Cache, ClassRecord, Report};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(rep) = Report::parse(s) {
        assert_eq!(Report::parse(&rep.to_text()).unwrap(), rep);
    }
    if let Ok(rec) = ClassRecord::parse_line(s) {
        assert_eq!(ClassRecord::parse_line(&rec.to_line()).unwrap(), rec);
    }
    let _ = Cache::parse(s);
});
