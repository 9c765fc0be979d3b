#![no_main]
use libfuzzer_sys::fuzz_target;

use hamtsp::Weight;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = text.parse::<Weight>() {
        assert_eq!(w.to_string().parse::<Weight>(), Ok(w));
    }
});
