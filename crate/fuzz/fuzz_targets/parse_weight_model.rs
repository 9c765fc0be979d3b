#![no_main]
use libfuzzer_sys::fuzz_target;

use hamtsp::harness::WeightModel;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(model) = text.parse::<WeightModel>() {
            assert_eq!(model.to_string().parse::<WeightModel>(), Ok(model));
        }
    }
});
