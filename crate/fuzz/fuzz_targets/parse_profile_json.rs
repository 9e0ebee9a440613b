#![no_main]

use libfuzzer_sys::fuzz_target;
use rmlab::weightdist::WeightProfile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(profile) = WeightProfile::from_json(text) else {
        return;
    };
    let printed = profile.to_json_value().to_string();
    let again = WeightProfile::from_json(&printed).expect("printed form parses");
    assert_eq!(again, profile);
});
