#![no_main]

use libfuzzer_sys::fuzz_target;
use rmlab::weightdist::WeightProfile;
use rmlab::CodeParams;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else {
        return;
    };
    let m = 1 + u32::from(sel % 5);
    let r = u32::from(sel / 5) % (m + 1);
    let params = CodeParams::new(m, r).unwrap();
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(profile) = WeightProfile::from_csv(params, text) else {
        return;
    };
    let again = WeightProfile::from_csv(params, &profile.to_csv()).expect("printed form parses");
    assert_eq!(again, profile);
});
