#![no_main]

use libfuzzer_sys::fuzz_target;
use rmlab::PolyAnf;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(p) = text.parse::<PolyAnf>() else {
        return;
    };
    let again: PolyAnf = p.to_string().parse().expect("printed form parses");
    assert_eq!(again, p);
    if p.num_vars() <= 12 {
        assert_eq!(p.to_eval().unwrap().to_anf(), p);
    }
});
