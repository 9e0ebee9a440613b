#![no_main]

use libfuzzer_sys::fuzz_target;
use rmlab::EvalVec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(v) = text.parse::<EvalVec>() else {
        return;
    };
    let again: EvalVec = v.to_string().parse().expect("printed form parses");
    assert_eq!(again, v);
    if v.num_vars() <= 14 {
        assert_eq!(v.to_anf().to_eval().unwrap(), v);
    }
});
