#![no_main]

use libfuzzer_sys::fuzz_target;
use rmlab::channels::ml_decode;
use rmlab::rmcode::message_of;
use rmlab::{BitVec, CodeParams, EvalVec};

fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let m = 1 + u32::from(data[0] % 5);
    let r = u32::from(data[1]) % (m.min(2) + 1);
    let params = CodeParams::new(m, r).unwrap();
    let n = params.n();
    let mut bits = BitVec::zeros(n);
    for i in 0..n {
        if data.get(2 + i / 8).is_some_and(|b| b >> (i % 8) & 1 == 1) {
            bits.set(i, true);
        }
    }
    let received = EvalVec::new(m, bits).unwrap();
    let d = ml_decode(&received, params).unwrap();
    assert_eq!(d.distance, d.codeword.distance(&received));
    // the zero codeword is a candidate
    assert!(d.distance <= received.abs_weight());
    assert!(message_of(params, &d.codeword).is_ok());
});
