#![no_main]

use libfuzzer_sys::fuzz_target;
use rmlab::channels::{bec_decode, bec_recoverable, BecDecoded, ErasurePattern, PartialWord};
use rmlab::{BitVec, CodeParams, Error};

fn bits(n: usize, bytes: &[u8]) -> BitVec {
    let mut v = BitVec::zeros(n);
    for i in 0..n {
        if bytes.get(i / 8).is_some_and(|b| b >> (i % 8) & 1 == 1) {
            v.set(i, true);
        }
    }
    v
}

fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let m = 1 + u32::from(data[0] % 7);
    let r = u32::from(data[1]) % (m + 1);
    let params = CodeParams::new(m, r).unwrap();
    let n = params.n();
    let rest = &data[2..];
    let half = rest.len() / 2;
    let values = bits(n, &rest[..half]);
    let erased = bits(n, &rest[half..]);
    let pattern = ErasurePattern::new(m, erased.clone()).unwrap();
    let received = PartialWord::new(values.clone(), pattern.clone()).unwrap();
    let recoverable = bec_recoverable(&pattern, params).unwrap();
    match bec_decode(&received, params) {
        Ok(BecDecoded::Unique(cw)) => {
            assert!(recoverable);
            let keep = erased.not();
            assert_eq!(cw.bits().and(&keep), values.and(&keep));
        }
        Ok(BecDecoded::Ambiguous { rank }) => {
            assert!(!recoverable);
            assert!((rank as u64) < params.dim());
        }
        Err(Error::Inconsistent) => {}
        Err(e) => panic!("unexpected error {e}"),
    }
});
