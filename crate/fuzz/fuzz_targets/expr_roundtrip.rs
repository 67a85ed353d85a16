#![no_main]

use holosemi::parse;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(e) = parse(s) else { return };
    let printed = e.to_string();
    let back = parse(&printed).unwrap_or_else(|err| panic!("printed form {printed:?} of {s:?} does not parse: {err}"));
    assert_eq!(back, e.normalize(), "round trip of {s:?} through {printed:?}");
});
