#![no_main]

use holosemi::{parse, taylor};
use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(e) = parse(s) else { return };
    // evaluation may fail with a pole or overflow, but must not panic
    for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, -0.25), Complex64::new(-0.9, 0.1)] {
        let _ = e.eval(z);
        let _ = taylor(&e, z, 4);
    }
    let _ = e.derivative().eval(Complex64::new(0.1, 0.2));
});
