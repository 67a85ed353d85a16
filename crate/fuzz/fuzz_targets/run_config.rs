#![no_main]

use clap::Parser as _;
use holosemi_cli::args::{config_to_args, Cli};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(extra) = config_to_args(s) else { return };
    for sub in ["eval", "commute", "check-generator"] {
        let mut argv = vec!["holosemi".to_string(), sub.to_string()];
        argv.extend(extra.iter().cloned());
        let _ = Cli::try_parse_from(argv);
    }
});
