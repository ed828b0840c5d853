#![no_main]

use involution::parse::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_rational(text) {
        let again = parse_rational(&format_rational(&q)).expect("canonical form reparses");
        assert_eq!(q, again);
    }
});
