#![no_main]

use involution::operators::{render_lines, DiffOp};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else { return };
    let n = 1 + usize::from(first % 4);
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(op) = DiffOp::parse(n, text) {
        assert_eq!(DiffOp::parse(n, &op.to_string()).unwrap(), op);
        assert_eq!(DiffOp::parse_lines(n, &render_lines(&op)).unwrap(), op);
    }
    let _ = DiffOp::parse_lines(n, text);
});
