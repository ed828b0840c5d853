#![no_main]

use involution::params::Parameters;
use involution::parse::{parse_f64_list, parse_rational_list, rational_to_f64};
use involution::Error;
use libfuzzer_sys::fuzz_target;
use num_rational::BigRational;
use num_traits::Zero;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_f64_list(text);
    let Ok(list) = parse_rational_list(text) else { return };
    match Parameters::new(list.clone(), BigRational::zero()) {
        Ok(p) => assert_eq!(p.alphas(), &list[..]),
        // Distinct rationals may still round to the same double.
        Err(Error::DuplicateAlpha { i, j }) => assert_eq!(rational_to_f64(&list[i - 1]), rational_to_f64(&list[j - 1])),
        Err(Error::InvalidArgument(_)) => assert!(list.iter().any(|q| !rational_to_f64(q).is_finite())),
        Err(Error::TooFewCoordinates { .. }) => assert!(list.len() < 2),
        Err(e) => panic!("unexpected error {e}"),
    }
});
