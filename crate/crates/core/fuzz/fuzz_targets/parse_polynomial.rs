#![no_main]

use libfuzzer_sys::fuzz_target;
use p1variety::{parse_polynomial, FieldSpec, VariableLayout};

// The first byte picks the layout, n and field; the rest is the expression.
// Anything that parses must print and reparse to the same polynomial.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let n = 1 + (sel as usize & 3);
    let layout = match (sel >> 2) % 3 {
        0 => VariableLayout::affine(n),
        1 => VariableLayout::homogeneous(n),
        _ => VariableLayout::multiproj(n),
    };
    let field = match (sel >> 4) % 3 {
        0 => FieldSpec::RATIONALS,
        1 => FieldSpec::prime(5).unwrap(),
        _ => FieldSpec::prime(7).unwrap(),
    };
    if let Ok(f) = parse_polynomial(text, &layout, field) {
        let printed = f.to_text(&layout);
        let again = parse_polynomial(&printed, &layout, field).expect("printed form parses");
        assert_eq!(again, f, "round trip through {printed:?}");
    }
});
