//! Replays the checked-in fuzz corpus with the fuzz targets' checks, so the
//! seeds stay meaningful on a stable toolchain.

use std::fs;
use std::path::Path;

use p1variety::{parse_polynomial, parse_problem, FieldSpec, VariableLayout};

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut seeds: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let path = e.unwrap().path();
            (path.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&path).unwrap())
        })
        .collect();
    seeds.sort();
    seeds
}

#[test]
fn polynomial_seeds_round_trip() {
    let mut parsed = 0;
    for (name, data) in corpus("parse_polynomial") {
        let (&sel, rest) = data.split_first().unwrap();
        let text = std::str::from_utf8(rest).unwrap();
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
        let result = parse_polynomial(text, &layout, field);
        if name.starts_with("bad_") || name.starts_with("implicit_") {
            assert!(result.is_err(), "{name} should be rejected");
            continue;
        }
        let f = result.unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = f.to_text(&layout);
        assert_eq!(parse_polynomial(&printed, &layout, field).unwrap(), f, "{name}");
        parsed += 1;
    }
    assert_eq!(parsed, 5);
}

#[test]
fn problem_seeds() {
    for (name, data) in corpus("parse_problem") {
        let text = std::str::from_utf8(&data).unwrap();
        let result = parse_problem(text);
        assert_eq!(result.is_ok(), !name.starts_with("missing_"), "{name}: {result:?}");
    }
}
