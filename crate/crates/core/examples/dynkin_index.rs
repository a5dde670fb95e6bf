//! Dynkin indices of a few representations built from the grammar.

use picmod::lie_core::{Family, RootSystem};
use picmod::rep_algebra::{dimension, dynkin_index, RepExpr};

fn main() {
    let cases = [
        (Family::A, 6, "sym(2,std)*ext(5,std)"),
        (Family::A, 5, "sym(3,std)"),
        (Family::C, 4, "ext(2,std)"),
        (Family::D, 5, "sym(2,std)"),
        (Family::G2, 2, "std"),
        (Family::B, 3, "adj + std"),
    ];
    for (family, rank, text) in cases {
        let rs = RootSystem::new(family, rank).expect("supported rank");
        let name = if family == Family::G2 {
            "G2".to_string()
        } else {
            format!("{family}{rank}")
        };
        let rho: RepExpr = text.parse().expect("valid expression");
        println!(
            "{name} {rho}: dim {}, index {}",
            dimension(&rs, &rho).expect("below the cap"),
            dynkin_index(&rs, &rho).expect("below the cap")
        );
    }
    match "sym(2 std)".parse::<RepExpr>() {
        Ok(_) => unreachable!(),
        Err(e) => println!("parse error: {e}"),
    }
}
