//! How the center of the simply connected group acts on representations,
//! and which quotients they factor through.

use picmod::lie_core::{Family, RootSystem};
use picmod::rep_algebra::{center_character, RepExpr};

fn main() {
    let a5 = RootSystem::new(Family::A, 5).expect("supported rank");
    for s in [1u32, 2, 3, 6] {
        for p in 1..=s {
            let rho = RepExpr::sym_ext(p, s);
            let ch = center_character(&a5, &rho).expect("isotypic");
            let quotients: Vec<u64> = [2, 3, 6]
                .into_iter()
                .filter(|&k| ch.kills_cyclic_subgroup(k))
                .collect();
            println!(
                "A5 {rho}: residue {:?} mod {:?}, factors through SL6/μ_k for k in {quotients:?}",
                ch.residues, ch.moduli
            );
        }
    }
    for l in [4, 5] {
        let d = RootSystem::new(Family::D, l).expect("supported rank");
        for text in ["std", "sym(2,std)", "adj"] {
            let rho: RepExpr = text.parse().expect("valid expression");
            let ch = center_character(&d, &rho).expect("isotypic");
            println!("D{l} {rho}: {:?} mod {:?}", ch.residues, ch.moduli);
        }
    }
}
