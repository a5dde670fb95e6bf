//! Root data for each supported family at small rank.

use picmod::lie_core::{Family, RootSystem};

fn main() {
    for (family, rank) in [
        (Family::A, 2),
        (Family::B, 3),
        (Family::C, 3),
        (Family::D, 4),
        (Family::G2, 2),
    ] {
        let rs = RootSystem::new(family, rank).expect("supported rank");
        let name = if family == Family::G2 {
            "G2".to_string()
        } else {
            format!("{family}{rank}")
        };
        println!(
            "{name}: |Δ⁺| = {}, dim g = {}, h∨ = {}",
            rs.positive_roots.len(),
            rs.lie_algebra_dim(),
            rs.dual_coxeter()
        );
        for row in rs.cartan_matrix() {
            println!("    {row:?}");
        }
        let omega1 = rs.weight_from_labels(&{
            let mut labels = vec![0; rank];
            labels[0] = 1;
            labels
        });
        let dim = rs.weyl_dim(&omega1.expect("dominant")).expect("dominant");
        println!("    dim V(ω₁) = {dim}");
    }
}
