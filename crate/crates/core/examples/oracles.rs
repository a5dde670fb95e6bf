//! Brute-force checks: descent criterion, determinant generators from
//! Dynkin indices, theta characteristic parity, and the F4 constant.

use picmod::oracles::{
    embedding_from_basis, f4_branching_constant, g2_parity_oracle, quadratic_refinement,
    rho_p_sum_report, verify_descent_dichotomy, verify_gcd_generator, DEFAULT_SEED,
};
use picmod::picard_tables::GroupSpec;

fn main() {
    let dichotomy = verify_descent_dichotomy(DEFAULT_SEED);
    println!(
        "dichotomy: {} cases, {} mismatches",
        dichotomy.cases,
        dichotomy.failures.len()
    );

    for spec in [
        GroupSpec::pgl(7),
        GroupSpec::PSp(6),
        GroupSpec::PSO(10),
        GroupSpec::SLmod(6, 3),
    ] {
        let r = verify_gcd_generator(&spec).expect("supported group");
        let witnesses: Vec<String> = r
            .witnesses
            .iter()
            .map(|w| format!("{}={}", w.rep, w.index))
            .collect();
        println!(
            "{spec}: e_G = {} (table {}), from {}",
            r.e_g,
            r.table_det_unit,
            witnesses.join(", ")
        );
    }

    for (r, s) in [(4, 2), (6, 3), (6, 6)] {
        let rep = rho_p_sum_report(r, s).expect("r ≤ 9");
        println!(
            "r={r} s={s}: indices {:?}, Σ p·d = {} (expected {}), gcd {} | {}",
            rep.indices, rep.weighted_sum, rep.expected_sum, rep.gcd, rep.bound
        );
    }

    let q = quadratic_refinement(2, 0b0101);
    for (basis, chi) in [([1, 2, 4], 4), ([1, 4, 2], 4), ([3, 12, 5], 1)] {
        let rep = g2_parity_oracle(2, &embedding_from_basis(basis), &q, chi).expect("valid input");
        println!(
            "basis {basis:?} χ={chi}: parity {}, isotropic {}",
            rep.parity, rep.isotropic
        );
    }

    let f4 = f4_branching_constant().expect("D4 is supported");
    println!(
        "F4: constant {} = {} · {}",
        f4.constant, f4.ratio, f4.spin8_standard_index
    );
}
