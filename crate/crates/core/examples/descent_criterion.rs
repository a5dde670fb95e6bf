//! When does the r-th power of a line bundle descend along a finite
//! Heisenberg action? The criterion against brute force.

use picmod::finite_descent::{
    descent_at_power, descent_bruteforce, form_power, restrict_to_torsion,
    upper_triangular_cocycle, weil_form,
};

fn main() {
    for (n, g, k) in [
        (2, 1, 1),
        (2, 2, 2),
        (2, 2, 3),
        (3, 1, 1),
        (4, 1, 1),
        (4, 1, 2),
        (6, 1, 1),
    ] {
        let e = form_power(&weil_form(n, g), k);
        let phi = upper_triangular_cocycle(&e);
        for r in [n, 2 * n] {
            let criterion = descent_at_power(&e, r).expect("r annihilates the group");
            let brute = descent_bruteforce(&phi, r).expect("small group");
            println!(
                "e_{n}^{k} on (Z/{n})^{}: L^{r} descends {} (brute force {brute})",
                2 * g,
                criterion.descends_at_r
            );
        }
    }
    let restricted = restrict_to_torsion(&weil_form(6, 1), 3).expect("3 divides 6");
    println!(
        "e_6 on the 3-torsion: {restricted}, e_3^2 = {}",
        form_power(&weil_form(3, 1), 2)
    );
}
