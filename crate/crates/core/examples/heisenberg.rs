//! Arithmetic in the Heisenberg extension attached to a bilinear cocycle.

use picmod::finite_descent::{
    commutator_form, heisenberg_inverse, heisenberg_multiply, section_power,
    upper_triangular_cocycle, weil_form, HeisenbergElement, QZScalar,
};

fn main() {
    let e = weil_form(4, 1);
    let phi = upper_triangular_cocycle(&e);
    println!("e = {e}, commutator of φ = {}", commutator_form(&phi));

    let x = HeisenbergElement::new(vec![1, 0], QZScalar::zero());
    let y = HeisenbergElement::new(vec![0, 1], QZScalar::zero());
    let xy = heisenberg_multiply(&phi, &x, &y).expect("same group");
    let yx = heisenberg_multiply(&phi, &y, &x).expect("same group");
    println!("xy = ({:?}, {}), yx = ({:?}, {})", xy.g, xy.t, yx.g, yx.t);

    let inv = heisenberg_inverse(&phi, &xy);
    let one = heisenberg_multiply(&phi, &xy, &inv).expect("same group");
    println!("xy · (xy)⁻¹ = ({:?}, {})", one.g, one.t);

    for alpha in [[1, 0], [1, 1], [2, 3]] {
        for r in [4, 8] {
            let t = section_power(&phi, &alpha, r).expect("r annihilates α");
            println!("σ({alpha:?})^{r} = {t}");
        }
    }
}
