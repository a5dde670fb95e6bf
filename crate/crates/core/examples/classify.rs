//! Picard groups of the moduli stack and of the coarse moduli space for
//! the adjoint classical groups and a few others.

use picmod::picard_tables::{classify, components, DegreeLabel, GroupSpec};

fn main() {
    let specs = [
        GroupSpec::pgl(4),
        GroupSpec::PSp(6),
        GroupSpec::PSO(8),
        GroupSpec::SLmod(6, 2),
        GroupSpec::Spin(4),
        GroupSpec::HalfSpin(16),
        GroupSpec::G2,
    ];
    for spec in specs {
        for degree in components(&spec).expect("valid group") {
            let report = classify(&spec, &degree, 2).expect("valid degree");
            println!(
                "{spec} δ={degree}: torsion {:?}, stack D^{}, coarse {:?} theta {:?} det {:?} {:?}",
                report.stack.torsion_invariants,
                report.stack.det_generator_exponent,
                report.coarse.structure,
                report.coarse.theta_unit_exponent.map(|u| u.to_string()),
                report.coarse.det_unit_exponent.map(|u| u.to_string()),
                report.caveats
            );
        }
    }
    let spec = GroupSpec::PSO(8);
    let degree = DegreeLabel::parse(&spec, "-eps").expect("valid degree");
    let json = serde_json::to_string_pretty(&classify(&spec, &degree, 2).expect("valid degree"))
        .expect("serializes");
    println!("{json}");
}
