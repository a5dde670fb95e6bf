//! Brute-force checks of the descent criterion, of determinant generators
//! against Dynkin indices, and of the parity argument for `G2`.

use num::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::finite_descent::{
    canonical_descends, commutator_form, descent_at_power, descent_bruteforce, form_power,
    hecke_det_character, random_alternating_form, random_symmetric_form, restrict_to_torsion,
    upper_triangular_cocycle, weil_form, AlternatingForm, DescentError, FinAbGroup, QZScalar,
};
use crate::lie_core::{Family, RootSystem};
use crate::picard_tables::{coarse_picard, epsilon_g, DegreeLabel, GroupSpec, Unit};
use crate::rep_algebra::{center_character, dynkin_index, RepError, RepExpr};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("q is not a quadratic refinement of the Weil pairing")]
    NotQuadraticRefinement,
    #[error("the embedding is not a group homomorphism")]
    NotHomomorphism,
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Descent(#[from] DescentError),
}

impl OracleError {
    pub fn name(&self) -> &'static str {
        match self {
            OracleError::NotQuadraticRefinement => "NotQuadraticRefinement",
            OracleError::NotHomomorphism => "NotHomomorphism",
            OracleError::InvalidInput(_) => "InvalidInput",
            OracleError::Rep(e) => e.name(),
            OracleError::Descent(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyCase {
    pub group: Vec<u64>,
    pub form: String,
    pub r: u64,
    pub criterion: bool,
    /// Brute-force answers: first for the upper triangular cocycle, then for
    /// the re-randomized ones.
    pub bruteforce: Vec<bool>,
}

impl DichotomyCase {
    pub fn agrees(&self) -> bool {
        self.bruteforce.iter().all(|&b| b == self.criterion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyReport {
    pub cases: usize,
    pub cocycles_per_case: usize,
    pub failures: Vec<DichotomyCase>,
}

/// Compares the criterion with brute force for one form at power `r`, using
/// the upper triangular cocycle and `alternatives` cocycles obtained by
/// adding random symmetric forms.
pub fn dichotomy_case(
    form: &AlternatingForm,
    label: &str,
    r: u64,
    alternatives: usize,
    rng: &mut ChaCha8Rng,
) -> DichotomyCase {
    let criterion = descent_at_power(form, r)
        .expect("grid forms satisfy the hypotheses")
        .descends_at_r;
    let base = upper_triangular_cocycle(form);
    let mut cocycles = vec![base.clone()];
    for _ in 0..alternatives {
        let alt = base
            .plus(&random_symmetric_form(&form.group, rng))
            .expect("same group");
        debug_assert_eq!(commutator_form(&alt), *form);
        cocycles.push(alt);
    }
    let bruteforce = cocycles
        .iter()
        .map(|phi| descent_bruteforce(phi, r).expect("grid groups are below the cap"))
        .collect();
    DichotomyCase {
        group: form.group.orders.clone(),
        form: label.to_string(),
        r,
        criterion,
        bruteforce,
    }
}

/// Every alternating form on `group`.
pub fn all_alternating_forms(group: &FinAbGroup) -> Vec<AlternatingForm> {
    let n = group.rank();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut forms = vec![AlternatingForm::zero(group.clone())];
    for (i, j) in pairs {
        let g = group.orders[i].gcd(&group.orders[j]) as i64;
        forms = forms
            .into_iter()
            .flat_map(|e| {
                (0..g).map(move |k| {
                    let mut e = e.clone();
                    e.matrix[i][j] = QZScalar::new(k, g);
                    e.matrix[j][i] = QZScalar::new(-k, g);
                    e
                })
            })
            .collect();
    }
    forms
}

/// Forms checked by [`verify_descent_dichotomy`]: every form on `(Z/2)²`
/// and `(Z/2)⁴`, the powers of the Weil pairing on `(Z/n)^{2g}` for
/// `n ∈ {3, 4}` and `g ≤ 2`, and random forms on `(Z/4)²`, `(Z/3)⁴` and
/// `(Z/2)² × (Z/4)²`.
pub fn dichotomy_grid(rng: &mut ChaCha8Rng) -> Vec<(AlternatingForm, String)> {
    let mut forms: Vec<(AlternatingForm, String)> = Vec::new();
    for k in [2, 4] {
        let group = FinAbGroup::homogeneous(2, k);
        for (i, e) in all_alternating_forms(&group).into_iter().enumerate() {
            forms.push((e, format!("form #{i} on (Z/2)^{k}")));
        }
    }
    for n in [3u64, 4] {
        for g in 1..=2 {
            let w = weil_form(n, g);
            for k in 0..n as i64 {
                forms.push((form_power(&w, k), format!("e_{n}^{k} (g={g})")));
            }
        }
    }
    let random_groups = [
        (FinAbGroup::homogeneous(4, 2), "(Z/4)^2", 25),
        (FinAbGroup::new(vec![2, 2, 4, 4]), "(Z/2)^2x(Z/4)^2", 25),
        (FinAbGroup::homogeneous(3, 4), "(Z/3)^4", 4),
    ];
    for (group, name, count) in random_groups {
        for i in 0..count {
            forms.push((
                random_alternating_form(&group, rng),
                format!("random #{i} on {name}"),
            ));
        }
    }
    forms
}

/// Runs [`dichotomy_case`] on every form of [`dichotomy_grid`] at `r` equal
/// to the exponent of the group and twice it, with 5 alternative cocycles.
pub fn verify_descent_dichotomy(seed: u64) -> DichotomyReport {
    const ALTERNATIVES: usize = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let forms = dichotomy_grid(&mut rng);

    let mut cases = 0;
    let mut failures = Vec::new();
    for (form, label) in &forms {
        let n = form.group.exponent();
        for r in [n, 2 * n] {
            let case = dichotomy_case(form, label, r, ALTERNATIVES, &mut rng);
            cases += 1;
            if !case.agrees() {
                failures.push(case);
            }
        }
    }
    DichotomyReport {
        cases,
        cocycles_per_case: ALTERNATIVES + 1,
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub rep: String,
    pub index: u64,
    /// Whether the quotienting subgroup acts trivially, so the
    /// representation factors through the group.
    pub factors: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdReport {
    pub group: GroupSpec,
    pub witnesses: Vec<Witness>,
    pub gcd: u64,
    pub standard_index: u64,
    pub e_g: u64,
    pub table_det_unit: Unit,
    /// Whether determinant bundles are known to generate, so that `e_G`
    /// must equal the table value.
    pub determined: bool,
    pub agrees: bool,
}

fn witnesses_for(spec: &GroupSpec) -> Result<Vec<RepExpr>, OracleError> {
    let out = match *spec {
        GroupSpec::SLmod(r, s) if r == s => vec![
            RepExpr::Adj,
            RepExpr::tensor(
                RepExpr::sym(2, RepExpr::Std),
                RepExpr::ext(r as u32 - 2, RepExpr::Std),
            ),
        ],
        GroupSpec::SLmod(_, s) => std::iter::once(RepExpr::Adj)
            .chain((1..=s as u32).map(|p| RepExpr::sym_ext(p, s as u32)))
            .collect(),
        GroupSpec::PSp(_) => vec![RepExpr::Adj, RepExpr::ext(2, RepExpr::Std)],
        GroupSpec::PSO(_) => vec![RepExpr::Adj, RepExpr::sym(2, RepExpr::Std)],
        _ => {
            return Err(OracleError::InvalidInput(format!(
                "{spec} is not one of PGL, PSp, PSO, SLmod"
            )))
        }
    };
    Ok(out)
}

/// Whether the kernel of the cover onto `spec` acts trivially on `rho`.
fn factors_through(spec: &GroupSpec, rs: &RootSystem, rho: &RepExpr) -> Result<bool, OracleError> {
    let ch = match center_character(rs, rho) {
        Ok(ch) => ch,
        Err(RepError::NotIsotypic(_)) => return Ok(false),
        Err(e) => return Err(e.into()),
    };
    Ok(match *spec {
        GroupSpec::SLmod(_, s) => ch.kills_cyclic_subgroup(s),
        _ => ch.is_trivial(),
    })
}

/// `gcd(d_ρ)/d_σ` over the witness representations that factor through
/// `spec`, compared with the determinant unit of the table at degree 0.
pub fn verify_gcd_generator(spec: &GroupSpec) -> Result<GcdReport, OracleError> {
    spec.validate()
        .map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let (family, rank) = spec.cover();
    let rs = RootSystem::new(family, rank).map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let mut witnesses = Vec::new();
    let mut gcd = 0u64;
    for rho in witnesses_for(spec)? {
        let index = dynkin_index(&rs, &rho)?;
        let factors = factors_through(spec, &rs, &rho)?;
        if factors {
            gcd = gcd.gcd(&index);
        }
        witnesses.push(Witness {
            rep: rho.to_string(),
            index,
            factors,
        });
    }
    let standard_index = spec.standard_index();
    let e_g = gcd / standard_index;
    let identity = DegreeLabel::identity(spec);
    let table_det_unit = coarse_picard(spec, &identity, 2)
        .ok()
        .and_then(|c| c.det_unit_exponent)
        .unwrap_or(Unit::Unknown);
    let determined = match *spec {
        GroupSpec::SLmod(r, s) => r == s || s.gcd(&(r / s)) == 1,
        _ => epsilon_g(spec).is_ok(),
    };
    Ok(GcdReport {
        group: *spec,
        witnesses,
        gcd,
        standard_index,
        e_g,
        table_det_unit,
        determined,
        agrees: table_det_unit == Unit::Exact(e_g),
    })
}

/// PGL(r) for r ≤ 9, PSp(2l) and PSO(2l) for 2 ≤ l ≤ 6, and SL_r/μ_s for
/// s a proper divisor of r ≤ 9.
pub fn gcd_grid() -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for r in 2..=9 {
        out.push(GroupSpec::pgl(r));
        for s in 2..r {
            if r % s == 0 {
                out.push(GroupSpec::SLmod(r, s));
            }
        }
    }
    for l in 2..=6 {
        out.push(GroupSpec::PSp(2 * l));
    }
    for l in 2..=6 {
        out.push(GroupSpec::PSO(2 * l));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoPSumReport {
    pub r: u64,
    pub s: u64,
    /// `d_{ρ_p}` for `p = 1..s`, where `ρ_p = S^p ⊗ Λ^{s−p}`.
    pub indices: Vec<u64>,
    /// `Σ p·d_{ρ_p}`.
    pub weighted_sum: u64,
    /// `(−1)^s s²`, the value the sum was expected to take.
    pub expected_sum: i64,
    pub sum_matches: bool,
    /// `gcd(2r, d_{ρ_1}, …, d_{ρ_s})`.
    pub gcd: u64,
    /// `s·gcd(2r/s, s)`.
    pub bound: u64,
    pub gcd_divides_bound: bool,
}

pub fn rho_p_sum_report(r: u64, s: u64) -> Result<RhoPSumReport, OracleError> {
    if !(2..=9).contains(&r) || s == 0 || r % s != 0 {
        return Err(OracleError::InvalidInput(format!(
            "need 2 ≤ r ≤ 9 and s dividing r, got r={r} s={s}"
        )));
    }
    let rs = RootSystem::new(Family::A, r as usize - 1)
        .map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let indices = (1..=s as u32)
        .map(|p| dynkin_index(&rs, &RepExpr::sym_ext(p, s as u32)))
        .collect::<Result<Vec<_>, _>>()?;
    let weighted_sum = indices.iter().zip(1..).map(|(d, p)| p * d).sum();
    let expected_sum = if s % 2 == 0 { 1 } else { -1 } * (s * s) as i64;
    let gcd = indices.iter().fold(2 * r, |a, d| a.gcd(d));
    let bound = s * (2 * r / s).gcd(&s);
    Ok(RhoPSumReport {
        r,
        s,
        indices,
        weighted_sum,
        expected_sum,
        sum_matches: weighted_sum as i64 == expected_sum,
        gcd,
        bound,
        gcd_divides_bound: bound % gcd == 0,
    })
}

/// A function on `(F₂)^{2g}` given by its values, elements encoded as bit
/// masks with coordinates `x_{2i}, x_{2i+1}` forming hyperbolic pairs.
pub type F2Function = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub r: u64,
    pub s: u64,
    pub genus: usize,
    /// `e_r` restricted to the `s`-torsion, on the generators `(r/s)·e_i`.
    pub restriction: AlternatingForm,
    /// `e_s^{r/s}`.
    pub expected: AlternatingForm,
    pub equal: bool,
}

pub fn restriction_report(r: u64, s: u64, genus: usize) -> Result<RestrictionReport, OracleError> {
    let restriction = restrict_to_torsion(&weil_form(r, genus), s)?;
    let expected = form_power(&weil_form(s, genus), (r / s) as i64);
    Ok(RestrictionReport {
        r,
        s,
        genus,
        equal: restriction == expected,
        restriction,
        expected,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeckeReport {
    pub r: u64,
    pub s: u64,
    pub h: u64,
    pub det_character: i8,
    /// `(−1)^{h(s−1)r/s}`.
    pub expected_sign: i8,
    pub canonical_descends: bool,
}

pub fn hecke_report(r: u64, s: u64, h: u64) -> Result<HeckeReport, OracleError> {
    let det_character = hecke_det_character(r, s, h)?;
    let odd = (h % 2) * ((s - 1) % 2) * ((r / s) % 2) == 1;
    Ok(HeckeReport {
        r,
        s,
        h,
        det_character,
        expected_sign: if odd { -1 } else { 1 },
        canonical_descends: canonical_descends(r, s, h)?,
    })
}

/// The Weil pairing on `(F₂)^{2g}`.
pub fn e2(genus: usize, x: u64, y: u64) -> u8 {
    let mut acc = 0;
    for i in 0..genus {
        let (a0, a1) = ((x >> (2 * i)) & 1, (x >> (2 * i + 1)) & 1);
        let (b0, b1) = ((y >> (2 * i)) & 1, (y >> (2 * i + 1)) & 1);
        acc ^= (a0 & b1) ^ (a1 & b0);
    }
    acc as u8
}

/// The quadratic refinement `Σ x_{2i}x_{2i+1} + ⟨ℓ, x⟩` of `e₂`. Every
/// refinement is of this form for a unique `ℓ`.
pub fn quadratic_refinement(genus: usize, linear: u64) -> F2Function {
    (0..1u64 << (2 * genus))
        .map(|x| {
            let mut q = (x & linear).count_ones() as u64 & 1;
            for i in 0..genus {
                q ^= ((x >> (2 * i)) & 1) & ((x >> (2 * i + 1)) & 1);
            }
            q as u8
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub parity: u8,
    pub isotropic: bool,
    pub injective_on_kernel: bool,
    /// `parity == 0` exactly when the image is isotropic.
    pub consistent: bool,
}

/// For `f: (F₂)³ → J₂ = (F₂)^{2g}` (given on all 8 elements), a quadratic
/// refinement `q` and a nonzero character `χ = ⟨c, ·⟩` of `(F₂)³`, computes
/// `Σ_{χ(v) = −1} q(f(v))` and whether `e₂` vanishes on `f(Ker χ)`.
pub fn g2_parity_oracle(
    genus: usize,
    embedding: &[u64; 8],
    q: &[u8],
    chi: u8,
) -> Result<ParityReport, OracleError> {
    let size = 1u64 << (2 * genus);
    if q.len() as u64 != size || embedding.iter().any(|&v| v >= size) {
        return Err(OracleError::InvalidInput(format!(
            "values must lie in (F2)^{}",
            2 * genus
        )));
    }
    if chi == 0 || chi >= 8 {
        return Err(OracleError::InvalidInput(
            "χ must be a nonzero element of (F2)^3".into(),
        ));
    }
    for x in 0..size {
        for y in 0..size {
            if q[(x ^ y) as usize] != q[x as usize] ^ q[y as usize] ^ e2(genus, x, y) {
                return Err(OracleError::NotQuadraticRefinement);
            }
        }
    }
    for u in 0..8usize {
        for v in 0..8usize {
            if embedding[u ^ v] != embedding[u] ^ embedding[v] {
                return Err(OracleError::NotHomomorphism);
            }
        }
    }
    let in_kernel = |v: usize| (v as u8 & chi).count_ones() % 2 == 0;
    let parity = (0..8)
        .filter(|&v| !in_kernel(v))
        .fold(0, |acc, v| acc ^ q[embedding[v] as usize]);
    let kernel: Vec<usize> = (0..8).filter(|&v| in_kernel(v)).collect();
    let isotropic = kernel.iter().all(|&u| {
        kernel
            .iter()
            .all(|&v| e2(genus, embedding[u], embedding[v]) == 0)
    });
    let mut images: Vec<u64> = kernel.iter().map(|&v| embedding[v]).collect();
    images.sort_unstable();
    images.dedup();
    Ok(ParityReport {
        parity,
        isotropic,
        injective_on_kernel: images.len() == kernel.len(),
        consistent: (parity == 0) == isotropic,
    })
}

/// The homomorphism `(F₂)³ → (F₂)^{2g}` sending the basis to `images`.
pub fn embedding_from_basis(images: [u64; 3]) -> [u64; 8] {
    let mut out = [0u64; 8];
    for (v, slot) in out.iter_mut().enumerate() {
        for (i, img) in images.iter().enumerate() {
            if v >> i & 1 == 1 {
                *slot ^= img;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct F4Report {
    /// Dynkin index of the 26-dimensional representation of `F4` restricted
    /// to `Spin_8`.
    pub constant: u64,
    pub spin8_standard_index: u64,
    pub ratio: u64,
    /// The ratio is odd, so `D` is not divisible by 2.
    pub not_divisible_by_2: bool,
}

pub fn f4_branching_constant() -> Result<F4Report, OracleError> {
    const CONSTANT: u64 = 6;
    let d4 = RootSystem::new(Family::D, 4).map_err(|e| OracleError::InvalidInput(e.to_string()))?;
    let spin8_standard_index = dynkin_index(&d4, &RepExpr::Std)?;
    let ratio = CONSTANT / spin8_standard_index;
    Ok(F4Report {
        constant: CONSTANT,
        spin8_standard_index,
        ratio,
        not_divisible_by_2: CONSTANT % spin8_standard_index == 0 && ratio % 2 == 1,
    })
}
