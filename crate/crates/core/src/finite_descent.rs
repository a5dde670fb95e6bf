//! Descent of line bundles along actions of finite abelian groups.
//!
//! Roots of unity are written additively as rationals mod 1, so `−1` is
//! `1/2`. A group `H = ∏ Z/n_i` acting on a line bundle `L` gives a central
//! extension of `H` by `C*` whose commutator is an alternating form `e`.
//! `L^r` descends exactly when `r` is odd or `e^{r/2}` is trivial, given that
//! `r` kills `H` and every element of `H` has a fixed point.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::rational::Ratio;
use num::{Integer, Zero};
use rand::Rng;
use serde::{Serialize, Serializer};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescentError {
    #[error("{s} does not divide {r}")]
    NotADivisor { s: u64, r: u64 },
    #[error("elements and cocycle live on different groups")]
    GroupMismatch,
    #[error("{r} does not annihilate the element")]
    NotAnnihilated { r: u64 },
    #[error("r = {0} is odd")]
    OddR(u64),
    #[error("{0}")]
    PreconditionViolated(String),
    #[error("group of order {size} exceeds the enumeration cap {cap}")]
    GroupTooLarge { size: u64, cap: u64 },
    #[error("{0}")]
    InvalidForm(String),
}

impl DescentError {
    pub fn name(&self) -> &'static str {
        match self {
            DescentError::NotADivisor { .. } => "NotADivisor",
            DescentError::GroupMismatch => "GroupMismatch",
            DescentError::NotAnnihilated { .. } => "NotAnnihilated",
            DescentError::OddR(_) => "OddR",
            DescentError::PreconditionViolated(_) => "PreconditionViolated",
            DescentError::GroupTooLarge { .. } => "GroupTooLarge",
            DescentError::InvalidForm(_) => "InvalidForm",
        }
    }
}

/// An element of `Q/Z`, kept in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QZScalar(Ratio<i64>);

impl QZScalar {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let d = den.abs();
        Self(Ratio::new((num * den.signum()).rem_euclid(d), d))
    }

    pub fn zero() -> Self {
        Self(Ratio::zero())
    }

    pub fn half() -> Self {
        Self::new(1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// Order as a root of unity.
    pub fn order(&self) -> u64 {
        self.denom() as u64
    }

    pub fn times(&self, k: i64) -> Self {
        let d = self.denom();
        Self::new((self.numer() * k.rem_euclid(d)) % d, d)
    }

    /// `+1` for `0`, `−1` for `1/2`; `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        if self.is_zero() {
            Some(1)
        } else if *self == Self::half() {
            Some(-1)
        } else {
            None
        }
    }
}

impl Add for QZScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Self::new(*s.numer(), *s.denom())
    }
}

impl Sub for QZScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QZScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.numer(), self.denom())
    }
}

impl std::iter::Sum for QZScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl fmt::Display for QZScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for QZScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type Element = Vec<u64>;

/// `∏ Z/orders[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinAbGroup {
    pub orders: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        assert!(
            orders.iter().all(|&n| n >= 1),
            "cyclic orders must be positive"
        );
        Self { orders }
    }

    pub fn trivial() -> Self {
        Self { orders: vec![] }
    }

    /// `(Z/n)^k`.
    pub fn homogeneous(n: u64, k: usize) -> Self {
        Self::new(vec![n; k])
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &b| a.lcm(&b))
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.rank() && x.iter().zip(&self.orders).all(|(a, n)| a < n)
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Element {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), n)| (a + b) % n)
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Element {
        x.iter()
            .zip(&self.orders)
            .map(|(a, n)| (n - a) % n)
            .collect()
    }

    pub fn scale(&self, k: u64, x: &[u64]) -> Element {
        x.iter()
            .zip(&self.orders)
            .map(|(a, n)| ((*a as u128 * k as u128) % *n as u128) as u64)
            .collect()
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> Element {
        let mut x = self.zero();
        if self.orders[i] > 1 {
            x[i] = 1;
        }
        x
    }

    /// Every element, in lexicographic order.
    pub fn elements(&self) -> Vec<Element> {
        let mut out = vec![self.zero()];
        for (i, &n) in self.orders.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|x| {
                    (0..n).map(move |a| {
                        let mut y = x.clone();
                        y[i] = a;
                        y
                    })
                })
                .collect();
        }
        out
    }
}

fn check_compatible(group: &FinAbGroup, matrix: &[Vec<QZScalar>]) -> Result<(), DescentError> {
    let n = group.rank();
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(DescentError::InvalidForm(format!("matrix must be {n}×{n}")));
    }
    for i in 0..n {
        for j in 0..n {
            let g = group.orders[i].gcd(&group.orders[j]) as i64;
            if !matrix[i][j].times(g).is_zero() {
                return Err(DescentError::InvalidForm(format!(
                    "entry ({i},{j}) = {} is not killed by the generator orders",
                    matrix[i][j]
                )));
            }
        }
    }
    Ok(())
}

fn bilinear_eval(matrix: &[Vec<QZScalar>], x: &[u64], y: &[u64]) -> QZScalar {
    let mut acc = QZScalar::zero();
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            if b != 0 {
                acc = acc + matrix[i][j].times((a * b) as i64);
            }
        }
    }
    acc
}

/// A bilinear alternating form `H × H → Q/Z`, given on generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlternatingForm {
    pub group: FinAbGroup,
    pub matrix: Vec<Vec<QZScalar>>,
}

impl AlternatingForm {
    pub fn new(group: FinAbGroup, matrix: Vec<Vec<QZScalar>>) -> Result<Self, DescentError> {
        check_compatible(&group, &matrix)?;
        for i in 0..group.rank() {
            if !matrix[i][i].is_zero() {
                return Err(DescentError::InvalidForm(format!(
                    "diagonal entry {i} is nonzero"
                )));
            }
            for j in 0..i {
                if matrix[i][j] != -matrix[j][i] {
                    return Err(DescentError::InvalidForm(format!(
                        "entries ({i},{j}) and ({j},{i}) are not opposite"
                    )));
                }
            }
        }
        Ok(Self { group, matrix })
    }

    pub fn zero(group: FinAbGroup) -> Self {
        let n = group.rank();
        Self {
            group,
            matrix: vec![vec![QZScalar::zero(); n]; n],
        }
    }

    pub fn eval(&self, x: &[u64], y: &[u64]) -> QZScalar {
        bilinear_eval(&self.matrix, x, y)
    }
}

impl fmt::Display for AlternatingForm {
    /// Rows of the matrix separated by `;`, e.g. `[0 1/2; 1/2 0]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.matrix.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("]")
    }
}

/// A bilinear form `φ` with no symmetry condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BilinearCocycle {
    pub group: FinAbGroup,
    pub matrix: Vec<Vec<QZScalar>>,
}

impl BilinearCocycle {
    pub fn new(group: FinAbGroup, matrix: Vec<Vec<QZScalar>>) -> Result<Self, DescentError> {
        check_compatible(&group, &matrix)?;
        Ok(Self { group, matrix })
    }

    pub fn eval(&self, x: &[u64], y: &[u64]) -> QZScalar {
        bilinear_eval(&self.matrix, x, y)
    }

    /// `φ + ψ` entrywise.
    pub fn plus(&self, other: &BilinearCocycle) -> Result<BilinearCocycle, DescentError> {
        if self.group != other.group {
            return Err(DescentError::GroupMismatch);
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x + *y).collect())
            .collect();
        Ok(BilinearCocycle {
            group: self.group.clone(),
            matrix,
        })
    }
}

/// An element `(α, t)` of the Heisenberg extension `H × Q/Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeisenbergElement {
    pub g: Element,
    pub t: QZScalar,
}

impl HeisenbergElement {
    pub fn new(g: Element, t: QZScalar) -> Self {
        Self { g, t }
    }
}

/// The Weil pairing on `J_r ≅ (Z/r)^{2g}` in a symplectic basis.
pub fn weil_form(r: u64, genus: usize) -> AlternatingForm {
    let group = FinAbGroup::homogeneous(r, 2 * genus);
    let mut form = AlternatingForm::zero(group);
    for i in 0..genus {
        form.matrix[2 * i][2 * i + 1] = QZScalar::new(1, r as i64);
        form.matrix[2 * i + 1][2 * i] = QZScalar::new(-1, r as i64);
    }
    form
}

pub fn form_power(e: &AlternatingForm, k: i64) -> AlternatingForm {
    AlternatingForm {
        group: e.group.clone(),
        matrix: e
            .matrix
            .iter()
            .map(|row| row.iter().map(|x| x.times(k)).collect())
            .collect(),
    }
}

pub fn form_order(e: &AlternatingForm) -> u64 {
    e.matrix.iter().flatten().fold(1, |a, x| a.lcm(&x.order()))
}

pub fn is_trivial(e: &AlternatingForm) -> bool {
    e.matrix.iter().flatten().all(QZScalar::is_zero)
}

/// Pull back a form on `(Z/r)^n` along the inclusion of the `s`-torsion,
/// `x ↦ (r/s)·x`.
pub fn restrict_to_torsion(e: &AlternatingForm, s: u64) -> Result<AlternatingForm, DescentError> {
    let r = match e.group.orders.first() {
        Some(&r) if e.group.orders.iter().all(|&o| o == r) => r,
        None => 1,
        Some(_) => {
            return Err(DescentError::PreconditionViolated(
                "form must live on (Z/r)^n".into(),
            ))
        }
    };
    if s == 0 || r % s != 0 {
        return Err(DescentError::NotADivisor { s, r });
    }
    let k = (r / s) as i64;
    Ok(AlternatingForm {
        group: FinAbGroup::homogeneous(s, e.group.rank()),
        matrix: e
            .matrix
            .iter()
            .map(|row| row.iter().map(|x| x.times(k * k)).collect())
            .collect(),
    })
}

/// `(α,t)(β,u) = (α+β, t+u+φ(α,β))`.
pub fn heisenberg_multiply(
    phi: &BilinearCocycle,
    x: &HeisenbergElement,
    y: &HeisenbergElement,
) -> Result<HeisenbergElement, DescentError> {
    if !phi.group.contains(&x.g) || !phi.group.contains(&y.g) {
        return Err(DescentError::GroupMismatch);
    }
    Ok(HeisenbergElement {
        g: phi.group.add(&x.g, &y.g),
        t: x.t + y.t + phi.eval(&x.g, &y.g),
    })
}

pub fn heisenberg_inverse(phi: &BilinearCocycle, x: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement {
        g: phi.group.neg(&x.g),
        t: phi.eval(&x.g, &x.g) - x.t,
    }
}

/// `e(α,β) = φ(α,β) − φ(β,α)`.
pub fn commutator_form(phi: &BilinearCocycle) -> AlternatingForm {
    let n = phi.group.rank();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| phi.matrix[i][j] - phi.matrix[j][i])
                .collect()
        })
        .collect();
    AlternatingForm {
        group: phi.group.clone(),
        matrix,
    }
}

/// The cocycle agreeing with `e` strictly above the diagonal and vanishing
/// elsewhere.
pub fn upper_triangular_cocycle(e: &AlternatingForm) -> BilinearCocycle {
    let n = e.group.rank();
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i < j {
                        e.matrix[i][j]
                    } else {
                        QZScalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    BilinearCocycle {
        group: e.group.clone(),
        matrix,
    }
}

fn literal_power(phi: &BilinearCocycle, alpha: &[u64], r: u64) -> HeisenbergElement {
    let x = HeisenbergElement::new(alpha.to_vec(), QZScalar::zero());
    let mut acc = HeisenbergElement::new(phi.group.zero(), QZScalar::zero());
    for _ in 0..r {
        acc = heisenberg_multiply(phi, &acc, &x).expect("element of the group");
    }
    acc
}

/// `σ(α)^r` for the section `σ(α) = (α, 0)`, which is central when `rα = 0`.
pub fn section_power(
    phi: &BilinearCocycle,
    alpha: &[u64],
    r: u64,
) -> Result<QZScalar, DescentError> {
    if !phi.group.contains(alpha) {
        return Err(DescentError::GroupMismatch);
    }
    if phi.group.scale(r, alpha) != phi.group.zero() {
        return Err(DescentError::NotAnnihilated { r });
    }
    let diag = phi.eval(alpha, alpha);
    let binom = r as i128 * (r as i128 - 1) / 2;
    let closed = diag.times((binom % diag.denom() as i128) as i64);
    let product = literal_power(phi, alpha, r);
    assert_eq!(
        closed, product.t,
        "closed form disagrees with the r-fold product"
    );
    Ok(closed)
}

/// Whether `ε(α) = σ(α)^r` satisfies `ε(α+β) = ε(α)+ε(β)+(r/2)·e(α,β)` for
/// every pair.
pub fn epsilon_quadratic_check(phi: &BilinearCocycle, r: u64) -> Result<bool, DescentError> {
    if r % 2 == 1 {
        return Err(DescentError::OddR(r));
    }
    check_annihilates(&phi.group, r)?;
    let e = commutator_form(phi);
    let elements = phi.group.elements();
    let eps: Vec<QZScalar> = elements
        .iter()
        .map(|a| section_power(phi, a, r))
        .collect::<Result<_, _>>()?;
    let index = |x: &[u64]| index_of(&phi.group, x);
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let lhs = eps[index(&phi.group.add(a, b))];
            let rhs = eps[i] + eps[j] + e.eval(a, b).times((r / 2) as i64);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn index_of(group: &FinAbGroup, x: &[u64]) -> usize {
    x.iter()
        .zip(&group.orders)
        .fold(0u64, |acc, (a, n)| acc * n + a) as usize
}

fn check_annihilates(group: &FinAbGroup, r: u64) -> Result<(), DescentError> {
    if r == 0 || r % group.exponent() != 0 {
        return Err(DescentError::PreconditionViolated(format!(
            "r = {r} does not annihilate a group of exponent {}",
            group.exponent()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DescentRecord {
    pub descends_at_r: bool,
    pub descends_at_2r: bool,
}

/// `L^r` descends unless `r` is even and `e^{r/2}` is nontrivial; `L^{2r}`
/// always descends.
pub fn descent_at_power(e: &AlternatingForm, r: u64) -> Result<DescentRecord, DescentError> {
    check_annihilates(&e.group, r)?;
    if !is_trivial(&form_power(e, r as i64)) {
        return Err(DescentError::PreconditionViolated(format!(
            "e^{r} is not trivial"
        )));
    }
    let descends_at_r = r % 2 == 1 || is_trivial(&form_power(e, (r / 2) as i64));
    Ok(DescentRecord {
        descends_at_r,
        descends_at_2r: true,
    })
}

/// Decides descent of `L^r` by computing `σ(α)^r` as a literal `r`-fold
/// product for every `α` and testing whether `α ↦ σ(α)^r` is additive.
pub fn descent_bruteforce(phi: &BilinearCocycle, r: u64) -> Result<bool, DescentError> {
    descent_bruteforce_with_cap(phi, r, DEFAULT_ENUMERATION_CAP)
}

pub fn descent_bruteforce_with_cap(
    phi: &BilinearCocycle,
    r: u64,
    cap: u64,
) -> Result<bool, DescentError> {
    let size = phi.group.size();
    if size > cap {
        return Err(DescentError::GroupTooLarge { size, cap });
    }
    check_annihilates(&phi.group, r)?;
    let elements = phi.group.elements();
    let chi: Vec<QZScalar> = elements
        .iter()
        .map(|a| {
            let p = literal_power(phi, a, r);
            debug_assert_eq!(p.g, phi.group.zero());
            p.t
        })
        .collect();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            if chi[index_of(&phi.group, &phi.group.add(a, b))] != chi[i] + chi[j] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_divisor(r: u64, s: u64) -> Result<(), DescentError> {
    if s == 0 || r % s != 0 {
        Err(DescentError::NotADivisor { s, r })
    } else {
        Ok(())
    }
}

/// Sign of `det(α̃)^h`, where `α̃` permutes `r` points in `r/s` cycles of
/// length `s`, so its eigenvalues are the `s`-th roots of unity, each with
/// multiplicity `r/s`.
pub fn hecke_det_character(r: u64, s: u64, h: u64) -> Result<i8, DescentError> {
    check_divisor(r, s)?;
    let m = (r / s) as i64;
    let det: QZScalar = (0..s as i64).map(|i| QZScalar::new(i * m, s as i64)).sum();
    let sign = det
        .times(h as i64)
        .sign()
        .expect("det of a permutation is ±1");
    let exponent = h as u128 * (s as u128 - 1) * (r / s) as u128;
    let expected = if exponent % 2 == 0 { 1 } else { -1 };
    assert_eq!(sign, expected);
    Ok(sign)
}

/// Whether the canonical bundle descends along `J_s`: always, unless `s` is
/// even while `h` and `r/s` are odd.
pub fn canonical_descends(r: u64, s: u64, h: u64) -> Result<bool, DescentError> {
    check_divisor(r, s)?;
    Ok(!(s % 2 == 0 && h % 2 == 1 && (r / s) % 2 == 1))
}

fn random_entry<R: Rng + ?Sized>(group: &FinAbGroup, i: usize, j: usize, rng: &mut R) -> QZScalar {
    let g = group.orders[i].gcd(&group.orders[j]) as i64;
    QZScalar::new(rng.gen_range(0..g), g)
}

/// A uniformly random alternating form on `group`.
pub fn random_alternating_form<R: Rng + ?Sized>(
    group: &FinAbGroup,
    rng: &mut R,
) -> AlternatingForm {
    let mut e = AlternatingForm::zero(group.clone());
    for i in 0..group.rank() {
        for j in i + 1..group.rank() {
            let x = random_entry(group, i, j, rng);
            e.matrix[i][j] = x;
            e.matrix[j][i] = -x;
        }
    }
    e
}

/// A uniformly random symmetric bilinear form on `group`. Adding it to a
/// cocycle leaves the commutator form unchanged.
pub fn random_symmetric_form<R: Rng + ?Sized>(group: &FinAbGroup, rng: &mut R) -> BilinearCocycle {
    let n = group.rank();
    let mut matrix = vec![vec![QZScalar::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let x = random_entry(group, i, j, rng);
            matrix[i][j] = x;
            matrix[j][i] = x;
        }
    }
    BilinearCocycle {
        group: group.clone(),
        matrix,
    }
}
