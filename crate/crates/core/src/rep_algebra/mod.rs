//! Representations built from the standard and adjoint representations by
//! duals, exterior and symmetric powers, tensor products and sums.
//!
//! Dynkin indices use the normalization in which the standard representation
//! of `SL_n` has index 1 and the adjoint representation of any simple group
//! has index `2h∨`:
//!
//! ```text
//! d_ρ = ½ Σ_μ mult(μ) · ⟨μ, θ∨⟩²
//! ```
//!
//! Other references often use half of this value.

mod expr;

use std::collections::HashMap;

use num::{BigInt, BigUint, Integer, One, ToPrimitive, Zero};
use serde::Serialize;

use crate::lie_core::{rat, Family, Rational, RootSystem, Vector};

pub use expr::{parse, ParseError, RepExpr};

pub const DEFAULT_MAX_DIM: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepError {
    #[error("dimension {dim} of {expr} exceeds the cap {cap}")]
    DimensionCapExceeded {
        expr: String,
        dim: BigUint,
        cap: u64,
    },
    #[error("half weight trace {0} is not an integer")]
    NonIntegralIndex(Rational),
    #[error("center acts by different characters on the weights of {0}")]
    NotIsotypic(String),
}

impl RepError {
    pub fn name(&self) -> &'static str {
        match self {
            RepError::DimensionCapExceeded { .. } => "DimensionCapExceeded",
            RepError::NonIntegralIndex(_) => "NonIntegralIndex",
            RepError::NotIsotypic(_) => "NotIsotypic",
        }
    }
}

/// Weights with multiplicity. Weights are stored as integer numerators over
/// a common denominator fixed by the root system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMultiset {
    ambient_dim: usize,
    denominator: i64,
    entries: HashMap<Vec<i64>, u64>,
}

impl WeightMultiset {
    fn empty(ambient_dim: usize, denominator: i64) -> Self {
        Self {
            ambient_dim,
            denominator,
            entries: HashMap::new(),
        }
    }

    fn zero_weight(&self) -> Vec<i64> {
        vec![0; self.ambient_dim]
    }

    fn insert(&mut self, key: Vec<i64>, mult: u64) {
        if mult > 0 {
            *self.entries.entry(key).or_insert(0) += mult;
        }
    }

    fn encode(&self, w: &[Rational]) -> Option<Vec<i64>> {
        let d = BigInt::from(self.denominator);
        w.iter()
            .map(|x| {
                let scaled = x * Rational::from_integer(d.clone());
                if scaled.is_integer() {
                    scaled.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    fn decode(&self, key: &[i64]) -> Vector {
        key.iter()
            .map(|&n| Rational::new(BigInt::from(n), BigInt::from(self.denominator)))
            .collect()
    }

    /// Total multiplicity.
    pub fn dim(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Number of distinct weights.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplicity(&self, weight: &[Rational]) -> u64 {
        self.encode(weight)
            .and_then(|k| self.entries.get(&k).copied())
            .unwrap_or(0)
    }

    /// Weights and multiplicities in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (Vector, u64)> + '_ {
        self.entries.iter().map(|(k, &m)| (self.decode(k), m))
    }

    /// True if `w` and `−w` always have the same multiplicity.
    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(k, m)| {
            let n: Vec<i64> = k.iter().map(|x| -x).collect();
            self.entries.get(&n) == Some(m)
        })
    }

    fn dual(&self) -> Self {
        let mut out = Self::empty(self.ambient_dim, self.denominator);
        for (k, &m) in &self.entries {
            out.insert(k.iter().map(|x| -x).collect(), m);
        }
        out
    }

    fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, &m) in &other.entries {
            out.insert(k.clone(), m);
        }
        out
    }

    fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::empty(self.ambient_dim, self.denominator);
        for (a, &ma) in &self.entries {
            for (b, &mb) in &other.entries {
                let key = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.insert(key, ma * mb);
            }
        }
        out
    }

    /// Degree-`p` part of `∏_w (1 + x·e^w)^{m_w}` (exterior) or
    /// `∏_w (1 − x·e^w)^{−m_w}` (symmetric), aggregated by weight after each
    /// factor.
    fn power(&self, p: usize, symmetric: bool) -> Self {
        let mut layers: Vec<HashMap<Vec<i64>, u64>> = vec![HashMap::new(); p + 1];
        layers[0].insert(self.zero_weight(), 1);
        let mut factors: Vec<(&Vec<i64>, u64)> =
            self.entries.iter().map(|(k, &m)| (k, m)).collect();
        factors.sort();
        for (w, m) in factors {
            let top = if symmetric { p } else { p.min(m as usize) };
            // coefficient of x^j in the factor for this weight
            let coeff = |j: usize| -> u64 {
                if symmetric {
                    binomial(m + j as u64 - 1, j as u64)
                } else {
                    binomial(m, j as u64)
                }
            };
            let mut next: Vec<HashMap<Vec<i64>, u64>> = vec![HashMap::new(); p + 1];
            for (deg, layer) in layers.iter().enumerate() {
                for (key, &mult) in layer {
                    for j in 0..=top.min(p - deg) {
                        let c = if j == 0 { 1 } else { coeff(j) };
                        let shifted = key.iter().zip(w).map(|(x, y)| x + y * j as i64).collect();
                        *next[deg + j].entry(shifted).or_insert(0) += mult * c;
                    }
                }
            }
            layers = next;
        }
        let mut out = Self::empty(self.ambient_dim, self.denominator);
        out.entries = std::mem::take(&mut layers[p]);
        out
    }

    fn exterior(&self, p: usize) -> Self {
        let n = self.dim() as usize;
        if p > n {
            return Self::empty(self.ambient_dim, self.denominator);
        }
        if 2 * p <= n {
            return self.power(p, false);
        }
        // Λ^p V ≅ Λ^{n−p} V* ⊗ det V keeps the intermediate tables small
        let mut total = self.zero_weight();
        for (k, &m) in &self.entries {
            for (t, x) in total.iter_mut().zip(k) {
                *t += x * m as i64;
            }
        }
        let mut out = Self::empty(self.ambient_dim, self.denominator);
        for (k, m) in self.power(n - p, false).entries {
            out.insert(total.iter().zip(&k).map(|(t, x)| t - x).collect(), m);
        }
        out
    }

    /// `½ Σ mult(μ)·⟨μ, θ∨⟩²` as an exact rational.
    pub fn half_trace(&self, rs: &RootSystem) -> Rational {
        let theta: Vector = rs.highest_root.clone();
        let mut acc = Rational::zero();
        for (k, &m) in &self.entries {
            let pairing = rs.coroot_pairing(&self.decode(k), &theta);
            acc += &pairing * &pairing * Rational::from_integer(BigInt::from(m));
        }
        acc / rat(2)
    }

    pub fn dynkin_index(&self, rs: &RootSystem) -> Result<u64, RepError> {
        let h = self.half_trace(rs);
        if !h.is_integer() {
            return Err(RepError::NonIntegralIndex(h));
        }
        Ok(h.to_integer().to_u64().expect("index fits in u64"))
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

fn big_binomial(n: &BigUint, k: u32) -> BigUint {
    let k_big = BigUint::from(k);
    if &k_big > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

fn std_weights(rs: &RootSystem) -> Vec<Vector> {
    let n = rs.ambient_dim;
    match rs.family {
        Family::A => (0..n).map(|i| rs.basis_weight(i)).collect(),
        Family::B | Family::C | Family::D => {
            let mut out = Vec::with_capacity(2 * n + 1);
            for i in 0..n {
                let e = rs.basis_weight(i);
                out.push(e.iter().map(|x| -x).collect());
                out.push(e);
            }
            if rs.family == Family::B {
                out.push(vec![rat(0); n]);
            }
            out
        }
        Family::G2 => {
            let mut out: Vec<Vector> = rs.roots().filter(|r| rs.form(r, r) < rat(2)).collect();
            out.push(vec![rat(0); n]);
            out
        }
    }
}

/// Common denominator of the coordinates of the standard weights.
fn denominator_for(rs: &RootSystem) -> i64 {
    let mut d = BigInt::one();
    for w in std_weights(rs) {
        for x in w {
            d = d.lcm(x.denom());
        }
    }
    d.to_i64().expect("small denominator")
}

fn base_multiset(rs: &RootSystem, weights: impl IntoIterator<Item = Vector>) -> WeightMultiset {
    let mut ms = WeightMultiset::empty(rs.ambient_dim, denominator_for(rs));
    for w in weights {
        let key = ms.encode(&w).expect("weight lies on the lattice");
        ms.insert(key, 1);
    }
    ms
}

/// Dimension of `rho` by combinatorics alone, failing as soon as any
/// subexpression exceeds `cap`.
pub fn dimension_with_cap(rs: &RootSystem, rho: &RepExpr, cap: u64) -> Result<BigUint, RepError> {
    let d = match rho {
        RepExpr::Std => BigUint::from(std_weights(rs).len()),
        RepExpr::Adj => BigUint::from(rs.lie_algebra_dim()),
        RepExpr::Triv => BigUint::one(),
        RepExpr::Dual(e) => dimension_with_cap(rs, e, cap)?,
        RepExpr::Ext(p, e) => big_binomial(&dimension_with_cap(rs, e, cap)?, *p),
        RepExpr::Sym(p, e) => {
            let n = dimension_with_cap(rs, e, cap)?;
            if n.is_zero() {
                BigUint::from(u8::from(*p == 0))
            } else {
                big_binomial(&(n + BigUint::from(*p) - BigUint::one()), *p)
            }
        }
        RepExpr::Tensor(a, b) => dimension_with_cap(rs, a, cap)? * dimension_with_cap(rs, b, cap)?,
        RepExpr::Sum(a, b) => dimension_with_cap(rs, a, cap)? + dimension_with_cap(rs, b, cap)?,
    };
    if d > BigUint::from(cap) {
        return Err(RepError::DimensionCapExceeded {
            expr: rho.to_string(),
            dim: d,
            cap,
        });
    }
    Ok(d)
}

pub fn weights(rs: &RootSystem, rho: &RepExpr) -> Result<WeightMultiset, RepError> {
    weights_with_cap(rs, rho, DEFAULT_MAX_DIM)
}

pub fn weights_with_cap(
    rs: &RootSystem,
    rho: &RepExpr,
    cap: u64,
) -> Result<WeightMultiset, RepError> {
    dimension_with_cap(rs, rho, cap)?;
    Ok(build(rs, rho))
}

fn build(rs: &RootSystem, rho: &RepExpr) -> WeightMultiset {
    match rho {
        RepExpr::Std => base_multiset(rs, std_weights(rs)),
        RepExpr::Adj => {
            let zeros = (0..rs.rank).map(|_| vec![rat(0); rs.ambient_dim]);
            base_multiset(rs, rs.roots().chain(zeros))
        }
        RepExpr::Triv => base_multiset(rs, [vec![rat(0); rs.ambient_dim]]),
        RepExpr::Dual(e) => build(rs, e).dual(),
        RepExpr::Ext(p, e) => build(rs, e).exterior(*p as usize),
        RepExpr::Sym(p, e) => build(rs, e).power(*p as usize, true),
        RepExpr::Tensor(a, b) => build(rs, a).tensor(&build(rs, b)),
        RepExpr::Sum(a, b) => build(rs, a).union(&build(rs, b)),
    }
}

pub fn dimension(rs: &RootSystem, rho: &RepExpr) -> Result<u64, RepError> {
    Ok(weights(rs, rho)?.dim())
}

pub fn dynkin_index(rs: &RootSystem, rho: &RepExpr) -> Result<u64, RepError> {
    dynkin_index_with_cap(rs, rho, DEFAULT_MAX_DIM)
}

pub fn dynkin_index_with_cap(rs: &RootSystem, rho: &RepExpr, cap: u64) -> Result<u64, RepError> {
    weights_with_cap(rs, rho, cap)?.dynkin_index(rs)
}

/// A character of the center of the simply connected group, written as a
/// residue for each cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CenterCharacter {
    pub moduli: Vec<u64>,
    pub residues: Vec<u64>,
}

impl CenterCharacter {
    pub fn is_trivial(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }

    /// For a cyclic center `Z/n`, whether the subgroup of order `s` acts
    /// trivially.
    pub fn kills_cyclic_subgroup(&self, s: u64) -> bool {
        match self.residues.as_slice() {
            [] => true,
            [k] => s != 0 && k % s == 0,
            _ => false,
        }
    }
}

/// Moduli of the cyclic factors of the center of the simply connected group.
pub fn center_moduli(rs: &RootSystem) -> Vec<u64> {
    let l = rs.rank as u64;
    match rs.family {
        Family::A => vec![l + 1],
        Family::B | Family::C => vec![2],
        Family::D if l % 2 == 1 => vec![4],
        Family::D => vec![2, 2],
        Family::G2 => vec![],
    }
}

/// Class of a weight in `P/Q`.
pub fn weight_class(rs: &RootSystem, w: &[Rational]) -> Vec<u64> {
    let l = rs.rank as i64;
    let sum = w.iter().fold(Rational::zero(), |a, x| a + x);
    let int = |x: Rational| -> i64 {
        debug_assert!(x.is_integer());
        x.to_integer().to_i64().expect("small weight")
    };
    let half_integral = !w.iter().all(|x| x.is_integer());
    match rs.family {
        Family::A => {
            let n = l + 1;
            let last = w.last().cloned().unwrap_or_else(Rational::zero);
            vec![int(-last * rat(n)).rem_euclid(n) as u64]
        }
        Family::B => vec![u64::from(half_integral)],
        Family::C => vec![int(sum).rem_euclid(2) as u64],
        Family::D if l % 2 == 1 => vec![int(sum * rat(2 * l)).rem_euclid(4) as u64],
        Family::D => {
            let h = i64::from(half_integral);
            vec![h as u64, int(sum - rat(h * l / 2)).rem_euclid(2) as u64]
        }
        Family::G2 => vec![],
    }
}

pub fn center_character(rs: &RootSystem, rho: &RepExpr) -> Result<CenterCharacter, RepError> {
    center_character_with_cap(rs, rho, DEFAULT_MAX_DIM)
}

pub fn center_character_with_cap(
    rs: &RootSystem,
    rho: &RepExpr,
    cap: u64,
) -> Result<CenterCharacter, RepError> {
    let ms = weights_with_cap(rs, rho, cap)?;
    let moduli = center_moduli(rs);
    let mut residues: Option<Vec<u64>> = None;
    for (w, _) in ms.iter() {
        let class = weight_class(rs, &w);
        match &residues {
            None => residues = Some(class),
            Some(r) if *r != class => return Err(RepError::NotIsotypic(rho.to_string())),
            Some(_) => {}
        }
    }
    let residues = residues.unwrap_or_else(|| vec![0; moduli.len()]);
    Ok(CenterCharacter { moduli, residues })
}
