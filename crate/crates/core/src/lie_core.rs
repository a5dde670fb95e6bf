//! Root systems of types A, B, C, D and G2 in exact rational coordinates.
//!
//! The invariant form is the ambient dot product multiplied by
//! [`RootSystem::form_scale`], chosen so that the highest root has square
//! length 2. With this normalization the coroot of the highest root is the
//! highest root itself, which is what the Dynkin index computation relies on.

use std::collections::HashSet;
use std::fmt;

use num::{BigInt, BigRational, BigUint, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub type Rational = BigRational;
pub type Vector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("rank {rank} is not supported for family {family}")]
    UnsupportedRank { family: Family, rank: usize },
    #[error("weight is not dominant integral")]
    NotDominant,
    #[error("expected a vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

impl LieError {
    pub fn name(&self) -> &'static str {
        match self {
            LieError::UnsupportedRank { .. } => "UnsupportedRank",
            LieError::NotDominant => "NotDominant",
            LieError::DimensionMismatch { .. } => "DimensionMismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "G2" | "G" => Ok(Family::G2),
            other => Err(format!(
                "unknown family `{other}` (expected A, B, C, D or G2)"
            )),
        }
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Rational, a: &[Rational]) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

fn unit(n: usize, i: usize) -> Vector {
    (0..n)
        .map(|j| if j == i { rat(1) } else { rat(0) })
        .collect()
}

/// A simple-type root datum with its normalized invariant form.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub ambient_dim: usize,
    pub simple_roots: Vec<Vector>,
    pub positive_roots: Vec<Vector>,
    pub fundamental_weights: Vec<Vector>,
    pub highest_root: Vector,
    pub weyl_vector: Vector,
    pub form_scale: Rational,
}

impl RootSystem {
    /// Builds the standard realization of `family` in the given rank.
    ///
    /// D is accepted from rank 2 on; `D2` is the semisimple `so(4)`, and its
    /// highest root is taken to be `e1 + e2`, i.e. one of the two `A1` factors.
    pub fn new(family: Family, rank: usize) -> Result<Self, LieError> {
        let min_rank = match family {
            Family::A => 1,
            Family::B | Family::C | Family::D => 2,
            Family::G2 => 2,
        };
        if rank < min_rank || (family == Family::G2 && rank != 2) {
            return Err(LieError::UnsupportedRank { family, rank });
        }

        let (ambient_dim, simple_roots) = simple_roots_of(family, rank);
        let positive_roots = close_positive_roots(&simple_roots);

        let highest_root = pick_highest_root(&simple_roots, &positive_roots);
        let form_scale = rat(2) / dot(&highest_root, &highest_root);

        let mut half_sum = vec![rat(0); ambient_dim];
        for root in &positive_roots {
            half_sum = add(&half_sum, root);
        }
        let weyl_vector = scale(&ratio(1, 2), &half_sum);

        let fundamental_weights = fundamental_weights_of(&simple_roots);

        Ok(RootSystem {
            family,
            rank,
            ambient_dim,
            simple_roots,
            positive_roots,
            fundamental_weights,
            highest_root,
            weyl_vector,
            form_scale,
        })
    }

    /// The normalized invariant form κ.
    pub fn form(&self, a: &[Rational], b: &[Rational]) -> Rational {
        &self.form_scale * dot(a, b)
    }

    /// ⟨λ, α∨⟩ = 2κ(λ, α) / κ(α, α).
    pub fn coroot_pairing(&self, weight: &[Rational], root: &[Rational]) -> Rational {
        rat(2) * dot(weight, root) / dot(root, root)
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.simple_roots
            .iter()
            .map(|a| {
                self.simple_roots
                    .iter()
                    .map(|b| {
                        self.coroot_pairing(a, b)
                            .to_integer()
                            .to_i64()
                            .expect("Cartan entries are small integers")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn lie_algebra_dim(&self) -> usize {
        self.rank + 2 * self.positive_roots.len()
    }

    /// h∨ = ⟨ρ_W, θ∨⟩ + 1.
    pub fn dual_coxeter(&self) -> u64 {
        let pairing = self.coroot_pairing(&self.weyl_vector, &self.highest_root) + rat(1);
        debug_assert!(pairing.is_integer());
        pairing.to_integer().to_u64().expect("positive integer")
    }

    /// Σ labels[i] · ω_i.
    pub fn weight_from_labels(&self, labels: &[u64]) -> Result<Vector, LieError> {
        if labels.len() != self.rank {
            return Err(LieError::DimensionMismatch {
                expected: self.rank,
                found: labels.len(),
            });
        }
        let mut weight = vec![rat(0); self.ambient_dim];
        for (label, omega) in labels.iter().zip(&self.fundamental_weights) {
            let c = Rational::from_integer(BigInt::from(*label));
            weight = add(&weight, &scale(&c, omega));
        }
        Ok(weight)
    }

    /// Dynkin labels ⟨λ, α_i∨⟩ of a weight; `None` if any is non-integral.
    pub fn labels_of(&self, weight: &[Rational]) -> Option<Vec<i64>> {
        self.simple_roots
            .iter()
            .map(|a| {
                let p = self.coroot_pairing(weight, a);
                if p.is_integer() {
                    p.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Weyl dimension formula, exact.
    pub fn weyl_dim(&self, weight: &[Rational]) -> Result<BigUint, LieError> {
        if weight.len() != self.ambient_dim {
            return Err(LieError::DimensionMismatch {
                expected: self.ambient_dim,
                found: weight.len(),
            });
        }
        match self.labels_of(weight) {
            Some(labels) if labels.iter().all(|&l| l >= 0) => {}
            _ => return Err(LieError::NotDominant),
        }
        let shifted = add(weight, &self.weyl_vector);
        let mut product = rat(1);
        for alpha in &self.positive_roots {
            product *= self.form(&shifted, alpha) / self.form(&self.weyl_vector, alpha);
        }
        debug_assert!(product.is_integer() && !product.is_negative());
        Ok(product
            .to_integer()
            .to_biguint()
            .expect("Weyl dimension is a positive integer"))
    }

    /// Orthogonal projection onto the span of the roots. Only type A (and G2,
    /// which lives in the sum-zero plane of its ambient space) has a
    /// nontrivial complement.
    pub fn project(&self, v: &[Rational]) -> Vector {
        match self.family {
            Family::A | Family::G2 => {
                let n = rat(v.len() as i64);
                let mean = v.iter().fold(rat(0), |acc, x| acc + x) / n;
                v.iter().map(|x| x - &mean).collect()
            }
            _ => v.to_vec(),
        }
    }

    /// The ambient basis vector `e_i`, projected onto the root span.
    pub fn basis_weight(&self, i: usize) -> Vector {
        self.project(&unit(self.ambient_dim, i))
    }

    /// All roots, positive and negative.
    pub fn roots(&self) -> impl Iterator<Item = Vector> + '_ {
        self.positive_roots
            .iter()
            .cloned()
            .chain(self.positive_roots.iter().map(|r| neg(r)))
    }
}

fn simple_roots_of(family: Family, rank: usize) -> (usize, Vec<Vector>) {
    let diff = |n: usize, i: usize, j: usize| sub(&unit(n, i), &unit(n, j));
    match family {
        Family::A => {
            let n = rank + 1;
            (n, (0..rank).map(|i| diff(n, i, i + 1)).collect())
        }
        Family::B | Family::C | Family::D => {
            let n = rank;
            let mut simple: Vec<Vector> = (0..rank - 1).map(|i| diff(n, i, i + 1)).collect();
            let last = match family {
                Family::B => unit(n, n - 1),
                Family::C => scale(&rat(2), &unit(n, n - 1)),
                _ => add(&unit(n, n - 2), &unit(n, n - 1)),
            };
            simple.push(last);
            (n, simple)
        }
        Family::G2 => {
            // short α1 = e1 − e2, long α2 = −2e1 + e2 + e3 in the sum-zero plane
            let short = diff(3, 0, 1);
            let long = vec![rat(-2), rat(1), rat(1)];
            (3, vec![short, long])
        }
    }
}

/// Positive roots by closure under simple root strings.
fn close_positive_roots(simple: &[Vector]) -> Vec<Vector> {
    let mut found: HashSet<Vector> = simple.iter().cloned().collect();
    let mut ordered: Vec<Vector> = simple.to_vec();
    let mut frontier: Vec<Vector> = simple.to_vec();

    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for alpha in simple {
                // α-string through β: β − pα, …, β + qα with p − q = ⟨β, α∨⟩
                let mut p = 0i64;
                let mut probe = sub(beta, alpha);
                while found.contains(&probe) {
                    p += 1;
                    probe = sub(&probe, alpha);
                }
                let pairing = rat(2) * dot(beta, alpha) / dot(alpha, alpha);
                let q = rat(p) - pairing;
                if q.is_positive() {
                    let gamma = add(beta, alpha);
                    if found.insert(gamma.clone()) {
                        ordered.push(gamma.clone());
                        next.push(gamma);
                    }
                }
            }
        }
        frontier = next;
    }
    ordered
}

/// Coefficients of `v` in the basis of simple roots.
fn simple_coefficients(simple: &[Vector], v: &[Rational]) -> Vec<Rational> {
    // Solve Gram · c = (⟨v, α_i⟩)_i.
    let gram: Vec<Vec<Rational>> = simple
        .iter()
        .map(|a| simple.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vec<Rational> = simple.iter().map(|a| dot(a, v)).collect();
    solve(gram, rhs)
}

fn pick_highest_root(simple: &[Vector], positive: &[Vector]) -> Vector {
    let height = |v: &Vector| {
        simple_coefficients(simple, v)
            .into_iter()
            .fold(rat(0), |acc, c| acc + c)
    };
    let max_height = positive.iter().map(height).max().expect("nonempty");
    let mut candidates: Vec<&Vector> = positive
        .iter()
        .filter(|r| height(r) == max_height)
        .collect();
    // Only reducible D2 has more than one candidate; take e1 + e2.
    candidates.sort_by_key(|r| r.iter().fold(rat(0), |acc, x| acc + x));
    candidates.last().map(|r| (*r).clone()).expect("nonempty")
}

fn fundamental_weights_of(simple: &[Vector]) -> Vec<Vector> {
    let n = simple.len();
    // B[j][k] = ⟨α_j, α_k∨⟩; ω_i = Σ_j (B⁻¹)[i][j] α_j.
    let b: Vec<Vec<Rational>> = simple
        .iter()
        .map(|a| {
            simple
                .iter()
                .map(|c| rat(2) * dot(a, c) / dot(c, c))
                .collect()
        })
        .collect();
    let inv = invert(b);
    let dim = simple[0].len();
    (0..n)
        .map(|i| {
            let mut w = vec![rat(0); dim];
            for (j, alpha) in simple.iter().enumerate() {
                w = add(&w, &scale(&inv[i][j], alpha));
            }
            w
        })
        .collect()
}

fn solve(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Vec<Rational> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("nonsingular system");
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
                let delta = &f * &rhs[col];
                rhs[r] -= delta;
            }
        }
    }
    rhs
}

fn invert(m: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = m.len();
    // columns of the inverse, then transpose
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            solve(
                m.clone(),
                (0..n)
                    .map(|i| if i == j { rat(1) } else { rat(0) })
                    .collect(),
            )
        })
        .collect();
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect()
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.rank == other.rank
    }
}

impl Eq for RootSystem {}
