//! Realized affine root systems: explicit simple-root coordinates for the
//! fourteen affine families, the non-Euclidean ambient bilinear form, the
//! null root and the level functional, plus bounded root enumeration with
//! multiplicities.

use crate::cartan::{validate_gcm, CartanError, GeneralizedCartanMatrix};
use crate::scalar::{rat, ratio, Rat};
use num::traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootDataError {
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("rank {rank} out of range for family {family}")]
    RankOutOfRange { family: String, rank: usize },
    #[error("vector length does not match ambient dimension {dim}")]
    DimensionMismatch { dim: usize },
    #[error("the level functional conditions are unsolvable (catalog bug)")]
    Unsolvable,
    #[error("catalog entry produced an invalid Cartan matrix: {0}")]
    BadCartan(#[from] CartanError),
}

/// Ambient space R^n with the pairing
/// `(v, w) = sum_{i<=n-2} v_i w_i + v_{n-1} w_n + v_n w_{n-1}`.
///
/// The last two coordinates form a hyperbolic pair; e_n is isotropic and
/// hosts the null root, e_{n-1} hosts the level functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmbientForm {
    pub dim: usize,
}

impl AmbientForm {
    pub fn pairing(&self, v: &[Rat], w: &[Rat]) -> Result<Rat, RootDataError> {
        if v.len() != self.dim || w.len() != self.dim {
            return Err(RootDataError::DimensionMismatch { dim: self.dim });
        }
        let n = self.dim;
        let mut acc = Rat::zero();
        for i in 0..n.saturating_sub(2) {
            acc += &v[i] * &w[i];
        }
        if n >= 2 {
            acc += &v[n - 2] * &w[n - 1];
            acc += &v[n - 1] * &w[n - 2];
        }
        Ok(acc)
    }
}

/// Diagram automorphism data for a twisted entry: the parent finite
/// family and the permutation of its simple-root indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistData {
    pub parent_letter: char,
    pub parent_rank: usize,
    pub perm: Vec<usize>,
}

/// One catalog entry: exact simple-root coordinates, the null root and
/// the ambient form, plus the diagram automorphism for twisted families.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizedRootSystem {
    pub family: String,
    pub rank: usize,
    pub twist: usize,
    pub simple_roots: Vec<Vec<Rat>>,
    pub delta: Vec<Rat>,
    pub ambient: AmbientForm,
    pub tau: Option<TwistData>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootWithMultiplicity {
    pub coords: Vec<Rat>,
    pub is_imaginary: bool,
    pub multiplicity: usize,
}

fn vec_of(dim: usize, terms: &[(usize, Rat)]) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    for (idx, c) in terms {
        v[*idx - 1] = c.clone(); // paper coordinates are 1-based
    }
    v
}

fn e(dim: usize, i: usize) -> Vec<Rat> {
    vec_of(dim, &[(i, rat(1))])
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(c: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| c * x).collect()
}

pub fn label(letter: char, subscript: usize, twist: usize) -> String {
    format!("{}_{}^{{({})}}", letter, subscript, twist)
}

/// Returns the catalog entry for a full label such as `"A_1^{(1)}"`.
/// `rank` is the affine rank (index set 0..rank) and is validated.
pub fn catalog(family: &str, rank: usize) -> Result<RealizedRootSystem, RootDataError> {
    let (letter, subscript, twist) =
        parse_label(family).ok_or_else(|| RootDataError::UnknownFamily(family.to_string()))?;
    let entry = catalog_by_parts(letter, subscript, twist)?;
    if entry.rank != rank {
        return Err(RootDataError::RankOutOfRange {
            family: family.to_string(),
            rank,
        });
    }
    Ok(entry)
}

pub fn parse_label(s: &str) -> Option<(char, usize, usize)> {
    // Accepts X_n^{(q)}.
    let mut it = s.chars();
    let letter = it.next()?;
    let rest: String = it.collect();
    let rest = rest.strip_prefix('_')?;
    let (sub, tail) = rest.split_once("^{(")?;
    let twist = tail.strip_suffix(")}")?;
    Some((letter, sub.parse().ok()?, twist.parse().ok()?))
}

/// Builds a catalog entry from letter, label subscript and twist order.
pub fn catalog_by_parts(
    letter: char,
    subscript: usize,
    twist: usize,
) -> Result<RealizedRootSystem, RootDataError> {
    let fam = label(letter, subscript, twist);
    let err_range = || RootDataError::RankOutOfRange {
        family: fam.clone(),
        rank: subscript,
    };
    match (letter, twist) {
        ('A', 1) => {
            let l = subscript;
            if l < 1 {
                return Err(err_range());
            }
            if l == 1 {
                let dim = 4;
                let alpha0 = vec_of(dim, &[(1, rat(-1)), (2, rat(1)), (4, rat(1))]);
                let alpha1 = vec_of(dim, &[(1, rat(1)), (2, rat(-1))]);
                return Ok(RealizedRootSystem {
                    family: fam,
                    rank: 1,
                    twist: 1,
                    simple_roots: vec![alpha0, alpha1],
                    delta: e(dim, 4),
                    ambient: AmbientForm { dim },
                    tau: None,
                });
            }
            let dim = l + 3;
            let mut roots = vec![vec_of(
                dim,
                &[(1, rat(-1)), (l + 1, rat(1)), (l + 3, rat(1))],
            )];
            for i in 1..=l {
                roots.push(vec_of(dim, &[(i, rat(1)), (i + 1, rat(-1))]));
            }
            Ok(RealizedRootSystem {
                family: fam,
                rank: l,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, l + 3),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('B', 1) => {
            let l = subscript;
            if l < 3 {
                return Err(err_range());
            }
            let dim = l + 2;
            let mut roots = vec![vec_of(dim, &[(1, rat(-1)), (2, rat(-1)), (l + 2, rat(1))])];
            for i in 1..l {
                roots.push(vec_of(dim, &[(i, rat(1)), (i + 1, rat(-1))]));
            }
            roots.push(e(dim, l));
            Ok(RealizedRootSystem {
                family: fam,
                rank: l,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, l + 2),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('C', 1) => {
            let l = subscript;
            if l < 2 {
                return Err(err_range());
            }
            let dim = l + 2;
            let mut roots = vec![vec_of(dim, &[(1, rat(-2)), (l + 2, rat(1))])];
            for i in 1..l {
                roots.push(vec_of(dim, &[(i, rat(1)), (i + 1, rat(-1))]));
            }
            roots.push(vec_of(dim, &[(l, rat(2))]));
            Ok(RealizedRootSystem {
                family: fam,
                rank: l,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, l + 2),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('D', 1) => {
            let l = subscript;
            if l < 4 {
                return Err(err_range());
            }
            let dim = l + 2;
            let mut roots = vec![vec_of(dim, &[(1, rat(-1)), (2, rat(-1)), (l + 2, rat(1))])];
            for i in 1..l {
                roots.push(vec_of(dim, &[(i, rat(1)), (i + 1, rat(-1))]));
            }
            roots.push(vec_of(dim, &[(l - 1, rat(1)), (l, rat(1))]));
            Ok(RealizedRootSystem {
                family: fam,
                rank: l,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, l + 2),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('E', 1) if subscript == 6 => {
            let dim = 10;
            let h = ratio(1, 2);
            let alpha0 = scale(
                &h,
                &vec_of(
                    dim,
                    &[
                        (1, rat(-1)),
                        (2, rat(-1)),
                        (3, rat(-1)),
                        (4, rat(-1)),
                        (5, rat(-1)),
                        (6, rat(1)),
                        (7, rat(1)),
                        (8, rat(-1)),
                        (10, rat(2)),
                    ],
                ),
            );
            let mut roots = vec![alpha0, spin_half_root(dim)];
            for i in 2..=5 {
                roots.push(vec_of(dim, &[(i - 1, rat(-1)), (i, rat(1))]));
            }
            roots.push(vec_of(dim, &[(1, rat(1)), (2, rat(1))]));
            Ok(RealizedRootSystem {
                family: fam,
                rank: 6,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, 10),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('E', 1) if subscript == 7 => {
            let dim = 10;
            let alpha0 = vec_of(dim, &[(7, rat(1)), (8, rat(-1)), (10, rat(1))]);
            let mut roots = vec![alpha0, spin_half_root(dim)];
            for i in 2..=6 {
                roots.push(vec_of(dim, &[(i - 1, rat(-1)), (i, rat(1))]));
            }
            roots.push(vec_of(dim, &[(1, rat(1)), (2, rat(1))]));
            Ok(RealizedRootSystem {
                family: fam,
                rank: 7,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, 10),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('E', 1) if subscript == 8 => {
            let dim = 10;
            let alpha0 = vec_of(dim, &[(7, rat(-1)), (8, rat(-1)), (10, rat(1))]);
            let mut roots = vec![alpha0, spin_half_root(dim)];
            for i in 2..=7 {
                roots.push(vec_of(dim, &[(i - 1, rat(-1)), (i, rat(1))]));
            }
            roots.push(vec_of(dim, &[(1, rat(1)), (2, rat(1))]));
            Ok(RealizedRootSystem {
                family: fam,
                rank: 8,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, 10),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('F', 1) if subscript == 4 => {
            let dim = 6;
            let h = ratio(1, 2);
            let roots = vec![
                vec_of(dim, &[(1, rat(-1)), (2, rat(-1)), (6, rat(1))]),
                vec_of(dim, &[(2, rat(1)), (3, rat(-1))]),
                vec_of(dim, &[(3, rat(1)), (4, rat(-1))]),
                e(dim, 4),
                scale(
                    &h,
                    &vec_of(
                        dim,
                        &[(1, rat(1)), (2, rat(-1)), (3, rat(-1)), (4, rat(-1))],
                    ),
                ),
            ];
            Ok(RealizedRootSystem {
                family: fam,
                rank: 4,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, 6),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('G', 1) if subscript == 2 => {
            let dim = 5;
            let roots = vec![
                vec_of(dim, &[(1, rat(1)), (2, rat(1)), (3, rat(-2)), (5, rat(1))]),
                vec_of(dim, &[(1, rat(-2)), (2, rat(1)), (3, rat(1))]),
                vec_of(dim, &[(1, rat(1)), (2, rat(-1))]),
            ];
            Ok(RealizedRootSystem {
                family: fam,
                rank: 2,
                twist: 1,
                simple_roots: roots,
                delta: e(dim, 5),
                ambient: AmbientForm { dim },
                tau: None,
            })
        }
        ('A', 2) => {
            // A_2^{(2)} for subscript 2, A_{2l}^{(2)} for even subscripts,
            // A_{2l-1}^{(2)} for odd subscripts >= 5.
            if subscript == 2 {
                let dim = 5;
                let h = ratio(1, 2);
                let roots = vec![
                    vec_of(dim, &[(1, rat(-1)), (3, rat(1)), (5, ratio(1, 2))]),
                    scale(&h, &vec_of(dim, &[(1, rat(1)), (3, rat(-1))])),
                ];
                return Ok(RealizedRootSystem {
                    family: fam,
                    rank: 1,
                    twist: 2,
                    simple_roots: roots,
                    delta: scale(&h, &e(dim, 5)),
                    ambient: AmbientForm { dim },
                    tau: Some(TwistData {
                        parent_letter: 'A',
                        parent_rank: 2,
                        perm: vec![1, 0],
                    }),
                });
            }
            if subscript % 2 == 0 {
                let l = subscript / 2;
                if l < 2 {
                    return Err(err_range());
                }
                let dim = 2 * l + 3;
                let h = ratio(1, 2);
                let mut roots = vec![vec_of(
                    dim,
                    &[(1, rat(-1)), (2 * l + 1, rat(1)), (2 * l + 3, ratio(1, 2))],
                )];
                for i in 1..l {
                    roots.push(scale(
                        &h,
                        &vec_of(
                            dim,
                            &[
                                (i, rat(1)),
                                (i + 1, rat(-1)),
                                (2 * l - i + 1, rat(1)),
                                (2 * l - i + 2, rat(-1)),
                            ],
                        ),
                    ));
                }
                roots.push(scale(&h, &vec_of(dim, &[(l, rat(1)), (l + 2, rat(-1))])));
                // tau(k) = 2l+1-k on the parent A_{2l}, 0-based: i -> 2l-1-i
                let perm = (0..2 * l).map(|i| 2 * l - 1 - i).collect();
                return Ok(RealizedRootSystem {
                    family: fam,
                    rank: l,
                    twist: 2,
                    simple_roots: roots,
                    delta: scale(&h, &e(dim, 2 * l + 3)),
                    ambient: AmbientForm { dim },
                    tau: Some(TwistData {
                        parent_letter: 'A',
                        parent_rank: 2 * l,
                        perm,
                    }),
                });
            }
            let l = (subscript + 1) / 2;
            if l < 3 {
                return Err(err_range());
            }
            let dim = 2 * l + 2;
            let h = ratio(1, 2);
            let mut roots = vec![scale(
                &h,
                &vec_of(
                    dim,
                    &[
                        (1, rat(-1)),
                        (2, rat(-1)),
                        (2 * l - 1, rat(1)),
                        (2 * l, rat(1)),
                        (2 * l + 2, rat(1)),
                    ],
                ),
            )];
            for i in 1..=l {
                // collapses to e_l - e_{l+1} at i = l
                let mut terms = vec![(i, rat(1)), (i + 1, rat(-1))];
                if 2 * l - i != i {
                    terms.push((2 * l - i, rat(1)));
                    terms.push((2 * l - i + 1, rat(-1)));
                } else {
                    terms = vec![(i, rat(2)), (i + 1, rat(-2))];
                }
                roots.push(scale(&h, &vec_of(dim, &terms)));
            }
            // tau(k) = 2l-k on the parent A_{2l-1}, 0-based: i -> 2l-2-i
            let perm = (0..2 * l - 1).map(|i| 2 * l - 2 - i).collect();
            Ok(RealizedRootSystem {
                family: fam,
                rank: l,
                twist: 2,
                simple_roots: roots,
                delta: scale(&h, &e(dim, 2 * l + 2)),
                ambient: AmbientForm { dim },
                tau: Some(TwistData {
                    parent_letter: 'A',
                    parent_rank: 2 * l - 1,
                    perm,
                }),
            })
        }
        ('D', 2) => {
            // D_{l+1}^{(2)}, subscript = l+1 >= 3
            let l = subscript
                .checked_sub(1)
                .filter(|&l| l >= 2)
                .ok_or_else(err_range)?;
            let dim = l + 3;
            let h = ratio(1, 2);
            let mut roots = vec![vec_of(dim, &[(1, rat(-1)), (l + 3, ratio(1, 2))])];
            for i in 1..l {
                roots.push(vec_of(dim, &[(i, rat(1)), (i + 1, rat(-1))]));
            }
            roots.push(e(dim, l));
            // parent D_{l+1}: fixes 1..l-1, swaps the fork tips l, l+1
            let mut perm: Vec<usize> = (0..l + 1).collect();
            perm.swap(l - 1, l);
            Ok(RealizedRootSystem {
                family: fam,
                rank: l,
                twist: 2,
                simple_roots: roots,
                delta: scale(&h, &e(dim, l + 3)),
                ambient: AmbientForm { dim },
                tau: Some(TwistData {
                    parent_letter: 'D',
                    parent_rank: l + 1,
                    perm,
                }),
            })
        }
        ('E', 2) if subscript == 6 => {
            let dim = 10;
            let h = ratio(1, 2);
            let q = ratio(1, 4);
            let roots = vec![
                scale(
                    &h,
                    &vec_of(
                        dim,
                        &[
                            (5, rat(-1)),
                            (6, rat(1)),
                            (7, rat(1)),
                            (8, rat(-1)),
                            (10, rat(1)),
                        ],
                    ),
                ),
                scale(
                    &q,
                    &vec_of(
                        dim,
                        &[
                            (1, rat(1)),
                            (2, rat(-1)),
                            (3, rat(-1)),
                            (4, rat(-3)),
                            (5, rat(1)),
                            (6, rat(-1)),
                            (7, rat(-1)),
                            (8, rat(1)),
                        ],
                    ),
                ),
                scale(
                    &h,
                    &vec_of(dim, &[(1, rat(-1)), (2, rat(1)), (3, rat(-1)), (4, rat(1))]),
                ),
                vec_of(dim, &[(2, rat(-1)), (3, rat(1))]),
                vec_of(dim, &[(1, rat(1)), (2, rat(1))]),
            ];
            // parent E_6: k <-> 6-k for k = 1..5, node 6 fixed; 0-based i <-> 4-i
            let perm = vec![4, 3, 2, 1, 0, 5];
            Ok(RealizedRootSystem {
                family: fam,
                rank: 4,
                twist: 2,
                simple_roots: roots,
                delta: scale(&h, &e(dim, 10)),
                ambient: AmbientForm { dim },
                tau: Some(TwistData {
                    parent_letter: 'E',
                    parent_rank: 6,
                    perm,
                }),
            })
        }
        ('D', 3) if subscript == 4 => {
            let dim = 6;
            let t = ratio(1, 3);
            let roots = vec![
                scale(
                    &t,
                    &vec_of(
                        dim,
                        &[(1, rat(-2)), (2, rat(-1)), (3, rat(-1)), (6, rat(1))],
                    ),
                ),
                scale(&t, &vec_of(dim, &[(1, rat(1)), (2, rat(-1)), (3, rat(2))])),
                vec_of(dim, &[(2, rat(1)), (3, rat(-1))]),
            ];
            // parent D_4 triality: 1 -> 3 -> 4 -> 1, node 2 fixed
            let perm = vec![2, 1, 3, 0];
            Ok(RealizedRootSystem {
                family: fam,
                rank: 2,
                twist: 3,
                simple_roots: roots,
                delta: scale(&t, &e(dim, 6)),
                ambient: AmbientForm { dim },
                tau: Some(TwistData {
                    parent_letter: 'D',
                    parent_rank: 4,
                    perm,
                }),
            })
        }
        _ => Err(RootDataError::UnknownFamily(fam)),
    }
}

/// alpha_1 of the E-series realizations:
/// (e_1 - e_2 - e_3 - e_4 - e_5 - e_6 - e_7 + e_8) / 2.
fn spin_half_root(dim: usize) -> Vec<Rat> {
    let h = ratio(1, 2);
    scale(
        &h,
        &vec_of(
            dim,
            &[
                (1, rat(1)),
                (2, rat(-1)),
                (3, rat(-1)),
                (4, rat(-1)),
                (5, rat(-1)),
                (6, rat(-1)),
                (7, rat(-1)),
                (8, rat(1)),
            ],
        ),
    )
}

impl RealizedRootSystem {
    pub fn pairing(&self, v: &[Rat], w: &[Rat]) -> Rat {
        self.ambient
            .pairing(v, w)
            .expect("catalog vectors have ambient dimension")
    }

    /// Gram-style Cartan matrix A_jk = 2(alpha_k, alpha_j)/(alpha_j, alpha_j).
    pub fn cartan_from_roots(&self) -> Result<GeneralizedCartanMatrix, RootDataError> {
        let n = self.simple_roots.len();
        let mut entries = vec![vec![0i64; n]; n];
        for j in 0..n {
            let ajj = self.pairing(&self.simple_roots[j], &self.simple_roots[j]);
            for k in 0..n {
                let ajk = self.pairing(&self.simple_roots[k], &self.simple_roots[j]);
                let val = rat(2) * ajk / ajj.clone();
                if !val.denom().is_one() {
                    return Err(RootDataError::BadCartan(CartanError::NotSymmetrizable));
                }
                let num = val.numer();
                entries[j][k] = i64::try_from(num.clone())
                    .map_err(|_| RootDataError::BadCartan(CartanError::NotSymmetrizable))?;
            }
        }
        Ok(validate_gcm(entries)?)
    }

    /// The functional Lambda_0: pairs to zero with every alpha_k (k >= 1),
    /// to (alpha_0, alpha_0)/2 with alpha_0 and delta, and is isotropic.
    pub fn lambda0(&self) -> Result<Vec<Rat>, RootDataError> {
        let n = self.ambient.dim;
        let a0 = &self.simple_roots[0];
        let norm0 = self.pairing(a0, a0);
        let last = a0[n - 1].clone();
        if last.is_zero() {
            return Err(RootDataError::Unsolvable);
        }
        let t = norm0.clone() / (rat(2) * last);
        let mut lam = vec![Rat::zero(); n];
        lam[n - 2] = t;
        // Verify the defining conditions exactly.
        if self.pairing(&lam, a0) != norm0.clone() / rat(2) {
            return Err(RootDataError::Unsolvable);
        }
        for alpha in &self.simple_roots[1..] {
            if !self.pairing(&lam, alpha).is_zero() {
                return Err(RootDataError::Unsolvable);
            }
        }
        if self.pairing(&lam, &self.delta) != norm0 / rat(2) {
            return Err(RootDataError::Unsolvable);
        }
        if !self.pairing(&lam, &lam).is_zero() {
            return Err(RootDataError::Unsolvable);
        }
        Ok(lam)
    }

    /// Marks a_i with delta = sum a_i alpha_i; all must be non-negative
    /// integers for a valid catalog entry.
    pub fn delta_marks(&self) -> Option<Vec<i64>> {
        use crate::linalg::Mat;
        let n = self.ambient.dim;
        let cols = self.simple_roots.len();
        let mut m = Mat::zeros(n, cols);
        for (j, alpha) in self.simple_roots.iter().enumerate() {
            for i in 0..n {
                *m.at_mut(i, j) = alpha[i].clone();
            }
        }
        let x = m.solve(&self.delta)?;
        let mut marks = Vec::with_capacity(cols);
        for c in x {
            if !c.denom().is_one() || c.numer().is_negative() {
                return None;
            }
            marks.push(i64::try_from(c.numer().clone()).ok()?);
        }
        Some(marks)
    }

    /// The six Killing-table identities, checked exactly in ambient
    /// coordinates (with c <-> delta, d <-> Lambda_0, H_j <-> alpha_j).
    pub fn killing_table(&self) -> Result<KillingTable, RootDataError> {
        let lam = self.lambda0()?;
        let l = self.rank;
        let finite_symmetric = (1..=l).all(|j| {
            (1..=l).all(|k| {
                self.pairing(&self.simple_roots[j], &self.simple_roots[k])
                    == self.pairing(&self.simple_roots[k], &self.simple_roots[j])
            })
        });
        let delta_orthogonal = self
            .simple_roots
            .iter()
            .all(|alpha| self.pairing(&self.delta, alpha).is_zero());
        let delta_isotropic = self.pairing(&self.delta, &self.delta).is_zero();
        let lambda0_isotropic = self.pairing(&lam, &lam).is_zero();
        let lambda0_orthogonal =
            (1..=l).all(|j| self.pairing(&lam, &self.simple_roots[j]).is_zero());
        let a0 = &self.simple_roots[0];
        let norm0 = self.pairing(a0, a0);
        let level_alpha0 = rat(2) * self.pairing(&lam, a0) / norm0.clone() == Rat::one();
        let level_delta = rat(2) * self.pairing(&lam, &self.delta) / norm0 == Rat::one();
        Ok(KillingTable {
            finite_symmetric,
            delta_orthogonal,
            delta_isotropic,
            lambda0_isotropic,
            lambda0_orthogonal,
            level_normalized: level_alpha0 && level_delta,
        })
    }

    /// Finite roots spanned by alpha_1..alpha_l, generated by root-string
    /// closure in ambient coordinates. Returns (coefficient vectors over
    /// the finite simple roots, ambient vectors) for the positive roots.
    pub fn finite_positive_roots(&self) -> Vec<(Vec<i64>, Vec<Rat>)> {
        let l = self.rank;
        let simples: Vec<&Vec<Rat>> = self.simple_roots[1..=l].iter().collect();
        let mut roots: Vec<(Vec<i64>, Vec<Rat>)> = Vec::new();
        for (i, s) in simples.iter().enumerate() {
            let mut c = vec![0i64; l];
            c[i] = 1;
            roots.push((c, (*s).clone()));
        }
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (c, v) in &frontier {
                for (i, s) in simples.iter().enumerate() {
                    // alpha_i-string through v: p - q = 2(v, a_i)/(a_i, a_i)
                    let cart = rat(2) * self.pairing(v, s) / self.pairing(s, s);
                    assert!(
                        cart.denom().is_one(),
                        "non-integral Cartan pairing in closure"
                    );
                    let cart = i64::try_from(cart.numer().clone()).unwrap();
                    let mut p = 0i64;
                    let mut probe = c.clone();
                    loop {
                        if probe[i] == 0 {
                            break;
                        }
                        probe[i] -= 1;
                        let is_root = probe.iter().all(|&x| x == 0)
                            || roots.iter().any(|(rc, _)| *rc == probe);
                        if is_root && probe.iter().any(|&x| x != 0) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    if p - cart >= 1 {
                        let mut nc = c.clone();
                        nc[i] += 1;
                        if !roots.iter().any(|(rc, _)| *rc == nc) {
                            let nv = add(v, s);
                            roots.push((nc.clone(), nv.clone()));
                            next.push((nc, nv));
                        }
                    }
                }
            }
            frontier = next;
        }
        roots.sort_by_key(|(c, _)| (c.iter().sum::<i64>(), c.clone()));
        roots
    }

    /// All roots with |j| <= jmax: real roots j*delta + alpha and imaginary
    /// roots j*delta with their multiplicities. For twisted families the
    /// layers come from the diagram-automorphism eigenspace decomposition.
    pub fn enumerate_roots(&self, jmax: usize) -> Vec<RootWithMultiplicity> {
        let mut out = Vec::new();
        if self.twist == 1 {
            let finite: Vec<Vec<Rat>> = self
                .finite_positive_roots()
                .into_iter()
                .map(|(_, v)| v)
                .collect();
            let jr = jmax as i64;
            for j in -jr..=jr {
                let jd = scale(&rat(j), &self.delta);
                for v in &finite {
                    out.push(RootWithMultiplicity {
                        coords: add(&jd, v),
                        is_imaginary: false,
                        multiplicity: 1,
                    });
                    out.push(RootWithMultiplicity {
                        coords: add(&jd, &scale(&rat(-1), v)),
                        is_imaginary: false,
                        multiplicity: 1,
                    });
                }
                if j != 0 {
                    out.push(RootWithMultiplicity {
                        coords: jd,
                        is_imaginary: true,
                        multiplicity: self.rank,
                    });
                }
            }
        } else {
            let layers = crate::affine::twisted_layers(self)
                .expect("twisted catalog entry admits a layer decomposition");
            let jr = jmax as i64;
            for j in -jr..=jr {
                let p = j.rem_euclid(self.twist as i64) as usize;
                let jd = scale(&rat(j), &self.delta);
                for w in &layers.real_weights[p] {
                    out.push(RootWithMultiplicity {
                        coords: add(&jd, w),
                        is_imaginary: false,
                        multiplicity: 1,
                    });
                }
                if j != 0 && layers.zero_multiplicity[p] > 0 {
                    out.push(RootWithMultiplicity {
                        coords: jd,
                        is_imaginary: true,
                        multiplicity: layers.zero_multiplicity[p],
                    });
                }
            }
        }
        out.sort_by(|a, b| cmp_coords(&a.coords, &b.coords));
        out
    }
}

pub fn cmp_coords(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillingTable {
    pub finite_symmetric: bool,
    pub delta_orthogonal: bool,
    pub delta_isotropic: bool,
    pub lambda0_isotropic: bool,
    pub lambda0_orthogonal: bool,
    pub level_normalized: bool,
}

impl KillingTable {
    pub fn all_hold(&self) -> bool {
        self.finite_symmetric
            && self.delta_orthogonal
            && self.delta_isotropic
            && self.lambda0_isotropic
            && self.lambda0_orthogonal
            && self.level_normalized
    }
}

/// Catalog GCMs of the given matrix size, used by family identification.
/// Labels are returned in lexicographic order (tie-break order).
pub fn catalog_gcms_of_size(n: usize) -> Vec<(String, GeneralizedCartanMatrix)> {
    if n < 2 || n > 32 {
        return Vec::new();
    }
    let l = n - 1;
    let mut out: Vec<(String, GeneralizedCartanMatrix)> = Vec::new();
    let mut push = |entry: Result<RealizedRootSystem, RootDataError>| {
        if let Ok(r) = entry {
            if let Ok(gcm) = r.cartan_from_roots() {
                out.push((r.family.clone(), gcm));
            }
        }
    };
    push(catalog_by_parts('A', l, 1));
    push(catalog_by_parts('B', l, 1));
    push(catalog_by_parts('C', l, 1));
    push(catalog_by_parts('D', l, 1));
    if (6..=8).contains(&l) {
        push(catalog_by_parts('E', l, 1));
    }
    if l == 4 {
        push(catalog_by_parts('F', 4, 1));
    }
    if l == 2 {
        push(catalog_by_parts('G', 2, 1));
    }
    push(catalog_by_parts('A', 2 * l, 2));
    if l >= 3 {
        push(catalog_by_parts('A', 2 * l - 1, 2));
    }
    if l >= 2 {
        push(catalog_by_parts('D', l + 1, 2));
    }
    if l == 4 {
        push(catalog_by_parts('E', 6, 2));
    }
    if l == 2 {
        push(catalog_by_parts('D', 4, 3));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Every catalog entry with rank <= max_rank, over all fourteen families
/// within the stated parameter ranges.
pub fn all_catalog_entries(max_rank: usize) -> Vec<RealizedRootSystem> {
    let mut out = Vec::new();
    for l in 1..=max_rank {
        out.extend(catalog_by_parts('A', l, 1));
    }
    for l in 3..=max_rank.max(3) {
        if l <= max_rank {
            out.extend(catalog_by_parts('B', l, 1));
        }
    }
    for l in 2..=max_rank.max(2) {
        if l <= max_rank {
            out.extend(catalog_by_parts('C', l, 1));
        }
    }
    for l in 4..=max_rank.max(4) {
        if l <= max_rank {
            out.extend(catalog_by_parts('D', l, 1));
        }
    }
    for s in 6..=8 {
        if s <= max_rank {
            out.extend(catalog_by_parts('E', s, 1));
        }
    }
    if 4 <= max_rank {
        out.extend(catalog_by_parts('F', 4, 1));
    }
    if 2 <= max_rank {
        out.extend(catalog_by_parts('G', 2, 1));
    }
    // Twisted families, parameterized by their affine rank l.
    for l in 1..=max_rank {
        out.extend(catalog_by_parts('A', 2 * l, 2));
    }
    for l in 3..=max_rank.max(3) {
        if l <= max_rank {
            out.extend(catalog_by_parts('A', 2 * l - 1, 2));
        }
    }
    for l in 2..=max_rank.max(2) {
        if l <= max_rank {
            out.extend(catalog_by_parts('D', l + 1, 2));
        }
    }
    if 4 <= max_rank {
        out.extend(catalog_by_parts('E', 6, 2));
    }
    if 2 <= max_rank {
        out.extend(catalog_by_parts('D', 4, 3));
    }
    out
}
