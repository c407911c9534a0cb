//! Generalized Cartan matrices: validation, exact classification by
//! principal minors, affine family identification and symmetrization.

use crate::linalg::bareiss_det;
use crate::scalar::{rat, Rat};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CartanError {
    #[error("diagonal entry A[{i}][{i}] = {value} is not 2")]
    DiagonalNotTwo { i: usize, value: i64 },
    #[error("off-diagonal entry A[{i}][{j}] = {value} is positive")]
    PositiveOffDiagonal { i: usize, j: usize, value: i64 },
    #[error("zero pattern is asymmetric at A[{i}][{j}]")]
    ZeroAsymmetry { i: usize, j: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not symmetrizable")]
    NotSymmetrizable,
}

/// Integer matrix with 2s on the diagonal, non-positive off-diagonal
/// entries and a symmetric zero pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedCartanMatrix {
    entries: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Finite,
    Affine,
    Indefinite,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Kind::Finite => write!(f, "Finite"),
            Kind::Affine => write!(f, "Affine"),
            Kind::Indefinite => write!(f, "Indefinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub kind: Kind,
    /// Catalog label when the matrix is affine and matches a family.
    pub family: Option<String>,
    /// Any further labels the matrix also matched (tie-break record).
    pub ambiguous_with: Vec<String>,
    pub det: Rat,
}

/// Positive rational diagonal d with diag(d)·A symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct Symmetrizer {
    pub diag: Vec<Rat>,
}

/// Validates GCM axioms, reporting the first violation in row-major scan
/// order.
pub fn validate_gcm(entries: Vec<Vec<i64>>) -> Result<GeneralizedCartanMatrix, CartanError> {
    let n = entries.len();
    if n == 0 {
        return Err(CartanError::Empty);
    }
    if entries.iter().any(|r| r.len() != n) {
        return Err(CartanError::NotSquare);
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                if entries[i][i] != 2 {
                    return Err(CartanError::DiagonalNotTwo {
                        i,
                        value: entries[i][i],
                    });
                }
            } else {
                if entries[i][j] > 0 {
                    return Err(CartanError::PositiveOffDiagonal {
                        i,
                        j,
                        value: entries[i][j],
                    });
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(CartanError::ZeroAsymmetry { i, j });
                }
            }
        }
    }
    Ok(GeneralizedCartanMatrix { entries })
}

impl GeneralizedCartanMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &Vec<Vec<i64>> {
        &self.entries
    }

    /// Submatrix on the given index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> GeneralizedCartanMatrix {
        let entries = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect())
            .collect();
        GeneralizedCartanMatrix { entries }
    }

    /// Deletes one row/column; used to pass from affine to finite type.
    pub fn delete_index(&self, k: usize) -> GeneralizedCartanMatrix {
        let idx: Vec<usize> = (0..self.size()).filter(|&i| i != k).collect();
        self.principal_submatrix(&idx)
    }

    pub fn det(&self) -> BigInt {
        let m: Vec<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        bareiss_det(&m)
    }
}

fn det_of_subset(m: &GeneralizedCartanMatrix, subset: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = subset
        .iter()
        .map(|&i| {
            subset
                .iter()
                .map(|&j| BigInt::from(m.entry(i, j)))
                .collect()
        })
        .collect();
    bareiss_det(&sub)
}

/// Exact classification from the determinants of all principal minors.
pub fn classify(m: &GeneralizedCartanMatrix) -> Classification {
    let n = m.size();
    let det = m.det();
    let mut all_proper_positive = true;
    // Every proper nonempty subset of indices.
    for mask in 1u64..(1u64 << n) - 1 {
        let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if det_of_subset(m, &subset) <= BigInt::zero() {
            all_proper_positive = false;
            break;
        }
    }
    let kind = if det > BigInt::zero() && all_proper_positive {
        Kind::Finite
    } else if det.is_zero() && all_proper_positive {
        Kind::Affine
    } else {
        Kind::Indefinite
    };
    let (family, ambiguous_with) = if kind == Kind::Affine {
        match identify_family(m) {
            Some(matched) => (Some(matched.label), matched.ambiguous_with),
            None => (None, Vec::new()),
        }
    } else {
        (None, Vec::new())
    };
    Classification {
        kind,
        family,
        ambiguous_with,
        det: Rat::from(det),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMatch {
    pub label: String,
    /// Permutation p with `catalog[p[i]][p[j]] = input[i][j]`.
    pub permutation: Vec<usize>,
    /// Lexicographically later labels that also matched.
    pub ambiguous_with: Vec<String>,
}

/// Finds the catalog family whose GCM equals `m` up to simultaneous
/// row/column permutation. Candidates are generated from the realized
/// root catalog at the matching size; matching is a degree-pruned
/// backtracking search, feasible for the catalog sizes (n <= 10 in the
/// brute-force fallback regime and structurally pruned everywhere).
pub fn identify_family(m: &GeneralizedCartanMatrix) -> Option<FamilyMatch> {
    let mut labels = Vec::new();
    let mut first: Option<FamilyMatch> = None;
    for (label, candidate) in crate::rootdata::catalog_gcms_of_size(m.size()) {
        if let Some(perm) = permutation_match(&candidate, m) {
            labels.push(label.clone());
            if first.is_none() {
                first = Some(FamilyMatch {
                    label,
                    permutation: perm,
                    ambiguous_with: Vec::new(),
                });
            }
        }
    }
    first.map(|mut fm| {
        fm.ambiguous_with = labels.into_iter().filter(|l| *l != fm.label).collect();
        fm
    })
}

/// Row/column profile used to prune the isomorphism search: the multiset
/// of (A_ij, A_ji) pairs over j != i.
fn profile(m: &GeneralizedCartanMatrix, i: usize) -> Vec<(i64, i64)> {
    let mut p: Vec<(i64, i64)> = (0..m.size())
        .filter(|&j| j != i)
        .map(|j| (m.entry(i, j), m.entry(j, i)))
        .collect();
    p.sort_unstable();
    p
}

/// Searches for a permutation p with a[p[i]][p[j]] = b[i][j].
fn permutation_match(
    a: &GeneralizedCartanMatrix,
    b: &GeneralizedCartanMatrix,
) -> Option<Vec<usize>> {
    let n = a.size();
    if b.size() != n {
        return None;
    }
    let pa: Vec<_> = (0..n).map(|i| profile(a, i)).collect();
    let pb: Vec<_> = (0..n).map(|i| profile(b, i)).collect();
    {
        let mut sa = pa.clone();
        let mut sb = pb.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
    }
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        n: usize,
        a: &GeneralizedCartanMatrix,
        b: &GeneralizedCartanMatrix,
        pa: &[Vec<(i64, i64)>],
        pb: &[Vec<(i64, i64)>],
        assign: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || pa[cand] != pb[k] {
                continue;
            }
            let ok = (0..k).all(|j| {
                let pj = assign[j].unwrap();
                a.entry(cand, pj) == b.entry(k, j) && a.entry(pj, cand) == b.entry(j, k)
            });
            if !ok {
                continue;
            }
            assign[k] = Some(cand);
            used[cand] = true;
            if rec(k + 1, n, a, b, pa, pb, assign, used) {
                return true;
            }
            assign[k] = None;
            used[cand] = false;
        }
        false
    }
    if rec(0, n, a, b, &pa, &pb, &mut assign, &mut used) {
        Some(assign.into_iter().map(|x| x.unwrap()).collect())
    } else {
        None
    }
}

/// Smallest positive integer-proportional d with d_i A_ij = d_j A_ji,
/// found by propagating ratios over a spanning forest of the diagram and
/// checking consistency on the remaining edges.
pub fn symmetrize(m: &GeneralizedCartanMatrix) -> Result<Symmetrizer, CartanError> {
    let n = m.size();
    let mut d: Vec<Option<Rat>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(rat(1));
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..n {
                if i == j || m.entry(i, j) == 0 {
                    continue;
                }
                // d_i A_ij = d_j A_ji  =>  d_j = d_i A_ij / A_ji
                let dj = di.clone() * rat(m.entry(i, j)) / rat(m.entry(j, i));
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push(j);
                    }
                    Some(existing) => {
                        if *existing != dj {
                            return Err(CartanError::NotSymmetrizable);
                        }
                    }
                }
            }
        }
    }
    let mut diag: Vec<Rat> = d.into_iter().map(|x| x.unwrap()).collect();
    // Clear denominators and divide by the gcd of numerators.
    let mut lcm = BigInt::one();
    for v in &diag {
        lcm = num::integer::lcm(lcm, v.denom().clone());
    }
    for v in diag.iter_mut() {
        *v = v.clone() * Rat::from(lcm.clone());
    }
    let mut g = BigInt::zero();
    for v in &diag {
        g = num::integer::gcd(g, v.numer().abs());
    }
    if !g.is_zero() && !g.is_one() {
        for v in diag.iter_mut() {
            *v = v.clone() / Rat::from(g.clone());
        }
    }
    if diag.iter().any(|v| *v <= Rat::zero()) {
        return Err(CartanError::NotSymmetrizable);
    }
    Ok(Symmetrizer { diag })
}

impl Symmetrizer {
    /// The symmetric pairing (alpha_i, alpha_j) = d_j A_ji (equivalently
    /// d_i A_ij), up to the symmetrizer's overall scale.
    pub fn pairing(&self, m: &GeneralizedCartanMatrix, i: usize, j: usize) -> Rat {
        self.diag[i].clone() * rat(m.entry(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcm(rows: &[&[i64]]) -> GeneralizedCartanMatrix {
        validate_gcm(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_gcm(vec![vec![2]]).is_ok());
        assert!(validate_gcm(vec![vec![2, -2], vec![-2, 2]]).is_ok());
        assert_eq!(
            validate_gcm(vec![vec![2, -1], vec![0, 2]]),
            Err(CartanError::ZeroAsymmetry { i: 0, j: 1 })
        );
        assert_eq!(
            validate_gcm(vec![vec![3]]),
            Err(CartanError::DiagonalNotTwo { i: 0, value: 3 })
        );
        assert_eq!(
            validate_gcm(vec![vec![2, 1], vec![-1, 2]]),
            Err(CartanError::PositiveOffDiagonal {
                i: 0,
                j: 1,
                value: 1
            })
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&gcm(&[&[2]])).kind, Kind::Finite);
        assert_eq!(classify(&gcm(&[&[2, -1], &[-1, 2]])).kind, Kind::Finite);
        let c = classify(&gcm(&[&[2, -2], &[-2, 2]]));
        assert_eq!(c.kind, Kind::Affine);
        assert_eq!(c.det, rat(0));
        assert_eq!(c.family.as_deref(), Some("A_1^{(1)}"));
        assert_eq!(classify(&gcm(&[&[2, -3], &[-3, 2]])).kind, Kind::Indefinite);
        assert_eq!(classify(&gcm(&[&[2, -1], &[-1, 2]])).det, rat(3));
    }

    #[test]
    fn identify_examples() {
        let a2_2 = gcm(&[&[2, -1], &[-4, 2]]);
        assert_eq!(identify_family(&a2_2).unwrap().label, "A_2^{(2)}");
        let a2_1 = gcm(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
        assert_eq!(identify_family(&a2_1).unwrap().label, "A_2^{(1)}");
        // permuted transpose-pattern still identifies
        let a2_2_swapped = gcm(&[&[2, -4], &[-1, 2]]);
        assert_eq!(identify_family(&a2_2_swapped).unwrap().label, "A_2^{(2)}");
        // finite A2 is not in the affine catalog
        assert!(identify_family(&gcm(&[&[2, -1], &[-1, 2]])).is_none());
    }

    #[test]
    fn symmetrize_examples() {
        assert_eq!(
            symmetrize(&gcm(&[&[2, -1], &[-1, 2]])).unwrap().diag,
            vec![rat(1), rat(1)]
        );
        assert_eq!(
            symmetrize(&gcm(&[&[2, -2], &[-2, 2]])).unwrap().diag,
            vec![rat(1), rat(1)]
        );
        // d_0 (-1) = d_1 (-4)  =>  d = (4, 1)
        assert_eq!(
            symmetrize(&gcm(&[&[2, -1], &[-4, 2]])).unwrap().diag,
            vec![rat(4), rat(1)]
        );
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn classify_permutation_invariant(pick in 0usize..64, seed in 0u64..u64::MAX) {
            let entries = crate::rootdata::all_catalog_entries(4);
            let r = &entries[pick % entries.len()];
            let g = r.cartan_from_roots().unwrap();
            let n = g.size();
            // Fisher-Yates from a small LCG
            let mut perm: Vec<usize> = (0..n).collect();
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                perm.swap(i, j);
            }
            let permuted = validate_gcm(
                (0..n)
                    .map(|i| (0..n).map(|j| g.entry(perm[i], perm[j])).collect())
                    .collect(),
            )
            .unwrap();
            let c1 = classify(&g);
            let c2 = classify(&permuted);
            proptest::prop_assert_eq!(c1.kind, c2.kind);
            proptest::prop_assert_eq!(c1.family, c2.family);
            proptest::prop_assert_eq!(c1.det, c2.det);
        }
    }

    #[test]
    fn symmetrizer_identity_holds() {
        for rows in [
            vec![vec![2i64, -1, 0], vec![-2, 2, -2], vec![0, -1, 2]],
            vec![vec![2, -1], vec![-3, 2]],
        ] {
            let m = validate_gcm(rows).unwrap();
            let s = symmetrize(&m).unwrap();
            for i in 0..m.size() {
                for j in 0..m.size() {
                    assert_eq!(
                        s.diag[i].clone() * rat(m.entry(i, j)),
                        s.diag[j].clone() * rat(m.entry(j, i))
                    );
                }
            }
        }
    }
}
