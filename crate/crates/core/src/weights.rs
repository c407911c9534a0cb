//! Weight functionals on the affine Cartan subalgebra, fundamental
//! weights via the mu coefficients, and integrable highest-weight
//! specifications.

use crate::cartan::GeneralizedCartanMatrix;
use crate::chevalley::ChevalleyBasis;
use crate::linalg::Mat;
use crate::scalar::{rat, Rat};
use num::traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightsError {
    #[error("finite Cartan block is not invertible")]
    SingularFiniteBlock,
    #[error("fundamental-weight verification failed: two routes disagree")]
    VerificationFailed,
    #[error("weight is not dominant integral at index {0}")]
    NotDominantIntegral(usize),
}

/// A functional on the affine Cartan subalgebra, stored by its values on
/// the Chevalley generators h_0..h_l and on the scaling element d.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunctional {
    pub on_h: Vec<Rat>,
    pub on_d: Rat,
}

impl WeightFunctional {
    pub fn zero(rank: usize) -> Self {
        WeightFunctional {
            on_h: vec![Rat::zero(); rank + 1],
            on_d: Rat::zero(),
        }
    }

    pub fn add(&self, other: &WeightFunctional) -> WeightFunctional {
        WeightFunctional {
            on_h: self
                .on_h
                .iter()
                .zip(&other.on_h)
                .map(|(a, b)| a + b)
                .collect(),
            on_d: &self.on_d + &other.on_d,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalWeightSet {
    /// mu_1..mu_l with Lambda_j = dot-Lambda_j + mu_j Lambda_0.
    pub mu: Vec<Rat>,
    /// Lambda_0..Lambda_l as value tables (Lambda_j(h_k) = delta_jk).
    pub lambdas: Vec<WeightFunctional>,
}

/// mu_j = -sum_k A_0k (finite-block-inverse)_kj, computed exactly from the
/// Cartan matrix and verified against the independent ambient solve of
/// Lambda_j(H_k) = delta_jk over the realized root coordinates.
pub fn fundamental_weights(
    r: &crate::rootdata::RealizedRootSystem,
) -> Result<FundamentalWeightSet, WeightsError> {
    let a = r
        .cartan_from_roots()
        .map_err(|_| WeightsError::SingularFiniteBlock)?;
    let mu = mu_from_formula(&a)?;
    let check = mu_from_realization(r)?;
    if mu != check {
        return Err(WeightsError::VerificationFailed);
    }
    let n = a.size();
    let lambdas = (0..n)
        .map(|j| {
            let mut w = WeightFunctional::zero(n - 1);
            w.on_h[j] = rat(1);
            w
        })
        .collect();
    Ok(FundamentalWeightSet { mu, lambdas })
}

/// The published formula: mu_j = -sum_{k=1..l} A_0k ((A-dot)^{-1})_{kj},
/// reading A_0k as row 0 of the affine matrix restricted to columns 1..l.
pub fn mu_from_formula(a: &GeneralizedCartanMatrix) -> Result<Vec<Rat>, WeightsError> {
    let l = a.size() - 1;
    let finite = a.delete_index(0);
    let mut m = Mat::zeros(l, l);
    for i in 0..l {
        for j in 0..l {
            *m.at_mut(i, j) = rat(finite.entry(i, j));
        }
    }
    let inv = m.inverse().ok_or(WeightsError::SingularFiniteBlock)?;
    let mut mu = Vec::with_capacity(l);
    for j in 0..l {
        let mut acc = Rat::zero();
        for k in 0..l {
            acc += rat(a.entry(0, k + 1)) * inv.at(k, j).clone();
        }
        mu.push(-acc);
    }
    Ok(mu)
}

/// Independent route over the realized coordinates: solve for the ambient
/// vector of each finite fundamental weight from
/// 2(w, alpha_k)/(alpha_k, alpha_k) = delta_jk (k = 1..l), then read off
/// mu_j = -2(w, alpha_0)/(alpha_0, alpha_0). The full defining system
/// Lambda_j(H_k) = delta_jk (k = 0..l) is re-verified on the assembled
/// ambient functional before returning.
pub fn mu_from_realization(
    r: &crate::rootdata::RealizedRootSystem,
) -> Result<Vec<Rat>, WeightsError> {
    let l = r.rank;
    let mut system = Mat::zeros(l, l);
    for k in 1..=l {
        let nk = r.pairing(&r.simple_roots[k], &r.simple_roots[k]);
        for i in 1..=l {
            *system.at_mut(k - 1, i - 1) =
                rat(2) * r.pairing(&r.simple_roots[i], &r.simple_roots[k]) / nk.clone();
        }
    }
    let a0 = &r.simple_roots[0];
    let n0 = r.pairing(a0, a0);
    let lam0 = r.lambda0().map_err(|_| WeightsError::VerificationFailed)?;
    let mut mu = Vec::with_capacity(l);
    for j in 1..=l {
        let mut rhs = vec![Rat::zero(); l];
        rhs[j - 1] = rat(1);
        let x = system
            .solve(&rhs)
            .ok_or(WeightsError::SingularFiniteBlock)?;
        let dim = r.ambient.dim;
        let mut w = vec![Rat::zero(); dim];
        for (i, xi) in x.iter().enumerate() {
            for (t, c) in r.simple_roots[i + 1].iter().enumerate() {
                w[t] += xi * c;
            }
        }
        let mu_j = -rat(2) * r.pairing(&w, a0) / n0.clone();
        // Lambda_j ambient = w + mu_j Lambda_0: verify the defining system.
        for (t, c) in lam0.iter().enumerate() {
            w[t] += mu_j.clone() * c;
        }
        for k in 0..=l {
            let ak = &r.simple_roots[k];
            let val = rat(2) * r.pairing(&w, ak) / r.pairing(ak, ak);
            if val != rat(i64::from(j == k)) {
                return Err(WeightsError::VerificationFailed);
            }
        }
        mu.push(mu_j);
    }
    Ok(mu)
}

/// For untwisted families, h_0 = c - H_{gamma_r} also forces mu_j to be
/// the j-th comark (coefficient of the highest-root coroot).
pub fn mu_from_coroot_solve(chev: &ChevalleyBasis) -> Vec<Rat> {
    chev.roots
        .coroot_coeffs(chev.highest_root())
        .into_iter()
        .map(rat)
        .collect()
}

/// The dominant integral weight with Lambda(h_i) = m_i, Lambda(d) = 0.
pub fn integrable_spec(m: &[i64]) -> Result<WeightFunctional, WeightsError> {
    if let Some(i) = m.iter().position(|&x| x < 0) {
        return Err(WeightsError::NotDominantIntegral(i));
    }
    Ok(WeightFunctional {
        on_h: m.iter().map(|&x| rat(x)).collect(),
        on_d: Rat::zero(),
    })
}

/// Lambda(c) = m_0 + dot-Lambda(H_{gamma_r}) under the (gamma_r, gamma_r) = 2
/// normalization.
pub fn level(lambda: &WeightFunctional, chev: &ChevalleyBasis) -> Rat {
    let comarks = chev.roots.coroot_coeffs(chev.highest_root());
    let mut acc = lambda.on_h[0].clone();
    for (i, c) in comarks.iter().enumerate() {
        acc += rat(*c) * lambda.on_h[i + 1].clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{finite_roots, structure_constants};
    use crate::rootdata::catalog_by_parts;
    use crate::scalar::ratio;

    fn affine_gcm(letter: char, sub: usize, twist: usize) -> GeneralizedCartanMatrix {
        catalog_by_parts(letter, sub, twist)
            .unwrap()
            .cartan_from_roots()
            .unwrap()
    }

    fn chev_of(a: &GeneralizedCartanMatrix) -> ChevalleyBasis {
        structure_constants(&finite_roots(&a.delete_index(0)).unwrap())
    }

    #[test]
    fn mu_examples() {
        let a11 = affine_gcm('A', 1, 1);
        assert_eq!(mu_from_formula(&a11).unwrap(), vec![rat(1)]);
        let a21 = affine_gcm('A', 2, 1);
        assert_eq!(mu_from_formula(&a21).unwrap(), vec![rat(1), rat(1)]);
        // C_2^{(1)}: comarks of gamma_r = 2e_1 are (1, 1)
        let c21 = affine_gcm('C', 2, 1);
        assert_eq!(mu_from_formula(&c21).unwrap(), vec![rat(1), rat(1)]);
    }

    #[test]
    fn two_route_agreement_small() {
        for (letter, sub, twist) in [
            ('A', 1, 1),
            ('A', 3, 1),
            ('C', 2, 1),
            ('G', 2, 1),
            ('A', 2, 2),
            ('D', 4, 3),
        ] {
            let r = catalog_by_parts(letter, sub, twist).unwrap();
            let a = r.cartan_from_roots().unwrap();
            let fw = fundamental_weights(&r).unwrap();
            assert_eq!(fw.mu, mu_from_realization(&r).unwrap());
            assert_eq!(fw.lambdas.len(), a.size());
            for (j, lam) in fw.lambdas.iter().enumerate() {
                for k in 0..a.size() {
                    assert_eq!(lam.on_h[k], rat(i64::from(j == k)));
                }
                assert!(lam.on_d.is_zero());
            }
            // untwisted families: mu also equals the comark vector
            if twist == 1 {
                assert_eq!(fw.mu, mu_from_coroot_solve(&chev_of(&a)));
            }
        }
    }

    #[test]
    fn twisted_mu_values() {
        // A_2^{(2)}: finite block [2], A_01 = -1, so mu_1 = 1/2
        let r = catalog_by_parts('A', 2, 2).unwrap();
        assert_eq!(fundamental_weights(&r).unwrap().mu, vec![ratio(1, 2)]);
    }

    #[test]
    fn integrable_and_level() {
        let a11 = affine_gcm('A', 1, 1);
        let chev = chev_of(&a11);
        let lam0 = integrable_spec(&[1, 0]).unwrap();
        assert_eq!(level(&lam0, &chev), rat(1));
        let lam01 = integrable_spec(&[1, 1]).unwrap();
        assert_eq!(level(&lam01, &chev), rat(2));
        let zero = integrable_spec(&[0, 0]).unwrap();
        assert_eq!(level(&zero, &chev), rat(0));
        assert_eq!(
            integrable_spec(&[0, -1]),
            Err(WeightsError::NotDominantIntegral(1))
        );
        // additivity
        assert_eq!(
            level(&lam0.add(&lam01), &chev),
            level(&lam0, &chev) + level(&lam01, &chev)
        );
    }

    #[test]
    fn mu_can_be_fractional_free() {
        // mu comes out integral for A_2 even though the inverse finite
        // block has denominators 3.
        let r = catalog_by_parts('A', 2, 1).unwrap();
        assert_eq!(fundamental_weights(&r).unwrap().mu, vec![rat(1), rat(1)]);
    }
}
