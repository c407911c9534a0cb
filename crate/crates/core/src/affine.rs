//! The untwisted affine algebra as a centrally extended loop algebra,
//! its Chevalley generators, and twisted algebras as eigenspace
//! decompositions under lifted diagram automorphisms.

use crate::chevalley::{
    finite_gcm, finite_roots, structure_constants, ChevSym, ChevalleyBasis, Rt,
};
use crate::linalg::Mat;
use crate::rootdata::{RealizedRootSystem, RootDataError};
use crate::scalar::{rat, Cyc, Rat};
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AffineError {
    #[error("permutation does not preserve the Cartan matrix")]
    NotAnAutomorphism,
    #[error("automorphism order mismatch: psi^q is not the identity")]
    OrderMismatch,
    #[error("twisted layer construction failed: {0}")]
    Layer(String),
}

/// Element of `C c + C d + sum z^j (x)` with exact rational coefficients.
/// Stored in canonical form: no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LoopElement {
    pub terms: BTreeMap<(i64, ChevSym), Rat>,
    pub c_coeff: Rat,
    pub d_coeff: Rat,
}

impl LoopElement {
    pub fn zero() -> Self {
        LoopElement {
            terms: BTreeMap::new(),
            c_coeff: Rat::zero(),
            d_coeff: Rat::zero(),
        }
    }

    pub fn c() -> Self {
        LoopElement {
            c_coeff: Rat::one(),
            ..Self::zero()
        }
    }

    pub fn d() -> Self {
        LoopElement {
            d_coeff: Rat::one(),
            ..Self::zero()
        }
    }

    pub fn term(deg: i64, sym: ChevSym, coeff: Rat) -> Self {
        let mut e = Self::zero();
        e.add_term(deg, sym, coeff);
        e
    }

    pub fn add_term(&mut self, deg: i64, sym: ChevSym, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((deg, sym)).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(deg, sym));
        }
    }

    pub fn add_assign(&mut self, other: &LoopElement) {
        for ((deg, sym), coeff) in &other.terms {
            self.add_term(*deg, *sym, coeff.clone());
        }
        self.c_coeff += other.c_coeff.clone();
        self.d_coeff += other.d_coeff.clone();
    }

    pub fn scaled(&self, s: &Rat) -> LoopElement {
        let mut out = Self::zero();
        for ((deg, sym), coeff) in &self.terms {
            out.add_term(*deg, *sym, coeff * s);
        }
        out.c_coeff = self.c_coeff.clone() * s;
        out.d_coeff = self.d_coeff.clone() * s;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c_coeff.is_zero() && self.d_coeff.is_zero()
    }
}

/// The loop realization over a fixed finite Chevalley basis.
pub struct AffineAlgebra {
    pub chev: ChevalleyBasis,
}

impl AffineAlgebra {
    pub fn new(chev: ChevalleyBasis) -> Self {
        AffineAlgebra { chev }
    }

    /// `[z^j a, z^k b] = z^{j+k} [a,b] + j delta_{j,-k} B(a,b) c`,
    /// `[z^j a, c] = 0`, `[d, z^j a] = j z^j a`, `[d, c] = 0`.
    pub fn bracket(&self, x: &LoopElement, y: &LoopElement) -> LoopElement {
        let mut out = LoopElement::zero();
        for ((j, s1), c1) in &x.terms {
            for ((k, s2), c2) in &y.terms {
                let coeff = c1 * c2;
                for (sym, sc) in self.chev.bracket(s1, s2) {
                    out.add_term(j + k, sym, coeff.clone() * sc);
                }
                if *j == -*k && *j != 0 {
                    let b = self.chev.form(s1, s2);
                    if !b.is_zero() {
                        out.c_coeff += coeff * rat(*j) * b;
                    }
                }
            }
        }
        if !x.d_coeff.is_zero() {
            for ((k, s2), c2) in &y.terms {
                out.add_term(*k, *s2, x.d_coeff.clone() * c2 * rat(*k));
            }
        }
        if !y.d_coeff.is_zero() {
            for ((j, s1), c1) in &x.terms {
                out.add_term(*j, *s1, -(y.d_coeff.clone() * c1 * rat(*j)));
            }
        }
        out
    }
}

/// Affine Chevalley generators: e_0 = z F_{gamma_r}, f_0 = z^{-1} E_{gamma_r},
/// h_0 = (2/(gamma_r,gamma_r)) c - H_{gamma_r}, and e_i = E_i etc. at degree 0.
#[derive(Debug, Clone)]
pub struct AffineGenerators {
    pub e: Vec<LoopElement>,
    pub f: Vec<LoopElement>,
    pub h: Vec<LoopElement>,
}

pub fn affine_generators(chev: &ChevalleyBasis) -> AffineGenerators {
    let l = chev.rank();
    let top = chev.highest_root();
    let mut e = Vec::with_capacity(l + 1);
    let mut f = Vec::with_capacity(l + 1);
    let mut h = Vec::with_capacity(l + 1);
    // index 0
    e.push(LoopElement::term(1, ChevSym::E(top.neg()), Rat::one()));
    f.push(LoopElement::term(-1, ChevSym::E(top), Rat::one()));
    let mut h0 = LoopElement::c().scaled(&(rat(2) / chev.pairing(top, top)));
    for (i, cc) in chev.roots.coroot_coeffs(top).iter().enumerate() {
        h0.add_term(0, ChevSym::H(i), rat(-*cc));
    }
    h.push(h0);
    for i in 0..l {
        let mut unit = vec![0i64; l];
        unit[i] = 1;
        let r = chev.roots.lookup(&unit).expect("simple root");
        e.push(LoopElement::term(0, ChevSym::E(r), Rat::one()));
        f.push(LoopElement::term(0, ChevSym::E(r.neg()), Rat::one()));
        h.push(LoopElement::term(0, ChevSym::H(i), Rat::one()));
    }
    AffineGenerators { e, f, h }
}

/// Order-q permutation of the finite simple-root indices preserving the
/// Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
    pub order: usize,
}

impl DiagramAutomorphism {
    pub fn new(perm: Vec<usize>, chev: &ChevalleyBasis) -> Result<Self, AffineError> {
        let l = chev.rank();
        if perm.len() != l {
            return Err(AffineError::NotAnAutomorphism);
        }
        let mut seen = vec![false; l];
        for &p in &perm {
            if p >= l || seen[p] {
                return Err(AffineError::NotAnAutomorphism);
            }
            seen[p] = true;
        }
        for i in 0..l {
            for j in 0..l {
                if chev.roots.gcm.entry(perm[i], perm[j]) != chev.roots.gcm.entry(i, j) {
                    return Err(AffineError::NotAnAutomorphism);
                }
            }
        }
        let mut order = 1usize;
        let mut cur: Vec<usize> = perm.clone();
        while cur.iter().enumerate().any(|(i, &x)| x != i) {
            cur = cur.iter().map(|&x| perm[x]).collect();
            order += 1;
            if order > l + 1 {
                return Err(AffineError::NotAnAutomorphism);
            }
        }
        Ok(DiagramAutomorphism { perm, order })
    }
}

/// The lifted automorphism psi_tau as a signed permutation of the
/// Chevalley basis: H_i -> H_{tau(i)}, E_beta -> sign(beta) E_{tau(beta)}.
#[derive(Debug, Clone)]
pub struct LiftedAutomorphism {
    pub tau: DiagramAutomorphism,
    /// Per positive-root index: (image positive-root index, sign).
    pub root_image: Vec<(usize, i64)>,
}

pub fn lift_automorphism(
    chev: &ChevalleyBasis,
    tau: &DiagramAutomorphism,
) -> Result<LiftedAutomorphism, AffineError> {
    let r = &chev.roots;
    let m = r.positive_roots.len();
    let l = r.rank;
    let map_coeffs = |c: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; l];
        for (k, &v) in c.iter().enumerate() {
            out[tau.perm[k]] = v;
        }
        out
    };
    let mut image: Vec<Option<(usize, i64)>> = vec![None; m];
    // Roots are stored sorted by height, so a single pass is a valid
    // induction over height.
    for idx in 0..m {
        let coeffs = r.positive_roots[idx].clone();
        let target = map_coeffs(&coeffs);
        let t_idx = r
            .lookup(&target)
            .ok_or(AffineError::NotAnAutomorphism)?
            .index();
        if coeffs.iter().sum::<i64>() == 1 {
            image[idx] = Some((t_idx, 1));
            continue;
        }
        // first special decomposition gamma = a + b
        let mut found = None;
        'search: for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                let sum: Vec<i64> = r.positive_roots[a]
                    .iter()
                    .zip(&r.positive_roots[b])
                    .map(|(x, y)| x + y)
                    .collect();
                if sum == coeffs {
                    found = Some((a, b));
                    break 'search;
                }
            }
        }
        let (a, b) = found.ok_or(AffineError::NotAnAutomorphism)?;
        let (ia, sa) = image[a].expect("height induction");
        let (ib, sb) = image[b].expect("height induction");
        let n_ab = chev.n_constant(Rt::pos(a), Rt::pos(b));
        let n_img = chev.n_constant(Rt::pos(ia), Rt::pos(ib));
        debug_assert_eq!(n_img.abs(), n_ab.abs());
        let ratio = sa * sb * n_img / n_ab;
        image[idx] = Some((t_idx, ratio));
    }
    let root_image: Vec<(usize, i64)> = image.into_iter().map(|x| x.unwrap()).collect();
    if root_image.iter().any(|&(_, s)| s.abs() != 1) {
        return Err(AffineError::OrderMismatch);
    }
    let lifted = LiftedAutomorphism {
        tau: tau.clone(),
        root_image,
    };
    // psi^q must be the identity on every basis symbol.
    let basis = chev.basis();
    for sym in &basis {
        let mut cur = (*sym, 1i64);
        for _ in 0..tau.order {
            cur = lifted.apply_sym(cur.0, cur.1);
        }
        if cur != (*sym, 1) {
            return Err(AffineError::OrderMismatch);
        }
    }
    Ok(lifted)
}

impl LiftedAutomorphism {
    pub fn apply_sym(&self, sym: ChevSym, sign: i64) -> (ChevSym, i64) {
        match sym {
            ChevSym::H(i) => (ChevSym::H(self.tau.perm[i]), sign),
            ChevSym::E(rt) => {
                let (img, s) = self.root_image[rt.index()];
                let out = if rt.is_positive() {
                    Rt::pos(img)
                } else {
                    Rt::neg_of(img)
                };
                (ChevSym::E(out), sign * s)
            }
        }
    }
}

/// Exact eigenspace bases of psi_tau over Q(w); eigenvectors are stored
/// in the coordinates of `symbols`.
#[derive(Debug, Clone)]
pub struct TwistedDecomposition {
    pub order: usize,
    pub symbols: Vec<ChevSym>,
    pub eigenspaces: Vec<Vec<Vec<Cyc>>>,
}

impl TwistedDecomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.eigenspaces.iter().map(|b| b.len()).collect()
    }
}

/// Eigenspace decomposition of the lifted automorphism, by exact kernel
/// computation of (P - zeta^p I) over the cyclotomic rationals.
pub fn twist(
    chev: &ChevalleyBasis,
    tau: &DiagramAutomorphism,
) -> Result<TwistedDecomposition, AffineError> {
    let lifted = lift_automorphism(chev, tau)?;
    let symbols = chev.basis();
    let index_of: BTreeMap<ChevSym, usize> =
        symbols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = symbols.len();
    let q = tau.order;
    let mut p_mat: Mat<Cyc> = Mat::zeros(n, n);
    for (col, sym) in symbols.iter().enumerate() {
        let (img, s) = lifted.apply_sym(*sym, 1);
        let row = index_of[&img];
        *p_mat.at_mut(row, col) = Cyc::from_rat(rat(s));
    }
    let zeta = |p: usize| -> Cyc {
        match q {
            1 => Cyc::one(),
            2 => Cyc::from_rat(rat(if p % 2 == 0 { 1 } else { -1 })),
            3 => Cyc::omega_pow(p as i64),
            _ => unreachable!("diagram automorphisms have order 1, 2 or 3"),
        }
    };
    let mut eigenspaces = Vec::with_capacity(q);
    for p in 0..q {
        let mut m = p_mat.clone();
        let z = zeta(p);
        for i in 0..n {
            let cur = m.at(i, i).clone();
            *m.at_mut(i, i) = cur - z.clone();
        }
        eigenspaces.push(m.kernel());
    }
    let total: usize = eigenspaces.iter().map(|b| b.len()).sum();
    if total != n {
        return Err(AffineError::OrderMismatch);
    }
    Ok(TwistedDecomposition {
        order: q,
        symbols,
        eigenspaces,
    })
}

/// Weight layers of a twisted (or trivially, untwisted) catalog entry:
/// the nonzero weights of each eigenspace mapped into the realized
/// ambient coordinates, plus the zero-weight multiplicities that give the
/// imaginary-root multiplicities per residue class.
#[derive(Debug, Clone)]
pub struct TwistedLayers {
    pub order: usize,
    pub real_weights: Vec<Vec<Vec<Rat>>>,
    pub zero_multiplicity: Vec<usize>,
}

pub fn twisted_layers(r: &RealizedRootSystem) -> Result<TwistedLayers, AffineError> {
    let (parent_gcm, perm) = match &r.tau {
        Some(t) => {
            let gcm = finite_gcm(t.parent_letter, t.parent_rank)
                .ok_or_else(|| AffineError::Layer("unknown parent family".into()))?;
            (gcm, t.perm.clone())
        }
        None => {
            let gcm = r
                .cartan_from_roots()
                .map_err(|e| AffineError::Layer(e.to_string()))?
                .delete_index(0);
            (gcm, (0..r.rank).collect())
        }
    };
    let chev = structure_constants(
        &finite_roots(&parent_gcm).map_err(|e| AffineError::Layer(e.to_string()))?,
    );
    let tau = DiagramAutomorphism::new(perm.clone(), &chev)?;
    if tau.order != r.twist {
        return Err(AffineError::OrderMismatch);
    }
    let dec = twist(&chev, &tau)?;
    // tau-orbits on parent simple indices, ordered by minimal element,
    // correspond to the twisted simple roots alpha_1..alpha_l.
    let parent_rank = chev.rank();
    let mut orbit_of = vec![usize::MAX; parent_rank];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..parent_rank {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let mut orbit = vec![start];
        let mut cur = perm[start];
        while cur != start {
            orbit.push(cur);
            cur = perm[cur];
        }
        let id = orbits.len();
        for &k in &orbit {
            orbit_of[k] = id;
        }
        orbits.push(orbit);
    }
    if orbits.len() != r.rank {
        return Err(AffineError::Layer(format!(
            "orbit count {} does not match twisted rank {}",
            orbits.len(),
            r.rank
        )));
    }
    let restrict = |coeffs: &[i64]| -> Vec<i64> {
        let mut c = vec![0i64; orbits.len()];
        for (k, &b) in coeffs.iter().enumerate() {
            c[orbit_of[k]] += b;
        }
        c
    };
    let dim = r.ambient.dim;
    let mut real_weights = Vec::with_capacity(dec.order);
    let mut zero_multiplicity = Vec::with_capacity(dec.order);
    for basis in &dec.eigenspaces {
        let mut weights: Vec<Vec<Rat>> = Vec::new();
        let mut zeros = 0usize;
        for vec in basis {
            let mut restricted: Option<Vec<i64>> = None;
            let mut cartan_only = true;
            for (i, coeff) in vec.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                match dec.symbols[i] {
                    ChevSym::H(_) => {}
                    ChevSym::E(rt) => {
                        cartan_only = false;
                        let c = restrict(&chev.roots.coeffs(rt));
                        match &restricted {
                            None => restricted = Some(c),
                            Some(prev) => {
                                if *prev != c {
                                    return Err(AffineError::Layer(
                                        "eigenvector mixes restricted weights".into(),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            if cartan_only {
                zeros += 1;
                continue;
            }
            let c = restricted.unwrap();
            let mut w = vec![Rat::zero(); dim];
            for (i, &ci) in c.iter().enumerate() {
                if ci != 0 {
                    for (x, a) in w.iter_mut().zip(&r.simple_roots[i + 1]) {
                        *x += rat(ci) * a;
                    }
                }
            }
            weights.push(w);
        }
        weights.sort_by(|a, b| crate::rootdata::cmp_coords(a, b));
        weights.dedup();
        if weights.len() != basis.len() - zeros {
            return Err(AffineError::Layer("repeated nonzero layer weight".into()));
        }
        real_weights.push(weights);
        zero_multiplicity.push(zeros);
    }
    Ok(TwistedLayers {
        order: dec.order,
        real_weights,
        zero_multiplicity,
    })
}

/// Consistency report between a twisted catalog entry and the layer data
/// computed from its parent algebra and diagram automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedRootReport {
    pub layer_zero_matches_closure: bool,
    pub alpha0_in_first_layer: bool,
    pub weights_negation_symmetric: bool,
    pub real_roots_positive_norm: bool,
    pub dimension_sum_matches: bool,
}

impl TwistedRootReport {
    pub fn consistent(&self) -> bool {
        self.layer_zero_matches_closure
            && self.alpha0_in_first_layer
            && self.weights_negation_symmetric
            && self.real_roots_positive_norm
            && self.dimension_sum_matches
    }
}

pub fn twisted_root_check(
    layers: &TwistedLayers,
    r: &RealizedRootSystem,
) -> Result<TwistedRootReport, RootDataError> {
    // Layer 0 must reproduce the root-string closure of alpha_1..alpha_l.
    let mut closure: Vec<Vec<Rat>> = Vec::new();
    for (_, v) in r.finite_positive_roots() {
        closure.push(v.iter().map(|x| -x.clone()).collect());
        closure.push(v);
    }
    closure.sort_by(|a, b| crate::rootdata::cmp_coords(a, b));
    let layer_zero_matches_closure = layers.real_weights[0] == closure;

    // alpha_0 - delta must be a weight of the layer at residue 1 mod q.
    let diff: Vec<Rat> = r.simple_roots[0]
        .iter()
        .zip(&r.delta)
        .map(|(a, d)| a - d)
        .collect();
    let p1 = 1 % layers.order;
    let alpha0_in_first_layer = layers.real_weights[p1].contains(&diff);

    let mut weights_negation_symmetric = true;
    let mut real_roots_positive_norm = true;
    for ws in &layers.real_weights {
        for w in ws {
            let neg: Vec<Rat> = w.iter().map(|x| -x.clone()).collect();
            if !ws.contains(&neg) {
                weights_negation_symmetric = false;
            }
            if r.pairing(w, w) <= Rat::zero() {
                real_roots_positive_norm = false;
            }
        }
    }

    let parent_dim = match &r.tau {
        Some(t) => {
            let gcm = finite_gcm(t.parent_letter, t.parent_rank).unwrap();
            let roots = finite_roots(&gcm).map_err(|_| RootDataError::Unsolvable)?;
            roots.rank + roots.root_count()
        }
        None => r.rank + 2 * r.finite_positive_roots().len(),
    };
    let total: usize = layers.real_weights.iter().map(|ws| ws.len()).sum::<usize>()
        + layers.zero_multiplicity.iter().sum::<usize>();
    let dimension_sum_matches = total == parent_dim;

    Ok(TwistedRootReport {
        layer_zero_matches_closure,
        alpha0_in_first_layer,
        weights_negation_symmetric,
        real_roots_positive_norm,
        dimension_sum_matches,
    })
}
