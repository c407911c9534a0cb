//! Constructors for the unitarizable classes beyond the integrable one:
//! hermitian-symmetric decompositions with the twisted involution and
//! phase functional (elementary), and the moment functional on the loop
//! algebra of sl(n,1)-type matrices (exceptional).

use crate::affine::LoopElement;
use crate::chevalley::{ChevSym, ChevalleyBasis, Rt};
use crate::linalg::{hermitian_inertia, Mat};
use crate::scalar::{c_from_rat, crat, rat, CRat, Rat};
use num::traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnitaryError {
    #[error("element does not lie in the parabolic")]
    NotInParabolic,
    #[error("node does not define a hermitian symmetric pair (mark != 1)")]
    NotHermitianSymmetric,
    #[error("phase angle must be a rational turn with denominator 1, 2 or 4")]
    BadPhase,
    #[error("phase table violates C_i^{{-k}} = conj(C_i^k) at (rep {rep}, degree {deg})")]
    PhaseAsymmetry { rep: usize, deg: i64 },
    #[error("moment m_0 must be real and non-negative")]
    BadMassMoment,
    #[error("moments violate m_{{-k}} = conj(m_k) at k = {0}")]
    MomentAsymmetry(i64),
    #[error("moment Toeplitz matrix is not positive semidefinite")]
    ToeplitzNotPsd,
    #[error("moment Toeplitz matrix is singular (measure not infinitely supported)")]
    ToeplitzSingular,
    #[error("loop matrix is not traceless")]
    NotTraceless,
    #[error("matrix entry degree {0} outside the moment truncation")]
    MomentOutOfRange(i64),
}

/// Hermitian-symmetric decomposition data: the finite algebra together
/// with the unique noncompact simple root. Root vectors split into
/// p^{+-} (noncompact coefficient +-1) and k (coefficient 0).
#[derive(Debug, Clone)]
pub struct HermitianSymmetricData {
    pub chev: ChevalleyBasis,
    pub noncompact: usize,
}

impl HermitianSymmetricData {
    pub fn new(chev: ChevalleyBasis, noncompact: usize) -> Result<Self, UnitaryError> {
        let top = chev.highest_root();
        let marks = chev.roots.coeffs(top);
        if noncompact >= chev.rank() || marks[noncompact] != 1 {
            return Err(UnitaryError::NotHermitianSymmetric);
        }
        Ok(HermitianSymmetricData { chev, noncompact })
    }

    /// +1 for p^+, -1 for p^-, 0 for k.
    pub fn noncompact_coefficient(&self, r: Rt) -> i64 {
        self.chev.roots.coeffs(r)[self.noncompact]
    }

    pub fn p_plus(&self) -> Vec<Rt> {
        self.root_class(1)
    }

    pub fn p_minus(&self) -> Vec<Rt> {
        self.root_class(-1)
    }

    pub fn k_roots(&self) -> Vec<Rt> {
        self.root_class(0)
    }

    fn root_class(&self, c: i64) -> Vec<Rt> {
        let m = self.chev.roots.positive_roots.len();
        (0..m)
            .flat_map(|i| [Rt::pos(i), Rt::neg_of(i)])
            .filter(|&r| self.noncompact_coefficient(r) == c)
            .collect()
    }

    /// Central element h_c of k: alpha_i(h_c) = 0 for compact simple i,
    /// alpha_nc(h_c) = 1; coordinates over the H_j basis.
    pub fn center_of_k(&self) -> Option<Vec<Rat>> {
        let l = self.chev.rank();
        let mut m = Mat::zeros(l, l);
        for i in 0..l {
            for j in 0..l {
                // alpha_i(H_j) = A_ji
                *m.at_mut(i, j) = rat(self.chev.roots.gcm.entry(j, i));
            }
        }
        let mut rhs = vec![Rat::zero(); l];
        rhs[self.noncompact] = Rat::one();
        m.solve(&rhs)
    }
}

/// The section-5 antilinear anti-involution on loop elements:
/// z^n k^+ -> z^{-n} k^-, z^n p_1^+ -> -z^{-n} p_1^-, z^n h -> z^{-n} h,
/// coefficients conjugated (trivial over the rationals here).
pub fn omega_elementary(d: &HermitianSymmetricData, x: &LoopElement) -> LoopElement {
    let mut out = LoopElement::zero();
    for ((deg, sym), coeff) in &x.terms {
        match sym {
            ChevSym::H(i) => out.add_term(-deg, ChevSym::H(*i), coeff.clone()),
            ChevSym::E(r) => {
                let sign = if d.noncompact_coefficient(*r).rem_euclid(2) == 1 {
                    rat(-1)
                } else {
                    rat(1)
                };
                out.add_term(-deg, ChevSym::E(r.neg()), sign * coeff);
            }
        }
    }
    out.c_coeff = x.c_coeff.clone();
    out.d_coeff = x.d_coeff.clone();
    out
}

/// Exact unit phase: a quarter-turn rotation e^{2 pi i q/4}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phase {
    quarters: u8,
}

impl Phase {
    pub const ONE: Phase = Phase { quarters: 0 };

    /// Angle as a rational number of turns; denominator must divide 4.
    pub fn from_turns(t: &Rat) -> Result<Phase, UnitaryError> {
        let q = t.clone() * rat(4);
        if !q.denom().is_one() {
            return Err(UnitaryError::BadPhase);
        }
        let q = q.numer().clone() % num::bigint::BigInt::from(4);
        let q = i64::try_from(q).unwrap().rem_euclid(4);
        Ok(Phase { quarters: q as u8 })
    }

    pub fn value(&self) -> CRat {
        match self.quarters {
            0 => crat(1),
            1 => CRat::new(Rat::zero(), Rat::one()),
            2 => crat(-1),
            _ => CRat::new(Rat::zero(), -Rat::one()),
        }
    }

    pub fn pow(&self, k: i64) -> Phase {
        let q = (self.quarters as i64 * k).rem_euclid(4);
        Phase { quarters: q as u8 }
    }

    pub fn conj(&self) -> Phase {
        Phase {
            quarters: (4 - self.quarters) % 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhaseFamily {
    /// C^k = zeta^k for a fixed base phase.
    Geometric(Phase),
    /// Explicit table of C^k per degree.
    Explicit(BTreeMap<i64, Phase>),
}

impl PhaseFamily {
    pub fn at(&self, k: i64) -> Option<Phase> {
        match self {
            PhaseFamily::Geometric(z) => Some(z.pow(k)),
            PhaseFamily::Explicit(map) => map.get(&k).copied(),
        }
    }
}

/// Elementary-class data: user-supplied finite highest weights and the
/// unit phases C_i^k.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementarySpec {
    /// Lambda_i values on H_1..H_l, one row per representation.
    pub weights: Vec<Vec<CRat>>,
    pub phases: Vec<PhaseFamily>,
}

impl ElementarySpec {
    pub fn new(weights: Vec<Vec<CRat>>, phases: Vec<PhaseFamily>) -> Result<Self, UnitaryError> {
        if weights.len() != phases.len() {
            return Err(UnitaryError::BadPhase);
        }
        // Hermitian consistency requires C_i^{-k} = conj(C_i^k) wherever
        // the table is explicit; geometric families satisfy it identically.
        for (rep, fam) in phases.iter().enumerate() {
            if let PhaseFamily::Explicit(map) = fam {
                for (&k, &p) in map {
                    match map.get(&-k) {
                        Some(&q) if q == p.conj() => {}
                        _ => return Err(UnitaryError::PhaseAsymmetry { rep, deg: k }),
                    }
                }
            }
        }
        Ok(ElementarySpec { weights, phases })
    }

    pub fn phase(&self, rep: usize, k: i64) -> Option<CRat> {
        self.phases
            .get(rep)
            .and_then(|f| f.at(k))
            .map(|p| p.value())
    }
}

/// Lambda(z^k x) = sum_i C_i^k Lambda_i(x) on the natural parabolic
/// (all loop degrees of the finite Borel, plus the center acting by 0).
pub fn elementary_functional(
    spec: &ElementarySpec,
    chev: &ChevalleyBasis,
    x: &LoopElement,
) -> Result<CRat, UnitaryError> {
    if !x.d_coeff.is_zero() {
        return Err(UnitaryError::NotInParabolic);
    }
    let mut acc = crat(0);
    for ((deg, sym), coeff) in &x.terms {
        match sym {
            ChevSym::H(i) => {
                for rep in 0..spec.weights.len() {
                    let phase = spec
                        .phase(rep, *deg)
                        .ok_or(UnitaryError::PhaseAsymmetry { rep, deg: *deg })?;
                    acc = acc + c_from_rat(coeff.clone()) * phase * spec.weights[rep][*i].clone();
                }
            }
            ChevSym::E(r) if r.is_positive() => {
                // highest-weight functionals kill the nilradical
            }
            ChevSym::E(_) => return Err(UnitaryError::NotInParabolic),
        }
    }
    let _ = chev;
    Ok(acc)
}

/// Truncated moment data of a measure on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalSpec {
    pub n: usize,
    pub truncation: i64,
    moments: BTreeMap<i64, CRat>,
}

impl ExceptionalSpec {
    /// Builds and validates a moment table from the entries with k >= 0
    /// (negative moments are the conjugates); optional positivity and
    /// infinite-support assertions are verified, not trusted.
    pub fn new(
        n: usize,
        truncation: i64,
        given: BTreeMap<i64, CRat>,
        assert_positive: bool,
        assert_infinitely_supported: bool,
    ) -> Result<Self, UnitaryError> {
        let mut moments: BTreeMap<i64, CRat> = BTreeMap::new();
        for (&k, v) in &given {
            if k.abs() > truncation {
                return Err(UnitaryError::MomentOutOfRange(k));
            }
            moments.insert(k, v.clone());
        }
        for k in 0..=truncation {
            let pos = moments.get(&k).cloned();
            let neg = moments.get(&-k).cloned();
            match (pos, neg) {
                (Some(p), Some(m)) => {
                    if m != p.conj() {
                        return Err(UnitaryError::MomentAsymmetry(k));
                    }
                }
                (Some(p), None) => {
                    moments.insert(-k, p.conj());
                }
                (None, Some(m)) => {
                    moments.insert(k, m.conj());
                }
                (None, None) => {
                    moments.insert(k, crat(0));
                    moments.insert(-k, crat(0));
                }
            }
        }
        let m0 = moments[&0].clone();
        if !m0.im.is_zero() || m0.re.is_negative() {
            return Err(UnitaryError::BadMassMoment);
        }
        let spec = ExceptionalSpec {
            n,
            truncation,
            moments,
        };
        if assert_positive || assert_infinitely_supported {
            let size = truncation as usize / 2 + 1;
            let t = spec.toeplitz(size);
            let (_, n_minus, n_zero) = hermitian_inertia(&t);
            if n_minus > 0 {
                return Err(UnitaryError::ToeplitzNotPsd);
            }
            if assert_infinitely_supported && n_zero > 0 {
                return Err(UnitaryError::ToeplitzSingular);
            }
        }
        Ok(spec)
    }

    pub fn moment(&self, k: i64) -> Option<CRat> {
        self.moments.get(&k).cloned()
    }

    /// `T[j][k] = m_{j-k}`, size x size.
    pub fn toeplitz(&self, size: usize) -> Mat<CRat> {
        let mut t = Mat::zeros(size, size);
        for j in 0..size {
            for k in 0..size {
                *t.at_mut(j, k) = self
                    .moment(j as i64 - k as i64)
                    .expect("toeplitz size within truncation");
            }
        }
        t
    }

    /// Lebesgue measure: m_k = delta_{k0}.
    pub fn lebesgue(n: usize, truncation: i64) -> ExceptionalSpec {
        let moments = BTreeMap::from([(0, crat(1))]);
        ExceptionalSpec::new(n, truncation, moments, false, false).unwrap()
    }

    /// Single unit atom at angle zero: m_k = 1 for all k.
    pub fn single_atom(n: usize, truncation: i64) -> ExceptionalSpec {
        let moments = (-truncation..=truncation).map(|k| (k, crat(1))).collect();
        ExceptionalSpec::new(n, truncation, moments, false, false).unwrap()
    }
}

/// Square array of Laurent polynomials, the matrix realization of the
/// exceptional-class loop algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopMatrix {
    pub n: usize,
    /// `entries[i][j]`: degree -> coefficient
    pub entries: Vec<Vec<BTreeMap<i64, CRat>>>,
}

impl LoopMatrix {
    pub fn zero(n: usize) -> Self {
        LoopMatrix {
            n,
            entries: vec![vec![BTreeMap::new(); n + 1]; n + 1],
        }
    }

    pub fn monomial(n: usize, deg: i64, i: usize, j: usize, coeff: CRat) -> Self {
        let mut m = Self::zero(n);
        m.add(deg, i, j, coeff);
        m
    }

    pub fn add(&mut self, deg: i64, i: usize, j: usize, coeff: CRat) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.entries[i][j].entry(deg).or_insert_with(|| crat(0));
        *slot = slot.clone() + coeff;
        if slot.is_zero() {
            self.entries[i][j].remove(&deg);
        }
    }

    pub fn is_traceless(&self) -> bool {
        let mut trace: BTreeMap<i64, CRat> = BTreeMap::new();
        for i in 0..=self.n {
            for (&d, c) in &self.entries[i][i] {
                let e = trace.entry(d).or_insert_with(|| crat(0));
                *e = e.clone() + c.clone();
            }
        }
        trace.values().all(|c| c.is_zero())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..=self.n).all(|i| (0..i).all(|j| self.entries[i][j].is_empty()))
    }

    /// Matrix commutator [A, B] = AB - BA with Laurent-polynomial entries.
    pub fn bracket(&self, other: &LoopMatrix) -> LoopMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = LoopMatrix::zero(n);
        for i in 0..=n {
            for j in 0..=n {
                for k in 0..=n {
                    for (&da, ca) in &self.entries[i][k] {
                        for (&db, cb) in &other.entries[k][j] {
                            out.add(da + db, i, j, ca.clone() * cb.clone());
                        }
                    }
                    for (&da, ca) in &other.entries[i][k] {
                        for (&db, cb) in &self.entries[k][j] {
                            out.add(da + db, i, j, -(ca.clone() * cb.clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Entry-wise involution: (0,0) -> conj a_00(1/z), (0,j) <-> (j,0) with
/// sign -1, (i,j) for i,j >= 1 -> conj a_ji(1/z).
pub fn omega_exceptional(m: &LoopMatrix) -> LoopMatrix {
    let n = m.n;
    let mut out = LoopMatrix::zero(n);
    for i in 0..=n {
        for j in 0..=n {
            let sign = if (i == 0) ^ (j == 0) {
                crat(-1)
            } else {
                crat(1)
            };
            for (&d, c) in &m.entries[i][j] {
                out.add(-d, j, i, sign.clone() * c.conj());
            }
        }
    }
    out
}

/// Lambda on the upper-triangular parabolic: -sum_k (a_00)_k m_k, zero on
/// every other entry.
pub fn exceptional_functional(
    spec: &ExceptionalSpec,
    m: &LoopMatrix,
) -> Result<CRat, UnitaryError> {
    if m.n != spec.n {
        return Err(UnitaryError::NotInParabolic);
    }
    if !m.is_upper_triangular() {
        return Err(UnitaryError::NotInParabolic);
    }
    if !m.is_traceless() {
        return Err(UnitaryError::NotTraceless);
    }
    let mut acc = crat(0);
    for (&k, c) in &m.entries[0][0] {
        let mk = spec.moment(k).ok_or(UnitaryError::MomentOutOfRange(k))?;
        acc = acc - c.clone() * mk;
    }
    Ok(acc)
}

/// Gram certificates of the exceptional module, delegated to the Verma
/// engine over the lower-triangular loop parabolic.
pub fn gram_exceptional(
    spec: &ExceptionalSpec,
    depth: usize,
    window: i64,
) -> Result<Vec<crate::verma::GramCertificate>, crate::verma::VermaError> {
    let hw = crate::verma::HighestWeightSpec::exceptional(spec.clone(), window)?;
    crate::verma::gram_all(&hw, depth)
}
