//! Generalized Verma modules and their contravariant Hermitian forms.
//!
//! A highest weight specification fixes an algebra with a splitting
//! g = p (+) n, an antilinear anti-involution omega with g = p + omega(p),
//! and a one-dimensional representation Lambda of p. The module is
//! realized on the PBW basis of U(n); the form is
//! H(u, v) = Lambda(beta(omega(v) u)), evaluated by straightening words
//! against the highest weight vector. Gram blocks per weight are exact
//! and their inertia is computed without floating point.

use crate::affine::AffineAlgebra;
use crate::chevalley::{ChevSym, ChevalleyBasis, Rt};
use crate::linalg::{hermitian_inertia, Mat};
use crate::scalar::{c_from_rat, crat, rat, CRat, Rat};
use crate::unitary::{ElementarySpec, ExceptionalSpec};
use num::traits::{One, Zero};
use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VermaError {
    #[error("cutoff produces too many monomials; raise limits deliberately")]
    CutoffTooLarge,
    #[error("rewriting exceeded the term budget")]
    DepthOverflow,
    #[error("moment index {0} outside the truncation window")]
    MomentOutOfRange(i64),
    #[error("phase C_i^k missing for representation {rep} at degree {deg}")]
    PhaseOutOfRange { rep: usize, deg: i64 },
    #[error("unsupported specification: {0}")]
    Unsupported(String),
}

/// Basis symbol of the ambient algebra, shared by all backends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    /// Central element of the loop extension.
    C,
    /// Degree derivation.
    D,
    /// z^deg tensor a finite Chevalley symbol.
    Loop(i64, ChevSym),
    /// z^deg tensor E_{ij} in sl(n+1), i != j.
    MatE(i64, u8, u8),
    /// z^deg tensor (E_ii - E_{i+1,i+1}).
    MatD(i64, u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Negative,
    Parabolic,
}

/// Admissible total orders on the negative basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NegOrder {
    #[default]
    Standard,
    Reversed,
}

pub type Mono = Vec<Sym>;
pub type VecElem = BTreeMap<Mono, CRat>;

enum SpecKind {
    /// Standard Borel of a finite algebra with the compact involution.
    FiniteBorel { alg: AffineAlgebra, m: Vec<Rat> },
    /// Standard Borel of the untwisted affine algebra, compact involution.
    AffineBorel {
        alg: AffineAlgebra,
        m: Vec<Rat>,
        on_d: Rat,
        marks: Vec<i64>,
        level: Rat,
    },
    /// Natural parabolic of the loop algebra (plus center), twisted
    /// hermitian-symmetric involution, phase functional.
    Elementary {
        alg: AffineAlgebra,
        nc: usize,
        spec: ElementarySpec,
        window: i64,
    },
    /// Lower-triangular loop parabolic of z^k sl(n+1), moment functional.
    Exceptional { spec: ExceptionalSpec, window: i64 },
}

pub struct HighestWeightSpec {
    kind: SpecKind,
    pub order: NegOrder,
    pub max_terms: u64,
}

const DEFAULT_MAX_TERMS: u64 = 1_000_000;

impl HighestWeightSpec {
    /// sl-style finite demo: p = h (+) n_+, n = n_-, omega_c, Lambda(H_i) = m_i.
    pub fn finite_borel(chev: ChevalleyBasis, m: Vec<Rat>) -> Result<Self, VermaError> {
        if m.len() != chev.rank() {
            return Err(VermaError::Unsupported("weight length != rank".into()));
        }
        Ok(HighestWeightSpec {
            kind: SpecKind::FiniteBorel {
                alg: AffineAlgebra::new(chev),
                m,
            },
            order: NegOrder::Standard,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    /// Standard affine Borel with Lambda(h_i) = m_i and Lambda(d) = on_d.
    pub fn affine_borel(chev: ChevalleyBasis, m: Vec<Rat>, on_d: Rat) -> Result<Self, VermaError> {
        let l = chev.rank();
        if m.len() != l + 1 {
            return Err(VermaError::Unsupported("weight length != rank + 1".into()));
        }
        let top = chev.highest_root();
        let marks = chev.roots.coeffs(top);
        let comarks = chev.roots.coroot_coeffs(top);
        let mut level = m[0].clone();
        for (i, c) in comarks.iter().enumerate() {
            level += rat(*c) * m[i + 1].clone();
        }
        Ok(HighestWeightSpec {
            kind: SpecKind::AffineBorel {
                alg: AffineAlgebra::new(chev),
                m,
                on_d,
                marks,
                level,
            },
            order: NegOrder::Standard,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    /// Elementary class over the derived loop algebra of a hermitian
    /// symmetric pair; `nc` is the noncompact simple root index.
    pub fn elementary(
        chev: ChevalleyBasis,
        nc: usize,
        spec: ElementarySpec,
        window: i64,
    ) -> Result<Self, VermaError> {
        let top = chev.highest_root();
        let mark = chev.roots.coeffs(top)[nc];
        if mark != 1 {
            return Err(VermaError::Unsupported(
                "noncompact node must carry mark 1 (hermitian symmetric)".into(),
            ));
        }
        if spec.weights.iter().any(|w| w.len() != chev.rank()) {
            return Err(VermaError::Unsupported(
                "weight table length != rank".into(),
            ));
        }
        Ok(HighestWeightSpec {
            kind: SpecKind::Elementary {
                alg: AffineAlgebra::new(chev),
                nc,
                spec,
                window,
            },
            order: NegOrder::Standard,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    /// Exceptional class on z^k sl(n+1) with the moment functional.
    pub fn exceptional(spec: ExceptionalSpec, window: i64) -> Result<Self, VermaError> {
        if spec.n < 1 {
            return Err(VermaError::Unsupported("n must be at least 1".into()));
        }
        Ok(HighestWeightSpec {
            kind: SpecKind::Exceptional { spec, window },
            order: NegOrder::Standard,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    pub fn with_order(mut self, order: NegOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }

    fn chev(&self) -> Option<&ChevalleyBasis> {
        match &self.kind {
            SpecKind::FiniteBorel { alg, .. }
            | SpecKind::AffineBorel { alg, .. }
            | SpecKind::Elementary { alg, .. } => Some(&alg.chev),
            SpecKind::Exceptional { .. } => None,
        }
    }

    /// Positive-root index of the highest root, for loop backends.
    pub fn highest_root_index(&self) -> Option<usize> {
        self.chev().map(|c| c.highest_root().index())
    }

    /// Positive-root handle of the i-th simple root (0-based).
    pub fn simple_root_rt(&self, i: usize) -> Option<Rt> {
        let chev = self.chev()?;
        let l = chev.rank();
        if i >= l {
            return None;
        }
        let mut unit = vec![0i64; l];
        unit[i] = 1;
        chev.roots.lookup(&unit)
    }

    pub fn part(&self, s: Sym) -> Part {
        match (&self.kind, s) {
            (_, Sym::C) | (_, Sym::D) => Part::Parabolic,
            (SpecKind::FiniteBorel { .. }, Sym::Loop(_, ChevSym::E(r))) if !r.is_positive() => {
                Part::Negative
            }
            (SpecKind::FiniteBorel { .. }, _) => Part::Parabolic,
            (SpecKind::AffineBorel { .. }, Sym::Loop(d, _)) if d < 0 => Part::Negative,
            (SpecKind::AffineBorel { .. }, Sym::Loop(0, ChevSym::E(r))) if !r.is_positive() => {
                Part::Negative
            }
            (SpecKind::AffineBorel { .. }, _) => Part::Parabolic,
            (SpecKind::Elementary { .. }, Sym::Loop(_, ChevSym::E(r))) if !r.is_positive() => {
                Part::Negative
            }
            (SpecKind::Elementary { .. }, _) => Part::Parabolic,
            (SpecKind::Exceptional { .. }, Sym::MatE(_, i, j)) if i > j => Part::Negative,
            (SpecKind::Exceptional { .. }, _) => Part::Parabolic,
        }
    }

    /// Bracket of basis symbols as a rational combination of symbols.
    pub fn bracket(&self, a: Sym, b: Sym) -> Vec<(Sym, Rat)> {
        match &self.kind {
            SpecKind::FiniteBorel { alg, .. }
            | SpecKind::AffineBorel { alg, .. }
            | SpecKind::Elementary { alg, .. } => loop_bracket(alg, a, b),
            SpecKind::Exceptional { spec, .. } => matrix_bracket(spec.n, a, b),
        }
    }

    /// omega on a basis symbol; always a real-signed monomial map here.
    pub fn omega_sym(&self, s: Sym) -> (Sym, Rat) {
        match (&self.kind, s) {
            (_, Sym::C) => (Sym::C, rat(1)),
            (_, Sym::D) => (Sym::D, rat(1)),
            (SpecKind::FiniteBorel { .. }, Sym::Loop(d, sym))
            | (SpecKind::AffineBorel { .. }, Sym::Loop(d, sym)) => {
                (Sym::Loop(-d, compact_conj(sym)), rat(1))
            }
            (SpecKind::Elementary { alg, nc, .. }, Sym::Loop(d, sym)) => {
                let sign = match sym {
                    ChevSym::E(r) => {
                        let c = alg.chev.roots.coeffs(r);
                        if c[*nc].rem_euclid(2) == 1 {
                            rat(-1)
                        } else {
                            rat(1)
                        }
                    }
                    ChevSym::H(_) => rat(1),
                };
                (Sym::Loop(-d, compact_conj(sym)), sign)
            }
            (SpecKind::Exceptional { .. }, Sym::MatE(d, i, j)) => {
                let sign = if i == 0 || j == 0 { rat(-1) } else { rat(1) };
                (Sym::MatE(-d, j, i), sign)
            }
            (SpecKind::Exceptional { .. }, Sym::MatD(d, i)) => (Sym::MatD(-d, i), rat(1)),
            _ => unreachable!("symbol does not belong to this backend"),
        }
    }

    /// Lambda on a parabolic symbol (zero on negative symbols).
    pub fn lambda(&self, s: Sym) -> Result<CRat, VermaError> {
        match (&self.kind, s) {
            (SpecKind::FiniteBorel { .. }, Sym::C) => Ok(crat(0)),
            (SpecKind::AffineBorel { level, .. }, Sym::C) => Ok(c_from_rat(level.clone())),
            (SpecKind::Elementary { .. }, Sym::C) => Ok(crat(0)),
            (SpecKind::FiniteBorel { .. }, Sym::D) => Ok(crat(0)),
            (SpecKind::AffineBorel { on_d, .. }, Sym::D) => Ok(c_from_rat(on_d.clone())),
            (SpecKind::FiniteBorel { m, .. }, Sym::Loop(0, ChevSym::H(i))) => {
                Ok(c_from_rat(m[i].clone()))
            }
            (SpecKind::AffineBorel { m, .. }, Sym::Loop(0, ChevSym::H(i))) => {
                Ok(c_from_rat(m[i + 1].clone()))
            }
            (SpecKind::Elementary { spec, .. }, Sym::Loop(k, ChevSym::H(i))) => {
                // Lambda(z^k h) = sum_rep C_rep^k Lambda_rep(h)
                let mut acc = crat(0);
                for rep in 0..spec.weights.len() {
                    let phase = spec
                        .phase(rep, k)
                        .ok_or(VermaError::PhaseOutOfRange { rep, deg: k })?;
                    acc = acc + phase * spec.weights[rep][i].clone();
                }
                Ok(acc)
            }
            (SpecKind::Exceptional { spec, .. }, Sym::MatD(k, 0)) => {
                let m = spec.moment(k).ok_or(VermaError::MomentOutOfRange(k))?;
                Ok(-m)
            }
            (SpecKind::Exceptional { .. }, Sym::MatD(_, _)) => Ok(crat(0)),
            (SpecKind::Exceptional { .. }, Sym::MatE(_, _, _)) => Ok(crat(0)),
            _ => Ok(crat(0)),
        }
    }

    /// Injective sort key implementing the PBW total order.
    pub fn ord_key(&self, s: Sym) -> (i64, i64, i64, i64, i64) {
        let base = match s {
            Sym::C => (90, 0, 0, 0, 0),
            Sym::D => (91, 0, 0, 0, 0),
            Sym::Loop(d, ChevSym::H(i)) => (0, -d, 0, i as i64, d),
            Sym::Loop(d, ChevSym::E(r)) => {
                let ht = self.chev().map(|c| c.roots.height(r).abs()).unwrap_or(0);
                (1, -d, ht, r.0 as i64, d)
            }
            Sym::MatD(d, i) => (0, 0, i as i64, 0, d),
            Sym::MatE(d, i, j) => {
                let ht = (i as i64 - j as i64).abs();
                (1, ht, i as i64, j as i64, d)
            }
        };
        match self.order {
            NegOrder::Standard => base,
            NegOrder::Reversed => (-base.0, -base.1, -base.2, -base.3, -base.4),
        }
    }

    fn le_key(&self, a: Sym, b: Sym) -> bool {
        self.ord_key(a) <= self.ord_key(b)
    }

    /// Length of weight labels for this backend.
    pub fn label_len(&self) -> usize {
        match &self.kind {
            SpecKind::FiniteBorel { alg, .. } => alg.chev.rank(),
            SpecKind::AffineBorel { alg, .. } => alg.chev.rank() + 1,
            SpecKind::Elementary { alg, .. } => alg.chev.rank(),
            SpecKind::Exceptional { spec, .. } => spec.n,
        }
    }

    /// Non-negative weight label of a negative symbol (the coefficients
    /// of minus its weight over the simple roots).
    pub fn label_of_sym(&self, s: Sym) -> Vec<i64> {
        match (&self.kind, s) {
            (SpecKind::FiniteBorel { alg, .. }, Sym::Loop(0, ChevSym::E(r)))
            | (SpecKind::Elementary { alg, .. }, Sym::Loop(_, ChevSym::E(r))) => {
                alg.chev.roots.coeffs(r).iter().map(|&x| -x).collect()
            }
            (SpecKind::AffineBorel { alg, marks, .. }, Sym::Loop(d, sym)) => {
                let l = alg.chev.rank();
                let j = -d;
                let mut label = vec![0i64; l + 1];
                label[0] = j;
                let root_coeffs = match sym {
                    ChevSym::H(_) => vec![0i64; l],
                    ChevSym::E(r) => alg.chev.roots.coeffs(r),
                };
                for i in 0..l {
                    label[i + 1] = j * marks[i] - root_coeffs[i];
                }
                label
            }
            (SpecKind::Exceptional { spec, .. }, Sym::MatE(_, i, j)) => {
                let mut label = vec![0i64; spec.n];
                for t in (j as usize)..(i as usize) {
                    label[t] = 1;
                }
                label
            }
            _ => unreachable!("label of a non-negative symbol"),
        }
    }

    fn height_of_sym(&self, s: Sym) -> usize {
        match &self.kind {
            SpecKind::FiniteBorel { .. } | SpecKind::AffineBorel { .. } => {
                self.label_of_sym(s).iter().sum::<i64>() as usize
            }
            // loop parabolics count factors, not heights
            SpecKind::Elementary { .. } | SpecKind::Exceptional { .. } => 1,
        }
    }

    /// The negative basis within the cutoff, sorted by the PBW order.
    pub fn neg_symbols(&self, cutoff: usize) -> Result<Vec<Sym>, VermaError> {
        if cutoff == 0 || cutoff > 24 {
            return Err(VermaError::CutoffTooLarge);
        }
        let mut syms: Vec<Sym> = Vec::new();
        match &self.kind {
            SpecKind::FiniteBorel { alg, .. } => {
                let roots = &alg.chev.roots;
                for i in 0..roots.positive_roots.len() {
                    if roots.height(Rt::pos(i)) as usize <= cutoff {
                        syms.push(Sym::Loop(0, ChevSym::E(Rt::neg_of(i))));
                    }
                }
            }
            SpecKind::AffineBorel { alg, .. } => {
                let roots = &alg.chev.roots;
                let l = alg.chev.rank();
                for i in 0..roots.positive_roots.len() {
                    let s = Sym::Loop(0, ChevSym::E(Rt::neg_of(i)));
                    if self.height_of_sym(s) <= cutoff {
                        syms.push(s);
                    }
                }
                for j in 1..=(cutoff as i64) {
                    for i in 0..l {
                        let s = Sym::Loop(-j, ChevSym::H(i));
                        if self.height_of_sym(s) <= cutoff {
                            syms.push(s);
                        }
                    }
                    for r in 0..roots.positive_roots.len() {
                        for rt in [Rt::pos(r), Rt::neg_of(r)] {
                            let s = Sym::Loop(-j, ChevSym::E(rt));
                            let label = self.label_of_sym(s);
                            if label.iter().all(|&x| x >= 0)
                                && label.iter().sum::<i64>() as usize <= cutoff
                            {
                                syms.push(s);
                            }
                        }
                    }
                }
            }
            SpecKind::Elementary { alg, window, .. } => {
                let roots = &alg.chev.roots;
                for k in -*window..=*window {
                    for r in 0..roots.positive_roots.len() {
                        syms.push(Sym::Loop(k, ChevSym::E(Rt::neg_of(r))));
                    }
                }
            }
            SpecKind::Exceptional { spec, window } => {
                let n = spec.n as u8;
                for k in -*window..=*window {
                    for i in 0..=n {
                        for j in 0..i {
                            syms.push(Sym::MatE(k, i, j));
                        }
                    }
                }
            }
        }
        syms.sort_by_key(|&s| self.ord_key(s));
        if syms.len() > 10_000 {
            return Err(VermaError::CutoffTooLarge);
        }
        Ok(syms)
    }

    /// Complete monomial basis per weight label up to the cutoff.
    pub fn weight_spaces(
        &self,
        cutoff: usize,
    ) -> Result<BTreeMap<Vec<i64>, Vec<Mono>>, VermaError> {
        let syms = self.neg_symbols(cutoff)?;
        let heights: Vec<usize> = syms.iter().map(|&s| self.height_of_sym(s)).collect();
        let labels: Vec<Vec<i64>> = syms.iter().map(|&s| self.label_of_sym(s)).collect();
        let mut out: BTreeMap<Vec<i64>, Vec<Mono>> = BTreeMap::new();
        let zero_label = vec![0i64; self.label_len()];
        out.insert(zero_label.clone(), vec![Vec::new()]);
        let mut count = 0usize;
        let mut stack: Vec<Sym> = Vec::new();
        let mut label = zero_label;
        dfs(
            0, cutoff, &syms, &heights, &labels, &mut stack, &mut label, &mut out, &mut count,
        )?;
        // canonical listing: lexicographic in the PBW keys, shorter first
        for monos in out.values_mut() {
            monos.sort_by(|a, b| {
                let ka: Vec<_> = a.iter().map(|&s| self.ord_key(s)).collect();
                let kb: Vec<_> = b.iter().map(|&s| self.ord_key(s)).collect();
                ka.cmp(&kb)
            });
        }
        return Ok(out);

        #[allow(clippy::too_many_arguments)]
        fn dfs(
            idx: usize,
            budget: usize,
            syms: &[Sym],
            heights: &[usize],
            labels: &[Vec<i64>],
            stack: &mut Vec<Sym>,
            label: &mut Vec<i64>,
            out: &mut BTreeMap<Vec<i64>, Vec<Mono>>,
            count: &mut usize,
        ) -> Result<(), VermaError> {
            if idx == syms.len() {
                return Ok(());
            }
            dfs(
                idx + 1,
                budget,
                syms,
                heights,
                labels,
                stack,
                label,
                out,
                count,
            )?;
            let h = heights[idx];
            let mut used = 0usize;
            while used + h <= budget {
                used += h;
                stack.push(syms[idx]);
                for (t, v) in labels[idx].iter().enumerate() {
                    label[t] += v;
                }
                *count += 1;
                if *count > 2_000_000 {
                    return Err(VermaError::CutoffTooLarge);
                }
                // symbols are visited in ascending PBW order, so the stack
                // is already a normally ordered monomial
                out.entry(label.clone()).or_default().push(stack.clone());
                dfs(
                    idx + 1,
                    budget - used,
                    syms,
                    heights,
                    labels,
                    stack,
                    label,
                    out,
                    count,
                )?;
            }
            for _ in 0..(used / h.max(1)) {
                stack.pop();
                for (t, v) in labels[idx].iter().enumerate() {
                    label[t] -= v;
                }
            }
            Ok(())
        }
    }
}

fn compact_conj(sym: ChevSym) -> ChevSym {
    match sym {
        ChevSym::H(i) => ChevSym::H(i),
        ChevSym::E(r) => ChevSym::E(r.neg()),
    }
}

fn loop_bracket(alg: &AffineAlgebra, a: Sym, b: Sym) -> Vec<(Sym, Rat)> {
    use crate::affine::LoopElement;
    let to_elem = |s: Sym| -> LoopElement {
        match s {
            Sym::C => LoopElement::c(),
            Sym::D => LoopElement::d(),
            Sym::Loop(d, sym) => LoopElement::term(d, sym, Rat::one()),
            _ => unreachable!("loop backend symbol"),
        }
    };
    let out = alg.bracket(&to_elem(a), &to_elem(b));
    let mut terms: Vec<(Sym, Rat)> = out
        .terms
        .into_iter()
        .map(|((d, sym), coeff)| (Sym::Loop(d, sym), coeff))
        .collect();
    if !out.c_coeff.is_zero() {
        terms.push((Sym::C, out.c_coeff));
    }
    if !out.d_coeff.is_zero() {
        terms.push((Sym::D, out.d_coeff));
    }
    terms
}

/// [z^a E_{ij}, z^b E_{kl}] = z^{a+b} (delta_jk E_il - delta_li E_kj),
/// diagonals expressed over D_t = E_tt - E_{t+1,t+1}.
fn matrix_bracket(n: usize, a: Sym, b: Sym) -> Vec<(Sym, Rat)> {
    let dim = n as u8 + 1;
    // expand a symbol into elementary-matrix terms
    let expand = |s: Sym| -> Vec<(i64, u8, u8, Rat)> {
        match s {
            Sym::MatE(d, i, j) => vec![(d, i, j, rat(1))],
            Sym::MatD(d, i) => vec![(d, i, i, rat(1)), (d, i + 1, i + 1, rat(-1))],
            _ => unreachable!("matrix backend symbol"),
        }
    };
    let mut acc: BTreeMap<(i64, u8, u8), Rat> = BTreeMap::new();
    for (da, i, j, ca) in expand(a) {
        for (db, k, l, cb) in expand(b) {
            let c = ca.clone() * cb.clone();
            if j == k {
                *acc.entry((da + db, i, l)).or_insert_with(Rat::zero) += c.clone();
            }
            if l == i {
                *acc.entry((da + db, k, j)).or_insert_with(Rat::zero) -= c;
            }
        }
    }
    // separate off-diagonal from diagonal, rewrite diagonal over D_t
    let mut out: BTreeMap<Sym, Rat> = BTreeMap::new();
    let mut diag: BTreeMap<i64, Vec<Rat>> = BTreeMap::new();
    for ((d, i, j), c) in acc {
        if c.is_zero() {
            continue;
        }
        if i != j {
            *out.entry(Sym::MatE(d, i, j)).or_insert_with(Rat::zero) += c;
        } else {
            let row = diag
                .entry(d)
                .or_insert_with(|| vec![Rat::zero(); dim as usize]);
            row[i as usize] += c;
        }
    }
    for (d, row) in diag {
        // sum_i row_i E_ii with sum row_i = 0 equals sum_t (partial sums) D_t
        let mut partial = Rat::zero();
        for t in 0..n {
            partial += row[t].clone();
            if !partial.is_zero() {
                *out.entry(Sym::MatD(d, t as u8)).or_insert_with(Rat::zero) += partial.clone();
            }
        }
        let total: Rat = row.iter().cloned().sum();
        debug_assert!(total.is_zero(), "trace must vanish in sl(n+1)");
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// The straightening engine: memoized module action on PBW monomials.
pub struct Engine<'a> {
    pub spec: &'a HighestWeightSpec,
    memo: RefCell<HashMap<(Sym, Mono), VecElem>>,
    budget: Cell<u64>,
}

impl<'a> Engine<'a> {
    pub fn new(spec: &'a HighestWeightSpec) -> Self {
        Engine {
            spec,
            memo: RefCell::new(HashMap::new()),
            budget: Cell::new(spec.max_terms),
        }
    }

    fn spend(&self, amount: u64) -> Result<(), VermaError> {
        let b = self.budget.get();
        if b < amount {
            return Err(VermaError::DepthOverflow);
        }
        self.budget.set(b - amount);
        Ok(())
    }

    /// x . (m ϑ) in the PBW basis of U(n) ϑ.
    pub fn act(&self, x: Sym, m: &Mono) -> Result<VecElem, VermaError> {
        if let Some(hit) = self.memo.borrow().get(&(x, m.clone())) {
            return Ok(hit.clone());
        }
        self.spend(1)?;
        let spec = self.spec;
        let result: VecElem =
            if spec.part(x) == Part::Negative && (m.is_empty() || spec.le_key(x, m[0])) {
                let mut mono = Vec::with_capacity(m.len() + 1);
                mono.push(x);
                mono.extend_from_slice(m);
                BTreeMap::from([(mono, CRat::one())])
            } else if m.is_empty() {
                let lam = spec.lambda(x)?;
                if lam.is_zero() {
                    BTreeMap::new()
                } else {
                    BTreeMap::from([(Vec::new(), lam)])
                }
            } else {
                let s = m[0];
                let rest: Mono = m[1..].to_vec();
                let mut out: VecElem = BTreeMap::new();
                // x (s rest) = s (x rest) + [x, s] rest
                let inner = self.act(x, &rest)?;
                for (mono, co) in inner {
                    for (m2, c2) in self.act(s, &mono)? {
                        self.spend(1)?;
                        add_term(&mut out, m2, co.clone() * c2);
                    }
                }
                for (y, cy) in spec.bracket(x, s) {
                    let lifted = c_from_rat(cy);
                    for (mono, co) in self.act(y, &rest)? {
                        self.spend(1)?;
                        add_term(&mut out, mono, lifted.clone() * co);
                    }
                }
                out
            };
        self.memo
            .borrow_mut()
            .insert((x, m.clone()), result.clone());
        Ok(result)
    }

    pub fn act_vec(&self, x: Sym, v: &VecElem) -> Result<VecElem, VermaError> {
        let mut out = BTreeMap::new();
        for (mono, co) in v {
            for (m2, c2) in self.act(x, mono)? {
                add_term(&mut out, m2, co.clone() * c2);
            }
        }
        Ok(out)
    }

    /// H(u, v) = Lambda(beta(omega(v) u)) for PBW monomials u, v.
    pub fn pair(&self, u: &Mono, v: &Mono) -> Result<CRat, VermaError> {
        let mut w: VecElem = BTreeMap::from([(u.clone(), CRat::one())]);
        let mut scalar = CRat::one();
        for &s in v {
            let (img, sign) = self.spec.omega_sym(s);
            scalar = scalar * c_from_rat(sign);
            w = self.act_vec(img, &w)?;
            if w.is_empty() {
                return Ok(crat(0));
            }
        }
        Ok(scalar * w.get(&Vec::new()).cloned().unwrap_or_else(|| crat(0)))
    }

    /// Sesquilinear extension, antilinear in the second argument.
    pub fn hermitian_form(&self, u: &VecElem, v: &VecElem) -> Result<CRat, VermaError> {
        let mut acc = crat(0);
        for (mu, cu) in u {
            for (mv, cv) in v {
                let p = self.pair(mu, mv)?;
                acc = acc + cu.clone() * cv.conj() * p;
            }
        }
        Ok(acc)
    }
}

fn add_term(out: &mut VecElem, mono: Mono, coeff: CRat) {
    if coeff.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match out.entry(mono) {
        Entry::Vacant(e) => {
            e.insert(coeff);
        }
        Entry::Occupied(mut e) => {
            let nv = e.get().clone() + coeff;
            if nv.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = nv;
            }
        }
    }
}

/// Exact Gram data of one weight space with its inertia.
#[derive(Debug, Clone)]
pub struct GramCertificate {
    pub weight: Vec<i64>,
    pub basis: Vec<Mono>,
    pub matrix: Mat<CRat>,
    pub signature: (usize, usize, usize),
}

impl GramCertificate {
    pub fn radical_dim(&self) -> usize {
        self.signature.2
    }
}

/// Gram matrix [H(u_i, u_j)] of one weight space.
pub fn gram(
    spec: &HighestWeightSpec,
    weight: &[i64],
    cutoff: usize,
) -> Result<GramCertificate, VermaError> {
    let spaces = spec.weight_spaces(cutoff)?;
    let basis = spaces.get(weight).cloned().unwrap_or_default();
    gram_of_basis(spec, weight, basis)
}

fn gram_of_basis(
    spec: &HighestWeightSpec,
    weight: &[i64],
    basis: Vec<Mono>,
) -> Result<GramCertificate, VermaError> {
    let engine = Engine::new(spec);
    let n = basis.len();
    let mut matrix = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let h = engine.pair(&basis[i], &basis[j])?;
            *matrix.at_mut(j, i) = h.conj();
            *matrix.at_mut(i, j) = h;
        }
    }
    let signature = hermitian_inertia(&matrix);
    Ok(GramCertificate {
        weight: weight.to_vec(),
        basis,
        matrix,
        signature,
    })
}

/// Gram certificates for every weight space up to the cutoff.
pub fn gram_all(
    spec: &HighestWeightSpec,
    cutoff: usize,
) -> Result<Vec<GramCertificate>, VermaError> {
    let spaces = spec.weight_spaces(cutoff)?;
    let jobs: Vec<(Vec<i64>, Vec<Mono>)> = spaces.into_iter().collect();
    use rayon::prelude::*;
    jobs.into_par_iter()
        .map(|(w, basis)| gram_of_basis(spec, &w, basis))
        .collect()
}

/// dim L(Lambda) per weight: basis size minus the radical dimension.
pub fn quotient_dims(
    spec: &HighestWeightSpec,
    cutoff: usize,
) -> Result<BTreeMap<Vec<i64>, usize>, VermaError> {
    let certs = gram_all(spec, cutoff)?;
    Ok(certs
        .into_iter()
        .map(|c| (c.weight.clone(), c.basis.len() - c.radical_dim()))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    PsdCertifiedToDepth(usize),
    IndefiniteAt { weight: Vec<i64>, negative: usize },
}

/// Positive semidefinite iff no weight space up to the cutoff carries a
/// negative pivot; returns the first failing weight otherwise.
pub fn check_unitarizable(spec: &HighestWeightSpec, cutoff: usize) -> Result<Verdict, VermaError> {
    let certs = gram_all(spec, cutoff)?;
    for c in &certs {
        if c.signature.1 > 0 {
            return Ok(Verdict::IndefiniteAt {
                weight: c.weight.clone(),
                negative: c.signature.1,
            });
        }
    }
    Ok(Verdict::PsdCertifiedToDepth(cutoff))
}

/// omega of a PBW monomial (with coefficient), as a word in U(g):
/// anti-homomorphic reversal with the per-symbol signs.
pub fn apply_omega(spec: &HighestWeightSpec, mono: &Mono) -> (Vec<Sym>, Rat) {
    let mut word = Vec::with_capacity(mono.len());
    let mut sign = rat(1);
    for &s in mono.iter().rev() {
        let (img, sg) = spec.omega_sym(s);
        word.push(img);
        sign *= sg;
    }
    (word, sign)
}

/// beta: the projection U(g) = n U(g) (+) U(p) -> U(p), computed by
/// moving negative symbols leftward and dropping words led by them.
pub fn beta_project(
    spec: &HighestWeightSpec,
    input: &[(CRat, Vec<Sym>)],
) -> Result<Vec<(CRat, Vec<Sym>)>, VermaError> {
    let mut budget: i64 = spec.max_terms as i64;
    let mut queue: Vec<(CRat, Vec<Sym>)> = input.to_vec();
    let mut done: BTreeMap<Vec<Sym>, CRat> = BTreeMap::new();
    while let Some((coeff, word)) = queue.pop() {
        budget -= 1;
        if budget < 0 {
            return Err(VermaError::DepthOverflow);
        }
        if coeff.is_zero() {
            continue;
        }
        // leftmost adjacent (parabolic, negative) inversion
        let pos = word
            .windows(2)
            .position(|w| spec.part(w[0]) == Part::Parabolic && spec.part(w[1]) == Part::Negative);
        match pos {
            None => {
                // normal form N..N P..P: words led by n lie in n U(g)
                if word.first().map(|&s| spec.part(s)) == Some(Part::Negative) {
                    continue;
                }
                let e = done.entry(word).or_insert_with(|| crat(0));
                *e = e.clone() + coeff;
            }
            Some(i) => {
                let mut swapped = word.clone();
                swapped.swap(i, i + 1);
                queue.push((coeff.clone(), swapped));
                for (y, cy) in spec.bracket(word[i], word[i + 1]) {
                    let mut shorter = Vec::with_capacity(word.len() - 1);
                    shorter.extend_from_slice(&word[..i]);
                    shorter.push(y);
                    shorter.extend_from_slice(&word[i + 2..]);
                    queue.push((coeff.clone() * c_from_rat(cy), shorter));
                }
            }
        }
    }
    Ok(done
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (c, w))
        .collect())
}

/// Lambda extended multiplicatively over U(p), composed with beta.
pub fn lambda_beta(
    spec: &HighestWeightSpec,
    input: &[(CRat, Vec<Sym>)],
) -> Result<CRat, VermaError> {
    let projected = beta_project(spec, input)?;
    let mut acc = crat(0);
    for (coeff, word) in projected {
        let mut prod = CRat::one();
        for s in word {
            prod = prod * spec.lambda(s)?;
            if prod.is_zero() {
                break;
            }
        }
        acc = acc + coeff * prod;
    }
    Ok(acc)
}

/// Lambda(beta(x)) = conj(Lambda(beta(omega x))) on a single symbol.
pub fn consistency_on_symbol(spec: &HighestWeightSpec, s: Sym) -> Result<bool, VermaError> {
    let lhs = match spec.part(s) {
        Part::Parabolic => spec.lambda(s)?,
        Part::Negative => crat(0),
    };
    let (img, sign) = spec.omega_sym(s);
    let rhs = match spec.part(img) {
        Part::Parabolic => c_from_rat(sign) * spec.lambda(img)?,
        Part::Negative => crat(0),
    };
    Ok(lhs == rhs.conj())
}

/// g = p + omega(p) on a symbol: it must lie in p or have its omega-image
/// in p.
pub fn spans_symbol(spec: &HighestWeightSpec, s: Sym) -> bool {
    spec.part(s) == Part::Parabolic || spec.part(spec.omega_sym(s).0) == Part::Parabolic
}

/// Human-readable monomial names for certificates (dot-joined symbols).
pub fn mono_name(spec: &HighestWeightSpec, mono: &Mono) -> String {
    if mono.is_empty() {
        return "1".to_string();
    }
    mono.iter()
        .map(|&s| sym_name(spec, s))
        .collect::<Vec<_>>()
        .join(".")
}

pub fn sym_name(spec: &HighestWeightSpec, s: Sym) -> String {
    match s {
        Sym::C => "c".into(),
        Sym::D => "d".into(),
        Sym::MatE(d, i, j) => format!("E[{i},{j}]@{d}"),
        Sym::MatD(d, i) => format!("D[{i}]@{d}"),
        Sym::Loop(d, sym) => {
            let chev = spec.chev().expect("loop symbol outside loop backend");
            let simple = |r: Rt| -> Option<usize> {
                let c = chev.roots.coeffs(r);
                let total: i64 = c.iter().map(|x| x.abs()).sum();
                if total == 1 {
                    c.iter().position(|&x| x.abs() == 1)
                } else {
                    None
                }
            };
            let top = chev.highest_root();
            match sym {
                ChevSym::E(r) if d == -1 && r == top => "f0".into(),
                ChevSym::E(r) if d == 1 && r == top.neg() => "e0".into(),
                _ => {
                    let base = match sym {
                        ChevSym::H(i) => format!("h{}", i + 1),
                        ChevSym::E(r) => match (simple(r), r.is_positive()) {
                            (Some(i), true) => format!("e{}", i + 1),
                            (Some(i), false) => format!("f{}", i + 1),
                            (None, true) => format!("E[{}]", r.index() + 1),
                            (None, false) => format!("F[{}]", r.index() + 1),
                        },
                    };
                    if d == 0 {
                        base
                    } else {
                        format!("{base}@{d}")
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{finite_gcm, finite_roots, structure_constants};
    use crate::scalar::ratio;

    fn sl2_chev() -> ChevalleyBasis {
        structure_constants(&finite_roots(&finite_gcm('A', 1).unwrap()).unwrap())
    }

    fn sl2_spec(m: i64) -> HighestWeightSpec {
        HighestWeightSpec::finite_borel(sl2_chev(), vec![rat(m)]).unwrap()
    }

    fn a11_spec(m: &[i64]) -> HighestWeightSpec {
        HighestWeightSpec::affine_borel(
            sl2_chev(),
            m.iter().map(|&x| rat(x)).collect(),
            Rat::zero(),
        )
        .unwrap()
    }

    #[test]
    fn weight_spaces_sl2() {
        let spec = sl2_spec(3);
        let spaces = spec.weight_spaces(6).unwrap();
        // single weight -n alpha with one monomial f^n for each n
        for n in 0..=6i64 {
            let ws = spaces.get(&vec![n]).unwrap();
            assert_eq!(ws.len(), 1);
            assert_eq!(ws[0].len(), n as usize);
        }
    }

    #[test]
    fn weight_spaces_affine_depth1() {
        let spec = a11_spec(&[1, 0]);
        let spaces = spec.weight_spaces(2).unwrap();
        assert_eq!(spaces.get(&vec![1, 0]).unwrap().len(), 1);
        assert_eq!(spaces.get(&vec![0, 1]).unwrap().len(), 1);
        // -delta = -(a0 + a1): f0 f1 and z^{-1} H
        assert_eq!(spaces.get(&vec![1, 1]).unwrap().len(), 2);
    }

    #[test]
    fn beta_examples_sl2() {
        let spec = sl2_spec(0);
        let e = Sym::Loop(0, ChevSym::E(Rt::pos(0)));
        let f = Sym::Loop(0, ChevSym::E(Rt::neg_of(0)));
        let h = Sym::Loop(0, ChevSym::H(0));
        // beta(ef) = h
        let out = beta_project(&spec, &[(CRat::one(), vec![e, f])]).unwrap();
        assert_eq!(out, vec![(CRat::one(), vec![h])]);
        // beta(1) = 1
        let out = beta_project(&spec, &[(CRat::one(), vec![])]).unwrap();
        assert_eq!(out, vec![(CRat::one(), vec![])]);
        // beta(f) = 0
        let out = beta_project(&spec, &[(CRat::one(), vec![f])]).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn sl2_gram_closed_form() {
        // H(f^n, f^n) = n! prod_{k=1..n} (m - k + 1)
        for m in [-1i64, 0, 1, 2, 5] {
            let spec = sl2_spec(m);
            for n in 0..=6usize {
                let cert = gram(&spec, &[n as i64], 6).unwrap();
                assert_eq!(cert.basis.len(), 1);
                let mut expect = rat(1);
                for k in 1..=n as i64 {
                    expect *= rat(k); // n!
                }
                for k in 1..=n as i64 {
                    expect *= rat(m - k + 1);
                }
                assert_eq!(
                    cert.matrix.at(0, 0).clone(),
                    c_from_rat(expect),
                    "m={m} n={n}"
                );
            }
        }
    }

    #[test]
    fn sl2_m1_depth2_vanishes() {
        let spec = sl2_spec(1);
        let cert = gram(&spec, &[2], 4).unwrap();
        assert_eq!(cert.matrix.at(0, 0).clone(), crat(0));
        assert_eq!(cert.signature, (0, 0, 1));
    }

    #[test]
    fn empty_monomial_norm_one() {
        for spec in [sl2_spec(5), a11_spec(&[1, 0])] {
            let zero = vec![0i64; spec.label_len()];
            let cert = gram(&spec, &zero, 2).unwrap();
            assert_eq!(cert.basis, vec![Vec::<Sym>::new()]);
            assert_eq!(cert.matrix.at(0, 0).clone(), crat(1));
        }
    }

    #[test]
    fn quotient_dims_sl2() {
        let spec = sl2_spec(1);
        let dims = quotient_dims(&spec, 4).unwrap();
        assert_eq!(dims[&vec![0]], 1);
        assert_eq!(dims[&vec![1]], 1);
        assert_eq!(dims[&vec![2]], 0);
        assert_eq!(dims[&vec![3]], 0);
        let spec5 = sl2_spec(5);
        let dims5 = quotient_dims(&spec5, 4).unwrap();
        assert!(dims5.values().all(|&d| d == 1));
        let spec0 = sl2_spec(0);
        let dims0 = quotient_dims(&spec0, 3).unwrap();
        assert_eq!(dims0[&vec![0]], 1);
        assert_eq!(dims0[&vec![1]], 0);
    }

    #[test]
    fn check_unitarizable_examples() {
        let spec = sl2_spec(-1);
        match check_unitarizable(&spec, 2).unwrap() {
            Verdict::IndefiniteAt { weight, .. } => assert_eq!(weight, vec![1]),
            v => panic!("expected indefinite, got {v:?}"),
        }
        let trivial = sl2_spec(0);
        assert_eq!(
            check_unitarizable(&trivial, 3).unwrap(),
            Verdict::PsdCertifiedToDepth(3)
        );
        let spec = a11_spec(&[1, 0]);
        assert_eq!(
            check_unitarizable(&spec, 4).unwrap(),
            Verdict::PsdCertifiedToDepth(4)
        );
        let probe = a11_spec(&[-1, 0]);
        match check_unitarizable(&probe, 2).unwrap() {
            Verdict::IndefiniteAt { weight, .. } => assert_eq!(weight, vec![1, 0]),
            v => panic!("expected indefinite, got {v:?}"),
        }
    }

    #[test]
    fn gram_matches_lambda_beta_route() {
        // two independent evaluation routes for H entries: the module
        // action against theta vs the word-splitting projection beta
        let a2_chev = structure_constants(&finite_roots(&finite_gcm('A', 2).unwrap()).unwrap());
        let specs = [
            a11_spec(&[1, 1]),
            HighestWeightSpec::affine_borel(a2_chev, vec![rat(1), rat(0), rat(1)], Rat::zero())
                .unwrap(),
        ];
        for (cutoff, spec) in [(3usize, &specs[0]), (2, &specs[1])] {
            let spaces = spec.weight_spaces(cutoff).unwrap();
            let engine = Engine::new(spec);
            for (_, basis) in spaces.iter() {
                for u in basis {
                    for v in basis {
                        let fast = engine.pair(u, v).unwrap();
                        let (word, sign) = apply_omega(spec, v);
                        let mut full: Vec<Sym> = word;
                        full.extend(u.iter().copied());
                        let slow = lambda_beta(spec, &[(c_from_rat(sign), full)]).unwrap();
                        assert_eq!(fast, slow);
                    }
                }
            }
        }
    }

    #[test]
    fn weight_orthogonality() {
        let spec = a11_spec(&[2, 0]);
        let spaces = spec.weight_spaces(3).unwrap();
        let engine = Engine::new(&spec);
        let labels: Vec<_> = spaces.keys().cloned().collect();
        for i in 0..labels.len().min(4) {
            for j in 0..labels.len().min(4) {
                if i == j {
                    continue;
                }
                for u in &spaces[&labels[i]] {
                    for v in &spaces[&labels[j]] {
                        assert_eq!(engine.pair(u, v).unwrap(), crat(0));
                    }
                }
            }
        }
    }

    #[test]
    fn contravariance_small() {
        let spec = a11_spec(&[1, 0]);
        let engine = Engine::new(&spec);
        let spaces = spec.weight_spaces(3).unwrap();
        let gens: Vec<Sym> = vec![
            Sym::Loop(0, ChevSym::E(Rt::pos(0))),
            Sym::Loop(0, ChevSym::E(Rt::neg_of(0))),
            Sym::Loop(0, ChevSym::H(0)),
            Sym::Loop(1, ChevSym::E(Rt::neg_of(0))),
            Sym::Loop(-1, ChevSym::E(Rt::pos(0))),
            Sym::C,
            Sym::D,
        ];
        for (_, basis) in spaces.iter().take(4) {
            for u in basis.iter().take(2) {
                for v in basis.iter().take(2) {
                    let uv: VecElem = BTreeMap::from([(u.clone(), CRat::one())]);
                    let vv: VecElem = BTreeMap::from([(v.clone(), CRat::one())]);
                    for &x in &gens {
                        let xu = engine.act_vec(x, &uv).unwrap();
                        let (img, sign) = spec.omega_sym(x);
                        let wv = engine.act_vec(img, &vv).unwrap();
                        let lhs = engine.hermitian_form(&xu, &vv).unwrap();
                        let rhs =
                            engine.hermitian_form(&uv, &wv).unwrap() * c_from_rat(sign).conj();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn hermitian_symmetry_exact() {
        let spec = a11_spec(&[1, 1]);
        let engine = Engine::new(&spec);
        let spaces = spec.weight_spaces(3).unwrap();
        for basis in spaces.values() {
            for u in basis {
                for v in basis {
                    let huv = engine.pair(u, v).unwrap();
                    let hvu = engine.pair(v, u).unwrap();
                    assert_eq!(huv, hvu.conj());
                }
            }
        }
    }

    #[test]
    fn pbw_order_independence() {
        let base = a11_spec(&[1, 0]);
        let alt = a11_spec(&[1, 0]).with_order(NegOrder::Reversed);
        let sig = |s: &HighestWeightSpec| -> BTreeMap<Vec<i64>, (usize, usize, usize)> {
            gram_all(s, 4)
                .unwrap()
                .into_iter()
                .map(|c| (c.weight, c.signature))
                .collect()
        };
        assert_eq!(sig(&base), sig(&alt));
    }

    #[test]
    fn consistency_condition_on_generators() {
        let spec = a11_spec(&[3, 2]);
        for s in [
            Sym::C,
            Sym::D,
            Sym::Loop(0, ChevSym::H(0)),
            Sym::Loop(0, ChevSym::E(Rt::pos(0))),
            Sym::Loop(0, ChevSym::E(Rt::neg_of(0))),
            Sym::Loop(1, ChevSym::E(Rt::neg_of(0))),
            Sym::Loop(-1, ChevSym::E(Rt::pos(0))),
        ] {
            assert!(consistency_on_symbol(&spec, s).unwrap());
            assert!(spans_symbol(&spec, s));
        }
    }

    #[test]
    fn apply_omega_examples() {
        let spec = a11_spec(&[1, 0]);
        let top = spec.chev().unwrap().highest_root();
        // omega_c(e_0) = f_0
        let e0 = Sym::Loop(1, ChevSym::E(top.neg()));
        let f0 = Sym::Loop(-1, ChevSym::E(top));
        assert_eq!(spec.omega_sym(e0), (f0, rat(1)));
        // anti-homomorphism reverses monomials: omega(f1 f0) = e0 e1
        let f1 = Sym::Loop(0, ChevSym::E(Rt::neg_of(0)));
        let e1 = Sym::Loop(0, ChevSym::E(Rt::pos(0)));
        let (word, sign) = apply_omega(&spec, &vec![f1, f0]);
        assert_eq!(word, vec![e0, e1]);
        assert_eq!(sign, rat(1));
        // fixed points of the compact involution
        assert_eq!(
            spec.omega_sym(Sym::Loop(0, ChevSym::H(0))).0,
            Sym::Loop(0, ChevSym::H(0))
        );
        assert_eq!(spec.omega_sym(Sym::C).0, Sym::C);
        assert_eq!(spec.omega_sym(Sym::D).0, Sym::D);
    }

    #[test]
    fn elementary_phase_gram() {
        use crate::unitary::{ElementarySpec, Phase, PhaseFamily};
        let quarter = Phase::from_turns(&ratio(1, 4)).unwrap();
        for phase in [
            PhaseFamily::Geometric(Phase::ONE),
            PhaseFamily::Geometric(quarter),
        ] {
            let es = ElementarySpec::new(vec![vec![crat(-2)]], vec![phase.clone()]).unwrap();
            let spec = HighestWeightSpec::elementary(sl2_chev(), 0, es.clone(), 2).unwrap();
            let cert = gram(&spec, &[1], 1).unwrap();
            assert_eq!(cert.basis.len(), 5);
            // H(z^j f, z^k f) = 2 C^{j-k}: a rank-one phase Toeplitz block.
            // The canonical basis order descends in the Laurent degree, so
            // row a carries degree (window - a).
            assert_eq!(cert.signature, (1, 0, 4), "phase {phase:?}");
            for a in 0..5 {
                for b in 0..5 {
                    let expect = crat(2) * es.phase(0, b as i64 - a as i64).unwrap();
                    assert_eq!(cert.matrix.at(a, b).clone(), expect);
                }
            }
            // consistency and span on a sample of symbols
            for s in [
                Sym::C,
                Sym::Loop(0, ChevSym::H(0)),
                Sym::Loop(3, ChevSym::H(0)),
                Sym::Loop(-2, ChevSym::E(Rt::pos(0))),
                Sym::Loop(2, ChevSym::E(Rt::neg_of(0))),
            ] {
                assert!(consistency_on_symbol(&spec, s).unwrap());
                assert!(spans_symbol(&spec, s));
            }
        }
    }

    #[test]
    fn exceptional_spans_and_consistency() {
        use crate::unitary::ExceptionalSpec;
        let spec = HighestWeightSpec::exceptional(ExceptionalSpec::lebesgue(2, 8), 2).unwrap();
        for s in [
            Sym::MatD(0, 0),
            Sym::MatD(-3, 1),
            Sym::MatE(2, 0, 1),
            Sym::MatE(-2, 1, 0),
            Sym::MatE(1, 2, 0),
            Sym::MatE(0, 1, 2),
        ] {
            assert!(consistency_on_symbol(&spec, s).unwrap());
            assert!(spans_symbol(&spec, s));
        }
        // moments outside the truncation surface as errors
        let tight = HighestWeightSpec::exceptional(ExceptionalSpec::lebesgue(1, 2), 3).unwrap();
        assert!(matches!(
            gram(&tight, &[1], 1),
            Err(VermaError::MomentOutOfRange(_))
        ));
    }

    #[test]
    fn term_budget_guard() {
        let spec = a11_spec(&[1, 0]).with_max_terms(5);
        assert!(matches!(
            gram(&spec, &[1, 1], 3),
            Err(VermaError::DepthOverflow)
        ));
    }

    #[test]
    fn names_round_readable() {
        let spec = a11_spec(&[1, 0]);
        let top = spec.chev().unwrap().highest_root();
        assert_eq!(sym_name(&spec, Sym::Loop(-1, ChevSym::E(top))), "f0");
        assert_eq!(sym_name(&spec, Sym::Loop(0, ChevSym::E(top.neg()))), "f1");
        assert_eq!(sym_name(&spec, Sym::Loop(-2, ChevSym::H(0))), "h1@-2");
        let m = ratio(1, 2);
        let _ = m;
    }
}
