//! Finite-dimensional simple Lie algebras from their Cartan matrices:
//! root systems by root-string closure, Chevalley bases with integer
//! structure constants fixed by the extraspecial-pair convention, and the
//! invariant bilinear form normalized so the highest root has square
//! length 2.

use crate::cartan::{classify, symmetrize, GeneralizedCartanMatrix, Kind};
use crate::scalar::{rat, Rat};
use num::traits::{One, Zero};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("Cartan matrix is not of finite type")]
    NotFiniteType,
    #[error("root closure did not terminate (non-finite input?)")]
    ClosureDiverged,
}

/// A root referenced by signed index: `Rt(r)` with `r >= 0` is the
/// positive root with index `r`; `Rt(-r-1)` is its negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rt(pub i32);

impl Rt {
    pub fn pos(idx: usize) -> Rt {
        Rt(idx as i32)
    }
    pub fn neg_of(idx: usize) -> Rt {
        Rt(-(idx as i32) - 1)
    }
    pub fn is_positive(self) -> bool {
        self.0 >= 0
    }
    pub fn index(self) -> usize {
        if self.0 >= 0 {
            self.0 as usize
        } else {
            (-self.0 - 1) as usize
        }
    }
    pub fn neg(self) -> Rt {
        Rt(-self.0 - 1)
    }
}

/// Basis symbol of the finite algebra: Cartan generators H_i (coroots of
/// the simple roots) and root vectors E_r (E_{-r} plays the role of F_r).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChevSym {
    H(usize),
    E(Rt),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRootSystem {
    pub gcm: GeneralizedCartanMatrix,
    pub rank: usize,
    /// Positive roots as coefficient vectors over the simple roots,
    /// sorted by (height, lexicographic).
    pub positive_roots: Vec<Vec<i64>>,
    /// Index of the highest root in `positive_roots`.
    pub highest_root: usize,
    /// Unnormalized symmetric pairing (alpha_i, alpha_j) = d_i A_ij.
    sym_pairing: Vec<Vec<Rat>>,
    coeff_index: HashMap<Vec<i64>, usize>,
}

pub fn finite_roots(gcm: &GeneralizedCartanMatrix) -> Result<FiniteRootSystem, ChevalleyError> {
    if classify(gcm).kind != Kind::Finite {
        return Err(ChevalleyError::NotFiniteType);
    }
    let l = gcm.size();
    let symm = symmetrize(gcm).map_err(|_| ChevalleyError::NotFiniteType)?;
    let mut pairing = vec![vec![Rat::zero(); l]; l];
    for i in 0..l {
        for j in 0..l {
            pairing[i][j] = symm.diag[i].clone() * rat(gcm.entry(i, j));
        }
    }
    let mut roots: Vec<Vec<i64>> = Vec::new();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    for i in 0..l {
        let mut c = vec![0i64; l];
        c[i] = 1;
        seen.insert(c.clone(), roots.len());
        roots.push(c);
    }
    let mut height = 1usize;
    let mut layer: Vec<Vec<i64>> = roots.clone();
    while !layer.is_empty() {
        if height > 64 {
            return Err(ChevalleyError::ClosureDiverged);
        }
        let mut next = Vec::new();
        for c in &layer {
            for i in 0..l {
                // <beta, alpha_i^vee> = sum_k c_k A_ik
                let cart: i64 = (0..l).map(|k| c[k] * gcm.entry(i, k)).sum();
                // p = length of the downward alpha_i-string through beta
                let mut p = 0i64;
                let mut probe = c.clone();
                while probe[i] > 0 {
                    probe[i] -= 1;
                    let nonzero = probe.iter().any(|&x| x != 0);
                    if nonzero && seen.contains_key(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - cart >= 1 {
                    let mut nc = c.clone();
                    nc[i] += 1;
                    if !seen.contains_key(&nc) {
                        seen.insert(nc.clone(), 0);
                        next.push(nc);
                    }
                }
            }
        }
        for c in &next {
            roots.push(c.clone());
        }
        layer = next;
        height += 1;
    }
    roots.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));
    let mut coeff_index = HashMap::new();
    for (i, c) in roots.iter().enumerate() {
        coeff_index.insert(c.clone(), i);
    }
    let highest = roots.len() - 1;
    let top_height: i64 = roots[highest].iter().sum();
    let at_top = roots
        .iter()
        .filter(|c| c.iter().sum::<i64>() == top_height)
        .count();
    if at_top != 1 {
        return Err(ChevalleyError::NotFiniteType);
    }
    Ok(FiniteRootSystem {
        gcm: gcm.clone(),
        rank: l,
        positive_roots: roots,
        highest_root: highest,
        sym_pairing: pairing,
        coeff_index,
    })
}

impl FiniteRootSystem {
    pub fn root_count(&self) -> usize {
        2 * self.positive_roots.len()
    }

    pub fn coeffs(&self, r: Rt) -> Vec<i64> {
        let base = &self.positive_roots[r.index()];
        if r.is_positive() {
            base.clone()
        } else {
            base.iter().map(|&x| -x).collect()
        }
    }

    pub fn height(&self, r: Rt) -> i64 {
        self.coeffs(r).iter().sum()
    }

    pub fn lookup(&self, coeffs: &[i64]) -> Option<Rt> {
        if coeffs.iter().all(|&x| x >= 0) {
            self.coeff_index.get(coeffs).map(|&i| Rt::pos(i))
        } else if coeffs.iter().all(|&x| x <= 0) {
            let neg: Vec<i64> = coeffs.iter().map(|&x| -x).collect();
            self.coeff_index.get(&neg).map(|&i| Rt::neg_of(i))
        } else {
            None
        }
    }

    pub fn sum(&self, a: Rt, b: Rt) -> Option<Rt> {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let s: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
        if s.iter().all(|&x| x == 0) {
            return None;
        }
        self.lookup(&s)
    }

    /// Unnormalized (beta, gamma) from the symmetrizer pairing.
    pub fn raw_pairing(&self, a: Rt, b: Rt) -> Rat {
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if ca[i] != 0 && cb[j] != 0 {
                    acc += rat(ca[i]) * rat(cb[j]) * self.sym_pairing[i][j].clone();
                }
            }
        }
        acc
    }

    /// beta(H_i) = <beta, alpha_i^vee>.
    pub fn eval_on_coroot(&self, beta: Rt, i: usize) -> i64 {
        let c = self.coeffs(beta);
        (0..self.rank).map(|k| c[k] * self.gcm.entry(i, k)).sum()
    }

    /// Integer coefficients of beta^vee over the simple coroots.
    pub fn coroot_coeffs(&self, beta: Rt) -> Vec<i64> {
        let c = self.coeffs(beta);
        let nb = self.raw_pairing(beta, beta);
        (0..self.rank)
            .map(|i| {
                let v = rat(c[i]) * self.sym_pairing[i][i].clone() / nb.clone();
                assert!(v.denom().is_one(), "coroot coefficients must be integers");
                i64::try_from(v.numer().clone()).unwrap()
            })
            .collect()
    }

    /// p = max{k : b - k a is a root}, the downward a-string through b.
    fn string_down(&self, a: Rt, b: Rt) -> i64 {
        let ca = self.coeffs(a);
        let mut cb = self.coeffs(b);
        let mut p = 0;
        loop {
            for i in 0..self.rank {
                cb[i] -= ca[i];
            }
            if cb.iter().all(|&x| x == 0) || self.lookup(&cb).is_some() {
                p += 1;
            } else {
                return p;
            }
            if p > 8 {
                panic!("root string too long");
            }
        }
    }
}

/// Chevalley basis with its integer structure-constant table and the
/// invariant form normalized to (gamma_r, gamma_r) = 2.
#[derive(Debug, Clone)]
pub struct ChevalleyBasis {
    pub roots: FiniteRootSystem,
    /// N[a][b] for ordered pairs of positive roots with a + b a positive root.
    n_pos: HashMap<(usize, usize), i64>,
    /// Scale factor s with (x, y)_normalized = s * raw_pairing.
    form_scale: Rat,
}

pub fn structure_constants(roots: &FiniteRootSystem) -> ChevalleyBasis {
    let r = roots;
    let m = r.positive_roots.len();
    let mut n_pos: HashMap<(usize, usize), i64> = HashMap::new();
    // Process target roots by their sorted order (height, then lex).
    for g in 0..m {
        let hg: i64 = r.positive_roots[g].iter().sum();
        if hg < 2 {
            continue;
        }
        // Special pairs (a, b): a + b = g, a < b in the root order.
        let mut pairs = Vec::new();
        for a in 0..m {
            for b in (a + 1)..m {
                let sum: Vec<i64> = r.positive_roots[a]
                    .iter()
                    .zip(&r.positive_roots[b])
                    .map(|(x, y)| x + y)
                    .collect();
                if sum == r.positive_roots[g] {
                    pairs.push((a, b));
                }
            }
        }
        assert!(!pairs.is_empty(), "non-simple root without special pair");
        pairs.sort();
        let (a1, b1) = pairs[0]; // extraspecial: minimal first component
        let p = r.string_down(Rt::pos(a1), Rt::pos(b1));
        n_pos.insert((a1, b1), p + 1);
        n_pos.insert((b1, a1), -(p + 1));
        let table = PartialTable {
            roots: r,
            n_pos: &n_pos,
        };
        let mut new_entries = Vec::new();
        for &(a, b) in pairs.iter().skip(1) {
            // Jacobi on (E_{a1}, E_{b1}, E_{-a}) expressed through lower
            // height constants:
            //   N_{a,b} = (g,g) / ((b,b) N_{a1,b1}) * (T2 + T3)
            let ra = Rt::pos(a);
            let rb = Rt::pos(b);
            let ra1 = Rt::pos(a1);
            let rb1 = Rt::pos(b1);
            let rg = Rt::pos(g);
            let mut t = Rat::zero();
            if let Some(d) = r.sum(rb1, ra.neg()) {
                t += table.general_n(rb1, ra.neg()) * table.general_n(d, ra1);
            }
            if let Some(d) = r.sum(ra1, ra.neg()) {
                t += table.general_n(ra.neg(), ra1) * table.general_n(d, rb1);
            }
            let val = r.raw_pairing(rg, rg) / r.raw_pairing(rb, rb) * t
                / rat(*n_pos.get(&(a1, b1)).unwrap());
            assert!(
                val.denom().is_one(),
                "structure constant must be an integer"
            );
            let val = i64::try_from(val.numer().clone()).unwrap();
            assert!(val != 0, "special pair with vanishing constant");
            new_entries.push(((a, b), val));
        }
        for ((a, b), v) in new_entries {
            n_pos.insert((a, b), v);
            n_pos.insert((b, a), -v);
        }
    }
    // Normalize the form so the highest root has square length 2.
    let top = Rt::pos(r.highest_root);
    let scale = rat(2) / r.raw_pairing(top, top);
    ChevalleyBasis {
        roots: r.clone(),
        n_pos,
        form_scale: scale,
    }
}

/// View over the in-progress table during construction.
struct PartialTable<'a> {
    roots: &'a FiniteRootSystem,
    n_pos: &'a HashMap<(usize, usize), i64>,
}

impl<'a> PartialTable<'a> {
    fn general_n(&self, x: Rt, y: Rt) -> Rat {
        general_n_impl(
            self.roots,
            |a, b| {
                rat(*self
                    .n_pos
                    .get(&(a, b))
                    .unwrap_or_else(|| panic!("positive pair ({a},{b}) not yet available")))
            },
            x,
            y,
        )
    }
}

/// Reduces N(x, y) for roots of arbitrary sign to the positive-pair table
/// via antisymmetry, N(-a,-b) = -N(a,b) and the cyclic identity
/// N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b) for a + b + c = 0.
fn general_n_impl<F>(r: &FiniteRootSystem, pos_n: F, x: Rt, y: Rt) -> Rat
where
    F: Fn(usize, usize) -> Rat + Copy,
{
    debug_assert!(r.sum(x, y).is_some(), "N of a non-root sum");
    match (x.is_positive(), y.is_positive()) {
        (true, true) => pos_n(x.index(), y.index()),
        (false, false) => -general_n_impl(r, pos_n, x.neg(), y.neg()),
        (false, true) => -general_n_impl(r, pos_n, y, x),
        (true, false) => {
            let z = r.sum(x, y).unwrap();
            if z.is_positive() {
                // x = u + z with u = -y: N(x, y) = -N(u, z) (z,z)/(x,x)
                let u = y.neg();
                -general_n_impl(r, pos_n, u, z) * r.raw_pairing(z, z) / r.raw_pairing(x, x)
            } else {
                // x + w = u with w = -z, u = -y: N(x, y) = -N(x, w) (w,w)/(u,u)
                let w = z.neg();
                let u = y.neg();
                -general_n_impl(r, pos_n, x, w) * r.raw_pairing(w, w) / r.raw_pairing(u, u)
            }
        }
    }
}

impl ChevalleyBasis {
    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn dim(&self) -> usize {
        self.roots.rank + self.roots.root_count()
    }

    pub fn highest_root(&self) -> Rt {
        Rt::pos(self.roots.highest_root)
    }

    /// All basis symbols in a fixed order: H_1..H_l, then E_beta by root.
    pub fn basis(&self) -> Vec<ChevSym> {
        let mut out: Vec<ChevSym> = (0..self.roots.rank).map(ChevSym::H).collect();
        for i in 0..self.roots.positive_roots.len() {
            out.push(ChevSym::E(Rt::pos(i)));
            out.push(ChevSym::E(Rt::neg_of(i)));
        }
        out
    }

    /// Structure constant N_{x,y} for roots with x + y a root.
    pub fn n_constant(&self, x: Rt, y: Rt) -> i64 {
        let v = general_n_impl(&self.roots, |a, b| rat(self.n_pos[&(a, b)]), x, y);
        assert!(v.denom().is_one());
        i64::try_from(v.numer().clone()).unwrap()
    }

    /// Bracket of two basis symbols as an integer combination of symbols.
    pub fn bracket(&self, a: &ChevSym, b: &ChevSym) -> Vec<(ChevSym, Rat)> {
        match (a, b) {
            (ChevSym::H(_), ChevSym::H(_)) => Vec::new(),
            (ChevSym::H(i), ChevSym::E(beta)) => {
                let c = self.roots.eval_on_coroot(*beta, *i);
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(ChevSym::E(*beta), rat(c))]
                }
            }
            (ChevSym::E(beta), ChevSym::H(i)) => {
                let c = self.roots.eval_on_coroot(*beta, *i);
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(ChevSym::E(*beta), rat(-c))]
                }
            }
            (ChevSym::E(x), ChevSym::E(y)) => {
                if *y == x.neg() {
                    // [E_beta, E_{-beta}] = H_{beta^vee}, sign by positivity
                    let beta = if x.is_positive() { *x } else { *y };
                    let sign = if x.is_positive() { 1 } else { -1 };
                    let cc = self.roots.coroot_coeffs(beta);
                    return (0..self.roots.rank)
                        .filter(|&i| cc[i] != 0)
                        .map(|i| (ChevSym::H(i), rat(sign * cc[i])))
                        .collect();
                }
                match self.roots.sum(*x, *y) {
                    None => Vec::new(),
                    Some(z) => {
                        let n = self.n_constant(*x, *y);
                        vec![(ChevSym::E(z), rat(n))]
                    }
                }
            }
        }
    }

    /// Normalized pairing (beta, gamma) with (gamma_r, gamma_r) = 2.
    pub fn pairing(&self, a: Rt, b: Rt) -> Rat {
        self.form_scale.clone() * self.roots.raw_pairing(a, b)
    }

    /// Normalized pairing of simple roots (alpha_i, alpha_j).
    pub fn simple_pairing(&self, i: usize, j: usize) -> Rat {
        self.form_scale.clone() * self.roots.sym_pairing[i][j].clone()
    }

    /// Invariant form B on basis symbols: B(E_b, E_{-b}) = 2/(b,b),
    /// B(H_i, H_j) = (alpha_i^vee, alpha_j^vee), root spaces orthogonal.
    pub fn form(&self, a: &ChevSym, b: &ChevSym) -> Rat {
        match (a, b) {
            (ChevSym::H(i), ChevSym::H(j)) => {
                rat(4) * self.simple_pairing(*i, *j)
                    / (self.simple_pairing(*i, *i) * self.simple_pairing(*j, *j))
            }
            (ChevSym::E(x), ChevSym::E(y)) if *y == x.neg() => rat(2) / self.pairing(*x, *x),
            _ => Rat::zero(),
        }
    }
}

/// Standard finite Cartan matrices in the catalog's node ordering
/// (E-series: chain 1..s-1 with node s attached to node 3).
pub fn finite_gcm(letter: char, rank: usize) -> Option<GeneralizedCartanMatrix> {
    let l = rank;
    let mut a = vec![vec![0i64; l]; l];
    for i in 0..l {
        a[i][i] = 2;
    }
    let mut chain = |edges: &[(usize, usize, i64, i64)]| {
        for &(i, j, down, up) in edges {
            a[i][j] = down;
            a[j][i] = up;
        }
    };
    match (letter, rank) {
        ('A', _) if l >= 1 => {
            for i in 0..l.saturating_sub(1) {
                chain(&[(i, i + 1, -1, -1)]);
            }
        }
        ('B', _) if l >= 2 => {
            for i in 0..l - 2 {
                chain(&[(i, i + 1, -1, -1)]);
            }
            chain(&[(l - 2, l - 1, -1, -2)]);
        }
        ('C', _) if l >= 2 => {
            for i in 0..l - 2 {
                chain(&[(i, i + 1, -1, -1)]);
            }
            chain(&[(l - 2, l - 1, -2, -1)]);
        }
        ('D', _) if l >= 3 => {
            for i in 0..l - 2 {
                chain(&[(i, i + 1, -1, -1)]);
            }
            chain(&[(l - 3, l - 1, -1, -1)]);
        }
        ('E', 6) | ('E', 7) | ('E', 8) => {
            for i in 0..l - 2 {
                chain(&[(i, i + 1, -1, -1)]);
            }
            chain(&[(2, l - 1, -1, -1)]);
        }
        ('F', 4) => {
            chain(&[(0, 1, -1, -1), (1, 2, -1, -2), (2, 3, -1, -1)]);
        }
        ('G', 2) => {
            chain(&[(0, 1, -1, -3)]);
        }
        _ => return None,
    }
    crate::cartan::validate_gcm(a).ok()
}
