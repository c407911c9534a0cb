//! JSON wire types. All rationals are `p/q` strings, complex scalars are
//! `["re", "im"]` pairs; emissions round-trip through these parsers.

use anyhow::{anyhow, bail, Context, Result};
use kmx_core::chevalley::{ChevSym, Rt};
use kmx_core::scalar::{rat_from_str, rat_to_string, CRat, Rat};
use kmx_core::verma::{mono_name, HighestWeightSpec, Mono, Sym};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub fn rat_str(r: &Rat) -> String {
    rat_to_string(r)
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    rat_from_str(s).map_err(|e| anyhow!(e))
}

pub fn crat_pair(c: &CRat) -> [String; 2] {
    [rat_to_string(&c.re), rat_to_string(&c.im)]
}

pub fn parse_crat(pair: &[String; 2]) -> Result<CRat> {
    Ok(CRat::new(parse_rat(&pair[0])?, parse_rat(&pair[1])?))
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ClassifyOut {
    pub kind: String,
    pub family: Option<String>,
    pub det: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct RootOut {
    pub coords: Vec<String>,
    pub imaginary: bool,
    pub mult: usize,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct RootsOut {
    pub family: String,
    pub delta: Vec<String>,
    pub roots: Vec<RootOut>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct LambdaOut {
    pub h: Vec<String>,
    pub d: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct WeightsOut {
    pub mu: Vec<String>,
    pub lambda: Vec<LambdaOut>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Clone)]
pub struct LoopTermIn {
    pub deg: i64,
    pub sym: String,
    pub coef: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Clone)]
pub struct LoopElementIo {
    pub terms: Vec<LoopTermIn>,
    pub c: String,
    pub d: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct GramCertOut {
    pub weight: Vec<i64>,
    pub basis: Vec<String>,
    pub matrix: Vec<Vec<[String; 2]>>,
    pub signature: [usize; 3],
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct GramOut {
    pub certificates: Vec<GramCertOut>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct UnitarizeOut {
    pub verdict: String,
    pub depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negative: Option<usize>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ErrorOut {
    pub error: String,
}

/// moments.json: {"K": 6, "m": {"0": ["1","0"], ...}, "positive": true,
/// "infinitely_supported": false}
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct MomentsFile {
    #[serde(rename = "K")]
    pub truncation: i64,
    pub m: BTreeMap<String, [String; 2]>,
    #[serde(default)]
    pub positive: bool,
    #[serde(default)]
    pub infinitely_supported: bool,
}

/// w.json: {"weights": [[["re","im"], ...], ...]}, one row per
/// representation, entries indexed by the finite Cartan generators.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ElementaryWeightsFile {
    pub weights: Vec<Vec<[String; 2]>>,
}

/// p.json: {"phases": [{"mode": "geometric", "turns": "1/4"} |
/// {"mode": "explicit", "table": {"-1": "-1/4", "0": "0", "1": "1/4"}}]}
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct PhasesFile {
    pub phases: Vec<PhaseEntry>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(tag = "mode")]
pub enum PhaseEntry {
    #[serde(rename = "geometric")]
    Geometric { turns: String },
    #[serde(rename = "explicit")]
    Explicit { table: BTreeMap<String, String> },
}

pub fn loop_elem_to_io(x: &kmx_core::affine::LoopElement) -> LoopElementIo {
    LoopElementIo {
        terms: x
            .terms
            .iter()
            .map(|((deg, sym), coef)| LoopTermIn {
                deg: *deg,
                sym: chev_sym_name(sym),
                coef: rat_to_string(coef),
            })
            .collect(),
        c: rat_to_string(&x.c_coeff),
        d: rat_to_string(&x.d_coeff),
    }
}

pub fn loop_elem_from_io(io: &LoopElementIo) -> Result<kmx_core::affine::LoopElement> {
    let mut out = kmx_core::affine::LoopElement::zero();
    for t in &io.terms {
        out.add_term(t.deg, parse_chev_sym(&t.sym)?, parse_rat(&t.coef)?);
    }
    out.c_coeff = parse_rat(&io.c)?;
    out.d_coeff = parse_rat(&io.d)?;
    Ok(out)
}

/// Mechanical symbol grammar of the bracket schema: `H[i]`, `E[r]`, `F[r]`
/// with 1-based indices (`r` indexes the positive roots in height order).
pub fn chev_sym_name(sym: &ChevSym) -> String {
    match sym {
        ChevSym::H(i) => format!("H[{}]", i + 1),
        ChevSym::E(r) if r.is_positive() => format!("E[{}]", r.index() + 1),
        ChevSym::E(r) => format!("F[{}]", r.index() + 1),
    }
}

pub fn parse_chev_sym(s: &str) -> Result<ChevSym> {
    let (kind, rest) = s.split_at(1);
    let idx: usize = rest
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .context("symbol must look like H[i], E[r] or F[r]")?
        .parse()
        .context("symbol index")?;
    if idx == 0 {
        bail!("symbol indices are 1-based");
    }
    match kind {
        "H" => Ok(ChevSym::H(idx - 1)),
        "E" => Ok(ChevSym::E(Rt::pos(idx - 1))),
        "F" => Ok(ChevSym::E(Rt::neg_of(idx - 1))),
        _ => bail!("unknown symbol kind {kind:?}"),
    }
}

pub fn mono_to_name(spec: &HighestWeightSpec, mono: &Mono) -> String {
    mono_name(spec, mono)
}

/// Parses a dot-joined monomial name back into symbols; accepts the
/// generator aliases (`f0`, `e1`, `h2`), the bracketed forms and the
/// `@deg` suffix, plus the matrix-backend forms `E[i,j]@k` / `D[i]@k`.
pub fn parse_mono(spec: &HighestWeightSpec, name: &str) -> Result<Mono> {
    if name == "1" {
        return Ok(Vec::new());
    }
    name.split('.')
        .map(|part| parse_sym_name(spec, part))
        .collect()
}

pub fn parse_sym_name(spec: &HighestWeightSpec, s: &str) -> Result<Sym> {
    if s == "c" {
        return Ok(Sym::C);
    }
    if s == "d" {
        return Ok(Sym::D);
    }
    if let Some(rest) = s.strip_prefix("E[") {
        if rest.contains(',') {
            let (inside, deg) = split_mat(rest)?;
            let (i, j) = inside
                .split_once(',')
                .context("matrix symbol must be E[i,j]@k")?;
            return Ok(Sym::MatE(deg, i.parse()?, j.parse()?));
        }
    }
    if let Some(rest) = s.strip_prefix("D[") {
        let (inside, deg) = split_mat(rest)?;
        return Ok(Sym::MatD(deg, inside.parse()?));
    }
    // loop-backend names: optional @deg suffix
    let (base, deg) = match s.split_once('@') {
        Some((b, d)) => (b, d.parse::<i64>().context("degree suffix")?),
        None => (s, 0i64),
    };
    let chev_sym = |name: &str| -> Result<ChevSym> {
        if let Some(idx) = name.strip_prefix('h') {
            if let Ok(i) = idx.parse::<usize>() {
                if i >= 1 {
                    return Ok(ChevSym::H(i - 1));
                }
            }
        }
        if let Some(idx) = name.strip_prefix('e') {
            if let Ok(i) = idx.parse::<usize>() {
                if i >= 1 {
                    let rt = spec
                        .simple_root_rt(i - 1)
                        .context("simple root index out of range")?;
                    return Ok(ChevSym::E(rt));
                }
            }
        }
        if let Some(idx) = name.strip_prefix('f') {
            if let Ok(i) = idx.parse::<usize>() {
                if i >= 1 {
                    let rt = spec
                        .simple_root_rt(i - 1)
                        .context("simple root index out of range")?;
                    return Ok(ChevSym::E(rt.neg()));
                }
            }
        }
        parse_chev_sym(name)
    };
    // affine generator aliases
    if base == "f0" || base == "e0" {
        let top = top_root(spec)?;
        return Ok(if base == "f0" {
            Sym::Loop(-1, ChevSym::E(Rt::pos(top)))
        } else {
            Sym::Loop(1, ChevSym::E(Rt::neg_of(top)))
        });
    }
    Ok(Sym::Loop(deg, chev_sym(base)?))
}

fn split_mat(rest: &str) -> Result<(&str, i64)> {
    let (inside, tail) = rest.split_once(']').context("missing ]")?;
    let deg = match tail.strip_prefix('@') {
        Some(d) => d.parse::<i64>().context("degree suffix")?,
        None => 0,
    };
    Ok((inside, deg))
}

fn top_root(spec: &HighestWeightSpec) -> Result<usize> {
    spec.highest_root_index()
        .context("f0/e0 only exist for loop backends")
}

pub fn gram_cert_out(
    spec: &HighestWeightSpec,
    cert: &kmx_core::verma::GramCertificate,
) -> GramCertOut {
    let n = cert.basis.len();
    let mut matrix = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(crat_pair(cert.matrix.at(i, j)));
        }
        matrix.push(row);
    }
    GramCertOut {
        weight: cert.weight.clone(),
        basis: cert.basis.iter().map(|m| mono_to_name(spec, m)).collect(),
        matrix,
        signature: [cert.signature.0, cert.signature.1, cert.signature.2],
    }
}

pub fn moments_from_file(f: &MomentsFile) -> Result<BTreeMap<i64, CRat>> {
    let mut out = BTreeMap::new();
    for (k, v) in &f.m {
        let key: i64 = k.parse().context("moment index")?;
        out.insert(key, parse_crat(v)?);
    }
    Ok(out)
}

pub fn weights_from_file(f: &ElementaryWeightsFile) -> Result<Vec<Vec<CRat>>> {
    f.weights
        .iter()
        .map(|row| row.iter().map(parse_crat).collect())
        .collect()
}

pub fn phases_from_file(f: &PhasesFile) -> Result<Vec<kmx_core::unitary::PhaseFamily>> {
    use kmx_core::unitary::{Phase, PhaseFamily};
    f.phases
        .iter()
        .map(|entry| match entry {
            PhaseEntry::Geometric { turns } => {
                let p =
                    Phase::from_turns(&parse_rat(turns)?).map_err(|e| anyhow!(e.to_string()))?;
                Ok(PhaseFamily::Geometric(p))
            }
            PhaseEntry::Explicit { table } => {
                let mut map = BTreeMap::new();
                for (k, v) in table {
                    let key: i64 = k.parse().context("phase degree")?;
                    let p =
                        Phase::from_turns(&parse_rat(v)?).map_err(|e| anyhow!(e.to_string()))?;
                    map.insert(key, p);
                }
                Ok(PhaseFamily::Explicit(map))
            }
        })
        .collect()
}
