//! JSON file formats. Integers are decimal strings so that no reader has to
//! guess an integer width; every object is validated on load.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use moore_tower_core::chain::{ChainComplex, Complex};
use moore_tower_core::simplicial::{BisimplicialModule, SimplicialModule};
use moore_tower_core::{FgModule, Int, Matrix, Module, ModuleMap, RingSpec};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub entries: Vec<String>,
}

/// A presentation: `generators` and one relation vector per entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub generators: usize,
    pub relations: Vec<Vec<String>>,
}

/// `differentials[k]` is `d_{k+1}: terms[k+1] → terms[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub ring: String,
    pub top_degree: usize,
    pub terms: Vec<ModuleJson>,
    pub differentials: Vec<MatrixJson>,
}

/// `faces[n][i] = d_i: X_n → X_{n−1}` (empty at `n = 0`) and
/// `degeneracies[n][j] = s_j: X_n → X_{n+1}` for `n < level`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialJson {
    pub ring: String,
    pub level: usize,
    pub modules: Vec<ModuleJson>,
    pub faces: Vec<Vec<MatrixJson>>,
    pub degeneracies: Vec<Vec<MatrixJson>>,
}

/// `terms[p][q]`; external operators are indexed `[p][i][q]`, internal ones
/// `[p][q][i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BisimplicialJson {
    pub ring: String,
    pub external_level: usize,
    pub internal_level: usize,
    pub terms: Vec<Vec<ModuleJson>>,
    pub external_faces: Vec<Vec<Vec<MatrixJson>>>,
    pub external_degeneracies: Vec<Vec<Vec<MatrixJson>>>,
    pub internal_faces: Vec<Vec<Vec<MatrixJson>>>,
    pub internal_degeneracies: Vec<Vec<Vec<MatrixJson>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsJson {
    pub max_degree: usize,
    pub max_rank: usize,
    pub max_entry: i64,
}

/// A lift problem file: a target complex over `Z/m` and optional bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftProblemJson {
    pub target: ComplexJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsJson>,
}

/// A module map file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub ring: String,
    pub source: ModuleJson,
    pub target: ModuleJson,
    pub matrix: MatrixJson,
}

/// Two modules, as for extensions `0 → sub → ? → quotient → 0` or `Hom(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub ring: String,
    pub first: ModuleJson,
    pub second: ModuleJson,
}

pub fn parse_ring(s: &str) -> Result<RingSpec> {
    let r: RingSpec = s.parse().map_err(|e: String| anyhow!("bad ring {:?}: {}", s, e))?;
    if let RingSpec::Mod(m) = &r {
        if *m <= Int::ONE {
            bail!("bad ring {:?}: modulus must exceed 1", s);
        }
    }
    Ok(r)
}

pub fn ring_name(r: &RingSpec) -> String {
    r.to_string()
}

fn parse_int(s: &str, at: &str) -> Result<Int> {
    s.trim().parse::<Int>().map_err(|_| anyhow!("{}: {:?} is not a decimal integer", at, s))
}

impl MatrixJson {
    pub fn from_matrix(m: &Matrix) -> MatrixJson {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|x| x.to_string()).collect(),
        }
    }

    pub fn to_matrix(&self, at: &str) -> Result<Matrix> {
        if self.entries.len() != self.rows * self.cols {
            bail!(
                "{}: {} entries for a {}×{} matrix",
                at,
                self.entries.len(),
                self.rows,
                self.cols
            );
        }
        let data = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, s)| parse_int(s, &format!("{}.entries[{}]", at, i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_vec(self.rows, self.cols, data))
    }
}

impl ModuleJson {
    pub fn from_module(m: &FgModule) -> ModuleJson {
        ModuleJson {
            generators: m.gens(),
            relations: m
                .relations()
                .basis()
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_module(&self, ring: &RingSpec, at: &str) -> Result<Module> {
        let rels = self
            .relations
            .iter()
            .enumerate()
            .map(|(j, r)| {
                if r.len() != self.generators {
                    bail!("{}.relations[{}]: length {} but {} generators", at, j, r.len(), self.generators);
                }
                r.iter()
                    .enumerate()
                    .map(|(i, s)| parse_int(s, &format!("{}.relations[{}][{}]", at, j, i)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(FgModule::new(ring.clone(), self.generators, rels)))
    }
}

impl ComplexJson {
    pub fn from_complex(c: &ChainComplex) -> ComplexJson {
        ComplexJson {
            ring: ring_name(c.ring()),
            top_degree: c.top(),
            terms: c.terms().iter().map(|t| ModuleJson::from_module(t)).collect(),
            differentials: c.differentials().iter().map(|d| MatrixJson::from_matrix(d.matrix())).collect(),
        }
    }

    pub fn to_complex(&self) -> Result<Complex> {
        let ring = parse_ring(&self.ring).context("ring")?;
        if self.terms.len() != self.top_degree + 1 {
            bail!("terms: {} entries but top_degree {}", self.terms.len(), self.top_degree);
        }
        if self.differentials.len() != self.top_degree {
            bail!("differentials: {} entries but top_degree {}", self.differentials.len(), self.top_degree);
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(k, t)| t.to_module(&ring, &format!("terms[{}]", k)))
            .collect::<Result<Vec<_>>>()?;
        let d = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let at = format!("differentials[{}]", k);
                let mat = m.to_matrix(&at)?;
                ModuleMap::new(terms[k + 1].clone(), terms[k].clone(), mat)
                    .map_err(|e| anyhow!("{} (d_{}): {}", at, k + 1, e))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = ChainComplex::new(ring, terms, d).map_err(|e| anyhow!("complex: {}", e))?;
        Ok(Arc::new(c))
    }
}

fn maps_json(ms: &[ModuleMap]) -> Vec<MatrixJson> {
    ms.iter().map(|m| MatrixJson::from_matrix(m.matrix())).collect()
}

impl SimplicialJson {
    pub fn from_simplicial(x: &SimplicialModule) -> SimplicialJson {
        SimplicialJson {
            ring: ring_name(x.ring()),
            level: x.truncation(),
            modules: x.levels().iter().map(|m| ModuleJson::from_module(m)).collect(),
            faces: x.faces().iter().map(|f| maps_json(f)).collect(),
            degeneracies: x.degeneracies().iter().map(|s| maps_json(s)).collect(),
        }
    }

    pub fn to_simplicial(&self) -> Result<SimplicialModule> {
        let ring = parse_ring(&self.ring).context("ring")?;
        if self.modules.len() != self.level + 1 {
            bail!("modules: {} entries but level {}", self.modules.len(), self.level);
        }
        let levels = self
            .modules
            .iter()
            .enumerate()
            .map(|(n, m)| m.to_module(&ring, &format!("modules[{}]", n)))
            .collect::<Result<Vec<_>>>()?;
        let op = |name: &str, n: usize, i: usize, m: &MatrixJson, src: usize, tgt: usize| -> Result<ModuleMap> {
            let at = format!("{}[{}][{}]", name, n, i);
            let mat = m.to_matrix(&at)?;
            ModuleMap::new(levels[src].clone(), levels[tgt].clone(), mat).map_err(|e| anyhow!("{}: {}", at, e))
        };
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(n, fs)| {
                if n == 0 && !fs.is_empty() {
                    bail!("faces[0]: level 0 has no faces");
                }
                if n > self.level {
                    bail!("faces[{}]: above the level", n);
                }
                fs.iter().enumerate().map(|(i, m)| op("faces", n, i, m, n, n - 1)).collect()
            })
            .collect::<Result<Vec<_>>>()?;
        let degens = self
            .degeneracies
            .iter()
            .enumerate()
            .map(|(n, ss)| {
                if n >= self.level {
                    bail!("degeneracies[{}]: none at or above the top level", n);
                }
                ss.iter().enumerate().map(|(j, m)| op("degeneracies", n, j, m, n, n + 1)).collect()
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialModule::new(ring, levels, faces, degens).map_err(|e| anyhow!("simplicial module: {}", e))
    }
}

impl BisimplicialJson {
    pub fn from_bisimplicial(x: &BisimplicialModule) -> BisimplicialJson {
        let (pt, qt) = (x.external_truncation(), x.internal_truncation());
        let m = |f: &ModuleMap| MatrixJson::from_matrix(f.matrix());
        BisimplicialJson {
            ring: ring_name(x.ring()),
            external_level: pt,
            internal_level: qt,
            terms: (0..=pt)
                .map(|p| (0..=qt).map(|q| ModuleJson::from_module(&x.term(p, q))).collect())
                .collect(),
            external_faces: (0..=pt)
                .map(|p| {
                    let nf = if p == 0 { 0 } else { p + 1 };
                    (0..nf).map(|i| (0..=qt).map(|q| m(x.ext_face(p, i, q))).collect()).collect()
                })
                .collect(),
            external_degeneracies: (0..pt)
                .map(|p| (0..=p).map(|j| (0..=qt).map(|q| m(x.ext_degen(p, j, q))).collect()).collect())
                .collect(),
            internal_faces: (0..=pt)
                .map(|p| {
                    (0..=qt)
                        .map(|q| {
                            let nf = if q == 0 { 0 } else { q + 1 };
                            (0..nf).map(|i| m(x.int_face(p, q, i))).collect()
                        })
                        .collect()
                })
                .collect(),
            internal_degeneracies: (0..=pt)
                .map(|p| (0..qt).map(|q| (0..=q).map(|j| m(x.int_degen(p, q, j))).collect()).collect())
                .collect(),
        }
    }

    pub fn to_bisimplicial(&self) -> Result<BisimplicialModule> {
        let ring = parse_ring(&self.ring).context("ring")?;
        let (pt, qt) = (self.external_level, self.internal_level);
        if self.terms.len() != pt + 1 || self.terms.iter().any(|r| r.len() != qt + 1) {
            bail!("terms: expected {}×{} modules", pt + 1, qt + 1);
        }
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .map(|(q, m)| m.to_module(&ring, &format!("terms[{}][{}]", p, q)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let map = |at: String, m: &MatrixJson, src: (usize, usize), tgt: (usize, usize)| -> Result<ModuleMap> {
            let get = |(p, q): (usize, usize)| -> Result<Module> {
                terms
                    .get(p)
                    .and_then(|r| r.get(q))
                    .cloned()
                    .ok_or_else(|| anyhow!("{}: index ({}, {}) out of range", at, p, q))
            };
            let mat = m.to_matrix(&at)?;
            ModuleMap::new(get(src)?, get(tgt)?, mat).map_err(|e| anyhow!("{}: {}", at, e))
        };
        let ext_faces = self
            .external_faces
            .iter()
            .enumerate()
            .map(|(p, fs)| {
                fs.iter()
                    .enumerate()
                    .map(|(i, per_q)| {
                        per_q
                            .iter()
                            .enumerate()
                            .map(|(q, m)| {
                                let at = format!("external_faces[{}][{}][{}]", p, i, q);
                                map(at, m, (p, q), (p.wrapping_sub(1), q))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let ext_degens = self
            .external_degeneracies
            .iter()
            .enumerate()
            .map(|(p, ss)| {
                ss.iter()
                    .enumerate()
                    .map(|(j, per_q)| {
                        per_q
                            .iter()
                            .enumerate()
                            .map(|(q, m)| {
                                let at = format!("external_degeneracies[{}][{}][{}]", p, j, q);
                                map(at, m, (p, q), (p + 1, q))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let int_faces = self
            .internal_faces
            .iter()
            .enumerate()
            .map(|(p, per_q)| {
                per_q
                    .iter()
                    .enumerate()
                    .map(|(q, fs)| {
                        fs.iter()
                            .enumerate()
                            .map(|(i, m)| {
                                let at = format!("internal_faces[{}][{}][{}]", p, q, i);
                                map(at, m, (p, q), (p, q.wrapping_sub(1)))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let int_degens = self
            .internal_degeneracies
            .iter()
            .enumerate()
            .map(|(p, per_q)| {
                per_q
                    .iter()
                    .enumerate()
                    .map(|(q, ss)| {
                        ss.iter()
                            .enumerate()
                            .map(|(j, m)| {
                                let at = format!("internal_degeneracies[{}][{}][{}]", p, q, j);
                                map(at, m, (p, q), (p, q + 1))
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BisimplicialModule::new(ring, terms, ext_faces, ext_degens, int_faces, int_degens)
            .map_err(|e| anyhow!("bisimplicial module: {}", e))
    }
}

impl MapJson {
    pub fn to_map(&self) -> Result<ModuleMap> {
        let ring = parse_ring(&self.ring).context("ring")?;
        let src = self.source.to_module(&ring, "source")?;
        let tgt = self.target.to_module(&ring, "target")?;
        let m = self.matrix.to_matrix("matrix")?;
        ModuleMap::new(src, tgt, m).map_err(|e| anyhow!("matrix: {}", e))
    }
}

impl PairJson {
    pub fn to_pair(&self) -> Result<(Module, Module)> {
        let ring = parse_ring(&self.ring).context("ring")?;
        Ok((self.first.to_module(&ring, "first")?, self.second.to_module(&ring, "second")?))
    }
}

/// Any input file, recognized by its fields.
#[derive(Clone, Debug)]
pub enum Input {
    Matrix(Matrix),
    Module(ModuleJson),
    Map(ModuleMap),
    Pair(Module, Module),
    Complex(Complex),
    Simplicial(SimplicialModule),
    Bisimplicial(BisimplicialModule),
    Lift(Complex, Option<BoundsJson>),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Matrix(_) => "matrix",
            Input::Module(_) => "module",
            Input::Map(_) => "module map",
            Input::Pair(..) => "module pair",
            Input::Complex(_) => "chain complex",
            Input::Simplicial(_) => "simplicial module",
            Input::Bisimplicial(_) => "bisimplicial module",
            Input::Lift(..) => "lift problem",
        }
    }
}

fn has(v: &serde_json::Value, key: &str) -> bool {
    v.get(key).is_some()
}

/// Parses and validates an input document; the shape is chosen by its keys.
pub fn parse_input_str(text: &str) -> Result<Input> {
    let v: serde_json::Value = serde_json::from_str(text).context("malformed JSON")?;
    let typed = |v: serde_json::Value, what: &str| -> Result<serde_json::Value> {
        if !v.is_object() {
            bail!("expected a JSON object for a {}", what);
        }
        Ok(v)
    };
    let v = typed(v, "document")?;
    if has(&v, "external_level") {
        let b: BisimplicialJson = serde_json::from_value(v).context("bisimplicial module")?;
        Ok(Input::Bisimplicial(b.to_bisimplicial()?))
    } else if has(&v, "faces") {
        let s: SimplicialJson = serde_json::from_value(v).context("simplicial module")?;
        Ok(Input::Simplicial(s.to_simplicial()?))
    } else if has(&v, "target") && has(&v, "source") {
        let m: MapJson = serde_json::from_value(v).context("module map")?;
        Ok(Input::Map(m.to_map()?))
    } else if has(&v, "target") {
        let l: LiftProblemJson = serde_json::from_value(v).context("lift problem")?;
        Ok(Input::Lift(l.target.to_complex().context("target")?, l.bounds))
    } else if has(&v, "top_degree") {
        let c: ComplexJson = serde_json::from_value(v).context("chain complex")?;
        Ok(Input::Complex(c.to_complex()?))
    } else if has(&v, "first") {
        let p: PairJson = serde_json::from_value(v).context("module pair")?;
        let (a, b) = p.to_pair()?;
        Ok(Input::Pair(a, b))
    } else if has(&v, "generators") {
        let m: ModuleJson = serde_json::from_value(v).context("module")?;
        Ok(Input::Module(m))
    } else if has(&v, "entries") {
        let m: MatrixJson = serde_json::from_value(v).context("matrix")?;
        Ok(Input::Matrix(m.to_matrix("matrix")?))
    } else {
        bail!("unrecognized input: expected a matrix, module, module map, module pair, complex, simplicial, bisimplicial or lift-problem document")
    }
}

pub fn parse_input(path: &std::path::Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_input_str(&text).with_context(|| format!("in {}", path.display()))
}
