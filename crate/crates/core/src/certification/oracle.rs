//! Brute-force membership oracle.
//!
//! Over a grid of vectors whose denominators are powers of `Delta` tags,
//! membership in `M` reduces to membership of the class modulo `D^(Lambda)`
//! in the finite set `{ frac(sum r_l g_l) }`, with `r_l` running over constants
//! that represent every residue class modulo the glue denominators.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::fractions::{ComponentId, Fraction, TagId, VectorE};
use crate::modules::{GluedModule, ModuleError, Rigid};
use crate::ring::RingElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBounds {
    pub coeff: u32,
    pub exp: u32,
    pub max_combinations: u64,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            coeff: 30,
            exp: 2,
            max_combinations: 2_000_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle unsupported: {0}")]
    Unsupported(String),
    #[error("coefficient bound {bound} gives {available} constants, fewer than the {needed} residue classes modulo {xi}")]
    InsufficientCoefficients {
        xi: String,
        needed: String,
        available: usize,
        bound: u32,
    },
    #[error("{needed} coefficient combinations exceed the cap of {cap}")]
    TooLarge { needed: u128, cap: u64 },
    #[error(transparent)]
    Module(#[from] ModuleError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub vector: Value,
    pub decided_member: bool,
    pub oracle_member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub module: String,
    pub bounds: OracleBounds,
    pub combinations: u64,
    pub classes: usize,
    pub grid_points: usize,
    pub members: usize,
    pub disagreements: Vec<Disagreement>,
    /// Shifted combinations the decision procedure failed to accept.
    pub rejected_combinations: Vec<Value>,
    pub passed: bool,
}

fn mf(e: ModuleError) -> OracleError {
    OracleError::Module(e)
}

/// The finite set `{ frac(sum r_l g_l) }` of classes modulo `D^(Lambda)`.
#[derive(Clone, Debug)]
pub struct OracleSet {
    pub classes: HashSet<VectorE>,
    pub combinations: u64,
    /// Generated elements (shifted by a base element) that `member_glued`
    /// failed to accept.
    pub rejected: Vec<VectorE>,
}

impl OracleSet {
    /// Whether `x` is generated, up to a base element. Exact on vectors whose
    /// denominators are powers of Delta tags.
    pub fn contains(&self, rigid: &Rigid<'_>, x: &VectorE) -> Result<bool, ModuleError> {
        Ok(self.classes.contains(&rigid.q.vec_frac(x)?))
    }
}

impl Rigid<'_> {
    /// Enumerates the oracle set for `m` under `bounds`.
    pub fn oracle_set(&self, m: &GluedModule, bounds: OracleBounds) -> Result<OracleSet, OracleError> {
        m.check_shape().map_err(mf)?;
        let q = self.q;
        let ring = q.ring;
        let consts = ring.bounded_constants(bounds.coeff);
        for g in &m.glue {
            let xi = &q.tags.get(&g.xi).expect("designated").element;
            let Some(classes) = ring.constant_residue_classes(xi) else {
                return Err(OracleError::Unsupported(format!(
                    "constants do not represent residues modulo {}",
                    ring.render(xi)
                )));
            };
            if num_bigint::BigInt::from(consts.len()) < classes {
                return Err(OracleError::InsufficientCoefficients {
                    xi: ring.render(xi),
                    needed: classes.to_string(),
                    available: consts.len(),
                    bound: bounds.coeff,
                });
            }
        }
        let needed = (consts.len() as u128).saturating_pow(m.glue.len() as u32);
        if needed > u128::from(bounds.max_combinations) {
            return Err(OracleError::TooLarge {
                needed,
                cap: bounds.max_combinations,
            });
        }

        let glue_vectors: Vec<VectorE> = m
            .glue
            .iter()
            .map(|g| self.glue_vector(g, m))
            .collect::<Result<_, _>>()
            .map_err(mf)?;
        let shift = self.base_shift(m).map_err(mf)?;
        let combinations = needed as u64;
        let outcomes: Vec<(VectorE, Option<VectorE>)> = (0..combinations)
            .into_par_iter()
            .map(|idx| -> Result<_, ModuleError> {
                let mut rest = idx as usize;
                let mut v = VectorE::zero();
                for g in &glue_vectors {
                    let r = &consts[rest % consts.len()];
                    rest /= consts.len();
                    v = q.vec_add(&v, &q.vec_scale(r, g)?)?;
                }
                let class = q.vec_frac(&v)?;
                let shifted = q.vec_add(&v, &shift)?;
                let rejected = (!self.member_glued(&shifted, m)?.is_member()).then_some(shifted);
                Ok((class, rejected))
            })
            .collect::<Result<_, _>>()
            .map_err(mf)?;
        let mut rejected = Vec::new();
        let mut classes = HashSet::new();
        for (c, r) in outcomes {
            classes.insert(c);
            rejected.extend(r);
        }
        Ok(OracleSet {
            classes,
            combinations,
            rejected,
        })
    }

    /// Compares `member_glued` with the oracle set on the bounded grid.
    pub fn brute_force_oracle(&self, m: &GluedModule, bounds: OracleBounds) -> Result<OracleReport, OracleError> {
        let set = self.oracle_set(m, bounds)?;
        let q = self.q;
        let consts = q.ring.bounded_constants(bounds.coeff);
        let grid = self.oracle_grid(m, &consts, bounds.exp).map_err(mf)?;
        let verdicts: Vec<(bool, bool)> = grid
            .par_iter()
            .map(|x| -> Result<_, ModuleError> {
                let decided = self.member_glued(x, m)?.is_member();
                let oracle = set.contains(self, x)?;
                Ok((decided, oracle))
            })
            .collect::<Result<_, _>>()
            .map_err(mf)?;
        let mut disagreements = Vec::new();
        let mut members = 0;
        for (x, (decided, oracle)) in grid.iter().zip(verdicts) {
            members += usize::from(decided);
            if decided != oracle {
                disagreements.push(Disagreement {
                    vector: q.vector_json(x),
                    decided_member: decided,
                    oracle_member: oracle,
                });
            }
        }
        Ok(OracleReport {
            module: m.label.clone(),
            bounds,
            combinations: set.combinations,
            classes: set.classes.len(),
            grid_points: grid.len(),
            members,
            passed: disagreements.is_empty() && set.rejected.is_empty(),
            disagreements,
            rejected_combinations: set.rejected.iter().map(|v| q.vector_json(v)).collect(),
        })
    }

    /// A base element with a nontrivial denominator in every component whose
    /// support is nonempty.
    fn base_shift(&self, m: &GluedModule) -> Result<VectorE, ModuleError> {
        let q = self.q;
        let mut v = VectorE::zero();
        for (c, a) in &m.components {
            let den: BTreeMap<TagId, u32> = a.support.iter().take(1).map(|t| (t.clone(), 1)).collect();
            let f = q.fraction(q.ring.one(), den)?;
            v = q.vec_add(&v, &q.unit_vector(c.clone(), f))?;
        }
        Ok(v)
    }

    /// Single-component probes everywhere, plus pair-supported vectors on
    /// each glued component together with the base.
    fn oracle_grid(&self, m: &GluedModule, consts: &[RingElement], k_max: u32) -> Result<Vec<VectorE>, ModuleError> {
        let q = self.q;
        let deltas: Vec<&TagId> = q.tags.ids().filter(|t| q.tags.is_delta(t)).collect();
        let mut entries: Vec<Fraction> = Vec::new();
        let mut seen = HashSet::new();
        for n in consts {
            for d in std::iter::once(None).chain(deltas.iter().map(Some)) {
                for k in 0..=k_max {
                    let den: BTreeMap<TagId, u32> = match d {
                        Some(t) if k > 0 => [((*t).clone(), k)].into(),
                        None if k == 0 => BTreeMap::new(),
                        _ => continue,
                    };
                    let f = q.fraction(n.clone(), den)?;
                    if seen.insert(f.clone()) {
                        entries.push(f);
                    }
                }
            }
        }
        let mut grid = HashSet::new();
        for c in m.components.keys() {
            for f in &entries {
                grid.insert(q.unit_vector(c.clone(), f.clone()));
            }
        }
        let glued: Vec<&ComponentId> = m.glue.iter().map(|g| &g.component).collect();
        for c in glued {
            for f in &entries {
                let u = q.unit_vector(c.clone(), f.clone());
                for g in &entries {
                    grid.insert(q.vec_add(&u, &q.unit_vector(m.base.clone(), g.clone()))?);
                }
            }
        }
        let mut grid: Vec<VectorE> = grid.into_iter().collect();
        grid.sort();
        Ok(grid)
    }
}
