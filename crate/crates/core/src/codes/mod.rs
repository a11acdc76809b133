//! Linear codes over prime fields: duals, generalized Hamming weights by
//! subspace enumeration, and completion of weight hierarchies by Wei duality.

mod gaussian;
mod subspace;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

pub use gaussian::gaussian_binomial;

use crate::error::{Error, Result};
use crate::linalg::{FMatrix, FieldSpec};

/// Default cap on the number of subspaces a single GHW enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// An `[n, k]` code held as its generator matrix in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    gen: FMatrix,
}

impl LinearCode {
    /// The row space of `m`; dependent rows are dropped.
    pub fn from_generator(m: &FMatrix) -> Self {
        Self {
            gen: m.rref().matrix.without_zero_rows(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.gen.field()
    }

    /// Block length `n`.
    pub fn length(&self) -> usize {
        self.gen.cols()
    }

    /// Dimension `k`.
    pub fn dimension(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &FMatrix {
        &self.gen
    }

    /// The dual code, generated by the right kernel of the generator.
    pub fn dual(&self) -> LinearCode {
        Self::from_generator(&self.gen.nullspace())
    }

    pub fn contains(&self, word: &[u16]) -> bool {
        if word.len() != self.length() {
            return false;
        }
        let Ok(row) = FMatrix::from_residues(self.field(), 1, word.len(), word.to_vec()) else {
            return false;
        };
        self.gen
            .vstack(&row)
            .map(|m| m.rank() == self.dimension())
            .unwrap_or(false)
    }

    /// Size of the support of the subspace spanned by the rows of `basis`.
    pub fn support_weight(&self, basis: &FMatrix) -> Result<usize> {
        if basis.rows() > 0 && basis.cols() != self.length() {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} columns, code length is {}",
                basis.cols(),
                self.length()
            )));
        }
        if basis.field() != self.field() {
            return Err(Error::FieldMismatch {
                left: self.field().p(),
                right: basis.field().p(),
            });
        }
        if basis.row_iter().any(|r| !self.contains(r)) {
            return Err(Error::NotInCode);
        }
        Ok((0..basis.cols())
            .filter(|&c| (0..basis.rows()).any(|r| basis.get(r, c) != 0))
            .count())
    }

    /// Minimum support size over all `r`-dimensional subcodes.
    pub fn ghw(&self, r: usize, budget: u64) -> Result<Ghw> {
        self.ghw_at_least(r, r, budget)
    }

    /// Same as [`LinearCode::ghw`] with a known lower bound, which lets the
    /// enumeration stop early.
    fn ghw_at_least(&self, r: usize, lower_bound: usize, budget: u64) -> Result<Ghw> {
        let k = self.dimension();
        if r < 1 || r > k {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                lo: 1,
                hi: k,
            });
        }
        check_budget(k, r, self.field(), budget)?;
        let book = subspace::Codebook::new(self);
        let best = subspace::min_support(&book, r, lower_bound.max(r));
        Ok(Ghw {
            delta: best.value,
            witness: subspace::basis_rows(&book, &best.rows),
        })
    }

    /// `delta_1 .. delta_{r_max}` by enumeration only.
    pub fn hierarchy_bruteforce(&self, r_max: usize, budget: u64) -> Result<WeightHierarchy> {
        if r_max > self.dimension() {
            return Err(Error::OutOfRange {
                name: "r_max",
                value: r_max,
                lo: 0,
                hi: self.dimension(),
            });
        }
        let mut h = WeightHierarchy::default();
        for r in 1..=r_max {
            let lb = h.deltas.last().map_or(r, |d| d + 1);
            h.push(self.ghw_at_least(r, lb, budget)?.delta, Method::BruteForce);
        }
        Ok(h)
    }

    /// `delta_1 .. delta_{r_max}`: enumeration where the subspace count fits the
    /// budget, otherwise the full dual hierarchy plus Wei duality.
    pub fn weight_hierarchy(&self, r_max: usize, budget: u64) -> Result<WeightHierarchy> {
        let k = self.dimension();
        if r_max > k {
            return Err(Error::OutOfRange {
                name: "r_max",
                value: r_max,
                lo: 0,
                hi: k,
            });
        }
        let mut h = WeightHierarchy::default();
        let mut completed: Option<WeightHierarchy> = None;
        for r in 1..=r_max {
            if within_budget(k, r, self.field(), budget) {
                let lb = h.deltas.last().map_or(r, |d| d + 1);
                let delta = self.ghw_at_least(r, lb, budget)?.delta;
                if let Some(full) = &completed {
                    if full.deltas[r - 1] != delta {
                        return Err(Error::Inconsistent(format!(
                            "delta_{r} is {delta} by enumeration but {} by Wei duality",
                            full.deltas[r - 1]
                        )));
                    }
                }
                h.push(delta, Method::BruteForce);
                continue;
            }
            if completed.is_none() {
                let dual = self.dual();
                let dual_h = dual.hierarchy_bruteforce(dual.dimension(), budget)?;
                completed = Some(wei_complete(self.length(), k, &h, &dual_h)?);
            }
            let full = completed.as_ref().unwrap();
            h.push(full.deltas[r - 1], Method::Duality);
        }
        Ok(h)
    }
}

/// A generalized Hamming weight with a minimizing subcode basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ghw {
    pub delta: usize,
    pub witness: FMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    BruteForce,
    Duality,
    Graph,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::BruteForce => "bruteforce",
            Method::Duality => "duality",
            Method::Graph => "graph",
        }
    }
}

/// `delta_1 < delta_2 < ...` with the method that produced each entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightHierarchy {
    pub deltas: Vec<usize>,
    pub methods: Vec<Method>,
}

impl WeightHierarchy {
    pub fn new(deltas: Vec<usize>, method: Method) -> Self {
        let methods = vec![method; deltas.len()];
        Self { deltas, methods }
    }

    pub fn push(&mut self, delta: usize, method: Method) {
        self.deltas.push(delta);
        self.methods.push(method);
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.deltas.windows(2).all(|w| w[0] < w[1]) && self.deltas.first().is_none_or(|&d| d >= 1)
    }
}

/// Recovers the full hierarchy of an `[n, k]` code from the full hierarchy of
/// its dual: `{delta_r(C)} = {1..n} \ {n + 1 - delta_r(C^perp)}`.
pub fn wei_complete(
    n: usize,
    k: usize,
    primal_partial: &WeightHierarchy,
    dual_full: &WeightHierarchy,
) -> Result<WeightHierarchy> {
    if !dual_full.is_strictly_increasing() || dual_full.deltas.last().is_some_and(|&d| d > n) {
        return Err(Error::Inconsistent(format!(
            "dual hierarchy {:?} is not strictly increasing within 1..={n}",
            dual_full.deltas
        )));
    }
    let excluded: BTreeSet<usize> = dual_full.deltas.iter().map(|d| n + 1 - d).collect();
    let deltas: Vec<usize> = (1..=n).filter(|d| !excluded.contains(d)).collect();
    if deltas.len() != k {
        return Err(Error::Inconsistent(format!(
            "complement has {} elements, expected dimension {k}",
            deltas.len()
        )));
    }
    for (i, (&given, &derived)) in primal_partial.deltas.iter().zip(&deltas).enumerate() {
        if given != derived {
            return Err(Error::Inconsistent(format!(
                "delta_{} is {given} but Wei duality gives {derived}",
                i + 1
            )));
        }
    }
    if primal_partial.len() > k {
        return Err(Error::Inconsistent(
            "primal hierarchy longer than the dimension".into(),
        ));
    }
    Ok(WeightHierarchy::new(deltas, Method::Duality))
}

fn within_budget(k: usize, r: usize, field: FieldSpec, budget: u64) -> bool {
    gaussian_binomial(k, r, field.p() as u64) <= BigUint::from(budget)
}

fn check_budget(k: usize, r: usize, field: FieldSpec, budget: u64) -> Result<()> {
    let count = gaussian_binomial(k, r, field.p() as u64);
    if count > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            what: "subspaces",
            count: count.to_string(),
            budget,
        });
    }
    Ok(())
}
