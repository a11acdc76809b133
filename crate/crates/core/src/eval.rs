//! Reed–Muller-type evaluation codes on the projective points given by the
//! columns of an incidence matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{gaussian_binomial, wei_complete, LinearCode, WeightHierarchy};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{FMatrix, FieldSpec};

/// Distinct projective points of `P^{s-1}` over `F_p`, each given by a fixed
/// nonzero representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    field: FieldSpec,
    s: usize,
    points: Vec<Vec<u16>>,
}

impl PointSet {
    pub fn new(field: FieldSpec, s: usize, points: Vec<Vec<u16>>) -> Result<Self> {
        let mut normalized = std::collections::HashSet::new();
        for (i, pt) in points.iter().enumerate() {
            if pt.len() != s {
                return Err(Error::DimensionMismatch(format!(
                    "point {i} has {} coordinates, expected {s}",
                    pt.len()
                )));
            }
            if pt.iter().any(|&x| x as u32 >= field.p()) {
                return Err(Error::InvalidArgument(format!(
                    "point {i} has a non-residue coordinate"
                )));
            }
            let Some(&lead) = pt.iter().find(|&&x| x != 0) else {
                return Err(Error::InvalidArgument(format!(
                    "point {i} is the zero vector"
                )));
            };
            let inv = field.inv(lead);
            let rep: Vec<u16> = pt.iter().map(|&x| field.mul(x, inv)).collect();
            if !normalized.insert(rep) {
                return Err(Error::InvalidArgument(format!(
                    "point {i} repeats an earlier projective point"
                )));
            }
        }
        Ok(Self { field, s, points })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Ambient dimension (number of variables).
    pub fn dimension(&self) -> usize {
        self.s
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<u16>] {
        &self.points
    }

    /// The `s x m` matrix whose columns are the points.
    pub fn matrix(&self) -> FMatrix {
        let mut a = FMatrix::zeros(self.field, self.s, self.points.len());
        for (j, pt) in self.points.iter().enumerate() {
            for (i, &x) in pt.iter().enumerate() {
                a.set(i, j, x);
            }
        }
        a
    }
}

/// Columns of the incidence matrix of a connected graph, in edge order.
pub fn points_from_graph(g: &Graph, field: FieldSpec) -> Result<PointSet> {
    g.require_connected()?;
    let a = g.incidence_matrix(field);
    let points = (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a.get(i, j)).collect())
        .collect();
    PointSet::new(field, g.vertex_count(), points)
}

/// Exponent vector of a monomial in `t_1 .. t_s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn eval(&self, field: FieldSpec, point: &[u16]) -> u16 {
        self.0
            .iter()
            .zip(point)
            .fold(1 % field.p() as u16, |acc, (&e, &x)| {
                field.mul(acc, field.pow(x, e))
            })
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "t{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials of degree `d` in `s` variables, `t_1^d` first (lex with
/// `t_1 > t_2 > ...`).
pub fn monomial_basis(s: usize, d: u32) -> Vec<Monomial> {
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if s == 0 {
        return out;
    }
    rec(0, d, &mut vec![0; s], &mut out);
    out
}

/// `C_X(d)`: the image of the degree-`d` forms under evaluation at `X`.
pub fn evaluation_code(x: &PointSet, d: u32) -> Result<LinearCode> {
    if d < 1 {
        return Err(Error::OutOfRange {
            name: "d",
            value: d as usize,
            lo: 1,
            hi: usize::MAX,
        });
    }
    let f = x.field;
    let basis = monomial_basis(x.s, d);
    let mut data = Vec::with_capacity(basis.len() * x.len());
    for mono in &basis {
        data.extend(x.points.iter().map(|pt| mono.eval(f, pt)));
    }
    let gen = FMatrix::from_residues(f, basis.len(), x.len(), data)?;
    Ok(LinearCode::from_generator(&gen))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaMethod {
    Auto,
    BruteForce,
    Duality,
}

/// `delta_X(d, r)`, the r-th generalized Hamming weight of `C_X(d)`.
pub fn delta_x(x: &PointSet, d: u32, r: usize, method: DeltaMethod, budget: u64) -> Result<usize> {
    let code = evaluation_code(x, d)?;
    delta_of_code(&code, r, method, budget)
}

pub(crate) fn delta_of_code(
    code: &LinearCode,
    r: usize,
    method: DeltaMethod,
    budget: u64,
) -> Result<usize> {
    let k = code.dimension();
    if r < 1 || r > k {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            lo: 1,
            hi: k,
        });
    }
    let brute_ok = gaussian_binomial(k, r, code.field().p() as u64) <= budget.into();
    match method {
        DeltaMethod::BruteForce => Ok(code.ghw(r, budget)?.delta),
        DeltaMethod::Auto if brute_ok => Ok(code.ghw(r, budget)?.delta),
        DeltaMethod::Auto | DeltaMethod::Duality => {
            let dual = code.dual();
            let dual_h = dual.hierarchy_bruteforce(dual.dimension(), budget)?;
            let full = wei_complete(code.length(), k, &WeightHierarchy::default(), &dual_h)?;
            Ok(full.deltas[r - 1])
        }
    }
}

/// `|X| - delta_X(d, r)`: the most points on which `r` independent degree-`d`
/// forms can all vanish.
pub fn hyp_x(x: &PointSet, d: u32, r: usize, method: DeltaMethod, budget: u64) -> Result<usize> {
    Ok(x.len() - delta_x(x, d, r, method, budget)?)
}

/// Basis (RREF) of the linear forms vanishing on every point of `X`.
pub fn vanishing_linear_forms(x: &PointSet) -> FMatrix {
    x.matrix().transpose().nullspace()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormDomain {
    /// coefficients in {1, -1}
    PmOne,
    /// coefficients in {0, 1, -1}, not all zero, over forms not vanishing on
    /// all of `X`
    ZeroPmOne,
}

const MAX_PM_ONE_VARS: usize = 31;
const MAX_ZERO_PM_ONE_VARS: usize = 20;

/// Least number of points of `X` where a linear form with coefficients from
/// `domain` does not vanish. The leading nonzero coefficient is fixed to `+1`.
pub fn biparticity_via_forms(x: &PointSet, domain: FormDomain) -> Result<usize> {
    let f = x.field;
    if f.is_binary() {
        return Err(Error::InvalidArgument(
            "signed forms need characteristic other than 2".into(),
        ));
    }
    let s = x.s;
    if s == 0 {
        return Err(Error::InvalidArgument("no variables".into()));
    }
    let sparse: Vec<Vec<(usize, u16)>> = x
        .points
        .iter()
        .map(|pt| {
            pt.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i, v))
                .collect()
        })
        .collect();
    let minus_one = f.neg(1);
    let nonvanishing = |coeffs: &[u16]| {
        sparse
            .iter()
            .filter(|pt| {
                pt.iter()
                    .fold(0u16, |acc, &(i, v)| f.add(acc, f.mul(coeffs[i], v)))
                    != 0
            })
            .count()
    };
    match domain {
        FormDomain::PmOne => {
            if s > MAX_PM_ONE_VARS {
                return Err(Error::BudgetExceeded {
                    what: "sign vectors",
                    count: format!("2^{}", s - 1),
                    budget: 1 << (MAX_PM_ONE_VARS - 1),
                });
            }
            Ok((0u64..1 << (s - 1))
                .into_par_iter()
                .map(|mask| {
                    let coeffs: Vec<u16> = (0..s)
                        .map(|i| {
                            if i > 0 && mask >> (i - 1) & 1 == 1 {
                                minus_one
                            } else {
                                1
                            }
                        })
                        .collect();
                    nonvanishing(&coeffs)
                })
                .min()
                .unwrap())
        }
        FormDomain::ZeroPmOne => {
            if s > MAX_ZERO_PM_ONE_VARS {
                return Err(Error::BudgetExceeded {
                    what: "{0,1,-1} vectors",
                    count: format!("3^{s}"),
                    budget: 3u64.pow(MAX_ZERO_PM_ONE_VARS as u32),
                });
            }
            Ok((1u64..3u64.pow(s as u32))
                .into_par_iter()
                .filter_map(|mut code| {
                    let mut coeffs = vec![0u16; s];
                    for c in coeffs.iter_mut() {
                        *c = match code % 3 {
                            0 => 0,
                            1 => 1,
                            _ => minus_one,
                        };
                        code /= 3;
                    }
                    // skip the negation of a vector already counted
                    let lead = *coeffs.iter().find(|&&c| c != 0)?;
                    if lead != 1 {
                        return None;
                    }
                    // forms vanishing on all of X give the zero codeword
                    Some(nonvanishing(&coeffs)).filter(|&w| w > 0)
                })
                .min()
                .unwrap())
        }
    }
}
