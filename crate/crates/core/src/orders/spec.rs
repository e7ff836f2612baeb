use serde::{Deserialize, Serialize};

use super::OrderError;

/// `sum c_i pi^i`, lowest power first.
pub type PPoly = Vec<i64>;
/// Matrix over R with polynomial-in-pi entries, acting on column vectors.
pub type PMat = Vec<Vec<PPoly>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum OrderSpec {
    /// `(pi^{e_ij} R) inside M_n(K)`.
    Tiled {
        n: usize,
        e: Vec<Vec<i64>>,
    },
    /// `{(x, y) in R x R : x - y in pi^n R}`.
    Congruence {
        n: u32,
    },
    /// `R + R x^{2n+1}` inside `R[x]`, `x^2 = pi`.
    Cusp {
        n: u32,
    },
    Generic(Presentation),
}

impl OrderSpec {
    /// Upper triangular mod pi below the diagonal.
    pub fn triangular(n: usize) -> Self {
        let e = (0..n).map(|i| (0..n).map(|j| (i > j) as i64).collect()).collect();
        OrderSpec::Tiled { n, e }
    }

    pub fn full_matrix(n: usize) -> Self {
        OrderSpec::Tiled { n, e: vec![vec![0; n]; n] }
    }

    pub fn name(&self) -> String {
        match self {
            OrderSpec::Tiled { n, e } => format!("tiled(n={n}, e={e:?})"),
            OrderSpec::Congruence { n } => format!("congruence({n})"),
            OrderSpec::Cusp { n } => format!("cusp({n})"),
            OrderSpec::Generic(_) => "generic".into(),
        }
    }
}

/// One simple A-module S_j.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleSpec {
    pub label: String,
    /// dim_K S_j
    pub dim: usize,
    /// multiplicity of S_j in A
    pub l_a: usize,
    /// q_j = p^res_deg
    pub res_deg: u32,
    /// R-basis of the integral part of End_A(S_j), saturated in M(R).
    pub end_basis: Vec<PMat>,
}

/// An overring, given by an R-basis; matrices are `pi^den_exp` times the
/// actual elements so that they stay integral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverringSpec {
    pub name: String,
    #[serde(default)]
    pub den_exp: u32,
    pub basis: Vec<Vec<PMat>>,
    /// The unit of the overring (unscaled); identity when the overring is unital in A.
    pub one: Vec<PMat>,
    #[serde(default)]
    pub spec: Option<OrderSpec>,
}

/// Concrete data for an order: A = prod A_j acts on V = sum S_j^{l_j}
/// through per-simple matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub simples: Vec<SimpleSpec>,
    /// For each R-basis element of the order, its matrix on each simple.
    pub basis: Vec<Vec<PMat>>,
    /// A generator v0 of V_A = sum S_j^{l_j(A)}, so that a -> a v0 is A ~ V_A.
    pub regular: Vec<PPoly>,
    /// Nondegenerate symmetric trace form t, written as tau(a v0) = t(a).
    #[serde(default)]
    pub trace: Option<Vec<PPoly>>,
    #[serde(default)]
    pub overrings: Vec<OverringSpec>,
}

fn c(x: i64) -> PPoly {
    vec![x]
}

fn pi_pow(e: i64) -> PPoly {
    let mut v = vec![0; e as usize + 1];
    v[e as usize] = 1;
    v
}

fn zero_mat(n: usize) -> PMat {
    vec![vec![vec![]; n]; n]
}

fn unit_mat(n: usize) -> PMat {
    let mut m = zero_mat(n);
    for i in 0..n {
        m[i][i] = c(1);
    }
    m
}

fn elementary(n: usize, i: usize, j: usize, e: i64) -> PMat {
    let mut m = zero_mat(n);
    m[i][j] = pi_pow(e);
    m
}

/// Conjugation potential making all tiled exponents nonnegative.
fn tiled_potential(e: &[Vec<i64>]) -> Vec<i64> {
    let n = e.len();
    (0..n).map(|j| (0..n).map(|k| e[k][j]).min().unwrap()).collect()
}

fn check_tiled(n: usize, e: &[Vec<i64>]) -> Result<(), OrderError> {
    if n == 0 || e.len() != n || e.iter().any(|r| r.len() != n) {
        return Err(OrderError::InvalidSpec(format!("tiled exponent matrix must be {n} x {n}")));
    }
    for i in 0..n {
        if e[i][i] != 0 {
            return Err(OrderError::InvalidSpec(format!("e[{i}][{i}] must be 0")));
        }
        for j in 0..n {
            for k in 0..n {
                if e[i][j] + e[j][k] < e[i][k] {
                    return Err(OrderError::InvalidSpec(format!(
                        "ring closure fails: e[{i}][{j}] + e[{j}][{k}] < e[{i}][{k}]"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn tiled_basis(e: &[Vec<i64>], d: &[i64], den: i64) -> Vec<Vec<PMat>> {
    let n = e.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            out.push(vec![elementary(n, i, j, e[i][j] + d[i] - d[j] + den)]);
        }
    }
    out
}

fn tiled_overring(name: &str, e: &[Vec<i64>], d: &[i64], spec: Option<OrderSpec>) -> OverringSpec {
    let n = e.len();
    let low = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| e[i][j] + d[i] - d[j]).min().unwrap();
    let den = (-low).max(0);
    OverringSpec { name: name.into(), den_exp: den as u32, basis: tiled_basis(e, d, den), one: vec![unit_mat(n)], spec }
}

fn congruence_overring(k: u32) -> OverringSpec {
    OverringSpec {
        name: format!("Λ_{k}"),
        den_exp: 0,
        basis: vec![vec![vec![vec![c(1)]], vec![vec![c(1)]]], vec![vec![vec![pi_pow(k as i64)]], vec![vec![vec![]]]]],
        one: vec![vec![vec![c(1)]], vec![vec![c(1)]]],
        spec: Some(OrderSpec::Congruence { n: k }),
    }
}

fn cusp_x() -> PMat {
    // multiplication by x on the basis {1, x}, x^2 = pi
    vec![vec![vec![], pi_pow(1)], vec![c(1), vec![]]]
}

fn scale_mat(m: &PMat, e: i64) -> PMat {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|p| {
                    if p.iter().all(|&x| x == 0) {
                        vec![]
                    } else {
                        let mut v = vec![0; e as usize];
                        v.extend_from_slice(p);
                        v
                    }
                })
                .collect()
        })
        .collect()
}

fn cusp_overring(k: u32) -> OverringSpec {
    OverringSpec {
        name: format!("Λ_{k}"),
        den_exp: 0,
        basis: vec![vec![unit_mat(2)], vec![scale_mat(&cusp_x(), k as i64)]],
        one: vec![unit_mat(2)],
        spec: Some(OrderSpec::Cusp { n: k }),
    }
}

impl OrderSpec {
    pub fn presentation(&self) -> Result<Presentation, OrderError> {
        match self {
            OrderSpec::Tiled { n, e } => {
                let n = *n;
                check_tiled(n, e)?;
                let d = tiled_potential(e);
                let mut regular = vec![vec![]; n * n];
                for col in 0..n {
                    regular[col * n + col] = c(1);
                }
                let zero = vec![vec![0i64; n]; n];
                let maximal = tiled_overring("M_n(R)", &zero, &d, Some(OrderSpec::full_matrix(n)));
                Ok(Presentation {
                    simples: vec![SimpleSpec {
                        label: "K^n".into(),
                        dim: n,
                        l_a: n,
                        res_deg: 1,
                        end_basis: vec![unit_mat(n)],
                    }],
                    basis: tiled_basis(e, &d, 0),
                    regular,
                    trace: Some(regular_trace(n)),
                    overrings: vec![maximal],
                })
            }
            OrderSpec::Congruence { n } => {
                let s = |label: &str| SimpleSpec {
                    label: label.into(),
                    dim: 1,
                    l_a: 1,
                    res_deg: 1,
                    end_basis: vec![unit_mat(1)],
                };
                let mut overrings: Vec<OverringSpec> = (0..*n).map(congruence_overring).collect();
                overrings.push(OverringSpec {
                    name: "R×0".into(),
                    den_exp: 0,
                    basis: vec![vec![unit_mat(1), zero_mat(1)]],
                    one: vec![unit_mat(1), zero_mat(1)],
                    spec: None,
                });
                overrings.push(OverringSpec {
                    name: "0×R".into(),
                    den_exp: 0,
                    basis: vec![vec![zero_mat(1), unit_mat(1)]],
                    one: vec![zero_mat(1), unit_mat(1)],
                    spec: None,
                });
                Ok(Presentation {
                    simples: vec![s("K×0"), s("0×K")],
                    basis: congruence_overring(*n).basis,
                    regular: vec![c(1), c(1)],
                    trace: Some(vec![c(1), c(1)]),
                    overrings,
                })
            }
            OrderSpec::Cusp { n } => Ok(Presentation {
                simples: vec![SimpleSpec {
                    label: "K(x)".into(),
                    dim: 2,
                    l_a: 1,
                    res_deg: 1,
                    end_basis: vec![unit_mat(2), cusp_x()],
                }],
                basis: cusp_overring(*n).basis,
                regular: vec![c(1), vec![]],
                // t(a0 + a1 x) = a1
                trace: Some(vec![vec![], c(1)]),
                overrings: (0..*n).map(cusp_overring).collect(),
            }),
            OrderSpec::Generic(p) => {
                validate_generic(p)?;
                Ok(p.clone())
            }
        }
    }

    /// The overring given by another spec of the same family, if it contains this order.
    pub fn overring_from(&self, over: &OrderSpec) -> Result<OverringSpec, OrderError> {
        let not = || OrderError::NotAnOverring(format!("{} is not an overring of {}", over.name(), self.name()));
        match (self, over) {
            (OrderSpec::Congruence { n }, OrderSpec::Congruence { n: k }) if k <= n => Ok(congruence_overring(*k)),
            (OrderSpec::Cusp { n }, OrderSpec::Cusp { n: k }) if k <= n => Ok(cusp_overring(*k)),
            (OrderSpec::Tiled { n, e }, OrderSpec::Tiled { n: n2, e: e2 }) if n == n2 => {
                check_tiled(*n2, e2)?;
                let contained = e.iter().zip(e2).all(|(r, r2)| r.iter().zip(r2).all(|(a, b)| b <= a));
                if !contained {
                    return Err(not());
                }
                Ok(tiled_overring(&over.name(), e2, &tiled_potential(e), Some(over.clone())))
            }
            _ if self == over => {
                let p = self.presentation()?;
                let one = p.simples.iter().map(|s| unit_mat(s.dim)).collect();
                Ok(OverringSpec { name: self.name(), den_exp: 0, basis: p.basis, one, spec: Some(self.clone()) })
            }
            _ => Err(not()),
        }
    }
}

fn regular_trace(n: usize) -> Vec<PPoly> {
    // a -> (a e_1, ..., a e_n); the trace picks the diagonal entries
    let mut t = vec![vec![]; n * n];
    for col in 0..n {
        t[col * n + col] = c(1);
    }
    t
}

fn validate_generic(p: &Presentation) -> Result<(), OrderError> {
    if p.simples.is_empty() || p.basis.is_empty() {
        return Err(OrderError::InvalidSpec("generic order needs simples and a basis".into()));
    }
    let total: usize = p.simples.iter().map(|s| s.dim * s.l_a).sum();
    if p.regular.len() != total {
        return Err(OrderError::InvalidSpec(format!("regular generator must have length {total}")));
    }
    if let Some(t) = &p.trace {
        if t.len() != total {
            return Err(OrderError::InvalidSpec(format!("trace functional must have length {total}")));
        }
    }
    for (bi, b) in p.basis.iter().enumerate() {
        if b.len() != p.simples.len() {
            return Err(OrderError::InvalidSpec(format!("basis element {bi} needs one matrix per simple")));
        }
        for (s, m) in p.simples.iter().zip(b) {
            if m.len() != s.dim || m.iter().any(|r| r.len() != s.dim) {
                return Err(OrderError::InvalidSpec(format!("basis element {bi}: matrix size mismatch")));
            }
        }
    }
    for s in &p.simples {
        if s.end_basis.is_empty() || s.l_a == 0 || s.res_deg == 0 {
            return Err(OrderError::InvalidSpec(format!("simple {} has incomplete data", s.label)));
        }
    }
    Ok(())
}

/// Multiplicities (l_j(V))_j of an A-module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AModule(pub Vec<usize>);

impl AModule {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &AModule) -> AModule {
        AModule(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &AModule) -> Option<AModule> {
        let v: Option<Vec<usize>> = self.0.iter().zip(&o.0).map(|(a, b)| a.checked_sub(*b)).collect();
        v.map(AModule)
    }

    pub fn le(&self, o: &AModule) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// V_j: the j-th multiplicity set to zero.
    pub fn without(&self, j: usize) -> AModule {
        let mut v = self.0.clone();
        v[j] = 0;
        AModule(v)
    }

    pub fn simple_power(r: usize, j: usize, k: usize) -> AModule {
        let mut v = vec![0; r];
        v[j] = k;
        AModule(v)
    }

    /// All nonzero submodule multiplicity vectors, componentwise below self.
    pub fn sub_modules(&self) -> Vec<AModule> {
        let mut out = vec![vec![]];
        for &l in &self.0 {
            let mut next = Vec::new();
            for v in &out {
                for k in 0..=l {
                    let mut w: Vec<usize> = v.clone();
                    w.push(k);
                    next.push(w);
                }
            }
            out = next;
        }
        out.into_iter().map(AModule).filter(|v| !v.is_zero()).collect()
    }
}
