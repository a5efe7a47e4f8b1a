//! Elementary symmetric functions, Newton operators and generalized
//! Kronecker-delta contractions.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};

/// Largest dimension for which the permutation expansion is allowed.
pub const MAX_EXPANSION_DIM: usize = 6;

/// A real symmetric matrix. Construction symmetrizes inputs whose asymmetry
/// is below 1e−12 relative, so entries are exactly symmetric afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareSymmetricMatrix(DMatrix<f64>);

impl SquareSymmetricMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(invalid(format!("matrix must be square and non-empty, got {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(invalid("matrix has non-finite entries"));
        }
        let scale = 1.0 + m.amax();
        let n = m.nrows();
        for i in 0..n {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(invalid(format!("matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(Self(sym))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

/// σ_0..σ_n of a list of values via the one-pass recurrence
/// σ_k ← σ_k + λ·σ_{k−1}.
pub fn elementary_symmetric(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(invalid("need at least one value"));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(invalid("non-finite value"));
    }
    Ok(esf_unchecked(values))
}

pub(crate) fn esf_unchecked(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut s = vec![0.0; n + 1];
    s[0] = 1.0;
    for (i, &l) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            s[k] += l * s[k - 1];
        }
    }
    s
}

/// σ_k of a symmetric matrix through its eigenvalues.
pub fn elementary_symmetric_matrix(a: &SquareSymmetricMatrix) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(a.0.clone());
    esf_unchecked(eig.eigenvalues.as_slice())
}

/// σ_k from power-sum traces via Newton's identities:
/// kσ_k = Σ_{i=1}^k (−1)^{i−1} σ_{k−i} tr(Aⁱ).
pub fn elementary_symmetric_traces(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let mut p = Vec::with_capacity(n + 1);
    p.push(n as f64);
    let mut pow = DMatrix::identity(n, n);
    for _ in 1..=n {
        pow = &pow * a;
        p.push(pow.trace());
    }
    let mut s = vec![0.0; n + 1];
    s[0] = 1.0;
    for k in 1..=n {
        let mut acc = 0.0;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * s[k - i] * p[i];
        }
        s[k] = acc / k as f64;
    }
    s
}

/// [T_m](A) by the recursion T_0 = I, T_m = σ_m(A)·I − A·T_{m−1}.
pub fn newton_operator(a: &SquareSymmetricMatrix, m: usize) -> Result<SquareSymmetricMatrix> {
    let n = a.dim();
    if m > n {
        return Err(invalid(format!("Newton operator index {m} exceeds dimension {n}")));
    }
    let sig = elementary_symmetric_matrix(a);
    let t = newton_chain(a.matrix(), &sig, m).pop().expect("chain has m+1 entries");
    Ok(SquareSymmetricMatrix((&t + t.transpose()) * 0.5))
}

/// T_0..T_m for a given σ vector (σ must belong to `a`).
pub(crate) fn newton_chain(a: &DMatrix<f64>, sig: &[f64], m: usize) -> Vec<DMatrix<f64>> {
    let n = a.nrows();
    let mut out = Vec::with_capacity(m + 1);
    out.push(DMatrix::identity(n, n));
    for k in 1..=m {
        let next = DMatrix::identity(n, n) * sig[k] - a * &out[k - 1];
        out.push(next);
    }
    out
}

/// Mixed Newton operator of m symmetric matrices by permutation expansion
/// of the generalized Kronecker delta.
pub fn newton_operator_mixed(matrices: &[SquareSymmetricMatrix]) -> Result<SquareSymmetricMatrix> {
    let mats: Vec<DMatrix<f64>> = matrices.iter().map(|m| m.0.clone()).collect();
    let t = newton_operator_general(&mats)?;
    Ok(SquareSymmetricMatrix((&t + t.transpose()) * 0.5))
}

/// Mixed Newton operator for arbitrary (not necessarily symmetric) square
/// matrices, with the convention (A)^i_j = A[(i, j)]:
/// [T_m]_i^j = (1/m!) δ^{j j₁…j_m}_{i i₁…i_m} Π_a (A_a)^{i_a}_{j_a}.
pub fn newton_operator_general(mats: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let m = mats.len();
    let n = check_stack(mats)?;
    if m == 0 {
        return Err(invalid("need at least one matrix"));
    }
    if m > n {
        return Err(invalid(format!("{m} matrices exceed dimension {n}")));
    }
    let perms = permutations_with_sign(m + 1);
    let mut t = DMatrix::zeros(n, n);
    for_each_distinct_tuple(n, m + 1, |idx| {
        for (p, sign) in &perms {
            let mut prod = *sign;
            for a in 0..m {
                prod *= mats[a][(idx[a + 1], idx[p[a + 1]])];
                if prod == 0.0 {
                    break;
                }
            }
            t[(idx[0], idx[p[0]])] += prod;
        }
    });
    Ok(t / factorial(m))
}

/// Full contraction (1/(k−1)!) δ^{j₁…j_k}_{i₁…i_k} Π_a (M_a)^{i_a}_{j_a}
/// over k matrices. With all factors equal to A and the prefactor 1/k! this is σ_k(A).
pub fn kronecker_contraction(mats: &[DMatrix<f64>]) -> Result<f64> {
    let k = mats.len();
    let n = check_stack(mats)?;
    if k == 0 || k > n {
        return Err(invalid(format!("contraction length {k} must be in 1..={n}")));
    }
    Ok(raw_contraction(mats, n) / factorial(k - 1))
}

/// σ_k(A) from the permutation expansion (1/k!) δ Π A.
pub fn sigma_by_expansion(a: &DMatrix<f64>, k: usize) -> Result<f64> {
    let n = a.nrows();
    if k == 0 {
        return Ok(1.0);
    }
    let mats = vec![a.clone(); k];
    check_stack(&mats)?;
    if k > n {
        return Ok(0.0);
    }
    Ok(raw_contraction(&mats, n) / factorial(k))
}

fn raw_contraction(mats: &[DMatrix<f64>], n: usize) -> f64 {
    let k = mats.len();
    let perms = permutations_with_sign(k);
    let mut acc = 0.0;
    for_each_distinct_tuple(n, k, |idx| {
        for (p, sign) in &perms {
            let mut prod = *sign;
            for a in 0..k {
                prod *= mats[a][(idx[a], idx[p[a]])];
            }
            acc += prod;
        }
    });
    acc
}

fn check_stack(mats: &[DMatrix<f64>]) -> Result<usize> {
    let n = mats.first().map(|m| m.nrows()).unwrap_or(0);
    if n > MAX_EXPANSION_DIM {
        return Err(Error::UnsupportedSize(format!(
            "permutation expansion limited to n <= {MAX_EXPANSION_DIM}, got {n}"
        )));
    }
    if mats.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(invalid("all matrices must be square of equal size"));
    }
    Ok(n)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|x| x as f64).product()
}

/// All permutations of 0..len with their signs, in lexicographic order.
fn permutations_with_sign(len: usize) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(len);
    let mut used = vec![false; len];
    fn rec(len: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, f64)>) {
        if cur.len() == len {
            let mut inversions = 0;
            for i in 0..len {
                for j in i + 1..len {
                    if cur[i] > cur[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((cur.clone(), if inversions % 2 == 0 { 1.0 } else { -1.0 }));
            return;
        }
        for v in 0..len {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(len, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(len, &mut cur, &mut used, &mut out);
    out
}

/// Visit every ordered tuple of `len` distinct indices from 0..n.
fn for_each_distinct_tuple(n: usize, len: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![0usize; len];
    let mut used = vec![false; n];
    fn rec(pos: usize, n: usize, idx: &mut [usize], used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if pos == idx.len() {
            f(idx);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                idx[pos] = v;
                rec(pos + 1, n, idx, used, f);
                used[v] = false;
            }
        }
    }
    rec(0, n, &mut idx, &mut used, &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, rng: &mut ChaCha8Rng) -> SquareSymmetricMatrix {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = rng.random_range(-1.0..1.0);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SquareSymmetricMatrix::new(m).unwrap()
    }

    #[test]
    fn all_ones_gives_binomials() {
        assert_eq!(elementary_symmetric(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 3.0, 3.0, 1.0]);
        assert_eq!(elementary_symmetric(&[0.0; 4]).unwrap(), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(elementary_symmetric(&[1.0, f64::NAN]), Err(Error::InvalidInput(_))));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(SquareSymmetricMatrix::new(m).is_err());
    }

    #[test]
    fn matches_expanded_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let vals: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
        // coefficients of Π(1 + λ t) by repeated polynomial multiplication
        let mut poly = vec![1.0];
        for &l in &vals {
            let mut next = vec![0.0; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] += c;
                next[i + 1] += c * l;
            }
            poly = next;
        }
        let s = elementary_symmetric(&vals).unwrap();
        for (a, b) in s.iter().zip(&poly) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn scalar_and_diagonal_matrices() {
        let a = SquareSymmetricMatrix::new(DMatrix::identity(4, 4) * 2.0).unwrap();
        let s = elementary_symmetric_matrix(&a);
        for k in 0..=4 {
            let want = crate::numeric::binomial(4, k as i64) * 2f64.powi(k as i32);
            assert!((s[k] - want).abs() < 1e-12);
        }
        let d = [0.3, -1.2, 2.0];
        let a = SquareSymmetricMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d))).unwrap();
        let s = elementary_symmetric_matrix(&a);
        let v = elementary_symmetric(&d).unwrap();
        for k in 0..=3 {
            assert!((s[k] - v[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_route_matches_expansion_and_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_sym(5, &mut rng);
        let s = elementary_symmetric_matrix(&a);
        let t = elementary_symmetric_traces(a.matrix());
        for k in 0..=5 {
            let e = sigma_by_expansion(a.matrix(), k).unwrap();
            assert!((s[k] - e).abs() < 1e-12, "k={k}");
            assert!((s[k] - t[k]).abs() < 1e-10 * (1.0 + s[k].abs()));
        }
    }

    #[test]
    fn newton_small_cases() {
        let a = random_sym(3, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(newton_operator(&a, 0).unwrap().matrix(), &DMatrix::identity(3, 3));
        let i3 = SquareSymmetricMatrix::identity(3);
        let t1 = newton_operator(&i3, 1).unwrap();
        assert!((t1.matrix() - DMatrix::identity(3, 3) * 2.0).amax() < 1e-15);
        assert!(newton_operator(&i3, 4).is_err());
    }

    #[test]
    fn newton_recursion_matches_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_sym(5, &mut rng);
        let t3 = newton_operator(&a, 3).unwrap();
        let e3 = newton_operator_mixed(&[a.clone(), a.clone(), a.clone()]).unwrap();
        assert!((t3.matrix() - e3.matrix()).amax() < 1e-12 * (1.0 + a.matrix().norm()));
        let m1 = newton_operator_mixed(std::slice::from_ref(&a)).unwrap();
        let s1 = a.matrix().trace();
        assert!((m1.matrix() - (DMatrix::identity(5, 5) * s1 - a.matrix())).amax() < 1e-14);
    }

    #[test]
    fn expansion_size_guard() {
        let a = SquareSymmetricMatrix::identity(7);
        assert!(matches!(newton_operator_mixed(&[a]), Err(Error::UnsupportedSize(_))));
    }

    #[test]
    fn shared_left_factor_contraction_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 4;
        let v = |rng: &mut ChaCha8Rng| nalgebra::DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let w = v(&mut rng);
        let m1 = &w * v(&mut rng).transpose();
        let m2 = &w * v(&mut rng).transpose();
        let f = random_sym(n, &mut rng).into_inner();
        let c = kronecker_contraction(&[m1, m2, f]).unwrap();
        assert!(c.abs() < 1e-12);
    }
}
