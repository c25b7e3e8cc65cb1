//! Elementary symmetric functions of principal curvatures and the eigenvalues
//! of the Newton tensors, all evaluated in the principal frame.
//!
//! The Newton tensor `T_k` used throughout is the generalized Kronecker-delta
//! tensor: in the principal frame it is diagonal with entries
//! `t_k(i) = σ_k(κ_1, …, κ̂_i, …, κ_n)`, the k-th elementary symmetric
//! polynomial of the tuple with `κ_i` removed. With this normalization
//! `Σ_i κ_i t_{k-1}(i) = k σ_k` and `T_{n-1} ∘ A = σ_n Id`.

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Inline storage for per-point curvature data; surfaces here have n ≤ 2.
pub type Small = SmallVec<[f64; 4]>;

/// Principal curvatures `κ_1, …, κ_n` at one point of a hypersurface.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTuple(Small);

impl CurvatureTuple {
    /// Builds a tuple; every entry must be finite and the tuple nonempty.
    pub fn new(kappa: &[f64]) -> Result<Self> {
        if kappa.is_empty() {
            return Err(Error::Domain("curvature tuple must be nonempty".into()));
        }
        if let Some(i) = kappa.iter().position(|k| !k.is_finite()) {
            return Err(Error::Domain(format!(
                "curvature entry {i} is not finite ({})",
                kappa[i]
            )));
        }
        Ok(CurvatureTuple(kappa.iter().copied().collect()))
    }

    /// The umbilic tuple `(c, …, c)` of length `n`.
    pub fn umbilic(c: f64, n: usize) -> Self {
        CurvatureTuple(std::iter::repeat_n(c, n).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Binomial coefficient `C(n, k)` as a float (zero when `k > n`).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// All elementary symmetric polynomials `σ_0, …, σ_kmax` of `values`.
fn sigma_all(values: &[f64], kmax: usize) -> Small {
    let mut e: Small = SmallVec::from_elem(0.0, kmax + 1);
    e[0] = 1.0;
    for &v in values {
        for j in (1..=kmax).rev() {
            e[j] += v * e[j - 1];
        }
    }
    e
}

fn check_k(kappa: &CurvatureTuple, k: usize, max: usize) -> Result<()> {
    if k > max {
        Err(Error::Domain(format!(
            "index k = {k} out of range 0..={max} for a tuple of length {}",
            kappa.dim()
        )))
    } else {
        Ok(())
    }
}

/// `σ_k(κ)`, with `σ_0 = 1`.
pub fn elem_sym(kappa: &CurvatureTuple, k: usize) -> Result<f64> {
    check_k(kappa, k, kappa.dim())?;
    Ok(sigma_all(&kappa.0, k)[k])
}

/// The normalized k-th mean curvature `H_k = σ_k / C(n, k)`.
pub fn normalized_mean_curv(kappa: &CurvatureTuple, k: usize) -> Result<f64> {
    let n = kappa.dim();
    Ok(elem_sym(kappa, k)? / binomial(n, k))
}

/// All normalized mean curvatures `H_0, …, H_n` at once.
pub fn mean_curvatures(kappa: &CurvatureTuple) -> Small {
    let n = kappa.dim();
    let mut s = sigma_all(&kappa.0, n);
    for (k, v) in s.iter_mut().enumerate() {
        *v /= binomial(n, k);
    }
    s
}

/// `t_k(i) = σ_k(κ | i)`, summed directly over the tuple without `κ_i`.
fn newton_eigen_unchecked(kappa: &[f64], k: usize) -> Small {
    (0..kappa.len())
        .map(|i| {
            let mut e: Small = SmallVec::from_elem(0.0, k + 1);
            e[0] = 1.0;
            for (_, &v) in kappa.iter().enumerate().filter(|(j, _)| *j != i) {
                for j in (1..=k).rev() {
                    e[j] += v * e[j - 1];
                }
            }
            e[k]
        })
        .collect()
}

/// Eigenvalues `t_k(1), …, t_k(n)` of the Newton tensor `T_k`.
pub fn newton_eigen(kappa: &CurvatureTuple, k: usize) -> Result<Vec<f64>> {
    check_k(kappa, k, kappa.dim().saturating_sub(1))?;
    Ok(newton_eigen_unchecked(&kappa.0, k).into_vec())
}

/// `T_{k-1} ∘ A (v, v) = Σ_i κ_i t_{k-1}(i) v_i²` for a tangent vector given
/// by its principal-frame components.
pub fn newton_shape_quadratic(kappa: &CurvatureTuple, k: usize, comps: &[f64]) -> Result<f64> {
    let n = kappa.dim();
    if k == 0 || k > n {
        return Err(Error::Domain(format!("index k = {k} out of range 1..={n}")));
    }
    if comps.len() != n {
        return Err(Error::Domain(format!(
            "expected {n} tangential components, got {}",
            comps.len()
        )));
    }
    Ok(newton_quadratic_unchecked(&kappa.0, k, comps))
}

pub(crate) fn newton_quadratic_unchecked(kappa: &[f64], k: usize, comps: &[f64]) -> f64 {
    let t = newton_eigen_unchecked(kappa, k - 1);
    kappa
        .iter()
        .zip(t.iter())
        .zip(comps)
        .map(|((ki, ti), p)| ki * ti * p * p)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tuple(k: &[f64]) -> CurvatureTuple {
        CurvatureTuple::new(k).unwrap()
    }

    /// Brute-force σ_k by subset enumeration.
    fn sigma_brute(values: &[f64], k: usize) -> f64 {
        let n = values.len();
        (0u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| {
                (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| values[i])
                    .product::<f64>()
            })
            .sum()
    }

    #[test]
    fn elem_sym_examples() {
        assert_eq!(elem_sym(&tuple(&[1.0, 2.0, 3.0]), 2).unwrap(), 11.0);
        assert_eq!(elem_sym(&tuple(&[5.0, -2.0]), 0).unwrap(), 1.0);
        assert_eq!(elem_sym(&tuple(&[2.0, 2.0]), 2).unwrap(), 4.0);
        assert!(matches!(
            elem_sym(&tuple(&[1.0, 2.0]), 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mean_curvature_examples() {
        assert_eq!(normalized_mean_curv(&tuple(&[1.0, 2.0]), 1).unwrap(), 1.5);
        let r = 3.0;
        let h2 = normalized_mean_curv(&CurvatureTuple::umbilic(1.0 / r, 2), 2).unwrap();
        assert!((h2 - 1.0 / (r * r)).abs() < 1e-15);
        assert_eq!(normalized_mean_curv(&tuple(&[2.0]), 1).unwrap(), 2.0);
        assert!(normalized_mean_curv(&tuple(&[2.0]), 2).is_err());
        let all = mean_curvatures(&tuple(&[1.0, 3.0]));
        assert_eq!(all.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn newton_eigen_examples() {
        let k = tuple(&[1.0, 2.0, 3.0]);
        assert_eq!(newton_eigen(&k, 1).unwrap(), vec![5.0, 4.0, 3.0]);
        assert_eq!(newton_eigen(&k, 2).unwrap(), vec![6.0, 3.0, 2.0]);
        assert_eq!(newton_eigen(&tuple(&[0.7, 0.7]), 1).unwrap(), vec![0.7, 0.7]);
        assert!(newton_eigen(&k, 3).is_err());
    }

    #[test]
    fn newton_quadratic_examples() {
        let v = newton_shape_quadratic(&tuple(&[1.5]), 1, &[2.0]).unwrap();
        assert_eq!(v, 1.5 * 4.0);
        let r = 2.0;
        let (p, q) = (0.3, -1.1);
        let v = newton_shape_quadratic(&CurvatureTuple::umbilic(1.0 / r, 2), 2, &[p, q]).unwrap();
        assert!((v - (p * p + q * q) / (r * r)).abs() < 1e-15);
        let v = newton_shape_quadratic(&tuple(&[0.4, 2.5]), 1, &[1.0, 0.0]).unwrap();
        assert_eq!(v, 0.4);
        assert!(newton_shape_quadratic(&tuple(&[0.4, 2.5]), 1, &[1.0]).is_err());
        assert!(newton_shape_quadratic(&tuple(&[0.4, 2.5]), 0, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(CurvatureTuple::new(&[1.0, f64::NAN]).is_err());
        assert!(CurvatureTuple::new(&[]).is_err());
    }

    proptest! {
        #[test]
        fn trace_and_euler_identities(kappa in prop::collection::vec(-3.0f64..3.0, 1..=6)) {
            let t = tuple(&kappa);
            let n = kappa.len();
            let scale = 1.0 + kappa.iter().map(|k| k.abs()).fold(0.0, f64::max).powi(n as i32) * 64.0;
            for k in 0..n {
                let eig = newton_eigen(&t, k).unwrap();
                let trace: f64 = eig.iter().sum();
                let expect = (n - k) as f64 * sigma_brute(&kappa, k);
                prop_assert!((trace - expect).abs() < 1e-12 * scale);
            }
            for k in 1..=n {
                let eig = newton_eigen(&t, k - 1).unwrap();
                let euler: f64 = kappa.iter().zip(&eig).map(|(a, b)| a * b).sum();
                prop_assert!((euler - k as f64 * sigma_brute(&kappa, k)).abs() < 1e-12 * scale);
            }
        }

        #[test]
        fn top_newton_tensor_is_gauss_kronecker(kappa in prop::collection::vec(-3.0f64..3.0, 1..=6)) {
            let t = tuple(&kappa);
            let n = kappa.len();
            let eig = newton_eigen(&t, n - 1).unwrap();
            let sn = elem_sym(&t, n).unwrap();
            let scale = 1.0 + 3f64.powi(n as i32);
            for (k, e) in kappa.iter().zip(&eig) {
                prop_assert!((k * e - sn).abs() < 1e-12 * scale);
            }
        }
    }
}
