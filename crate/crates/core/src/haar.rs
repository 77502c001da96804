//! Haar wavelet basis on `[0, 1]`.
//!
//! Basis functions are indexed from 1 the usual way: `h_1` is the scaling
//! function and `h_l` for `l = 2^j + k + 1` (with `0 <= k < 2^j`) is the square
//! wave supported on `[k/2^j, (k+1)/2^j)`. A resolution level `J` keeps the
//! first `2M = 2^(J+1)` functions.

use crate::error::Error;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Largest resolution level accepted anywhere in the crate.
pub const MAX_LEVEL: u32 = 20;

/// Resolution level `J` together with the derived sizes `M = 2^J` and `2M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResolutionParams {
    level: u32,
}

impl ResolutionParams {
    pub fn new(level: u32) -> Result<Self, Error> {
        if level > MAX_LEVEL {
            return Err(Error::InvalidArgument(format!(
                "resolution level {level} exceeds the supported maximum {MAX_LEVEL}"
            )));
        }
        Ok(Self { level })
    }

    /// Maximal resolution level `J`.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// `M = 2^J`.
    pub fn m(&self) -> usize {
        1usize << self.level
    }

    /// Number of basis functions, `2M`.
    pub fn basis_size(&self) -> usize {
        2 * self.m()
    }

    /// Grid step `1 / (2M)`.
    pub fn step<T: Scalar>(&self) -> T {
        T::one() / T::from_count(self.basis_size())
    }
}

/// Scale/translation decomposition of a serial index `l >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveletIndex {
    pub l: usize,
    pub j: u32,
    pub k: usize,
}

impl WaveletIndex {
    /// `m = 2^j`.
    pub fn m(&self) -> usize {
        1usize << self.j
    }

    /// Serial index recomputed from `(j, k)`.
    pub fn recompose(&self) -> usize {
        self.m() + self.k + 1
    }
}

/// Left end, midpoint and right end of a wavelet's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoints<T> {
    pub v1: T,
    pub v2: T,
    pub v3: T,
}

/// Splits `l = 2^j + k + 1` into its scale `j` and translation `k`.
pub fn decompose_index(l: usize) -> Result<WaveletIndex, Error> {
    if l < 2 {
        return Err(Error::InvalidArgument(format!(
            "wavelet index must be at least 2, got {l}"
        )));
    }
    let j = usize::BITS - 1 - (l - 1).leading_zeros();
    let k = l - 1 - (1usize << j);
    Ok(WaveletIndex { l, j, k })
}

/// Support breakpoints `k/m`, `(2k+1)/(2m)`, `(k+1)/m`.
pub fn breakpoints<T: Scalar>(idx: WaveletIndex) -> Breakpoints<T> {
    let two_m = T::from_count(2 * idx.m());
    let k = T::from_count(idx.k);
    let two = T::lit(2.0);
    Breakpoints {
        v1: two * k / two_m,
        v2: (two * k + T::one()) / two_m,
        v3: (two * k + two) / two_m,
    }
}

/// Breakpoints of any basis function; the scaling function maps to `(0, 1, 1)`.
pub(crate) fn support<T: Scalar>(l: usize) -> Breakpoints<T> {
    match l {
        0 => panic!("Haar indices are 1-based"),
        1 => Breakpoints {
            v1: T::zero(),
            v2: T::one(),
            v3: T::one(),
        },
        _ => breakpoints(decompose_index(l).expect("l >= 2")),
    }
}

/// Value of `h_l(x)`; zero outside `[0, 1)` and for `l = 0`.
pub fn haar_eval<T: Scalar>(l: usize, x: T) -> T {
    if l == 0 || x < T::zero() || x >= T::one() {
        return T::zero();
    }
    if l == 1 {
        return T::one();
    }
    let b: Breakpoints<T> = support(l);
    if x >= b.v1 && x < b.v2 {
        T::one()
    } else if x >= b.v2 && x < b.v3 {
        -T::one()
    } else {
        T::zero()
    }
}

/// Midpoint collocation grid `(c - 1/2) / (2M)`, `c = 1..=2M`.
pub fn collocation_points<T: Scalar>(params: ResolutionParams) -> Vec<T> {
    let n = params.basis_size();
    let denom = T::from_count(2 * n);
    (0..n).map(|c| T::from_count(2 * c + 1) / denom).collect()
}

/// Haar matrix with `H[l-1][c-1] = h_l(eta_c)`.
pub fn haar_matrix<T: Scalar>(params: ResolutionParams) -> Matrix<T> {
    let pts = collocation_points::<T>(params);
    let n = params.basis_size();
    Matrix::from_fn(n, n, |row, col| haar_eval(row + 1, pts[col]))
}

/// Piecewise-constant description of `h_l` as `(start, end, value)` runs.
fn pieces<T: Scalar>(l: usize) -> Vec<(T, T, T)> {
    if l == 1 {
        return vec![(T::zero(), T::one(), T::one())];
    }
    let b: Breakpoints<T> = support(l);
    vec![(b.v1, b.v2, T::one()), (b.v2, b.v3, -T::one())]
}

/// Exact `∫_0^1 h_l h_r dx` from the overlap of the constant pieces.
///
/// All breakpoints are dyadic, so the overlap lengths are exact in binary
/// floating point for any level this crate accepts.
pub fn pairwise_inner_product<T: Scalar>(l: usize, r: usize) -> Result<T, Error> {
    if l == 0 || r == 0 {
        return Err(Error::InvalidArgument(
            "Haar indices are 1-based".to_string(),
        ));
    }
    let mut acc = T::zero();
    for &(a0, a1, av) in &pieces::<T>(l) {
        for &(b0, b1, bv) in &pieces::<T>(r) {
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                acc = acc + (hi - lo) * av * bv;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_examples() {
        let i = decompose_index(2).unwrap();
        assert_eq!((i.j, i.k), (0, 0));
        let i = decompose_index(5).unwrap();
        assert_eq!((i.j, i.k), (2, 0));
        let i = decompose_index(8).unwrap();
        assert_eq!((i.j, i.k), (2, 3));
        assert!(decompose_index(1).is_err());
        assert!(decompose_index(0).is_err());
    }

    #[test]
    fn index_round_trip() {
        for l in 2..=4096 {
            let idx = decompose_index(l).unwrap();
            assert!(idx.k < idx.m());
            assert_eq!(idx.recompose(), l);
        }
    }

    #[test]
    fn breakpoint_examples() {
        let b: Breakpoints<f64> = breakpoints(WaveletIndex { l: 2, j: 0, k: 0 });
        assert_eq!((b.v1, b.v2, b.v3), (0.0, 0.5, 1.0));
        let b: Breakpoints<f64> = breakpoints(WaveletIndex { l: 4, j: 1, k: 1 });
        assert_eq!((b.v1, b.v2, b.v3), (0.5, 0.75, 1.0));
        let b: Breakpoints<f64> = breakpoints(WaveletIndex { l: 6, j: 2, k: 1 });
        assert_eq!((b.v1, b.v2, b.v3), (0.25, 0.375, 0.5));
    }

    #[test]
    fn halves_have_equal_length() {
        for l in 2..=256 {
            let idx = decompose_index(l).unwrap();
            let b: Breakpoints<f64> = breakpoints(idx);
            let half = 1.0 / (2.0 * idx.m() as f64);
            assert_eq!(b.v2 - b.v1, half);
            assert_eq!(b.v3 - b.v2, half);
            assert!(0.0 <= b.v1 && b.v3 <= 1.0);
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(haar_eval(1, 0.99), 1.0);
        assert_eq!(haar_eval(2, 0.25), 1.0);
        assert_eq!(haar_eval(2, 0.75), -1.0);
        assert_eq!(haar_eval(3, 0.1), 1.0);
        assert_eq!(haar_eval(4, 0.1), 0.0);
        // half-open intervals and the right end
        assert_eq!(haar_eval(2, 0.5), -1.0);
        assert_eq!(haar_eval(1, 1.0), 0.0);
        assert_eq!(haar_eval(2, 1.0), 0.0);
        assert_eq!(haar_eval(1, -0.1), 0.0);
    }

    #[test]
    fn collocation_examples() {
        let p = collocation_points::<f64>(ResolutionParams::new(0).unwrap());
        assert_eq!(p, vec![0.25, 0.75]);
        let p = collocation_points::<f64>(ResolutionParams::new(1).unwrap());
        assert_eq!(p, vec![0.125, 0.375, 0.625, 0.875]);
        for level in 0..8 {
            let params = ResolutionParams::new(level).unwrap();
            let p = collocation_points::<f64>(params);
            assert_eq!(p.len(), params.basis_size());
            assert!(p.iter().all(|&x| 0.0 < x && x < 1.0));
            assert!(p.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn collocation_points_avoid_breakpoints() {
        for level in 0..6 {
            let params = ResolutionParams::new(level).unwrap();
            let step: f64 = params.step();
            for (c, &x) in collocation_points::<f64>(params).iter().enumerate() {
                // strictly inside cell c of the finest grid
                let lo = c as f64 * step;
                assert!(lo < x && x < lo + step);
                for l in 2..=params.basis_size() {
                    let b: Breakpoints<f64> = support(l);
                    assert!(x != b.v1 && x != b.v2 && x != b.v3);
                }
            }
        }
    }

    #[test]
    fn haar_matrix_examples() {
        let h = haar_matrix::<f64>(ResolutionParams::new(0).unwrap());
        assert_eq!(h.row(0), &[1.0, 1.0]);
        assert_eq!(h.row(1), &[1.0, -1.0]);
        let h = haar_matrix::<f64>(ResolutionParams::new(1).unwrap());
        assert_eq!(h.row(2), &[1.0, -1.0, 0.0, 0.0]);
        assert!(h.row(0).iter().all(|&v| v == 1.0));
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(pairwise_inner_product::<f64>(1, 1).unwrap(), 1.0);
        assert_eq!(pairwise_inner_product::<f64>(5, 5).unwrap(), 0.25);
        assert_eq!(pairwise_inner_product::<f64>(2, 3).unwrap(), 0.0);
        for l in 2..64 {
            assert_eq!(pairwise_inner_product::<f64>(1, l).unwrap(), 0.0);
        }
        assert!(pairwise_inner_product::<f64>(0, 1).is_err());
    }

    #[test]
    fn level_guard() {
        assert!(ResolutionParams::new(MAX_LEVEL + 1).is_err());
        let p = ResolutionParams::new(3).unwrap();
        assert_eq!((p.m(), p.basis_size()), (8, 16));
        assert_eq!(p.step::<f64>() * 16.0, 1.0);
    }
}
