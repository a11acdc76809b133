use num_bigint::BigUint;
use num_bigint::ToBigUint;

/// Number of `r`-dimensional subspaces of `F_q^k`.
pub fn gaussian_binomial(k: usize, r: usize, q: u64) -> BigUint {
    assert!(q >= 2, "q must be at least 2");
    if r > k {
        return BigUint::from(0u32);
    }
    let q = q.to_biguint().unwrap();
    let one = BigUint::from(1u32);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 0..r {
        num *= q.pow((k - i) as u32) - &one;
        den *= q.pow((r - i) as u32) - &one;
    }
    num / den
}
