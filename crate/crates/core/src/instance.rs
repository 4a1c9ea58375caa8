// SPDX-License-Identifier: Apache-2.0

//! Problem instances, extended And-Or path references and weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of the two dual And-Or paths an instance asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// `t0 ∧ (t1 ∨ (t2 ∧ …))`
    #[serde(rename = "g")]
    Primal,
    /// `t0 ∨ (t1 ∧ (t2 ∨ …))`
    #[serde(rename = "g_star")]
    Dual,
}

impl Variant {
    pub fn is_dual(self) -> bool {
        self == Variant::Dual
    }
}

/// A validated And-Or path instance: `m` inputs with finite arrival times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AopInstance {
    arrivals: Vec<f64>,
    variant: Variant,
}

impl AopInstance {
    pub fn new(arrivals: Vec<f64>, variant: Variant) -> Result<Self> {
        if arrivals.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if let Some((index, &value)) = arrivals.iter().enumerate().find(|(_, a)| !a.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { arrivals, variant })
    }

    pub fn primal(arrivals: Vec<f64>) -> Result<Self> {
        Self::new(arrivals, Variant::Primal)
    }

    pub fn m(&self) -> usize {
        self.arrivals.len()
    }

    pub fn arrivals(&self) -> &[f64] {
        &self.arrivals
    }

    pub fn arrival(&self, input: usize) -> f64 {
        self.arrivals[input]
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `true` iff every arrival time is an integer.
    pub fn is_integral(&self) -> bool {
        self.arrivals.iter().all(|a| a.fract() == 0.0)
    }

    /// `log2 W` with `W = Σ 2^a(t_i)`.
    pub fn weight_log2(&self) -> f64 {
        log2_sum_exp2(self.arrivals.iter().copied())
    }

    /// The reference for the whole path, `φ_{0,0,m-1}` (or its dual).
    pub fn root_ref(&self) -> ExtAopRef {
        ExtAopRef {
            i: 0,
            j: 0,
            k: self.m() - 1,
            dual: self.variant.is_dual(),
        }
    }
}

/// Checks raw instance data as read from a file or the command line.
pub fn validate_instance(m: usize, arrivals: Vec<f64>, variant: Variant) -> Result<AopInstance> {
    if m == 0 {
        return Err(Error::EmptyInstance);
    }
    if arrivals.len() != m {
        return Err(Error::LengthMismatch {
            declared: m,
            actual: arrivals.len(),
        });
    }
    AopInstance::new(arrivals, variant)
}

/// Names the extended And-Or path
/// `φ_{i,j,k} = t_i ∧ t_{i+2} ∧ … ∧ t_{j-2} ∧ g(t_j, …, t_k)`, or its dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAopRef {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub dual: bool,
}

impl ExtAopRef {
    pub fn new(i: usize, j: usize, k: usize, dual: bool) -> Result<Self> {
        let r = Self { i, j, k, dual };
        if i <= j && j <= k && (j - i) % 2 == 0 {
            Ok(r)
        } else {
            Err(Error::InvalidRef { i, j, k, m: k + 1 })
        }
    }

    pub fn primal(i: usize, j: usize, k: usize) -> Self {
        debug_assert!(i <= j && j <= k && (j - i) % 2 == 0);
        Self { i, j, k, dual: false }
    }

    pub fn check(&self, m: usize) -> Result<()> {
        let Self { i, j, k, .. } = *self;
        if i <= j && j <= k && k < m && (j - i) % 2 == 0 {
            Ok(())
        } else {
            Err(Error::InvalidRef { i, j, k, m })
        }
    }

    /// Number of inputs the function depends on.
    pub fn input_count(&self) -> usize {
        (self.j - self.i) / 2 + (self.k - self.j + 1)
    }

    /// Input indices in formula order: prefix `t_i, t_{i+2}, …, t_{j-2}` then `t_j..=t_k`.
    pub fn inputs(&self) -> impl Iterator<Item = usize> + '_ {
        (self.i..self.j).step_by(2).chain(self.j..=self.k)
    }

    pub fn with_dual(self, dual: bool) -> Self {
        Self { dual, ..self }
    }

    /// `k ≤ j + 1`: the function is a plain multi-input AND (OR for duals).
    pub fn is_conjunction(&self) -> bool {
        self.k <= self.j + 1
    }
}

impl std::fmt::Display for ExtAopRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let star = if self.dual { "*" } else { "" };
        write!(f, "phi{star}({},{},{})", self.i, self.j, self.k)
    }
}

/// `log2(2^a + 2^b)` without overflow.
pub fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// `log2(Σ 2^x)`; `-inf` for an empty iterator.
pub fn log2_sum_exp2(values: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let sum: f64 = values.into_iter().map(|x| (x - max).exp2()).sum();
    max + sum.log2()
}

/// `log2(Σ 2^{a_i})` for a non-empty sequence of finite arrival times.
pub fn weight_log2(arrivals: &[f64]) -> Result<f64> {
    if arrivals.is_empty() {
        return Err(Error::EmptySignals);
    }
    if let Some((index, &value)) = arrivals.iter().enumerate().find(|(_, a)| !a.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(log2_sum_exp2(arrivals.iter().copied()))
}

/// Largest spread `max - min` handled by [`exact_ceil_log2_weight`].
pub const EXACT_SPREAD_LIMIT: f64 = 52.0;

/// `⌈log2 Σ 2^{a_i}⌉` in exact integer arithmetic.
///
/// Returns `None` unless all arrivals are integral with spread at most
/// [`EXACT_SPREAD_LIMIT`].
pub fn exact_ceil_log2_weight(arrivals: &[f64]) -> Option<i64> {
    if arrivals.is_empty() || arrivals.iter().any(|a| !a.is_finite() || a.fract() != 0.0) {
        return None;
    }
    let min = arrivals.iter().copied().fold(f64::INFINITY, f64::min);
    let max = arrivals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max - min > EXACT_SPREAD_LIMIT {
        return None;
    }
    let sum: u128 = arrivals.iter().map(|&a| 1u128 << ((a - min) as u32)).sum();
    Some(min as i64 + ceil_log2_u128(sum) as i64)
}

fn ceil_log2_u128(x: u128) -> u32 {
    debug_assert!(x > 0);
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_instances() {
        let inst = validate_instance(3, vec![0.0, 20.0, 0.0], Variant::Primal).unwrap();
        assert_eq!(inst.m(), 3);
        assert!(inst.is_integral());
        assert!(matches!(
            validate_instance(0, vec![], Variant::Primal),
            Err(Error::EmptyInstance)
        ));
        assert!(matches!(
            validate_instance(2, vec![0.0, f64::NAN], Variant::Primal),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(matches!(
            validate_instance(2, vec![0.0], Variant::Primal),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(!AopInstance::primal(vec![0.5]).unwrap().is_integral());
    }

    #[test]
    fn weights() {
        assert!((weight_log2(&[2.0, 6.0]).unwrap() - 68f64.log2()).abs() < 1e-12);
        assert!((weight_log2(&[5.0, 4.0]).unwrap() - 48f64.log2()).abs() < 1e-12);
        assert_eq!(weight_log2(&[7.0]).unwrap(), 7.0);
        assert!(weight_log2(&[]).is_err());
        assert!((log2_add(5.0, 4.0) - 48f64.log2()).abs() < 1e-12);
        assert_eq!(log2_add(3.0, f64::NEG_INFINITY), 3.0);
    }

    #[test]
    fn exact_ceiling() {
        assert_eq!(exact_ceil_log2_weight(&[0.0; 5]), Some(3));
        assert_eq!(exact_ceil_log2_weight(&[0.0, 20.0, 0.0]), Some(21));
        assert_eq!(exact_ceil_log2_weight(&[4.0, 4.0]), Some(5));
        assert_eq!(exact_ceil_log2_weight(&[7.0]), Some(7));
        assert_eq!(exact_ceil_log2_weight(&[0.5]), None);
        assert_eq!(exact_ceil_log2_weight(&[0.0, 60.0]), None);
    }

    #[test]
    fn ref_invariants() {
        assert!(ExtAopRef::new(0, 1, 2, false).is_err());
        assert!(ExtAopRef::new(2, 0, 2, false).is_err());
        let r = ExtAopRef::new(0, 4, 5, false).unwrap();
        assert_eq!(r.input_count(), 4);
        assert_eq!(r.inputs().collect::<Vec<_>>(), vec![0, 2, 4, 5]);
        assert!(r.check(5).is_err());
        assert!(r.check(6).is_ok());
    }

    proptest::proptest! {
        #[test]
        fn weight_is_permutation_invariant_and_monotone(
            mut a in proptest::collection::vec(-12i32..12, 1..20),
            bump in 0usize..20,
        ) {
            let xs: Vec<f64> = a.iter().map(|&x| x as f64).collect();
            let w = weight_log2(&xs).unwrap();
            a.reverse();
            let ys: Vec<f64> = a.iter().map(|&x| x as f64).collect();
            proptest::prop_assert!((weight_log2(&ys).unwrap() - w).abs() < 1e-9);
            let mut zs = xs.clone();
            let idx = bump % zs.len();
            zs[idx] += 0.25;
            proptest::prop_assert!(weight_log2(&zs).unwrap() > w);
        }

        #[test]
        fn float_ceiling_matches_exact(a in proptest::collection::vec(0i32..=40, 1..30)) {
            let xs: Vec<f64> = a.iter().map(|&x| x as f64).collect();
            let exact = exact_ceil_log2_weight(&xs).unwrap();
            // the shifted sum is exact in f64, so log2 of a power of two is exact too
            let float = weight_log2(&xs).unwrap();
            proptest::prop_assert_eq!(float.ceil() as i64, exact);
        }
    }
}
