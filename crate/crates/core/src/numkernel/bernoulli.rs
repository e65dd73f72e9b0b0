use std::sync::{Arc, RwLock};

use rug::{Integer, Rational};

static TABLE: RwLock<Option<Arc<Vec<Rational>>>> = RwLock::new(None);

/// Shared table holding at least `B_0..=B_max`. Values are exact, so sharing
/// them between threads and precisions is safe.
pub(crate) fn bernoulli_table(max: usize) -> Arc<Vec<Rational>> {
    if let Some(t) = TABLE.read().expect("bernoulli table lock").as_ref() {
        if t.len() > max {
            return Arc::clone(t);
        }
    }
    let mut guard = TABLE.write().expect("bernoulli table lock");
    if let Some(t) = guard.as_ref() {
        if t.len() > max {
            return Arc::clone(t);
        }
    }
    let size = (max + 1).next_power_of_two().max(64);
    let t = Arc::new(bernoulli_numbers(size));
    *guard = Some(Arc::clone(&t));
    t
}

/// Exact Bernoulli numbers `B_0..=B_max` with `B_1 = -1/2`.
///
/// Even-index values come from the tangent numbers (integer-only recurrence),
/// `B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))`.
pub fn bernoulli_numbers(max: usize) -> Vec<Rational> {
    let m = max / 2;
    let tangent = tangent_numbers(m);
    let mut out = vec![Rational::new(); max + 1];
    out[0] = Rational::from(1);
    if max >= 1 {
        out[1] = Rational::from((-1, 2));
    }
    for k in 1..=m {
        let four_k = Integer::from(1) << (2 * k as u32);
        let den = Integer::from(&four_k - 1u32) * &four_k;
        let mut num = Integer::from(&tangent[k] * (2 * k as u64));
        if k % 2 == 0 {
            num = -num;
        }
        out[2 * k] = Rational::from((num, den));
    }
    out
}

/// Tangent numbers `T_1..=T_m` (index 0 unused), Brent–Harvey recurrence.
fn tangent_numbers(m: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); m + 1];
    if m == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=m {
        t[k] = Integer::from(&t[k - 1] * (k as u64 - 1));
    }
    for k in 2..=m {
        for j in k..=m {
            let a = Integer::from(&t[j - 1] * (j - k) as u64);
            let b = Integer::from(&t[j] * (j - k + 2) as u64);
            t[j] = a + b;
        }
    }
    t
}
