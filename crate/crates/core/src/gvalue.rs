//! Exact rational truth degrees and the propositional bi-Gödel operations,
//! for both single values and twin (truth-support, falsity-support) pairs.
//!
//! Everything here is order-based: no operation ever produces a value other
//! than `0`, `1`, or one of its arguments. The [`Chain`] type exploits this to
//! run large evaluation sweeps on integer indices instead of rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational literal `{0}` (expected `num` or `num/den`)")]
    Malformed(String),
}

/// An exact rational in `[0, 1]`, always gcd-normalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value(BigRational);

impl Value {
    pub fn zero() -> Self {
        Value(BigRational::zero())
    }

    pub fn one() -> Self {
        Value(BigRational::one())
    }

    pub fn new(num: i64, den: i64) -> Result<Self, ValueError> {
        if den == 0 {
            return Err(ValueError::ZeroDenominator);
        }
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Result<Self, ValueError> {
        if r.is_negative() || r > BigRational::one() {
            return Err(ValueError::OutOfRange(r.to_string()));
        }
        Ok(Value(r))
    }

    pub fn rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_crisp(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    /// `1 - v`, the only arithmetic (as opposed to order) operation we need.
    pub fn one_minus(&self) -> Value {
        Value(BigRational::one() - &self.0)
    }

    /// The `k`-th of `m` values evenly spaced strictly between `lo` and `hi`
    /// (`1 <= k <= m`, `lo < hi`).
    pub fn between(lo: &Value, hi: &Value, k: usize, m: usize) -> Value {
        debug_assert!(lo < hi && k >= 1 && k <= m);
        let span = &hi.0 - &lo.0;
        let step = BigRational::new(BigInt::from(k as u64), BigInt::from((m + 1) as u64));
        Value(&lo.0 + span * step)
    }

    /// Exact midpoint of two values.
    pub fn midpoint(lo: &Value, hi: &Value) -> Value {
        Value((&lo.0 + &hi.0) / BigRational::from(BigInt::from(2)))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Value {
    type Err = ValueError;

    /// Parses `"2/3"`, `"1"`, `"0"`.
    fn from_str(s: &str) -> Result<Self, ValueError> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt, ValueError> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| ValueError::Malformed(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let num = parse_int(n)?;
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(ValueError::ZeroDenominator);
                }
                Self::from_rational(BigRational::new(num, den))
            }
            None => Self::from_rational(BigRational::from(parse_int(s)?)),
        }
    }
}

// --- Gödel operations on [0, 1] ---

/// Gödel implication: `1` if `a <= b`, else `b`.
pub fn g_impl(a: &Value, b: &Value) -> Value {
    if a <= b {
        Value::one()
    } else {
        b.clone()
    }
}

/// Gödel coimplication: `0` if `a <= b`, else `a`.
pub fn g_coimpl(a: &Value, b: &Value) -> Value {
    if a <= b {
        Value::zero()
    } else {
        a.clone()
    }
}

/// Gödel negation: `0` if `a > 0`, else `1`.
pub fn g_neg(a: &Value) -> Value {
    if a.is_zero() {
        Value::one()
    } else {
        Value::zero()
    }
}

/// Baaz Delta: `1` if `a = 1`, else `0`.
pub fn g_delta(a: &Value) -> Value {
    if a.is_one() {
        Value::one()
    } else {
        Value::zero()
    }
}

pub fn g_meet(a: &Value, b: &Value) -> Value {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn g_join(a: &Value, b: &Value) -> Value {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Infimum of a finite set; `1` on the empty set.
pub fn inf_of<'a, I: IntoIterator<Item = &'a Value>>(vals: I) -> Value {
    vals.into_iter()
        .min()
        .cloned()
        .unwrap_or_else(Value::one)
}

/// Supremum of a finite set; `0` on the empty set.
pub fn sup_of<'a, I: IntoIterator<Item = &'a Value>>(vals: I) -> Value {
    vals.into_iter()
        .max()
        .cloned()
        .unwrap_or_else(Value::zero)
}

// --- Twin values ---

/// A point of `[0,1] x [0,1]`: independent supports of truth and falsity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwinValue {
    pub t: Value,
    pub f: Value,
}

impl TwinValue {
    pub fn new(t: Value, f: Value) -> Self {
        TwinValue { t, f }
    }

    /// Classical truth `(1, 0)`.
    pub fn top() -> Self {
        TwinValue::new(Value::one(), Value::zero())
    }

    /// Classical falsity `(0, 1)`.
    pub fn bottom() -> Self {
        TwinValue::new(Value::zero(), Value::one())
    }

    /// The `B` constant: both supports full, `(1, 1)`.
    pub fn both() -> Self {
        TwinValue::new(Value::one(), Value::one())
    }

    pub fn is_designated(&self) -> bool {
        self.t.is_one() && self.f.is_zero()
    }
}

impl fmt::Display for TwinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.f)
    }
}

/// Propositional connectives a twin value can be applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinConnective {
    DeMorganNeg,
    StrongNeg,
    Delta,
    And,
    Or,
    Impl,
    Coimpl,
}

pub fn twin_de_morgan_neg(a: &TwinValue) -> TwinValue {
    TwinValue::new(a.f.clone(), a.t.clone())
}

pub fn twin_strong_neg(a: &TwinValue) -> TwinValue {
    TwinValue::new(g_neg(&a.t), g_coimpl(&Value::one(), &a.f))
}

pub fn twin_delta(a: &TwinValue) -> TwinValue {
    TwinValue::new(g_delta(&a.t), g_neg(&g_neg(&a.f)))
}

pub fn twin_and(a: &TwinValue, b: &TwinValue) -> TwinValue {
    TwinValue::new(g_meet(&a.t, &b.t), g_join(&a.f, &b.f))
}

pub fn twin_or(a: &TwinValue, b: &TwinValue) -> TwinValue {
    TwinValue::new(g_join(&a.t, &b.t), g_meet(&a.f, &b.f))
}

pub fn twin_impl(a: &TwinValue, b: &TwinValue) -> TwinValue {
    TwinValue::new(g_impl(&a.t, &b.t), g_coimpl(&b.f, &a.f))
}

pub fn twin_coimpl(a: &TwinValue, b: &TwinValue) -> TwinValue {
    TwinValue::new(g_coimpl(&a.t, &b.t), g_impl(&b.f, &a.f))
}

/// Dispatch table for the propositional twin connectives.
///
/// Panics if the arity of `args` does not match the connective.
pub fn twin_apply(conn: TwinConnective, args: &[TwinValue]) -> TwinValue {
    match (conn, args) {
        (TwinConnective::DeMorganNeg, [a]) => twin_de_morgan_neg(a),
        (TwinConnective::StrongNeg, [a]) => twin_strong_neg(a),
        (TwinConnective::Delta, [a]) => twin_delta(a),
        (TwinConnective::And, [a, b]) => twin_and(a, b),
        (TwinConnective::Or, [a, b]) => twin_or(a, b),
        (TwinConnective::Impl, [a, b]) => twin_impl(a, b),
        (TwinConnective::Coimpl, [a, b]) => twin_coimpl(a, b),
        _ => panic!("twin_apply: arity mismatch for {conn:?}"),
    }
}

// --- Order-indexed evaluation ---

/// Index into a [`Chain`].
pub type Idx = u16;

/// A finite strictly increasing chain of values with `0` first and `1` last.
///
/// Since every bi-Gödel operation returns `0`, `1`, or an argument, any
/// computation whose inputs lie on the chain stays on the chain, so it can be
/// carried out on indices alone. This is what makes exhaustive valuation
/// sweeps affordable.
#[derive(Debug, Clone)]
pub struct Chain {
    values: Vec<Value>,
}

impl Chain {
    /// Builds a chain from the given anchor values (deduplicated, `0` and `1`
    /// added) with `fresh` extra values inserted strictly between each pair of
    /// adjacent anchors.
    pub fn with_fresh(anchors: &[Value], fresh: usize) -> Chain {
        let mut vals: Vec<Value> = anchors.to_vec();
        vals.push(Value::zero());
        vals.push(Value::one());
        vals.sort();
        vals.dedup();
        if fresh == 0 {
            return Chain { values: vals };
        }
        let mut out = Vec::with_capacity(vals.len() * (fresh + 1));
        for pair in vals.windows(2) {
            out.push(pair[0].clone());
            for k in 1..=fresh {
                out.push(Value::between(&pair[0], &pair[1], k, fresh));
            }
        }
        out.push(vals.last().unwrap().clone());
        Chain { values: out }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bot(&self) -> Idx {
        0
    }

    pub fn top(&self) -> Idx {
        (self.values.len() - 1) as Idx
    }

    pub fn value(&self, i: Idx) -> &Value {
        &self.values[i as usize]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Index of a value that is known to be on the chain.
    pub fn index_of(&self, v: &Value) -> Option<Idx> {
        self.values.binary_search(v).ok().map(|i| i as Idx)
    }
}

/// The Gödel operations transported to chain indices.
pub mod chain_ops {
    use super::Idx;

    #[inline]
    pub fn meet(a: Idx, b: Idx) -> Idx {
        a.min(b)
    }

    #[inline]
    pub fn join(a: Idx, b: Idx) -> Idx {
        a.max(b)
    }

    #[inline]
    pub fn impl_(top: Idx, a: Idx, b: Idx) -> Idx {
        if a <= b {
            top
        } else {
            b
        }
    }

    #[inline]
    pub fn coimpl(a: Idx, b: Idx) -> Idx {
        if a <= b {
            0
        } else {
            a
        }
    }

    #[inline]
    pub fn neg(top: Idx, a: Idx) -> Idx {
        if a == 0 {
            top
        } else {
            0
        }
    }

    #[inline]
    pub fn delta(top: Idx, a: Idx) -> Idx {
        if a == top {
            top
        } else {
            0
        }
    }
}
