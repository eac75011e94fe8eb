use std::collections::BTreeMap;
use std::fmt;

/// A boolean parameter, ranging over {0, 1}. Value 1 turns the leading door
/// of a bang p-type into `!`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoolParam(pub u32);

/// An integer parameter, ranging over ℤ at doors and over ℕ inside types.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntParam(pub u32);

impl fmt::Display for BoolParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

impl fmt::Debug for BoolParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Debug for IntParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Allocator for fresh parameters.
#[derive(Debug, Default)]
pub struct ParamSupply {
    next_bool: u32,
    next_int: u32,
}

impl ParamSupply {
    pub fn new() -> Self {
        ParamSupply { next_bool: 1, next_int: 1 }
    }

    pub fn fresh_bool(&mut self) -> BoolParam {
        let p = BoolParam(self.next_bool);
        self.next_bool += 1;
        p
    }

    pub fn fresh_int(&mut self) -> IntParam {
        let p = IntParam(self.next_int);
        self.next_int += 1;
        p
    }
}

/// A linear combination of integer parameters with positive coefficients;
/// the empty combination denotes 0. Repeated type substitution along shared
/// decorations can accumulate the same parameter, hence coefficients rather
/// than a set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinComb(BTreeMap<IntParam, u32>);

impl LinComb {
    pub fn zero() -> Self {
        LinComb(BTreeMap::new())
    }

    pub fn single(p: IntParam) -> Self {
        let mut m = BTreeMap::new();
        m.insert(p, 1);
        LinComb(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &LinComb) -> LinComb {
        let mut out = self.0.clone();
        for (p, k) in &other.0 {
            *out.entry(*p).or_insert(0) += k;
        }
        LinComb(out)
    }

    pub fn add_param(&mut self, p: IntParam) {
        *self.0.entry(p).or_insert(0) += 1;
    }

    pub fn terms(&self) -> impl Iterator<Item = (IntParam, u32)> + '_ {
        self.0.iter().map(|(p, k)| (*p, *k))
    }

    pub fn params(&self) -> impl Iterator<Item = IntParam> + '_ {
        self.0.keys().copied()
    }

    /// Weighted sum under an integer assignment (absent parameters read 0).
    pub fn eval(&self, lookup: impl Fn(IntParam) -> i64) -> i64 {
        self.0.iter().map(|(p, k)| lookup(*p) * (*k as i64)).sum()
    }

    /// Sum of a word of door parameters, with multiplicity.
    pub fn sum_of(params: impl IntoIterator<Item = IntParam>) -> LinComb {
        let mut c = LinComb::zero();
        for p in params {
            c.add_param(p);
        }
        c
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, k) in &self.0 {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *k == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{k}*{p}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_accumulates_coefficients() {
        let m = IntParam(1);
        let n = IntParam(2);
        let c = LinComb::sum_of([m, n, m]);
        assert_eq!(c.to_string(), "2*n1 + n2");
        assert_eq!(c.eval(|p| if p == m { 3 } else { 10 }), 16);
    }

    #[test]
    fn empty_sum_is_zero() {
        let c = LinComb::sum_of([]);
        assert!(c.is_zero());
        assert_eq!(c.to_string(), "0");
        assert_eq!(c.eval(|_| 7), 0);
    }
}
