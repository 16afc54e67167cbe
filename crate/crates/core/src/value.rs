use crate::rational::Rational;

/// An element of some semiring carrier.
///
/// Values do not carry their semiring; membership is checked by
/// [`Semiring::contains`](crate::Semiring::contains). Equality is structural
/// and exact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Value {
    Bool(bool),
    /// Unit-interval rational (fuzzy, probabilistic) or finite weight.
    Rat(Rational),
    /// The weighted semiring's infinite cost.
    Inf,
    /// Subset of a powerset universe, bit `i` standing for the `i`-th name.
    Set(u64),
    /// Index into an enumerated (table or quotient) carrier.
    Elem(u32),
    /// Component values of a product semiring.
    Tuple(Vec<Value>),
}

impl Value {
    pub fn rat(numer: i128, denom: i128) -> Value {
        Value::Rat(Rational::new(numer, denom))
    }

    pub fn weight(w: i128) -> Value {
        Value::Rat(Rational::from_integer(w))
    }

    /// Builds a powerset value from the member indices.
    pub fn set_of(indices: &[usize]) -> Value {
        Value::Set(indices.iter().fold(0u64, |acc, &i| acc | (1u64 << i)))
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Rat(r)
    }
}
