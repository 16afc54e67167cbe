use super::{Mapping, PropertyKind};
use crate::error::{Error, Result};
use crate::report::Budget;
use crate::value::Value;

/// A lower adjoint `alpha` together with its upper adjoint `gamma`.
#[derive(Clone, Debug)]
pub struct GaloisPair {
    pub lower: Mapping,
    pub upper: Mapping,
    /// `alpha(gamma(y)) = y` for every abstract `y`.
    pub insertion: bool,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum AdjointSearch {
    Found(GaloisPair),
    /// `{x : alpha(x) <= y}` has no maximum.
    Missing { y: Value },
}

impl AdjointSearch {
    pub fn pair(&self) -> Option<&GaloisPair> {
        match self {
            AdjointSearch::Found(p) => Some(p),
            AdjointSearch::Missing { .. } => None,
        }
    }
}

/// Computes `gamma(y) = max {x : alpha(x) <= y}` for every abstract `y`.
///
/// Uses the maximum of the preimage downset rather than its least upper
/// bound, so a missing maximum means no upper adjoint exists.
pub fn find_upper_adjoint(alpha: &Mapping) -> Result<AdjointSearch> {
    let (s, t) = (alpha.source(), alpha.target());
    let xs = s.require_elements()?;
    let ys = t.require_elements()?;
    let mono = alpha_monotonic(alpha)?;
    if let Some(why) = mono {
        return Err(Error::NotMonotonic(why));
    }
    let images: Vec<Value> = xs.iter().map(|x| alpha.image(x)).collect();
    let mut upper = Vec::with_capacity(ys.len());
    for y in ys {
        let below: Vec<&Value> = xs
            .iter()
            .zip(&images)
            .filter(|(_, img)| t.le(img, y))
            .map(|(x, _)| x)
            .collect();
        match below.iter().find(|m| below.iter().all(|x| s.le(x, m))) {
            Some(m) => upper.push((*m).clone()),
            None => return Ok(AdjointSearch::Missing { y: y.clone() }),
        }
    }
    let insertion = ys.iter().zip(&upper).all(|(y, g)| &alpha.image(g) == y);
    let gamma = Mapping::from_images(t.clone(), s.clone(), upper)?;
    Ok(AdjointSearch::Found(GaloisPair {
        lower: alpha.clone(),
        upper: gamma,
        insertion,
    }))
}

fn alpha_monotonic(alpha: &Mapping) -> Result<Option<String>> {
    let r = super::check_property(alpha, PropertyKind::Monotonic, None, &Budget::default())?;
    Ok(r.is_fail().then(|| r.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{quasi_abstract, quasi_alpha, quasi_concrete};
    use crate::semiring::Semiring;

    #[test]
    fn quasi_upper_adjoint() {
        let found = find_upper_adjoint(&quasi_alpha()).unwrap();
        let pair = found.pair().expect("adjoint exists");
        assert!(pair.insertion);
        let set = Value::set_of;
        let g = &pair.upper;
        assert_eq!(g.apply(&set(&[])).unwrap(), set(&[]));
        assert_eq!(g.apply(&set(&[0])).unwrap(), set(&[0]));
        assert_eq!(g.apply(&set(&[1])).unwrap(), set(&[1, 2]));
        assert_eq!(g.apply(&set(&[0, 1])).unwrap(), set(&[0, 1, 2]));
        assert_eq!(g.source(), &quasi_abstract());
        assert_eq!(g.target(), &quasi_concrete());
    }

    #[test]
    fn identity_adjoint_is_identity() {
        let s = quasi_concrete();
        let found = find_upper_adjoint(&Mapping::identity(s.clone())).unwrap();
        let pair = found.pair().unwrap();
        assert!(pair.insertion);
        for x in s.elements().unwrap() {
            assert_eq!(&pair.upper.image(x), x);
        }
    }

    #[test]
    fn non_monotonic_map_is_rejected() {
        let b = Semiring::boolean();
        let swap = Mapping::from_images(b.clone(), b, vec![Value::Bool(true), Value::Bool(false)])
            .unwrap();
        assert!(matches!(find_upper_adjoint(&swap), Err(Error::NotMonotonic(_))));
    }

    #[test]
    fn missing_maximum_is_reported() {
        // alpha: powerset{a,b} -> boolean sending every set but the full one to F.
        // {x : alpha(x) <= F} = {0, {a}, {b}} has no maximum.
        let s = Semiring::powerset(&["a", "b"]).unwrap();
        let images = s
            .elements()
            .unwrap()
            .iter()
            .map(|x| Value::Bool(x == s.one()))
            .collect();
        let alpha = Mapping::from_images(s, Semiring::boolean(), images).unwrap();
        let r = find_upper_adjoint(&alpha).unwrap();
        assert!(matches!(r, AdjointSearch::Missing { y: Value::Bool(false) }));
    }
}
