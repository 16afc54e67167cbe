//! Mappings between semirings and their certified properties.

mod adjoint;
mod properties;
mod reflection;
mod search;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::report::{Budget, PropertyReport};
use crate::semiring::Semiring;
use crate::value::Value;

pub use adjoint::{find_upper_adjoint, AdjointSearch, GaloisPair};
pub use properties::{check_property, PropertyKind};
pub use reflection::{check_sum_product_reflection, matrix_rows};
pub use search::{all_maps, endpoint_maps, homomorphisms, isomorphisms, quasi_homomorphisms, DEFAULT_SCAN_BOUND};

#[derive(Clone, Debug)]
pub enum MappingRule {
    Identity,
    /// Image of every source element, indexed by carrier position.
    Table(Vec<Value>),
    /// `high` when `theta <= x` (or `theta < x` when strict) in the source
    /// order, `low` otherwise. Source must be totally ordered.
    Threshold {
        theta: Value,
        low: Value,
        high: Value,
        strict: bool,
    },
    /// `j`-th projection out of a product semiring.
    Projection(usize),
    /// Natural map onto a quotient: block index of every source element.
    Natural(Vec<u32>),
    /// Apply the first mapping, then the second.
    Compose(Box<Mapping>, Box<Mapping>),
}

/// Parameter-free properties whose default-budget reports are cached.
const CACHED: [PropertyKind; 6] = [
    PropertyKind::Endpoints,
    PropertyKind::Monotonic,
    PropertyKind::Homomorphism,
    PropertyKind::QuasiHomomorphism,
    PropertyKind::OrderReflecting,
    PropertyKind::Isomorphism,
];

#[derive(Default)]
struct Certificates([OnceLock<PropertyReport>; 6]);

/// A mapping `alpha: S -> S~`.
#[derive(Clone)]
pub struct Mapping {
    source: Semiring,
    target: Semiring,
    rule: MappingRule,
    certificates: Arc<Certificates>,
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mapping")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("rule", &self.rule)
            .finish()
    }
}

impl Mapping {
    fn new(source: Semiring, target: Semiring, rule: MappingRule) -> Mapping {
        Mapping {
            source,
            target,
            rule,
            certificates: Arc::default(),
        }
    }

    pub fn identity(s: Semiring) -> Mapping {
        Mapping::new(s.clone(), s, MappingRule::Identity)
    }

    /// A mapping given by explicit `(source, target)` pairs covering the
    /// whole (enumerable) source carrier.
    pub fn table(source: Semiring, target: Semiring, pairs: &[(Value, Value)]) -> Result<Mapping> {
        let n = source.require_elements()?.len();
        let mut images: Vec<Option<Value>> = vec![None; n];
        for (x, y) in pairs {
            source.ensure_contains(x)?;
            target.ensure_contains(y)?;
            let i = source.index_of(x).expect("enumerable source");
            match &images[i] {
                Some(prev) if prev != y => {
                    return Err(Error::InvalidArgument(format!(
                        "{} is mapped to both {} and {}",
                        source.format_value(x),
                        target.format_value(prev),
                        target.format_value(y)
                    )))
                }
                _ => images[i] = Some(y.clone()),
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, img)| {
                img.ok_or_else(|| {
                    let els = source.elements().expect("enumerable source");
                    Error::InvalidArgument(format!(
                        "mapping is not total: no image for {}",
                        source.format_value(&els[i])
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Mapping::new(source, target, MappingRule::Table(images)))
    }

    /// Builds a table mapping from images listed in source carrier order.
    pub fn from_images(source: Semiring, target: Semiring, images: Vec<Value>) -> Result<Mapping> {
        let n = source.require_elements()?.len();
        if images.len() != n {
            return Err(Error::InvalidArgument(format!(
                "expected {n} images, got {}",
                images.len()
            )));
        }
        for y in &images {
            target.ensure_contains(y)?;
        }
        Ok(Mapping::new(source, target, MappingRule::Table(images)))
    }

    pub fn threshold(
        source: Semiring,
        target: Semiring,
        theta: Value,
        low: Value,
        high: Value,
        strict: bool,
    ) -> Result<Mapping> {
        if !source.is_total() {
            return Err(Error::NotTotallyOrdered(source.describe()));
        }
        source.ensure_contains(&theta)?;
        target.ensure_contains(&low)?;
        target.ensure_contains(&high)?;
        Ok(Mapping::new(
            source,
            target,
            MappingRule::Threshold {
                theta,
                low,
                high,
                strict,
            },
        ))
    }

    pub fn projection(source: Semiring, index: usize) -> Result<Mapping> {
        let target = match source.kind() {
            crate::semiring::SemiringKind::Product(fs) => fs.get(index).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "projection index {index} out of range for {source}"
                ))
            })?,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "projection needs a product semiring, got {source}"
                )))
            }
        };
        Ok(Mapping::new(source, target, MappingRule::Projection(index)))
    }

    pub(crate) fn natural(source: Semiring, target: Semiring, blocks: Vec<u32>) -> Result<Mapping> {
        Ok(Mapping::new(source, target, MappingRule::Natural(blocks)))
    }

    /// `second` after `first`.
    pub fn compose(first: Mapping, second: Mapping) -> Result<Mapping> {
        if first.target != second.source {
            return Err(Error::SemiringMismatch {
                expected: first.target.describe(),
                found: second.source.describe(),
            });
        }
        Ok(Mapping::new(
            first.source.clone(),
            second.target.clone(),
            MappingRule::Compose(Box::new(first), Box::new(second)),
        ))
    }

    pub fn source(&self) -> &Semiring {
        &self.source
    }

    pub fn target(&self) -> &Semiring {
        &self.target
    }

    pub fn rule(&self) -> &MappingRule {
        &self.rule
    }

    /// `alpha(a)`, checking that `a` is in the source carrier.
    pub fn apply(&self, a: &Value) -> Result<Value> {
        self.source.ensure_contains(a)?;
        Ok(self.image(a))
    }

    /// Unchecked application.
    pub fn image(&self, a: &Value) -> Value {
        match &self.rule {
            MappingRule::Identity => a.clone(),
            MappingRule::Table(images) => {
                images[self.source.index_of(a).expect("enumerable source")].clone()
            }
            MappingRule::Threshold {
                theta,
                low,
                high,
                strict,
            } => {
                let above = if *strict {
                    self.source.less(theta, a)
                } else {
                    self.source.le(theta, a)
                };
                if above {
                    high.clone()
                } else {
                    low.clone()
                }
            }
            MappingRule::Projection(j) => match a {
                Value::Tuple(vs) => vs[*j].clone(),
                _ => panic!("projection applied to a non-tuple"),
            },
            MappingRule::Natural(blocks) => {
                Value::Elem(blocks[self.source.index_of(a).expect("enumerable source")])
            }
            MappingRule::Compose(f, g) => g.image(&f.image(a)),
        }
    }

    /// Images of every source element, when the source is enumerable.
    pub fn images(&self) -> Option<Vec<Value>> {
        Some(self.source.elements()?.iter().map(|a| self.image(a)).collect())
    }

    /// Whether `alpha(0) = 0~` and `alpha(1) = 1~`.
    pub fn preserves_endpoints(&self) -> bool {
        &self.image(self.source.zero()) == self.target.zero()
            && &self.image(self.source.one()) == self.target.one()
    }

    /// Default-budget report for a parameter-free property, computed once per
    /// mapping (clones share the cache).
    ///
    /// # Panics
    ///
    /// Panics for properties that need an adjoint or set-size bound.
    pub fn certificate(&self, kind: PropertyKind) -> PropertyReport {
        let slot = CACHED
            .iter()
            .position(|k| *k == kind)
            .unwrap_or_else(|| panic!("{kind} is not a cached certificate"));
        self.certificates.0[slot]
            .get_or_init(|| {
                check_property(self, kind, None, &Budget::default())
                    .expect("parameter-free properties need no adjoint")
            })
            .clone()
    }

    pub fn is_homomorphism(&self) -> bool {
        self.certificate(PropertyKind::Homomorphism).holds()
    }

    pub fn is_quasi_homomorphism(&self) -> bool {
        self.certificate(PropertyKind::QuasiHomomorphism).holds()
    }

    pub fn is_order_reflecting(&self) -> bool {
        self.certificate(PropertyKind::OrderReflecting).holds()
    }

    pub fn describe(&self) -> String {
        let rule = match &self.rule {
            MappingRule::Identity => "identity".to_string(),
            MappingRule::Table(_) => "table".to_string(),
            MappingRule::Threshold { theta, strict, .. } => format!(
                "threshold({}{})",
                if *strict { ">" } else { ">=" },
                self.source.format_value(theta)
            ),
            MappingRule::Projection(j) => format!("projection({j})"),
            MappingRule::Natural(_) => "natural".to_string(),
            MappingRule::Compose(f, g) => format!("{} ; {}", f.describe(), g.describe()),
        };
        format!("{rule}: {} -> {}", self.source, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{quasi_alpha, quasi_concrete};

    #[test]
    fn quasi_alpha_collapses_b_and_c() {
        let alpha = quasi_alpha();
        let q = Value::set_of(&[1]);
        for x in [&[1][..], &[2], &[1, 2]] {
            assert_eq!(alpha.apply(&Value::set_of(x)).unwrap(), q);
        }
        assert_eq!(alpha.apply(&Value::set_of(&[0])).unwrap(), Value::set_of(&[0]));
        assert!(alpha.apply(&Value::Set(0b1000)).is_err());
        assert!(alpha.preserves_endpoints());
    }

    #[test]
    fn identity_applies_as_identity() {
        let id = Mapping::identity(quasi_concrete());
        let v = Value::set_of(&[0, 2]);
        assert_eq!(id.apply(&v).unwrap(), v);
    }

    #[test]
    fn threshold_on_fuzzy() {
        let t = Mapping::threshold(
            Semiring::fuzzy(),
            Semiring::boolean(),
            Value::rat(1, 2),
            Value::Bool(false),
            Value::Bool(true),
            false,
        )
        .unwrap();
        assert_eq!(t.apply(&Value::rat(7, 10)).unwrap(), Value::Bool(true));
        assert_eq!(t.apply(&Value::rat(1, 2)).unwrap(), Value::Bool(true));
        assert_eq!(t.apply(&Value::rat(49, 100)).unwrap(), Value::Bool(false));
        assert!(Mapping::threshold(
            quasi_concrete(),
            Semiring::boolean(),
            Value::Set(0),
            Value::Bool(false),
            Value::Bool(true),
            false
        )
        .is_err());
    }

    #[test]
    fn threshold_follows_the_weighted_order() {
        // in the weighted semiring smaller costs are better
        let t = Mapping::threshold(
            Semiring::weighted(),
            Semiring::boolean(),
            Value::weight(10),
            Value::Bool(false),
            Value::Bool(true),
            false,
        )
        .unwrap();
        assert_eq!(t.image(&Value::weight(3)), Value::Bool(true));
        assert_eq!(t.image(&Value::weight(11)), Value::Bool(false));
        assert_eq!(t.image(&Value::Inf), Value::Bool(false));
    }

    #[test]
    fn projection_and_composition() {
        let bb = Semiring::product(vec![Semiring::boolean(), Semiring::fuzzy()]).unwrap();
        let p1 = Mapping::projection(bb.clone(), 1).unwrap();
        let v = Value::Tuple(vec![Value::Bool(true), Value::rat(3, 4)]);
        assert_eq!(p1.apply(&v).unwrap(), Value::rat(3, 4));
        let t = Mapping::threshold(
            Semiring::fuzzy(),
            Semiring::boolean(),
            Value::rat(1, 2),
            Value::Bool(false),
            Value::Bool(true),
            false,
        )
        .unwrap();
        let c = Mapping::compose(p1.clone(), t.clone()).unwrap();
        assert_eq!(c.apply(&v).unwrap(), Value::Bool(true));
        assert!(Mapping::compose(t, p1).is_err());
        assert!(Mapping::projection(bb, 2).is_err());
    }

    #[test]
    fn table_mappings_must_be_total_and_functional() {
        let b = Semiring::boolean();
        let partial = Mapping::table(b.clone(), b.clone(), &[(Value::Bool(true), Value::Bool(true))]);
        assert!(partial.is_err());
        let clash = Mapping::table(
            b.clone(),
            b.clone(),
            &[
                (Value::Bool(true), Value::Bool(true)),
                (Value::Bool(true), Value::Bool(false)),
                (Value::Bool(false), Value::Bool(false)),
            ],
        );
        assert!(clash.is_err());
    }

    #[test]
    fn certificates_are_cached_and_shared() {
        let alpha = quasi_alpha();
        let copy = alpha.clone();
        assert!(!alpha.is_homomorphism());
        assert!(copy.certificates.0[2].get().is_some());
        assert!(copy.is_quasi_homomorphism());
    }
}
