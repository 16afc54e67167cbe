//! Congruences on finite semirings and the induced quotients.

use super::{Semiring, Table};
use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::value::Value;

/// A partition of a finite carrier, as a list of blocks.
pub type Partition = Vec<Vec<Value>>;

/// Four elements with `a ~ a2` and `b ~ b2` whose images under `op` fall in
/// different blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceWitness {
    pub op: &'static str,
    pub a: Value,
    pub a2: Value,
    pub b: Value,
    pub b2: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CongruenceCheck {
    pub holds: bool,
    pub witness: Option<CongruenceWitness>,
}

/// Block index of every element, in carrier order.
fn block_indices(s: &Semiring, partition: &Partition) -> Result<Vec<u32>> {
    let els = s.require_elements()?;
    let mut block_of = vec![u32::MAX; els.len()];
    for (bi, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidPartition(format!("block {bi} is empty")));
        }
        for v in block {
            let i = s.index_of(v).filter(|_| s.contains(v)).ok_or_else(|| {
                Error::InvalidPartition(format!("{v:?} is not an element of {s}"))
            })?;
            if block_of[i] != u32::MAX {
                return Err(Error::InvalidPartition(format!(
                    "{} appears in more than one block",
                    s.format_value(v)
                )));
            }
            block_of[i] = bi as u32;
        }
    }
    if let Some(i) = block_of.iter().position(|&b| b == u32::MAX) {
        return Err(Error::InvalidPartition(format!(
            "{} is not covered by any block",
            s.format_value(&els[i])
        )));
    }
    Ok(block_of)
}

/// Checks that `partition` is compatible with both operations.
pub fn is_congruence(s: &Semiring, partition: &Partition) -> Result<CongruenceCheck> {
    let block_of = block_indices(s, partition)?;
    Ok(match find_violation(s, &block_of, partition.len()) {
        Some(w) => CongruenceCheck {
            holds: false,
            witness: Some(w),
        },
        None => CongruenceCheck {
            holds: true,
            witness: None,
        },
    })
}

fn find_violation(s: &Semiring, block_of: &[u32], blocks: usize) -> Option<CongruenceWitness> {
    let els = s.elements().expect("checked enumerable");
    type Op = fn(&Semiring, &Value, &Value) -> Value;
    let ops: [(&str, Op); 2] = [("sum", Semiring::add), ("prod", Semiring::mul)];
    for (name, op) in ops {
        // first (a, b, target block) seen for each pair of argument blocks
        let mut seen: Vec<Option<(usize, usize, u32)>> = vec![None; blocks * blocks];
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                let r = op(s, a, b);
                let rb = block_of[s.index_of(&r).expect("closed operation")];
                let key = block_of[i] as usize * blocks + block_of[j] as usize;
                match seen[key] {
                    None => seen[key] = Some((i, j, rb)),
                    Some((i0, j0, rb0)) if rb0 != rb => {
                        return Some(CongruenceWitness {
                            op: name,
                            a: els[i0].clone(),
                            a2: a.clone(),
                            b: els[j0].clone(),
                            b2: b.clone(),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    None
}

/// Builds `S/~` and the natural homomorphism onto it.
///
/// Blocks become table elements named after their members, in the order
/// given by `partition`.
pub fn quotient(s: &Semiring, partition: &Partition) -> Result<(Semiring, Mapping)> {
    let block_of = block_indices(s, partition)?;
    if let Some(w) = find_violation(s, &block_of, partition.len()) {
        return Err(Error::NotCongruence(format!(
            "{} {} ~ {} and {} ~ {} but results differ in block",
            w.op,
            s.format_value(&w.a),
            s.format_value(&w.a2),
            s.format_value(&w.b),
            s.format_value(&w.b2)
        )));
    }
    let block = |v: &Value| block_of[s.index_of(v).expect("closed operation")];
    let reps: Vec<&Value> = partition.iter().map(|b| &b[0]).collect();
    let grid = |op: fn(&Semiring, &Value, &Value) -> Value| -> Vec<Vec<u32>> {
        reps.iter()
            .map(|a| reps.iter().map(|b| block(&op(s, a, b))).collect())
            .collect()
    };
    let names = partition
        .iter()
        .map(|b| {
            let members: Vec<String> = b.iter().map(|v| s.format_value(v)).collect();
            format!("[{}]", members.join("|"))
        })
        .collect();
    let table = Table {
        names,
        sum: grid(Semiring::add),
        prod: grid(Semiring::mul),
        zero: block(s.zero()),
        one: block(s.one()),
    };
    let q = Semiring::table(table)?;
    let nu = Mapping::natural(s.clone(), q.clone(), block_of)?;
    Ok((q, nu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pset_abc() -> Semiring {
        Semiring::powerset(&["a", "b", "c"]).unwrap()
    }

    fn by_cardinality(s: &Semiring) -> Partition {
        let mut blocks = vec![Vec::new(); 4];
        for v in s.elements().unwrap() {
            if let Value::Set(bits) = v {
                blocks[bits.count_ones() as usize].push(v.clone());
            }
        }
        blocks
    }

    fn genuine(s: &Semiring, partition: &Partition, w: &CongruenceWitness) -> bool {
        let block = |v: &Value| partition.iter().position(|b| b.contains(v)).unwrap();
        let op = if w.op == "sum" { Semiring::add } else { Semiring::mul };
        block(&w.a) == block(&w.a2)
            && block(&w.b) == block(&w.b2)
            && block(&op(s, &w.a, &w.b)) != block(&op(s, &w.a2, &w.b2))
    }

    #[test]
    fn singleton_blocks_are_a_congruence() {
        let s = pset_abc();
        let p: Partition = s.elements().unwrap().iter().map(|v| vec![v.clone()]).collect();
        assert!(is_congruence(&s, &p).unwrap().holds);
    }

    #[test]
    fn cardinality_blocks_are_not_a_congruence() {
        let s = pset_abc();
        let p = by_cardinality(&s);
        let c = is_congruence(&s, &p).unwrap();
        assert!(!c.holds);
        assert!(genuine(&s, &p, c.witness.as_ref().unwrap()));
        assert!(matches!(quotient(&s, &p), Err(Error::NotCongruence(_))));
    }

    #[test]
    fn kernel_of_the_lub_preserving_map_respects_sums_only() {
        // {0}, {a}, {b,c,bc}, {ab,ac,abc}
        let s = pset_abc();
        let set = Value::set_of;
        let p: Partition = vec![
            vec![set(&[])],
            vec![set(&[0])],
            vec![set(&[1]), set(&[2]), set(&[1, 2])],
            vec![set(&[0, 1]), set(&[0, 2]), set(&[0, 1, 2])],
        ];
        let c = is_congruence(&s, &p).unwrap();
        assert!(!c.holds);
        let w = c.witness.unwrap();
        assert_eq!(w.op, "prod");
        assert!(genuine(&s, &p, &w));
    }

    #[test]
    fn total_partition_of_boolean_gives_one_point_semiring() {
        let s = Semiring::boolean();
        let p = vec![vec![Value::Bool(false), Value::Bool(true)]];
        let (q, nu) = quotient(&s, &p).unwrap();
        assert_eq!(q.cardinality(), Some(1));
        assert_eq!(q.zero(), q.one());
        assert_eq!(nu.apply(&Value::Bool(true)).unwrap(), Value::Elem(0));
    }

    #[test]
    fn partition_errors() {
        let s = Semiring::boolean();
        let missing = vec![vec![Value::Bool(false)]];
        assert!(matches!(is_congruence(&s, &missing), Err(Error::InvalidPartition(_))));
        let dup = vec![vec![Value::Bool(false)], vec![Value::Bool(false), Value::Bool(true)]];
        assert!(matches!(is_congruence(&s, &dup), Err(Error::InvalidPartition(_))));
        assert!(matches!(
            is_congruence(&Semiring::fuzzy(), &vec![]),
            Err(Error::RequiresFinite(_))
        ));
    }
}
