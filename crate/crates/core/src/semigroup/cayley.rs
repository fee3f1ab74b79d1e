//! Finite Cayley tables: associativity checks and exhaustive enumeration of
//! labeled associative tables of small order.

use super::SemigroupError;

/// Largest order accepted by [`enumerate_finite_semigroups`].
pub const MAX_ENUMERATION_ORDER: usize = 4;

/// First triple `(x, y, z)` in lexicographic order with
/// `(x+y)+z != x+(y+z)`, if any.
pub fn associativity_violation(order: usize, table: &[usize]) -> Option<(usize, usize, usize)> {
    let op = |a: usize, b: usize| table[a * order + b];
    for x in 0..order {
        for y in 0..order {
            for z in 0..order {
                if op(op(x, y), z) != op(x, op(y, z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

pub(crate) fn check_table(order: usize, table: &[usize]) -> Result<(), SemigroupError> {
    if order == 0 {
        return Err(SemigroupError::InvalidParameter("Cayley table order must be at least 1".into()));
    }
    if table.len() != order * order {
        return Err(SemigroupError::InvalidParameter(format!(
            "Cayley table of order {order} needs {} entries, got {}",
            order * order,
            table.len()
        )));
    }
    if let Some(bad) = table.iter().find(|&&v| v >= order) {
        return Err(SemigroupError::InvalidParameter(format!("table entry {bad} is not below the order {order}")));
    }
    match associativity_violation(order, table) {
        Some((x, y, z)) => Err(SemigroupError::NonAssociativeTable { x, y, z }),
        None => Ok(()),
    }
}

/// The two-sided identity of a table, if it has one.
pub(crate) fn identity(order: usize, table: &[usize]) -> Option<usize> {
    (0..order).find(|&e| (0..order).all(|x| table[e * order + x] == x && table[x * order + e] == x))
}

pub(crate) fn is_group(order: usize, table: &[usize]) -> bool {
    match identity(order, table) {
        None => false,
        Some(e) => (0..order).all(|x| (0..order).any(|y| table[x * order + y] == e && table[y * order + x] == e)),
    }
}

/// Every labeled associative Cayley table of the given order, each exactly
/// once, in lexicographic order of the row-major entry vector.
///
/// ```
/// use fsr_core::semigroup::enumerate_finite_semigroups;
/// assert_eq!(enumerate_finite_semigroups(2).unwrap().count(), 8);
/// ```
pub fn enumerate_finite_semigroups(order: usize) -> Result<CayleyEnumerator, SemigroupError> {
    if order == 0 || order > MAX_ENUMERATION_ORDER {
        return Err(SemigroupError::OrderTooLarge(order));
    }
    Ok(CayleyEnumerator { order, cells: vec![None; order * order], cursor: 0, done: false })
}

/// Backtracking enumerator behind [`enumerate_finite_semigroups`].
///
/// Cells are filled in row-major order; a partial table is abandoned as
/// soon as some fully defined triple breaks associativity.
#[derive(Debug, Clone)]
pub struct CayleyEnumerator {
    order: usize,
    cells: Vec<Option<usize>>,
    cursor: usize,
    done: bool,
}

impl CayleyEnumerator {
    pub fn order(&self) -> usize {
        self.order
    }

    fn consistent(&self) -> bool {
        let n = self.order;
        let get = |a: usize, b: usize| self.cells[a * n + b];
        for x in 0..n {
            for y in 0..n {
                let Some(xy) = get(x, y) else { continue };
                for z in 0..n {
                    let (Some(l), Some(yz)) = (get(xy, z), get(y, z)) else { continue };
                    if let Some(r) = get(x, yz) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Advance the cell at `cursor` to its next value, backtracking as needed.
    /// Returns false once the search space is exhausted.
    fn step(&mut self) -> bool {
        let n = self.order;
        loop {
            let next = match self.cells[self.cursor] {
                None => 0,
                Some(v) => v + 1,
            };
            if next >= n {
                self.cells[self.cursor] = None;
                if self.cursor == 0 {
                    return false;
                }
                self.cursor -= 1;
                continue;
            }
            self.cells[self.cursor] = Some(next);
            if !self.consistent() {
                continue;
            }
            if self.cursor + 1 == self.cells.len() {
                return true;
            }
            self.cursor += 1;
        }
    }
}

impl Iterator for CayleyEnumerator {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.step() {
            self.done = true;
            return None;
        }
        Some(self.cells.iter().map(|c| c.expect("complete table")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all order^(order²) tables.
    fn brute_force_count(order: usize) -> usize {
        let cells = order * order;
        let total = order.pow(cells as u32);
        (0..total)
            .filter(|&code| {
                let mut c = code;
                let table: Vec<usize> = (0..cells)
                    .map(|_| {
                        let v = c % order;
                        c /= order;
                        v
                    })
                    .collect();
                associativity_violation(order, &table).is_none()
            })
            .count()
    }

    #[test]
    fn counts_match_brute_force() {
        for order in 1..=3 {
            let enumerated = enumerate_finite_semigroups(order).unwrap().count();
            assert_eq!(enumerated, brute_force_count(order), "order {order}");
        }
    }

    #[test]
    fn regression_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_finite_semigroups(n).unwrap().count()).collect();
        assert_eq!(counts, vec![1, 8, 113, 3492]);
    }

    #[test]
    fn tables_are_distinct_and_associative() {
        let tables: Vec<Vec<usize>> = enumerate_finite_semigroups(3).unwrap().collect();
        let unique: std::collections::HashSet<_> = tables.iter().cloned().collect();
        assert_eq!(unique.len(), tables.len());
        assert!(tables.iter().all(|t| associativity_violation(3, t).is_none()));
    }

    #[test]
    fn order_bounds() {
        assert!(matches!(enumerate_finite_semigroups(0), Err(SemigroupError::OrderTooLarge(0))));
        assert!(matches!(enumerate_finite_semigroups(5), Err(SemigroupError::OrderTooLarge(5))));
        assert_eq!(enumerate_finite_semigroups(1).unwrap().count(), 1);
    }
}
