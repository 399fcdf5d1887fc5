use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{clw_bracket, CoreError, Family, GeneratorId, LambdaElement};
use crate::exactalg::{Poly, Rat, Var};

/// A finitely windowed bracket table.
///
/// Lookup of `[x λ y]`: a stored entry is used as is; otherwise a stored
/// `[y λ x]` is turned around by skew symmetry; otherwise the bracket is zero
/// when the degree `deg x + deg y` is inside the declared degree range, and
/// an error when it is not.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TableAlgebra {
    generators: BTreeMap<GeneratorId, i64>,
    entries: BTreeMap<(GeneratorId, GeneratorId), LambdaElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableGenerator {
    pub family: Family,
    pub index: i64,
    pub degree: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntry {
    pub left: GeneratorId,
    pub right: GeneratorId,
    pub value: LambdaElement,
}

/// On-disk form of a [`TableAlgebra`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableFile {
    pub generators: Vec<TableGenerator>,
    pub brackets: Vec<TableEntry>,
}

impl TableAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    /// The loop algebra restricted to `|i| <= window`, with `(L, L)` and
    /// `(L, I)` entries stored wherever the index sum stays in the window.
    pub fn from_clw(b: &Rat, window: i64) -> Self {
        let mut t = TableAlgebra::new();
        for i in -window..=window {
            t.add_generator(GeneratorId::l(i), i);
            t.add_generator(GeneratorId::i(i), i);
        }
        for i in -window..=window {
            for j in -window..=window {
                if (i + j).abs() > window {
                    continue;
                }
                for (x, y) in [
                    (GeneratorId::l(i), GeneratorId::l(j)),
                    (GeneratorId::l(i), GeneratorId::i(j)),
                ] {
                    t.set_bracket(x, y, clw_bracket(b, x, y));
                }
            }
        }
        t
    }

    pub fn add_generator(&mut self, g: GeneratorId, degree: i64) {
        self.generators.insert(g, degree);
    }

    /// Stores `[x λ y]`, replacing any previous entry.
    pub fn set_bracket(&mut self, x: GeneratorId, y: GeneratorId, value: LambdaElement) {
        self.entries.insert((x, y), value);
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> + '_ {
        self.generators.keys().copied()
    }

    pub fn degree(&self, g: GeneratorId) -> Result<i64, CoreError> {
        self.generators
            .get(&g)
            .copied()
            .ok_or(CoreError::UnknownGenerator(g))
    }

    pub fn bracket(&self, x: GeneratorId, y: GeneratorId) -> Result<LambdaElement, CoreError> {
        let dx = self.degree(x)?;
        let dy = self.degree(y)?;
        if let Some(v) = self.entries.get(&(x, y)) {
            return Ok(v.clone());
        }
        if let Some(v) = self.entries.get(&(y, x)) {
            let img = &Poly::d().neg_ref() - &Poly::lambda();
            return Ok(v.substitute(Var::L, &img).scale(&-Rat::from_integer(1.into())));
        }
        let lo = self.generators.values().min().copied();
        let hi = self.generators.values().max().copied();
        match (lo, hi) {
            (Some(lo), Some(hi)) if lo <= dx + dy && dx + dy <= hi => Ok(LambdaElement::zero()),
            _ => Err(CoreError::WindowExceeded { left: x, right: y }),
        }
    }

    pub fn to_file(&self) -> TableFile {
        TableFile {
            generators: self
                .generators
                .iter()
                .map(|(g, d)| TableGenerator {
                    family: g.family,
                    index: g.index,
                    degree: *d,
                })
                .collect(),
            brackets: self
                .entries
                .iter()
                .map(|((l, r), v)| TableEntry {
                    left: *l,
                    right: *r,
                    value: v.clone(),
                })
                .collect(),
        }
    }

    pub fn from_file(f: &TableFile) -> Result<Self, CoreError> {
        let mut t = TableAlgebra::new();
        for g in &f.generators {
            let id = GeneratorId {
                family: g.family,
                index: g.index,
            };
            if t.generators.insert(id, g.degree).is_some() {
                return Err(CoreError::BadTable(format!("generator {id} declared twice")));
            }
        }
        for e in &f.brackets {
            for g in [e.left, e.right].iter().chain(e.value.support()) {
                if !t.generators.contains_key(g) {
                    return Err(CoreError::UnknownGenerator(*g));
                }
            }
            if !e.value.uses_only(&[Var::D, Var::L]) {
                return Err(CoreError::BadTable(format!(
                    "bracket [{} λ {}] uses μ",
                    e.left, e.right
                )));
            }
            t.set_bracket(e.left, e.right, e.value.clone());
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn lookup_rules() {
        let t = TableAlgebra::from_clw(&int(3), 2);
        let (l1, i1) = (GeneratorId::l(1), GeneratorId::i(1));
        assert_eq!(t.bracket(i1, l1).unwrap(), clw_bracket(&int(3), i1, l1));
        assert!(t.bracket(GeneratorId::i(1), GeneratorId::i(0)).unwrap().is_zero());
        assert_eq!(
            t.bracket(GeneratorId::l(2), GeneratorId::l(1)),
            Err(CoreError::WindowExceeded {
                left: GeneratorId::l(2),
                right: GeneratorId::l(1)
            })
        );
        assert!(matches!(
            t.bracket(GeneratorId::l(7), l1),
            Err(CoreError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        let t = TableAlgebra::from_clw(&int(-1), 1);
        let back = TableAlgebra::from_file(&t.to_file()).unwrap();
        assert_eq!(t, back);
    }
}
