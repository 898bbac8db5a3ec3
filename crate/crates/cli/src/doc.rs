//! Job documents read by the command line front end.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use symplectic_core::cyclo::{Cyclo, CycloField, CycloMatrix};
use symplectic_core::descent::Covering;
use symplectic_core::finabel::{Group, Hom, Subgroup, SubgroupRepr};
use symplectic_core::forms::{BilinearForm, GramRepr, SymplecticSpace, QZ};
use symplectic_core::heisenberg::HeisenbergElement;
use symplectic_core::schrodinger::LagrangianPair;

use crate::failure::Failure;

pub const VERSION: &str = "1";

/// Fields shared by every job document.
#[derive(Debug, Deserialize)]
pub struct Header {
    pub version: String,
    pub kind: String,
}

/// Either the standard space on `B` or an explicit carrier with a polarization.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    #[serde(default)]
    pub standard: Option<Vec<i64>>,
    #[serde(default)]
    pub carrier: Option<Vec<i64>>,
    #[serde(default)]
    pub polarization: Option<GramRepr>,
}

impl SpaceDoc {
    pub fn build(&self) -> Result<SymplecticSpace, Failure> {
        match (&self.standard, &self.carrier, &self.polarization) {
            (Some(b), None, None) => Ok(SymplecticSpace::standard(&Group::new(b.clone())?)),
            (None, Some(k), Some(p)) => {
                let k = Group::new(k.clone())?;
                let form = BilinearForm::new(k.clone(), k, p.0.clone())?;
                Ok(SymplecticSpace::new(form)?)
            }
            _ => Err(Failure::input(
                "a space is either {\"standard\": B} or {\"carrier\": K, \"polarization\": gram}",
            )),
        }
    }
}

/// A lagrangian subgroup with the canonical refinement shifted by a character.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub generators: Vec<Vec<i64>>,
    #[serde(default)]
    pub shift: Option<Vec<i64>>,
}

impl PairDoc {
    pub fn build(&self, space: &SymplecticSpace) -> Result<LagrangianPair, Failure> {
        let k = space.carrier();
        let y = subgroup(k, &self.generators)?;
        match &self.shift {
            None => Ok(LagrangianPair::canonical(space, &y)?),
            Some(a) => {
                let a = k.dual().element(a.clone())?;
                Ok(LagrangianPair::shifted(space, &y, &a)?)
            }
        }
    }
}

pub fn subgroup(k: &Group, generators: &[Vec<i64>]) -> Result<Subgroup, Failure> {
    let repr = SubgroupRepr {
        generators: generators.to_vec(),
    };
    Ok(Subgroup::from_repr(k, &repr)?)
}

/// A space together with named lagrangian pairs on it.
#[derive(Debug, Deserialize)]
pub struct Pairs {
    pub space: SpaceDoc,
    pub pairs: BTreeMap<String, PairDoc>,
}

impl Pairs {
    pub fn space(&self) -> Result<SymplecticSpace, Failure> {
        self.space.build()
    }

    pub fn resolve(&self, space: &SymplecticSpace, name: &str) -> Result<LagrangianPair, Failure> {
        let doc = self
            .pairs
            .get(name)
            .ok_or_else(|| Failure::input(format!("no pair named {name:?}")))?;
        doc.build(space)
    }
}

#[derive(Debug, Deserialize)]
pub struct LagrangiansJob {
    pub space: SpaceDoc,
}

#[derive(Debug, Deserialize)]
pub struct ModelJob {
    #[serde(flatten)]
    pub pairs: Pairs,
    pub pair: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub scalar: QZ,
    pub point: Vec<i64>,
}

impl ElementDoc {
    pub fn build(&self, k: &Group) -> Result<HeisenbergElement, Failure> {
        Ok(HeisenbergElement::new(self.scalar, k.element(self.point.clone())?))
    }
}

#[derive(Debug, Deserialize)]
pub struct ActJob {
    #[serde(flatten)]
    pub pairs: Pairs,
    pub pair: String,
    pub elements: Vec<ElementDoc>,
}

#[derive(Debug, Deserialize)]
pub struct IntertwineJob {
    #[serde(flatten)]
    pub pairs: Pairs,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub auto_match: bool,
}

#[derive(Debug, Deserialize)]
pub struct ComposeJob {
    #[serde(flatten)]
    pub pairs: Pairs,
    pub chain: Vec<String>,
    #[serde(default)]
    pub auto_match: bool,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuasisplitOperation {
    GraphIsotropy,
    Shear,
    Commutator,
    Isotropize,
    NormalForm,
    Splitting,
}

#[derive(Debug, Deserialize)]
pub struct QuasisplitJob {
    pub operation: QuasisplitOperation,
    #[serde(rename = "B", default)]
    pub b: Option<Vec<i64>>,
    #[serde(default)]
    pub phi: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub f: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub g: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub n: Option<i64>,
    #[serde(default)]
    pub m: Option<i64>,
    #[serde(default)]
    pub k: Option<i64>,
    #[serde(default)]
    pub space: Option<SpaceDoc>,
    #[serde(rename = "Y", default)]
    pub y: Option<Vec<Vec<i64>>>,
    #[serde(rename = "Z", default)]
    pub z: Option<Vec<Vec<i64>>>,
}

pub fn required<'a, T>(value: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
    value
        .as_ref()
        .ok_or_else(|| Failure::input(format!("the field {name:?} is required for this operation")))
}

pub fn group(factors: &[i64]) -> Result<Group, Failure> {
    Ok(Group::new(factors.to_vec())?)
}

/// Rows are target coordinates, columns source generators.
pub fn hom(source: &Group, target: &Group, matrix: &[Vec<i64>]) -> Result<Hom, Failure> {
    Ok(Hom::new(source.clone(), target.clone(), matrix.to_vec())?)
}

/// A power-basis coefficient: an integer or a `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    fn value(&self) -> Result<BigRational, Failure> {
        match self {
            Coefficient::Int(n) => Ok(BigRational::from_integer(BigInt::from(*n))),
            Coefficient::Text(s) => s
                .trim()
                .parse::<BigRational>()
                .map_err(|_| Failure::input(format!("{s:?} is not a rational number"))),
        }
    }
}

pub fn cyclo(f: &Arc<CycloField>, coeffs: &[Coefficient]) -> Result<Cyclo, Failure> {
    if coeffs.len() > f.degree() {
        return Err(Failure::input(format!(
            "{} coefficients given but Q(zeta_{}) has degree {}",
            coeffs.len(),
            f.order(),
            f.degree()
        )));
    }
    let values = coeffs.iter().map(Coefficient::value).collect::<Result<Vec<_>, _>>()?;
    Ok(Cyclo::from_coeffs(f, values))
}

pub fn cyclo_matrix(f: &Arc<CycloField>, rows: &[Vec<Vec<Coefficient>>]) -> Result<CycloMatrix, Failure> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Failure::input("matrix rows have different lengths"));
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|c| cyclo(f, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CycloMatrix::from_entries(f, rows.len(), cols, entries))
}

/// A surjection of labelled finite sets.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringDoc {
    pub total: Vec<String>,
    pub base: Vec<String>,
    pub map: BTreeMap<String, String>,
}

/// Position of each label, rejecting duplicates.
fn positions(labels: &[String], what: &str) -> Result<BTreeMap<String, usize>, Failure> {
    let mut out = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if out.insert(l.clone(), i).is_some() {
            return Err(Failure::input(format!("{what} label {l:?} appears twice")));
        }
    }
    Ok(out)
}

impl CoveringDoc {
    /// The covering as indices, with the index of every total-space label.
    pub fn build(&self) -> Result<(Covering, BTreeMap<String, usize>), Failure> {
        let total = positions(&self.total, "total")?;
        let base = positions(&self.base, "base")?;
        if let Some(extra) = self.map.keys().find(|k| !total.contains_key(*k)) {
            return Err(Failure::input(format!("the map sends the unknown point {extra:?}")));
        }
        let map = self
            .total
            .iter()
            .map(|t| {
                let b = self
                    .map
                    .get(t)
                    .ok_or_else(|| Failure::input(format!("the map does not send {t:?} anywhere")))?;
                base.get(b)
                    .copied()
                    .ok_or_else(|| Failure::input(format!("{t:?} goes to the unknown base point {b:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((Covering::new(map, self.base.len())?, total))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<Vec<Coefficient>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsorDoc {
    #[serde(rename = "Q")]
    pub q: Vec<i64>,
    pub cocycle: GramRepr,
    #[serde(default = "one")]
    pub copies: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
pub struct DescentJob {
    #[serde(default)]
    pub zeta_order: Option<u64>,
    #[serde(default)]
    pub covering: Option<CoveringDoc>,
    #[serde(default)]
    pub values: Option<Vec<Vec<Vec<Coefficient>>>>,
    #[serde(default)]
    pub transitions: Option<Vec<TransitionDoc>>,
    #[serde(default)]
    pub torsor: Option<TorsorDoc>,
}

#[derive(Debug, Deserialize)]
pub struct SelftestJob {}

#[cfg(test)]
mod tests {
    use super::*;
    use symplectic_core::cyclo::field;

    #[test]
    fn coefficients_accept_integers_and_fractions() {
        let f = field(4);
        let c: Vec<Coefficient> = serde_json::from_str(r#"[1, "-3/6"]"#).unwrap();
        let z = cyclo(&f, &c).unwrap();
        assert_eq!(z.coeffs()[1], BigRational::new((-1).into(), 2.into()));
        let too_many: Vec<Coefficient> = serde_json::from_str("[1, 2, 3]").unwrap();
        assert!(cyclo(&f, &too_many).is_err());
        let bad: Vec<Coefficient> = serde_json::from_str(r#"["x"]"#).unwrap();
        assert!(cyclo(&f, &bad).is_err());
    }

    #[test]
    fn spaces_need_exactly_one_description() {
        let both: SpaceDoc = serde_json::from_str(r#"{"standard": [2], "carrier": [2, 2]}"#).unwrap();
        assert!(both.build().is_err());
        let explicit: SpaceDoc = serde_json::from_str(
            r#"{"carrier": [2, 2], "polarization": [[{"num": 0, "den": 1}, {"num": 1, "den": 2}],
                                                   [{"num": 0, "den": 1}, {"num": 0, "den": 1}]]}"#,
        )
        .unwrap();
        assert_eq!(explicit.build().unwrap(), SymplecticSpace::standard(&Group::cyclic(2).unwrap()));
    }

    #[test]
    fn ragged_matrices_are_rejected() {
        let rows: Vec<Vec<Vec<Coefficient>>> = serde_json::from_str("[[[1], [0]], [[1]]]").unwrap();
        assert!(cyclo_matrix(&field(1), &rows).is_err());
    }
}
