//! JSON encodings of exact values.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use symplectic_core::cyclo::{Cyclo, CycloMatrix};
use symplectic_core::finabel::{Element, Hom, Subgroup};
use symplectic_core::forms::{BilinearForm, QZ};
use symplectic_core::schrodinger::ModelOperator;

pub fn rational(q: &BigRational) -> Value {
    if q.is_integer() {
        if let Some(n) = q.numer().to_i64() {
            return json!(n);
        }
    }
    json!(q.to_string())
}

/// Power-basis coefficients; integers as numbers, other rationals as `"p/q"`.
pub fn cyclo(c: &Cyclo) -> Value {
    Value::Array(c.coeffs().iter().map(rational).collect())
}

pub fn matrix(m: &CycloMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| cyclo(m.get(i, j))).collect()))
        .collect();
    json!({
        "zeta_order": m.field().order(),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": rows,
    })
}

pub fn qz(t: QZ) -> Value {
    json!({"num": t.num(), "den": t.den()})
}

pub fn element(x: &Element) -> Value {
    json!(x.coords)
}

pub fn elements(xs: &[Element]) -> Value {
    Value::Array(xs.iter().map(element).collect())
}

pub fn subgroup(s: &Subgroup) -> Value {
    json!({
        "generators": s.canonical_basis(),
        "order": s.order(),
    })
}

pub fn hom(h: &Hom) -> Value {
    json!({
        "source": h.source().factors(),
        "target": h.target().factors(),
        "matrix": h.matrix(),
    })
}

pub fn gram(f: &BilinearForm) -> Value {
    Value::Array(f.gram().iter().map(|row| Value::Array(row.iter().map(|&t| qz(t)).collect())).collect())
}

pub fn operator(op: &ModelOperator) -> Value {
    json!({
        "source_representatives": elements(op.source.coset_reps()),
        "target_representatives": elements(op.target.coset_reps()),
        "matrix": matrix(&op.matrix),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use symplectic_core::cyclo::field;

    #[test]
    fn rationals_are_numbers_when_integral() {
        assert_eq!(rational(&BigRational::from_integer(BigInt::from(-7))), json!(-7));
        assert_eq!(rational(&BigRational::new(BigInt::from(2), BigInt::from(6))), json!("1/3"));
        let huge = BigRational::from_integer(BigInt::from(i64::MAX) * 4);
        assert!(rational(&huge).is_string());
    }

    #[test]
    fn roots_of_unity_use_the_power_basis() {
        let f = field(4);
        assert_eq!(cyclo(&Cyclo::root(&f, 3)), json!([0, -1]));
        assert_eq!(qz(QZ::new(3, 4)), json!({"num": 3, "den": 4}));
    }
}
