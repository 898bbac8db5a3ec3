//! One handler per subcommand. Each returns a JSON result and the list of
//! identities it verified.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use symplectic_core::cyclo::{field, CycloMatrix};
use symplectic_core::descent::{
    cocycle_witness, extension_splits, is_lifting, pullback, solve_descent, torsor_lift_obstruction,
    verify_full_faithfulness, DescentDatum, QSet,
};
use symplectic_core::finabel::{Group, Hom, Subgroup};
use symplectic_core::forms::{enumerate_lagrangians, BilinearForm, SubgroupClass};
use symplectic_core::heisenberg::{heisenberg_mul, CentralExtension};
use symplectic_core::intertwine::{compose_scalar, match_pair, maslov_defect, mismatch_character, verify_intertwiner};
use symplectic_core::quasisplit::{
    check_normal_form, commutator_on_image, graph_isotropy, isotropize_section, preserves_alternating, shear,
    transverse_normal_form, verify_splitting_example, SectionData, SplitModel,
};
use symplectic_core::schrodinger::{act, LagrangianPair, ModelSpace};

use crate::doc::{self, *};
use crate::encode;
use crate::failure::Failure;

/// One verified identity.
#[derive(Debug, Clone)]
pub struct Check {
    pub identity: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(identity: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            identity: identity.into(),
            passed,
            detail: detail.into(),
        }
    }
}

pub struct Outcome {
    pub result: Value,
    pub checks: Vec<Check>,
}

pub struct Settings {
    pub seed: u64,
    pub bound: u64,
}

pub fn lagrangians(job: LagrangiansJob, settings: &Settings) -> Result<Outcome, Failure> {
    let space = job.space.build()?;
    let k = space.carrier();
    let found = enumerate_lagrangians(&space, settings.bound)?;
    let mut classified = 0;
    for y in &found {
        if space.classify_subgroup(y)? == SubgroupClass::Lagrangian {
            classified += 1;
        }
    }
    let checks = vec![Check::new(
        "lagrangian: isotropic with |Y|^2 = |K|, equivalently Y = Y^perp",
        classified == found.len(),
        format!("{classified} of {} enumerated subgroups", found.len()),
    )];
    Ok(Outcome {
        result: json!({
            "carrier": k.factors(),
            "count": found.len(),
            "subgroups": found.iter().map(encode::subgroup).collect::<Vec<_>>(),
        }),
        checks,
    })
}

fn pair_json(pair: &LagrangianPair) -> Value {
    let refinement: Vec<Value> = pair
        .alpha()
        .values()
        .iter()
        .map(|(y, t)| json!({"point": y.coords, "value": encode::qz(*t)}))
        .collect();
    json!({
        "subgroup": encode::subgroup(pair.subgroup()),
        "refinement": refinement,
    })
}

pub fn model(job: ModelJob) -> Result<Outcome, Failure> {
    let space = job.pairs.space()?;
    let pair = job.pairs.resolve(&space, &job.pair)?;
    let ms = ModelSpace::new(&pair)?;
    let order = space.carrier().order();
    let d = ms.dimension() as u64;
    let checks = vec![
        Check::new("dim F(Y, alpha)^2 = |K|", d * d == order, format!("{d}^2 = {order}")),
        Check::new(
            "f(y + r) = chi(-P(y, r) - alpha(y)) f(r) is consistent",
            ms.constraint_is_consistent(),
            "checked on every point of K",
        ),
    ];
    Ok(Outcome {
        result: json!({
            "pair": pair_json(&pair),
            "dimension": d,
            "carrier_order": order,
            "zeta_order": ms.field().order(),
            "coset_representatives": encode::elements(ms.coset_reps()),
        }),
        checks,
    })
}

pub fn act_job(job: ActJob) -> Result<Outcome, Failure> {
    let space = job.pairs.space()?;
    let pair = job.pairs.resolve(&space, &job.pair)?;
    let ms = ModelSpace::new(&pair)?;
    let k = space.carrier();
    let elements = job
        .elements
        .iter()
        .map(|e| e.build(k))
        .collect::<Result<Vec<_>, _>>()?;
    if elements.is_empty() {
        return Err(Failure::input("at least one Heisenberg element is required"));
    }
    let operators = elements.iter().map(|h| act(&ms, h)).collect::<Result<Vec<_>, _>>()?;
    let mut products = 0;
    let mut failures = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let ab = act(&ms, &heisenberg_mul(&space, a, b))?.matrix;
            if operators[i].matrix.mul(&operators[j].matrix) != ab {
                failures.push(format!("({i}, {j})"));
            }
            products += 1;
        }
    }
    let checks = vec![Check::new(
        "act(h) act(h') = act(h h')",
        failures.is_empty(),
        if failures.is_empty() {
            format!("{products} ordered products")
        } else {
            format!("fails at {}", failures.join(", "))
        },
    )];
    let ops: Vec<Value> = elements
        .iter()
        .zip(&operators)
        .map(|(h, op)| {
            json!({
                "scalar": encode::qz(h.scalar),
                "point": h.point.coords,
                "matrix": encode::matrix(&op.matrix),
            })
        })
        .collect();
    Ok(Outcome {
        result: json!({
            "pair": pair_json(&pair),
            "coset_representatives": encode::elements(ms.coset_reps()),
            "operators": ops,
        }),
        checks,
    })
}

/// The second pair, corrected to match the first when asked to.
fn matched_target(p1: &LagrangianPair, p2: &LagrangianPair, auto: bool) -> Result<(LagrangianPair, Value), Failure> {
    let report = mismatch_character(p1, p2)?;
    if report.matched {
        return Ok((p2.clone(), json!({"rematched": false})));
    }
    if !auto {
        let gamma: Vec<Value> = report
            .gamma
            .iter()
            .filter(|(_, t)| !t.is_zero())
            .map(|(u, t)| json!({"point": u.coords, "value": encode::qz(*t)}))
            .collect();
        return Err(Failure::Rejected(
            "the refinements disagree on the intersection; set \"auto_match\": true to correct the target".into(),
            json!({"mismatch": gamma}),
        ));
    }
    let m = match_pair(p1, p2)?;
    let info = json!({
        "rematched": true,
        "character": m.character.coords,
        "twist_point": m.twist_point.coords,
    });
    Ok((m.pair, info))
}

pub fn intertwine(job: IntertwineJob) -> Result<Outcome, Failure> {
    let space = job.pairs.space()?;
    let p1 = job.pairs.resolve(&space, &job.source)?;
    let p2 = job.pairs.resolve(&space, &job.target)?;
    let (p2, matching) = matched_target(&p1, &p2, job.auto_match)?;
    let r = verify_intertwiner(&p1, &p2)?;
    let scale = r.unitarity_scale.as_ref();
    let positive = scale.is_some_and(|c| c > &num_rational::BigRational::from_integer(0.into()));
    let checks = vec![
        Check::new("summand is constant on Z/H0 cosets", r.summand_invariant, ""),
        Check::new("R is nonzero", r.nonzero, ""),
        Check::new("R act(w) = act(w) R on generators", r.intertwines_generators, ""),
        Check::new("det R != 0", r.determinant_nonzero, ""),
        Check::new(
            "dim Hom_H(F(Y, alpha), F(Z, beta)) = 1",
            r.oracle_dimension == 1,
            format!("dimension {}", r.oracle_dimension),
        ),
        Check::new("R lies in the intertwiner space", r.in_oracle_span, ""),
        Check::new(
            "R^dagger R = c Id with c > 0 rational",
            positive,
            scale.map_or("not a rational scalar".to_string(), |c| format!("c = {c}")),
        ),
    ];
    Ok(Outcome {
        result: json!({
            "source": pair_json(&p1),
            "target": pair_json(&p2),
            "matching": matching,
            "operator": encode::operator(&r.operator),
            "unitarity_scale": scale.map(encode::rational),
        }),
        checks,
    })
}

pub fn compose(job: ComposeJob) -> Result<Outcome, Failure> {
    let space = job.pairs.space()?;
    let mut chain = job
        .chain
        .iter()
        .map(|n| job.pairs.resolve(&space, n))
        .collect::<Result<Vec<_>, _>>()?;
    if !(2..=3).contains(&chain.len()) {
        return Err(Failure::input("the chain must name two or three pairs"));
    }
    for i in 1..chain.len() {
        chain[i] = matched_target(&chain[i - 1], &chain[i], job.auto_match)?.0;
    }
    if chain.len() == 3 && !mismatch_character(&chain[2], &chain[0])?.matched {
        return Err(Failure::input("the last pair does not match the first one"));
    }
    let (name, value) = if chain.len() == 2 {
        ("R(Z -> Y) R(Y -> Z) = c Id", compose_scalar(&chain[0], &chain[1])?)
    } else {
        ("R31 R23 R12 = s Id", maslov_defect(&chain[0], &chain[1], &chain[2])?)
    };
    let rational = value.as_rational();
    Ok(Outcome {
        result: json!({
            "pairs": chain.iter().map(pair_json).collect::<Vec<_>>(),
            "scalar": encode::cyclo(&value),
            "zeta_order": value.field().order(),
            "rational": rational.as_ref().map(encode::rational),
        }),
        checks: vec![Check::new(name, !value.is_zero(), format!("scalar {value}"))],
    })
}

pub fn quasisplit(job: QuasisplitJob) -> Result<Outcome, Failure> {
    match job.operation {
        QuasisplitOperation::GraphIsotropy => {
            let b = doc::group(required(&job.b, "B")?)?;
            let phi = doc::hom(&b, &b.dual(), required(&job.phi, "phi")?)?;
            let (isotropic, skew) = graph_isotropy(&b, &phi)?;
            Ok(Outcome {
                result: json!({"operation": "graph_isotropy", "isotropic": isotropic, "skew": skew}),
                checks: vec![Check::new(
                    "graph of phi isotropic <=> dual(phi) = -phi",
                    isotropic == skew,
                    format!("isotropic = {isotropic}, skew = {skew}"),
                )],
            })
        }
        QuasisplitOperation::Shear => {
            let b = doc::group(required(&job.b, "B")?)?;
            let f = doc::hom(&b, &b.dual(), required(&job.f, "f")?)?;
            let sigma = shear(&b, &f)?;
            let model = SplitModel::new(&b);
            let k = model.carrier();
            let (_, base_axis) = model.axes();
            let moved: Vec<_> = base_axis.generators().iter().map(|x| sigma.apply(x)).collect();
            let transported = Subgroup::generated(k, &moved)? == model.graph(&f)?;
            let mut checks = vec![
                Check::new("e(sigma u, sigma v) = e(u, v)", preserves_alternating(model.space(), &sigma), ""),
                Check::new("sigma carries the axis B onto the graph of f", transported, ""),
            ];
            if let Some(phi) = &job.phi {
                let phi = doc::hom(&b, &b.dual(), phi)?;
                let graph = model.graph(&phi)?;
                let moved: Vec<_> = graph.generators().iter().map(|x| sigma.apply(x)).collect();
                let ok = Subgroup::generated(k, &moved)? == model.graph(&phi.add(&f)?)?;
                checks.push(Check::new("sigma carries graph(phi) onto graph(phi + f)", ok, ""));
            }
            Ok(Outcome {
                result: json!({"operation": "shear", "sigma": encode::hom(&sigma)}),
                checks,
            })
        }
        QuasisplitOperation::Commutator => {
            let b = doc::group(required(&job.b, "B")?)?;
            let phi = doc::hom(&b, &b.dual(), required(&job.phi, "phi")?)?;
            let c = commutator_on_image(&b, &phi)?;
            Ok(Outcome {
                result: json!({
                    "operation": "commutator",
                    "image": encode::subgroup(&c.image),
                    "image_group": c.image_group.factors(),
                    "basis": encode::elements(&c.basis),
                    "gram": encode::gram(&c.form),
                    "skew": c.skew,
                    "alternating": c.alternating,
                }),
                checks: Vec::new(),
            })
        }
        QuasisplitOperation::Isotropize => {
            let b = doc::group(required(&job.b, "B")?)?;
            let phi = doc::hom(&b, &b.dual(), required(&job.phi, "phi")?)?;
            let n = *required(&job.n, "n")?;
            let model = SplitModel::new(&b);
            let p = model.base_projection();
            let mut psi = model.space().alternating().induced_hom();
            if let Some(g) = &job.g {
                let g = doc::hom(&b, &b.dual(), g)?;
                psi = psi.add(&p.then(&g.sub(&g.dual())?)?.then(&p.dual())?)?;
            }
            let sd = SectionData::split(&b, &phi, n)?;
            let before = sd.isotropy_defect(&psi)?;
            let out = isotropize_section(&sd, &psi)?;
            let after = out.isotropy_defect(&psi)?;
            let section_ok = out.s.then(&out.p)? == Hom::identity(&b).scale(out.n);
            Ok(Outcome {
                result: json!({
                    "operation": "isotropize",
                    "psi": encode::hom(&psi),
                    "section": encode::hom(&out.s),
                    "n": out.n,
                    "defect_before": encode::hom(&before),
                    "defect_after": encode::hom(&after),
                }),
                checks: vec![
                    Check::new("p s' = 2n^2 id", section_ok, format!("n' = {}", out.n)),
                    Check::new("dual(s') psi s' = 0", after.is_zero(), ""),
                ],
            })
        }
        QuasisplitOperation::NormalForm => {
            let space = required(&job.space, "space")?.build()?;
            let k = space.carrier();
            let y = doc::subgroup(k, required(&job.y, "Y")?)?;
            let z = doc::subgroup(k, required(&job.z, "Z")?)?;
            let nf = transverse_normal_form(&space, &y, &z)?;
            let c = check_normal_form(&space, &y, &z, &nf);
            Ok(Outcome {
                result: json!({
                    "operation": "normal_form",
                    "base": nf.z_group.factors(),
                    "basis": encode::elements(&nf.basis),
                    "iso": encode::hom(&nf.iso),
                }),
                checks: vec![
                    Check::new("the normal form map is bijective", c.bijective, ""),
                    Check::new("e is carried to the split form", c.preserves_e, ""),
                    Check::new("transported space has the split alternating form", c.same_alternating, ""),
                    Check::new("Y goes onto the dual axis", c.y_to_dual_axis, ""),
                    Check::new("Z goes onto the base axis", c.z_to_base_axis, ""),
                ],
            })
        }
        QuasisplitOperation::Splitting => {
            let m_group = doc::group(required(&job.b, "B")?)?;
            let f = doc::hom(&m_group, &m_group, required(&job.f, "f")?)?;
            if !f.is_injective() {
                return Err(Failure::input("the splitting formula needs an injective f"));
            }
            let r = verify_splitting_example(
                &m_group,
                &f,
                *required(&job.n, "n")?,
                *required(&job.m, "m")?,
                *required(&job.k, "k")?,
            )?;
            Ok(Outcome {
                result: json!({
                    "operation": "splitting",
                    "z": encode::subgroup(&r.z),
                    "source_quotient": r.source_quotient.factors(),
                    "quotient_group": r.quotient_group.factors(),
                    "section": r.section.as_ref().map(encode::hom),
                }),
                checks: vec![
                    Check::new("Z = {(f a, n a)} is lagrangian", r.z_lagrangian, ""),
                    Check::new("sigma is independent of the representative", r.representative_independent, ""),
                    Check::new("sigma is additive", r.homomorphic, ""),
                    Check::new("sigma induces M/(n ker f) = X/Z", r.induces_isomorphism, ""),
                    Check::new("projection after section = id", r.projection_section_identity, ""),
                    Check::new("Z has a complement", r.splits_abstractly, ""),
                ],
            })
        }
    }
}

pub fn descent(job: DescentJob) -> Result<Outcome, Failure> {
    match (&job.torsor, &job.covering) {
        (Some(t), None) => torsor(t),
        (None, Some(c)) => glue(&job, c),
        _ => Err(Failure::input("a descent job has exactly one of \"covering\" and \"torsor\"")),
    }
}

fn glue(job: &DescentJob, cdoc: &CoveringDoc) -> Result<Outcome, Failure> {
    let (c, index) = cdoc.build()?;
    let f = field(*required(&job.zeta_order, "zeta_order")?);
    let values = required(&job.values, "values")?
        .iter()
        .map(|v| v.iter().map(|x| doc::cyclo(&f, x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != c.total_size() {
        return Err(Failure::input(format!("expected {} values, got {}", c.total_size(), values.len())));
    }
    let lookup = |l: &str| {
        index
            .get(l)
            .copied()
            .ok_or_else(|| Failure::input(format!("transition names the unknown point {l:?}")))
    };
    let mut transitions = BTreeMap::new();
    for t in required(&job.transitions, "transitions")? {
        let key = (lookup(&t.from)?, lookup(&t.to)?);
        if transitions.insert(key, doc::cyclo_matrix(&f, &t.matrix)?).is_some() {
            return Err(Failure::input(format!("transition ({}, {}) given twice", t.from, t.to)));
        }
    }
    for (s, v) in values.iter().enumerate() {
        transitions.entry((s, s)).or_insert_with(|| CycloMatrix::identity(&f, v.len()));
    }
    let d = DescentDatum {
        field: f.clone(),
        values,
        transitions,
    };
    d.check_shape(&c)?;
    let label = |i: usize| cdoc.total[i].clone();
    if let Some((a, b, t)) = cocycle_witness(&c, &d) {
        return Err(Failure::Rejected(
            format!(
                "cocycle condition fails on the triple ({}, {}, {})",
                label(a),
                label(b),
                label(t)
            ),
            json!({"witness": [label(a), label(b), label(t)]}),
        ));
    }
    let glued = solve_descent(&c, &d)?;
    let carried = (0..c.total_size()).all(|s| {
        let b = c.image(s);
        d.transition(glued.chosen[b], s).apply(&glued.values[b]) == d.values[s]
    });
    let pulled = pullback(&c, &f, &glued.values)?;
    let faithful = verify_full_faithfulness(&c, &d, &pulled)?;
    let values: Vec<Value> = glued
        .values
        .iter()
        .map(|v| Value::Array(v.iter().map(encode::cyclo).collect()))
        .collect();
    let chosen: Vec<String> = glued.chosen.iter().map(|&s| label(s)).collect();
    Ok(Outcome {
        result: json!({
            "mode": "glue",
            "zeta_order": f.order(),
            "base": cdoc.base,
            "glued": values,
            "chosen": chosen,
        }),
        checks: vec![
            Check::new("f_bc f_ab = f_ac on every triple", true, format!("{} triples", c.triples().count())),
            Check::new("the glued value is carried to every point", carried, ""),
            Check::new(
                "morphisms of the glued objects = morphisms of descent data",
                faithful.holds(),
                format!("dimension {} vs {}", faithful.glued_dimension, faithful.descent_dimension),
            ),
        ],
    })
}

fn torsor(t: &TorsorDoc) -> Result<Outcome, Failure> {
    if t.copies == 0 {
        return Err(Failure::input("at least one orbit is required"));
    }
    let q = Group::new(t.q.clone())?;
    let ext = CentralExtension::new(BilinearForm::new(q.clone(), q.clone(), t.cocycle.0.clone())?)?;
    let set = QSet::free(&q, t.copies);
    let witness = torsor_lift_obstruction(&ext, &set)?;
    let splits = extension_splits(&ext)?;
    let mut checks = vec![Check::new(
        "a lifting exists <=> the extension splits",
        witness.is_some() == splits,
        format!("lift = {}, splits = {splits}", witness.is_some()),
    )];
    if let Some(w) = &witness {
        checks.push(Check::new(
            "lambda(x, u + u') = lambda(x, u) + lambda(x u, u') + c(u, u')",
            is_lifting(&ext, &set, w),
            "",
        ));
    }
    let lambda = witness.as_ref().map(|w| {
        w.lambda
            .iter()
            .map(|row| Value::Array(row.iter().map(|&v| encode::qz(v)).collect()))
            .collect::<Vec<_>>()
    });
    Ok(Outcome {
        result: json!({
            "mode": "torsor",
            "lifts": witness.is_some(),
            "splits": splits,
            "lambda": lambda,
        }),
        checks,
    })
}
