//! The seeded self-test corpus, run through the library entry points.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};
use symplectic_core::corpus::{self, group, NamedSpace};
use symplectic_core::cyclo::{field, Cyclo};
use symplectic_core::descent::{
    cocycle_witness, pullback, random_covering, random_datum, random_vector, solve_descent, torsor_lift_obstruction,
    verify_full_faithfulness, QSet,
};
use symplectic_core::finabel::{all_homs, enumerate_subgroups, is_direct_summand, Element, Group, Subgroup};
use symplectic_core::forms::{enumerate_lagrangians, find_transverse_lagrangian, BilinearForm, SymplecticSpace, QZ};
use symplectic_core::heisenberg::{
    heisenberg_mul, is_isomorphism_on_table, splitting_of_extension, twist_polarization, CentralExtension,
    HeisenbergElement,
};
use symplectic_core::intertwine::{compose_scalar, fm_transform, match_pair, standard_axes, verify_intertwiner};
use symplectic_core::quasisplit::{
    check_normal_form, graph_isotropy, isotropize_section, preserves_alternating, search_splitting_instances, shear,
    transverse_normal_form, verify_splitting_example,
};
use symplectic_core::schrodinger::{act, LagrangianPair, ModelSpace};

use crate::commands::{Check, Outcome};
use crate::failure::Failure;

type Step = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: symplectic_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn four_bases() -> Vec<Group> {
    vec![group(&[2]), group(&[3]), group(&[4]), group(&[2, 2])]
}

fn lagrangian_counts() -> Step {
    for (b, expected) in [(group(&[2]), 3), (group(&[3]), 4), (group(&[4]), 7)] {
        let space = SymplecticSpace::standard(&b);
        let k = space.carrier();
        let found = ok(enumerate_lagrangians(&space, k.order()))?;
        let mut filtered = Vec::new();
        for s in ok(enumerate_subgroups(k, k.order()))? {
            if ok(space.is_lagrangian(&s))? {
                filtered.push(s);
            }
        }
        ensure!(found.len() == expected, "{}: {} lagrangians", corpus::group_name(&b), found.len());
        ensure!(found == filtered, "{}: enumeration and subgroup filter differ", corpus::group_name(&b));
    }
    Ok("3, 4 and 7 lagrangians".into())
}

fn model_dimensions(max_carrier: u64, seed: u64) -> Step {
    let mut rng = corpus::rng(seed);
    let mut count = 0;
    for NamedSpace { name, space } in corpus::spaces(max_carrier, seed) {
        let order = space.carrier().order();
        for pair in ok(corpus::lagrangian_pairs(&space, &mut rng))? {
            let ms = ok(ModelSpace::new(&pair))?;
            let d = ms.dimension() as u64;
            ensure!(d * d == order, "{name}: dimension {d}");
            ensure!(ms.constraint_is_consistent(), "{name}: inconsistent constraint");
            count += 1;
        }
    }
    Ok(format!("{count} pairs"))
}

fn heisenberg_relations(max_carrier: u64, seed: u64) -> Step {
    let mut rng = corpus::rng(seed.wrapping_add(3));
    let mut count = 0;
    for NamedSpace { name, space } in corpus::spaces(max_carrier, seed) {
        let k = space.carrier().clone();
        let pairs = ok(corpus::lagrangian_pairs(&space, &mut rng))?;
        for pair in pairs.choose_multiple(&mut rng, 3) {
            let ms = ok(ModelSpace::new(pair))?;
            let gens: Vec<HeisenbergElement> = (0..k.rank()).map(|i| HeisenbergElement::point(k.generator(i))).collect();
            for a in &gens {
                for b in &gens {
                    let lhs = ok(act(&ms, a))?.matrix.mul(&ok(act(&ms, b))?.matrix);
                    ensure!(lhs == ok(act(&ms, &heisenberg_mul(&space, a, b)))?.matrix, "{name}: composition law fails");
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} generator products"))
}

fn intertwiners(max_carrier: u64, seed: u64) -> Step {
    let mut rng = corpus::rng(seed.wrapping_add(4));
    let mut count = 0;
    for NamedSpace { name, space } in corpus::spaces(max_carrier, seed) {
        for (p1, p2) in ok(corpus::intertwiner_pairs(&space, 9, 6, &mut rng))? {
            let matched = ok(match_pair(&p1, &p2))?;
            let report = ok(verify_intertwiner(&p1, &matched.pair))?;
            ensure!(report.all_pass(), "{name}: intertwiner checks fail");
            count += 1;
        }
    }
    Ok(format!("{count} ordered pairs"))
}

fn fourier() -> Step {
    let mut scalars = Vec::new();
    for b in four_bases() {
        ok(fm_transform(&b))?;
        let space = SymplecticSpace::standard(&b);
        let (y, z) = ok(standard_axes(&space))?;
        let c = ok(compose_scalar(
            &ok(LagrangianPair::canonical(&space, &y))?,
            &ok(LagrangianPair::canonical(&space, &z))?,
        ))?;
        let expected = Cyclo::from_int(c.field(), b.order() as i64);
        ensure!(c == expected, "{}: c = {c}", corpus::group_name(&b));
        scalars.push(c.to_string());
    }
    Ok(format!("c = {}", scalars.join(", ")))
}

fn graph_criterion() -> Step {
    let mut count = 0;
    for b in four_bases() {
        for phi in all_homs(&b, &b.dual()) {
            let (isotropic, skew) = ok(graph_isotropy(&b, &phi))?;
            ensure!(isotropic == skew, "{}: disagreement", corpus::group_name(&b));
            count += 1;
        }
    }
    Ok(format!("{count} homomorphisms"))
}

fn shears_and_normal_forms(seed: u64) -> Step {
    let mut shears = 0;
    for b in four_bases() {
        for f in all_homs(&b, &b.dual()) {
            if f.dual() != f {
                ensure!(shear(&b, &f).is_err(), "shear accepted a non-symmetric map");
                continue;
            }
            let sigma = ok(shear(&b, &f))?;
            ensure!(preserves_alternating(&SymplecticSpace::standard(&b), &sigma), "shear does not preserve e");
            shears += 1;
        }
    }
    let mut forms = 0;
    for NamedSpace { name, space } in corpus::spaces(16, seed) {
        let lags = ok(enumerate_lagrangians(&space, space.carrier().order()))?;
        for y in &lags {
            for z in &lags {
                if ok(y.intersection(z))?.order() != 1 {
                    continue;
                }
                let nf = ok(transverse_normal_form(&space, y, z))?;
                ensure!(check_normal_form(&space, y, z, &nf).all(), "{name}: normal form checks fail");
                forms += 1;
            }
        }
    }
    Ok(format!("{shears} shears, {forms} normal forms"))
}

fn isotropization(seed: u64) -> Step {
    let mut rng = corpus::rng(seed.wrapping_add(8));
    for _ in 0..100 {
        let inst = ok(corpus::random_section_instance(16, &mut rng))?;
        ok(isotropize_section(&inst.data, &inst.psi))?;
    }
    Ok("100 instances".into())
}

fn splitting() -> Step {
    let groups: Vec<Group> = corpus::groups_up_to_16().into_iter().filter(|g| g.order() <= 9).collect();
    let found = search_splitting_instances(&groups, 4, 2);
    let nontrivial = found.iter().filter(|i| i.is_nontrivial()).count();
    ensure!(nontrivial >= 5, "only {nontrivial} nontrivial instances");
    for i in &found {
        ensure!(ok(verify_splitting_example(&i.m_group, &i.f, i.n, i.m, i.k))?.success(), "{i:?} fails");
    }
    Ok(format!("{} instances, {nontrivial} nontrivial", found.len()))
}

fn random_form(q: &Group, rng: &mut impl Rng) -> BilinearForm {
    let d = q.factors();
    let gram = d
        .iter()
        .map(|&a| {
            d.iter()
                .map(|&b| {
                    let g = num_integer::gcd(a, b);
                    QZ::new(rng.gen_range(0..g), g)
                })
                .collect()
        })
        .collect();
    BilinearForm::new(q.clone(), q.clone(), gram).expect("entries have the gcd as denominator")
}

fn descent(seed: u64) -> Step {
    let mut rng = corpus::rng(seed.wrapping_add(10));
    let f = field(4);
    for trial in 0..50 {
        let c = random_covering(4, 3, &mut rng);
        let base: Vec<Vec<Cyclo>> = (0..c.base_size())
            .map(|_| {
                let n = rng.gen_range(1..=3);
                random_vector(&f, n, &mut rng)
            })
            .collect();
        let pulled = ok(pullback(&c, &f, &base))?;
        ensure!(ok(solve_descent(&c, &pulled))?.values == base, "covering {trial}: round trip differs");
        let d = random_datum(&c, &f, &base, &mut rng);
        ok(solve_descent(&c, &d))?;
        ensure!(ok(verify_full_faithfulness(&c, &d, &pulled))?.holds(), "covering {trial}: not faithful");
        let pairs: Vec<(usize, usize)> = c.pairs().collect();
        let &(s, t) = pairs.choose(&mut rng).expect("pairs exist");
        let mut bad = d.clone();
        let broken = bad.transition(s, t).scale(&Cyclo::from_int(&f, 2));
        bad.transitions.insert((s, t), broken);
        ensure!(cocycle_witness(&c, &bad).is_some(), "covering {trial}: corruption not detected");
        ensure!(solve_descent(&c, &bad).is_err(), "covering {trial}: corruption accepted");
    }
    let mut extensions = 0;
    for q in corpus::groups_up_to_16() {
        let regular = QSet::regular(&q);
        for _ in 0..16 {
            let ext = ok(CentralExtension::new(random_form(&q, &mut rng)))?;
            let lifts = ok(torsor_lift_obstruction(&ext, &regular))?.is_some();
            let splits = ok(splitting_of_extension(&ext, &Subgroup::whole(&q)))?.is_some();
            ensure!(lifts == splits, "{}: obstruction and splitting disagree", corpus::group_name(&q));
            extensions += 1;
        }
    }
    Ok(format!("50 coverings, {extensions} extensions"))
}

fn twists(seed: u64) -> Step {
    let mut rng = corpus::rng(seed.wrapping_add(11));
    let mut tables = 0;
    for NamedSpace { name, space } in corpus::spaces(16, seed) {
        let k = space.carrier().clone();
        let q = ok(corpus::random_quadratic(&k, &mut rng))?;
        let (twisted, map) = ok(twist_polarization(&space, &q))?;
        let h = CentralExtension::heisenberg(&space);
        let h2 = CentralExtension::heisenberg(&twisted);
        let n = num_integer::lcm(2 * k.exponent().max(1), q.modulus());
        ensure!(is_isomorphism_on_table(&h2, &h, n, |x| map.backward(x)), "{name}: backward map fails");
        ensure!(is_isomorphism_on_table(&h, &h2, n, |x| map.forward(x)), "{name}: forward map fails");
        tables += 2;
    }
    Ok(format!("{tables} multiplication tables"))
}

fn negative_control() -> Step {
    let space = SymplecticSpace::standard(&group(&[4]));
    let k = space.carrier().clone();
    let y = ok(Subgroup::generated(&k, &[Element::new(vec![2, 0]), Element::new(vec![0, 2])]))?;
    ensure!(ok(space.is_lagrangian(&y))?, "2-torsion is not lagrangian");
    ensure!(ok(is_direct_summand(&k, &y))?.is_none(), "a complement was found");
    ensure!(ok(find_transverse_lagrangian(&space, &y, &y, k.order()))?.is_none(), "a transverse lagrangian was found");
    Ok("no complement, no transverse lagrangian".into())
}

pub fn run(seed: u64, bound: u64) -> Result<Outcome, Failure> {
    let cap = |n: u64| n.min(bound);
    let steps: Vec<(&str, Box<dyn Fn() -> Step>)> = vec![
        ("lagrangian enumeration", Box::new(lagrangian_counts)),
        ("model dimension", Box::new(move || model_dimensions(cap(256), seed))),
        ("heisenberg relations", Box::new(move || heisenberg_relations(cap(64), seed))),
        ("intertwiner suite", Box::new(move || intertwiners(cap(64), seed))),
        ("fourier specialization", Box::new(fourier)),
        ("graph isotropy vs skewness", Box::new(graph_criterion)),
        ("shear and normal form", Box::new(move || shears_and_normal_forms(seed))),
        ("section isotropization", Box::new(move || isotropization(seed))),
        ("splitting example", Box::new(splitting)),
        ("descent and torsor lifting", Box::new(move || descent(seed))),
        ("twist equivalence", Box::new(move || twists(seed))),
        ("negative control", Box::new(negative_control)),
    ];
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (name, step) in steps {
        let start = Instant::now();
        let outcome = step();
        let millis = start.elapsed().as_millis();
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        rows.push(json!({"name": name, "passed": passed, "detail": detail}));
        checks.push(Check::new(name, passed, format!("{detail} [{millis} ms]")));
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let result: Value = json!({
        "seed": seed,
        "bound": bound,
        "checks": rows,
        "passed": passed,
        "total": checks.len(),
    });
    Ok(Outcome { result, checks })
}
