use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{Check, Context, Outcome};
use crate::decomp::clebsch_gordan_degrees;
use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::groups::GroupLabel;
use crate::invariants::{generation_check_with, pairing_check, syzygy_check_with, transvectant};
use crate::linalg::rank_of_stack;
use crate::reps::{averaged_trace_dimension, BinaryForm};

use GroupLabel::{I, S, T};

/// The five tensor products and the group whose invariants they carry.
pub const TENSOR_PAIRS: [(usize, usize, GroupLabel); 5] =
    [(9, 13, S), (13, 21, I), (7, 7, T), (7, 9, T), (9, 9, T)];

pub const FIXED_SPACE_TABLE: [(GroupLabel, usize, usize); 11] = [
    (T, 7, 1),
    (T, 9, 1),
    (T, 13, 2),
    (S, 9, 1),
    (S, 13, 1),
    (S, 19, 1),
    (S, 37, 2),
    (I, 13, 1),
    (I, 21, 1),
    (I, 31, 1),
    (T, 3, 0),
];

pub const PAIRINGS: [(GroupLabel, usize); 8] = [
    (T, 7),
    (T, 9),
    (S, 9),
    (S, 13),
    (S, 19),
    (I, 13),
    (I, 21),
    (I, 31),
];

/// Same line: both zero, or both nonzero and proportional.
pub fn same_line(field: PrimeField, a: &[u32], b: &[u32]) -> Result<bool> {
    let za = a.iter().all(|&c| c == 0);
    let zb = b.iter().all(|&c| c == 0);
    if za || zb {
        return Ok(za && zb);
    }
    Ok(rank_of_stack(field, &[a.to_vec(), b.to_vec()])? == 1)
}

fn the_invariant(ctx: &Context, label: GroupLabel, m: usize) -> Result<BinaryForm> {
    let space = ctx.fixed_space(label, m)?;
    if space.dim() != 1 {
        return Err(Error::FixedSpaceDimension {
            group: label,
            dim: m,
            found: space.dim(),
            expected: 1,
        });
    }
    Ok(BinaryForm::new(
        ctx.field(),
        space.basis_vectors().remove(0),
    ))
}

/// `r_k(x ⊗ y)` computed twice: through the decomposition and as a transvectant.
#[derive(Clone, Debug)]
pub struct LineEval {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub component: BinaryForm,
    pub transvectant: BinaryForm,
    pub agree: bool,
}

impl LineEval {
    fn to_json(&self) -> Value {
        json!({
            "pair": [self.m, self.n],
            "k": self.k,
            "r": self.r,
            "component": self.component.coeffs(),
            "transvectant": self.transvectant.coeffs(),
            "oracle_agrees": self.agree,
        })
    }
}

pub fn component_line(ctx: &Context, k: usize, x: &BinaryForm, y: &BinaryForm) -> Result<LineEval> {
    let (m, n) = (x.degree() + 1, y.degree() + 1);
    let dec = ctx.decomposition(m, n)?;
    let v = dec.module().pure_tensor(x, y)?;
    let component = dec.component_as_form(k, &v)?;
    let r = (m + n - 1 - k) / 2;
    let t = transvectant(x, y, r)?;
    let agree = same_line(ctx.field(), component.coeffs(), t.coeffs())?;
    Ok(LineEval {
        m,
        n,
        k,
        r,
        component,
        transvectant: t,
        agree,
    })
}

struct GroupCertificate(GroupLabel);

impl Check for GroupCertificate {
    fn id(&self) -> String {
        format!("group.{}.certificate", self.0)
    }

    fn claim(&self) -> String {
        format!(
            "{} has order {}, is closed under products and inverses, and every element has determinant 1",
            self.0,
            self.0.expected_order()
        )
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let g = ctx.group(self.0)?;
        let closed = g.is_closed();
        let inverses = g.is_inverse_closed();
        let det_one = g.all_det_one();
        let order_ok = g.order() == self.0.expected_order();
        Ok(Outcome::new(
            order_ok && closed && inverses && det_one,
            json!({
                "order": g.order(),
                "closed": closed,
                "inverse_closed": inverses,
                "det_one": det_one,
                "contains_minus_identity": g.contains_negative_identity(),
                "generators": g.generators().iter().map(|e| e.to_json_value()).collect::<Vec<_>>(),
            }),
        ))
    }
}

struct TetrahedralTraces;

impl Check for TetrahedralTraces {
    fn id(&self) -> String {
        "group.T.traces".into()
    }

    fn claim(&self) -> String {
        "traces on T: 2 once, -2 once, 1 and -1 eight times each, 0 six times".into()
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let g = ctx.group(T)?;
        let field = ctx.field();
        let mut found: BTreeMap<String, usize> = BTreeMap::new();
        for (t, count) in g.trace_multiset() {
            found.insert(t.to_string(), count);
        }
        let expected: BTreeMap<String, usize> = [(2i64, 1), (-2, 1), (1, 8), (-1, 8), (0, 6)]
            .into_iter()
            .map(|(t, c)| (field.signed(field.reduce(t)).to_string(), c))
            .collect();
        Ok(Outcome::new(found == expected, json!({ "traces": found })))
    }
}

struct Containment;

impl Check for Containment {
    fn id(&self) -> String {
        "group.containment".into()
    }

    fn claim(&self) -> String {
        "T is a normal subgroup of S".into()
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let t = ctx.group(T)?;
        let s = ctx.group(S)?;
        let sub = t.is_subgroup_of(&s);
        let normal = sub && t.is_normal_in(&s);
        Ok(Outcome::new(
            sub && normal,
            json!({ "subgroup": sub, "normal": normal }),
        ))
    }
}

struct FieldRoots;

impl Check for FieldRoots {
    fn id(&self) -> String {
        "field.roots".into()
    }

    fn claim(&self) -> String {
        "F_p contains sqrt(-1), sqrt(5) and primitive 5th roots of unity, and T, S, I all construct"
            .into()
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let f = ctx.field();
        let p = f.modulus();
        let sqrt_m1 = f.principal_sqrt(p - 1);
        let sqrt5 = f.principal_sqrt(5 % p);
        let fifth = if (p - 1) % 5 == 0 {
            let z = f.root_of_unity(5)?.value();
            (z != 1 && f.pow(z, 5) == 1).then_some(z)
        } else {
            None
        };
        let mut built = BTreeMap::new();
        for label in GroupLabel::ALL {
            built.insert(
                label.to_string(),
                ctx.group(label)
                    .map(|g| g.order())
                    .map_err(|e| e.to_string()),
            );
        }
        let all_built = built.values().all(|b| b.is_ok());
        let sqrt2 = f.principal_sqrt(2 % p);
        Ok(Outcome::new(
            sqrt_m1.is_some() && sqrt5.is_some() && fifth.is_some() && all_built,
            json!({
                "sqrt_minus_one": sqrt_m1,
                "sqrt_5": sqrt5,
                "sqrt_2": sqrt2,
                "octahedral_model": if sqrt2.is_some() { "F_p" } else { "F_p(sqrt2)" },
                "primitive_fifth_root": fifth,
                "primitive_root": f.primitive_root().value(),
                "groups": built,
            }),
        ))
    }
}

struct Decompose {
    m: usize,
    n: usize,
    group: GroupLabel,
}

impl Check for Decompose {
    fn id(&self) -> String {
        format!("decomp.{}x{}", self.m, self.n)
    }

    fn claim(&self) -> String {
        let ks = clebsch_gordan_degrees(self.m, self.n);
        format!(
            "W{} ⊗ W{} = W{} ⊕ ... ⊕ W{}, preserved by {}",
            self.m,
            self.n,
            ks.last().unwrap(),
            ks[0],
            self.group
        )
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let dec = ctx.decomposition(self.m, self.n)?;
        let degrees = dec.degrees();
        let expected = clebsch_gordan_degrees(self.m, self.n);
        let total: usize = dec.summands().iter().map(|s| s.image().dim()).sum();
        let dims_ok = dec.summands().iter().all(|s| s.image().dim() == s.degree());

        // P_j restricted to image_i is the identity for i = j and zero otherwise
        let mut projections_ok = true;
        'outer: for si in dec.summands() {
            for v in si.image().basis_vectors() {
                for sj in dec.summands() {
                    let w = sj.projection().mul_vec(&v)?;
                    let ok = if sj.degree() == si.degree() {
                        w == v
                    } else {
                        w.iter().all(|&c| c == 0)
                    };
                    if !ok {
                        projections_ok = false;
                        break 'outer;
                    }
                }
            }
        }

        let group = ctx.group(self.group)?;
        let module = dec.module();
        let mut equivariant = true;
        for g in group.generators() {
            equivariant &= dec.is_stable_under(&module.action_matrix(g)?)?;
        }
        Ok(Outcome::new(
            degrees == expected
                && total == self.m * self.n
                && dims_ok
                && projections_ok
                && equivariant,
            json!({
                "degrees": degrees,
                "expected": expected,
                "total_dim": total,
                "projections_complete_and_orthogonal": projections_ok,
                "stable_under_generators": equivariant,
            }),
        ))
    }
}

struct NonvanishingLines {
    group: GroupLabel,
    k: usize,
    pairs: Vec<(usize, usize)>,
}

impl Check for NonvanishingLines {
    fn id(&self) -> String {
        match self.pairs.as_slice() {
            [_] => format!("nonvanishing.{}.{}", self.group, self.k),
            [(m, n), _] => format!("distinct.{}.{m}x{n}", self.group),
            _ => unreachable!("one or two pairs"),
        }
    }

    fn claim(&self) -> String {
        let g = self.group;
        let k = self.k;
        let line = |(m, n): (usize, usize)| format!("r{k}(W{m}^{g} ⊗ W{n}^{g})");
        match self.pairs.as_slice() {
            [one] => format!("{} ≠ 0", line(*one)),
            [a, b] => format!(
                "{} and {} are distinct lines in W{k}^{g}",
                line(*a),
                line(*b)
            ),
            _ => unreachable!("one or two pairs"),
        }
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let field = ctx.field();
        let mut evals = Vec::new();
        for &(m, n) in &self.pairs {
            let x = the_invariant(ctx, self.group, m)?;
            let y = the_invariant(ctx, self.group, n)?;
            evals.push(component_line(ctx, self.k, &x, &y)?);
        }
        let agree = evals.iter().all(|e| e.agree);
        let nonzero = evals.iter().all(|e| !e.component.is_zero());
        let target = ctx.fixed_space(self.group, self.k)?;
        let mut invariant = true;
        for e in &evals {
            invariant &= target.contains(e.component.coeffs())?;
        }
        let lines: Vec<Vec<u32>> = evals
            .iter()
            .map(|e| e.component.coeffs().to_vec())
            .collect();
        let rank = rank_of_stack(field, &lines)?;
        let oracle_rank = rank_of_stack(
            field,
            &evals
                .iter()
                .map(|e| e.transvectant.coeffs().to_vec())
                .collect::<Vec<_>>(),
        )?;
        let pass = agree && nonzero && invariant && rank == evals.len() && oracle_rank == rank;
        Ok(Outcome::new(
            pass,
            json!({
                "lines": evals.iter().map(LineEval::to_json).collect::<Vec<_>>(),
                "rank": rank,
                "oracle_rank": oracle_rank,
                "target_dim": target.dim(),
                "in_fixed_space": invariant,
                "oracle_agrees": agree,
            }),
        ))
    }
}

struct FixedSpaceTable;

impl Check for FixedSpaceTable {
    fn id(&self) -> String {
        "fixspace.table".into()
    }

    fn claim(&self) -> String {
        "dim W7^T = dim W9^T = 1, dim W13^T = 2, dim W3^T = 0; dim W9^S = dim W13^S = dim W19^S = 1, dim W37^S = 2; dim W13^I = dim W21^I = dim W31^I = 1".into()
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let mut rows = Vec::new();
        let mut pass = true;
        for (label, m, expected) in FIXED_SPACE_TABLE {
            let dim = ctx.fixed_space(label, m)?.dim();
            let averaged = averaged_trace_dimension(&*ctx.group(label)?, m)? as usize;
            pass &= dim == expected && averaged == expected;
            rows.push(json!({
                "group": label,
                "m": m,
                "dim": dim,
                "averaged_trace": averaged,
                "expected": expected,
            }));
        }
        Ok(Outcome::new(pass, Value::Array(rows)))
    }
}

fn invariant_names(label: GroupLabel) -> [&'static str; 3] {
    match label {
        T => ["f6", "f8", "f12"],
        S => ["g8", "g12", "g18"],
        I => ["h12", "h20", "h30"],
    }
}

struct Syzygy(GroupLabel);

impl Check for Syzygy {
    fn id(&self) -> String {
        format!("syzygy.{}", self.0)
    }

    fn claim(&self) -> String {
        let [a, b, c] = invariant_names(self.0);
        let terms = match self.0 {
            T | I => {
                let e = if self.0 == T { 4 } else { 5 };
                format!("{a}^{e}, {b}^3, {c}^2")
            }
            S => format!("{c}^2, {a}^3 {b}, {b}^3"),
        };
        format!("{terms} are pairwise independent and satisfy one relation with all coefficients nonzero")
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let set = ctx.fundamentals(self.0)?;
        let report = syzygy_check_with(&set, ctx.field())?;
        Ok(Outcome::new(
            report.pass(),
            serde_json::to_value(&report).map_err(|e| Error::Json(e.to_string()))?,
        ))
    }
}

struct Generation(GroupLabel, usize);

impl Check for Generation {
    fn id(&self) -> String {
        format!("generation.{}", self.0)
    }

    fn claim(&self) -> String {
        let [a, b, c] = invariant_names(self.0);
        format!(
            "monomials in {a}, {b}, {c} span every degree-d invariant space of {}, d <= {}",
            self.0, self.1
        )
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let group = ctx.group(self.0)?;
        let set = ctx.fundamentals(self.0)?;
        let report = generation_check_with(&group, &set, self.1)?;
        let dims: Vec<usize> = report.rows.iter().map(|r| r.invariant_dim).collect();
        Ok(Outcome::new(
            report.pass(),
            json!({ "dmax": report.dmax, "dims": dims, "deficits": report.deficits }),
        ))
    }
}

struct Pairing(GroupLabel, usize);

impl Check for Pairing {
    fn id(&self) -> String {
        format!("pairing.{}.{}", self.0, self.1)
    }

    fn claim(&self) -> String {
        format!(
            "(x, x)^{} ≠ 0 for x spanning W{}^{}",
            self.1 - 1,
            self.1,
            self.0
        )
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let report = pairing_check(&*ctx.group(self.0)?, self.1)?;
        Ok(Outcome::new(
            report.pass(),
            json!({ "value": report.value, "x": report.invariant }),
        ))
    }
}

struct TransvectantOracle;

impl Check for TransvectantOracle {
    fn id(&self) -> String {
        "oracle.transvectant".into()
    }

    fn claim(&self) -> String {
        "r_k(f ⊗ g) is a fixed nonzero multiple of (f, g)^((m+n-1-k)/2) for random f, g".into()
    }

    fn run(&self, ctx: &Context) -> Result<Outcome> {
        let field = ctx.field();
        let p = field.modulus();
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed());
        // ratio component / transvectant per (m, n, k)
        let mut scalars: HashMap<(usize, usize, usize), u32> = HashMap::new();
        let mut comparisons = 0usize;
        let mut failures = Vec::new();
        for i in 0..ctx.oracle_samples() {
            let (m, n) = if i < 2 * TENSOR_PAIRS.len() {
                let (m, n, _) = TENSOR_PAIRS[i % TENSOR_PAIRS.len()];
                (m, n)
            } else {
                (rng.gen_range(1..=13), rng.gen_range(1..=13))
            };
            let f = BinaryForm::new(field, (0..m).map(|_| rng.gen_range(0..p)).collect());
            let g = BinaryForm::new(field, (0..n).map(|_| rng.gen_range(0..p)).collect());
            for k in clebsch_gordan_degrees(m, n) {
                comparisons += 1;
                let e = component_line(ctx, k, &f, &g)?;
                if !e.agree {
                    failures.push(
                        json!({ "sample": i, "pair": [m, n], "k": k, "reason": "lines differ" }),
                    );
                    continue;
                }
                if let Some(idx) = e.transvectant.coeffs().iter().position(|&c| c != 0) {
                    let ratio = field.mul(
                        e.component.coeffs()[idx],
                        field.inv(e.transvectant.coeffs()[idx])?,
                    );
                    let prev = *scalars.entry((m, n, k)).or_insert(ratio);
                    if prev != ratio {
                        failures.push(json!({ "sample": i, "pair": [m, n], "k": k, "reason": "scalar changed" }));
                    }
                }
            }
        }
        failures.truncate(10);
        Ok(Outcome::new(
            failures.is_empty(),
            json!({
                "seed": ctx.seed(),
                "samples": ctx.oracle_samples(),
                "comparisons": comparisons,
                "components_seen": scalars.len(),
                "failures": failures,
            }),
        ))
    }
}

/// Every check, in report order.
pub fn standard_checks() -> Vec<Box<dyn Check>> {
    let mut v: Vec<Box<dyn Check>> = Vec::new();
    for label in GroupLabel::ALL {
        v.push(Box::new(GroupCertificate(label)));
    }
    v.push(Box::new(TetrahedralTraces));
    v.push(Box::new(Containment));
    v.push(Box::new(FieldRoots));
    for (m, n, group) in TENSOR_PAIRS {
        v.push(Box::new(Decompose { m, n, group }));
    }
    let lines = [
        (S, 19, vec![(9, 13)]),
        (I, 31, vec![(13, 21)]),
        (T, 13, vec![(7, 7), (7, 9)]),
        (T, 13, vec![(9, 9), (7, 9)]),
    ];
    for (group, k, pairs) in lines {
        v.push(Box::new(NonvanishingLines { group, k, pairs }));
    }
    v.push(Box::new(FixedSpaceTable));
    for label in GroupLabel::ALL {
        v.push(Box::new(Syzygy(label)));
    }
    for (label, dmax) in [(T, 40), (S, 40), (I, 60)] {
        v.push(Box::new(Generation(label, dmax)));
    }
    for (label, k) in PAIRINGS {
        v.push(Box::new(Pairing(label, k)));
    }
    v.push(Box::new(TransvectantOracle));
    v
}

/// Observations recorded alongside the checks.
pub fn report_notes(ctx: &Context) -> Vec<String> {
    let note = || -> Result<String> {
        let x = the_invariant(ctx, T, 7)?;
        let line = component_line(ctx, 13, &x, &x)?;
        let image = usize::from(!line.component.is_zero());
        let full = ctx.fixed_space(T, 13)?.dim();
        Ok(format!(
            "r13(W7^T ⊗ W7^T) has dimension {image} while dim W13^T = {full}; \
             the degree-12 invariants are covered by generation.T instead"
        ))
    };
    match note() {
        Ok(s) => vec![s],
        Err(e) => vec![format!("degree-13 image comparison unavailable: {e}")],
    }
}
