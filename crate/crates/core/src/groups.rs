//! The binary polyhedral groups T (order 24), S (order 48) and I (order 120)
//! as enumerated subgroups of SL(2) over `F_p`.
//!
//! Each group comes from the unit-quaternion model through
//! `a + b i + c j + d k -> [[a + b√-1, c + d√-1], [-c + d√-1, a - b√-1]]`.
//! S needs `1/√2`. When 2 is not a square mod p, S is realized inside
//! SL(2, F_p(√2)): an element is stored as an `F_p` matrix `M` with a radicand
//! `r`, meaning `M / √r`. Such an element acts on W_m over `F_p` whenever m is
//! odd.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, PrimeField};
use crate::linalg::Matrix;

pub const DEFAULT_CLOSURE_CAP: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GroupLabel {
    T,
    S,
    I,
}

impl GroupLabel {
    pub const ALL: [GroupLabel; 3] = [GroupLabel::T, GroupLabel::S, GroupLabel::I];

    pub fn expected_order(self) -> usize {
        match self {
            GroupLabel::T => 24,
            GroupLabel::S => 48,
            GroupLabel::I => 120,
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupLabel::T => "T",
            GroupLabel::S => "S",
            GroupLabel::I => "I",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(GroupLabel::T),
            "S" | "s" => Ok(GroupLabel::S),
            "I" | "i" => Ok(GroupLabel::I),
            other => Err(Error::UnknownGroup(other.to_string())),
        }
    }
}

/// An element `M / √radicand` of SL(2); `radicand == 1` for ordinary matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    field: PrimeField,
    m: [u32; 4],
    radicand: u32,
}

/// A trace value `coeff * √radicand`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceValue {
    pub coeff: FieldElement,
    pub radicand: u32,
}

impl fmt::Display for TraceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.coeff.field();
        let c = field.signed(self.coeff.value());
        if self.radicand == 1 {
            write!(f, "{c}")
        } else {
            write!(f, "{c}*sqrt{}", self.radicand)
        }
    }
}

impl GroupElement {
    /// An ordinary matrix `[[a, b], [c, d]]`.
    pub fn new(field: PrimeField, a: u32, b: u32, c: u32, d: u32) -> Self {
        let p = field.modulus();
        GroupElement {
            field,
            m: [a % p, b % p, c % p, d % p],
            radicand: 1,
        }
    }

    /// The element `M / √radicand`.
    pub fn with_radicand(field: PrimeField, m: [u32; 4], radicand: u32) -> Self {
        let p = field.modulus();
        GroupElement {
            field,
            m: m.map(|x| x % p),
            radicand: radicand % p,
        }
    }

    pub fn identity(field: PrimeField) -> Self {
        Self::new(field, 1, 0, 0, 1)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Entries `[a, b, c, d]` of the `F_p` part `M`.
    pub fn entries(&self) -> [u32; 4] {
        self.m
    }

    pub fn radicand(&self) -> u32 {
        self.radicand
    }

    pub fn is_twisted(&self) -> bool {
        self.radicand != 1
    }

    /// The `F_p` part `M` as a 2x2 matrix.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_entries(self.field, 2, 2, self.m.to_vec()).expect("2x2")
    }

    fn mat_mul(&self, other: &GroupElement) -> [u32; 4] {
        let f = self.field;
        let [a, b, c, d] = self.m;
        let [e, g, h, k] = other.m;
        [
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ]
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let f = self.field;
        let m = self.mat_mul(other);
        match (self.radicand, other.radicand) {
            (1, r) | (r, 1) => GroupElement {
                field: f,
                m,
                radicand: r,
            },
            (r, s) => {
                assert_eq!(r, s, "elements twisted by different radicands");
                let inv = f.inv(r).expect("radicand is nonzero");
                GroupElement {
                    field: f,
                    m: m.map(|x| f.mul(x, inv)),
                    radicand: 1,
                }
            }
        }
    }

    /// Determinant of the represented element, `det(M) / radicand`.
    pub fn det(&self) -> FieldElement {
        let f = self.field;
        let [a, b, c, d] = self.m;
        let det_m = f.sub(f.mul(a, d), f.mul(b, c));
        let inv = f.inv(self.radicand).expect("radicand is nonzero");
        f.wrap(f.mul(det_m, inv))
    }

    pub fn inverse(&self) -> GroupElement {
        let f = self.field;
        let [a, b, c, d] = self.m;
        let det_m = f.sub(f.mul(a, d), f.mul(b, c));
        // (M/√r)^-1 = (r/det M) adj(M) / √r
        let s = f.mul(self.radicand, f.inv(det_m).expect("invertible element"));
        GroupElement {
            field: f,
            m: [
                f.mul(d, s),
                f.mul(f.neg(b), s),
                f.mul(f.neg(c), s),
                f.mul(a, s),
            ],
            radicand: self.radicand,
        }
    }

    pub fn neg(&self) -> GroupElement {
        let f = self.field;
        GroupElement {
            m: self.m.map(|x| f.neg(x)),
            ..*self
        }
    }

    /// `tr(M) / √r`, written as `(tr(M)/r) * √r`.
    pub fn trace(&self) -> TraceValue {
        let f = self.field;
        let t = f.add(self.m[0], self.m[3]);
        if self.radicand == 1 || t == 0 {
            return TraceValue {
                coeff: f.wrap(t),
                radicand: 1,
            };
        }
        TraceValue {
            coeff: f.wrap(f.mul(t, f.inv(self.radicand).expect("nonzero"))),
            radicand: self.radicand,
        }
    }

    fn key(&self) -> [u32; 5] {
        [self.m[0], self.m[1], self.m[2], self.m[3], self.radicand]
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "matrix": [[self.m[0], self.m[1]], [self.m[2], self.m[3]]],
            "radicand": self.radicand,
        })
    }
}

/// Breadth-first closure of `gens` under right multiplication, starting from the identity.
pub fn enumerate_closure(gens: &[GroupElement], cap: usize) -> Result<Vec<GroupElement>> {
    let field = match gens.first() {
        Some(g) => g.field(),
        None => return Ok(Vec::new()),
    };
    let id = GroupElement::identity(field);
    let mut seen: HashMap<[u32; 5], usize> = HashMap::new();
    let mut out = vec![id];
    seen.insert(id.key(), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.contains_key(&y.key()) {
                continue;
            }
            if out.len() == cap {
                return Err(Error::RunawayClosure { cap });
            }
            seen.insert(y.key(), out.len());
            out.push(y);
            queue.push_back(y);
        }
    }
    Ok(out)
}

/// A finite subgroup with its full element list.
#[derive(Clone, Debug)]
pub struct PolyhedralGroup {
    label: GroupLabel,
    field: PrimeField,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
    index: HashMap<[u32; 5], usize>,
}

impl PolyhedralGroup {
    pub fn from_generators(
        label: GroupLabel,
        generators: Vec<GroupElement>,
        cap: usize,
    ) -> Result<Self> {
        let field = generators[0].field();
        let elements = enumerate_closure(&generators, cap)?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (g.key(), i))
            .collect();
        Ok(PolyhedralGroup {
            label,
            field,
            generators,
            elements,
            index,
        })
    }

    pub fn label(&self) -> GroupLabel {
        self.label
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(&g.key())
    }

    pub fn contains_negative_identity(&self) -> bool {
        self.contains(&GroupElement::identity(self.field).neg())
    }

    /// Multiset of traces over all elements.
    pub fn trace_multiset(&self) -> BTreeMap<TraceValue, usize> {
        let mut out = BTreeMap::new();
        for g in &self.elements {
            *out.entry(g.trace()).or_insert(0) += 1;
        }
        out
    }

    /// Exhaustive product closure.
    pub fn is_closed(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| self.contains(&a.mul(b))))
    }

    pub fn is_inverse_closed(&self) -> bool {
        self.elements.iter().all(|g| self.contains(&g.inverse()))
    }

    pub fn all_det_one(&self) -> bool {
        self.elements.iter().all(|g| g.det().value() == 1)
    }

    pub fn is_subgroup_of(&self, other: &PolyhedralGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    /// `s t s^-1` lies in `self` for all `s` in `outer`, `t` in `self`.
    pub fn is_normal_in(&self, outer: &PolyhedralGroup) -> bool {
        outer.elements.iter().all(|s| {
            let si = s.inverse();
            self.elements
                .iter()
                .all(|t| self.contains(&s.mul(t).mul(&si)))
        })
    }
}

/// Quaternion `a + b i + c j + d k` as a 2x2 matrix, given `√-1`.
fn quaternion(field: PrimeField, sqrt_m1: u32, [a, b, c, d]: [u32; 4]) -> [u32; 4] {
    let f = field;
    [
        f.add(a, f.mul(b, sqrt_m1)),
        f.add(c, f.mul(d, sqrt_m1)),
        f.add(f.neg(c), f.mul(d, sqrt_m1)),
        f.sub(a, f.mul(b, sqrt_m1)),
    ]
}

fn require_sqrt(
    field: PrimeField,
    group: GroupLabel,
    a: i64,
    radical: &'static str,
) -> Result<u32> {
    field
        .principal_sqrt(field.reduce(a))
        .ok_or(Error::MissingRadical {
            group,
            radical,
            prime: field.modulus(),
        })
}

fn half(field: PrimeField, group: GroupLabel) -> Result<u32> {
    field.inv(2).map_err(|_| Error::MissingRadical {
        group,
        radical: "1/2",
        prime: field.modulus(),
    })
}

/// A way of producing the generators of one of the groups.
pub trait GroupConstruction: Send + Sync {
    fn label(&self) -> GroupLabel;
    fn name(&self) -> &'static str;
    fn generators(&self, field: PrimeField) -> Result<Vec<GroupElement>>;

    fn build(&self, field: PrimeField, cap: usize) -> Result<PolyhedralGroup> {
        PolyhedralGroup::from_generators(self.label(), self.generators(field)?, cap)
    }
}

/// 2·Alt4 = <i, (1+i+j+k)/2>.
pub struct BinaryTetrahedral;

/// 2·Sym4 = <T, (1+i)/√2>.
pub struct BinaryOctahedral;

/// 2·Alt5 = <i, j, (φ + φ^-1 i + j)/2>.
pub struct BinaryIcosahedral;

impl GroupConstruction for BinaryTetrahedral {
    fn label(&self) -> GroupLabel {
        GroupLabel::T
    }

    fn name(&self) -> &'static str {
        "binary tetrahedral"
    }

    fn generators(&self, field: PrimeField) -> Result<Vec<GroupElement>> {
        let i = require_sqrt(field, GroupLabel::T, -1, "sqrt(-1)")?;
        let h = half(field, GroupLabel::T)?;
        let qi = quaternion(field, i, [0, 1, 0, 0]);
        let omega = quaternion(field, i, [h, h, h, h]);
        Ok(vec![
            GroupElement::with_radicand(field, qi, 1),
            GroupElement::with_radicand(field, omega, 1),
        ])
    }
}

impl GroupConstruction for BinaryOctahedral {
    fn label(&self) -> GroupLabel {
        GroupLabel::S
    }

    fn name(&self) -> &'static str {
        "binary octahedral"
    }

    fn generators(&self, field: PrimeField) -> Result<Vec<GroupElement>> {
        let i = require_sqrt(field, GroupLabel::S, -1, "sqrt(-1)")?;
        let mut gens = BinaryTetrahedral.generators(field)?;
        let sigma = match field.principal_sqrt(2) {
            Some(r2) => {
                let s = field.inv(r2)?;
                GroupElement::with_radicand(field, quaternion(field, i, [s, s, 0, 0]), 1)
            }
            // adjoin √2 formally
            None => GroupElement::with_radicand(field, quaternion(field, i, [1, 1, 0, 0]), 2),
        };
        gens.push(sigma);
        Ok(gens)
    }
}

impl GroupConstruction for BinaryIcosahedral {
    fn label(&self) -> GroupLabel {
        GroupLabel::I
    }

    fn name(&self) -> &'static str {
        "binary icosahedral"
    }

    fn generators(&self, field: PrimeField) -> Result<Vec<GroupElement>> {
        let i = require_sqrt(field, GroupLabel::I, -1, "sqrt(-1)")?;
        let r5 = require_sqrt(field, GroupLabel::I, 5, "sqrt(5)")?;
        let h = half(field, GroupLabel::I)?;
        let phi = field.mul(field.add(1, r5), h);
        let phi_inv = field.sub(phi, 1);
        let qi = quaternion(field, i, [0, 1, 0, 0]);
        let qj = quaternion(field, i, [0, 0, 1, 0]);
        let iota = quaternion(field, i, [field.mul(phi, h), field.mul(phi_inv, h), h, 0]);
        Ok(vec![
            GroupElement::with_radicand(field, qi, 1),
            GroupElement::with_radicand(field, qj, 1),
            GroupElement::with_radicand(field, iota, 1),
        ])
    }
}

/// Group constructions keyed by label.
pub struct GroupRegistry {
    constructions: Vec<Box<dyn GroupConstruction>>,
}

impl Default for GroupRegistry {
    fn default() -> Self {
        let mut r = GroupRegistry {
            constructions: Vec::new(),
        };
        r.register(Box::new(BinaryTetrahedral));
        r.register(Box::new(BinaryOctahedral));
        r.register(Box::new(BinaryIcosahedral));
        r
    }
}

impl GroupRegistry {
    /// Adds a construction, replacing any existing one with the same label.
    pub fn register(&mut self, c: Box<dyn GroupConstruction>) {
        self.constructions.retain(|x| x.label() != c.label());
        self.constructions.push(c);
    }

    pub fn get(&self, label: GroupLabel) -> Option<&dyn GroupConstruction> {
        self.constructions
            .iter()
            .find(|c| c.label() == label)
            .map(|c| c.as_ref())
    }

    pub fn labels(&self) -> Vec<GroupLabel> {
        self.constructions.iter().map(|c| c.label()).collect()
    }
}

pub fn build_group(field: PrimeField, label: GroupLabel) -> Result<PolyhedralGroup> {
    let registry = GroupRegistry::default();
    let c = registry
        .get(label)
        .ok_or_else(|| Error::UnknownGroup(label.to_string()))?;
    c.build(field, DEFAULT_CLOSURE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn orders() {
        for label in GroupLabel::ALL {
            let g = build_group(f(), label).unwrap();
            assert_eq!(g.order(), label.expected_order(), "{label}");
        }
    }

    #[test]
    fn closure_examples() {
        let id = GroupElement::identity(f());
        assert_eq!(enumerate_closure(&[id], 10).unwrap(), vec![id]);
        let j = GroupElement::new(f(), 0, 1, 100, 0);
        let c = enumerate_closure(&[j], 10).unwrap();
        assert_eq!(c.len(), 4);
        let t = BinaryTetrahedral.generators(f()).unwrap();
        assert_eq!(enumerate_closure(&t, 1000).unwrap().len(), 24);
        assert_eq!(
            enumerate_closure(&t, 20),
            Err(Error::RunawayClosure { cap: 20 })
        );
        // an element of order 100 overflows a small cap
        let big = GroupElement::new(f(), 2, 0, 0, 51);
        assert!(matches!(
            enumerate_closure(&[big], 50),
            Err(Error::RunawayClosure { .. })
        ));
    }

    #[test]
    fn tetrahedral_traces() {
        let g = build_group(f(), GroupLabel::T).unwrap();
        let field = f();
        let tm = g.trace_multiset();
        let count = |v: i64| {
            tm.get(&TraceValue {
                coeff: field.elem(v),
                radicand: 1,
            })
            .copied()
            .unwrap_or(0)
        };
        assert_eq!(
            (count(2), count(-2), count(1), count(-1), count(0)),
            (1, 1, 8, 8, 6)
        );
        assert_eq!(tm.values().sum::<usize>(), 24);
        assert_eq!(GroupElement::identity(field).trace().coeff.value(), 2);
    }

    #[test]
    fn octahedral_at_101_uses_adjoined_sqrt2() {
        let s = build_group(f(), GroupLabel::S).unwrap();
        let twisted = s.elements().iter().filter(|g| g.is_twisted()).count();
        assert_eq!(twisted, 24);
        let tm = s.trace_multiset();
        let sqrt2_traces: usize = tm
            .iter()
            .filter(|(k, _)| k.radicand == 2)
            .map(|(_, &c)| c)
            .sum();
        // the 12 elements of order 8 have trace ±√2
        assert_eq!(sqrt2_traces, 12);
    }

    #[test]
    fn octahedral_untwisted_when_sqrt2_exists() {
        let field = PrimeField::new(241).unwrap();
        let s = build_group(field, GroupLabel::S).unwrap();
        assert_eq!(s.order(), 48);
        assert!(s.elements().iter().all(|g| !g.is_twisted()));
    }

    #[test]
    fn group_axioms() {
        for label in GroupLabel::ALL {
            let g = build_group(f(), label).unwrap();
            assert!(g.is_closed());
            assert!(g.is_inverse_closed());
            assert!(g.all_det_one());
            assert!(g.contains(&GroupElement::identity(f())));
            assert!(g.contains_negative_identity());
        }
    }

    #[test]
    fn tetrahedral_normal_in_octahedral() {
        let t = build_group(f(), GroupLabel::T).unwrap();
        let s = build_group(f(), GroupLabel::S).unwrap();
        assert!(t.is_subgroup_of(&s));
        assert!(t.is_normal_in(&s));
        let i = build_group(f(), GroupLabel::I).unwrap();
        assert!(!i.is_subgroup_of(&s));
    }

    #[test]
    fn missing_radicals() {
        // 3 mod 4: no sqrt(-1)
        let f7 = PrimeField::new(7).unwrap();
        assert!(matches!(
            build_group(f7, GroupLabel::T),
            Err(Error::MissingRadical {
                radical: "sqrt(-1)",
                ..
            })
        ));
        // 13: sqrt(-1) exists, 5 is a non-residue
        let f13 = PrimeField::new(13).unwrap();
        assert_eq!(build_group(f13, GroupLabel::T).unwrap().order(), 24);
        assert!(matches!(
            build_group(f13, GroupLabel::I),
            Err(Error::MissingRadical {
                radical: "sqrt(5)",
                ..
            })
        ));
    }

    #[test]
    fn labels_parse() {
        assert_eq!("S".parse::<GroupLabel>().unwrap(), GroupLabel::S);
        assert!("Q".parse::<GroupLabel>().is_err());
        assert_eq!(GroupRegistry::default().labels(), GroupLabel::ALL.to_vec());
    }
}
