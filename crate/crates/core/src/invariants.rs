//! Invariant theory of T, S and I on binary forms, all mod p.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{GroupLabel, PolyhedralGroup};
use crate::linalg::{rank_of_stack, Matrix};
use crate::reps::{act_on_form, fixed_space, BinaryForm};

/// Degrees of the three fundamental invariants.
pub fn fundamental_degrees(label: GroupLabel) -> [usize; 3] {
    match label {
        GroupLabel::T => [6, 8, 12],
        GroupLabel::S => [8, 12, 18],
        GroupLabel::I => [12, 20, 30],
    }
}

/// Exponents `(e1, e2, e3)` of the three monomials in the defining relation,
/// one row per term.
pub fn relation_exponents(label: GroupLabel) -> [[u32; 3]; 3] {
    match label {
        // f6^4, f8^3, f12^2
        GroupLabel::T => [[4, 0, 0], [0, 3, 0], [0, 0, 2]],
        // g18^2, g8^3 g12, g12^3
        GroupLabel::S => [[0, 0, 2], [3, 1, 0], [0, 3, 0]],
        // h12^5, h20^3, h30^2
        GroupLabel::I => [[5, 0, 0], [0, 3, 0], [0, 0, 2]],
    }
}

fn check_characteristic(group: &PolyhedralGroup) -> Result<()> {
    let p = group.field().modulus() as usize;
    if group.order() % p == 0 {
        return Err(Error::UnsupportedCharacteristic {
            prime: p as u32,
            order: group.order(),
        });
    }
    Ok(())
}

/// Reynolds operator `|G|^-1 Σ g.f`.
pub fn reynolds(group: &PolyhedralGroup, f: &BinaryForm) -> Result<BinaryForm> {
    check_characteristic(group)?;
    let field = group.field();
    let mut acc = BinaryForm::zero(field, f.degree());
    for g in group.elements() {
        match act_on_form(g, f) {
            Ok(h) => acc = acc.add(&h),
            // odd degree with -1 in G: g and -g cancel
            Err(Error::NotRealizable { .. })
                if f.degree() % 2 == 1 && group.contains_negative_identity() =>
            {
                return Ok(BinaryForm::zero(field, f.degree()));
            }
            Err(e) => return Err(e),
        }
    }
    let inv = field.inv(field.reduce(group.order() as i64))?;
    Ok(acc.scale(inv))
}

/// `g.f = f` for every element of the group.
pub fn is_invariant(group: &PolyhedralGroup, f: &BinaryForm) -> Result<bool> {
    for g in group.elements() {
        match act_on_form(g, f) {
            Ok(h) if h != *f => return Ok(false),
            Ok(_) => {}
            Err(Error::NotRealizable { .. }) => {
                // only odd degrees; -1 forces invariants there to vanish
                if !(f.is_zero() && group.contains_negative_identity()) {
                    return Ok(false);
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// Dimension of the degree-d invariants, i.e. of W_(d+1)^G.
pub fn invariant_dimension(group: &PolyhedralGroup, d: usize) -> Result<usize> {
    let max = group.field().modulus() as usize - 1;
    if d > max {
        return Err(Error::DegreeRange { degree: d, max });
    }
    Ok(fixed_space(group, d + 1)?.dim())
}

/// `(f, g)^r = Σ_i (-1)^i C(r, i) ∂^r f/∂x^(r-i)∂y^i · ∂^r g/∂x^i∂y^(r-i)`.
pub fn transvectant(f: &BinaryForm, g: &BinaryForm, r: usize) -> Result<BinaryForm> {
    let max = f.degree().min(g.degree());
    if r > max {
        return Err(Error::TransvectantOrder { r, max });
    }
    let field = f.field();
    let partial = |h: &BinaryForm, nx: usize, ny: usize| {
        let mut out = h.clone();
        for _ in 0..nx {
            out = out.d_dx();
        }
        for _ in 0..ny {
            out = out.d_dy();
        }
        out
    };
    let mut acc = BinaryForm::zero(field, f.degree() + g.degree() - 2 * r);
    let mut binom = 1u64;
    for i in 0..=r {
        let term = partial(f, r - i, i).mul(&partial(g, i, r - i));
        let c = field.reduce(if i % 2 == 0 {
            binom as i64
        } else {
            -(binom as i64)
        });
        acc = acc.add(&term.scale(c));
        binom = binom * (r - i) as u64 / (i + 1) as u64;
    }
    Ok(acc)
}

/// The three fundamental invariants of a group, each scaled to leading coefficient 1.
#[derive(Clone, Debug)]
pub struct FundamentalSet {
    pub label: GroupLabel,
    pub forms: [BinaryForm; 3],
}

impl FundamentalSet {
    pub fn degrees(&self) -> [usize; 3] {
        [
            self.forms[0].degree(),
            self.forms[1].degree(),
            self.forms[2].degree(),
        ]
    }

    /// `v1^a v2^b v3^c`.
    pub fn monomial(&self, [a, b, c]: [u32; 3]) -> BinaryForm {
        self.forms[0]
            .pow(a)
            .mul(&self.forms[1].pow(b))
            .mul(&self.forms[2].pow(c))
    }

    /// All exponent vectors with `Σ e_i deg(v_i) = d`.
    pub fn exponents_of_degree(&self, d: usize) -> Vec<[u32; 3]> {
        let [d1, d2, d3] = self.degrees();
        let mut out = Vec::new();
        for c in 0..=d / d3 {
            for b in 0..=(d - c * d3) / d2 {
                let rest = d - c * d3 - b * d2;
                if rest % d1 == 0 {
                    out.push([(rest / d1) as u32, b as u32, c as u32]);
                }
            }
        }
        out
    }

    pub fn monomials_of_degree(&self, d: usize) -> Vec<BinaryForm> {
        self.exponents_of_degree(d)
            .into_iter()
            .map(|e| self.monomial(e))
            .collect()
    }
}

/// First nonzero Reynolds average of `x^(d-j) y^j`, scanning `j = 0, 1, ...`.
pub fn first_reynolds_invariant(group: &PolyhedralGroup, d: usize) -> Result<BinaryForm> {
    let field = group.field();
    for j in 0..=d {
        let avg = reynolds(group, &BinaryForm::monomial(field, d, j))?;
        if !avg.is_zero() {
            return Ok(avg.normalized());
        }
    }
    Err(Error::NoInvariant {
        group: group.label(),
        degree: d,
    })
}

/// Fundamental invariants: the first two by Reynolds averaging, the third as
/// the Jacobian `(v1, v2)^1`.
///
/// For T the degree-12 invariants form a plane spanned by `v1^2` and the
/// Jacobian. Of the lines in that plane, only the Jacobian satisfies the
/// single defining relation.
pub fn fundamental_invariants(group: &PolyhedralGroup) -> Result<FundamentalSet> {
    let label = group.label();
    let [d1, d2, d3] = fundamental_degrees(label);
    let v1 = first_reynolds_invariant(group, d1)?;
    let v2 = first_reynolds_invariant(group, d2)?;
    let v3 = transvectant(&v1, &v2, 1)?.normalized();
    debug_assert_eq!(v3.degree(), d3);
    if v3.is_zero() || !is_invariant(group, &v3)? {
        return Err(Error::NoInvariant {
            group: label,
            degree: d3,
        });
    }
    let set = FundamentalSet {
        label,
        forms: [v1, v2, v3],
    };
    // v3 must not be a polynomial in v1, v2
    let lower: Vec<Vec<u32>> = set
        .exponents_of_degree(d3)
        .into_iter()
        .filter(|e| e[2] == 0)
        .map(|e| set.monomial(e).into_coeffs())
        .collect();
    if !lower.is_empty() {
        let mut with_v3 = lower.clone();
        with_v3.push(set.forms[2].coeffs().to_vec());
        let field = group.field();
        if rank_of_stack(field, &with_v3)? == rank_of_stack(field, &lower)? {
            return Err(Error::NoInvariant {
                group: label,
                degree: d3,
            });
        }
    }
    Ok(set)
}

#[derive(Clone, Debug, Serialize)]
pub struct SyzygyReport {
    pub group: GroupLabel,
    pub degree: usize,
    /// Exponents of the three relation terms.
    pub terms: [[u32; 3]; 3],
    pub nonzero: [bool; 3],
    /// Ranks of the pairs (0,1), (0,2), (1,2).
    pub pairwise_ranks: [usize; 3],
    pub rank: usize,
    /// Basis of the dependencies `c0 t0 + c1 t1 + c2 t2 = 0`.
    pub dependencies: Vec<Vec<u32>>,
    pub failures: Vec<String>,
}

impl SyzygyReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Each relation term is nonzero, every pair is independent, the triple is
/// dependent, and every dependency has three nonzero coefficients.
pub fn syzygy_check_with(
    set: &FundamentalSet,
    field: crate::gf::PrimeField,
) -> Result<SyzygyReport> {
    let terms = relation_exponents(set.label);
    let products: Vec<BinaryForm> = terms.iter().map(|&e| set.monomial(e)).collect();
    let degree = products[0].degree();
    let vectors: Vec<Vec<u32>> = products.iter().map(|f| f.coeffs().to_vec()).collect();
    let nonzero = [
        !products[0].is_zero(),
        !products[1].is_zero(),
        !products[2].is_zero(),
    ];
    let pair = |a: usize, b: usize| rank_of_stack(field, &[vectors[a].clone(), vectors[b].clone()]);
    let pairwise_ranks = [pair(0, 1)?, pair(0, 2)?, pair(1, 2)?];
    let rank = rank_of_stack(field, &vectors)?;
    // dependencies: kernel of the matrix with the products as columns
    let cols = Matrix::from_columns(field, degree + 1, &vectors)?;
    let dependencies = cols.kernel_basis().basis_vectors();

    let mut failures = Vec::new();
    for (i, nz) in nonzero.iter().enumerate() {
        if !nz {
            failures.push(format!("term {i} vanishes"));
        }
    }
    for (i, r) in pairwise_ranks.iter().enumerate() {
        if *r != 2 {
            failures.push(format!("pair {i} is dependent"));
        }
    }
    if rank != 2 {
        failures.push(format!("triple has rank {rank}, expected 2"));
    }
    for d in &dependencies {
        if d.contains(&0) {
            failures.push("a dependency omits a term".to_string());
        }
    }
    Ok(SyzygyReport {
        group: set.label,
        degree,
        terms,
        nonzero,
        pairwise_ranks,
        rank,
        dependencies,
        failures: failures
            .into_iter()
            .map(|f| format!("{}: {f}", set.label))
            .collect(),
    })
}

pub fn syzygy_check(group: &PolyhedralGroup) -> Result<SyzygyReport> {
    let set = fundamental_invariants(group)?;
    syzygy_check_with(&set, group.field())
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub invariant_dim: usize,
    pub monomials: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub group: GroupLabel,
    pub dmax: usize,
    pub rows: Vec<DegreeRow>,
    /// Degrees where the monomials fail to span.
    pub deficits: Vec<usize>,
}

impl GenerationReport {
    pub fn pass(&self) -> bool {
        self.deficits.is_empty()
    }
}

pub fn generation_check_with(
    group: &PolyhedralGroup,
    set: &FundamentalSet,
    dmax: usize,
) -> Result<GenerationReport> {
    let field = group.field();
    let max = field.modulus() as usize - 1;
    if dmax > max {
        return Err(Error::DegreeRange { degree: dmax, max });
    }
    let mut rows = Vec::with_capacity(dmax + 1);
    let mut deficits = Vec::new();
    for d in 0..=dmax {
        let invariant_dim = invariant_dimension(group, d)?;
        let monomials: Vec<Vec<u32>> = set
            .monomials_of_degree(d)
            .into_iter()
            .map(BinaryForm::into_coeffs)
            .collect();
        let rank = rank_of_stack(field, &monomials)?;
        if rank != invariant_dim {
            deficits.push(d);
        }
        rows.push(DegreeRow {
            degree: d,
            invariant_dim,
            monomials: monomials.len(),
            rank,
        });
    }
    Ok(GenerationReport {
        group: group.label(),
        dmax,
        rows,
        deficits,
    })
}

/// Monomials in the fundamental invariants span every degree-d invariant
/// space for `d <= dmax`.
pub fn generation_check(group: &PolyhedralGroup, dmax: usize) -> Result<GenerationReport> {
    let set = fundamental_invariants(group)?;
    generation_check_with(group, &set, dmax)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub group: GroupLabel,
    pub k: usize,
    pub invariant: Vec<u32>,
    /// The constant `(x, x)^(k-1)`.
    pub value: u32,
}

impl PairingReport {
    pub fn pass(&self) -> bool {
        self.value != 0
    }
}

/// For `x` spanning a 1-dimensional W_k^G, the degree-1 component
/// `(x, x)^(k-1)` of `x ⊗ x` is nonzero.
pub fn pairing_check(group: &PolyhedralGroup, k: usize) -> Result<PairingReport> {
    let space = fixed_space(group, k)?;
    if space.dim() != 1 {
        return Err(Error::FixedSpaceDimension {
            group: group.label(),
            dim: k,
            found: space.dim(),
            expected: 1,
        });
    }
    let x = BinaryForm::new(group.field(), space.basis_vectors().remove(0));
    let t = transvectant(&x, &x, k - 1)?;
    Ok(PairingReport {
        group: group.label(),
        k,
        invariant: x.into_coeffs(),
        value: t.coeffs()[0],
    })
}
