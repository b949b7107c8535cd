//! Splitting W_m ⊗ W_n into irreducible summands with explicit projections.
//!
//! Highest-weight method: with `t = diag(z, z^-1)` for a primitive root `z`,
//! `u = [[1, 1], [0, 1]]` and `l = [[1, 0], [1, 1]]`, each summand W_k has a
//! unique (up to scalar) vector of t-weight `k - 1` fixed by `u`. Its l-orbit
//! `h, l h, ..., l^(k-1) h` is a basis of the summand. Stacking all those bases
//! gives an invertible matrix B, and the projection onto summand k is
//! `B_k (B^-1)_k`.
//!
//! Weights are distinct residues only while `2(m+n-2) < p-1`, and the method
//! assumes every degree occurs once.

use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::groups::GroupElement;
use crate::linalg::{EchelonBasis, Matrix, Subspace};
use crate::reps::{BinaryForm, TensorModule};

/// Clebsch-Gordan degrees of W_m ⊗ W_n, descending from `m + n - 1` in steps of 2.
pub fn clebsch_gordan_degrees(m: usize, n: usize) -> Vec<usize> {
    assert!(m >= 1 && n >= 1, "module dimensions start at 1");
    let lo = m.abs_diff(n) + 1;
    (lo..=m + n - 1).rev().step_by(2).collect()
}

#[derive(Clone, Debug)]
pub struct Summand {
    degree: usize,
    weight: i64,
    highest_weight: Vec<u32>,
    image: Subspace,
    /// Rows of `B^-1` for this block: coordinates in the l-orbit basis.
    coordinates: Matrix,
    projection: Matrix,
    /// Columns `(x + j y)^(k-1)`, the images of the l-orbit basis in W_k.
    form_map: Matrix,
}

impl Summand {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// t-weight of the highest-weight vector (`degree - 1`).
    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn highest_weight_vector(&self) -> &[u32] {
        &self.highest_weight
    }

    pub fn image(&self) -> &Subspace {
        &self.image
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    field: PrimeField,
    module: TensorModule,
    summands: Vec<Summand>,
}

/// The SL(2) elements used to find and spin summands.
struct Probes {
    torus: GroupElement,
    raising: GroupElement,
    lowering: GroupElement,
    z: u32,
}

impl Probes {
    fn new(field: PrimeField) -> Result<Self> {
        let z = field.primitive_root().value();
        Ok(Probes {
            torus: GroupElement::new(field, z, 0, 0, field.inv(z)?),
            raising: GroupElement::new(field, 1, 1, 0, 1),
            lowering: GroupElement::new(field, 1, 0, 1, 1),
            z,
        })
    }
}

/// `(x + j y)^(k-1)` for `j = 0..k`, as columns: entry `(i, j) = C(k-1, i) j^i`.
fn lowering_form_map(field: PrimeField, k: usize) -> Matrix {
    let d = k - 1;
    let mut binom = vec![1u32; d + 1];
    for i in 1..=d {
        // C(d, i) = C(d, i-1) * (d - i + 1) / i
        let num = field.mul(binom[i - 1], field.reduce((d - i + 1) as i64));
        binom[i] = field.mul(num, field.inv(field.reduce(i as i64)).expect("i < p"));
    }
    Matrix::from_fn(field, k, k, |i, j| {
        field.mul(binom[i], field.pow(field.reduce(j as i64), i as u64)) as i64
    })
}

pub fn decompose_tensor(field: PrimeField, m: usize, n: usize) -> Result<Decomposition> {
    let module = TensorModule::new(m, n);
    let bound = field.modulus() - 1;
    if m == 0 || n == 0 {
        return Err(Error::ModuleRange {
            dim: 0,
            max: field.modulus() as usize,
        });
    }
    if 2 * (m + n - 2) >= bound as usize {
        return Err(Error::WeightCollision { m, n, bound });
    }
    let probes = Probes::new(field)?;
    let dim = module.dim();
    let a_t = module.action_matrix(&probes.torus)?;
    let a_u = module.action_matrix(&probes.raising)?;
    let a_l = module.action_matrix(&probes.lowering)?;
    let u_fixed = a_u.sub_scalar(1)?.kernel_basis();

    let top = (m + n - 2) as i64;
    let mut found: Vec<(i64, Vec<Vec<u32>>, Vec<u32>)> = Vec::new();
    let mut w = top;
    while w >= -top {
        let eigenvalue = field.pow_signed(probes.z, w)?;
        let weight_space = a_t.sub_scalar(eigenvalue)?.kernel_basis();
        let hw = weight_space.intersect(&u_fixed)?;
        match hw.dim() {
            0 => {}
            1 => {
                let h = hw.basis_vectors().remove(0);
                let orbit = spin_lowering(&a_l, &h, dim)?;
                found.push((w, orbit, h));
            }
            k => {
                return Err(Error::Multiplicity {
                    m,
                    n,
                    weight: w,
                    multiplicity: k,
                })
            }
        }
        w -= 2;
    }

    let covered: usize = found.iter().map(|(_, o, _)| o.len()).sum();
    if covered != dim {
        return Err(Error::NotCompletelyReducible {
            m,
            n,
            covered,
            total: dim,
        });
    }
    let mut degrees: Vec<usize> = found.iter().map(|(_, o, _)| o.len()).collect();
    degrees.sort_unstable();
    if let Some(win) = degrees.windows(2).find(|w| w[0] == w[1]) {
        let (weight, _, _) = found
            .iter()
            .find(|(_, o, _)| o.len() == win[0])
            .expect("present");
        return Err(Error::Multiplicity {
            m,
            n,
            weight: *weight,
            multiplicity: 2,
        });
    }

    // each orbit span must be a submodule (stable under u as well as l)
    for (weight, orbit, _) in &found {
        let mut span = EchelonBasis::new(field, dim);
        for v in orbit {
            span.insert(v);
        }
        for v in orbit {
            if !span.contains(&a_u.mul_vec(v)?) {
                return Err(Error::SummandMismatch {
                    weight: *weight,
                    dim: orbit.len(),
                    expected: (*weight + 1).max(0) as usize,
                });
            }
        }
        if orbit.len() as i64 != weight + 1 {
            return Err(Error::SummandMismatch {
                weight: *weight,
                dim: orbit.len(),
                expected: (*weight + 1).max(0) as usize,
            });
        }
    }

    let columns: Vec<Vec<u32>> = found
        .iter()
        .flat_map(|(_, o, _)| o.iter().cloned())
        .collect();
    let basis = Matrix::from_columns(field, dim, &columns)?;
    let inverse = basis.inverse().map_err(|_| Error::NotCompletelyReducible {
        m,
        n,
        covered: basis.rank(),
        total: dim,
    })?;

    let mut summands = Vec::with_capacity(found.len());
    let mut offset = 0;
    for (weight, orbit, h) in found {
        let k = orbit.len();
        let rows: Vec<Vec<u32>> = (offset..offset + k)
            .map(|r| inverse.row(r).to_vec())
            .collect();
        let coordinates = Matrix::from_rows(field, &rows)?;
        let block = Matrix::from_columns(field, dim, &orbit)?;
        let projection = block.mul(&coordinates)?;
        summands.push(Summand {
            degree: k,
            weight,
            highest_weight: h,
            image: Subspace::span(field, dim, &orbit)?,
            coordinates,
            projection,
            form_map: lowering_form_map(field, k),
        });
        offset += k;
    }

    Ok(Decomposition {
        field,
        module,
        summands,
    })
}

/// `h, l h, l^2 h, ...` until the span stops growing.
fn spin_lowering(a_l: &Matrix, h: &[u32], dim: usize) -> Result<Vec<Vec<u32>>> {
    let mut span = EchelonBasis::new(a_l.field(), dim);
    let mut orbit = Vec::new();
    let mut v = h.to_vec();
    while span.insert(&v) {
        let next = a_l.mul_vec(&v)?;
        orbit.push(v);
        v = next;
    }
    Ok(orbit)
}

impl Decomposition {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn module(&self) -> TensorModule {
        self.module
    }

    /// Summand degrees, descending.
    pub fn degrees(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.degree).collect()
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn summand(&self, k: usize) -> Result<&Summand> {
        self.summands
            .iter()
            .find(|s| s.degree == k)
            .ok_or(Error::NotASummand {
                degree: k,
                m: self.module.m,
                n: self.module.n,
            })
    }

    /// Applies the degree-k projection `r_k`.
    pub fn project(&self, k: usize, v: &[u32]) -> Result<Vec<u32>> {
        self.summand(k)?.projection.mul_vec(v)
    }

    /// The degree-k component of `v` transported to W_k, with the
    /// highest-weight vector sent to `x^(k-1)`.
    pub fn component_as_form(&self, k: usize, v: &[u32]) -> Result<BinaryForm> {
        let s = self.summand(k)?;
        let coords = s.coordinates.mul_vec(v)?;
        Ok(BinaryForm::new(self.field, s.form_map.mul_vec(&coords)?))
    }

    /// Every summand image is stable under `action` (equivalently every
    /// projection commutes with it), checked as block-diagonality of
    /// `B^-1 A B`.
    pub fn is_stable_under(&self, action: &Matrix) -> Result<bool> {
        for s in &self.summands {
            for v in s.image.basis_vectors() {
                if !s.image.contains(&action.mul_vec(&v)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The literal commutation `P_k A = A P_k` for every summand.
    pub fn projections_commute_with(&self, action: &Matrix) -> Result<bool> {
        for s in &self.summands {
            if s.projection.mul(action)? != action.mul(&s.projection)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Projections as `(degree, matrix)` pairs, for dumping.
    pub fn projections(&self) -> impl Iterator<Item = (usize, &Matrix)> {
        self.summands.iter().map(|s| (s.degree, &s.projection))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn degree_sets() {
        assert_eq!(
            clebsch_gordan_degrees(9, 13),
            vec![21, 19, 17, 15, 13, 11, 9, 7, 5]
        );
        assert_eq!(
            clebsch_gordan_degrees(13, 21),
            (9..=33).rev().step_by(2).collect::<Vec<_>>()
        );
        assert_eq!(clebsch_gordan_degrees(1, 5), vec![5]);
        assert_eq!(clebsch_gordan_degrees(7, 7), vec![13, 11, 9, 7, 5, 3, 1]);
        for (m, n) in [(3, 8), (8, 3), (5, 5), (1, 1)] {
            assert_eq!(clebsch_gordan_degrees(m, n).iter().sum::<usize>(), m * n);
        }
    }

    #[test]
    fn two_by_two() {
        let field = f();
        let d = decompose_tensor(field, 2, 2).unwrap();
        assert_eq!(d.degrees(), vec![3, 1]);
        // x⊗y - y⊗x
        let anti = vec![0, 1, field.reduce(-1), 0];
        let line = d.summand(1).unwrap().image();
        assert_eq!(line.dim(), 1);
        assert!(line.contains(&anti).unwrap());
        let c = d.component_as_form(1, &anti).unwrap();
        assert_eq!(c.degree(), 0);
        assert!(!c.is_zero());
    }

    #[test]
    fn nine_by_thirteen() {
        let d = decompose_tensor(f(), 9, 13).unwrap();
        assert_eq!(d.degrees(), clebsch_gordan_degrees(9, 13));
        assert_eq!(
            d.summands().iter().map(|s| s.image().dim()).sum::<usize>(),
            117
        );
    }

    #[test]
    fn weight_collision() {
        assert!(matches!(
            decompose_tensor(f(), 30, 30),
            Err(Error::WeightCollision {
                m: 30,
                n: 30,
                bound: 100
            })
        ));
    }

    #[test]
    fn projection_algebra_small() {
        let field = f();
        let d = decompose_tensor(field, 4, 5).unwrap();
        let n = 20;
        let mut sum = Matrix::zeros(field, n, n);
        for (k, p) in d.projections() {
            assert_eq!(p.mul(p).unwrap(), *p, "idempotent {k}");
            for (j, q) in d.projections() {
                if j != k {
                    assert!(p.mul(q).unwrap().is_zero());
                }
            }
            sum = sum.add(p).unwrap();
        }
        assert_eq!(sum, Matrix::identity(field, n));
    }

    #[test]
    fn highest_weight_maps_to_top_monomial() {
        let field = f();
        let d = decompose_tensor(field, 5, 7).unwrap();
        for s in d.summands() {
            let form = d
                .component_as_form(s.degree(), s.highest_weight_vector())
                .unwrap();
            assert_eq!(form, BinaryForm::monomial(field, s.degree() - 1, 0));
        }
    }

    #[test]
    fn unknown_degree() {
        let d = decompose_tensor(f(), 3, 3).unwrap();
        assert!(matches!(
            d.project(4, &[0; 9]),
            Err(Error::NotASummand { degree: 4, .. })
        ));
        let zero = d.component_as_form(3, &[0; 9]).unwrap();
        assert!(zero.is_zero());
    }
}
