//! W_m as the module of binary forms of degree m - 1.
//!
//! Forms are coefficient vectors in the basis `x^d, x^(d-1) y, ..., y^d`.
//! A group element `g = [[a, b], [c, d]]` acts by `(g.f)(v) = f(v g)` for the
//! row vector `v = (x, y)`, i.e. `x -> a x + c y`, `y -> b x + d y`. This is a
//! left action: `matrix(gh) = matrix(g) matrix(h)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::PrimeField;
use crate::groups::{GroupElement, PolyhedralGroup};
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl BinaryForm {
    pub fn new(field: PrimeField, coeffs: Vec<u32>) -> Self {
        assert!(!coeffs.is_empty(), "a form has at least one coefficient");
        let p = field.modulus();
        BinaryForm {
            field,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        }
    }

    pub fn from_signed(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField, degree: usize) -> Self {
        BinaryForm {
            field,
            coeffs: vec![0; degree + 1],
        }
    }

    /// `x^(degree - j) y^j`.
    pub fn monomial(field: PrimeField, degree: usize, j: usize) -> Self {
        let mut f = Self::zero(field, degree);
        f.coeffs[j] = 1;
        f
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u32> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        let f = self.field;
        BinaryForm {
            field: f,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> BinaryForm {
        let f = self.field;
        BinaryForm {
            field: f,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        BinaryForm {
            field: self.field,
            coeffs: poly_mul(&self.field, &self.coeffs, &other.coeffs),
        }
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        let mut acc = BinaryForm::new(self.field, vec![1]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂x`; a constant differentiates to the zero constant.
    pub fn d_dx(&self) -> BinaryForm {
        let f = self.field;
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(f, 0);
        }
        let coeffs = (0..d)
            .map(|j| f.mul(self.coeffs[j], f.reduce((d - j) as i64)))
            .collect();
        BinaryForm { field: f, coeffs }
    }

    /// `∂/∂y`.
    pub fn d_dy(&self) -> BinaryForm {
        let f = self.field;
        let d = self.degree();
        if d == 0 {
            return BinaryForm::zero(f, 0);
        }
        let coeffs = (1..=d)
            .map(|j| f.mul(self.coeffs[j], f.reduce(j as i64)))
            .collect();
        BinaryForm { field: f, coeffs }
    }

    /// Scales so the first nonzero coefficient is 1; the zero form is unchanged.
    pub fn normalized(&self) -> BinaryForm {
        match self.coeffs.iter().find(|&&c| c != 0) {
            Some(&lead) => self.scale(self.field.inv(lead).expect("nonzero")),
            None => self.clone(),
        }
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            write!(out, "{c}")?;
            match d - j {
                0 => {}
                1 => write!(out, "*x")?,
                e => write!(out, "*x^{e}")?,
            }
            match j {
                0 => {}
                1 => write!(out, "*y")?,
                e => write!(out, "*y^{e}")?,
            }
        }
        if first {
            write!(out, "0")?;
        }
        Ok(())
    }
}

fn poly_mul(f: &PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn check_module_dim(field: &PrimeField, m: usize) -> Result<()> {
    let max = field.modulus() as usize;
    if m == 0 || m > max {
        return Err(Error::ModuleRange { dim: m, max });
    }
    Ok(())
}

/// Matrix of the substitution action of a plain 2x2 matrix `[a, b, c, d]` on
/// degree-(m-1) forms. Column j is the image of `x^(m-1-j) y^j`.
fn substitution_matrix(field: PrimeField, [a, b, c, d]: [u32; 4], m: usize) -> Matrix {
    let deg = m - 1;
    // powers of (a x + c y) and (b x + d y)
    let mut xs = vec![vec![1u32]];
    let mut ys = vec![vec![1u32]];
    for e in 0..deg {
        xs.push(poly_mul(&field, &xs[e], &[a, c]));
        ys.push(poly_mul(&field, &ys[e], &[b, d]));
    }
    let mut out = Matrix::zeros(field, m, m);
    for j in 0..m {
        let col = poly_mul(&field, &xs[deg - j], &ys[j]);
        for (i, &v) in col.iter().enumerate() {
            out.set(i, j, v);
        }
    }
    out
}

/// The m x m matrix of `g` on W_m.
///
/// For `g = M/√r` this is `r^(-(m-1)/2)` times the substitution matrix of `M`,
/// which is defined over `F_p` only when `m` is odd or `r` is 1.
pub fn sym_power_matrix(g: &GroupElement, m: usize) -> Result<Matrix> {
    let field = g.field();
    check_module_dim(&field, m)?;
    let base = substitution_matrix(field, g.entries(), m);
    if !g.is_twisted() {
        return Ok(base);
    }
    let deg = m - 1;
    if deg % 2 == 1 {
        return Err(Error::NotRealizable {
            dim: m,
            radicand: g.radicand(),
        });
    }
    let s = field.pow_signed(g.radicand(), -((deg / 2) as i64))?;
    Ok(base.scale(s))
}

pub fn act_on_form(g: &GroupElement, form: &BinaryForm) -> Result<BinaryForm> {
    let m = sym_power_matrix(g, form.degree() + 1)?;
    Ok(BinaryForm::new(form.field(), m.mul_vec(form.coeffs())?))
}

/// W_m ⊗ W_n with the diagonal action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorModule {
    pub m: usize,
    pub n: usize,
}

impl TensorModule {
    pub fn new(m: usize, n: usize) -> Self {
        TensorModule { m, n }
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    /// `ρ_m(g) ⊗ ρ_n(g)`. For twisted `g` the scalar `r^(-(m+n-2)/2)` is
    /// applied to the product, so only the parity of `m + n` matters.
    pub fn action_matrix(&self, g: &GroupElement) -> Result<Matrix> {
        let field = g.field();
        check_module_dim(&field, self.m)?;
        check_module_dim(&field, self.n)?;
        let a = substitution_matrix(field, g.entries(), self.m);
        let b = substitution_matrix(field, g.entries(), self.n);
        let k = a.kronecker(&b);
        if !g.is_twisted() {
            return Ok(k);
        }
        let deg = self.m + self.n - 2;
        if deg % 2 == 1 {
            return Err(Error::NotRealizable {
                dim: self.dim(),
                radicand: g.radicand(),
            });
        }
        Ok(k.scale(field.pow_signed(g.radicand(), -((deg / 2) as i64))?))
    }

    /// Coordinates of `f ⊗ g`, index `i * n + j`.
    pub fn pure_tensor(&self, f: &BinaryForm, g: &BinaryForm) -> Result<Vec<u32>> {
        if f.degree() + 1 != self.m || g.degree() + 1 != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.m + self.n,
                found: f.degree() + g.degree() + 2,
            });
        }
        let field = f.field();
        let mut out = Vec::with_capacity(self.dim());
        for &a in f.coeffs() {
            out.extend(g.coeffs().iter().map(|&b| field.mul(a, b)));
        }
        Ok(out)
    }
}

/// W_m^G, computed as the common kernel of `ρ(g) - 1` over the generators.
///
/// When some generator has no `F_p` action on W_m (a twisted element on an
/// even-dimensional module), the fixed space of the remaining generators is
/// used if it is already zero; otherwise the space cannot be computed.
pub fn fixed_space(group: &PolyhedralGroup, m: usize) -> Result<Subspace> {
    let field = group.field();
    check_module_dim(&field, m)?;
    let mut stacked: Option<Matrix> = None;
    let mut unrealizable = None;
    for g in group.generators() {
        match sym_power_matrix(g, m) {
            Ok(rho) => {
                let block = rho.sub_scalar(1)?;
                stacked = Some(match stacked {
                    None => block,
                    Some(s) => s.stack(&block)?,
                });
            }
            Err(e @ Error::NotRealizable { .. }) => unrealizable = Some(e),
            Err(e) => return Err(e),
        }
    }
    let space = match stacked {
        Some(s) => s.kernel_basis(),
        None => Subspace::full(field, m),
    };
    match unrealizable {
        Some(e) if space.dim() > 0 => Err(e),
        _ => Ok(space),
    }
}

/// Fixed-space dimension from the character: `|G|^-1 Σ tr ρ_m(g)` read as a
/// residue. Agrees with the rank computation whenever the dimension is below p.
pub fn averaged_trace_dimension(group: &PolyhedralGroup, m: usize) -> Result<u32> {
    let field = group.field();
    let mut total = 0u32;
    let paired = m % 2 == 0 && group.contains_negative_identity();
    for g in group.elements() {
        let rho = match sym_power_matrix(g, m) {
            Ok(rho) => rho,
            // g and -g are both present and their traces cancel
            Err(Error::NotRealizable { .. }) if paired => continue,
            Err(e) => return Err(e),
        };
        for i in 0..m {
            total = field.add(total, rho.get(i, i));
        }
    }
    let order = field.reduce(group.order() as i64);
    Ok(field.mul(total, field.inv(order)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, GroupLabel};

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let id = GroupElement::identity(f());
        for m in 1..8 {
            assert_eq!(sym_power_matrix(&id, m).unwrap(), Matrix::identity(f(), m));
        }
        let form = BinaryForm::from_signed(f(), &[1, -2, 3]);
        assert_eq!(act_on_form(&id, &form).unwrap(), form);
    }

    #[test]
    fn torus_is_diagonal() {
        let field = f();
        let z = field.primitive_root().value();
        let zi = field.inv(z).unwrap();
        let t = GroupElement::new(field, z, 0, 0, zi);
        let m = 6;
        let rho = sym_power_matrix(&t, m).unwrap();
        let diag: Vec<u32> = (0..m)
            .map(|j| field.pow_signed(z, (m as i64 - 1) - 2 * j as i64).unwrap())
            .collect();
        assert_eq!(rho, Matrix::diagonal(field, &diag));
    }

    #[test]
    fn j_swaps_x_and_y() {
        let field = f();
        let j = GroupElement::new(field, 0, 1, 100, 0);
        let x2 = BinaryForm::monomial(field, 2, 0);
        assert_eq!(
            act_on_form(&j, &x2).unwrap(),
            BinaryForm::monomial(field, 2, 2)
        );
    }

    #[test]
    fn homomorphism_on_octahedral_pairs() {
        let s = build_group(f(), GroupLabel::S).unwrap();
        let els = s.elements();
        for k in 0..20 {
            let (a, b) = (&els[(7 * k + 3) % 48], &els[(11 * k + 5) % 48]);
            for m in [1, 3, 5, 9] {
                let lhs = sym_power_matrix(&a.mul(b), m).unwrap();
                let rhs = sym_power_matrix(a, m)
                    .unwrap()
                    .mul(&sym_power_matrix(b, m).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn module_range() {
        let id = GroupElement::identity(f());
        assert!(matches!(
            sym_power_matrix(&id, 0),
            Err(Error::ModuleRange { .. })
        ));
        assert!(sym_power_matrix(&id, 101).is_ok());
        assert!(matches!(
            sym_power_matrix(&id, 102),
            Err(Error::ModuleRange { dim: 102, max: 101 })
        ));
    }

    #[test]
    fn twisted_elements_need_odd_dimension() {
        let s = build_group(f(), GroupLabel::S).unwrap();
        let tw = s.generators().iter().find(|g| g.is_twisted()).unwrap();
        assert!(sym_power_matrix(tw, 3).is_ok());
        assert!(matches!(
            sym_power_matrix(tw, 4),
            Err(Error::NotRealizable { .. })
        ));
        // even-dimensional fixed spaces are still computable: -1 kills them
        assert_eq!(fixed_space(&s, 4).unwrap().dim(), 0);
    }

    #[test]
    fn fixed_space_dimensions() {
        let field = f();
        let t = build_group(field, GroupLabel::T).unwrap();
        let s = build_group(field, GroupLabel::S).unwrap();
        let i = build_group(field, GroupLabel::I).unwrap();
        let dim = |g: &PolyhedralGroup, m| fixed_space(g, m).unwrap().dim();
        assert_eq!(
            (dim(&t, 7), dim(&t, 9), dim(&t, 13), dim(&t, 3)),
            (1, 1, 2, 0)
        );
        assert_eq!(
            (dim(&s, 9), dim(&s, 13), dim(&s, 19), dim(&s, 37)),
            (1, 1, 1, 2)
        );
        assert_eq!((dim(&i, 13), dim(&i, 21), dim(&i, 31)), (1, 1, 1));
    }

    #[test]
    fn fixed_vectors_are_fixed_by_every_element() {
        for label in GroupLabel::ALL {
            let g = build_group(f(), label).unwrap();
            for m in [7, 9, 13, 19, 21] {
                let space = fixed_space(&g, m).unwrap();
                for v in space.basis_vectors() {
                    for el in g.elements() {
                        let rho = sym_power_matrix(el, m).unwrap();
                        assert_eq!(rho.mul_vec(&v).unwrap(), v);
                    }
                }
            }
        }
    }

    #[test]
    fn form_arithmetic() {
        let field = f();
        let x = BinaryForm::monomial(field, 1, 0);
        let y = BinaryForm::monomial(field, 1, 1);
        let xy = x.mul(&y);
        assert_eq!(xy.coeffs(), &[0, 1, 0]);
        assert_eq!(x.add(&y).pow(2).coeffs(), &[1, 2, 1]);
        let g = BinaryForm::from_signed(field, &[3, 0, 5, 0]);
        assert_eq!(g.d_dx().coeffs(), &[9, 0, 5]);
        assert_eq!(g.d_dy().coeffs(), &[0, 10, 0]);
        assert_eq!(g.normalized().coeffs()[0], 1);
        assert_eq!(format!("{}", xy), "1*x*y");
    }

    #[test]
    fn pure_tensor_layout() {
        let field = f();
        let tm = TensorModule::new(2, 3);
        let a = BinaryForm::from_signed(field, &[1, 2]);
        let b = BinaryForm::from_signed(field, &[3, 4, 5]);
        assert_eq!(tm.pure_tensor(&a, &b).unwrap(), vec![3, 4, 5, 6, 8, 10]);
        assert!(tm.pure_tensor(&b, &a).is_err());
    }
}
