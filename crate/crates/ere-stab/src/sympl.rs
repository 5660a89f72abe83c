//! Symplectic linear algebra on Sp(4): spectra, nullities, Krein signs, normal forms, splitting numbers.

use crate::common::{singular_values, Error, Result};
use nalgebra::{Complex, DMatrix, DVector, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

type C64 = Complex<f64>;

/// Eigenvalues closer than this (relative) are treated as one perturbed multiple eigenvalue.
pub const CLUSTER_TOL: f64 = 1e-5;
/// Distance to U below which a reciprocal pair is placed on U.
pub const UNIT_TOL: f64 = 1e-6;
/// Distance to ±1 below which an eigenvalue is treated as ±1.
pub const PM_ONE_TOL: f64 = 1e-7;
/// Default relative singular-value threshold for kernel dimensions.
pub const RANK_TOL: f64 = 1e-8;

pub fn j4() -> Matrix4<f64> {
    #[rustfmt::skip]
    let j = Matrix4::new(
        0.0, 0.0, -1.0, 0.0,
        0.0, 0.0, 0.0, -1.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
    );
    j
}

fn j4c() -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, k| C64::new(j4()[(i, k)], 0.0))
}

fn to_c(m: &Matrix4<f64>) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, k| C64::new(m[(i, k)], 0.0))
}

fn shifted(m: &Matrix4<f64>, omega: C64) -> DMatrix<C64> {
    let mut a = to_c(m);
    for i in 0..4 {
        a[(i, i)] -= omega;
    }
    a
}

pub fn spectral_norm(m: &Matrix4<f64>) -> f64 {
    m.singular_values().max()
}

/// Symplectic residual: `(absolute, relative)` where relative divides `‖MᵀJM − J‖_∞` by `max(1, ‖M‖_∞²)`.
pub fn symplectic_residual(m: &Matrix4<f64>) -> (f64, f64) {
    let j = j4();
    let r = (m.transpose() * j * m - j).abs().row_sum().max();
    let n = m.abs().row_sum().max();
    (r, r / (n * n).max(1.0))
}

/// Exact inverse of a symplectic matrix.
pub fn symplectic_inverse(m: &Matrix4<f64>) -> Matrix4<f64> {
    let j = j4();
    -(j * m.transpose() * j)
}

fn cluster_average(vals: &mut [C64], rel: f64) {
    let n = vals.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for k in i + 1..n {
            if (vals[i] - vals[k]).norm() < rel * vals[i].norm().max(vals[k].norm()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, k));
                parent[a] = b;
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let orig = vals.to_vec();
    for i in 0..n {
        let members: Vec<C64> = (0..n).filter(|&k| roots[k] == roots[i]).map(|k| orig[k]).collect();
        vals[i] = members.iter().sum::<C64>() / members.len() as f64;
    }
}

/// Distance from U below which a pair is projected onto U. Grows with `‖M‖` because eigenvalues
/// of norm one are only resolved to about `ε‖M‖`.
pub fn unit_snap_tol(m: &Matrix4<f64>) -> f64 {
    UNIT_TOL.max(16.0 * f64::EPSILON * spectral_norm(m))
}

/// Eigenvalues of a 4×4 symplectic matrix, returned as two reciprocal pairs `[λ, 1/λ, μ, 1/μ]`.
///
/// Large eigenvalues come from `M`, small ones from `M⁻¹ = −JMᵀJ`. Near-coincident eigenvalues are
/// averaged and pairs within [`unit_snap_tol`] of U are projected onto U.
pub fn symplectic_spectrum(m: &Matrix4<f64>) -> [C64; 4] {
    let eta = 1e-3;
    let l: Vec<C64> = m.complex_eigenvalues().iter().copied().collect();
    let r: Vec<C64> = symplectic_inverse(m).complex_eigenvalues().iter().map(|mu| C64::new(1.0, 0.0) / mu).collect();
    let large: Vec<C64> = l.iter().copied().filter(|z| z.norm() > 1.0 + eta).collect();
    let small: Vec<C64> = r.iter().copied().filter(|z| z.norm() < 1.0 - eta).collect();
    let near: Vec<C64> = l.iter().copied().filter(|z| (z.norm() - 1.0).abs() <= eta).collect();
    let vals: Vec<C64> = if large.len() == small.len() && large.len() + small.len() + near.len() == 4 {
        large.into_iter().chain(small).chain(near).collect()
    } else {
        l
    };
    arrange(vals, unit_snap_tol(m))
}

/// Clusters, pairs reciprocally, snaps pairs within `snap` of U and orders the pairs.
fn arrange(mut vals: Vec<C64>, snap: f64) -> [C64; 4] {
    cluster_average(&mut vals, CLUSTER_TOL);
    let pairings = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    let cost = |p: &[usize; 4]| (vals[p[0]] * vals[p[1]] - 1.0).norm() + (vals[p[2]] * vals[p[3]] - 1.0).norm();
    let best = pairings.iter().min_by(|a, b| cost(a).partial_cmp(&cost(b)).unwrap()).unwrap();
    let mut pairs = [[vals[best[0]], vals[best[1]]], [vals[best[2]], vals[best[3]]]];
    for p in pairs.iter_mut() {
        if (p[0].norm() - 1.0).abs() < snap && (p[1].norm() - 1.0).abs() < snap {
            p[0] /= p[0].norm();
            p[1] /= p[1].norm();
        }
        if p[1].norm() > p[0].norm() || (p[0].norm() == p[1].norm() && p[1].im > p[0].im) {
            p.swap(0, 1);
        }
    }
    let key = |p: &[C64; 2]| (p[0].norm(), p[0].arg());
    if key(&pairs[1]) > key(&pairs[0]) {
        pairs.swap(0, 1);
    }
    [pairs[0][0], pairs[0][1], pairs[1][0], pairs[1][1]]
}

const PRODUCT_SWEEPS: usize = 64;
const SPLIT_TOL: f64 = 1e-14;
/// Below this `‖M‖₂` the explicit product is accurate enough and the factors are not used.
const PRODUCT_NORM: f64 = 1e2;

/// Diagonal blocks of `QᵀMQ` for `M = F_k ⋯ F_1`, by orthogonal iteration through the factors.
///
/// `F_i Q_{i−1} = Q_i R_i` with `Q_k` wrapped back onto `Q_0`. Each block is a product of the
/// matching blocks of the `R_i`, so its entries stay at the scale of its own eigenvalues however
/// large `‖M‖` is. Moduli that have not separated after [`PRODUCT_SWEEPS`] periods share a block.
pub fn product_blocks(factors: &[Matrix4<f64>]) -> Vec<DMatrix<f64>> {
    let mut q = Matrix4::<f64>::identity();
    for sweep in 0..PRODUCT_SWEEPS {
        let start = q;
        let mut rs = Vec::with_capacity(factors.len());
        for f in factors {
            let qr = (f * q).qr();
            let (mut qn, mut r) = (qr.q(), qr.r());
            for i in 0..4 {
                if r[(i, i)] < 0.0 {
                    r.row_mut(i).neg_mut();
                    qn.column_mut(i).neg_mut();
                }
            }
            q = qn;
            rs.push(r);
        }
        let w = start.transpose() * q;
        let cuts: Vec<usize> = (1..4).filter(|&i| w.view((i, 0), (4 - i, i)).amax() < SPLIT_TOL).collect();
        if cuts.len() < 3 && sweep + 1 < PRODUCT_SWEEPS {
            continue;
        }
        if let Some(last) = rs.last_mut() {
            *last = w * *last;
        }
        let mut bounds = vec![0];
        bounds.extend(cuts);
        bounds.push(4);
        return bounds
            .windows(2)
            .map(|g| {
                let n = g[1] - g[0];
                rs.iter().fold(DMatrix::identity(n, n), |acc, r| r.view((g[0], g[0]), (n, n)) * acc)
            })
            .collect();
    }
    unreachable!("the last sweep always returns")
}

/// [`symplectic_spectrum`] of `M = F_k ⋯ F_1`, from [`product_blocks`] when `M` is large.
///
/// The explicit product resolves eigenvalues only to about `ε‖M‖`, which loses the small members
/// of hyperbolic pairs and anything near U once `M` is strongly hyperbolic.
pub fn factored_spectrum(factors: &[Matrix4<f64>]) -> [C64; 4] {
    let m = factors.iter().fold(Matrix4::identity(), |acc, f| f * acc);
    if spectral_norm(&m) <= PRODUCT_NORM {
        return symplectic_spectrum(&m);
    }
    let blocks = product_blocks(factors);
    if blocks.len() == 1 {
        return symplectic_spectrum(&m);
    }
    let vals: Vec<C64> =
        blocks.iter().flat_map(|b| b.complex_eigenvalues().iter().copied().collect::<Vec<_>>()).collect();
    arrange(vals, UNIT_TOL)
}

/// [`nullity`] of `M = F_k ⋯ F_1`, summed over the blocks of [`product_blocks`] when `M` is large.
pub fn factored_nullity(factors: &[Matrix4<f64>], omega: C64, tol: f64) -> usize {
    let m = factors.iter().fold(Matrix4::identity(), |acc, f| f * acc);
    if spectral_norm(&m) <= PRODUCT_NORM {
        return nullity(&m, omega, tol);
    }
    let blocks = product_blocks(factors);
    if blocks.len() == 1 {
        return nullity(&m, omega, tol);
    }
    blocks
        .iter()
        .map(|b| {
            let n = b.nrows();
            let mut a = b.map(|x| C64::new(x, 0.0));
            for i in 0..n {
                a[(i, i)] -= omega;
            }
            let thr = tol.max(1e3 * f64::EPSILON * b.norm());
            singular_values(&a).iter().filter(|&&s| s <= thr).count()
        })
        .sum()
}

/// `dim ker(M − ωI)` by singular values below `max(tol, 1000·ε·‖M‖₂)`.
///
/// The second term is the rounding noise of `M` itself. Scaling `tol` by `‖M‖` instead would
/// count genuine O(1) singular values as zero once `M` is strongly hyperbolic.
pub fn nullity(m: &Matrix4<f64>, omega: C64, tol: f64) -> usize {
    let thr = tol.max(1e3 * f64::EPSILON * spectral_norm(m));
    singular_values(&shifted(m, omega)).iter().filter(|&&s| s <= thr).count()
}

/// Number of eigenvalues (with multiplicity) equal to `omega` in the clustered spectrum.
pub fn algebraic_multiplicity(spectrum: &[C64; 4], omega: C64, tol: f64) -> usize {
    spectrum.iter().filter(|z| (**z - omega).norm() < tol).count()
}

/// Orthonormal basis of the column space of `a`, keeping directions with singular value above `rel·σ_max`.
fn range_basis(a: &DMatrix<C64>, rank: usize) -> DMatrix<C64> {
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &k| svd.singular_values[k].partial_cmp(&svd.singular_values[i]).unwrap());
    DMatrix::from_fn(a.nrows(), rank, |i, k| u[(i, idx[k])])
}

fn kernel_basis(a: &DMatrix<C64>, dim: usize) -> DMatrix<C64> {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &k| svd.singular_values[i].partial_cmp(&svd.singular_values[k]).unwrap());
    DMatrix::from_fn(a.ncols(), dim, |i, k| vt[(idx[k], i)].conj())
}

/// Basis of the generalized eigenspace of the cluster at `omega`, via the spectral projector
/// built from the remaining eigenvalues.
fn generalized_eigenspace(m: &Matrix4<f64>, spectrum: &[C64; 4], omega: C64, tol: f64) -> DMatrix<C64> {
    let mut p = DMatrix::<C64>::identity(4, 4);
    let mut alg = 0;
    for z in spectrum {
        if (*z - omega).norm() < tol {
            alg += 1;
        } else {
            p = shifted(m, *z) * p / (omega - z);
        }
    }
    range_basis(&p, alg)
}

/// Krein form `κ(v) = −i vᴴJv`.
pub fn krein_form(v: &DVector<C64>) -> f64 {
    let jv = j4c() * v;
    (C64::new(0.0, -1.0) * v.dotc(&jv)).re
}

/// Krein sign of the eigenvector at a simple unit eigenvalue `omega ∉ {±1}`.
pub fn krein_sign(m: &Matrix4<f64>, omega: C64, tol: f64) -> Result<i8> {
    if (omega.norm() - 1.0).abs() > UNIT_TOL.max(tol) || omega.im.abs() < PM_ONE_TOL {
        return Err(Error::Domain(format!("omega = {omega} must lie on U away from ±1")));
    }
    let v = kernel_basis(&shifted(m, omega), 1).column(0).into_owned();
    let k = krein_form(&v);
    if k.abs() < tol.max(1e-12) {
        return Err(Error::DegenerateKrein(k.abs()));
    }
    Ok(if k > 0.0 { 1 } else { -1 })
}

/// Basic normal-form blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Block {
    /// `D(λ)`, `|λ| > 1`.
    D(f64),
    /// `R(θ)`, `θ ∈ (0, π) ∪ (π, 2π)`.
    R(f64),
    /// `N₁(λ, b)` with `λ = ±1`, `b ∈ {−1, 0, 1}`; `b = 0` is `±I₂`.
    N1 { lambda: f64, b: i8 },
    /// `N₂(e^{iθ}, b)`, `θ ∈ (0, π)`.
    N2 { theta: f64, trivial: bool },
    /// `M₂(λ, c)` with `λ = ±1` and one-dimensional kernel.
    M2 { lambda: f64 },
    /// Complex quadruple `{λ, λ̄, 1/λ, 1/λ̄}` with `|λ| > 1`.
    Quadruple { re: f64, im: f64 },
}

impl Block {
    pub fn dim(&self) -> usize {
        match self {
            Block::N2 { .. } | Block::M2 { .. } | Block::Quadruple { .. } => 4,
            _ => 2,
        }
    }

    pub fn on_unit_circle(&self) -> bool {
        !matches!(self, Block::D(_) | Block::Quadruple { .. })
    }

    pub fn semisimple(&self) -> bool {
        match self {
            Block::N1 { b, .. } => *b == 0,
            Block::N2 { .. } | Block::M2 { .. } => false,
            _ => true,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::D(l) => write!(f, "D({l:.6})"),
            Block::R(t) => write!(f, "R({t:.6})"),
            Block::N1 { lambda, b: 0 } => {
                if *lambda > 0.0 {
                    write!(f, "I2")
                } else {
                    write!(f, "-I2")
                }
            }
            Block::N1 { lambda, b } => write!(f, "N1({}, {b})", *lambda as i32),
            Block::N2 { theta, trivial } => {
                write!(f, "N2(e^i{theta:.6}, {})", if *trivial { "trivial" } else { "non-trivial" })
            }
            Block::M2 { lambda } => write!(f, "M2({})", *lambda as i32),
            Block::Quadruple { re, im } => write!(f, "Q({re:.6}{im:+.6}i)"),
        }
    }
}

/// Krein sign attached to the upper-half-plane eigenvalue `e^{iψ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KreinDatum {
    pub psi: f64,
    pub signs: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClass {
    pub blocks: Vec<Block>,
    pub eigenvalues: [C64; 4],
    pub krein: Vec<KreinDatum>,
    pub nullity_plus1: usize,
    pub nullity_minus1: usize,
}

impl SpectrumClass {
    pub fn label(&self) -> String {
        self.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("⋄")
    }

    pub fn all_on_unit_circle(&self) -> bool {
        self.blocks.iter().all(|b| b.on_unit_circle())
    }

    pub fn none_on_unit_circle(&self) -> bool {
        self.blocks.iter().all(|b| !b.on_unit_circle())
    }

    pub fn semisimple(&self) -> bool {
        self.blocks.iter().all(|b| b.semisimple())
    }

    /// `R` angles in `(0, 2π)` in block order.
    pub fn rotation_angles(&self) -> Vec<f64> {
        self.blocks.iter().filter_map(|b| if let Block::R(t) = b { Some(*t) } else { None }).collect()
    }

    /// Real multipliers `|λ| > 1` of the `D` blocks.
    pub fn hyperbolic_multipliers(&self) -> Vec<f64> {
        self.blocks.iter().filter_map(|b| if let Block::D(l) = b { Some(*l) } else { None }).collect()
    }
}

impl fmt::Display for SpectrumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

pub fn r2(theta: f64) -> Matrix2<f64> {
    Matrix2::new(theta.cos(), -theta.sin(), theta.sin(), theta.cos())
}

pub fn d2(lambda: f64) -> Matrix2<f64> {
    Matrix2::new(lambda, 0.0, 0.0, 1.0 / lambda)
}

pub fn n1(lambda: f64, a: f64) -> Matrix2<f64> {
    Matrix2::new(lambda, a, 0.0, lambda)
}

/// `N₂(e^{iθ}, b)` with `b = R(θ)·S` for symmetric `S = [[s11, s12], [s12, s22]]`.
pub fn n2(theta: f64, s11: f64, s12: f64, s22: f64) -> Matrix4<f64> {
    let r = r2(theta);
    let b = r * Matrix2::new(s11, s12, s12, s22);
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&r);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&r);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    m
}

#[rustfmt::skip]
pub fn m2(lambda: f64, c1: f64, c2: f64) -> Matrix4<f64> {
    Matrix4::new(
        lambda, 1.0, c1, 0.0,
        0.0, lambda, c2, -lambda * c2,
        0.0, 0.0, 1.0 / lambda, 0.0,
        0.0, 0.0, -1.0 / (lambda * lambda), 1.0 / lambda,
    )
}

/// Symplectic sum `M₁ ⋄ M₂` of two 2×2 matrices in the coordinates `(x₁, x₂, y₁, y₂)`.
pub fn diamond(a: &Matrix2<f64>, b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for (off, blk) in [(0, a), (1, b)] {
        m[(off, off)] = blk[(0, 0)];
        m[(off, off + 2)] = blk[(0, 1)];
        m[(off + 2, off)] = blk[(1, 0)];
        m[(off + 2, off + 2)] = blk[(1, 1)];
    }
    m
}

fn angle_of(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Blocks for the cluster at `λ = ±1` with algebraic multiplicity `alg`.
fn blocks_at_pm_one(
    m: &Matrix4<f64>,
    spectrum: &[C64; 4],
    lambda: f64,
    alg: usize,
    nu: usize,
    radius: f64,
    tol: f64,
) -> Result<Vec<Block>> {
    let e = generalized_eigenspace(m, spectrum, C64::new(lambda, 0.0), radius.max(CLUSTER_TOL * 10.0));
    let a = shifted(m, C64::new(lambda, 0.0));
    let form = a.transpose() * j4c();
    let sym = (&form + form.transpose()) * C64::new(0.5, 0.0);
    let restricted = e.adjoint() * sym * &e;
    let herm = (&restricted + restricted.adjoint()) * C64::new(0.5, 0.0);
    let ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    let scale = tol.sqrt() * spectral_norm(m).max(1.0);
    let pos = ev.iter().filter(|&&x| x > scale).count();
    let neg = ev.iter().filter(|&&x| x < -scale).count();
    let jordan = alg - nu;
    let unresolved = || {
        Error::UnresolvedClass(format!(
            "eigenvalue {lambda} with algebraic multiplicity {alg}, nullity {nu}, form signature ({pos},{neg})"
        ))
    };
    if alg == 4 && nu == 1 {
        return Ok(vec![Block::M2 { lambda }]);
    }
    if nu > alg || nu * 2 < alg || pos + neg != jordan {
        return Err(unresolved());
    }
    let mut out = vec![Block::N1 { lambda, b: 0 }; (2 * nu - alg) / 2];
    for _ in 0..neg {
        out.push(Block::N1 { lambda, b: 1 });
    }
    for _ in 0..pos {
        out.push(Block::N1 { lambda, b: -1 });
    }
    Ok(out)
}

/// Blocks for a conjugate pair `e^{±iψ}` with multiplicity `alg` each.
fn blocks_at_unit_pair(
    m: &Matrix4<f64>,
    spectrum: &[C64; 4],
    omega: C64,
    alg: usize,
    tol: f64,
) -> Result<(Vec<Block>, KreinDatum)> {
    let psi = angle_of(omega);
    let nu = nullity(m, omega, tol);
    if alg == 1 {
        let s = krein_sign(m, omega, tol)?;
        let theta = if s > 0 { psi } else { 2.0 * PI - psi };
        let signs = if s > 0 { (1, 0) } else { (0, 1) };
        return Ok((vec![Block::R(theta)], KreinDatum { psi, signs }));
    }
    if alg != 2 {
        return Err(Error::UnresolvedClass(format!("unit eigenvalue {omega} with multiplicity {alg}")));
    }
    let a = shifted(m, omega);
    if nu >= 2 {
        let v = kernel_basis(&a, 2);
        let g = (v.adjoint() * j4c() * &v) * C64::new(0.0, -1.0);
        let herm = (&g + g.adjoint()) * C64::new(0.5, 0.0);
        let ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        let pos = ev.iter().filter(|&&x| x > tol.sqrt()).count();
        let neg = ev.iter().filter(|&&x| x < -tol.sqrt()).count();
        if pos + neg != 2 {
            return Err(Error::DegenerateKrein(ev.iter().fold(f64::INFINITY, |a, b| a.min(b.abs()))));
        }
        let mut blocks = vec![Block::R(psi); pos];
        blocks.extend(vec![Block::R(2.0 * PI - psi); neg]);
        return Ok((blocks, KreinDatum { psi, signs: (pos, neg) }));
    }
    let e = generalized_eigenspace(m, spectrum, omega, CLUSTER_TOL * 10.0);
    let v = kernel_basis(&a, 1).column(0).into_owned();
    let w0 = e.column(0).into_owned();
    let w1 = e.column(1).into_owned();
    let w = if (&w0 - &v * v.dotc(&w0)).norm() > (&w1 - &v * v.dotc(&w1)).norm() {
        &w0 - &v * v.dotc(&w0)
    } else {
        &w1 - &v * v.dotc(&w1)
    };
    let aw = &a * &w;
    let q = -(omega.conj() * w.dotc(&(j4c() * aw)));
    if q.re.abs() < tol {
        return Err(Error::UnresolvedClass(format!("N2 type undecided at {omega}: |q| = {:e}", q.re.abs())));
    }
    Ok((vec![Block::N2 { theta: psi, trivial: q.re > 0.0 }], KreinDatum { psi, signs: (1, 1) }))
}

/// Normal-form label of a 4×4 symplectic matrix.
pub fn classify(m: &Matrix4<f64>, tol: f64) -> Result<SpectrumClass> {
    classify_with_spectrum(m, symplectic_spectrum(m), tol)
}

/// [`classify`] with the eigenvalues supplied, e.g. from [`factored_spectrum`].
pub fn classify_with_spectrum(m: &Matrix4<f64>, spectrum: [C64; 4], tol: f64) -> Result<SpectrumClass> {
    let mut nullity_plus1 = nullity(m, C64::new(1.0, 0.0), tol);
    let mut nullity_minus1 = nullity(m, C64::new(-1.0, 0.0), tol);
    let mut blocks = Vec::new();
    let mut krein = Vec::new();
    let on_u = |z: &C64| (z.norm() - 1.0).abs() < UNIT_TOL;

    let mut radii = [PM_ONE_TOL; 2];
    for (slot, lambda) in [1.0, -1.0].into_iter().enumerate() {
        let nu = if lambda > 0.0 { nullity_plus1 } else { nullity_minus1 };
        // A perturbed Jordan chain splits by a root of the roundoff, so widen until alg >= nu.
        let mut alg = 0;
        let widest = (tol.sqrt() * spectral_norm(m).max(1.0)).min(1e-2);
        for r in [PM_ONE_TOL, 1e-5, 1e-4, 1e-3, widest] {
            radii[slot] = r;
            alg = algebraic_multiplicity(&spectrum, C64::new(lambda, 0.0), r);
            if alg >= nu {
                break;
            }
        }
        // The relative rank test overcounts for large |M|; no eigenvalue nearby means no kernel.
        let nu = nu.min(alg);
        if lambda > 0.0 {
            nullity_plus1 = nu;
        } else {
            nullity_minus1 = nu;
        }
        if alg == 0 {
            continue;
        }
        if alg % 2 == 1 {
            return Err(Error::UnresolvedClass(format!("odd multiplicity {alg} at {lambda}")));
        }
        blocks.extend(blocks_at_pm_one(m, &spectrum, lambda, alg, nu, radii[slot], tol)?);
    }

    let mut upper: Vec<C64> = spectrum
        .iter()
        .copied()
        .filter(|z| on_u(z) && z.im > PM_ONE_TOL && (*z - 1.0).norm() >= radii[0] && (*z + 1.0).norm() >= radii[1])
        .collect();
    upper.sort_by(|a, b| angle_of(*a).partial_cmp(&angle_of(*b)).unwrap());
    let mut i = 0;
    while i < upper.len() {
        let omega = upper[i];
        let alg = upper.iter().filter(|z| (**z - omega).norm() < PM_ONE_TOL).count();
        let (b, k) = blocks_at_unit_pair(m, &spectrum, omega, alg, tol)?;
        blocks.extend(b);
        krein.push(k);
        i += alg;
    }

    let off: Vec<C64> = spectrum.iter().copied().filter(|z| !on_u(z) && z.norm() > 1.0).collect();
    let real_off: Vec<f64> = off.iter().filter(|z| z.im.abs() <= 1e-9 * z.norm()).map(|z| z.re).collect();
    if off.len() == 2 && real_off.is_empty() {
        let z = if off[0].im > 0.0 { off[0] } else { off[1] };
        blocks.push(Block::Quadruple { re: z.re, im: z.im });
    } else if real_off.len() == off.len() {
        let mut r = real_off;
        r.sort_by(|a, b| b.partial_cmp(a).unwrap());
        blocks.extend(r.into_iter().map(Block::D));
    } else {
        return Err(Error::UnresolvedClass(format!("off-circle spectrum {off:?}")));
    }

    let dim: usize = blocks.iter().map(|b| b.dim()).sum();
    if dim != 4 {
        return Err(Error::UnresolvedClass(format!("blocks {:?} do not account for spectrum {spectrum:?}", blocks)));
    }
    Ok(SpectrumClass { blocks, eigenvalues: spectrum, krein, nullity_plus1, nullity_minus1 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplittingPair {
    pub omega: C64,
    pub s_plus: i64,
    pub s_minus: i64,
}

fn same_point(a: C64, b: C64) -> bool {
    (a - b).norm() < 1e-6
}

fn block_splitting(b: &Block, omega: C64) -> (i64, i64) {
    let one = C64::new(1.0, 0.0);
    match *b {
        Block::D(_) | Block::Quadruple { .. } => (0, 0),
        Block::R(t) => {
            let z = C64::from_polar(1.0, t);
            if same_point(omega, z) {
                (0, 1)
            } else if same_point(omega, z.conj()) {
                (1, 0)
            } else {
                (0, 0)
            }
        }
        Block::N1 { lambda, b } => {
            if !same_point(omega, one * lambda) {
                (0, 0)
            } else if b == 0 || (b as f64) == lambda {
                (1, 1)
            } else {
                (0, 0)
            }
        }
        Block::N2 { theta, trivial } => {
            let z = C64::from_polar(1.0, theta);
            if same_point(omega, z) || same_point(omega, z.conj()) {
                if trivial {
                    (0, 0)
                } else {
                    (1, 1)
                }
            } else {
                (0, 0)
            }
        }
        Block::M2 { lambda } => {
            if same_point(omega, one * lambda) {
                (1, 1)
            } else {
                (0, 0)
            }
        }
    }
}

/// Splitting numbers at `omega`, summed over the blocks of `cls`.
pub fn splitting_numbers(cls: &SpectrumClass, omega: C64) -> SplittingPair {
    let (s_plus, s_minus) = cls.blocks.iter().fold((0, 0), |acc, b| {
        let (p, m) = block_splitting(b, omega);
        (acc.0 + p, acc.1 + m)
    });
    SplittingPair { omega, s_plus, s_minus }
}

/// `i_{ω₀}` from `i₁` and the splitting numbers of the endpoint matrix.
pub fn iterate_index(i1: i64, cls: &SpectrumClass, theta0: f64) -> i64 {
    let omega0 = C64::from_polar(1.0, theta0);
    let mut idx = i1 + splitting_numbers(cls, C64::new(1.0, 0.0)).s_plus;
    let mut pts: Vec<f64> = Vec::new();
    for z in cls.eigenvalues.iter().filter(|z| (z.norm() - 1.0).abs() < UNIT_TOL) {
        let a = angle_of(*z);
        if a > 1e-6 && a < theta0 - 1e-6 && !pts.iter().any(|p| (p - a).abs() < 1e-6) {
            pts.push(a);
        }
    }
    for a in pts {
        let s = splitting_numbers(cls, C64::from_polar(1.0, a));
        idx += s.s_plus - s.s_minus;
    }
    if theta0 > 1e-6 {
        idx -= splitting_numbers(cls, omega0).s_minus;
    } else {
        idx -= splitting_numbers(cls, omega0).s_plus;
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_symplectic(seed: [f64; 10]) -> Matrix4<f64> {
        let h = Matrix4::new(
            seed[0], seed[1], seed[2], seed[3], seed[1], seed[4], seed[5], seed[6], seed[2], seed[5], seed[7], seed[8],
            seed[3], seed[6], seed[8], seed[9],
        ) * 0.3;
        (j4() * h).exp()
    }

    fn conj(p: &Matrix4<f64>, m: &Matrix4<f64>) -> Matrix4<f64> {
        p * m * symplectic_inverse(p)
    }

    #[test]
    fn normal_forms_are_symplectic() {
        for m in [
            diamond(&r2(1.0), &d2(3.0)),
            n2(1.2, 0.3, -0.5, 0.8),
            m2(-1.0, 0.4, 0.7),
            m2(1.0, 0.0, 0.0),
            diamond(&n1(1.0, 1.0), &n1(-1.0, -1.0)),
        ] {
            assert!(symplectic_residual(&m).0 < 1e-14);
        }
    }

    #[test]
    fn identity_nullity() {
        assert_eq!(nullity(&Matrix4::identity(), C64::new(1.0, 0.0), RANK_TOL), 4);
    }

    #[test]
    fn opposite_krein_signs() {
        let t = PI / 3.0;
        let m = diamond(&r2(t), &r2(2.0 * PI - t));
        let cls = classify(&m, RANK_TOL).unwrap();
        assert_eq!(cls.krein[0].signs, (1, 1));
        let mut ang = cls.rotation_angles();
        ang.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ang[0] - t).abs() < 1e-10 && (ang[1] - (2.0 * PI - t)).abs() < 1e-10);
    }

    #[test]
    fn hyperbolic_pairs() {
        let cls = classify(&diamond(&d2(2.0), &d2(-2.0)), RANK_TOL).unwrap();
        assert_eq!(cls.blocks, vec![Block::D(2.0), Block::D(-2.0)]);
        assert!(cls.none_on_unit_circle());
        let s = splitting_numbers(&cls, C64::new(0.0, 1.0));
        assert_eq!((s.s_plus, s.s_minus), (0, 0));
    }

    #[test]
    fn rotation_angles_survive_conjugation() {
        let p = random_symplectic([0.3, -0.2, 0.5, 0.1, 0.7, -0.4, 0.2, 0.1, 0.6, -0.3]);
        let m = conj(&p, &diamond(&r2(4.0), &r2(1.3)));
        let cls = classify(&m, RANK_TOL).unwrap();
        let mut ang = cls.rotation_angles();
        ang.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ang[0] - 1.3).abs() < 1e-9 && (ang[1] - 4.0).abs() < 1e-9);
    }

    #[test]
    fn n1_signs() {
        let p = random_symplectic([0.1, 0.4, -0.2, 0.3, -0.5, 0.2, 0.6, 0.1, -0.3, 0.2]);
        for (lam, b) in [(1.0, 1), (1.0, -1), (-1.0, 1), (-1.0, -1)] {
            let m = conj(&p, &diamond(&n1(lam, b as f64), &r2(2.0)));
            let cls = classify(&m, RANK_TOL).unwrap();
            assert!(cls.blocks.contains(&Block::N1 { lambda: lam, b }), "{lam} {b}: {}", cls);
        }
        let m = conj(&p, &diamond(&Matrix2::identity(), &n1(1.0, 1.0)));
        let cls = classify(&m, RANK_TOL).unwrap();
        assert_eq!(cls.label(), "I2⋄N1(1, 1)");
        assert_eq!(cls.nullity_plus1, 3);
    }

    #[test]
    fn double_n1_at_minus_one() {
        let m = diamond(&n1(-1.0, 1.0), &n1(-1.0, -1.0));
        let cls = classify(&m, RANK_TOL).unwrap();
        assert_eq!(cls.nullity_minus1, 2);
        let s = splitting_numbers(&cls, C64::new(-1.0, 0.0));
        assert_eq!((s.s_plus, s.s_minus), (1, 1));
    }

    #[test]
    fn n2_triviality_matches_definition() {
        let p = random_symplectic([0.2, 0.1, -0.3, 0.2, 0.4, 0.1, -0.2, 0.3, 0.1, 0.5]);
        for (theta, s) in
            [(1.0, [0.3, 0.7, -0.2]), (1.0, [0.3, -0.7, 0.9]), (2.5, [1.0, 0.2, 0.4]), (4.0, [-0.5, 0.4, 0.6])]
        {
            let raw = n2(theta, s[0], s[1], s[2]);
            let b = raw.fixed_view::<2, 2>(0, 2);
            let trivial = (b[(0, 1)] - b[(1, 0)]) * theta.sin() > 0.0;
            let cls = classify(&conj(&p, &raw), RANK_TOL).unwrap();
            match cls.blocks[0] {
                Block::N2 { trivial: t, .. } => assert_eq!(t, trivial, "theta {theta} s {s:?}"),
                ref other => panic!("expected N2, got {other}"),
            }
        }
    }

    #[test]
    fn splitting_table() {
        let cls = SpectrumClass {
            blocks: vec![Block::R(1.0), Block::N1 { lambda: 1.0, b: 1 }],
            eigenvalues: [
                C64::from_polar(1.0, 1.0),
                C64::from_polar(1.0, -1.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
            ],
            krein: vec![],
            nullity_plus1: 1,
            nullity_minus1: 0,
        };
        let s = splitting_numbers(&cls, C64::from_polar(1.0, 1.0));
        assert_eq!((s.s_plus, s.s_minus), (0, 1));
        let s = splitting_numbers(&cls, C64::new(1.0, 0.0));
        assert_eq!((s.s_plus, s.s_minus), (1, 1));
        // i_{-1} = i_1 + S+(1) - S-(e^{i}) + S+(e^{i})  (no contribution at -1)
        assert_eq!(iterate_index(3, &cls, PI), 3 + 1 - 1);
    }

    #[test]
    fn spectrum_of_large_hyperbolic() {
        let m = diamond(&d2(1e12), &r2(0.7));
        let s = symplectic_spectrum(&m);
        assert!((s[0].re - 1e12).abs() < 1.0);
        assert!((s[1].re - 1e-12).abs() < 1e-20);
        let ang: Vec<f64> = s[2..].iter().map(|z| z.arg().abs()).collect();
        assert!(ang.iter().all(|a| (a - 0.7).abs() < 1e-10));
    }

    proptest! {
        #[test]
        fn nullity_conjugate_symmetric(seed in proptest::array::uniform10(-1.0f64..1.0), t in 0.2f64..3.0) {
            let p = random_symplectic(seed);
            let m = conj(&p, &diamond(&r2(t), &d2(1.7)));
            let w = C64::from_polar(1.0, t);
            prop_assert_eq!(nullity(&m, w, RANK_TOL), nullity(&m, w.conj(), RANK_TOL));
            prop_assert_eq!(nullity(&m, w, RANK_TOL), 1);
        }

        #[test]
        fn splitting_conjugate_symmetry(t1 in 0.2f64..3.0, t2 in 3.3f64..6.0, w in 0.0f64..6.28) {
            let cls = classify(&diamond(&r2(t1), &r2(t2)), RANK_TOL).unwrap();
            for z in [C64::from_polar(1.0, w), C64::from_polar(1.0, t1), C64::from_polar(1.0, t2)] {
                let a = splitting_numbers(&cls, z);
                let b = splitting_numbers(&cls, z.conj());
                prop_assert_eq!(a.s_plus, b.s_minus);
            }
            let total: usize = [1.0, -1.0].iter().map(|l| nullity(&diamond(&r2(t1), &r2(t2)), C64::new(*l, 0.0), RANK_TOL)).sum();
            prop_assert!(total <= 4);
        }

        #[test]
        fn label_stable_under_small_perturbation(t1 in 0.3f64..2.8, l in 1.5f64..4.0, d in proptest::array::uniform10(-1.0f64..1.0)) {
            let m = diamond(&r2(t1), &d2(l));
            let p = random_symplectic(d);
            let eps = (j4() * Matrix4::from_fn(|i, k| 1e-10 * (d[(i + k) % 10] + d[(i * k) % 10]))).exp();
            let a = classify(&m, RANK_TOL).unwrap();
            let b = classify(&conj(&p, &(eps * m)), RANK_TOL).unwrap();
            prop_assert_eq!(a.blocks.len(), b.blocks.len());
            for (x, y) in a.blocks.iter().zip(b.blocks.iter()) {
                match (x, y) {
                    (Block::R(u), Block::R(v)) => prop_assert!((u - v).abs() < 1e-6),
                    (Block::D(u), Block::D(v)) => prop_assert!((u - v).abs() < 1e-6 * u.abs()),
                    _ => prop_assert!(false, "label changed: {} vs {}", a, b),
                }
            }
        }
    }
}
