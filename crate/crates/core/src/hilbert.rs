//! Finite single-particle spaces and the distinguishable two-particle space built on them.
//!
//! A single-particle mode is a pair (extrinsic, spin), where the extrinsic factor is a
//! lattice site (or momentum mode) and the spin factor is an internal level. Modes are
//! flattened spin-minor: `extrinsic * spin_dim + spin`.
//!
//! Two-particle amplitudes use one layout everywhere: slot-1 major, so the amplitude of
//! slot-1 mode `i` and slot-2 mode `j` lives at `i * total_dim + j`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default threshold for zero tests on O(1) quantities.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance under which a state counts as unit-normalized.
pub const NORMALIZED_TOL: f64 = 1e-12;

/// Shape of the single-particle space `H' ⊗ H''` (extrinsic factor times spin factor).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceSpec {
    extrinsic_dim: usize,
    spin_dim: usize,
}

impl SpaceSpec {
    pub fn new(extrinsic_dim: usize, spin_dim: usize) -> Result<Self> {
        if extrinsic_dim == 0 || spin_dim == 0 {
            return Err(Error::Range(format!(
                "space dimensions must be positive, got extrinsic {extrinsic_dim}, spin {spin_dim}"
            )));
        }
        extrinsic_dim
            .checked_mul(spin_dim)
            .and_then(|n| n.checked_mul(n))
            .ok_or_else(|| Error::Range("space too large".into()))?;
        Ok(Self {
            extrinsic_dim,
            spin_dim,
        })
    }

    /// A spin-1/2 particle on `sites` lattice points.
    pub fn spin_half(sites: usize) -> Result<Self> {
        Self::new(sites, 2)
    }

    pub fn extrinsic_dim(&self) -> usize {
        self.extrinsic_dim
    }

    pub fn spin_dim(&self) -> usize {
        self.spin_dim
    }

    pub fn total_dim(&self) -> usize {
        self.extrinsic_dim * self.spin_dim
    }

    /// Dimension of the two-particle space, `total_dim²`.
    pub fn pair_dim(&self) -> usize {
        self.total_dim() * self.total_dim()
    }

    /// Flat index of the single-particle mode `(extrinsic, spin)`.
    pub fn mode_index(&self, extrinsic: usize, spin: usize) -> Result<usize> {
        if extrinsic >= self.extrinsic_dim {
            return Err(Error::Range(format!(
                "extrinsic index {extrinsic} out of range 0..{}",
                self.extrinsic_dim
            )));
        }
        if spin >= self.spin_dim {
            return Err(Error::Range(format!(
                "spin index {spin} out of range 0..{}",
                self.spin_dim
            )));
        }
        Ok(extrinsic * self.spin_dim + spin)
    }

    /// Inverse of [`SpaceSpec::mode_index`].
    pub fn mode(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.total_dim() {
            return Err(Error::Range(format!(
                "mode index {index} out of range 0..{}",
                self.total_dim()
            )));
        }
        Ok((index / self.spin_dim, index % self.spin_dim))
    }

    fn expect_same(&self, other: &SpaceSpec) -> Result<()> {
        if self != other {
            return Err(Error::Dimension(format!(
                "space {}x{} does not match {}x{}",
                self.extrinsic_dim, self.spin_dim, other.extrinsic_dim, other.spin_dim
            )));
        }
        Ok(())
    }
}

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_finite<'a>(values: impl IntoIterator<Item = &'a Complex64>, what: &str) -> Result<()> {
    if values.into_iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} contains NaN or infinity")))
    }
}

/// A one-particle ket.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleVector {
    space: SpaceSpec,
    amplitudes: DVector<Complex64>,
}

impl SingleParticleVector {
    pub fn new(space: SpaceSpec, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} for a space of dimension {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        check_finite(amplitudes.iter(), "single-particle vector")?;
        Ok(Self { space, amplitudes })
    }

    pub fn from_slice(space: SpaceSpec, amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(space, DVector::from_column_slice(amplitudes))
    }

    pub fn basis(space: SpaceSpec, mode: usize) -> Result<Self> {
        space.mode(mode)?;
        let mut amplitudes = DVector::zeros(space.total_dim());
        amplitudes[mode] = Complex64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    /// `|x, spin⟩` on a lattice.
    pub fn site(space: SpaceSpec, site: usize, spin: usize) -> Result<Self> {
        Self::basis(space, space.mode_index(site, spin)?)
    }

    /// Places an extrinsic wavefunction on a single spin level: `|f⟩ ⊗ |spin⟩`.
    pub fn with_spin(space: SpaceSpec, extrinsic: &DVector<Complex64>, spin: usize) -> Result<Self> {
        if extrinsic.len() != space.extrinsic_dim() {
            return Err(Error::Dimension(format!(
                "extrinsic wavefunction of length {} for {} sites",
                extrinsic.len(),
                space.extrinsic_dim()
            )));
        }
        space.mode_index(0, spin)?;
        let mut amplitudes = DVector::zeros(space.total_dim());
        for (x, &a) in extrinsic.iter().enumerate() {
            amplitudes[x * space.spin_dim() + spin] = a;
        }
        Self::new(space, amplitudes)
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &SingleParticleVector) -> Result<Complex64> {
        self.space.expect_same(&other.space)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            space: self.space,
            amplitudes: &self.amplitudes * factor,
        }
    }

    pub fn plus(&self, other: &SingleParticleVector) -> Result<Self> {
        self.space.expect_same(&other.space)?;
        Ok(Self {
            space: self.space,
            amplitudes: &self.amplitudes + &other.amplitudes,
        })
    }
}

/// Lattice plane wave `e^{2πi m x / L} / √L` over the extrinsic factor alone.
pub fn plane_wave_extrinsic(mode: usize, sites: usize) -> Result<DVector<Complex64>> {
    if sites == 0 || mode >= sites {
        return Err(Error::Range(format!(
            "momentum mode {mode} out of range 0..{sites}"
        )));
    }
    let norm = 1.0 / (sites as f64).sqrt();
    Ok(DVector::from_fn(sites, |x, _| {
        // reduce m·x first so the phase argument stays in [0, 2π)
        let turns = ((mode * x) % sites) as f64 / sites as f64;
        Complex64::from_polar(norm, 2.0 * PI * turns)
    }))
}

/// The momentum ket `|k_m, spin⟩` with `k_m = 2π m / L` on the periodic lattice of the space.
pub fn plane_wave(mode: usize, spin: usize, space: SpaceSpec) -> Result<SingleParticleVector> {
    let wave = plane_wave_extrinsic(mode, space.extrinsic_dim())?;
    SingleParticleVector::with_spin(space, &wave, spin)
}

/// Lattice wavenumber of mode `m`: `2π m / L`.
pub fn wavenumber(mode: usize, sites: usize) -> f64 {
    2.0 * PI * mode as f64 / sites as f64
}

/// A dense operator on the single-particle space.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleOperator {
    space: SpaceSpec,
    entries: DMatrix<Complex64>,
}

impl OneParticleOperator {
    pub fn new(space: SpaceSpec, entries: DMatrix<Complex64>) -> Result<Self> {
        let n = space.total_dim();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::Dimension(format!(
                "operator of shape {}x{} for a space of dimension {n}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        check_finite(entries.iter(), "operator")?;
        Ok(Self { space, entries })
    }

    pub fn identity(space: SpaceSpec) -> Self {
        let n = space.total_dim();
        Self {
            space,
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(space: SpaceSpec) -> Self {
        let n = space.total_dim();
        Self {
            space,
            entries: DMatrix::zeros(n, n),
        }
    }

    /// `extrinsic ⊗ 1_spin`.
    pub fn from_extrinsic(space: SpaceSpec, extrinsic: &DMatrix<Complex64>) -> Result<Self> {
        let l = space.extrinsic_dim();
        if extrinsic.nrows() != l || extrinsic.ncols() != l {
            return Err(Error::Dimension(format!(
                "extrinsic operator of shape {}x{} for {l} sites",
                extrinsic.nrows(),
                extrinsic.ncols()
            )));
        }
        let s = space.spin_dim();
        let mut entries = DMatrix::zeros(space.total_dim(), space.total_dim());
        for x in 0..l {
            for y in 0..l {
                let value = extrinsic[(x, y)];
                if value == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for spin in 0..s {
                    entries[(x * s + spin, y * s + spin)] = value;
                }
            }
        }
        Self::new(space, entries)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &SingleParticleVector, v: &SingleParticleVector) -> Result<Self> {
        u.space.expect_same(&v.space)?;
        Ok(Self {
            space: u.space,
            entries: &u.amplitudes * v.amplitudes.adjoint(),
        })
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn apply(&self, v: &SingleParticleVector) -> Result<SingleParticleVector> {
        self.space.expect_same(&v.space)?;
        Ok(SingleParticleVector {
            space: self.space,
            amplitudes: &self.entries * &v.amplitudes,
        })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            space: self.space,
            entries: &self.entries * factor,
        }
    }

    /// Largest column 2-norm, a cheap stand-in for the operator norm.
    pub fn max_column_norm(&self) -> f64 {
        self.entries
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        max_abs(&(&self.entries - self.entries.adjoint())) < tol
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        max_abs(&(&self.entries * &self.entries - &self.entries)) < tol
    }

    /// Hermitian and idempotent within `tol`.
    pub fn is_orthogonal_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.is_idempotent(tol)
    }
}

/// A vector in `H(2) = H(1) ⊗ H(1)`, stored slot-1 major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleState {
    space: SpaceSpec,
    amplitudes: DVector<Complex64>,
    normalized: bool,
}

impl TwoParticleState {
    pub fn new(space: SpaceSpec, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.pair_dim() {
            return Err(Error::Dimension(format!(
                "two-particle vector of length {} for pair dimension {}",
                amplitudes.len(),
                space.pair_dim()
            )));
        }
        check_finite(amplitudes.iter(), "two-particle state")?;
        Ok(Self::from_parts(space, amplitudes))
    }

    fn from_parts(space: SpaceSpec, amplitudes: DVector<Complex64>) -> Self {
        let normalized = (amplitudes.norm() - 1.0).abs() < NORMALIZED_TOL;
        Self {
            space,
            amplitudes,
            normalized,
        }
    }

    pub fn zeros(space: SpaceSpec) -> Self {
        Self::from_parts(space, DVector::zeros(space.pair_dim()))
    }

    /// `e_i ⊗ e_j`.
    pub fn basis(space: SpaceSpec, slot1: usize, slot2: usize) -> Result<Self> {
        let mut state = Self::zeros(space);
        state.set(slot1, slot2, Complex64::new(1.0, 0.0))?;
        Ok(Self::from_parts(space, state.amplitudes))
    }

    /// Builds the state whose coefficient matrix is `matrix` (rows: slot 1, columns: slot 2).
    pub fn from_matrix(space: SpaceSpec, matrix: &DMatrix<Complex64>) -> Result<Self> {
        let n = space.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "coefficient matrix of shape {}x{} for single-particle dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Self::new(
            space,
            DVector::from_fn(n * n, |k, _| matrix[(k / n, k % n)]),
        )
    }

    fn set(&mut self, slot1: usize, slot2: usize, value: Complex64) -> Result<()> {
        let k = self.flat_index(slot1, slot2)?;
        self.amplitudes[k] = value;
        Ok(())
    }

    pub fn flat_index(&self, slot1: usize, slot2: usize) -> Result<usize> {
        let n = self.space.total_dim();
        if slot1 >= n || slot2 >= n {
            return Err(Error::Range(format!(
                "mode pair ({slot1}, {slot2}) out of range 0..{n}"
            )));
        }
        Ok(slot1 * n + slot2)
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Amplitude of slot-1 mode `slot1` and slot-2 mode `slot2`.
    pub fn amplitude(&self, slot1: usize, slot2: usize) -> Result<Complex64> {
        Ok(self.amplitudes[self.flat_index(slot1, slot2)?])
    }

    /// Coefficient matrix `C[i][j] = ψ(i, j)`.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let n = self.space.total_dim();
        DMatrix::from_row_slice(n, n, self.amplitudes.as_slice())
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// True when the state was constructed with unit norm (within 1e-12).
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(|z| z.norm_sqr() == 0.0)
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::DegenerateInput("cannot normalize the zero state".into()));
        }
        Ok(Self::from_parts(self.space, &self.amplitudes / Complex64::new(norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_parts(self.space, &self.amplitudes * factor)
    }

    pub fn plus(&self, other: &TwoParticleState) -> Result<Self> {
        self.space.expect_same(&other.space)?;
        Ok(Self::from_parts(self.space, &self.amplitudes + &other.amplitudes))
    }

    pub fn minus(&self, other: &TwoParticleState) -> Result<Self> {
        self.space.expect_same(&other.space)?;
        Ok(Self::from_parts(self.space, &self.amplitudes - &other.amplitudes))
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &TwoParticleState) -> Result<f64> {
        self.space.expect_same(&other.space)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoParticleState) -> Result<Complex64> {
        inner_product(self, other)
    }

    /// Iterates `((slot1, slot2), amplitude)` over all entries in flat order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        let n = self.space.total_dim();
        self.amplitudes
            .iter()
            .enumerate()
            .map(move |(k, &a)| ((k / n, k % n), a))
    }

    pub(crate) fn map_matrix(
        &self,
        f: impl FnOnce(DMatrix<Complex64>) -> DMatrix<Complex64>,
    ) -> Self {
        let n = self.space.total_dim();
        let m = f(self.to_matrix());
        Self::from_parts(
            self.space,
            DVector::from_fn(n * n, |k, _| m[(k / n, k % n)]),
        )
    }
}

/// `u ⊗ v`.
pub fn tensor_state(u: &SingleParticleVector, v: &SingleParticleVector) -> Result<TwoParticleState> {
    u.space.expect_same(&v.space)?;
    let n = u.space.total_dim();
    let a = &u.amplitudes;
    let b = &v.amplitudes;
    Ok(TwoParticleState::from_parts(
        u.space,
        DVector::from_fn(n * n, |k, _| a[k / n] * b[k % n]),
    ))
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &TwoParticleState, b: &TwoParticleState) -> Result<Complex64> {
    a.space.expect_same(&b.space)?;
    Ok(a.amplitudes.dotc(&b.amplitudes))
}
