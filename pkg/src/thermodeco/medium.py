"""Background thermodynamic state and closed-form kinetic coefficients.

Everything downstream (relaxation rates, noise strengths, coupling
constants, the free-energy functional and the equilibrium measure) is a
closed-form function of the background state: temperature T0, specific
heat c0, diffusion constant D0, and the spatial dimension.  Boltzmann's
constant is 1 throughout; all quantities are in self-consistent natural
units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, SingularModeError


@dataclass(frozen=True)
class MediumParams:
    """Uniform background state of the heat-conducting medium.

    T0: background temperature (> 0)
    c0: specific heat per unit volume at T0 (> 0)
    D0: heat diffusion constant (> 0)
    d:  spatial dimension (1, 2 or 3)
    """

    T0: float
    c0: float
    D0: float
    d: int = 1
    beta0: float = field(init=False)

    def __post_init__(self):
        if not (self.T0 > 0 and self.c0 > 0 and self.D0 > 0):
            raise ValueError("T0, c0 and D0 must all be positive")
        if not 1 <= self.d <= 3:
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.d}")
        object.__setattr__(self, "beta0", 1.0 / self.T0)


@dataclass(frozen=True)
class ModeSpec:
    """A single Fourier mode: wavenumber magnitude plus its quadrature weight.

    The weight represents the mode-space measure attached to this mode, so
    mode sums approximate mode integrals when weights are chosen accordingly.
    """

    k: float
    weight: float = 1.0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("wavenumber must be non-negative")
        if not self.weight > 0:
            raise ValueError("quadrature weight must be positive")


@dataclass(frozen=True)
class LatticeField:
    """Real-space temperature perturbation on a uniform periodic lattice.

    extents: grid points per axis; spacing: lattice spacing per axis (a
    scalar is broadcast to all axes); values: real amplitudes at each site,
    shaped like ``extents``.
    """

    d: int
    extents: tuple
    spacing: tuple
    values: np.ndarray

    def __post_init__(self):
        extents = tuple(int(n) for n in np.atleast_1d(self.extents))
        spacing = np.atleast_1d(self.spacing).astype(float)
        if spacing.size == 1:
            spacing = np.repeat(spacing, len(extents))
        spacing = tuple(float(a) for a in spacing)
        if len(extents) != self.d or len(spacing) != self.d:
            raise ValueError("extents and spacing must have one entry per axis")
        if any(n < 1 for n in extents):
            raise ValueError("all extents must be >= 1")
        if any(a <= 0 for a in spacing):
            raise ValueError("lattice spacing must be positive")
        values = np.asarray(self.values, dtype=float).reshape(extents)
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "values", values)

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.extents))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def volume(self) -> float:
        return float(np.prod(np.asarray(self.extents) * np.asarray(self.spacing)))

    def with_values(self, values: np.ndarray) -> "LatticeField":
        """Same geometry, new site values."""
        return LatticeField(self.d, self.extents, self.spacing, values)

    @staticmethod
    def zeros(d: int, extents, spacing) -> "LatticeField":
        shape = tuple(int(n) for n in np.atleast_1d(extents))
        return LatticeField(d, shape, spacing, np.zeros(shape))


def relaxation_rate(params: MediumParams, k: float) -> float:
    """Decay rate gamma_k = D0 k^2 / c0 of mode k; exactly 0 for k = 0."""
    if k < 0:
        raise ValueError("wavenumber must be non-negative")
    if k == 0.0:
        return 0.0
    return params.D0 * k * k / params.c0


def noise_strength(params: MediumParams, k: float) -> float:
    """Noise strength Gamma_k = D0 k^2 T0^2 / c0^2; zero on the conserved mode."""
    if k < 0:
        raise ValueError("wavenumber must be non-negative")
    if k == 0.0:
        return 0.0
    return params.D0 * k * k * params.T0 ** 2 / params.c0 ** 2


def coupling_constant(params: MediumParams, k: float) -> float:
    """Coupling A_k = c0^2 / (D0 k^2 T0), equivalently T0 / Gamma_k.

    Diverges on the conserved mode: k = 0 raises SingularModeError.
    """
    if k <= 0:
        raise SingularModeError("coupling constant diverges at k = 0")
    return params.c0 ** 2 / (params.D0 * k * k * params.T0)


def equilibrium_mode_variance(params: MediumParams) -> float:
    """Equilibrium variance T0^2 / c0 of a single mode amplitude (k-independent)."""
    return params.T0 ** 2 / params.c0


def _check_dimension(params: MediumParams, fld: LatticeField):
    if fld.d != params.d:
        raise DimensionMismatchError(
            f"field dimension {fld.d} != medium dimension {params.d}"
        )


def free_energy_change(params: MediumParams, fld: LatticeField) -> float:
    """Quadratic free-energy cost of a temperature perturbation.

    Lattice form of the spatial integral of c0/(2 T0) * dT^2, with the
    cell volume as quadrature weight.  Non-negative; zero iff the field
    vanishes identically.
    """
    _check_dimension(params, fld)
    return (
        params.c0 / (2.0 * params.T0)
        * fld.cell_volume
        * float(np.sum(fld.values ** 2))
    )


def equilibrium_log_density(params: MediumParams, fld: LatticeField) -> float:
    """Unnormalized log-probability -beta0 * free_energy_change of the field."""
    return -params.beta0 * free_energy_change(params, fld)


def free_energy_hessian(
    params: MediumParams, fld: LatticeField, step: float | None = None
) -> np.ndarray:
    """Finite-difference Hessian of free_energy_change at the given field.

    Central differences with the supplied step; default step is
    1e-3 * max(1, max|dT|).  Returns an (n_sites, n_sites) matrix.
    """
    _check_dimension(params, fld)
    if step is None:
        step = 1e-3 * max(1.0, float(np.max(np.abs(fld.values))) if fld.n_sites else 1.0)
    if not step > 0:
        raise ValueError("step must be positive")

    base = fld.values.ravel().copy()
    n = base.size

    def f(v):
        return free_energy_change(params, fld.with_values(v))

    hess = np.empty((n, n))
    f0 = f(base)
    for i in range(n):
        vp = base.copy(); vp[i] += step
        vm = base.copy(); vm[i] -= step
        hess[i, i] = (f(vp) - 2.0 * f0 + f(vm)) / step ** 2
        for j in range(i + 1, n):
            vpp = base.copy(); vpp[i] += step; vpp[j] += step
            vpm = base.copy(); vpm[i] += step; vpm[j] -= step
            vmp = base.copy(); vmp[i] -= step; vmp[j] += step
            vmm = base.copy(); vmm[i] -= step; vmm[j] -= step
            hij = (f(vpp) - f(vpm) - f(vmp) + f(vmm)) / (4.0 * step ** 2)
            hess[i, j] = hij
            hess[j, i] = hij
    return hess


def free_energy_hessian_check(
    params: MediumParams, fld: LatticeField, step: float | None = None
) -> float:
    """Max relative residual of the numerical Hessian against its analytic form.

    The analytic Hessian is (c0/T0) * cell_volume on the diagonal and zero
    off the diagonal (sites are uncoupled).  Off-diagonal entries are
    measured against zero, normalized by the diagonal value.
    """
    hess = free_energy_hessian(params, fld, step)
    target = params.c0 / params.T0 * fld.cell_volume
    diag_res = np.max(np.abs(np.diag(hess) - target)) / target
    off = hess - np.diag(np.diag(hess))
    off_res = np.max(np.abs(off)) / target if hess.shape[0] > 1 else 0.0
    return float(max(diag_res, off_res))
