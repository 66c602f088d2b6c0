"""Bridge between real-space lattice fields and Fourier-mode amplitudes.

Forward transform carries a 1/N normalization so the zero coefficient is
the spatial mean; Parseval's identity then reads
sum_sites cell_volume * dT^2 = V * sum_modes |c_m|^2.  Also provides exact
equilibrium field sampling from the Gaussian measure exp(-beta0 * dF),
which is site-diagonal on the lattice, and the total-energy fluctuation
statistic whose variance equals the heat capacity times T0^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatchError, InsufficientDataError, NonHermitianError
from .langevin import NoiseStream
from .medium import LatticeField, MediumParams, free_energy_change
from .stats import EnsembleStats, sample_variance


@dataclass(frozen=True)
class SpectralField:
    """Complex mode amplitudes of a real lattice field.

    coefficients[m] multiplies e^{+i k_m x} with k_m = 2 pi m / L per axis
    (numpy FFT index convention); Hermitian symmetry guarantees a real
    inverse transform.
    """

    d: int
    extents: tuple
    coefficients: np.ndarray
    lengths: tuple

    def __post_init__(self):
        extents = tuple(int(n) for n in np.atleast_1d(self.extents))
        lengths = tuple(float(x) for x in np.atleast_1d(self.lengths))
        if len(extents) != self.d or len(lengths) != self.d:
            raise ValueError("extents and lengths must have one entry per axis")
        coeff = np.asarray(self.coefficients, dtype=complex).reshape(extents)
        object.__setattr__(self, "extents", extents)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "coefficients", coeff)

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))


def to_modes(fld: LatticeField) -> SpectralField:
    """Forward transform: c_m = (1/N) sum_j dT(x_j) e^{-i k_m x_j}."""
    coeff = np.fft.fftn(fld.values) / fld.n_sites
    lengths = tuple(n * a for n, a in zip(fld.extents, fld.spacing))
    return SpectralField(d=fld.d, extents=fld.extents, coefficients=coeff, lengths=lengths)


def from_modes(spec: SpectralField, imag_tol: float = 1e-12) -> LatticeField:
    """Inverse transform dT(x_j) = sum_m c_m e^{+i k_m x_j}.

    Verifies the result is real to within ``imag_tol`` (relative to the
    field magnitude) before discarding the imaginary residue; raises
    NonHermitianError otherwise.
    """
    n_total = int(np.prod(spec.extents))
    arr = np.fft.ifftn(spec.coefficients) * n_total
    scale = max(1.0, float(np.max(np.abs(arr.real))))
    if float(np.max(np.abs(arr.imag))) > imag_tol * scale:
        raise NonHermitianError("spectrum is not Hermitian-symmetric; inverse not real")
    spacing = tuple(length / n for n, length in zip(spec.extents, spec.lengths))
    return LatticeField(d=spec.d, extents=spec.extents, spacing=spacing, values=arr.real)


def parseval_check(fld: LatticeField) -> float:
    """Relative mismatch between the site-sum and mode-sum quadratic norms."""
    lhs = fld.cell_volume * float(np.sum(fld.values ** 2))
    spec = to_modes(fld)
    rhs = spec.volume * float(np.sum(np.abs(spec.coefficients) ** 2))
    denom = max(lhs, rhs, np.finfo(float).tiny)
    return abs(lhs - rhs) / denom


def sample_equilibrium_field(
    params: MediumParams, template: LatticeField, stream: NoiseStream
) -> LatticeField:
    """Exact draw from exp(-beta0 * dF): iid site Gaussians of variance
    T0^2 / (c0 * cell_volume)."""
    if template.d != params.d:
        raise GridMismatchError("template dimension does not match the medium")
    sigma = np.sqrt(params.T0 ** 2 / (params.c0 * template.cell_volume))
    return template.with_values(sigma * stream.normal(template.extents))


def total_energy_change(params: MediumParams, fld: LatticeField) -> float:
    """Total energy perturbation dU = c0 * sum_sites cell_volume * dT."""
    return params.c0 * fld.cell_volume * float(np.sum(fld.values))


def total_energy_fluctuation(
    params: MediumParams, fields: list[LatticeField]
) -> EnsembleStats:
    """Variance statistics of dU over an ensemble; expectation V * c0 * T0^2."""
    if len(fields) < 2:
        raise InsufficientDataError("need at least 2 fields")
    ref = fields[0]
    for fld in fields[1:]:
        if fld.extents != ref.extents or fld.spacing != ref.spacing or fld.d != ref.d:
            raise GridMismatchError("all fields must share the same geometry")
    du = np.array([total_energy_change(params, fld) for fld in fields])
    return sample_variance(du)


def mean_free_energy(params: MediumParams, fields: list[LatticeField]) -> float:
    """Ensemble mean of the free-energy cost; equals n_sites * T0 / 2 in equilibrium."""
    return float(np.mean([free_energy_change(params, fld) for fld in fields]))
