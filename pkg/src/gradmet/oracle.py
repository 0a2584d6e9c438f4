"""Exact density-matrix simulation used as ground truth for the closed forms.

Two independent propagators are provided:

* ``lindblad_integrate`` - fixed-step RK4 integration of the full 2^N master
  equation with local dephasing and dissipation channels on every site;
* ``subspace_propagate`` - the exact element map of the W-state density
  matrix on the (N+1)-dimensional space spanned by the single-excitation
  states plus the vacuum.

Basis conventions (fixed so dumped matrices are portable):

* full space: integer bitmask index, site 1 as the least significant bit;
* single-excitation space: index j-1 holds site j (j = 1..N), index N is the
  vacuum.

The Hamiltonian is taken in the rotating frame where only the site-graded
gradient term sum_j j * theta1 * sigma_z^j survives; the uniform offset is a
global phase the coherence factor cannot see.  The dephasing channel is
normalized so a single-atom coherence decays as exp(-Gamma_p t), matching the
population decay exp(-Gamma_d t) of the dissipation channel; two-site
coherences then decay at Gamma = Gamma_d + 2 Gamma_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import IO, Sequence, Union

import numpy as np
from scipy import sparse

from .model import NoiseRates

FULL_STATE_CAP = 12   # largest N for 2^N pure statevectors
FULL_RHO_CAP = 8      # largest N for 2^N x 2^N density-matrix integration
SUBSPACE_CAP = 64     # largest N for the exact subspace propagator

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8


class CapacityError(ValueError):
    """System size exceeds what the requested representation supports."""


class AccuracyError(RuntimeError):
    """Integration accuracy check failed; retry with a smaller dt_max."""


class BasisMismatchError(ValueError):
    """Operator and state live in different bases or dimensions."""


class Basis(Enum):
    FULL = "full"
    SINGLE_EXCITATION = "single_excitation"


@dataclass(frozen=True)
class BasisTag:
    kind: Basis
    n_atoms: int

    @property
    def dim(self) -> int:
        return 2**self.n_atoms if self.kind is Basis.FULL else self.n_atoms + 1


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive matrix with its basis label."""

    entries: np.ndarray
    basis: BasisTag

    def __post_init__(self) -> None:
        m = self.entries
        if m.shape != (self.basis.dim, self.basis.dim):
            raise BasisMismatchError(f"shape {m.shape} does not match basis dim {self.basis.dim}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        trace = np.trace(m).real
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {trace} deviates from 1")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -POSITIVITY_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {min_eig}")

    def dump_text(self, dest: Union[str, IO[str]]) -> None:
        """Write ``basis,dim,N`` header then one ``row,col,re,im`` record per entry."""
        if isinstance(dest, str):
            with open(dest, "w", encoding="utf-8") as fh:
                self.dump_text(fh)
            return
        dest.write(f"{self.basis.kind.value},{self.basis.dim},{self.basis.n_atoms}\n")
        for row in range(self.basis.dim):
            for col in range(self.basis.dim):
                z = self.entries[row, col]
                dest.write(f"{row},{col},{z.real:.17g},{z.imag:.17g}\n")


def load_density_matrix(src: Union[str, IO[str]]) -> DensityMatrix:
    """Read a matrix written by :meth:`DensityMatrix.dump_text`."""
    if isinstance(src, str):
        with open(src, "r", encoding="utf-8") as fh:
            return load_density_matrix(fh)
    header = src.readline().strip().split(",")
    kind, dim, n = Basis(header[0]), int(header[1]), int(header[2])
    entries = np.zeros((dim, dim), dtype=complex)
    for line in src:
        row, col, re, im = line.strip().split(",")
        entries[int(row), int(col)] = float(re) + 1j * float(im)
    return DensityMatrix(entries, BasisTag(kind, n))


@dataclass(frozen=True)
class Observable:
    """Hermitian operator tied to a basis."""

    entries: np.ndarray
    basis: BasisTag

    def __post_init__(self) -> None:
        m = self.entries
        if m.shape != (self.basis.dim, self.basis.dim):
            raise BasisMismatchError(f"shape {m.shape} does not match basis dim {self.basis.dim}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("observable is not Hermitian within tolerance")


def _check_full_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapacityError(f"n={n} exceeds full-space cap {cap}; use the subspace form")


def w_state(n: int, basis: Basis = Basis.FULL) -> np.ndarray:
    """Equal single-excitation superposition (1/sqrt(N)) sum_j |w_j>."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    amp = 1.0 / math.sqrt(n)
    if basis is Basis.FULL:
        _check_full_cap(n, FULL_STATE_CAP)
        vec = np.zeros(2**n, dtype=complex)
        for j in range(n):
            vec[1 << j] = amp
        return vec
    vec = np.zeros(n + 1, dtype=complex)
    vec[:n] = amp
    return vec


def evolve_pure(n: int, theta: float, basis: Basis = Basis.FULL) -> np.ndarray:
    """W-state after gradient phase accumulation: amplitude j gets exp(-2i j Theta)."""
    vec = w_state(n, basis)
    phases = np.exp(-2j * theta * np.arange(1, n + 1))
    if basis is Basis.FULL:
        for j in range(n):
            vec[1 << j] *= phases[j]
    else:
        vec[:n] *= phases
    return vec


def c1_operator(n: int, basis: Basis = Basis.FULL) -> Observable:
    """Coherence factor C1 = N |W><W| - P, with P the single-excitation projector.

    Spectrum: N-1 (once), -1 (N-1 times in the subspace), 0 elsewhere.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    w = w_state(n, basis)
    m = n * np.outer(w, w.conj())
    if basis is Basis.FULL:
        for j in range(n):
            m[1 << j, 1 << j] -= 1.0
        return Observable(m, BasisTag(Basis.FULL, n))
    m[np.arange(n), np.arange(n)] -= 1.0
    return Observable(m, BasisTag(Basis.SINGLE_EXCITATION, n))


def density_from_state(vec: np.ndarray, basis_tag: BasisTag) -> DensityMatrix:
    return DensityMatrix(np.outer(vec, vec.conj()), basis_tag)


def subspace_propagate(n: int, tau: float, noise: NoiseRates) -> DensityMatrix:
    """Exact noisy W-state density matrix on the single-excitation + vacuum space.

    Element map from the initial W state:
      off-diagonal (j != k): (1/N) exp(-2i(j-k) tau) exp(-Gamma tau)
      diagonal (j):          (1/N) exp(-Gamma_d tau)
      vacuum:                1 - exp(-Gamma_d tau)
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > SUBSPACE_CAP:
        raise CapacityError(f"n={n} exceeds subspace cap {SUBSPACE_CAP}")
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    pop = math.exp(-noise.gamma_d * tau)
    coh = math.exp(-noise.gamma_total * tau)
    phases = np.exp(-2j * tau * np.arange(1, n + 1))
    block = (coh / n) * np.outer(phases, phases.conj())
    np.fill_diagonal(block, pop / n)
    rho = np.zeros((n + 1, n + 1), dtype=complex)
    rho[:n, :n] = block
    rho[n, n] = 1.0 - pop
    return DensityMatrix(rho, BasisTag(Basis.SINGLE_EXCITATION, n))


def _build_liouvillian(n: int, noise: NoiseRates) -> sparse.csr_matrix:
    """Sparse generator of the master equation acting on the flattened rho.

    All non-jump terms are elementwise in the bitmask basis (diagonal in the
    flattened space): the commutator with the site-graded gradient
    Hamiltonian sum_j j sigma_z^j, the dephasing channel at per-site
    coherence rate Gamma_p, and the anticommutator half of the dissipator.
    The quantum jumps sum_j sigma_-^j rho sigma_+^j scatter population from
    (a|bit_j, b|bit_j) down to (a, b).
    """
    dim = 2**n
    states = np.arange(dim)
    sz = np.empty((n, dim))
    for j in range(n):
        sz[j] = np.where(states & (1 << j), 1.0, -1.0)
    energies = np.einsum("j,jd->d", np.arange(1, n + 1, dtype=float), sz)
    gp, gd = noise.gamma_p, noise.gamma_d

    coeff = (-1j * (energies[:, None] - energies[None, :])).astype(complex)
    if gp:
        # (Gamma_p/2) sum_j (sz rho sz - rho): per-site coherence rate Gamma_p.
        coeff += (0.5 * gp) * (sz.T @ sz - n)
    if gd:
        pops = np.array([bin(a).count("1") for a in range(dim)], dtype=float)
        coeff += (-0.5 * gd) * (pops[:, None] + pops[None, :])

    flat = dim * dim
    rows = [np.arange(flat)]
    cols = [np.arange(flat)]
    vals = [coeff.reshape(-1)]
    if gd:
        for j in range(n):
            bit = 1 << j
            clear = states[(states & bit) == 0]
            dst_row, dst_col = np.meshgrid(clear, clear, indexing="ij")
            rows.append((dst_row * dim + dst_col).reshape(-1))
            cols.append(((dst_row | bit) * dim + (dst_col | bit)).reshape(-1))
            vals.append(np.full(clear.size**2, gd, dtype=complex))
    matrix = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(flat, flat),
    )
    return matrix.tocsr()


def lindblad_snapshots(
    n: int, taus: Sequence[float], noise: NoiseRates, dt_max: float = 1e-3
) -> list[DensityMatrix]:
    """States of the N-site master equation at each requested time, one integration.

    Fixed-step classic RK4 with dt = min(dt_max, 1e-3 / (N (1 + Gamma))),
    rounded per segment so every requested time is hit exactly.  Raises
    AccuracyError if the trace drifts by more than 1e-8.
    """
    _check_full_cap(n, FULL_RHO_CAP)
    if dt_max > 1e-3:
        raise ValueError(f"dt_max must be <= 1e-3, got {dt_max}")
    if any(t < 0 for t in taus):
        raise ValueError(f"times must be >= 0, got {list(taus)}")
    if list(taus) != sorted(taus):
        raise ValueError("snapshot times must be ascending")

    dim = 2**n
    rho = np.outer(w_state(n), w_state(n).conj()).reshape(-1)
    liouvillian = _build_liouvillian(n, noise)
    dt_nominal = min(dt_max, 1e-3 / (n * (1.0 + noise.gamma_total)))
    out: list[DensityMatrix] = []
    t_prev = 0.0
    for t_next in taus:
        span = t_next - t_prev
        if span > 0:
            steps = max(1, math.ceil(span / dt_nominal))
            dt = span / steps
            for _ in range(steps):
                k1 = liouvillian @ rho
                k2 = liouvillian @ (rho + (0.5 * dt) * k1)
                k3 = liouvillian @ (rho + (0.5 * dt) * k2)
                k4 = liouvillian @ (rho + dt * k3)
                k1 += k4
                k2 += k3
                k2 *= 2.0
                k1 += k2
                rho += (dt / 6.0) * k1
            matrix = rho.reshape(dim, dim)
            drift = abs(np.trace(matrix).real - 1.0)
            if drift > 1e-8:
                raise AccuracyError(
                    f"trace drifted by {drift:.3e}; rerun with a smaller dt_max"
                )
        matrix = rho.reshape(dim, dim)
        # Symmetrize away the RK4 roundoff skew before the invariant checks.
        out.append(
            DensityMatrix(0.5 * (matrix + matrix.conj().T), BasisTag(Basis.FULL, n))
        )
        t_prev = t_next
    return out


def lindblad_integrate(
    n: int, tau: float, noise: NoiseRates, dt_max: float = 1e-3
) -> DensityMatrix:
    """Integrate the N-site master equation from the W state for time tau."""
    return lindblad_snapshots(n, [tau], noise, dt_max)[-1]


def expect(obs: Observable, rho: DensityMatrix) -> float:
    """tr(obs rho); the imaginary part must be negligible and is discarded."""
    if obs.basis != rho.basis:
        raise BasisMismatchError(f"observable basis {obs.basis} != state basis {rho.basis}")
    value = complex(np.trace(obs.entries @ rho.entries))
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation has non-negligible imaginary part {value.imag}")
    return value.real


def expect_pure(obs: Observable, vec: np.ndarray) -> float:
    """<psi|obs|psi> for a pure state in the observable's basis."""
    if vec.shape != (obs.basis.dim,):
        raise BasisMismatchError(f"state dim {vec.shape} != basis dim {obs.basis.dim}")
    value = complex(vec.conj() @ (obs.entries @ vec))
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation has non-negligible imaginary part {value.imag}")
    return value.real


def _c1_stats(n: int, tau: float, noise: NoiseRates, method: str) -> tuple[float, float]:
    """(mean, std) of C1 on the propagated state, by either propagator."""
    if method == "subspace":
        rho = subspace_propagate(n, tau, noise)
        c1 = c1_operator(n, Basis.SINGLE_EXCITATION)
    elif method == "integrator":
        rho = lindblad_integrate(n, tau, noise)
        c1 = c1_operator(n, Basis.FULL)
    else:
        raise ValueError(f"unknown method {method!r}")
    c1_sq = Observable(c1.entries @ c1.entries, c1.basis)
    mean = expect(c1, rho)
    var = expect(c1_sq, rho) - mean * mean
    return mean, math.sqrt(max(var, 0.0))


def numeric_delta_theta(
    n: int, tau: float, noise: NoiseRates, h: float = 1e-5, method: str = "subspace"
) -> float:
    """Error-propagation uncertainty delta theta1 / theta1 from the simulator alone.

    Central difference of <C1> under a relative shift of theta1 by +/-h (time
    and rates rescaled together so the physical decay is held fixed), divided
    into the simulated standard deviation of C1.  Independent of every
    closed-form expression above.
    """
    if not 1e-7 <= h <= 1e-3:
        raise ValueError(f"h must be within [1e-7, 1e-3], got {h}")
    _, std = _c1_stats(n, tau, noise, method)

    def mean_at(scale: float) -> float:
        scaled = NoiseRates(noise.gamma_p / scale, noise.gamma_d / scale)
        return _c1_stats(n, tau * scale, scaled, method)[0]

    deriv = (mean_at(1.0 + h) - mean_at(1.0 - h)) / (2.0 * h)
    if abs(deriv) < 1e-12:
        return math.inf
    return std / abs(deriv)
