"""Brute-force operator engine in a truncated Fock space.

Each source gets its own local space: the single-photon emitter is a
two-level system with lowering operator ``s = |g><e|`` (basis order g, e),
every other source is a photon mode truncated to levels ``0..N``. The joint
density is the tensor product of the local densities and

.. math:: G^{(2)} = \\mathrm{Tr}[\\rho\\, E^-(\\varphi_1) E^-(\\varphi_2) E^+(\\varphi_2) E^+(\\varphi_1)],
   \\qquad E^+(\\varphi) = L_A \\otimes 1 + e^{i\\varphi}\\, 1 \\otimes L_B

is evaluated directly, without any of the moment identities used by the
closed forms.

Only lowering operators act on the ket side of a normally ordered product, so
truncating the operators is exact on the retained levels; the single source
of error is the state population dropped above level ``N``. States are
renormalized after truncation.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

from .correlations import PairConfig, Pairing
from .sources import DomainError, SourceKind, SourceModel

__all__ = [
    "TruncationError",
    "FockSystem",
    "DEFAULT_TAIL_TOL",
    "N_MAX",
    "fock_populations",
    "tail_population",
    "choose_truncation",
    "annihilation",
    "build_state",
    "build_system",
    "field_operator",
    "g2_numeric",
    "moment_numeric",
]

DEFAULT_TAIL_TOL = 1e-12
N_MAX = 512
# photon-number distributions are summed up to this level when computing tails
_POPULATION_CAP = 4096


class TruncationError(RuntimeError):
    """The Fock-space cutoff drops more population than the tolerance allows."""


def fock_populations(source: SourceModel, n_levels: int) -> np.ndarray:
    """Exact photon-number distribution ``p_0 .. p_{n_levels-1}`` of a field source."""
    kind, nbar = source.kind, source.nbar
    n = np.arange(n_levels, dtype=float)
    if kind is SourceKind.SINGLE_PHOTON:
        raise DomainError("the emitter is a two-level system, not a photon mode")
    if kind is SourceKind.COHERENT:
        logp = -nbar + xlogy(n, nbar) - gammaln(n + 1.0)
    elif kind is SourceKind.THERMAL:
        logp = xlogy(n, nbar) - (n + 1.0) * math.log1p(nbar)
    elif kind is SourceKind.PACS:
        with np.errstate(divide="ignore", invalid="ignore"):
            logp = -nbar + xlogy(n - 1.0, nbar) + np.log(n) - gammaln(np.maximum(n, 1.0)) - math.log1p(nbar)
    elif kind is SourceKind.PATS:
        with np.errstate(divide="ignore", invalid="ignore"):
            logp = np.log(n) + xlogy(n - 1.0, nbar) - (n + 1.0) * math.log1p(nbar)
    else:  # pragma: no cover
        raise DomainError(f"unknown source kind {kind!r}")
    p = np.exp(logp)
    if kind in (SourceKind.PACS, SourceKind.PATS):
        p[0] = 0.0
    return p


@functools.lru_cache(maxsize=256)
def _tails(source: SourceModel) -> np.ndarray:
    p = fock_populations(source, _POPULATION_CAP)
    # tails[N] = sum_{n > N} p_n
    rev = np.cumsum(p[::-1])[::-1]
    out = np.zeros_like(p)
    out[:-1] = rev[1:]
    out.flags.writeable = False
    return out


def tail_population(source: SourceModel, truncation: int) -> float:
    """Population above Fock level ``truncation``."""
    if source.kind is SourceKind.SINGLE_PHOTON:
        return 0.0
    if truncation >= _POPULATION_CAP - 1:
        return 0.0
    return float(_tails(source)[truncation])


def _truncated_m2(p: np.ndarray, truncation: int) -> float:
    n = np.arange(truncation + 1, dtype=float)
    q = p[: truncation + 1]
    return float(np.dot(n * (n - 1.0), q) / q.sum())


def choose_truncation(source: SourceModel, tail_tol: float = DEFAULT_TAIL_TOL, n_max: int = N_MAX) -> int:
    """Smallest cutoff ``N >= 1`` that keeps the dropped population below
    ``tail_tol`` and moves the renormalized second factorial moment by less
    than ``tail_tol`` (relative) when the cutoff grows to ``N + 5``."""
    if not 0.0 < tail_tol <= 1e-3:
        raise DomainError(f"tail_tol must lie in (0, 1e-3], got {tail_tol}")
    if source.kind is SourceKind.SINGLE_PHOTON:
        return 1
    p = fock_populations(source, n_max + 6)
    for n in range(1, n_max + 1):
        if tail_population(source, n) >= tail_tol:
            continue
        m2 = _truncated_m2(p, n)
        if abs(_truncated_m2(p, n + 5) - m2) <= tail_tol * abs(m2):
            return n
    raise TruncationError(
        f"no cutoff up to N_max={n_max} reaches tail_tol={tail_tol} for {source.kind.value}(nbar={source.nbar})"
    )


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator on levels ``0..dim-1``."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


_LOWERING_2LEVEL = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def _local_lowering(source: SourceModel, truncation: int) -> np.ndarray:
    if source.kind is SourceKind.SINGLE_PHOTON:
        return _LOWERING_2LEVEL
    return annihilation(truncation + 1)


def build_state(
    source: SourceModel,
    truncation: int,
    tail_tol: float = DEFAULT_TAIL_TOL,
    phase_averaged: bool = False,
) -> np.ndarray:
    """Local density matrix of ``source``.

    For the emitter this is ``|e><e|`` in the (g, e) basis; for field
    sources it lives on Fock levels ``0..truncation``. ``phase_averaged``
    replaces a coherent state by its mixture over a uniformly random phase.
    """
    if source.kind is SourceKind.SINGLE_PHOTON:
        return np.diag([0.0, 1.0]).astype(complex)
    if truncation < 1:
        raise TruncationError(f"truncation must be >= 1, got {truncation}")
    tail = tail_population(source, truncation)
    if tail > tail_tol:
        raise TruncationError(
            f"truncation N={truncation} drops population {tail:.3e} > tail_tol={tail_tol:.1e} "
            f"for {source.kind.value}(nbar={source.nbar})"
        )
    dim = truncation + 1
    kind, nbar = source.kind, source.nbar
    if kind in (SourceKind.COHERENT, SourceKind.PACS) and not phase_averaged:
        n = np.arange(dim, dtype=float)
        # alpha real and >= 0
        psi = np.exp(-nbar / 2.0 + 0.5 * xlogy(n, nbar) - 0.5 * gammaln(n + 1.0)).astype(complex)
        if kind is SourceKind.PACS:
            psi = annihilation(dim).conj().T @ psi
        psi /= np.linalg.norm(psi)
        return np.outer(psi, psi.conj())
    p = fock_populations(source, dim)
    return np.diag(p / p.sum()).astype(complex)


@dataclass(frozen=True)
class FockSystem:
    """Two-source operator workspace. Arrays are read-only."""

    pair: PairConfig
    truncation_n: int
    density: np.ndarray
    lower_a: np.ndarray
    lower_b: np.ndarray
    local_dims: tuple[int, int]

    @property
    def system_dim(self) -> int:
        return self.local_dims[0] * self.local_dims[1]


def _pair_truncation(pair: PairConfig, tail_tol: float) -> int:
    return max(choose_truncation(pair.source_a, tail_tol), choose_truncation(pair.source_b, tail_tol))


@functools.lru_cache(maxsize=128)
def build_system(pair: PairConfig, truncation: int | None = None, tail_tol: float = DEFAULT_TAIL_TOL) -> FockSystem:
    """Joint density and lowering operators for ``pair`` (cached per arguments).

    Two independent lasers have no fixed relative phase, so for ``Class``
    source B enters phase-averaged; with both beams pure the fringes would
    depend on the absolute detector phases.
    """
    if truncation is None:
        truncation = _pair_truncation(pair, tail_tol)
    rho_a = build_state(pair.source_a, truncation, tail_tol)
    rho_b = build_state(pair.source_b, truncation, tail_tol, phase_averaged=pair.pairing is Pairing.CLASS)
    la = _local_lowering(pair.source_a, truncation)
    lb = _local_lowering(pair.source_b, truncation)
    ida, idb = np.eye(la.shape[0]), np.eye(lb.shape[0])
    arrays = [np.kron(rho_a, rho_b), np.kron(la, idb), np.kron(ida, lb)]
    for arr in arrays:
        arr.flags.writeable = False
    return FockSystem(pair, truncation, *arrays, (la.shape[0], lb.shape[0]))


def field_operator(system: FockSystem, phi: float, common_phase: float = 0.0) -> np.ndarray:
    """Positive-frequency field :math:`E^+(\\varphi)` with source A's phase as reference.

    ``common_phase`` multiplies the whole operator by ``exp(i common_phase)``,
    a gauge change that no observable may depend on.
    """
    return np.exp(1j * common_phase) * (system.lower_a + np.exp(1j * phi) * system.lower_b)


def _expect_normal(system: FockSystem, m: np.ndarray) -> float:
    """``Tr[rho M^dagger M]`` with a check that the result is real."""
    val = np.sum((m @ system.density) * m.conj())
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"non-real expectation value {val}")
    return float(val.real)


def g2_numeric(
    pair: PairConfig,
    phi1: float,
    phi2: float,
    truncation: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
    common_phase: float = 0.0,
) -> float:
    """Normally ordered two-detector correlation evaluated on the operator matrices."""
    system = build_system(pair, truncation, tail_tol)
    e1 = field_operator(system, phi1, common_phase)
    e2 = field_operator(system, phi2, common_phase)
    return _expect_normal(system, e2 @ e1)


def intensity_numeric(
    pair: PairConfig, phi: float, truncation: int | None = None, tail_tol: float = DEFAULT_TAIL_TOL
) -> float:
    """Mean intensity :math:`\\langle E^-(\\varphi)E^+(\\varphi)\\rangle` at one detector."""
    system = build_system(pair, truncation, tail_tol)
    return _expect_normal(system, field_operator(system, phi))


def moment_numeric(
    source_b: SourceModel, k: int, truncation: int | None = None, tail_tol: float = DEFAULT_TAIL_TOL
) -> float:
    """:math:`\\mathrm{Tr}[\\rho\\, a^{\\dagger k} a^k]` on the truncated space."""
    if k not in (1, 2):
        raise DomainError(f"only k = 1 or k = 2 is supported, got {k!r}")
    if truncation is None:
        truncation = choose_truncation(source_b, tail_tol)
    rho = build_state(source_b, truncation, tail_tol)
    low = _local_lowering(source_b, truncation)
    ak = np.linalg.matrix_power(low, k)
    val = np.sum((ak @ rho) * ak.conj())
    return float(val.real)
