"""Variance-based Cauchy-Schwarz witness for position-dependent G2.

For a field with a non-negative P-function the normally ordered intensity
covariance matrix at two detection phases is positive semidefinite. Its
entries are the variance correlations

.. math:: \\tilde G(\\varphi_k, \\varphi_l) = G^{(2)}(\\varphi_k, \\varphi_l) - \\langle I_A + I_B\\rangle^2 .

A negative diagonal entry or a negative determinant certifies a nonclassical
field. Every :math:`\\tilde G` here has the form ``K + A cos(dphi)`` with
``A >= 0``, so extrema over the detector phases sit at ``dphi`` in {0, pi}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .correlations import Pairing, PairConfig, g2, make_pair, nbar_from_visibility
from .sources import DomainError

__all__ = [
    "UndefinedRatioError",
    "WitnessReport",
    "CsThreshold",
    "variance_corr",
    "variance_coefficients",
    "cs_determinant",
    "schwarz_ratio",
    "schwarz_max",
    "witness",
    "cs_violation_threshold",
    "naive_normalized_cs",
    "witness_at_visibility",
    "diagonal_zero_nbar",
    "BOUNDARY_RTOL",
    "INFINITE_RATIO_RTOL",
]

BOUNDARY_RTOL = 1e-9
INFINITE_RATIO_RTOL = 1e-12
# both terms of the ratio count as zero below this magnitude
_ZERO_ATOL = 1e-24


class UndefinedRatioError(ArithmeticError):
    """Schwarz ratio of the indeterminate form 0/0."""


def variance_corr(pair: PairConfig, phik: float, phil: float) -> float:
    """Variance correlation :math:`\\tilde G(\\varphi_k, \\varphi_l)`."""
    c = math.cos(phik - phil)
    n = pair.nbar
    p = pair.pairing
    if p is Pairing.CLASS:
        return 2.0 * pair.source_a.nbar * n * c
    if p is Pairing.C:
        return 2.0 * n * c - 1.0
    if p is Pairing.T:
        return n * n + 2.0 * n * c - 1.0
    if p is Pairing.PC:
        d = (n + 1.0) ** 2
        return (-(3.0 * n * n + 4.0 * n + 2.0) + (2.0 * n**3 + 8.0 * n * n + 8.0 * n + 2.0) * c) / d
    if p is Pairing.PT:
        return 2.0 * n * n + 2.0 * (2.0 * n + 1.0) * c - 2.0
    return 2.0 * c - 2.0  # QQ


def variance_coefficients(pair: PairConfig) -> tuple[float, float]:
    """``(K, A)`` such that ``variance_corr = K + A cos(dphi)``."""
    at_zero = variance_corr(pair, 0.0, 0.0)
    at_pi = variance_corr(pair, 0.0, math.pi)
    return 0.5 * (at_zero + at_pi), 0.5 * (at_zero - at_pi)


def cs_determinant(pair: PairConfig, phi1: float, phi2: float) -> float:
    """Determinant of the 2x2 intensity covariance matrix; negative means nonclassical."""
    d11 = variance_corr(pair, phi1, phi1)
    d22 = variance_corr(pair, phi2, phi2)
    off = variance_corr(pair, phi1, phi2)
    return d11 * d22 - off * off


def schwarz_ratio(pair: PairConfig, phi1: float, phi2: float) -> float:
    """:math:`|\\tilde G_{12}|^2 / (\\tilde G_{11}\\tilde G_{22})`.

    Returns ``math.inf`` when the denominator is negligible against a
    non-zero numerator; raises :class:`UndefinedRatioError` when both vanish.
    """
    off = variance_corr(pair, phi1, phi2)
    num = off * off
    den = variance_corr(pair, phi1, phi1) * variance_corr(pair, phi2, phi2)
    if abs(num) <= _ZERO_ATOL and abs(den) <= _ZERO_ATOL:
        raise UndefinedRatioError(
            f"Schwarz ratio is 0/0 for {pair.pairing.value} at nbar={pair.nbar}"
        )
    if abs(den) <= INFINITE_RATIO_RTOL * abs(num):
        return math.inf
    return num / den


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of the Cauchy-Schwarz test for one source pairing.

    ``violated`` is the determinant/diagonal verdict. ``status`` also flags
    cases within ``BOUNDARY_RTOL`` of the classical border as ``"boundary"``.
    ``s_max`` is ``math.inf`` when ``s_max_infinite`` is set.
    """

    pairing: Pairing
    nbar: float
    s_max: float
    s_max_infinite: bool
    delta_phi_star: float
    determinant_min: float
    diagonal_value: float
    violated: bool
    status: str


def schwarz_max(pair: PairConfig) -> tuple[float, float]:
    """Maximum of the Schwarz ratio over the detector phases and its ``dphi``.

    The diagonals do not depend on the phases, so the ratio is largest where
    ``|K + A cos(dphi)|`` is; both candidates 0 and pi are evaluated and ties
    resolve to 0.
    """
    best, best_dphi = -1.0, 0.0
    for dphi in (0.0, math.pi):
        off = abs(variance_corr(pair, 0.0, dphi))
        if off > best * (1.0 + 1e-15):
            best, best_dphi = off, dphi
    return schwarz_ratio(pair, 0.0, best_dphi), best_dphi


def witness(pair: PairConfig) -> WitnessReport:
    """Full Cauchy-Schwarz verdict for ``pair``."""
    diag = variance_corr(pair, 0.0, 0.0)
    k, a = variance_coefficients(pair)
    off_max = max(abs(k + a), abs(k - a))
    det_min = diag * diag - off_max * off_max
    try:
        s_max, dphi = schwarz_max(pair)
    except UndefinedRatioError:
        s_max, dphi = math.nan, 0.0

    band = BOUNDARY_RTOL * max(diag * diag, off_max * off_max, 1e-300)
    diag_band = BOUNDARY_RTOL * max(abs(diag), off_max, 1e-300)
    violated = det_min < -band or diag < -diag_band
    # the determinant always vanishes at dphi = 0, so the distance from the
    # classical border is measured at the opposite candidate dphi = pi
    margin = diag * diag - (k - a) * (k - a)
    if violated:
        status = "violated"
    elif abs(margin) <= band or abs(diag) <= diag_band:
        status = "boundary"
    else:
        status = "classical"
    return WitnessReport(
        pairing=pair.pairing,
        nbar=pair.nbar,
        s_max=s_max,
        s_max_infinite=math.isinf(s_max),
        delta_phi_star=dphi,
        determinant_min=det_min,
        diagonal_value=diag,
        violated=violated,
        status=status,
    )


@dataclass(frozen=True)
class CsThreshold:
    """Where a pairing starts violating the Cauchy-Schwarz inequality.

    ``net_below`` / ``visibility_above`` are strict bounds; ``math.inf`` and
    0 mean "any finite net photon number". ``never`` and ``always`` cover the
    pairings without a free threshold.
    """

    pairing: Pairing
    net_below: float
    visibility_above: float
    never: bool = False
    always: bool = False

    def describe(self) -> str:
        if self.never:
            return "never violated"
        if self.always:
            return "always violated"
        if math.isinf(self.net_below):
            return "violated for any finite net photon number (V > 0)"
        return f"violated for net < {self.net_below:g} (V > {self.visibility_above:g})"


def cs_violation_threshold(kind: Pairing | str) -> CsThreshold:
    """Analytic violation threshold of each pairing.

    T: ``K = nbar^2 - 1`` changes sign at nbar = 1; PT: ``K = 2 nbar^2 - 2``
    changes sign at nbar = 1, i.e. net = 3. C and PC have ``K < 0`` for all
    nbar, so the determinant at ``dphi = pi`` is ``4 K A < 0`` as soon as
    source B emits.
    """
    kind = Pairing(kind)
    if kind is Pairing.T:
        return CsThreshold(kind, 1.0, 0.5)
    if kind is Pairing.PT:
        return CsThreshold(kind, 3.0, 0.375)
    if kind in (Pairing.C, Pairing.PC):
        return CsThreshold(kind, math.inf, 0.0)
    if kind is Pairing.CLASS:
        return CsThreshold(kind, 0.0, math.inf, never=True)
    return CsThreshold(kind, math.inf, 0.0, always=True)


def naive_normalized_cs(pair: PairConfig, phi1: float, phi2: float) -> tuple[float, float]:
    """Both sides of :math:`|g(\\varphi_1,\\varphi_2)|^2 \\le g(\\varphi_1,\\varphi_1) g(\\varphi_2,\\varphi_2)`.

    ``g`` is G2 scaled to its maximum, which for two single photons is
    ``(1 + cos dphi)/2``. This form cannot detect the nonclassicality of the
    two-emitter field.
    """
    k, a = _g2_coefficients(pair)
    peak = k + abs(a)
    if peak == 0:
        raise DomainError("G2 vanishes identically; normalized form undefined")
    g12 = g2(pair, phi1, phi2) / peak
    g11 = g2(pair, phi1, phi1) / peak
    g22 = g2(pair, phi2, phi2) / peak
    return g12 * g12, g11 * g22


def _g2_coefficients(pair: PairConfig) -> tuple[float, float]:
    at_zero = g2(pair, 0.0, 0.0)
    at_pi = g2(pair, 0.0, math.pi)
    return 0.5 * (at_zero + at_pi), 0.5 * (at_zero - at_pi)


def witness_at_visibility(pairing: Pairing | str, v: float, nbar_a: float = 1.0) -> WitnessReport:
    """:func:`witness` for the source-B intensity that yields visibility ``v``.

    For ``Class`` the weaker beam is source B, with ``nbar_a`` fixed.
    """
    pairing = Pairing(pairing)
    if pairing is Pairing.CLASS:
        if not 0.0 < v <= 0.5:
            raise DomainError(f"Class visibility must lie in (0, 0.5], got {v}")
        # V = 2r/(1+r)^2 with r = nbar_b/nbar_a <= 1
        r = (1.0 - v - math.sqrt(max(1.0 - 2.0 * v, 0.0))) / v
        return witness(make_pair(pairing, r * nbar_a, nbar_a=nbar_a))
    if pairing is Pairing.QQ:
        return witness(make_pair(pairing))
    return witness(make_pair(pairing, nbar_from_visibility(pairing, v)))


def diagonal_zero_nbar(pairing: Pairing | str) -> float | None:
    """``nbar`` where the diagonal variance crosses zero (the ratio diverges), if any."""
    pairing = Pairing(pairing)
    if pairing is Pairing.C:
        return 0.5
    if pairing is Pairing.T:
        return math.sqrt(2.0) - 1.0
    if pairing in (Pairing.PC, Pairing.PT):
        return 0.0
    return None

