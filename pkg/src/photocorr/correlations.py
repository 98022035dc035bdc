"""Closed-form photon-photon correlations and interference visibilities.

All intensities are in units where the single-photon emitter has
:math:`\\langle I_A\\rangle = 1`. Every correlation function depends on the
detector phases only through :math:`\\Delta\\varphi = \\varphi_2 - \\varphi_1`
and is affine in :math:`\\cos\\Delta\\varphi`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from scipy import optimize

from .sources import (
    DomainError,
    SourceKind,
    SourceModel,
    moment,
    nbar_from_net,
    net_photon_number,
)

__all__ = [
    "Pairing",
    "PairConfig",
    "DetectorGeometry",
    "CorrelationCurve",
    "make_pair",
    "source_b_kind",
    "phase_from_geometry",
    "intensity_moments",
    "g2",
    "g2_from_moments",
    "g2_curve",
    "visibility",
    "visibility_at_net",
    "visibility_vs_net",
    "nbar_from_visibility",
]


class Pairing(str, Enum):
    CLASS = "Class"
    C = "C"
    T = "T"
    PC = "PC"
    PT = "PT"
    QQ = "QQ"


# source-B kind required by each mixed pairing
_MIXED_KIND = {
    Pairing.C: SourceKind.COHERENT,
    Pairing.T: SourceKind.THERMAL,
    Pairing.PC: SourceKind.PACS,
    Pairing.PT: SourceKind.PATS,
}


@dataclass(frozen=True)
class PairConfig:
    """Ordered pair of independent sources A and B and the pairing they form."""

    source_a: SourceModel
    source_b: SourceModel
    pairing: Pairing

    def __post_init__(self):
        pairing = Pairing(self.pairing)
        object.__setattr__(self, "pairing", pairing)
        ka, kb = self.source_a.kind, self.source_b.kind
        if pairing is Pairing.CLASS:
            ok = ka is SourceKind.COHERENT and kb is SourceKind.COHERENT
        elif pairing is Pairing.QQ:
            ok = ka is SourceKind.SINGLE_PHOTON and kb is SourceKind.SINGLE_PHOTON
        else:
            ok = ka is SourceKind.SINGLE_PHOTON and kb is _MIXED_KIND[pairing]
        if not ok:
            raise DomainError(
                f"pairing {pairing.value} does not accept sources ({ka.value}, {kb.value})"
            )

    @property
    def nbar(self) -> float:
        """``nbar`` of source B (the parameter every closed form is written in)."""
        return self.source_b.nbar

    @property
    def net(self) -> float:
        return net_photon_number(self.source_b)


def make_pair(pairing: Pairing | str, nbar: float = 0.0, nbar_a: float | None = None) -> PairConfig:
    """Build the :class:`PairConfig` for ``pairing`` with source B at ``nbar``.

    For ``Class`` the two coherent beams have ``nbar_a`` and ``nbar``;
    ``nbar_a`` defaults to ``nbar`` (equal intensities). ``nbar`` is ignored
    for ``QQ``.
    """
    pairing = Pairing(pairing)
    if pairing is Pairing.CLASS:
        a = SourceModel.coherent(nbar if nbar_a is None else nbar_a)
        return PairConfig(a, SourceModel.coherent(nbar), pairing)
    if nbar_a is not None:
        raise DomainError("nbar_a only applies to the Class pairing")
    if pairing is Pairing.QQ:
        return PairConfig(SourceModel.single_photon(), SourceModel.single_photon(), pairing)
    return PairConfig(SourceModel.single_photon(), SourceModel(_MIXED_KIND[pairing], nbar), pairing)


def source_b_kind(pairing: Pairing | str) -> SourceKind:
    pairing = Pairing(pairing)
    if pairing is Pairing.QQ:
        return SourceKind.SINGLE_PHOTON
    if pairing is Pairing.CLASS:
        return SourceKind.COHERENT
    return _MIXED_KIND[pairing]


@dataclass(frozen=True)
class DetectorGeometry:
    """Far-field detection geometry; positions enter only through the phases.

    ``separation_d >> wavelength`` is assumed by the model but not enforced.
    """

    wavelength: float
    separation_d: float
    xi1: float
    xi2: float

    def __post_init__(self):
        if not self.wavelength > 0:
            raise DomainError(f"wavelength must be > 0, got {self.wavelength}")
        if not self.separation_d > 0:
            raise DomainError(f"separation_d must be > 0, got {self.separation_d}")


def phase_from_geometry(geom: DetectorGeometry, which: int) -> float:
    """Optical phase :math:`k d \\sin\\xi_i` at detector ``which`` (1 or 2)."""
    if which == 1:
        xi = geom.xi1
    elif which == 2:
        xi = geom.xi2
    else:
        raise DomainError(f"detector index must be 1 or 2, got {which!r}")
    return 2.0 * math.pi / geom.wavelength * geom.separation_d * math.sin(xi)


@dataclass
class CorrelationCurve:
    """A sampled curve; ``grid`` holds the abscissa named by ``grid_name``."""

    pairing: Pairing
    grid: list[float]
    values: list[float]
    grid_name: str = "delta_phi"
    meta: dict = field(default_factory=dict)


def intensity_moments(pair: PairConfig) -> tuple[float, float, float, float]:
    """``(<I_A>, <I_A^2>, <I_B>, <I_B^2>)`` with normally ordered second moments."""
    return (
        moment(pair.source_a, 1),
        moment(pair.source_a, 2),
        moment(pair.source_b, 1),
        moment(pair.source_b, 2),
    )


def g2_from_moments(pair: PairConfig, phi1: float, phi2: float) -> float:
    """G2 from the uncorrelated-source decomposition written in raw moments.

    Equivalent to :func:`g2`; kept separate so the per-pairing closed forms
    can be checked against it.
    """
    ia, ia2, ib, ib2 = intensity_moments(pair)
    return ia2 + ib2 + 2.0 * ia * ib * (1.0 + math.cos(phi2 - phi1))


def g2(pair: PairConfig, phi1: float, phi2: float) -> float:
    """Coincidence correlation :math:`G^{(2)}(\\varphi_1, \\varphi_2)`."""
    c = math.cos(phi2 - phi1)
    n = pair.nbar
    p = pair.pairing
    if p is Pairing.CLASS:
        na = pair.source_a.nbar
        return na * na + 2.0 * na * n + n * n + 2.0 * na * n * c
    if p is Pairing.C:
        return n * n + 2.0 * n * (1.0 + c)
    if p is Pairing.T:
        return 2.0 * n * n + 2.0 * n * (1.0 + c)
    if p is Pairing.PC:
        return n * n + 4.0 * n + 2.0 * (n * n + 3.0 * n + 1.0) / (1.0 + n) * (1.0 + c)
    if p is Pairing.PT:
        return (6.0 * n**3 + 10.0 * n * n + 4.0 * n) / (n + 1.0) + 2.0 * (2.0 * n + 1.0) * (1.0 + c)
    return 2.0 * (1.0 + c)  # QQ


def g2_curve(pair: PairConfig, delta_phis: Sequence[float]) -> CorrelationCurve:
    dphis = [float(x) for x in delta_phis]
    return CorrelationCurve(pair.pairing, dphis, [g2(pair, 0.0, d) for d in dphis])


def visibility(pair: PairConfig) -> float:
    """Fringe visibility :math:`(G_{max}-G_{min})/(G_{max}+G_{min})`.

    Raises :class:`DomainError` when G2 vanishes identically (Class with both
    beams dark), where the visibility is undefined.
    """
    n = pair.nbar
    p = pair.pairing
    if p is Pairing.CLASS:
        na = pair.source_a.nbar
        if na + n == 0:
            raise DomainError("visibility undefined: both coherent beams are dark")
        return 2.0 * na * n / (na + n) ** 2
    if p is Pairing.C:
        return 1.0 / (1.0 + n / 2.0)
    if p is Pairing.T:
        return 1.0 / (1.0 + n)
    if p is Pairing.PC:
        return 1.0 / (1.0 + (n**3 + 5.0 * n * n + 4.0 * n) / (2.0 * (n * n + 3.0 * n + 1.0)))
    if p is Pairing.PT:
        return 1.0 / (1.0 + (6.0 * n**3 + 10.0 * n * n + 4.0 * n) / (2.0 * (n + 1.0) * (2.0 * n + 1.0)))
    return 1.0  # QQ


def visibility_at_net(pairing: Pairing | str, net: float) -> float:
    """Visibility of ``pairing`` when source B carries net photon number ``net``.

    ``Class`` is taken at equal beam intensities and ``QQ`` ignores ``net``.
    """
    pairing = Pairing(pairing)
    if pairing is Pairing.QQ:
        return 1.0
    if pairing is Pairing.PT:
        net = float(net)
        if net < 1.0:
            raise DomainError(f"net photon number {net} is below the minimum 1.0 for Pats")
        return 4.0 * net / (3.0 * net * net + 2.0 * net - 1.0)
    nbar = nbar_from_net(source_b_kind(pairing), net)
    return visibility(make_pair(pairing, nbar))


def visibility_vs_net(pairing: Pairing | str, net_grid: Sequence[float]) -> CorrelationCurve:
    pairing = Pairing(pairing)
    nets = [float(x) for x in net_grid]
    return CorrelationCurve(pairing, nets, [visibility_at_net(pairing, x) for x in nets], grid_name="net")


def _nbar_for_visibility(pairing: Pairing, v: float) -> float:
    if pairing is Pairing.C:
        return 2.0 * (1.0 - v) / v
    if pairing is Pairing.T:
        return (1.0 - v) / v
    if pairing is Pairing.PT:
        # 3 net^2 + (2 - 4/v) net - 1 = 0, positive root
        b = 2.0 - 4.0 / v
        net = (-b + math.sqrt(b * b + 12.0)) / 6.0
        return nbar_from_net(SourceKind.PATS, max(net, 1.0))
    if pairing is Pairing.PC:
        if v == 1.0:
            return 0.0
        f = lambda x: visibility(make_pair(Pairing.PC, x)) - v  # noqa: E731
        hi = 1.0
        while f(hi) > 0:
            hi *= 2.0
        return optimize.brentq(f, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    raise DomainError(f"visibility cannot be inverted for pairing {pairing.value}")


def nbar_from_visibility(
    pairing: Pairing | str, v: float, uncertainty: float | None = None
) -> float | tuple[float, float]:
    """Mean photon number of source B that produces visibility ``v``.

    With ``uncertainty`` given, the band ``v +/- uncertainty`` is mapped to the
    interval ``(nbar_low, nbar_high)``; the visibility decreases with nbar, so
    the upper visibility edge gives the lower nbar.
    """
    pairing = Pairing(pairing)
    v = float(v)
    if not 0.0 < v <= 1.0:
        raise DomainError(f"visibility must lie in (0, 1], got {v}")
    if uncertainty is None:
        return _nbar_for_visibility(pairing, v)
    hi_v = min(v + abs(uncertainty), 1.0)
    lo_v = v - abs(uncertainty)
    if lo_v <= 0.0:
        raise DomainError(f"visibility band reaches {lo_v} <= 0")
    return _nbar_for_visibility(pairing, hi_v), _nbar_for_visibility(pairing, lo_v)
