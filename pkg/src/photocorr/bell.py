"""Normalized Bell correlations, CHSH and the double-channel construction."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import optimize

from .correlations import Pairing, PairConfig, g2, intensity_moments, visibility, visibility_at_net
from .sources import DomainError, SourceKind, nbar_from_net

__all__ = [
    "ChshReport",
    "FourChannelRates",
    "BellThreshold",
    "CHSH_CLASSICAL_BOUND",
    "OPTIMAL_ANGLES",
    "normalization",
    "normalized_g2",
    "chsh",
    "chsh_max",
    "bell_threshold",
    "double_channel_rates",
    "double_channel_closed_form",
    "correlation_from_rates",
]

CHSH_CLASSICAL_BOUND = 2.0
# (phi1, phi1', phi2, phi2'): the four cosines contribute +1/sqrt(2) each
OPTIMAL_ANGLES = (0.0, math.pi / 2.0, math.pi / 4.0, 3.0 * math.pi / 4.0)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def normalization(pair: PairConfig, phi2: float = 0.0) -> float:
    """Average of G2 over a full period of ``phi1`` at fixed ``phi2``.

    G2 is affine in ``cos(phi2 - phi1)``, so the period average equals the
    mean of two points half a period apart; it is :math:`\\langle (I_A+I_B)^2\\rangle`.
    """
    return 0.5 * (g2(pair, 0.0, phi2) + g2(pair, math.pi, phi2))


def normalized_g2(pair: PairConfig, phi1: float, phi2: float) -> float:
    """:math:`G^{(2)}/\\mathcal{N} - 1`, equal to ``V cos(phi2 - phi1)``."""
    norm = normalization(pair, phi2)
    if norm == 0.0:
        raise DomainError("normalization vanishes: both sources are in the vacuum")
    return g2(pair, phi1, phi2) / norm - 1.0


@dataclass(frozen=True)
class ChshReport:
    """CHSH evaluation. ``violated`` is the strict test ``chsh_value > 2``;
    ``status`` additionally reports values within ``band`` of 2 as ``"boundary"``."""

    pairing: Pairing
    visibility: float
    angles: tuple[float, float, float, float]
    chsh_value: float
    violated: bool
    status: str


def _status(value: float, band: float) -> str:
    if abs(value - CHSH_CLASSICAL_BOUND) <= band:
        return "boundary"
    return "violated" if value > CHSH_CLASSICAL_BOUND else "not violated"


def chsh(
    pair: PairConfig,
    phi1: float,
    phi1p: float,
    phi2: float,
    phi2p: float,
    band: float = 1e-9,
) -> ChshReport:
    """Evaluate :math:`|E(a,b) - E(a,b') + E(a',b) + E(a',b')|` with ``E = normalized_g2``."""
    e = normalized_g2
    value = abs(e(pair, phi1, phi2) - e(pair, phi1, phi2p) + e(pair, phi1p, phi2) + e(pair, phi1p, phi2p))
    return ChshReport(
        pairing=pair.pairing,
        visibility=visibility(pair),
        angles=(phi1, phi1p, phi2, phi2p),
        chsh_value=value,
        violated=value > CHSH_CLASSICAL_BOUND,
        status=_status(value, band),
    )


def chsh_max(pair: PairConfig, band: float = 1e-9) -> ChshReport:
    """Largest CHSH value over all detector phases, ``2 sqrt(2) V``.

    The value is evaluated at :data:`OPTIMAL_ANGLES` rather than written down
    from the closed form.
    """
    return chsh(pair, *OPTIMAL_ANGLES, band=band)


@dataclass(frozen=True)
class BellThreshold:
    """Net photon number (and nbar) below which CHSH is violated."""

    pairing: Pairing
    net: float
    nbar: float


def bell_threshold(kind: Pairing | str, xtol: float = 1e-12) -> BellThreshold:
    """Solve ``V(net) = 1/sqrt(2)`` for the pairings with a free source-B intensity."""
    kind = Pairing(kind)
    if kind is Pairing.T:
        net = math.sqrt(2.0) - 1.0
        return BellThreshold(kind, net, net)
    if kind is Pairing.C:
        net = 2.0 * (math.sqrt(2.0) - 1.0)
        return BellThreshold(kind, net, net)
    if kind is Pairing.PT:
        # 3 net^2 + (2 - 4 sqrt 2) net - 1 = 0
        b = 2.0 - 4.0 * math.sqrt(2.0)
        net = (-b + math.sqrt(b * b + 12.0)) / 6.0
        return BellThreshold(kind, net, nbar_from_net(SourceKind.PATS, net))
    if kind is Pairing.PC:
        net = optimize.bisect(lambda x: visibility_at_net(Pairing.PC, x) - _INV_SQRT2, 1.0, 3.0, xtol=xtol)
        return BellThreshold(kind, net, nbar_from_net(SourceKind.PACS, net))
    raise DomainError(f"no Bell threshold for pairing {kind.value}: visibility does not depend on net")


@dataclass(frozen=True)
class FourChannelRates:
    """Coincidence rates of the four detector pairs ``D1^alpha D2^beta``.

    ``eta1``/``eta2`` record the detection efficiencies already folded into
    the rates.
    """

    pp: float
    pm: float
    mp: float
    mm: float
    eta1: float = 1.0
    eta2: float = 1.0

    def __post_init__(self):
        for name in ("pp", "pm", "mp", "mm"):
            if getattr(self, name) < 0:
                raise DomainError(f"rate {name} must be >= 0, got {getattr(self, name)}")
        for name in ("eta1", "eta2"):
            eta = getattr(self, name)
            if not 0.0 < eta <= 1.0:
                raise DomainError(f"{name} must lie in (0, 1], got {eta}")

    @property
    def total(self) -> float:
        return self.pp + self.pm + self.mp + self.mm

    def scaled(self, eta1: float, eta2: float) -> "FourChannelRates":
        """Rates seen through detectors of efficiencies ``eta1`` and ``eta2``."""
        k = eta1 * eta2
        return FourChannelRates(
            self.pp * k, self.pm * k, self.mp * k, self.mm * k, self.eta1 * eta1, self.eta2 * eta2
        )


def double_channel_rates(
    pair: PairConfig, phi1: float, phi2: float, eta1: float = 1.0, eta2: float = 1.0
) -> FourChannelRates:
    """Four coincidence rates behind 50/50 splitters at each detector.

    The reflected (``-``) port picks up a phase of pi, so each rate is G2 at
    shifted detector phases.
    """
    shift = {"p": 0.0, "m": math.pi}
    rates = {
        f"{a}{b}": max(g2(pair, phi1 + shift[a], phi2 + shift[b]), 0.0)
        for a in "pm"
        for b in "pm"
    }
    return FourChannelRates(**rates).scaled(eta1, eta2)


def double_channel_closed_form(pair: PairConfig, phi1: float, phi2: float) -> FourChannelRates:
    """Same rates from :math:`\\langle(I_A+I_B)^2\\rangle \\pm 2\\langle I_A\\rangle\\langle I_B\\rangle\\cos`."""
    ia, ia2, ib, ib2 = intensity_moments(pair)
    mean_sq = ia2 + ib2 + 2.0 * ia * ib
    swing = 2.0 * ia * ib * math.cos(phi2 - phi1)
    same, diff = mean_sq + swing, mean_sq - swing
    return FourChannelRates(same, max(diff, 0.0), max(diff, 0.0), same)


def correlation_from_rates(rates: FourChannelRates) -> float:
    """Bell correlation :math:`\\sum \\alpha\\beta G_{\\alpha\\beta} / \\sum G_{\\alpha\\beta}`."""
    total = rates.total
    if total <= 0.0:
        raise DomainError("all four coincidence rates vanish")
    return (rates.pp + rates.mm - rates.pm - rates.mp) / total

