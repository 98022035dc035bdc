"""Source states and their normally ordered photon-number moments.

Five field states are modelled for source B (and the single-photon emitter
for source A):

* ``SINGLE_PHOTON`` -- an initially excited two-level emitter,
* ``COHERENT``      -- :math:`|\\alpha\\rangle` with :math:`|\\alpha|^2 = \\bar n`,
* ``THERMAL``       -- Bose-Einstein statistics with mean :math:`\\bar n`,
* ``PACS``          -- photon-added coherent state :math:`a^\\dagger|\\alpha\\rangle/\\sqrt{1+\\bar n}`,
* ``PATS``          -- photon-added thermal state :math:`a^\\dagger\\rho_T a/(1+\\bar n)`.

``nbar`` always denotes the mean photon number of the coherent or thermal
*part*; the net photon number :math:`\\langle a^\\dagger a\\rangle` is derived.
At ``nbar = 0`` PACS and PATS both reduce to the Fock state :math:`|1\\rangle`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "DomainError",
    "SourceKind",
    "SourceModel",
    "moment",
    "net_photon_number",
    "nbar_from_net",
    "min_net",
]


class DomainError(ValueError):
    """A parameter lies outside the domain of the requested quantity."""


class SourceKind(str, Enum):
    SINGLE_PHOTON = "SinglePhoton"
    COHERENT = "Coherent"
    THERMAL = "Thermal"
    PACS = "Pacs"
    PATS = "Pats"


@dataclass(frozen=True)
class SourceModel:
    """One source's field state.

    ``nbar`` is ignored for ``SINGLE_PHOTON`` and is stored as 0 there.
    """

    kind: SourceKind
    nbar: float = 0.0

    def __post_init__(self):
        kind = SourceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        nbar = float(self.nbar)
        if not math.isfinite(nbar):
            raise DomainError(f"nbar must be finite, got {self.nbar!r}")
        if nbar < 0:
            raise DomainError(f"nbar must be >= 0, got {nbar}")
        if kind is SourceKind.SINGLE_PHOTON:
            nbar = 0.0
        object.__setattr__(self, "nbar", nbar)

    @classmethod
    def single_photon(cls) -> "SourceModel":
        return cls(SourceKind.SINGLE_PHOTON)

    @classmethod
    def coherent(cls, nbar: float) -> "SourceModel":
        return cls(SourceKind.COHERENT, nbar)

    @classmethod
    def thermal(cls, nbar: float) -> "SourceModel":
        return cls(SourceKind.THERMAL, nbar)

    @classmethod
    def pacs(cls, nbar: float) -> "SourceModel":
        return cls(SourceKind.PACS, nbar)

    @classmethod
    def pats(cls, nbar: float) -> "SourceModel":
        return cls(SourceKind.PATS, nbar)


def moment(source: SourceModel, k: int) -> float:
    """Normally ordered moment :math:`\\langle a^{\\dagger k} a^k\\rangle` for k in {1, 2}."""
    if k not in (1, 2):
        raise DomainError(f"only k = 1 or k = 2 is supported, got {k!r}")
    n = source.nbar
    kind = source.kind
    if kind is SourceKind.SINGLE_PHOTON:
        return 1.0 if k == 1 else 0.0
    if kind is SourceKind.COHERENT:
        return n**k
    if kind is SourceKind.THERMAL:
        return math.factorial(k) * n**k
    if kind is SourceKind.PACS:
        if k == 1:
            return (n * n + 3.0 * n + 1.0) / (1.0 + n)
        return n * n + 4.0 * n
    if kind is SourceKind.PATS:
        if k == 1:
            return 2.0 * n + 1.0
        return 6.0 * n * n + 4.0 * n
    raise DomainError(f"unknown source kind {kind!r}")  # pragma: no cover


def net_photon_number(source: SourceModel) -> float:
    """Net photon number :math:`\\langle a^\\dagger a\\rangle` of the whole field."""
    return moment(source, 1)


def min_net(kind: SourceKind | str) -> float:
    """Smallest attainable net photon number for ``kind`` (reached at nbar = 0)."""
    kind = SourceKind(kind)
    if kind in (SourceKind.PACS, SourceKind.PATS, SourceKind.SINGLE_PHOTON):
        return 1.0
    return 0.0


def nbar_from_net(kind: SourceKind | str, net: float) -> float:
    """Invert :func:`net_photon_number`: the ``nbar`` giving net photon number ``net``.

    Raises
    ------
    DomainError
        If ``net`` is below the kind's minimum (1 for PACS/PATS, 0 otherwise)
        or ``kind`` is the single-photon emitter, whose net number is fixed.
    """
    kind = SourceKind(kind)
    net = float(net)
    if kind is SourceKind.SINGLE_PHOTON:
        raise DomainError("a single-photon emitter has no free photon-number parameter")
    if not math.isfinite(net) or net < min_net(kind):
        raise DomainError(
            f"net photon number {net} is below the minimum {min_net(kind)} for {kind.value}"
        )
    if kind is SourceKind.PACS:
        # positive root of nbar^2 + (3 - net) nbar + (1 - net) = 0
        return -1.5 + 0.5 * net + 0.5 * math.sqrt(5.0 - 2.0 * net + net * net)
    if kind is SourceKind.PATS:
        return (net - 1.0) / 2.0
    return net
