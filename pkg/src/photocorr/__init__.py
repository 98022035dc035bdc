"""Photon-photon correlations of a single-photon emitter mixed with a second,
classical or photon-added, light source.

Two independent engines are provided: closed-form expressions
(:mod:`~photocorr.correlations`, :mod:`~photocorr.nonclassicality`,
:mod:`~photocorr.bell`) and a truncated Fock-space operator engine
(:mod:`~photocorr.fock_oracle`) that evaluates the same quantities from the
field operators directly.
"""
from .sources import DomainError, SourceKind, SourceModel, moment, nbar_from_net, net_photon_number
from .correlations import (
    CorrelationCurve,
    DetectorGeometry,
    PairConfig,
    Pairing,
    g2,
    make_pair,
    nbar_from_visibility,
    phase_from_geometry,
    visibility,
    visibility_at_net,
    visibility_vs_net,
)
from .nonclassicality import (
    WitnessReport,
    cs_determinant,
    cs_violation_threshold,
    naive_normalized_cs,
    schwarz_max,
    schwarz_ratio,
    variance_corr,
    witness,
)
from .bell import (
    ChshReport,
    FourChannelRates,
    bell_threshold,
    chsh,
    chsh_max,
    correlation_from_rates,
    double_channel_rates,
    normalized_g2,
)

__version__ = "0.1.0"
