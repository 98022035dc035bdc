import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import optimize

from photocorr.fock_oracle import moment_numeric
from photocorr.sources import (
    DomainError,
    SourceKind,
    SourceModel,
    moment,
    nbar_from_net,
    net_photon_number,
)

FIELD_KINDS = [SourceKind.COHERENT, SourceKind.THERMAL, SourceKind.PACS, SourceKind.PATS]


@pytest.mark.parametrize(
    "kind, nbar, k, expected",
    [
        (SourceKind.THERMAL, 1.0, 2, 2.0),
        (SourceKind.COHERENT, 0.0, 1, 0.0),
        (SourceKind.PACS, 1.0, 1, 2.5),
        (SourceKind.PATS, 0.5, 2, 3.5),
        (SourceKind.SINGLE_PHOTON, 0.0, 1, 1.0),
        (SourceKind.SINGLE_PHOTON, 0.0, 2, 0.0),
    ],
)
def test_moment_examples(kind, nbar, k, expected):
    assert moment(SourceModel(kind, nbar), k) == pytest.approx(expected, abs=1e-15)


def test_pats_second_moment_matches_oracle():
    # 3.5 frozen from the truncated-space trace
    assert moment_numeric(SourceModel.pats(0.5), 2) == pytest.approx(3.5, rel=1e-9)


def test_moment_rejects_bad_k():
    with pytest.raises(DomainError):
        moment(SourceModel.thermal(1.0), 3)


def test_negative_nbar_rejected():
    with pytest.raises(DomainError):
        SourceModel.coherent(-0.1)
    with pytest.raises(DomainError):
        SourceModel.pats(float("nan"))


@pytest.mark.parametrize(
    "source, expected",
    [
        (SourceModel.pats(0.0), 1.0),
        (SourceModel.pacs(0.0), 1.0),
        (SourceModel.coherent(0.7), 0.7),
        (SourceModel.thermal(0.7), 0.7),
    ],
)
def test_net_photon_number(source, expected):
    assert net_photon_number(source) == pytest.approx(expected)


def test_pats_net_at_quoted_nbar():
    # quoted as 1.45 at nbar ~ 0.22, i.e. 2 * 0.22 + 1
    assert net_photon_number(SourceModel.pats(0.22)) == pytest.approx(1.44, abs=1e-12)
    assert round(net_photon_number(SourceModel.pats(0.225)), 2) == 1.45


@pytest.mark.parametrize(
    "kind, net, expected",
    [
        (SourceKind.PATS, 2.0, 0.5),
        (SourceKind.PACS, 1.0, 0.0),
        (SourceKind.PACS, 2.5, 1.0),
        (SourceKind.THERMAL, 3.0, 3.0),
    ],
)
def test_nbar_from_net_examples(kind, net, expected):
    assert nbar_from_net(kind, net) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("net", [1.0, 1.3, 2.5, 7.0])
def test_pacs_inversion_against_root_finder(net):
    forward = lambda x: net_photon_number(SourceModel.pacs(x)) - net  # noqa: E731
    root = 0.0 if net == 1.0 else optimize.brentq(forward, 0.0, 20.0, xtol=1e-14)
    assert nbar_from_net(SourceKind.PACS, net) == pytest.approx(root, abs=1e-12)


@pytest.mark.parametrize("kind, net", [(SourceKind.PACS, 0.99), (SourceKind.PATS, 0.5), (SourceKind.COHERENT, -1.0)])
def test_nbar_from_net_domain(kind, net):
    with pytest.raises(DomainError):
        nbar_from_net(kind, net)


@pytest.mark.parametrize("kind", FIELD_KINDS)
def test_round_trip_grid(kind):
    for nbar in np.linspace(0.0, 10.0, 101):
        net = net_photon_number(SourceModel(kind, nbar))
        assert nbar_from_net(kind, net) == pytest.approx(nbar, abs=1e-10)
        assert net_photon_number(SourceModel(kind, nbar_from_net(kind, net))) == pytest.approx(net, abs=1e-12)


@given(kind=st.sampled_from(FIELD_KINDS), nbar=st.floats(0.0, 50.0))
def test_moments_nonnegative(kind, nbar):
    src = SourceModel(kind, nbar)
    assert moment(src, 1) >= 0.0
    assert moment(src, 2) >= 0.0


@given(nbar=st.floats(0.0, 50.0))
def test_classicality_markers(nbar):
    coh, th = SourceModel.coherent(nbar), SourceModel.thermal(nbar)
    assert moment(coh, 2) == pytest.approx(moment(coh, 1) ** 2, rel=1e-12, abs=1e-300)
    assert moment(th, 2) == pytest.approx(2.0 * moment(th, 1) ** 2, rel=1e-12, abs=1e-300)


@given(kind=st.sampled_from(FIELD_KINDS), nbar=st.floats(1e-6, 10.0))
def test_first_moment_positive(kind, nbar):
    assert moment(SourceModel(kind, nbar), 1) > 0.0


@pytest.mark.parametrize("kind", FIELD_KINDS)
@pytest.mark.parametrize("nbar", [0.1, 0.22, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("k", [1, 2])
def test_oracle_equivalence(kind, nbar, k):
    src = SourceModel(kind, nbar)
    assert moment_numeric(src, k) == pytest.approx(moment(src, k), rel=1e-9)


def test_single_photon_ignores_nbar():
    assert SourceModel(SourceKind.SINGLE_PHOTON, 3.0).nbar == 0.0
    assert math.isclose(net_photon_number(SourceModel.single_photon()), 1.0)
