import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from photocorr.correlations import Pairing, g2, intensity_moments, make_pair, visibility
from photocorr.fock_oracle import g2_numeric, intensity_numeric
from photocorr.nonclassicality import (
    UndefinedRatioError,
    cs_determinant,
    cs_violation_threshold,
    diagonal_zero_nbar,
    naive_normalized_cs,
    schwarz_max,
    schwarz_ratio,
    variance_coefficients,
    variance_corr,
    witness,
    witness_at_visibility,
)
from photocorr.sources import SourceKind, nbar_from_net

ALL = list(Pairing)
SQRT2 = math.sqrt(2.0)


def grid_schwarz_max(pair, n=256):
    """Brute-force maximum of the Schwarz ratio over a phase grid containing 0 and pi."""
    best = -1.0
    for d in np.linspace(0.0, 2 * math.pi, n, endpoint=False):
        best = max(best, schwarz_ratio(pair, 0.0, d))
    return best


@pytest.mark.parametrize(
    "pair, c, expected",
    [
        (make_pair("T", 1.0), 1.0, 2.0),
        (make_pair("QQ"), 1.0, 0.0),
        (make_pair("C", 0.5), 1.0, 0.0),
        (make_pair("PT", 1.0), -1.0, -6.0),
    ],
)
def test_variance_corr_examples(pair, c, expected):
    assert variance_corr(pair, 0.0, math.acos(c)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("pairing", ALL)
def test_variance_definition_consistency(pairing):
    for nbar in np.linspace(0.0, 5.0, 26):
        pair = make_pair(pairing, nbar)
        ia, _, ib, _ = intensity_moments(pair)
        for d in np.linspace(0.0, 2 * math.pi, 33):
            expected = g2(pair, 0.0, d) - (ia + ib) ** 2
            assert variance_corr(pair, 0.0, d) - expected == pytest.approx(0.0, abs=1e-12 * max(1.0, abs(expected)))


def test_class_variance_unequal_beams():
    pair = make_pair("Class", 0.5, nbar_a=2.0)
    ia, _, ib, _ = intensity_moments(pair)
    assert variance_corr(pair, 0.0, 1.0) == pytest.approx(g2(pair, 0.0, 1.0) - (ia + ib) ** 2, abs=1e-12)


def test_variance_against_fock_engine():
    # covariance entries built from the operator engine alone
    for pairing in ALL:
        for nbar in (0.0, 0.29, 1.0):
            pair = make_pair(pairing, nbar)
            for d in (0.0, 1.1, math.pi):
                i1, i2 = intensity_numeric(pair, 0.0), intensity_numeric(pair, d)
                numeric = g2_numeric(pair, 0.0, d) - i1 * i2
                assert numeric == pytest.approx(variance_corr(pair, 0.0, d), abs=1e-9)


@pytest.mark.parametrize(
    "pair, dphi, expected",
    [
        (make_pair("Class", 1.3), math.pi / 3, 3.0 * 1.3**4),
        (make_pair("QQ"), math.pi, -16.0),
        (make_pair("T", 1.0), math.pi, 0.0),
    ],
)
def test_cs_determinant_examples(pair, dphi, expected):
    assert cs_determinant(pair, 0.0, dphi) == pytest.approx(expected, abs=1e-12)


def test_determinant_is_covariance_determinant():
    pair = make_pair("PT", 0.3)
    for p1, p2 in [(0.0, 0.5), (1.0, 3.0), (-2.0, 2.0)]:
        m = np.array(
            [[variance_corr(pair, p1, p1), variance_corr(pair, p1, p2)],
             [variance_corr(pair, p2, p1), variance_corr(pair, p2, p2)]]
        )
        assert cs_determinant(pair, p1, p2) == pytest.approx(np.linalg.det(m), abs=1e-12)


@given(na=st.floats(0.0, 10.0), nb=st.floats(0.0, 10.0), d=st.floats(-10.0, 10.0))
def test_class_never_violates(na, nb, d):
    pair = make_pair("Class", nb, nbar_a=na)
    scale = max(1.0, (na * nb) ** 2)
    assert cs_determinant(pair, 0.0, d) >= -1e-12 * scale
    assert variance_corr(pair, d, d) >= 0.0
    assert not witness(pair).violated


@pytest.mark.parametrize(
    "pair, dphi, expected",
    [
        (make_pair("T", 0.5), math.pi, 49.0),
        (make_pair("Class", 0.7), 0.0, 1.0),
        (make_pair("T", 0.3), 0.0, (0.09 + 0.6 - 1.0) ** 2 / (0.09 + 0.6 - 1.0) ** 2),
    ],
)
def test_schwarz_ratio_examples(pair, dphi, expected):
    assert schwarz_ratio(pair, 0.0, dphi) == pytest.approx(expected, rel=1e-12)


def test_schwarz_ratio_infinite_at_thermal_divergence():
    pair = make_pair("T", SQRT2 - 1.0)
    for d in (0.3, 1.0, math.pi):
        assert math.isinf(schwarz_ratio(pair, 0.0, d))


def test_schwarz_ratio_undefined():
    with pytest.raises(UndefinedRatioError):
        schwarz_ratio(make_pair("QQ"), 0.0, 0.0)
    with pytest.raises(UndefinedRatioError):
        schwarz_ratio(make_pair("Class", 0.0), 0.0, 1.0)


def test_schwarz_max_examples():
    assert schwarz_max(make_pair("Class", 2.0)) == (pytest.approx(1.0), 0.0)
    s, d = schwarz_max(make_pair("T", 1.0))
    assert s == pytest.approx(1.0) and d in (0.0, math.pi)
    s, d = schwarz_max(make_pair("C", 1e-6))
    assert s > 1.0 and d == math.pi


@pytest.mark.parametrize("pairing", [Pairing.C, Pairing.T, Pairing.PC, Pairing.PT])
@pytest.mark.parametrize("nbar", [0.05, 0.3, 0.9, 1.7, 4.0])
def test_schwarz_max_matches_grid(pairing, nbar):
    pair = make_pair(pairing, nbar)
    s, _ = schwarz_max(pair)
    if math.isinf(s):
        pytest.skip("divergent point")
    assert s == pytest.approx(grid_schwarz_max(pair), rel=1e-12)


def test_schwarz_max_ratio_consistency_with_determinant():
    for pairing in (Pairing.C, Pairing.T, Pairing.PC, Pairing.PT):
        for nbar in np.linspace(0.01, 5.0, 50):
            rep = witness(make_pair(pairing, nbar))
            if rep.status == "boundary" or rep.s_max_infinite or rep.diagonal_value <= 0:
                continue
            assert rep.violated == (rep.s_max > 1.0)
            assert rep.violated == (rep.determinant_min < 0.0)


def test_witness_report_fields():
    rep = witness(make_pair("T", 0.5))
    assert rep.violated and rep.status == "violated"
    assert rep.s_max == pytest.approx(49.0)
    assert rep.delta_phi_star == math.pi
    assert rep.determinant_min == pytest.approx(0.25**2 - 1.75**2)
    assert rep.diagonal_value == pytest.approx(0.25)
    assert witness(make_pair("T", 1.0)).status == "boundary"
    assert witness(make_pair("T", 2.0)).status == "classical"


def test_violation_thresholds():
    assert cs_violation_threshold("T").net_below == 1.0
    assert cs_violation_threshold("T").visibility_above == 0.5
    assert cs_violation_threshold("PT").net_below == 3.0
    assert cs_violation_threshold("PT").visibility_above == 0.375
    assert cs_violation_threshold("Class").never
    assert cs_violation_threshold("QQ").always
    assert math.isinf(cs_violation_threshold("C").net_below)
    assert "any finite" in cs_violation_threshold("PC").describe()


def test_threshold_exactness():
    eps = 1e-6
    assert witness(make_pair("T", 1.0 - eps)).determinant_min < 0
    assert witness(make_pair("T", 1.0 + eps)).determinant_min >= 0
    below = nbar_from_net(SourceKind.PATS, 3.0 - eps)
    above = nbar_from_net(SourceKind.PATS, 3.0 + eps)
    assert witness(make_pair("PT", below)).determinant_min < 0
    assert witness(make_pair("PT", above)).determinant_min >= 0
    # thresholds expressed as visibilities
    assert visibility(make_pair("T", 1.0)) == pytest.approx(0.5)
    assert visibility(make_pair("PT", 1.0)) == pytest.approx(0.375)


def test_threshold_scan_matches_analytic():
    for pairing in (Pairing.T, Pairing.PT):
        th = cs_violation_threshold(pairing)
        for net in np.linspace(1.0, 6.0, 101):
            kind = SourceKind.THERMAL if pairing is Pairing.T else SourceKind.PATS
            rep = witness(make_pair(pairing, nbar_from_net(kind, net)))
            if abs(net - th.net_below) < 1e-9:
                continue
            assert rep.violated == (net < th.net_below)


def test_divergence_locations():
    for pairing, expected in ((Pairing.C, 0.5), (Pairing.T, SQRT2 - 1.0)):
        nbar = diagonal_zero_nbar(pairing)
        assert nbar == pytest.approx(expected, abs=1e-10)
        assert variance_corr(make_pair(pairing, nbar), 0.0, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert visibility(make_pair("C", 0.5)) == pytest.approx(0.8)
    assert visibility(make_pair("T", SQRT2 - 1.0)) == pytest.approx(1.0 / SQRT2)


@pytest.mark.parametrize("pairing", [Pairing.C, Pairing.PC])
@pytest.mark.parametrize("nbar", [1e-4, 0.01, 0.3, 1.0, 3.0, 10.0, 100.0])
def test_c_and_pc_always_violate_at_pi(pairing, nbar):
    pair = make_pair(pairing, nbar)
    assert cs_determinant(pair, 0.0, math.pi) < 0
    assert witness(pair).violated
    s, d = schwarz_max(pair)
    assert s > 1.0 and d == math.pi


@pytest.mark.parametrize("pairing", [Pairing.PT, Pairing.PC])
def test_divergence_towards_unit_visibility(pairing):
    kind = SourceKind.PATS if pairing is Pairing.PT else SourceKind.PACS
    s, _ = schwarz_max(make_pair(pairing, nbar_from_net(kind, 1.0 + 1e-3)))
    assert s > 1e3


def test_naive_normalized_cs_examples():
    qq = make_pair("QQ")
    assert naive_normalized_cs(qq, 0.0, 0.0) == pytest.approx((1.0, 1.0))
    lhs, rhs = naive_normalized_cs(qq, 0.0, math.pi)
    assert lhs == pytest.approx(0.0, abs=1e-30) and rhs == pytest.approx(1.0)
    assert naive_normalized_cs(qq, 0.0, math.pi / 2) == pytest.approx((0.25, 1.0))


@given(d=st.floats(-10.0, 10.0))
def test_naive_form_never_violated_for_two_emitters(d):
    lhs, rhs = naive_normalized_cs(make_pair("QQ"), 0.3, 0.3 + d)
    assert lhs <= rhs + 1e-15


def test_witness_at_visibility():
    assert witness_at_visibility("T", 1.0 / SQRT2).s_max_infinite
    assert witness_at_visibility("PT", 0.375).s_max == pytest.approx(1.0)
    rep = witness_at_visibility("Class", 0.3)
    assert visibility(make_pair("Class", rep.nbar, nbar_a=1.0)) == pytest.approx(0.3)
    assert rep.s_max == pytest.approx(1.0)


@given(pairing=st.sampled_from(ALL), nbar=st.floats(0.0, 10.0))
def test_variance_affine_in_cos(pairing, nbar):
    pair = make_pair(pairing, nbar)
    k, a = variance_coefficients(pair)
    assert a >= -1e-12
    for d in (0.4, 2.0):
        assert variance_corr(pair, 0.0, d) == pytest.approx(k + a * math.cos(d), abs=1e-9 * max(1.0, abs(k) + a))
