from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from povs_wb.seqspace import (
    bounding_constant,
    classify,
    eventually_leq,
    integer_root,
    is_infinitesimal_mod_c00,
    leq_at,
    sequence,
    sign_at,
)


# --- helpers ------------------------------------------------------------------

def geometric(c, q):
    return sequence(geo=[(c, q)])


def power(c, p):
    return sequence(pow=[(c, p)])


def window_values_ok(x, y, k_from, k_to):
    """Direct pointwise confirmation of x_k <= y_k on a window."""
    return all(leq_at(x, y, k) for k in range(max(1, k_from), k_to + 1))


# --- integer root -------------------------------------------------------------

@pytest.mark.parametrize("n,b,want", [(0, 3, 0), (1, 5, 1), (8, 3, 2), (9, 2, 3),
                                      (63, 3, 3), (64, 3, 4), (10 ** 12, 2, 10 ** 6)])
def test_integer_root_values(n, b, want):
    assert integer_root(n, b) == want


@given(st.integers(min_value=0, max_value=10 ** 9), st.integers(min_value=1, max_value=6))
@settings(max_examples=200, deadline=None)
def test_integer_root_brackets(n, b):
    a = integer_root(n, b)
    assert a ** b <= n < (a + 1) ** b


# --- classification -----------------------------------------------------------

def test_classification():
    assert classify(sequence(finite={1: 5})) == "c00"
    assert classify(power(1, 1)) == "c0"
    assert classify(sequence(const=1)) == "linf"
    assert classify(geometric(3, Q(1, 2)) + sequence(finite={4: 1})) == "c0"


# --- exact signs ----------------------------------------------------------------

def test_sign_rationalizes_perfect_powers():
    # k^(-1/2) = 1/2 exactly at k = 4
    z = power(1, Q(1, 2)) + sequence(const=Q(-1, 2))
    assert sign_at(z, 4) == 0
    assert sign_at(z, 3) == 1
    assert sign_at(z, 5) == -1


def test_sign_with_irrational_radical():
    # 1/sqrt(2) vs 7/10 and 5/7: 0.7071...
    z = power(1, Q(1, 2)) + sequence(const=Q(-7, 10))
    assert sign_at(z, 2) == 1
    z2 = power(1, Q(1, 2)) + sequence(const=Q(-5, 7))
    assert sign_at(z2, 2) == -1


def test_sign_with_mixed_radicals():
    # k^(-1/2) - k^(-1/3) < 0 for k >= 2, = 0 at k = 1
    z = sequence(pow=[(1, Q(1, 2)), (-1, Q(1, 3))])
    assert sign_at(z, 1) == 0
    for k in (2, 3, 5, 8, 100):
        assert sign_at(z, k) == -1


def test_sign_of_syntactic_cancellation():
    z = sequence(pow=[(2, Q(1, 2)), (-2, Q(1, 2))])
    assert z.is_zero()
    assert sign_at(sequence(), 7) == 0


# --- eventual comparison --------------------------------------------------------

def test_geometric_rates_compare():
    k = eventually_leq(geometric(1, Q(1, 2)), geometric(1, Q(3, 4)))
    assert k is not None and window_values_ok(geometric(1, Q(1, 2)), geometric(1, Q(3, 4)), k, k + 30)


def test_constants_dominate_decay():
    assert eventually_leq(sequence(const=1), power(1, 1)) is None


def test_reflexive_threshold_zero():
    x = geometric(2, Q(1, 3)) + power(1, 2)
    assert eventually_leq(x, x) == 0


def test_scaled_crossover_is_tight():
    x, y = geometric(5, Q(1, 2)), geometric(1, Q(3, 4))
    k = eventually_leq(x, y)
    assert k == 4
    assert not leq_at(x, y, 3) and window_values_ok(x, y, 4, 40)


def test_power_beats_faster_power():
    k = eventually_leq(power(1, 1), power(1, Q(1, 2)))
    assert k is not None and window_values_ok(power(1, 1), power(1, Q(1, 2)), k, k + 20)
    assert eventually_leq(power(1, Q(1, 2)), power(1, 1)) is None


def test_geo_below_power():
    x, y = geometric(10, Q(9, 10)), power(1, 3)
    k = eventually_leq(x, y)
    assert k is not None
    assert window_values_ok(x, y, k, k + 10)
    assert eventually_leq(y, x) is None


def test_finite_spikes_only_shift_threshold():
    x = sequence(finite={5: 100})
    y = sequence()
    k = eventually_leq(x, y)
    assert k == 6
    assert eventually_leq(y, x) == 0


def test_thresholds_hold_pointwise_on_windows():
    pairs = [
        (geometric(3, Q(2, 3)), geometric(1, Q(5, 6))),
        (power(7, 2), power(1, 1)),
        (geometric(4, Q(1, 2)) + power(2, 3), power(1, 1)),
        (sequence(finite={2: 9}) + power(1, 2), power(2, 1)),
    ]
    for x, y in pairs:
        k = eventually_leq(x, y)
        assert k is not None
        assert window_values_ok(x, y, k, k + 25)
        if k > 1:
            assert not leq_at(x, y, k - 1)  # thresholds are minimal when scanned


# --- pre-order properties --------------------------------------------------------

@st.composite
def c0_element(draw):
    geo = []
    pows = []
    if draw(st.booleans()):
        geo.append((draw(st.integers(-5, 5)), Q(draw(st.integers(1, 6)), 8)))
    if draw(st.booleans()):
        pows.append((draw(st.integers(-5, 5)), Q(draw(st.integers(1, 4)), 2)))
    fin = {draw(st.integers(1, 6)): draw(st.integers(-4, 4))} if draw(st.booleans()) else {}
    return sequence(finite=fin, geo=geo, pow=pows)


@given(c0_element(), c0_element(), c0_element())
@settings(max_examples=100, deadline=None)
def test_eventual_order_is_transitive(x, y, z):
    kxy = eventually_leq(x, y)
    kyz = eventually_leq(y, z)
    if kxy is None or kyz is None:
        return
    kxz = eventually_leq(x, z)
    assert kxz is not None


@given(c0_element())
@settings(max_examples=60, deadline=None)
def test_eventual_order_is_reflexive(x):
    assert eventually_leq(x, x) == 0


# --- infinitesimal witnesses -----------------------------------------------------

def test_geometric_regulator_matches_interpolation():
    w = is_infinitesimal_mod_c00(geometric(1, Q(1, 2)), "c0")
    assert w is not None
    assert w.regulator.geo_terms == ((Q(1), Q(3, 4)),)
    # certificate spot check by direct windows
    for n, k in w.thresholds:
        assert window_values_ok(geometric(n, Q(1, 2)), w.regulator, max(k, 1), max(k, 1) + 15)


def test_power_regulator_halves_the_exponent():
    w = is_infinitesimal_mod_c00(power(1, 1), "c0")
    assert w is not None
    assert w.regulator.pow_terms == ((Q(1), Q(1, 2)),)


def test_constant_has_no_regulator():
    assert is_infinitesimal_mod_c00(sequence(const=1), "linf") is None


def test_finitely_supported_elements_are_trivially_infinitesimal():
    w = is_infinitesimal_mod_c00(sequence(finite={3: 7}), "c0")
    assert w is not None and w.regulator.is_zero()


def test_ambient_containment_enforced():
    with pytest.raises(ValueError):
        is_infinitesimal_mod_c00(sequence(const=1), "c0")


def test_unit_is_an_order_unit_for_the_grammar():
    # every grammar element is eventually dominated by a multiple of const 1
    unit = sequence(const=1)
    for x in (geometric(9, Q(7, 8)), power(5, Q(1, 2)), sequence(const=3) + power(-2, 1),
              sequence(finite={1: 1000}) + geometric(-3, Q(1, 3))):
        n = int(bounding_constant(x)) + 1
        ku = eventually_leq(x, unit.scale(n))
        kd = eventually_leq(x.scale(-1), unit.scale(n))
        assert ku is not None and kd is not None


@given(c0_element())
@settings(max_examples=100, deadline=None)
def test_every_c0_element_gets_a_regulator(x):
    w = is_infinitesimal_mod_c00(x, "c0")
    assert w is not None
    if not x.is_zero() and not w.regulator.is_zero():
        # dominance verified on a window for a large multiple
        k = eventually_leq(x.scale(64), w.regulator)
        assert k is not None
