from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from exactg2.exterior import KForm, basis_indices

settings.register_profile("exact", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")


def fractions(bound: int = 5, denom: int = 4):
    return st.builds(Fraction, st.integers(-bound * denom, bound * denom), st.integers(1, denom))


nonzero_fractions = fractions().filter(bool)


@st.composite
def forms(draw, n: int, k: int | None = None, kmax: int | None = None):
    if k is None:
        k = draw(st.integers(0, kmax if kmax is not None else n))
    idx = basis_indices(n, k)
    coeffs = draw(st.lists(fractions(), min_size=len(idx), max_size=len(idx)))
    mask = draw(st.lists(st.booleans(), min_size=len(idx), max_size=len(idx)))
    return KForm(n, k, {i: c for i, c, m in zip(idx, coeffs, mask) if m})


@st.composite
def matrices(draw, n: int, m: int | None = None, bound: int = 4):
    m = m or n
    return [draw(st.lists(fractions(bound), min_size=m, max_size=m)) for _ in range(n)]


def vectors(n: int):
    return st.lists(fractions(), min_size=n, max_size=n)
