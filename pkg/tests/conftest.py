import os

from hypothesis import HealthCheck, settings, strategies as st

from shiftequiv.linalg import Matrix

settings.register_profile(
    "default",
    deadline=None,
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "60")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def int_matrices(rows, cols, lo=-9, hi=9):
    return st.lists(
        st.lists(st.integers(lo, hi), min_size=cols, max_size=cols),
        min_size=rows, max_size=rows,
    ).map(Matrix)


@st.composite
def essential_matrices(draw, max_size=3, max_entry=3):
    """Square nonnegative integer matrices without zero rows."""
    n = draw(st.integers(1, max_size))
    rows = []
    for _ in range(n):
        row = draw(st.lists(st.integers(0, max_entry), min_size=n, max_size=n))
        if not any(row):
            row[draw(st.integers(0, n - 1))] = draw(st.integers(1, max_entry))
        rows.append(row)
    return Matrix(rows)


def vectors(n, lo=-3, hi=3):
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n).map(tuple)


@st.composite
def intertwined_pairs(draw, max_size=3):
    """``(A, B)`` with a nonzero intertwiner: either ``A = B`` or ``A = RS, B = SR``."""
    if draw(st.booleans()):
        A = draw(essential_matrices(max_size))
        return A, A
    p, q = draw(st.integers(1, max_size)), draw(st.integers(1, max_size))
    # row i of R has a 1 in column i mod q, so RS and SR have no zero rows
    R = Matrix([[int(j == i % q) + draw(st.integers(0, 1)) for j in range(q)] for i in range(p)])
    S = Matrix([[int(j == i % p) + draw(st.integers(0, 1)) for j in range(p)] for i in range(q)])
    return R @ S, S @ R
