"""Deterministic enumeration and sampling of matrix subspaces.

Subspaces of dimension d inside Mat_{n,p}(K) (vectorized row-major, ambient
dimension N = n p) are enumerated through their unique reduced-row-echelon
generator matrices: pivot-column d-subsets of [0, N) in lexicographic order,
then free entries in lexicographic order (row-major, integer element codes).
The count is the Gaussian binomial coefficient, which is asserted against
the enumeration in the test suite.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .errors import BudgetError
from .gf import Field
from .linalg import Mat
from .spaces import Space, space_make

DEFAULT_BUDGET = 2**20


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over GF(q)."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def count_subspaces(field: Field, rows: int, cols: int, *, dim: int | None = None,
                    codim: int | None = None, max_codim: int | None = None) -> int:
    N = rows * cols
    dims = _resolve_dims(N, dim, codim, max_codim)
    return sum(gaussian_binomial(N, d, field.q) for d in dims)


def _resolve_dims(N: int, dim: int | None, codim: int | None,
                  max_codim: int | None) -> list[int]:
    if sum(x is not None for x in (dim, codim, max_codim)) != 1:
        raise ValueError("specify exactly one of dim, codim, max_codim")
    if dim is not None:
        return [dim]
    if codim is not None:
        return [N - codim]
    return [N - c for c in range(max_codim + 1)]  # type: ignore[operator]


def enumerate_subspaces(field: Field, rows: int, cols: int, *, dim: int | None = None,
                        codim: int | None = None, max_codim: int | None = None,
                        limit: int | None = None) -> Iterator[Space]:
    """Yield every subspace of the requested dimension(s), deterministically.

    With ``max_codim`` the codimensions are emitted in increasing order
    (decreasing dimension).  ``limit`` truncates the stream (for previews);
    exhaustive consumers should not pass it.
    """
    N = rows * cols
    emitted = 0
    for d in _resolve_dims(N, dim, codim, max_codim):
        if not 0 <= d <= N:
            raise ValueError(f"dimension {d} out of range for ambient {N}")
        for S in _enumerate_dim(field, rows, cols, d):
            yield S
            emitted += 1
            if limit is not None and emitted >= limit:
                return


def _enumerate_dim(field: Field, rows: int, cols: int, d: int) -> Iterator[Space]:
    N = rows * cols
    q = field.q
    if d == 0:
        yield space_make(field, rows, cols, [])
        return
    for pivots in itertools.combinations(range(N), d):
        piv_set = set(pivots)
        free_pos = [(i, j) for i in range(d) for j in range(pivots[i] + 1, N)
                    if j not in piv_set]
        base = [[0] * N for _ in range(d)]
        for i, pc in enumerate(pivots):
            base[i][pc] = 1
        for assignment in itertools.product(range(q), repeat=len(free_pos)):
            vecs = [row[:] for row in base]
            for (i, j), v in zip(free_pos, assignment):
                vecs[i][j] = v
            basis = tuple(Mat(field, rows, cols, tuple(v)) for v in vecs)
            yield Space(field, rows, cols, "field", basis, tuple(pivots))


def random_space(field: Field, rows: int, cols: int, dim: int,
                 rng: random.Random) -> Space:
    """A uniformly-random-ish subspace of exact dimension *dim* (rejection sampled)."""
    N = rows * cols
    if not 0 <= dim <= N:
        raise ValueError(f"dimension {dim} out of range")
    while True:
        gens = [Mat(field, rows, cols, tuple(rng.randrange(field.q) for _ in range(N)))
                for _ in range(dim)]
        S = space_make(field, rows, cols, gens)
        if S.dim == dim:
            return S


def random_spaces(field: Field, rows: int, cols: int, *, count: int, seed: int,
                  max_codim: int) -> list[Space]:
    """Deterministic sample of *count* spaces with codim drawn uniformly in [0, max_codim]."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        codim = rng.randrange(max_codim + 1)
        out.append(random_space(field, rows, cols, rows * cols - codim, rng))
    return out


def check_budget(total: int, budget: int = DEFAULT_BUDGET) -> None:
    if total > budget:
        raise BudgetError(f"{total} items exceed enumeration budget {budget}")
