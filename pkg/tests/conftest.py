import itertools
import random

import numpy as np
import pytest

from cwcheeger.complex import CWComplex, from_simplicial, zoo

ZOO_CASES = [
    ("path", 1),
    ("path", 2),
    ("path", 3),
    ("path", 4),
    ("cycle", 1),
    ("cycle", 2),
    ("cycle", 3),
    ("cycle", 4),
    ("cycle", 5),
    ("star", 1),
    ("star", 2),
    ("star", 3),
    ("star", 4),
    ("simplex_boundary", 2),
    ("simplex_boundary", 3),
    ("simplex_boundary", 4),
    ("filled_simplex", 1),
    ("filled_simplex", 2),
    ("filled_simplex", 3),
    ("tetra_minus_face", None),
    ("torus_7", None),
    ("rp2_6", None),
    ("klein_8", None),
    ("book", 1),
    ("book", 2),
    ("book", 3),
    ("book", 4),
]


def case_id(case):
    name, param = case
    return name if param is None else f"{name}_{param}"


def all_zoo():
    return [(case_id(c), zoo(*c)) for c in ZOO_CASES]


def random_tree(rng: random.Random, edges: int) -> CWComplex:
    """Random labelled tree: vertex i attaches to a uniformly chosen earlier vertex."""
    pairs = [(rng.randrange(i), i) for i in range(1, edges + 1)]
    return from_simplicial(pairs)


def random_connected_nontree(rng: random.Random, vertices: int) -> CWComplex:
    pairs = {(rng.randrange(i), i) for i in range(1, vertices)}
    missing = [p for p in itertools.combinations(range(vertices), 2) if p not in pairs]
    extra = rng.randint(1, min(3, len(missing)))
    pairs |= set(rng.sample(missing, extra))
    return from_simplicial(sorted(pairs))


def random_2complex(rng: random.Random, max_triangles: int = 10, vertices: int = 6) -> CWComplex:
    tris = list(itertools.combinations(range(vertices), 3))
    k = rng.randint(1, max_triangles)
    return from_simplicial(rng.sample(tris, k))


def brute_f2_rank(a) -> int:
    """log2 of the number of distinct vectors in the row space."""
    a = np.mod(np.asarray(a, dtype=np.int64), 2)
    rows = [int("".join(map(str, r[::-1])), 2) if len(r) else 0 for r in a]
    span = {0}
    for r in rows:
        span |= {x ^ r for x in span}
    return len(span).bit_length() - 1


@pytest.fixture
def p3():
    return zoo("path", 2)


@pytest.fixture
def tmf():
    return zoo("tetra_minus_face")
