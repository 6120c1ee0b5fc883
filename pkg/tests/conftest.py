import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from edentopo.lattice import GrowthState, neighbors_face

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# acceptance outcomes, printed in the terminal summary
ACCEPTANCE: dict[str, list[tuple[bool, str]]] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))


@pytest.fixture
def acceptance_record():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=lambda c: int(c.split()[0])):
        rows = ACCEPTANCE[crit]
        ok = all(r[0] for r in rows)
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {crit}: " + "; ".join(r[1] for r in rows))


def random_polyomino(rng: random.Random, d: int, n: int) -> list[tuple[int, ...]]:
    """Face-connected cell set grown by uniform random attachment."""
    state = GrowthState.single(d)
    for _ in range(n - 1):
        items = state.perimeter.items
        state.add_key(items[rng.randrange(len(items))])
    return state.cells()


@st.composite
def polyominoes(draw, dims=(2, 3), max_cells=40):
    d = draw(st.sampled_from(dims))
    n = draw(st.integers(1, max_cells))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return d, random_polyomino(random.Random(seed), d, n)


@st.composite
def cell_sets(draw, d=2, span=5, max_size=20):
    """Arbitrary (possibly disconnected) finite cell sets."""
    cells = draw(st.sets(st.tuples(*[st.integers(0, span - 1)] * d), min_size=1, max_size=max_size))
    return sorted(cells)


def brute_perimeter(cells):
    occ = set(cells)
    return {n for c in occ for n in neighbors_face(c) if n not in occ}
