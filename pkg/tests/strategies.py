"""Random contexts and measures: hypothesis strategies and a seeded corpus."""
import random
from fractions import Fraction

from hypothesis import strategies as st

from fcadepth import DiscreteMeasure, FormalContext


def context_from_rows(rows, n_attrs) -> FormalContext:
    return FormalContext(
        tuple(f"g{i + 1}" for i in range(len(rows))),
        tuple(f"m{j + 1}" for j in range(n_attrs)),
        tuple(rows),
    )


@st.composite
def contexts(draw, max_objects=8, max_attributes=8, min_objects=1):
    n = draw(st.integers(min_objects, max_objects))
    m = draw(st.integers(0, max_attributes))
    rows = draw(st.lists(st.integers(0, (1 << m) - 1), min_size=n, max_size=n))
    return context_from_rows(rows, m)


@st.composite
def measures(draw, n):
    ws = draw(st.lists(st.integers(0, 6), min_size=n, max_size=n).filter(any))
    return DiscreteMeasure.from_weights(ws)


@st.composite
def contexts_with_measure(draw, max_objects=8, max_attributes=8):
    ctx = draw(contexts(max_objects, max_attributes))
    return ctx, draw(measures(ctx.n_objects))


def random_context(rng: random.Random, max_objects=8, max_attributes=8) -> FormalContext:
    n = rng.randint(1, max_objects)
    m = rng.randint(1, max_attributes)
    density = rng.random()
    rows = [sum(1 << j for j in range(m) if rng.random() < density) for _ in range(n)]
    return context_from_rows(rows, m)


def random_measure(rng: random.Random, n: int) -> DiscreteMeasure:
    while True:
        ws = [Fraction(rng.randint(0, 9), rng.randint(1, 5)) for _ in range(n)]
        if any(ws):
            return DiscreteMeasure.from_weights(ws)


def random_corpus(seed: int, size: int, max_objects=8, max_attributes=8):
    rng = random.Random(seed)
    for _ in range(size):
        ctx = random_context(rng, max_objects, max_attributes)
        yield ctx, random_measure(rng, ctx.n_objects)


def quasiconcave_target(rng: random.Random, ctx: FormalContext) -> list:
    """Depth values whose contour sets are a random chain of extents starting at G."""
    from fcadepth.context import extent_masks

    family = extent_masks(ctx)
    chain = [ctx.all_objects]
    while True:
        inner = [e for e in family if e and e != chain[-1] and e & ~chain[-1] == 0]
        if not inner or rng.random() < 0.25:
            break
        chain.append(rng.choice(inner))
    steps = sorted({Fraction(rng.randint(1, 20), rng.randint(1, 4)) for _ in chain})
    while len(steps) < len(chain):
        steps.append(steps[-1] + 1)
    base = Fraction(rng.randint(0, 3), 4)
    values = []
    for g in range(ctx.n_objects):
        depth = sum(1 for e in chain if e >> g & 1)
        values.append(base + sum(steps[:depth - 1]))
    return values
