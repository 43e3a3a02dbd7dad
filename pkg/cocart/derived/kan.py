"""Right extensions, right Kan extensions and absoluteness tests."""

from __future__ import annotations

import random
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

from cocart.core.category import FinCat, build_category, chain, discrete, indiscrete, terminal
from cocart.core.exceptions import IllFormed
from cocart.core.functor import FunctorData, compose_functors, enumerate_functors, identity_functor
from cocart.core.natural import NatTrans, natural_transformations, whisker_right
from cocart.core.sampling import random_category
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

Extension = tuple[FunctorData, NatTrans]

TEST_MORPHISMS = 6


@dataclass(frozen=True)
class RightExtensions:
    """The category RE_q(f) of pairs (f′: C′ → D, θ: f′∘q ⇒ f).

    Object k is ``extensions[k]``; morphism m is the transformation
    ``transformations[m]`` between the underlying functors.
    """

    category: FinCat
    extensions: tuple[Extension, ...]
    transformations: tuple[NatTrans, ...]

    def is_terminal(self, k: int) -> bool:
        """True iff every object has exactly one morphism into object k."""
        C = self.category
        return all(len(C.hom(x, k)) == 1 for x in range(C.n_objects))

    def index_of(self, functor: FunctorData, theta: NatTrans) -> int | None:
        """Object index of an extension, compared on the maps and components."""
        for k, (g, eta) in enumerate(self.extensions):
            if g == functor and eta.components == theta.components:
                return k
        return None

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "objects": len(self.extensions),
            "morphisms": len(self.transformations),
            "terminal": [self.category.objects[k] for k in range(len(self.extensions)) if self.is_terminal(k)],
        }


def re_category(f: FunctorData, q: FunctorData) -> RightExtensions:
    """Build RE_q(f) for f: C → D and q: C → C′.

    A morphism (f′, θ′) → (f″, θ″) is a μ: f′ ⇒ f″ with θ′_x = θ″_x∘μ_{q(x)}.

    Raises:
        IllFormed: If f and q do not share their source
    """
    if f.source != q.source:
        raise IllFormed(f"{f.name or 'f'} and {q.name or 'q'} have different sources")
    D = f.target
    extensions: list[Extension] = []
    for g in enumerate_functors(q.target, D):
        for theta in natural_transformations(compose_functors(g, q), f):
            extensions.append((g, theta))

    arrows: list[tuple[int, int, NatTrans]] = []
    for i, (g1, theta1) in enumerate(extensions):
        for j, (g2, theta2) in enumerate(extensions):
            for mu in natural_transformations(g1, g2):
                if all(
                    theta1.components[x] == D.comp[(theta2.components[x], mu.components[q.obj_map[x]])]
                    for x in range(f.source.n_objects)
                ):
                    arrows.append((i, j, mu))
    index = {(i, j, mu.components): k for k, (i, j, mu) in enumerate(arrows)}
    identity = [
        index[(i, i, tuple(D.identity[y] for y in g.obj_map))] for i, (g, _) in enumerate(extensions)
    ]
    identities = set(identity)
    morphisms = [
        (f"id_e{i}" if k in identities else f"mu{k}", i, j) for k, (i, j, _) in enumerate(arrows)
    ]

    def compose(second: int, first: int) -> int:
        i, _, mu1 = arrows[first]
        _, k, mu2 = arrows[second]
        components = tuple(D.comp[(b, a)] for b, a in zip(mu2.components, mu1.components, strict=True))
        return index[(i, k, components)]

    category = build_category(
        [f"e{i}" for i in range(len(extensions))],
        morphisms,
        identity,
        compose,
        name=f"RE_{q.name or 'q'}({f.name or 'f'})",
    )
    logger.debug("re_category_built", objects=len(extensions), morphisms=len(arrows))
    return RightExtensions(category, tuple(extensions), tuple(mu for _, _, mu in arrows))


def right_kan_extension(f: FunctorData, q: FunctorData) -> Extension | None:
    """First terminal object of RE_q(f), if any.

    Raises:
        IllFormed: If f and q do not share their source
    """
    extensions = re_category(f, q)
    for k, extension in enumerate(extensions.extensions):
        if extensions.is_terminal(k):
            return extension
    return None


def is_right_kan_extension(f: FunctorData, q: FunctorData, g: FunctorData, theta: NatTrans) -> bool:
    """True iff (g, θ) is a terminal object of RE_q(f)."""
    extensions = re_category(f, q)
    k = extensions.index_of(g, theta)
    return k is not None and extensions.is_terminal(k)


def check_absolute(
    g: FunctorData,
    theta: NatTrans,
    q: FunctorData,
    f: FunctorData,
    tests: Iterable[FunctorData],
) -> bool:
    """Check that every test functor t preserves the extension (g, θ).

    (t∘g, t·θ) must be terminal in RE_q(t∘f) for each t out of the target of f.

    Raises:
        IllFormed: If a test functor does not start at the target of f
    """
    for t in tests:
        if t.source != f.target:
            raise IllFormed(f"test functor {t.name or 't'} does not start at {f.target.name}")
        if not is_right_kan_extension(compose_functors(t, f), q, compose_functors(t, g), whisker_right(t, theta)):
            logger.debug("absoluteness_failed", test=t.name)
            return False
    return True


def absolute_targets(seed: int = 0, samples: int = 4, max_morphisms: int = TEST_MORPHISMS) -> list[FinCat]:
    """Targets for absoluteness tests: fixed small shapes plus seeded samples.

    Every category has at most ``max_morphisms`` morphisms.
    """
    fixed = [
        terminal(),
        chain(1),
        chain(2),
        discrete(["a", "b"], name="T+T"),
        indiscrete(["a", "b"], name="Iso"),
    ]
    rng = random.Random(seed)
    sampled: list[FinCat] = []
    for _ in range(samples * 8):
        if len(sampled) == samples:
            break
        E = random_category(rng, max_morphisms=max_morphisms)
        if E.n_morphisms <= max_morphisms and E not in fixed and E not in sampled:
            sampled.append(E)
    return [E for E in fixed if E.n_morphisms <= max_morphisms] + sampled


def absolute_battery(
    D: FinCat,
    seed: int = 0,
    samples: int = 4,
    per_target: int = 64,
) -> tuple[list[FunctorData], dict[str, int]]:
    """Test functors out of D: the identity and functors into each test category.

    Returns:
        The functors, and how many go into each target (keyed by position and name)
    """
    tests = [identity_functor(D)]
    counts: dict[str, int] = {}
    for k, E in enumerate(absolute_targets(seed, samples)):
        found = [t.renamed(f"t{k}.{n}") for n, t in enumerate(enumerate_functors(D, E, limit=per_target))]
        counts[f"{k}:{E.name}"] = len(found)
        tests.extend(found)
    logger.debug("absolute_battery_built", source=D.name, tests=len(tests))
    return tests, counts
