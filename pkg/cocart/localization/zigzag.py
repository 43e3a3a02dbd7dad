"""Bounded zig-zag localization.

Morphisms of C[W⁻¹] are words of C-morphisms and formal inverses of
W-morphisms, read in application order, up to the congruence generated by
composition in C and s⁻¹∘s = id, s∘s⁻¹ = id. Only words up to a fixed
length are explored, so the result is an oracle rather than a proof.
"""

from __future__ import annotations

from dataclasses import dataclass

from cocart.core.category import FinCat, build_category, inverse, is_isomorphism
from cocart.core.exceptions import BudgetExceeded, IllFormed
from cocart.core.functor import FunctorData, identity_functor
from cocart.core.marking import Marking
from cocart.core.unionfind import UnionFind
from cocart.localization.models import Letter, LocalizationResult, Method, Word, render_word
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

Path = tuple[int, Word]


def _ends(C: FinCat, letter: Letter) -> tuple[int, int]:
    m = letter.morphism
    if letter.inverse:
        return C.tgt[m], C.src[m]
    return C.src[m], C.tgt[m]


def _alphabet(C: FinCat, W: Marking) -> list[Letter]:
    """Non-identity morphisms, then inverses of non-invertible W-members."""
    forward = [Letter(m) for m in range(C.n_morphisms) if not C.is_identity(m)]
    backward = [Letter(s, True) for s in W.non_identities() if not is_isomorphism(C, s)]
    return forward + backward


def _as_word(C: FinCat, m: int) -> Word:
    if C.is_identity(m):
        return ()
    return (Letter(m),)


def _inverse_word(C: FinCat, s: int) -> Word:
    inv = inverse(C, s)
    if inv is not None:
        return _as_word(C, inv)
    return (Letter(s, True),)


def _reduce_pair(C: FinCat, first: Letter, second: Letter) -> Word | None:
    """Shorter word equal to ``second∘first``, if a rule applies."""
    if not first.inverse and not second.inverse:
        return _as_word(C, C.comp[(second.morphism, first.morphism)])
    if first.morphism == second.morphism and first.inverse != second.inverse:
        return ()
    if first.inverse and second.inverse:
        return _inverse_word(C, C.comp[(first.morphism, second.morphism)])
    return None


@dataclass
class _Quotient:
    depth: int
    classes: UnionFind[Path]
    ends: dict[Path, int]


def _quotient(C: FinCat, W: Marking, depth: int, max_words: int) -> _Quotient:
    alphabet = _alphabet(C, W)
    by_src: dict[int, list[Letter]] = {}
    for letter in alphabet:
        by_src.setdefault(_ends(C, letter)[0], []).append(letter)
    level: list[Path] = [(x, ()) for x in range(C.n_objects)]
    ends: dict[Path, int] = {path: path[0] for path in level}
    classes: UnionFind[Path] = UnionFind(level)
    for _ in range(depth):
        next_level: list[Path] = []
        for start, word in level:
            for letter in by_src.get(ends[(start, word)], []):
                path = (start, word + (letter,))
                ends[path] = _ends(C, letter)[1]
                next_level.append(path)
        if len(classes) + len(next_level) > max_words:
            raise BudgetExceeded(
                f"zig-zag enumeration of {C.name} exceeds {max_words} words", max_words
            )
        for path in next_level:
            classes.add(path)
            start, word = path
            for i in range(len(word) - 1):
                shorter = _reduce_pair(C, word[i], word[i + 1])
                if shorter is not None:
                    classes.union(path, (start, word[:i] + shorter + word[i + 2 :]))
        level = next_level
    return _Quotient(depth, classes, ends)


@dataclass
class _Table:
    representatives: list[Path]
    class_of: dict[Path, int]
    q_map: list[int]
    n_images: int
    complete: bool


def _table(C: FinCat, quotient: _Quotient) -> _Table:
    classes = quotient.classes
    class_of: dict[Path, int] = {}
    representatives: list[Path] = []

    def register(path: Path) -> int:
        root = classes.find(path)
        k = class_of.get(root)
        if k is None:
            k = len(representatives)
            class_of[root] = k
            representatives.append(root)
        return k

    q_map = [register((C.src[m], _as_word(C, m))) for m in range(C.n_morphisms)]
    n_images = len(representatives)
    for members in classes.classes():
        register(members[0])
    complete = all(
        len(first[1]) + len(second[1]) <= quotient.depth
        for first in representatives
        for second in representatives
        if quotient.ends[first] == second[0]
    )
    return _Table(representatives, class_of, q_map, n_images, complete)


def _stable(C: FinCat, before: _Quotient, after: _Quotient) -> bool:
    """True iff classes of the shorter bound biject onto those of the longer."""
    old, new = _table(C, before), _table(C, after)
    if not (old.complete and new.complete):
        return False
    if len(old.representatives) != len(new.representatives):
        return False
    images = {after.classes.find(path) for path in old.representatives}
    return len(images) == len(new.representatives)


def localize_zigzag(
    C: FinCat, W: Marking, depth: int, max_words: int = 200_000
) -> LocalizationResult:
    """Localize C at W with words of length at most ``depth``.

    The result is converged when the depth−1 and depth quotients agree and
    every composite of representatives is a word within the bound; the
    localized category is only assembled in the latter case.

    Raises:
        IllFormed: If depth < 1
        BudgetExceeded: If more than ``max_words`` words would be enumerated
    """
    if depth < 1:
        raise IllFormed("zig-zag depth must be at least 1")
    if W.is_trivial():
        # nothing beyond isomorphisms to invert
        return LocalizationResult(
            source=C,
            marking=W,
            localized=C,
            q=identity_functor(C).renamed("q"),
            method=Method.ZIGZAG,
            certificates=tuple(_as_word(C, m) for m in range(C.n_morphisms)),
            depth=depth,
            converged=True,
        )
    quotient = _quotient(C, W, depth, max_words)
    converged = _stable(C, _quotient(C, W, depth - 1, max_words), quotient)
    table = _table(C, quotient)
    if not converged:
        logger.warning(
            "zigzag_not_converged",
            category=C.name,
            depth=depth,
            classes=len(table.representatives),
        )
    certificates = tuple(word for _, word in table.representatives)
    if not table.complete:
        return LocalizationResult(
            source=C,
            marking=W,
            localized=None,
            q=None,
            method=Method.ZIGZAG,
            certificates=certificates,
            depth=depth,
            converged=converged,
        )

    morphisms: list[tuple[str, int, int]] = []
    for k, (start, word) in enumerate(table.representatives):
        if k < table.n_images:
            preimages = [m for m, n in enumerate(table.q_map) if n == k]
            ids = [m for m in preimages if C.is_identity(m)]
            label = C.names[(ids or preimages)[0]]
        else:
            label = render_word(C, word)
        morphisms.append((label, start, quotient.ends[(start, word)]))

    def compose(g: int, f: int) -> int:
        start, first = table.representatives[f]
        _, second = table.representatives[g]
        return table.class_of[quotient.classes.find((start, first + second))]

    identity = [table.q_map[C.identity[x]] for x in range(C.n_objects)]
    localized = build_category(C.objects, morphisms, identity, compose, name=f"{C.name}[W^-1]")
    q = FunctorData(C, localized, tuple(range(C.n_objects)), tuple(table.q_map), name="q")
    logger.info(
        "localization_computed",
        category=C.name,
        method=Method.ZIGZAG.value,
        depth=depth,
        converged=converged,
        morphisms=localized.n_morphisms,
    )
    return LocalizationResult(
        source=C,
        marking=W,
        localized=localized,
        q=q,
        method=Method.ZIGZAG,
        certificates=certificates,
        depth=depth,
        converged=converged,
    )
