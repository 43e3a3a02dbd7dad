"""Workspaces: named categories, markings, functors and families from DSL sources."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path

from cocart.cli.dsl import (
    CategoryDecl,
    FamilyDecl,
    FunctorDecl,
    MarkingDecl,
    Statement,
    Word,
    parse_source,
    serialize,
)
from cocart.config import Settings
from cocart.core.category import FinCat
from cocart.core.exceptions import BudgetExceeded, CocartError, WorkspaceError
from cocart.core.functor import FunctorData, check_functor, compose_functors, identity_functor
from cocart.core.marking import Marking
from cocart.core.presentation import Generator, Presentation, Relation, compile_with_words
from cocart.derived.family import FunctorFamily
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class CompiledCategory:
    """A compiled category with generator words for every morphism."""

    category: FinCat
    presentation: Presentation
    # generator indices in application order, per morphism
    words: tuple[tuple[int, ...], ...]


@dataclass
class FamilyEntry:
    """A family with the right adjoints supplied in the source."""

    family: FunctorFamily
    rights: dict[int, FunctorData] = field(default_factory=dict)


@dataclass
class Workspace:
    """Everything declared in a set of sources, resolved and validated."""

    statements: list[Statement] = field(default_factory=list)
    categories: dict[str, CompiledCategory] = field(default_factory=dict)
    markings: dict[str, Marking] = field(default_factory=dict)
    functors: dict[str, FunctorData] = field(default_factory=dict)
    families: dict[str, FamilyEntry] = field(default_factory=dict)

    def category(self, name: str) -> FinCat:
        """Look up a category.

        Raises:
            WorkspaceError: If no category has that name
        """
        try:
            return self.categories[name].category
        except KeyError:
            raise WorkspaceError(f"unknown category {name!r}", name) from None

    def marking(self, name: str) -> Marking:
        """Look up a marking.

        Raises:
            WorkspaceError: If no marking has that name
        """
        try:
            return self.markings[name]
        except KeyError:
            raise WorkspaceError(f"unknown marking {name!r}", name) from None

    def functor(self, name: str) -> FunctorData:
        """Look up a functor.

        Raises:
            WorkspaceError: If no functor has that name
        """
        try:
            return self.functors[name]
        except KeyError:
            raise WorkspaceError(f"unknown functor {name!r}", name) from None

    def family(self, name: str) -> FamilyEntry:
        """Look up a family.

        Raises:
            WorkspaceError: If no family has that name
        """
        try:
            return self.families[name]
        except KeyError:
            raise WorkspaceError(f"unknown family {name!r}", name) from None

    def to_source(self) -> str:
        """Canonical source text of the workspace."""
        return serialize(self.statements)

    def summary(self) -> dict[str, list[str]]:
        """Declared names per kind."""
        return {
            "categories": sorted(self.categories),
            "markings": sorted(self.markings),
            "functors": sorted(self.functors),
            "families": sorted(self.families),
        }


def _resolve_word(C: FinCat, word: Word, construct: str) -> int:
    """Morphism denoted by a dot-separated word, composed right to left."""
    try:
        return C.compose_path([C.mor(token) for token in reversed(word)])
    except CocartError as e:
        raise WorkspaceError(f"{construct}: {e}", construct) from e


class WorkspaceBuilder:
    """Resolves parsed statements in order into a Workspace."""

    def __init__(self, settings: Settings | None = None) -> None:
        self.settings = settings or Settings()
        self.workspace = Workspace()

    def add_source(self, text: str) -> None:
        """Parse and resolve one source text.

        Raises:
            DSLSyntaxError: On malformed input
            WorkspaceError: On unknown names, duplicates or invalid constructs
        """
        for statement in parse_source(text):
            self.add(statement)

    def add(self, statement: Statement) -> None:
        """Resolve one statement against what is already declared."""
        if isinstance(statement, CategoryDecl):
            self._add_category(statement)
        elif isinstance(statement, MarkingDecl):
            self._add_marking(statement)
        elif isinstance(statement, FunctorDecl):
            self._add_functor(statement)
        else:
            self._add_family(statement)
        self.workspace.statements.append(statement)

    def _claim(self, kind: Mapping[str, object], name: str, what: str) -> None:
        if name in kind:
            raise WorkspaceError(f"duplicate {what} {name!r}", name)

    def _add_category(self, decl: CategoryDecl) -> None:
        self._claim(self.workspace.categories, decl.name, "category")
        pres = Presentation(
            decl.name,
            decl.objects,
            tuple(Generator(u, a, b) for u, a, b in decl.arrows),
            tuple(Relation(lhs, rhs) for lhs, rhs in decl.relations),
        )
        try:
            category, words = compile_with_words(pres, self.settings.budget, self.settings.max_nodes)
        except BudgetExceeded as e:
            raise WorkspaceError(f"budget exceeded in {decl.name}: {e}", decl.name) from e
        except CocartError as e:
            raise WorkspaceError(str(e), decl.name) from e
        self.workspace.categories[decl.name] = CompiledCategory(category, pres, words)
        logger.debug("category_declared", category=decl.name, morphisms=category.n_morphisms)

    def _add_marking(self, decl: MarkingDecl) -> None:
        self._claim(self.workspace.markings, decl.name, "marking")
        C = self.workspace.category(decl.category)
        members = frozenset(_resolve_word(C, w, decl.name) for w in decl.members)
        self.workspace.markings[decl.name] = Marking(C, members)

    def _add_functor(self, decl: FunctorDecl) -> None:
        self._claim(self.workspace.functors, decl.name, "functor")
        compiled = self.workspace.categories.get(decl.source)
        if compiled is None:
            raise WorkspaceError(f"unknown category {decl.source!r}", decl.name)
        S, T = compiled.category, self.workspace.category(decl.target)
        given_objects = dict(decl.objects)
        obj_map: list[int] = []
        for label in S.objects:
            if label not in given_objects:
                raise WorkspaceError(f"{decl.name}: object {label} has no image", decl.name)
            try:
                obj_map.append(T.obj(given_objects[label]))
            except CocartError as e:
                raise WorkspaceError(f"{decl.name}: {e}", decl.name) from e
        unknown = set(given_objects) - set(S.objects)
        if unknown:
            raise WorkspaceError(f"{decl.name}: unknown object {sorted(unknown)[0]}", decl.name)

        generators = compiled.presentation.generators
        given_arrows = dict(decl.arrows)
        unknown = set(given_arrows) - {g.name for g in generators}
        if unknown:
            raise WorkspaceError(f"{decl.name}: {sorted(unknown)[0]} is not a generator of {S.name}", decl.name)
        images: list[int] = []
        for gen in generators:
            if gen.name not in given_arrows:
                raise WorkspaceError(f"{decl.name}: arrow {gen.name} has no image", decl.name)
            image = _resolve_word(T, given_arrows[gen.name], decl.name)
            m = S.mor(gen.name)
            if T.src[image] != obj_map[S.src[m]]:
                raise WorkspaceError(f"{decl.name}: not a functor: src mismatch at {gen.name}", decl.name)
            if T.tgt[image] != obj_map[S.tgt[m]]:
                raise WorkspaceError(f"{decl.name}: not a functor: tgt mismatch at {gen.name}", decl.name)
            images.append(image)

        mor_map: list[int] = []
        for m, word in enumerate(compiled.words):
            image = T.identity[obj_map[S.src[m]]]
            for g in word:
                image = T.comp[(images[g], image)]
            mor_map.append(image)
        F = FunctorData(S, T, tuple(obj_map), tuple(mor_map), name=decl.name)
        issues = check_functor(F)
        if issues:
            raise WorkspaceError(f"{decl.name}: not a functor: {issues[0]}", decl.name)
        self.workspace.functors[decl.name] = F

    def _add_family(self, decl: FamilyDecl) -> None:
        self._claim(self.workspace.families, decl.name, "family")
        compiled = self.workspace.categories.get(decl.base)
        if compiled is None:
            raise WorkspaceError(f"unknown category {decl.base!r}", decl.name)
        B = compiled.category
        fibers: dict[str, tuple[FinCat, Marking]] = {}
        for b, category, marking in decl.fibers:
            W = self.workspace.marking(marking)
            if W.host != self.workspace.category(category):
                raise WorkspaceError(f"{decl.name}: marking {marking} is not on {category}", decl.name)
            fibers[b] = (W.host, W)
        missing = [b for b in B.objects if b not in fibers]
        if missing:
            raise WorkspaceError(f"{decl.name}: no fiber over {missing[0]}", decl.name)

        given = dict(decl.maps)
        images: list[FunctorData] = []
        for gen in compiled.presentation.generators:
            if gen.name not in given:
                raise WorkspaceError(f"{decl.name}: no functor over {gen.name}", decl.name)
            images.append(self.workspace.functor(given[gen.name]))
        maps: list[FunctorData] = []
        for m, word in enumerate(compiled.words):
            F = identity_functor(fibers[B.objects[B.src[m]]][0])
            try:
                for g in word:
                    F = compose_functors(images[g], F)
            except CocartError as e:
                raise WorkspaceError(f"{decl.name}: {e}", decl.name) from e
            maps.append(F.renamed(B.names[m] if word else F.name))
        try:
            family = FunctorFamily(
                B,
                tuple(fibers[b][0] for b in B.objects),
                tuple(maps),
                tuple(fibers[b][1] for b in B.objects),
            )
        except CocartError as e:
            raise WorkspaceError(f"{decl.name}: {e}", decl.name) from e
        rights = {_resolve_word(B, (u,), decl.name): self.workspace.functor(G) for u, G in decl.rights}
        self.workspace.families[decl.name] = FamilyEntry(family, rights)


def parse_workspace(sources: str | Iterable[str], settings: Settings | None = None) -> Workspace:
    """Parse and resolve one or more source texts into a Workspace.

    Raises:
        DSLSyntaxError: On malformed input
        WorkspaceError: On semantic errors, naming the offending construct
    """
    builder = WorkspaceBuilder(settings)
    for text in [sources] if isinstance(sources, str) else sources:
        builder.add_source(text)
    logger.debug("workspace_parsed", **builder.workspace.summary())
    return builder.workspace


def load_workspace(paths: Iterable[Path], settings: Settings | None = None) -> Workspace:
    """Read UTF-8 source files and parse them as one workspace."""
    return parse_workspace([Path(p).read_text(encoding="utf-8") for p in paths], settings)
