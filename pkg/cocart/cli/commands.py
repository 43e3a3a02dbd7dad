"""Command implementations: workspace lookups in, Reports out."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from cocart.cli.dot import export_dot
from cocart.cli.report import Report, Status
from cocart.cli.workspace import Workspace
from cocart.config import Settings
from cocart.core.category import FinCat, validate_category
from cocart.core.exceptions import HypothesisFailed, WorkspaceError
from cocart.core.functor import FunctorData, check_functor, compose_functors
from cocart.core.marking import Marking, isos_only
from cocart.core.natural import find_natural_isomorphism
from cocart.derived.adjunction import derive_adjoint_pair, find_right_adjoint
from cocart.derived.composition import derive_pair_composition
from cocart.derived.family import derive_adjoint_family, derive_family
from cocart.derived.functors import derive_preserving, left_derived, localized_chain, right_derived
from cocart.derived.kan import absolute_battery, check_absolute, re_category, right_kan_extension
from cocart.derived.models import DerivedResult, DerivedStatus, Side
from cocart.derived.resolution import derive_via_resolution
from cocart.derived.separation import find_separation_instance
from cocart.fibrations.cocartesian import check_cartesian, check_cocartesian
from cocart.fibrations.composition import check_flat_over_triangle, flatness_defects
from cocart.fibrations.grothendieck import grothendieck_cart, grothendieck_chain, grothendieck_cocart
from cocart.localization.deligne import deligne_comparison
from cocart.localization.engine import MethodChoice, localize
from cocart.localization.fractions import check_left_fractions, check_right_fractions
from cocart.localization.models import LocalizationResult

DERIVED_STATUS: dict[DerivedStatus, Status] = {
    DerivedStatus.EXISTS: "ok",
    DerivedStatus.FAILS_COCARTESIAN: "fails_cocartesian",
    DerivedStatus.NOT_CERTIFIED: "not_certified",
}


def _marking(ws: Workspace, name: str | None, C: FinCat, option: str) -> Marking:
    """Named marking on C, or the isomorphisms of C when no name is given."""
    if name is None:
        return isos_only(C)
    W = ws.marking(name)
    if W.host != C:
        raise WorkspaceError(f"--{option} {name} is not a marking of {C.name}", name)
    return W


def _notes(*localizations: LocalizationResult | None) -> list[str]:
    notes: list[str] = []
    for L in localizations:
        if L is not None:
            notes.extend(n for n in L.notes if n not in notes)
    return notes


def validate_command(ws: Workspace) -> Report:
    """Re-run every validator over the workspace."""
    categories: dict[str, Any] = {}
    ok = True
    for name, compiled in sorted(ws.categories.items()):
        report = validate_category(compiled.category)
        ok = ok and report.ok
        categories[name] = {
            "objects": compiled.category.n_objects,
            "morphisms": compiled.category.n_morphisms,
            "valid": report.ok,
            **({"violations": report.to_dict()["violations"]} if not report.ok else {}),
        }
    functors: dict[str, Any] = {}
    for name, F in sorted(ws.functors.items()):
        issues = check_functor(F)
        ok = ok and not issues
        functors[name] = {"source": F.source.name, "target": F.target.name, "issues": issues}
    markings = {name: W.to_dict() for name, W in sorted(ws.markings.items())}
    families = {name: entry.family.to_dict() for name, entry in sorted(ws.families.items())}
    return Report(
        command="validate",
        status="ok" if ok else "error",
        result={"categories": categories, "functors": functors, "markings": markings, "families": families},
    )


def localize_command(
    ws: Workspace, settings: Settings, category: str, marking: str | None, method: MethodChoice
) -> Report:
    """Localize a category and report the fraction conditions."""
    C = ws.category(category)
    W = _marking(ws, marking, C, "w")
    L = localize(C, W, method, settings.depth, settings.max_zigzag_words)
    result: dict[str, Any] = {
        "localization": L.to_dict(),
        "right_fractions": check_right_fractions(C, W).to_dict(),
        "left_fractions": check_left_fractions(C, W).to_dict(),
    }
    return Report(
        command="localize",
        status="ok" if L.certified else "not_certified",
        result=result,
        notes=_notes(L),
    )


def grothendieck_command(ws: Workspace, functor: str, cartesian: bool, dot: Path | None) -> Report:
    """Build E_f (or F_f), decide (co)cartesianness and re-classify."""
    f = ws.functor(functor)
    if cartesian:
        X = grothendieck_cart(f)
        witness = check_cartesian(X)
    else:
        X = grothendieck_cocart(f)
        witness = check_cocartesian(X)
    result: dict[str, Any] = {"correspondence": X.to_dict(), "cartesian" if cartesian else "cocartesian": witness is not None}
    if witness is not None:
        classified = witness.classifying[0]
        result["witness"] = witness.to_dict()
        if not cartesian:
            eta = find_natural_isomorphism(classified, f)
            result["classifies_functor"] = eta is not None
    if dot is not None:
        dot.write_text(export_dot(X), encoding="utf-8")
    return Report(command="grothendieck", status="ok" if witness is not None else "fails_cocartesian", result=result)


def _derived_report(command: str, result: DerivedResult) -> Report:
    return Report(
        command=command,
        status=DERIVED_STATUS[result.status],
        result={"derived": result.to_dict()},
        notes=_notes(result.source_localization, result.target_localization),
    )


def derive_command(
    ws: Workspace,
    settings: Settings,
    functor: str,
    wc: str | None,
    wd: str | None,
    side: Side,
    method: MethodChoice,
    preserving: bool = False,
    resolution: str | None = None,
) -> Report:
    """Left or right derived functor through the chosen pipeline."""
    f = ws.functor(functor)
    W_C = _marking(ws, wc, f.source, "wc")
    W_D = _marking(ws, wd, f.target, "wd")
    command = f"derive-{side.value}"
    depth, max_words = settings.depth, settings.max_zigzag_words
    if preserving:
        return _derived_report(command, derive_preserving(f, W_C, W_D, method, depth, max_words))
    if resolution is not None:
        if side is Side.RIGHT:
            raise WorkspaceError("--resolution only applies to left derived functors", resolution)
        i = ws.functor(resolution)
        return _derived_report(command, derive_via_resolution(f, i, W_C, W_D, method, depth, max_words))
    pipeline = left_derived if side is Side.LEFT else right_derived
    return _derived_report(command, pipeline(f, W_C, W_D, method, depth, max_words))


def adjoint_command(
    ws: Workspace,
    settings: Settings,
    left: str,
    right: str | None,
    wc: str | None,
    wd: str | None,
    method: MethodChoice,
) -> Report:
    """Derive an adjoint pair; the right adjoint is searched when not given."""
    f = ws.functor(left)
    if right is not None:
        g = ws.functor(right)
    else:
        found = find_right_adjoint(f)
        if found is None:
            raise HypothesisFailed(f"{left} has no right adjoint", "adjoint", left)
        g = found[0]
    W_C = _marking(ws, wc, f.source, "wc")
    W_D = _marking(ws, wd, f.target, "wd")
    pair = derive_adjoint_pair(f, g, W_C, W_D, method, settings.depth, settings.max_zigzag_words)
    if pair is None:
        raise HypothesisFailed(f"{left} is not left adjoint to {g.name}", "adjoint", left)
    return Report(
        command="adjoint",
        result={"adjoint": True, "right_adjoint": g.to_dict(), "derived": pair.to_dict()},
        notes=_notes(pair.left.source_localization, pair.left.target_localization),
    )


def kan_command(
    ws: Workspace,
    settings: Settings,
    functor: str,
    along: str | None,
    wc: str | None,
    wd: str | None,
    method: MethodChoice,
    absolute: bool,
) -> Report:
    """Right Kan extension of f along q, or of q_D∘f along q_C."""
    f = ws.functor(functor)
    notes: list[str] = []
    if along is not None:
        q = ws.functor(along)
    else:
        L_C = localize(f.source, _marking(ws, wc, f.source, "wc"), method, settings.depth, settings.max_zigzag_words)
        L_D = localize(f.target, _marking(ws, wd, f.target, "wd"), method, settings.depth, settings.max_zigzag_words)
        if L_C.q is None or L_D.q is None or not (L_C.certified and L_D.certified):
            return Report(command="kan", status="not_certified", notes=_notes(L_C, L_D))
        q, f = L_C.q, compose_functors(L_D.q, f)
        notes = _notes(L_C, L_D)
    extensions = re_category(f, q)
    kan = right_kan_extension(f, q)
    result: dict[str, Any] = {"extensions": extensions.to_dict(), "exists": kan is not None}
    if kan is not None:
        g, theta = kan
        result["extension"] = g.to_dict()
        result["theta"] = theta.to_dict()
        if absolute:
            tests, targets = absolute_battery(f.target, settings.seed)
            result["absolute"] = check_absolute(g, theta, q, f, tests)
            result["absolute_tests"] = len(tests)
            result["absolute_targets"] = targets
    return Report(command="kan", status="ok" if kan is not None else "fails_cocartesian", result=result, notes=notes)


def deligne_command(ws: Workspace, functor: str, marking: str | None) -> Report:
    """Compare the Deligne correspondence with E_f after localization."""
    f = ws.functor(functor)
    comparison = deligne_comparison(f, _marking(ws, marking, f.source, "wc"))
    return Report(
        command="deligne",
        status="ok" if comparison.fully_faithful else "fails_cocartesian",
        result=comparison.to_dict(),
    )


def compose_command(
    ws: Workspace,
    settings: Settings,
    f_name: str,
    g_name: str,
    markings: tuple[str | None, str | None, str | None],
    method: MethodChoice,
) -> Report:
    """Compare 𝐋g∘𝐋f with 𝐋(g∘f)."""
    f, g = ws.functor(f_name), ws.functor(g_name)
    W0 = _marking(ws, markings[0], f.source, "w0")
    W1 = _marking(ws, markings[1], f.target, "w1")
    W2 = _marking(ws, markings[2], g.target, "w2")
    report = derive_pair_composition(f, g, W0, W1, W2, method, settings.depth, settings.max_zigzag_words)
    derived = (report.left_f, report.left_g, report.left_gf)
    holds = report.flat and report.cocartesian and all(result.exists for result in derived)
    return Report(
        command="compose",
        status="ok" if holds else "fails_cocartesian",
        result=report.to_dict(),
        notes=_notes(*(L for result in derived for L in (result.source_localization, result.target_localization))),
    )


def flat_command(
    ws: Workspace,
    settings: Settings,
    f_name: str,
    g_name: str,
    markings: tuple[str | None, str | None, str | None],
    method: MethodChoice,
) -> Report:
    """Flatness over [2] of the chain f, g, localized when markings are given."""
    f, g = ws.functor(f_name), ws.functor(g_name)
    if any(m is not None for m in markings):
        W = [
            _marking(ws, markings[0], f.source, "w0"),
            _marking(ws, markings[1], f.target, "w1"),
            _marking(ws, markings[2], g.target, "w2"),
        ]
        _, X = localized_chain([f, g], W, method, settings.depth, settings.max_zigzag_words)
    else:
        X = grothendieck_chain([f, g])
    flat = check_flat_over_triangle(X)
    T = X.total
    defects = [f"{T.objects[x]}->{T.objects[z]}" for x, z in flatness_defects(X)]
    return Report(
        command="flat",
        status="ok" if flat else "fails_cocartesian",
        result={"correspondence": T.name, "flat": flat, "defects": defects},
    )


def family_command(ws: Workspace, settings: Settings, name: str, adjoint: bool, method: MethodChoice) -> Report:
    """Derive a family, optionally with derived adjoint pairs."""
    entry = ws.family(name)
    depth, max_words = settings.depth, settings.max_zigzag_words
    if adjoint:
        result = derive_adjoint_family(entry.family, entry.rights, method, depth, max_words)
    else:
        result = derive_family(entry.family, method, depth, max_words)
    return Report(command="family", result=result.to_dict(), notes=_notes(*result.localizations))


def separate_command(settings: Settings, attempts: int) -> Report:
    """Seeded search for a Kan extension without a left derived functor."""
    instance = find_separation_instance(settings.seed, attempts, settings.depth)
    if instance is None:
        return Report(command="separate", status="not_certified", result={"found": False})
    return Report(command="separate", result={"found": True, "instance": instance.to_dict()})


def dot_command(ws: Workspace, name: str, marking: str | None, cartesian: bool) -> str:
    """DOT text of a category, or of E_f / F_f for a functor name."""
    if name in ws.categories:
        C = ws.category(name)
        return export_dot(C, _marking(ws, marking, C, "w") if marking is not None else None)
    f: FunctorData = ws.functor(name)
    X = grothendieck_cart(f) if cartesian else grothendieck_cocart(f)
    return export_dot(X)
