"""Graphviz DOT export of categories and correspondences."""

from __future__ import annotations

from cocart.core.category import FinCat
from cocart.core.marking import Marking
from cocart.fibrations.correspondence import Correspondence

MARKED_STYLE = 'color="red", style="bold"'


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(entity: FinCat | Correspondence, marking: Marking | None = None) -> str:
    """Deterministic DOT text with one node per object and one edge per
    non-identity morphism.

    Objects of a correspondence carry their degree; members of ``marking``
    are drawn in the marked style.
    """
    if isinstance(entity, Correspondence):
        C, degree = entity.total, entity.degree
    else:
        C, degree = entity, None
    marked = set(marking.members) if marking is not None else set()
    lines = [f"digraph {_quote(C.name or 'C')} {{", "  rankdir=LR;"]
    for x, label in enumerate(C.objects):
        text = label if degree is None else f"{label} [{degree[x]}]"
        lines.append(f"  n{x} [label={_quote(text)}];")
    for m in range(C.n_morphisms):
        if C.is_identity(m):
            continue
        style = f", {MARKED_STYLE}" if m in marked else ""
        lines.append(f"  n{C.src[m]} -> n{C.tgt[m]} [label={_quote(C.names[m])}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
