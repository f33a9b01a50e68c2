"""Tangles of abstract separation systems via structure trees."""

from ._core import (  # noqa: F401
    Family,
    System,
    TangleForgeError,
    Tree,
    all_tangles,
    build,
    family,
    graph_system,
    is_closed_under_minimization,
    is_f_tree,
    is_rich,
    is_structure_tree,
    questionnaire_system,
    reduce,
    report,
    restrict,
    similarity_system,
    system_from_json,
    tangles,
    to_dot,
)
