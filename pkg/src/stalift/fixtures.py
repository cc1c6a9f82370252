"""Shared small algebras used across tests, docs and the CLI fixture files."""

from __future__ import annotations

from .algebra import FdAlgebra, algebra_from_quiver, quiver
from .exactla import FieldSpec


def dual_numbers(field: FieldSpec) -> FdAlgebra:
    """k[x]/(x^2): one vertex with a loop and a square-zero relation."""
    pres = quiver(["1"], [("x", "1", "1")], [[(1, ["x", "x"])]], field)
    return algebra_from_quiver(pres)


def path_a2(field: FieldSpec) -> FdAlgebra:
    """Path algebra of 1 -> 2 (hereditary, dim 3)."""
    pres = quiver(["1", "2"], [("a", "1", "2")], [], field)
    return algebra_from_quiver(pres)


def snake_algebra(field: FieldSpec) -> FdAlgebra:
    """Symmetric Nakayama algebra on two vertices, Loewy length 3.

    Arrows a: 1 -> 2 and b: 2 -> 1 with relations aba and bab; basis
    {e_1, e_2, a, b, ab, ba}.
    """
    pres = quiver(
        ["1", "2"],
        [("a", "1", "2"), ("b", "2", "1")],
        [[(1, ["a", "b", "a"])], [(1, ["b", "a", "b"])]],
        field,
    )
    return algebra_from_quiver(pres)


def nakayama3(field: FieldSpec) -> FdAlgebra:
    """Symmetric Nakayama algebra on the cyclic quiver 1 -> 2 -> 3 -> 1
    with all paths of length four equal to zero (dim 12, Loewy length 4)."""
    pres = quiver(
        ["1", "2", "3"],
        [("a1", "1", "2"), ("a2", "2", "3"), ("a3", "3", "1")],
        [
            [(1, ["a1", "a2", "a3", "a1"])],
            [(1, ["a2", "a3", "a1", "a2"])],
            [(1, ["a3", "a1", "a2", "a3"])],
        ],
        field,
    )
    return algebra_from_quiver(pres)


def cartan_display_two() -> dict:
    """Quiver presentation whose Cartan matrix is [[2, 1], [1, 3]].

    Ships as a display fixture for the `cartan` command; it is a small
    quiver algebra chosen for its Cartan matrix, nothing more.
    """
    return {
        "field": {"kind": "Q"},
        "vertices": ["1", "2"],
        "arrows": [
            {"name": "x", "from": "1", "to": "2"},
            {"name": "y", "from": "2", "to": "1"},
            {"name": "z", "from": "2", "to": "2"},
        ],
        "relations": [
            [{"coeff": 1, "path": ["y", "x"]}],
            [{"coeff": 1, "path": ["x", "z"]}],
            [{"coeff": 1, "path": ["z", "y"]}],
            [{"coeff": 1, "path": ["z", "z", "z"]}],
        ],
    }


def cartan_display_three() -> dict:
    """Quiver presentation whose Cartan matrix is [[2,1,1],[1,2,1],[1,1,3]]."""
    return {
        "field": {"kind": "Q"},
        "vertices": ["1", "2", "3"],
        "arrows": [
            {"name": "a", "from": "1", "to": "2"},
            {"name": "b", "from": "2", "to": "3"},
            {"name": "c", "from": "3", "to": "1"},
            {"name": "w", "from": "3", "to": "3"},
        ],
        "relations": [
            [{"coeff": 1, "path": ["w", "c"]}],
            [{"coeff": 1, "path": ["b", "w"]}],
            [{"coeff": 1, "path": ["c", "a", "b"]}],
            [{"coeff": 1, "path": ["w", "w", "w"]}],
            [{"coeff": 1, "path": ["a", "b", "c", "a"]}],
            [{"coeff": 1, "path": ["b", "c", "a", "b"]}],
        ],
    }
