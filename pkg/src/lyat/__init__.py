"""Exact structure computations for Lie-Yamaguti algebras over QQ and GF(p)."""

from .algebra import (
    AxiomError,
    LYAlgebra,
    abelian,
    center,
    check_axioms,
    derived_algebra,
    from_leibniz,
    from_products,
    perturb,
)
from .catalog import catalog, example_2_9, example_2_10, random_ly_algebra
from .derivations import KINDS, OperatorSpace, all_spaces, operator_space
from .embedding import build_check, phi, verify_phi, verify_der_decomposition
from .fields import GF, QQ, CharacteristicError, field_from_spec
from .io import ParseError, format_algebra, load_algebra, parse_algebra
from .linalg import Subspace

__version__ = "0.1.0"

__all__ = [
    "AxiomError",
    "CharacteristicError",
    "GF",
    "KINDS",
    "LYAlgebra",
    "OperatorSpace",
    "ParseError",
    "QQ",
    "Subspace",
    "abelian",
    "all_spaces",
    "build_check",
    "catalog",
    "center",
    "check_axioms",
    "derived_algebra",
    "example_2_9",
    "example_2_10",
    "field_from_spec",
    "format_algebra",
    "from_leibniz",
    "from_products",
    "load_algebra",
    "operator_space",
    "parse_algebra",
    "perturb",
    "phi",
    "random_ly_algebra",
    "verify_phi",
    "verify_der_decomposition",
]
