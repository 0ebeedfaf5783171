"""Group algebras over prime fields, their matrix representation, and codes built from them."""

from galg.algebra import (
    AlgebraElement,
    induced_map,
    invert,
    is_unit,
    random_unit_of_weight,
    random_weight_w,
    unit_order,
)
from galg.field import GF2, PrimeField
from galg.groups import (
    FiniteGroup,
    GroupHom,
    check_hom,
    cyclic_group,
    dihedral_group,
    element_order,
    parse_group_spec,
    product_group,
)
from galg.linalg import FieldMatrix
from galg.matrep import (
    KroneckerDecomposition,
    abelian_decompose,
    circulant,
    decomposition_to_matrix,
    representation_matrix,
    shift_matrix,
)

__all__ = [
    "AlgebraElement",
    "FieldMatrix",
    "FiniteGroup",
    "GF2",
    "GroupHom",
    "KroneckerDecomposition",
    "PrimeField",
    "abelian_decompose",
    "check_hom",
    "circulant",
    "cyclic_group",
    "decomposition_to_matrix",
    "dihedral_group",
    "element_order",
    "induced_map",
    "invert",
    "is_unit",
    "parse_group_spec",
    "product_group",
    "random_unit_of_weight",
    "random_weight_w",
    "representation_matrix",
    "shift_matrix",
    "unit_order",
]
