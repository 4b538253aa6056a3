from .catalogue import (
    alternating_group,
    cyclic_group,
    dihedral_group,
    direct_product,
    quaternion_group,
    symmetric_group,
    trivial_group,
)
from .characters import CharacterTable, burnside_table, character_table, verify_character_table
from .classes import TwistedClassDecomposition, conjugacy_classes, twisted_classes
from .factory import GroupFactory
from .finite_group import Automorphism, FiniteGroup
from .induced import InducedRepData, induced_character, semidirect_inverse, semidirect_multiply

__all__ = [
    'Automorphism',
    'CharacterTable',
    'FiniteGroup',
    'GroupFactory',
    'InducedRepData',
    'TwistedClassDecomposition',
    'alternating_group',
    'burnside_table',
    'character_table',
    'conjugacy_classes',
    'cyclic_group',
    'dihedral_group',
    'direct_product',
    'induced_character',
    'quaternion_group',
    'semidirect_inverse',
    'semidirect_multiply',
    'symmetric_group',
    'trivial_group',
    'twisted_classes',
    'verify_character_table',
]
