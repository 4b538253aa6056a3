from typing import Callable, Dict

from .catalogue import (
    alternating_group,
    cyclic_group,
    dihedral_group,
    direct_product,
    quaternion_group,
    symmetric_group,
    trivial_group,
)
from .finite_group import FiniteGroup


class GroupFactory:
    """Factory for creating catalogue groups by name"""

    _registry: Dict[str, Callable[..., FiniteGroup]] = {}

    @classmethod
    def register(cls, name: str, constructor: Callable[..., FiniteGroup]):
        """Register a group constructor"""
        cls._registry[name] = constructor

    @classmethod
    def create(cls, name: str, *args, **kwargs) -> FiniteGroup:
        """Create group instance"""
        if name not in cls._registry:
            raise ValueError(f"Unknown group: {name}. Available: {list(cls._registry.keys())}")

        constructor = cls._registry[name]
        return constructor(*args, **kwargs)

    @classmethod
    def from_spec(cls, spec: str) -> FiniteGroup:
        """
        Parse names like 'Z3', 'D4', 'S3', 'A4', 'Q8', 'trivial' or products 'Z2xS3'
        """
        parts = [p.strip() for p in spec.split("x")] if spec != "trivial" else ["trivial"]
        groups = [cls._from_token(p) for p in parts]
        result = groups[0]
        for g in groups[1:]:
            result = direct_product(result, g)
        return result

    @classmethod
    def _from_token(cls, token: str) -> FiniteGroup:
        prefixes = {"Z": "cyclic", "C": "cyclic", "D": "dihedral", "S": "symmetric", "A": "alternating"}
        if token in ("trivial", "1"):
            return cls.create("trivial")
        if token == "Q8":
            return cls.create("quaternion")
        if token[:1] in prefixes and token[1:].isdigit():
            return cls.create(prefixes[token[0]], int(token[1:]))
        raise ValueError(f"Unknown group: {token}. Available: {list(cls._registry.keys())}")

    @classmethod
    def list_groups(cls) -> list:
        """List all registered groups"""
        return list(cls._registry.keys())


# Register built-in groups
GroupFactory.register('trivial', trivial_group)
GroupFactory.register('cyclic', cyclic_group)
GroupFactory.register('dihedral', dihedral_group)
GroupFactory.register('symmetric', symmetric_group)
GroupFactory.register('alternating', alternating_group)
GroupFactory.register('quaternion', quaternion_group)
GroupFactory.register('product', direct_product)
