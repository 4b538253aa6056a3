from itertools import permutations
from typing import Callable, Hashable, List, Sequence

import numpy as np

from errors import DomainError

from .finite_group import FiniteGroup


def from_elements(elements: Sequence, op: Callable, key: Callable[[object], Hashable],
                  labels: Sequence[str]) -> FiniteGroup:
    """Tabulate a group given concrete elements and their product"""
    index = {key(x): i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[key(op(x, y))]
    return FiniteGroup(table, labels)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], ["e"])


def cyclic_group(n: int) -> FiniteGroup:
    """Z/n with element i standing for g^i"""
    if n < 1:
        raise DomainError(f"cyclic group needs n >= 1, got {n}")
    a = np.arange(n)
    labels = ["e"] + [f"g^{i}" if i > 1 else "g" for i in range(1, n)]
    return FiniteGroup((a[:, None] + a[None, :]) % n, labels)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; index a + n*b stands for r^a s^b"""
    if n < 1:
        raise DomainError(f"dihedral group needs n >= 1, got {n}")
    elements = [(a, b) for b in range(2) for a in range(n)]

    def op(x, y):
        a, b = x
        c, d = y
        return ((a + (-1) ** b * c) % n, (b + d) % 2)

    labels = [("e" if a == 0 else f"r^{a}") if b == 0 else ("s" if a == 0 else f"r^{a}s")
              for a, b in elements]
    return from_elements(elements, op, lambda x: x, labels)


def _permutation_group(perms: List[tuple]) -> FiniteGroup:
    def op(p, q):
        # (p q)(i) = p(q(i))
        return tuple(p[i] for i in q)

    labels = ["e" if list(p) == sorted(p) else "".join(str(i + 1) for i in p) for p in perms]
    return from_elements(perms, op, lambda x: x, labels)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n acting on {1..n} for n <= 5"""
    if not 1 <= n <= 5:
        raise DomainError(f"symmetric group catalogue covers 1 <= n <= 5, got {n}")
    return _permutation_group(sorted(permutations(range(n))))


def _sign(p: tuple) -> int:
    s, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        s *= (-1) ** (length - 1)
    return s


def alternating_group(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise DomainError(f"alternating group catalogue covers 1 <= n <= 5, got {n}")
    return _permutation_group([p for p in sorted(permutations(range(n))) if _sign(p) == 1])


def quaternion_group() -> FiniteGroup:
    """Q8 = {+-1, +-i, +-j, +-k} as unit quaternions"""
    basis = {
        "1": np.eye(2, dtype=complex),
        "i": np.array([[1j, 0], [0, -1j]]),
        "j": np.array([[0, 1], [-1, 0]], dtype=complex),
        "k": np.array([[0, 1j], [1j, 0]]),
    }
    names, mats = [], []
    for sign in (1, -1):
        for name, m in basis.items():
            names.append(name if sign == 1 else f"-{name}")
            mats.append(sign * m)

    def key(m):
        return tuple(np.round(m, 6).ravel().tolist())

    return from_elements(mats, lambda x, y: x @ y, key, names)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """G x H with index g * |H| + h"""
    n, m = G.order, H.order
    g = np.repeat(np.arange(n), m)
    h = np.tile(np.arange(m), n)
    table = G.mul_table[g[:, None], g[None, :]] * m + H.mul_table[h[:, None], h[None, :]]
    labels = [f"({G.labels[a]},{H.labels[b]})" for a, b in zip(g, h)]
    return FiniteGroup(table, labels)
