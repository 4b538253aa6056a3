from dataclasses import dataclass
from typing import List

import numpy as np

from .finite_group import Automorphism, FiniteGroup


@dataclass(frozen=True)
class TwistedClassDecomposition:
    """Partition of F under f ~_k g f alpha^k(g^-1)"""

    k: int
    classes: List[List[int]]
    sizes: List[int]
    stabilizer_orders: List[int]
    class_of: np.ndarray

    def class_index(self, f: int) -> int:
        return int(self.class_of[f])

    def size_of(self, f: int) -> int:
        return self.sizes[self.class_index(f)]

    def stabilizer_of(self, f: int) -> int:
        return self.stabilizer_orders[self.class_index(f)]

    def __len__(self) -> int:
        return len(self.classes)


def _orbits(G: FiniteGroup, twist: np.ndarray) -> TwistedClassDecomposition:
    """Orbits of f -> g f twist(g^-1); twist is a permutation of the elements"""
    table, inv = G.mul_table, G.inverse_table
    class_of = np.full(G.order, -1, dtype=np.int64)
    classes, sizes, stabilizers = [], [], []
    # identity first, then by smallest member
    order = [G.identity] + [x for x in G.elements if x != G.identity]
    for f in order:
        if class_of[f] >= 0:
            continue
        images = table[table[:, f], twist[inv]]
        members = sorted(set(images.tolist()))
        class_of[members] = len(classes)
        classes.append(members)
        sizes.append(len(members))
        stabilizers.append(int(np.count_nonzero(images == f)))
    class_of.setflags(write=False)
    return TwistedClassDecomposition(k=0, classes=classes, sizes=sizes,
                                     stabilizer_orders=stabilizers, class_of=class_of)


def conjugacy_classes(G: FiniteGroup) -> List[List[int]]:
    """
    Conjugacy classes of G, identity class first

    :param G: FiniteGroup
    :return: list - each class as a sorted list of element indices
    """
    return _orbits(G, np.arange(G.order)).classes


def twisted_classes(G: FiniteGroup, alpha: Automorphism, k: int) -> TwistedClassDecomposition:
    """
    Twisted conjugacy classes [f]_k with sizes and stabilizer orders s_k(f)

    :param G: FiniteGroup
    :param alpha: Automorphism - gluing automorphism
    :param k: int - twist exponent, reduced modulo the order of alpha
    :return: TwistedClassDecomposition
    """
    k_reduced = k % alpha.order
    twist = alpha.power(k_reduced).map
    dec = _orbits(G, twist)
    return TwistedClassDecomposition(k=k, classes=dec.classes, sizes=dec.sizes,
                                     stabilizer_orders=dec.stabilizer_orders, class_of=dec.class_of)
