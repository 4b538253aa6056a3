from typing import Hashable, Optional

from .invariants import InvariantValue

NOT_FORCED = None


def dual_class_value(v: InvariantValue, inverse_label: Optional[Hashable] = None) -> InvariantValue:
    """
    Value predicted for the inverse class <g^-1>: the complex conjugate

    :param v: InvariantValue - value on <g>
    :param inverse_label: hashable, optional - label of <g^-1>; defaults to v's label
    :return: InvariantValue - same kind, conjugated value
    """
    label = v.class_label if inverse_label is None else inverse_label
    return InvariantValue(v.kind, label, v.value.conjugate())


def product_combinators(chi1: int, chi2: int, t1: complex, t2: complex,
                        g1_trivial: bool, g2_trivial: bool) -> complex:
    """
    Torsion of M1 x M2 on the class <g1, g2>

    :param chi1: int - Euler characteristic of M1
    :param chi2: int - Euler characteristic of M2
    :param t1: complex - delocalized torsion of M1 on <g1>
    :param t2: complex - delocalized torsion of M2 on <g2>
    :return: complex - delta(g1) chi1 t2 + delta(g2) chi2 t1
    """
    value = 0j
    if g1_trivial:
        value += chi1 * complex(t2)
    if g2_trivial:
        value += chi2 * complex(t1)
    return value


def eta_product(ahat1: complex, ahat2: complex, eta1: complex, eta2: complex,
                g1_trivial: bool, g2_trivial: bool) -> complex:
    """
    Eta of M1 x M2 on <g1, g2>; ahat_i is the integral of A-hat(TM_i) ch(E_i) over M_i
    """
    value = 0j
    if g1_trivial:
        value += complex(ahat1) * complex(eta2)
    if g2_trivial:
        value += complex(ahat2) * complex(eta1)
    return value


def vanishing_rules(d: int, kind: str) -> Optional[complex]:
    """
    0 when the dimension forces the invariant to vanish, else None

    :param d: int - manifold dimension
    :param kind: str - 'torsion' or 'signature_eta'
    :return: complex or None
    """
    if kind == "torsion":
        return 0j if d % 2 == 0 else NOT_FORCED
    elif kind == "signature_eta":
        return 0j if d % 4 == 1 else NOT_FORCED
    else:
        raise ValueError(f"Unknown kind: {kind}. Available: ['torsion', 'signature_eta']")