"""STO-3G contracted Gaussian basis sets for H through O.

Each shell is three primitive Gaussians.  Heavy atoms carry one core S shell
plus one SP shell whose s and p functions share exponents.  Exponents and
contraction coefficients are the standard published STO-3G values.
"""

from dataclasses import dataclass
import math

import numpy as np

ANGSTROM_PER_BOHR = 0.529177210903

ATOMIC_NUMBER = {"H": 1, "Li": 3, "Be": 4, "C": 6, "N": 7, "O": 8}

_S_CONTRACTION = (0.15432897, 0.53532814, 0.44463454)
_SP_S_CONTRACTION = (-0.09996723, 0.39951283, 0.70011547)
_SP_P_CONTRACTION = (0.15591627, 0.60768372, 0.39195739)

# element -> ((1s exponents), (2sp exponents) or None)
_EXPONENTS = {
    "H": ((3.42525091, 0.62391373, 0.16885540), None),
    "Li": ((16.1195750, 2.9362007, 0.7946505), (0.6362897, 0.1478601, 0.0480887)),
    "Be": ((30.1678710, 5.4951153, 1.4871927), (1.3148331, 0.3055389, 0.0993707)),
    "C": ((71.6168370, 13.0450960, 3.5305122), (2.9412494, 0.6834831, 0.2222899)),
    "N": ((99.1061690, 18.0523120, 4.8856602), (3.7804559, 0.8784966, 0.2857144)),
    "O": ((130.7093200, 23.8088610, 6.4436083), (5.0331513, 1.1695961, 0.3803890)),
}


class BasisError(ValueError):
    pass


@dataclass(frozen=True)
class BasisFunction:
    """One contracted Cartesian Gaussian: sum_k coefs[k] * N_k * x^i y^j z^k exp(-exps[k] r^2).

    ``center`` is in bohr, ``powers`` are the Cartesian angular momentum
    triple, and ``coefs`` already include primitive and contraction
    normalization so that the self-overlap is exactly 1.
    """

    center: tuple[float, float, float]
    powers: tuple[int, int, int]
    exps: tuple[float, ...]
    coefs: tuple[float, ...]


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _primitive_norm(alpha: float, powers: tuple[int, int, int]) -> float:
    i, j, k = powers
    total = i + j + k
    numer = (2.0 * alpha / math.pi) ** 0.75 * (4.0 * alpha) ** (total / 2.0)
    denom = math.sqrt(
        _double_factorial(2 * i - 1)
        * _double_factorial(2 * j - 1)
        * _double_factorial(2 * k - 1)
    )
    return numer / denom


def _self_overlap(powers, exps, coefs) -> float:
    # closed form: primitives share a center, so the 1D integrals factorize
    i, j, k = powers
    total = 0.0
    df = (
        _double_factorial(2 * i - 1)
        * _double_factorial(2 * j - 1)
        * _double_factorial(2 * k - 1)
    )
    for ca, aa in zip(coefs, exps):
        for cb, ab in zip(coefs, exps):
            p = aa + ab
            total += (
                ca
                * cb
                * df
                / (2.0 * p) ** (i + j + k)
                * (math.pi / p) ** 1.5
            )
    return total


def _contracted(center, powers, exps, contraction) -> BasisFunction:
    coefs = [c * _primitive_norm(a, powers) for c, a in zip(contraction, exps)]
    scale = 1.0 / math.sqrt(_self_overlap(powers, exps, coefs))
    return BasisFunction(
        center=tuple(float(x) for x in center),
        powers=powers,
        exps=tuple(float(a) for a in exps),
        coefs=tuple(float(c * scale) for c in coefs),
    )


def shells_for(element: str):
    if element not in _EXPONENTS:
        raise BasisError(f"no basis data for element {element!r}")
    core, valence = _EXPONENTS[element]
    shells = [("S", core, _S_CONTRACTION)]
    if valence is not None:
        shells.append(("S", valence, _SP_S_CONTRACTION))
        shells.append(("P", valence, _SP_P_CONTRACTION))
    return shells


def build_basis(elements, centers_bohr) -> list[BasisFunction]:
    """Expand every atom into its contracted functions, atom-major order.

    Per heavy atom the order is 1s, 2s, 2px, 2py, 2pz; hydrogen contributes
    a single 1s.
    """
    if len(elements) != len(centers_bohr):
        raise BasisError(
            f"{len(elements)} elements but {len(centers_bohr)} centers"
        )
    functions: list[BasisFunction] = []
    for element, center in zip(elements, centers_bohr):
        for kind, exps, contraction in shells_for(element):
            if kind == "S":
                functions.append(_contracted(center, (0, 0, 0), exps, contraction))
            else:
                for powers in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    functions.append(_contracted(center, powers, exps, contraction))
    return functions


def nuclear_charges(elements) -> np.ndarray:
    missing = [e for e in elements if e not in ATOMIC_NUMBER]
    if missing:
        raise BasisError(f"no nuclear charge for element(s) {missing}")
    return np.array([ATOMIC_NUMBER[e] for e in elements], dtype=np.float64)
