"""Gaussian integrals over contracted basis functions.

One- and two-electron integrals follow the Hermite-expansion scheme: Cartesian
Gaussian products are rewritten as Hermite Gaussians (coefficients E), and
Coulomb kernels contract against the Hermite Coulomb tensor R built from Boys
functions.  Two-electron assembly is vectorized over the primitive pairs of
each contracted quartet; with three primitives per function that is an 81-wide
inner block, which keeps the Python overhead per quartet constant.
"""

import math

import numpy as np
from scipy.special import hyp1f1

from chemfix.basis import BasisFunction


def boys(n: int, x):
    """Boys function F_n(x), vectorized over x."""
    return hyp1f1(n + 0.5, n + 1.5, -np.asarray(x, dtype=np.float64)) / (2.0 * n + 1.0)


def _hermite_e(i: int, j: int, t: int, q: float, a: float, b: float) -> float:
    # expansion coefficient of x^i(A) x^j(B) onto Hermite index t; q = A - B
    if t < 0 or t > i + j:
        return 0.0
    p = a + b
    if i == j == t == 0:
        return math.exp(-a * b / p * q * q)
    if j == 0:
        return (
            _hermite_e(i - 1, j, t - 1, q, a, b) / (2.0 * p)
            - (b * q / p) * _hermite_e(i - 1, j, t, q, a, b)
            + (t + 1) * _hermite_e(i - 1, j, t + 1, q, a, b)
        )
    return (
        _hermite_e(i, j - 1, t - 1, q, a, b) / (2.0 * p)
        + (a * q / p) * _hermite_e(i, j - 1, t, q, a, b)
        + (t + 1) * _hermite_e(i, j - 1, t + 1, q, a, b)
    )


def _overlap_primitive(a, powers_a, center_a, b, powers_b, center_b) -> float:
    p = a + b
    value = (math.pi / p) ** 1.5
    for dim in range(3):
        value *= _hermite_e(
            powers_a[dim], powers_b[dim], 0, center_a[dim] - center_b[dim], a, b
        )
    return value


def _kinetic_primitive(a, powers_a, center_a, b, powers_b, center_b) -> float:
    i, j, k = powers_b

    def s(da: int, db: int, dc: int) -> float:
        shifted = (i + da, j + db, k + dc)
        if min(shifted) < 0:
            return 0.0
        return _overlap_primitive(a, powers_a, center_a, b, shifted, center_b)

    term = b * (2.0 * (i + j + k) + 3.0) * s(0, 0, 0)
    term -= 2.0 * b * b * (s(2, 0, 0) + s(0, 2, 0) + s(0, 0, 2))
    term -= 0.5 * (
        i * (i - 1) * s(-2, 0, 0)
        + j * (j - 1) * s(0, -2, 0)
        + k * (k - 1) * s(0, 0, -2)
    )
    return term


def _hermite_coulomb(t, u, v, n, p, pc, boys_table):
    """R^n_{tuv} for a single composite exponent; pc is the P-C displacement."""
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys_table[n]
    if t > 0:
        value = pc[0] * _hermite_coulomb(t - 1, u, v, n + 1, p, pc, boys_table)
        if t > 1:
            value += (t - 1) * _hermite_coulomb(t - 2, u, v, n + 1, p, pc, boys_table)
        return value
    if u > 0:
        value = pc[1] * _hermite_coulomb(t, u - 1, v, n + 1, p, pc, boys_table)
        if u > 1:
            value += (u - 1) * _hermite_coulomb(t, u - 2, v, n + 1, p, pc, boys_table)
        return value
    value = pc[2] * _hermite_coulomb(t, u, v - 1, n + 1, p, pc, boys_table)
    if v > 1:
        value += (v - 1) * _hermite_coulomb(t, u, v - 2, n + 1, p, pc, boys_table)
    return value


def _nuclear_primitive(a, powers_a, center_a, b, powers_b, center_b, charges, centers):
    p = a + b
    big_p = [(a * center_a[d] + b * center_b[d]) / p for d in range(3)]
    ranges = [powers_a[d] + powers_b[d] for d in range(3)]
    coefs = [
        [
            _hermite_e(powers_a[d], powers_b[d], t, center_a[d] - center_b[d], a, b)
            for t in range(ranges[d] + 1)
        ]
        for d in range(3)
    ]
    total_order = sum(ranges)
    value = 0.0
    for charge, nucleus in zip(charges, centers):
        pc = [big_p[d] - nucleus[d] for d in range(3)]
        x = p * (pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2])
        boys_table = [float(boys(n, x)) for n in range(total_order + 1)]
        acc = 0.0
        for t in range(ranges[0] + 1):
            for u in range(ranges[1] + 1):
                for v in range(ranges[2] + 1):
                    acc += (
                        coefs[0][t]
                        * coefs[1][u]
                        * coefs[2][v]
                        * _hermite_coulomb(t, u, v, 0, p, pc, boys_table)
                    )
        value -= charge * acc
    return value * 2.0 * math.pi / p


def _contract_pair(fa: BasisFunction, fb: BasisFunction, primitive) -> float:
    total = 0.0
    for ca, aa in zip(fa.coefs, fa.exps):
        for cb, ab in zip(fb.coefs, fb.exps):
            total += ca * cb * primitive(aa, fa.powers, fa.center, ab, fb.powers, fb.center)
    return total


def overlap_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            out[i, j] = out[j, i] = _contract_pair(basis[i], basis[j], _overlap_primitive)
    return out


def kinetic_matrix(basis: list[BasisFunction]) -> np.ndarray:
    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            out[i, j] = out[j, i] = _contract_pair(basis[i], basis[j], _kinetic_primitive)
    return out


def nuclear_attraction_matrix(basis, charges, centers_bohr) -> np.ndarray:
    centers = [tuple(float(x) for x in c) for c in centers_bohr]

    def primitive(aa, pa, ca, ab, pb, cb):
        return _nuclear_primitive(aa, pa, ca, ab, pb, cb, charges, centers)

    n = len(basis)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            out[i, j] = out[j, i] = _contract_pair(basis[i], basis[j], primitive)
    return out


def nuclear_repulsion(charges, centers_bohr) -> float:
    centers = np.asarray(centers_bohr, dtype=np.float64)
    energy = 0.0
    for i in range(len(charges)):
        for j in range(i):
            energy += charges[i] * charges[j] / float(
                np.linalg.norm(centers[i] - centers[j])
            )
    return energy


class _PairTable:
    """Primitive-pair data for one ordered basis-function pair.

    Holds, per primitive pair (flattened, length na*nb): the composite
    exponent, the Gaussian-product center, the coefficient product, and the
    Hermite expansion coefficients per dimension and Hermite index.
    """

    def __init__(self, fa: BasisFunction, fb: BasisFunction):
        ea = np.asarray(fa.exps)
        eb = np.asarray(fb.exps)
        self.p = (ea[:, None] + eb[None, :]).ravel()
        ca = np.asarray(fa.center)
        cb = np.asarray(fb.center)
        self.center = (
            ea[:, None, None] * ca[None, None, :] + eb[None, :, None] * cb[None, None, :]
        ).reshape(-1, 3) / self.p[:, None]
        self.coef = (np.asarray(fa.coefs)[:, None] * np.asarray(fb.coefs)[None, :]).ravel()
        self.ranges = tuple(fa.powers[d] + fb.powers[d] for d in range(3))
        self.e = []
        for d in range(3):
            q = fa.center[d] - fb.center[d]
            rows = np.empty((self.ranges[d] + 1, self.p.shape[0]))
            idx = 0
            for aa in fa.exps:
                for ab in fb.exps:
                    for t in range(self.ranges[d] + 1):
                        rows[t, idx] = _hermite_e(fa.powers[d], fb.powers[d], t, q, aa, ab)
                    idx += 1
            self.e.append(rows)

    def hermite_products(self):
        # (t, u, v) -> per-primitive-pair product of the three 1D coefficients
        combos = {}
        for t in range(self.ranges[0] + 1):
            for u in range(self.ranges[1] + 1):
                for v in range(self.ranges[2] + 1):
                    combos[(t, u, v)] = self.e[0][t] * self.e[1][u] * self.e[2][v]
        return combos


def _coulomb_tensor(tmax, umax, vmax, alpha, pq):
    """R^0_{tuv} arrays for all required Hermite indices, vectorized."""
    total = tmax + umax + vmax
    x = alpha * np.sum(pq * pq, axis=1)
    boys_rows = [boys(n, x) for n in range(total + 1)]
    neg2a = -2.0 * alpha
    memo = {}

    def r(t, u, v, n):
        key = (t, u, v, n)
        if key in memo:
            return memo[key]
        if t == u == v == 0:
            value = neg2a**n * boys_rows[n]
        elif t > 0:
            value = pq[:, 0] * r(t - 1, u, v, n + 1)
            if t > 1:
                value = value + (t - 1) * r(t - 2, u, v, n + 1)
        elif u > 0:
            value = pq[:, 1] * r(t, u - 1, v, n + 1)
            if u > 1:
                value = value + (u - 1) * r(t, u - 2, v, n + 1)
        else:
            value = pq[:, 2] * r(t, u, v - 1, n + 1)
            if v > 1:
                value = value + (v - 1) * r(t, u, v - 2, n + 1)
        memo[key] = value
        return value

    return {
        (t, u, v): r(t, u, v, 0)
        for t in range(tmax + 1)
        for u in range(umax + 1)
        for v in range(vmax + 1)
    }


def _quartet(bra: _PairTable, ket: _PairTable) -> float:
    nb = bra.p.shape[0]
    nk = ket.p.shape[0]
    alpha = (bra.p[:, None] * ket.p[None, :]).ravel() / (
        bra.p[:, None] + ket.p[None, :]
    ).ravel()
    pq = (bra.center[:, None, :] - ket.center[None, :, :]).reshape(-1, 3)
    tensor = _coulomb_tensor(
        bra.ranges[0] + ket.ranges[0],
        bra.ranges[1] + ket.ranges[1],
        bra.ranges[2] + ket.ranges[2],
        alpha,
        pq,
    )
    block = np.zeros(nb * nk)
    for (t, u, v), ebra in bra.hermite_products().items():
        for (tt, uu, vv), eket in ket.hermite_products().items():
            sign = -1.0 if (tt + uu + vv) % 2 else 1.0
            block += sign * (ebra[:, None] * eket[None, :]).ravel() * tensor[
                (t + tt, u + uu, v + vv)
            ]
    prefactor = (
        2.0
        * math.pi**2.5
        / (bra.p[:, None] * ket.p[None, :] * np.sqrt(bra.p[:, None] + ket.p[None, :]))
    ).ravel()
    weights = (bra.coef[:, None] * ket.coef[None, :]).ravel()
    return float(np.sum(weights * prefactor * block))


def electron_repulsion_tensor(basis: list[BasisFunction]) -> np.ndarray:
    """Full (ij|kl) tensor with 8-fold index symmetry, chemist notation."""
    n = len(basis)
    pair_index = [(i, j) for i in range(n) for j in range(i + 1)]
    tables = {pair: _PairTable(basis[pair[0]], basis[pair[1]]) for pair in pair_index}
    out = np.zeros((n, n, n, n))
    for a, (i, j) in enumerate(pair_index):
        for i2, j2 in pair_index[: a + 1]:
            value = _quartet(tables[(i, j)], tables[(i2, j2)])
            for p, q in ((i, j), (j, i)):
                for r, s in ((i2, j2), (j2, i2)):
                    out[p, q, r, s] = value
                    out[r, s, p, q] = value
    return out


def core_hamiltonian(basis, charges, centers_bohr) -> np.ndarray:
    return kinetic_matrix(basis) + nuclear_attraction_matrix(basis, charges, centers_bohr)


def mo_integrals(coefficients: np.ndarray, hcore: np.ndarray, eri: np.ndarray):
    """Rotate the AO integrals into the molecular-orbital basis."""
    h = coefficients.T @ hcore @ coefficients
    g = np.einsum(
        "pi,qj,pqrs,rk,sl->ijkl",
        coefficients,
        coefficients,
        eri,
        coefficients,
        coefficients,
        optimize=True,
    )
    return h, g
