"""Independent enumeration oracles for the Hom modules of the worked maps.

These were derived by hand from the explicit A-module decompositions before
the build and deliberately avoid the Groebner engine: dimension tables come
from counting basis elements of the known decompositions.
"""


def node_hom_oracle(a, i, j, alpha, beta, zmax):
    """Bigraded dimensions of Hom_A(B, A) for the orbifold node.

    Decomposition A.e0 + sum_l (u).e_l + sum_m (v).f_m, where e_l is dual
    to x^l, f_m dual to y^m, u acts as x^alpha and v as y^beta.
    """
    table = {}

    def add(z, w):
        if z <= zmax:
            key = (z, w % a)
            table[key] = table.get(key, 0) + 1

    k = 0
    while k * min(alpha, beta) <= zmax:
        if k == 0:
            add(0, 0)
        else:
            add(k * alpha, 0)
            add(k * beta, 0)
        k += 1
    for l in range(1, alpha):
        k = 1
        while k * alpha - l <= zmax:
            add(k * alpha - l, -i * l)
            k += 1
    for m in range(1, beta):
        k = 1
        while k * beta - m <= zmax:
            add(k * beta - m, -j * m)
            k += 1
    return table


def root_hom_oracle(a, zmax):
    """Hom_A(Q[t], Q[u]) for u = t^a: one copy of A per dual (t^l)^dual."""
    table = {}
    for l in range(a):
        k = 0
        while k * a - l <= zmax:
            key = (k * a - l, (-l) % a)
            table[key] = table.get(key, 0) + 1
            k += 1
    return table


def cusp_hom_oracle(zmax):
    """Hom_A(B, A) for the cusp over the line: A.1^dual + A.y^dual."""
    table = {}
    k = 0
    while 2 * k <= zmax:
        table[(2 * k, 0)] = 1
        k += 1
    k = 0
    while 2 * k - 3 <= zmax:
        table[(2 * k - 3, 1)] = 1
        k += 1
    return table
