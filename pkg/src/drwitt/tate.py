"""Homology and Tate cohomology of cyclic groups with trivial coefficients.

Closed forms for C_m acting trivially on M:

    H_0 = M,   H_odd = M/mM,   H_even>0 = M[m],
    Ĥ^even = M/mM,   Ĥ^odd = M[m].

``brute_force_homology`` recomputes H_s from the explicit periodic
resolution of Z over Z[C_m] tensored with M, as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Tuple

from .exact.linalg import abelian_invariants
from .exact.modules import FinAbGroup


def homology_cyclic(m: int, M: FinAbGroup, s: int) -> FinAbGroup:
    if m < 1 or s < 0:
        raise ValueError("need m ≥ 1 and s ≥ 0")
    if s == 0:
        return M
    return M.mod(m) if s % 2 else M.torsion_of(m)


def tate_cyclic(m: int, M: FinAbGroup, i: int) -> FinAbGroup:
    if m < 1:
        raise ValueError("need m ≥ 1")
    return M.mod(m) if i % 2 == 0 else M.torsion_of(m)


def herbrand_balanced(m: int, M: FinAbGroup) -> bool:
    """|Ĥ^0| = |Ĥ^1| for finite M."""
    return tate_cyclic(m, M, 0).order() == tate_cyclic(m, M, 1).order()


# ---------------------------------------------------------------------------
# brute force through the periodic resolution
#
# P_t = Z[C_m] for all t ≥ 0, d_odd = g − 1, d_even = N = 1 + g + ... + g^{m−1}.
# P_t ⊗_{Z[C_m]} M is presented as Z[C_m] ⊗_Z M modulo (g − 1) ⊗ M and the
# relations of M; nothing is collapsed to the closed form in advance.


def _left_kernel(rows, ncols):
    from .exact.linalg import _row_echelon_left_kernel
    return _row_echelon_left_kernel([list(r) for r in rows], ncols)


def _mult_matrix(m, coeffs):
    """Right multiplication by Σ c_k g^k on Z[C_m] (rows = source basis g^i)."""
    A = [[0] * m for _ in range(m)]
    for i in range(m):
        for k, c in enumerate(coeffs):
            A[i][(i + k) % m] += c
    return A


def _tensor_id(A, k):
    """A ⊗ id_k with basis index i*k + a."""
    out = []
    for row in A:
        for a in range(k):
            r = [0] * (len(row) * k)
            for j, c in enumerate(row):
                r[j * k + a] = c
            out.append(r)
    return out


def _subquotient(gens, rel, dim):
    """⟨gens⟩ / (⟨gens⟩ ∩ span(rel)) inside Z^dim."""
    gens = [list(g) for g in gens if any(g)]
    g = len(gens)
    if g == 0:
        return FinAbGroup()
    rows = [gens[i] + [1 if i == j else 0 for j in range(g)] for i in range(g)]
    rows += [list(r) + [0] * g for r in rel if any(r)]
    tors, free = abelian_invariants(_left_kernel(rows, dim), g)
    return FinAbGroup.from_orders(tors, free)


def brute_force_homology(m: int, M: FinAbGroup, s: int) -> FinAbGroup:
    """H_s(C_m, M) as the homology of P_• ⊗_{Z[C_m]} M, with M acted on trivially."""
    if m < 1 or s < 0:
        raise ValueError("need m ≥ 1 and s ≥ 0")
    moduli = list(M.torsion) + [0] * M.free_rank
    k = len(moduli)
    if not k:
        return FinAbGroup()
    dim = m * k
    g_minus_1 = _mult_matrix(m, [-1, 1] + [0] * (m - 2)) if m > 1 else [[0]]
    norm = _mult_matrix(m, [1] * m)
    rel = _tensor_id(g_minus_1, k)
    rel += [[moduli[a] if j == i * k + a else 0 for j in range(dim)]
            for i in range(m) for a in range(k) if moduli[a]]
    rel = [r for r in rel if any(r)]

    def d(t):
        return _tensor_id(g_minus_1 if t % 2 else norm, k)

    # cycles: x with x·d_s ∈ span(rel)  (all of P_0 ⊗ M when s = 0)
    if s == 0:
        cycles = [[1 if j == i else 0 for j in range(dim)] for i in range(dim)]
    else:
        D = d(s)
        big = [D[i] + [1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        big += [r + [0] * dim for r in rel]
        cycles = _left_kernel(big, dim)
    boundaries = rel + [r for r in d(s + 1) if any(r)]
    return _subquotient(cycles, boundaries, dim)


def brute_force_tate(m: int, M: FinAbGroup, i: int) -> FinAbGroup:
    """Ĥ^i from Hom(complete resolution, M): maps alternate 0 (from g − 1) and ×m (from N)."""
    moduli = list(M.torsion) + [0] * M.free_rank
    k = len(moduli)
    if not k:
        return FinAbGroup()
    rel = [[moduli[a] if j == a else 0 for j in range(k)] for a in range(k) if moduli[a]]
    times_m = [[m if a == b else 0 for b in range(k)] for a in range(k)]
    zero = [[0] * k for _ in range(k)]
    incoming = times_m if i % 2 == 0 else zero   # δ^{i−1}
    outgoing = zero if i % 2 == 0 else times_m   # δ^i
    big = [outgoing[a] + [1 if a == j else 0 for j in range(k)] for a in range(k)]
    big += [r + [0] * k for r in rel]
    cycles = _left_kernel(big, k)
    return _subquotient(cycles, rel + [r for r in incoming if any(r)], k)


# ---------------------------------------------------------------------------
# E² pages


@dataclass
class E2Page:
    kind: str                      # "homology" (first quadrant) or "tate" (upper half-plane)
    srange: Tuple[int, int]
    trange: Tuple[int, int]
    entries: Dict[Tuple[int, int], FinAbGroup] = field(default_factory=dict)

    def __getitem__(self, st):
        return self.entries.get(st, FinAbGroup())

    def check_quadrant(self) -> bool:
        for (s, t), g in self.entries.items():
            if g.is_zero:
                continue
            if t < 0 or (self.kind == "homology" and s < 0):
                return False
        return True

    def to_json(self):
        s0, s1 = self.srange
        t0, t1 = self.trange
        return {"kind": self.kind, "s": [s0, s1], "t": [t0, t1],
                "rows": [[self[(s, t)].to_json() for s in range(s0, s1 + 1)] for t in range(t0, t1 + 1)]}


def e2_pages(n: int, p: int, coefficients: Mapping[int, FinAbGroup] | Callable[[int], FinAbGroup],
             srange: Tuple[int, int], trange: Tuple[int, int]) -> Tuple[E2Page, E2Page]:
    """E²_{s,t} = H_s(C_{p^{n−1}}, M_t) and Ê²_{s,t} = Ĥ^{−s}(C_{p^{n−1}}, M_t); no differentials."""
    if n < 1:
        raise ValueError("n ≥ 1")
    m = p ** (n - 1)
    get = coefficients if callable(coefficients) else (lambda t: coefficients.get(t, FinAbGroup()))
    hom = E2Page("homology", srange, trange)
    tate = E2Page("tate", srange, trange)
    for t in range(trange[0], trange[1] + 1):
        M = get(t) if t >= 0 else FinAbGroup()
        for s in range(srange[0], srange[1] + 1):
            if s >= 0:
                hom.entries[(s, t)] = homology_cyclic(m, M, s)
            tate.entries[(s, t)] = tate_cyclic(m, M, -s)
    return hom, tate


def parse_group(text: str) -> FinAbGroup:
    """'Z', '0', 'Z/3', 'Z + Z/9 + Z/3' or a JSON-style list of invariants ('0' = Z)."""
    text = text.strip()
    if text.startswith("["):
        import json
        return FinAbGroup.from_json(json.loads(text))
    if text in ("", "0"):
        return FinAbGroup()
    orders: List[int] = []
    free = 0
    for part in text.replace("⊕", "+").split("+"):
        part = part.strip()
        if part == "Z":
            free += 1
        elif part.startswith("Z/"):
            orders.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse group summand {part!r}")
    return FinAbGroup.from_orders(orders, free)
