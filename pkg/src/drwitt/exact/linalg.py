"""Exact linear algebra over Z, Z/p^N and F_p.

Matrices are lists of lists of Python ints unless stated otherwise; the
helpers working modulo p^N use ``numpy.int64`` arrays and are only meant
for moduli small enough that products fit comfortably in a float64
mantissa (see :func:`matmul_mod`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

Matrix = List[List[int]]


def valuation(x: int, p: int, cap: int | None = None) -> int:
    """p-adic valuation of a nonzero int (``cap`` for zero or as upper bound)."""
    if x == 0:
        if cap is None:
            raise ValueError("valuation of 0")
        return cap
    k = 0
    while x % p == 0:
        x //= p
        k += 1
        if cap is not None and k >= cap:
            return cap
    return k


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] if bt else [0] * cols for row in a]


# ---------------------------------------------------------------------------
# Smith normal form over Z


@dataclass
class SmithDecomposition:
    """``U * M * W == D`` with U, W unimodular and D diagonal."""

    U: Matrix
    D: Matrix
    W: Matrix
    invariant_factors: List[int] = field(default_factory=list)

    def check(self, M: Matrix) -> bool:
        return mat_mul(mat_mul(self.U, M), self.W) == self.D


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form of an integer matrix with both transforms.

    The invariant factors are the nonzero diagonal entries of ``D`` made
    positive, in divisibility order (so ``diag(2, 3)`` gives ``[1, 6]``).
    """
    A = [list(map(int, r)) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    W = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in W:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):  # row_dst += f*row_src
        if f:
            A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f*col_src
        if f:
            for r in A:
                r[dst] += f * r[src]
            for r in W:
                r[dst] += f * r[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: the pivot must divide the whole remaining block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    inv = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return SmithDecomposition(U=U, D=A, W=W, invariant_factors=inv)


def invariant_factors(M: Sequence[Sequence[int]]) -> List[int]:
    return smith_normal_form(M).invariant_factors


def abelian_invariants(relations: Sequence[Sequence[int]], ngens: int) -> Tuple[List[int], int]:
    """Invariant factors (>1) and free rank of Z^ngens / rowspan(relations)."""
    if ngens == 0:
        return [], 0
    rows = [list(r) for r in relations if any(r)]
    if not rows:
        return [], ngens
    inv = invariant_factors(rows)
    torsion = [d for d in inv if d != 1]
    return torsion, ngens - len(inv)


# ---------------------------------------------------------------------------
# modular helpers (numpy)


def matmul_mod(a: np.ndarray, b: np.ndarray, mod: int) -> np.ndarray:
    """Exact ``a @ b mod mod`` for int64 arrays with entries in [0, mod).

    Uses float64 BLAS when every partial sum stays below 2**53, otherwise
    splits the left factor into 2**16-sized limbs.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    inner = a.shape[1]
    bound = (mod - 1) * (mod - 1) * inner
    if bound < 2 ** 53:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.rint(out).astype(np.int64) % mod
    if (mod - 1) * 65535 * inner < 2 ** 53:
        lo = a & 0xFFFF
        hi = a >> 16
        bf = b.astype(np.float64)
        r_lo = np.rint(lo.astype(np.float64) @ bf).astype(np.int64) % mod
        r_hi = np.rint(hi.astype(np.float64) @ bf).astype(np.int64) % mod
        return (r_lo + (r_hi * (65536 % mod)) % mod) % mod
    out = a.astype(object) @ b.astype(object)
    return (out % mod).astype(np.int64)


def vec_valuation(v: np.ndarray, p: int, cap: int) -> np.ndarray:
    """Elementwise p-adic valuation, capped at ``cap`` (zero maps to cap)."""
    v = np.asarray(v, dtype=np.int64).copy()
    out = np.zeros(v.shape, dtype=np.int64)
    zero = v == 0
    for _ in range(cap):
        div = (v % p == 0) & ~zero
        if not div.any():
            break
        out[div] += 1
        v[div] //= p
    out[zero] = cap
    return np.minimum(out, cap)


def smith_mod_pn(M, p: int, N: int, transforms: bool = True):
    """Smith form of a matrix over Z/p^N.

    Returns ``(exponents, U, W)`` with ``U @ M @ W`` diagonal modulo p^N,
    the diagonal being ``p^k`` for ``k`` in ``exponents`` (one per pivot;
    columns without a pivot are free, i.e. exponent N).  Pivots are chosen
    with minimal valuation, which is the standard strategy over a local
    principal ring.  ``U`` and ``W`` are invertible modulo p^N.
    """
    mod = p ** N
    A = np.array(M, dtype=np.int64).reshape(len(M), -1) % mod if len(M) else np.zeros((0, 0), dtype=np.int64)
    m, n = A.shape
    U = np.eye(m, dtype=np.int64) if transforms else None
    W = np.eye(n, dtype=np.int64) if transforms else None
    exps: List[int] = []
    t = 0
    while t < min(m, n):
        block = A[t:, t:]
        if not block.any():
            break
        vals = vec_valuation(block, p, N)
        i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
        k = int(vals[i, j])
        i += t
        j += t
        if i != t:
            A[[t, i]] = A[[i, t]]
            if transforms:
                U[[t, i]] = U[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if transforms:
                W[:, [t, j]] = W[:, [j, t]]
        unit = pow(int(A[t, t]) // p ** k, -1, mod)
        A[t] = (A[t] * unit) % mod
        if transforms:
            U[t] = (U[t] * unit) % mod
        pk = p ** k
        col = A[t + 1:, t] // pk
        if col.any():
            A[t + 1:] = (A[t + 1:] - np.outer(col, A[t]) % mod) % mod
            if transforms:
                U[t + 1:] = (U[t + 1:] - np.outer(col, U[t]) % mod) % mod
        row = A[t, t + 1:] // pk
        if row.any():
            A[:, t + 1:] = (A[:, t + 1:] - np.outer(A[:, t], row) % mod) % mod
            if transforms:
                W[:, t + 1:] = (W[:, t + 1:] - np.outer(W[:, t], row) % mod) % mod
        exps.append(k)
        t += 1
    return exps, U, W


def inverse_mod(M: np.ndarray, mod: int) -> np.ndarray:
    """Inverse of a square matrix invertible modulo ``mod`` (Gauss-Jordan)."""
    A = np.array(M, dtype=np.int64) % mod
    n = A.shape[0]
    I = np.eye(n, dtype=np.int64)
    for c in range(n):
        piv = None
        for r in range(c, n):
            if np.gcd(int(A[r, c]), mod) == 1:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("matrix not invertible modulo %d" % mod)
        if piv != c:
            A[[c, piv]] = A[[piv, c]]
            I[[c, piv]] = I[[piv, c]]
        u = pow(int(A[c, c]), -1, mod)
        A[c] = A[c] * u % mod
        I[c] = I[c] * u % mod
        f = A[:, c].copy()
        f[c] = 0
        if f.any():
            A = (A - np.outer(f, A[c]) % mod) % mod
            I = (I - np.outer(f, I[c]) % mod) % mod
    return I


def rank_mod_p(M, p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    A = np.array(M, dtype=np.int64) % p
    if A.size == 0:
        return 0
    A = A.reshape(len(M), -1)
    m, n = A.shape
    r = 0
    for c in range(n):
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        f = A[:, c].copy()
        f[r] = 0
        A = (A - np.outer(f, A[r])) % p
        r += 1
        if r == m:
            break
    return r


# ---------------------------------------------------------------------------
# submodules of (Z/p^N)^d


class Submodule:
    """Submodule of (Z/p^N)^dim kept in echelon form.

    Each pivot column ``c`` carries a row whose first nonzero entry is
    ``p^k`` at ``c``.  Inserting a vector performs the usual reduction and,
    when a smaller valuation shows up at an occupied pivot, swaps rows; the
    "saturation" multiple ``p^(N-k) * row`` is pushed back so the rows
    generate the submodule as a module, not just as a group.
    """

    def __init__(self, p: int, N: int, dim: int):
        self.p = p
        self.N = N
        self.mod = p ** N
        self.dim = dim
        self.pivots: dict = {}  # column -> (row, k)

    def __len__(self):
        return len(self.pivots)

    def _val(self, x: int) -> int:
        return valuation(x, self.p, self.N)

    def add(self, vec) -> list:
        """Insert ``vec``; return the list of rows that were created."""
        mod, p = self.mod, self.p
        added = []
        stack = [np.asarray(vec, dtype=np.int64) % mod]
        while stack:
            v = stack.pop()
            nz = np.flatnonzero(v)
            while len(nz):
                c = int(nz[0])
                x = int(v[c])
                k = self._val(x)
                cur = self.pivots.get(c)
                if cur is not None and k >= cur[1]:
                    row, kk = cur
                    v = (v - (x // p ** kk) * row) % mod
                    nz = np.flatnonzero(v)
                    continue
                v = (v * pow(x // p ** k, -1, mod)) % mod
                self.pivots[c] = (v, k)
                added.append(v)
                if cur is not None:
                    stack.append(cur[0])
                if k:
                    stack.append((v * p ** (self.N - k)) % mod)
                break
        return added

    def add_many(self, rows) -> list:
        out = []
        for r in rows:
            if np.any(r):
                out.extend(self.add(r))
        return out

    def rows(self) -> np.ndarray:
        if not self.pivots:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array([self.pivots[c][0] for c in sorted(self.pivots)], dtype=np.int64)

    def contains(self, vec) -> bool:
        mod, p = self.mod, self.p
        v = np.asarray(vec, dtype=np.int64) % mod
        nz = np.flatnonzero(v)
        while len(nz):
            c = int(nz[0])
            cur = self.pivots.get(c)
            if cur is None:
                return False
            row, kk = cur
            x = int(v[c])
            if self._val(x) < kk:
                return False
            v = (v - (x // p ** kk) * row) % mod
            nz = np.flatnonzero(v)
        return True

    def quotient(self) -> "Quotient":
        return Quotient.from_submodule(self)


@dataclass
class Quotient:
    """Explicit finite quotient (Z/p^N)^dim / K ≅ ⊕ Z/p^{e_i}.

    ``proj`` (dim × g) maps a vector to its coordinates (the i-th one taken
    mod ``p^exps[i]``), ``section`` (g × dim) lifts the standard generators.
    An exponent equal to N means "free at working precision".
    """

    p: int
    N: int
    dim: int
    exps: List[int]
    proj: np.ndarray
    section: np.ndarray

    @property
    def ngens(self) -> int:
        return len(self.exps)

    @property
    def moduli(self) -> np.ndarray:
        return np.array([self.p ** e for e in self.exps], dtype=np.int64)

    def invariant_factors(self) -> List[int]:
        return sorted(self.p ** e for e in self.exps)

    def coords(self, vecs) -> np.ndarray:
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        if self.ngens == 0:
            return np.zeros((vecs.shape[0], 0), dtype=np.int64)
        return matmul_mod(vecs % self.p ** self.N, self.proj, self.p ** self.N) % self.moduli

    def lift(self, coords) -> np.ndarray:
        coords = np.atleast_2d(np.asarray(coords, dtype=np.int64))
        if self.ngens == 0:
            return np.zeros((coords.shape[0], self.dim), dtype=np.int64)
        return matmul_mod(coords % self.p ** self.N, self.section, self.p ** self.N)

    @classmethod
    def from_submodule(cls, sub: Submodule) -> "Quotient":
        p, N, mod, d = sub.p, sub.N, sub.mod, sub.dim
        unit_cols = sorted(c for c, (_, k) in sub.pivots.items() if k == 0)
        unit_set = set(unit_cols)
        rest = [c for c in range(d) if c not in unit_set]
        pos = {c: i for i, c in enumerate(rest)}
        g = len(rest)
        # Phi: Free -> (Z/p^N)^rest, killing unit-pivot rows by back substitution
        Phi = np.zeros((d, g), dtype=np.int64)
        for c in rest:
            Phi[c, pos[c]] = 1
        for c in reversed(unit_cols):
            row = sub.pivots[c][0]
            tail = row.copy()
            tail[: c + 1] = 0
            nz = np.flatnonzero(tail)
            if len(nz):
                Phi[c] = (-matmul_mod(tail[nz][None, :], Phi[nz], mod)[0]) % mod
        rel_rows = [sub.pivots[c][0] for c in sorted(sub.pivots) if sub.pivots[c][1] > 0]
        if rel_rows and g:
            Rel = matmul_mod(np.array(rel_rows, dtype=np.int64), Phi, mod)
        else:
            Rel = np.zeros((0, g), dtype=np.int64)
        if g == 0:
            return cls(p, N, d, [], np.zeros((d, 0), dtype=np.int64), np.zeros((0, d), dtype=np.int64))
        exps, _, W = smith_mod_pn(Rel, p, N) if len(Rel) else ([], None, np.eye(g, dtype=np.int64))
        full = list(exps) + [N] * (g - len(exps))
        Winv = inverse_mod(W, mod)
        keep = [i for i, e in enumerate(full) if e > 0]
        proj = matmul_mod(Phi, W[:, keep], mod)
        sec = np.zeros((len(keep), d), dtype=np.int64)
        sec[:, rest] = Winv[keep]
        # canonical order: increasing exponent, stable
        order = sorted(range(len(keep)), key=lambda i: full[keep[i]])
        exps_k = [full[keep[i]] for i in order]
        return cls(p, N, d, exps_k, proj[:, order], sec[order])


def hom_kernel_cokernel(H, src: Sequence[int], dst: Sequence[int]):
    """Kernel and cokernel of a map ⊕Z/src_i → ⊕Z/dst_j (modulus 0 means Z).

    ``H`` has one row per source generator.  Both results are returned as
    ``(torsion_invariants, free_rank)``.
    """
    a, b = len(src), len(dst)
    H = [list(map(int, r)) for r in H] if a else []
    dst_rel = [[dst[j] if i == j else 0 for i in range(b)] for j in range(b)]
    coker = abelian_invariants([r for r in H if any(r)] + [r for r in dst_rel if any(r)], b)
    # x in Z^a with x*H in the lattice of dst relations
    big = [H[i] + [1 if i == j else 0 for j in range(a + b)] for i in range(a)]
    big += [dst_rel[i] + [1 if a + i == j else 0 for j in range(a + b)] for i in range(b)]
    gens = [v[:a] for v in _row_echelon_left_kernel(big, b)]
    return subgroup_invariants(gens, src), coker


def _row_echelon_left_kernel(rows: Matrix, ncols: int) -> Matrix:
    """Hermite-style elimination on the first ``ncols`` columns; returns the
    tails of the rows whose first ``ncols`` entries vanish."""
    A = [r[:] for r in rows]
    m = len(A)
    r0 = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r0, m) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r0], A[piv] = A[piv], A[r0]
            changed = False
            for i in range(r0 + 1, m):
                if A[i][c]:
                    q = A[i][c] // A[r0][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r0])]
                    if A[i][c]:
                        changed = True
            if not changed:
                r0 += 1
                break
    return [A[i][ncols:] for i in range(r0, m)]


def subgroup_invariants(gens: Sequence[Sequence[int]], moduli: Sequence[int]) -> Tuple[List[int], int]:
    """``(torsion, free_rank)`` of the subgroup of ⊕Z/moduli generated by ``gens``.

    The relation lattice of the generators is the kernel of Z^k → ⊕Z/moduli.
    """
    a = len(moduli)
    gens = [list(g) for g in gens if any(x % m if m else x for x, m in zip(g, moduli))]
    k = len(gens)
    if k == 0:
        return [], 0
    # relations among generators: kernel of Z^k -> ⊕ Z/moduli
    rows = [gens[i] + [1 if i == j else 0 for j in range(k)] for i in range(k)]
    rows += [[moduli[j] if i == j else 0 for i in range(a)] + [0] * k for j in range(a) if moduli[j]]
    rel = _row_echelon_left_kernel(rows, a)
    return abelian_invariants(rel, k)
