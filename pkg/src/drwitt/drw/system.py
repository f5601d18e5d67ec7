"""Free pro-complex and relation saturation.

For a lift model and a pro-truncation L, level n of the free object is

    Free_n^q = W_n(Ã) ⊗ Λ^q(dV^t[π^j] (t < n, j < e), dlog m (m ∈ M))  (mod p^N)

with basis pairs ``(b, S)``: ``b`` a Witt basis index, ``S`` a sorted tuple of
generator indices.  Multiplication by Witt basis elements, wedge with a
generator, d, F, R (level n → n−1) and V (n−1 → n) are integer matrices.
Because none of them lowers the degree, truncating at degree Q is exact for
all q ≤ Q.

The relation submodules K_n^q start from the seed relations (Leibniz, the
log relation, Frobenius on d[a], FV = p, FdV = d, the projection formula and
for the residue-field model the ideal W(pÃ)) and are closed under every
operator.  W_nΩ^q is then Free_n^q / K_n^q.
"""
from __future__ import annotations

import itertools
import threading
import time
from typing import Dict, Tuple

import numpy as np

from ..exact.linalg import Quotient, Submodule, matmul_mod
from .model import LiftModel, WittBasis

Cell = Tuple[int, int]


class FreeSystem:
    """Free complex at levels 1..L, degrees 0..Q, precision p^N, with saturated relations."""

    def __init__(self, model: LiftModel, L: int, N: int, Q: int):
        self.model = model
        self.p, self.e = model.p, model.e
        self.L, self.N, self.Q = L, N, Q
        self.mod = self.p ** N
        self.W = WittBasis(model, self.mod)
        self.nmon = len(model.monoid)
        self._setup()
        self.saturated = False
        self.rounds = 0
        self.seed_count = 0
        self.elapsed = 0.0
        self._quotients: Dict[Cell, Quotient] = {}
        self._lock = threading.Lock()

    # -- bases ------------------------------------------------------------
    def _setup(self):
        e, L, Q = self.e, self.L, self.Q
        self.gens: Dict[int, list] = {}
        self.free: Dict[Cell, list] = {}
        self.index: Dict[Cell, dict] = {}
        self.gen_index: Dict[int, dict] = {}
        for n in range(1, L + 1):
            gens = [("d", t, j) for t in range(n) for j in range(e)] + [("dlog", m) for m in range(self.nmon)]
            self.gens[n] = gens
            self.gen_index[n] = {g: i for i, g in enumerate(gens)}
            for q in range(Q + 1):
                lst = [(b, S) for b in range(n * e) for S in itertools.combinations(range(len(gens)), q)]
                self.free[(n, q)] = lst
                self.index[(n, q)] = {x: i for i, x in enumerate(lst)}
        self.Fw = {n: self.W.frobenius_images(n) for n in range(2, L + 1)}
        self.Rw = {n: self.W.restriction_images(n) for n in range(2, L + 1)}

    def cells(self):
        return sorted(self.free)

    def dim(self, n, q) -> int:
        return len(self.free[(n, q)])

    def gidx(self, n, g) -> int:
        return self.gen_index[n][g]

    def unit_w(self, n):
        v = np.zeros(n * self.e, dtype=np.int64)
        v[0] = 1
        return v

    def basis_w(self, n, b):
        v = np.zeros(n * self.e, dtype=np.int64)
        v[b] = 1
        return v

    def vec(self, n, q, terms) -> np.ndarray:
        """Free vector from ``[(Witt coefficient vector, generator index sequence), ...]``."""
        v = np.zeros(self.dim(n, q), dtype=np.int64)
        idx = self.index[(n, q)]
        for cw, gens in terms:
            gens = list(gens)
            if len(set(gens)) < len(gens):
                continue
            sign = 1
            for i in range(len(gens)):
                for k in range(len(gens) - 1 - i):
                    if gens[k] > gens[k + 1]:
                        gens[k], gens[k + 1] = gens[k + 1], gens[k]
                        sign = -sign
            S = tuple(gens)
            for b in np.flatnonzero(cw):
                v[idx[(int(b), S)]] += sign * int(cw[b])
        return v % self.mod

    def d_of_witt(self, n, w) -> list:
        """d(w) for a Witt coefficient vector w, as vec terms."""
        e = self.e
        return [(int(c) * self.unit_w(n), (self.gidx(n, ("d",) + divmod(k, e)),))
                for k, c in enumerate(w) if c]

    # -- operator matrices (rows = source basis) ------------------------------
    def mult_matrix(self, n, q, x) -> np.ndarray:
        """Multiplication by the Witt vector x (coordinate vector) on Free_n^q."""
        T = self.W.mult_table(n)
        xw = matmul_mod(x[None, :], T.reshape(T.shape[0], -1), self.mod).reshape(T.shape[1], T.shape[2])
        src = self.free[(n, q)]
        M = np.zeros((len(src), len(src)), dtype=np.int64)
        idx = self.index[(n, q)]
        for i, (b, S) in enumerate(src):
            row = xw[b]
            for c in np.flatnonzero(row):
                M[i, idx[(int(c), S)]] = row[c]
        return M

    def wedge_matrix(self, n, q, gi) -> np.ndarray:
        src = self.free[(n, q)]
        M = np.zeros((len(src), self.dim(n, q + 1)), dtype=np.int64)
        for i, (b, S) in enumerate(src):
            M[i] = self.vec(n, q + 1, [(self.basis_w(n, b), S + (gi,))])
        return M

    def D_matrix(self, n, q) -> np.ndarray:
        src = self.free[(n, q)]
        M = np.zeros((len(src), self.dim(n, q + 1)), dtype=np.int64)
        for i, (b, S) in enumerate(src):
            t, j = divmod(b, self.e)
            M[i] = self.vec(n, q + 1, [(self.unit_w(n), (self.gidx(n, ("d", t, j)),) + S)])
        return M

    def F_gen(self, n, g) -> list:
        """F of a generator at level n, as terms at level n−1."""
        if g[0] == "dlog":
            return [(self.unit_w(n - 1), (self.gidx(n - 1, g),))]
        _, t, j = g
        if t >= 1:  # F d V^t = d V^{t-1}
            return [(self.unit_w(n - 1), (self.gidx(n - 1, ("d", t - 1, j)),))]
        A = self.W.A
        a = A.pi_power(j)
        ap = self.W.teich(n - 1, A.pow(a, self.p - 1))
        return [(ap, (self.gidx(n - 1, ("d", 0, j)),))]

    def F_matrix(self, n, q) -> np.ndarray:
        src = self.free[(n, q)]
        M = np.zeros((len(src), self.dim(n - 1, q)), dtype=np.int64)
        Fgens = [self.F_gen(n, g) for g in self.gens[n]]
        for i, (b, S) in enumerate(src):
            terms = [(self.Fw[n][b], ())]
            for gi in S:
                terms = [(self.W.multiply(n - 1, w1, w2), g1 + g2) for w1, g1 in terms for w2, g2 in Fgens[gi]]
            M[i] = self.vec(n - 1, q, terms)
        return M

    def R_matrix(self, n, q) -> np.ndarray:
        src = self.free[(n, q)]
        M = np.zeros((len(src), self.dim(n - 1, q)), dtype=np.int64)
        for i, (b, S) in enumerate(src):
            gens = []
            for gi in S:
                g = self.gens[n][gi]
                if g[0] == "d" and g[1] == n - 1:  # d V^{n-1} dies at level n-1
                    break
                gens.append(self.gidx(n - 1, g))
            else:
                M[i] = self.vec(n - 1, q, [(self.Rw[n][b], tuple(gens))])
        return M

    def V_matrix(self, n, q) -> np.ndarray:
        """V: Free_n^q → Free_{n+1}^q, V(w·ω) = V(w)·ω on generators ω (d V^t ↦ d V^{t+1})."""
        src = self.free[(n, q)]
        e = self.e
        M = np.zeros((len(src), self.dim(n + 1, q)), dtype=np.int64)
        for i, (b, S) in enumerate(src):
            w = np.zeros((n + 1) * e, dtype=np.int64)
            w[b + e] = 1
            gens = []
            for gi in S:
                g = self.gens[n][gi]
                gens.append(self.gidx(n + 1, ("d", g[1] + 1, g[2]) if g[0] == "d" else g))
            M[i] = self.vec(n + 1, q, [(w, tuple(gens))])
        return M

    def operator(self, kind: str, n: int, q: int) -> np.ndarray:
        key = (kind, n, q)
        cache = self.__dict__.setdefault("_ops", {})
        M = cache.get(key)
        if M is None:
            M = {"F": self.F_matrix, "R": self.R_matrix, "V": self.V_matrix, "d": self.D_matrix}[kind](n, q)
            cache[key] = M
        return M

    def _closure_ops(self):
        e, L, Q = self.e, self.L, self.Q
        ops = {}
        for n in range(1, L + 1):
            for q in range(Q + 1):
                lst = []
                for c in range(n * e):
                    lst.append(((n, q), self.mult_matrix(n, q, self.basis_w(n, c))))
                if q + 1 <= Q:
                    for gi in range(len(self.gens[n])):
                        lst.append(((n, q + 1), self.wedge_matrix(n, q, gi)))
                    lst.append(((n, q + 1), self.operator("d", n, q)))
                if n >= 2:
                    lst.append(((n - 1, q), self.operator("F", n, q)))
                    lst.append(((n - 1, q), self.operator("R", n, q)))
                if n + 1 <= L:
                    lst.append(((n + 1, q), self.operator("V", n, q)))
                ops[(n, q)] = lst
        return ops

    # -- seeds --------------------------------------------------------------
    def frobenius_test_elements(self) -> list:
        """Elements a ∈ Ã on which F d[a] = [a]^{p-1} d[a] is imposed."""
        A = self.W.A
        out = [A.pi, A.const(2)]
        for i in range(1, self.e * (self.N + self.L) + 1):
            out.append(A.add(A.one, A.pow(A.pi, i)))
        out.extend(v for _, v in self.model.monoid)
        return out

    def seeds(self) -> Dict[Cell, list]:
        p, e, L, Q, mod = self.p, self.e, self.L, self.Q, self.mod
        out: Dict[Cell, list] = {k: [] for k in self.free}
        A = self.W.A
        for n in range(1, L + 1):
            if self.model.residue_field:
                for s in range(n):
                    out[(n, 0)].append(self.W.v_teich(n, s, A.pi))  # V^s[p] generates W(pÃ)
            if Q < 1:
                continue
            T = self.W.mult_table(n)
            for a in range(n * e):  # Leibniz on pairs of basis elements
                for b in range(a, n * e):
                    terms = self.d_of_witt(n, T[a, b])
                    ta, tb = divmod(a, e), divmod(b, e)
                    terms.append(((-self.basis_w(n, a)) % mod, (self.gidx(n, ("d",) + tb),)))
                    terms.append(((-self.basis_w(n, b)) % mod, (self.gidx(n, ("d",) + ta),)))
                    out[(n, 1)].append(self.vec(n, 1, terms))
            for m, (_, val) in enumerate(self.model.monoid):  # d[α(m)] = [α(m)] dlog m
                ta = self.W.teich(n, val)
                terms = self.d_of_witt(n, ta)
                terms.append(((-ta) % mod, (self.gidx(n, ("dlog", m)),)))
                out[(n, 1)].append(self.vec(n, 1, terms))
        for n in range(2, L + 1):
            if Q >= 1:
                Fm = self.operator("F", n, 1)
                for a in self.frobenius_test_elements():
                    da = self.vec(n, 1, self.d_of_witt(n, self.W.teich(n, a)))
                    Fda = matmul_mod(da[None, :], Fm, mod)[0]
                    ap = self.W.teich(n - 1, A.pow(a, p - 1))
                    rhs = [(self.W.multiply(n - 1, ap, w), g) for w, g in self.d_of_witt(n - 1, self.W.teich(n - 1, a))]
                    out[(n - 1, 1)].append((Fda - self.vec(n - 1, 1, rhs)) % mod)
            for q in range(Q + 1):
                Vm, Fm = self.operator("V", n - 1, q), self.operator("F", n, q)
                FV = matmul_mod(Vm, Fm, mod)
                out[(n - 1, q)].extend(list((FV - p * np.eye(self.dim(n - 1, q), dtype=np.int64)) % mod))
                if q + 1 <= Q:
                    FdV = matmul_mod(matmul_mod(Vm, self.operator("d", n, q), mod), self.operator("F", n, q + 1), mod)
                    out[(n - 1, q + 1)].extend(list((FdV - self.operator("d", n - 1, q)) % mod))
        self._projection_seeds(out)
        return out

    def _projection_seeds(self, out):
        """V(x · F(η)) − V(x) · η for η a Witt basis element or a generator."""
        e, L, Q, mod = self.e, self.L, self.Q, self.mod
        for n in range(2, L + 1):
            for q in range(Q + 1):
                Vq = self.operator("V", n - 1, q)
                for c in range(n * e):
                    lhs = matmul_mod(self.mult_matrix(n - 1, q, self.Fw[n][c]), Vq, mod)
                    rhs = matmul_mod(Vq, self.mult_matrix(n, q, self.basis_w(n, c)), mod)
                    out[(n, q)].extend(list((lhs - rhs) % mod))
                if q + 1 <= Q:
                    src = self.free[(n - 1, q)]
                    Vq1 = self.operator("V", n - 1, q + 1)
                    for gi, g in enumerate(self.gens[n]):
                        Fg = self.F_gen(n, g)
                        M1 = np.zeros((len(src), self.dim(n - 1, q + 1)), dtype=np.int64)
                        for i, (b, S) in enumerate(src):
                            wb = self.basis_w(n - 1, b)
                            M1[i] = self.vec(n - 1, q + 1, [(self.W.multiply(n - 1, wb, w2), S + g2) for w2, g2 in Fg])
                        lhs = matmul_mod(M1, Vq1, mod)
                        rhs = matmul_mod(Vq, self.wedge_matrix(n, q, gi), mod)
                        out[(n, q + 1)].extend(list((lhs - rhs) % mod))

    # -- saturation -----------------------------------------------------------
    def saturate(self):
        with self._lock:
            if self.saturated:
                return self
            t0 = time.perf_counter()
            ops = self._closure_ops()
            seeds = self.seeds()
            self.seed_count = sum(len(v) for v in seeds.values())
            self.K = {k: Submodule(self.p, self.N, self.dim(*k)) for k in self.free}
            new = {k: [] for k in self.free}
            for k in sorted(seeds):
                new[k].extend(self.K[k].add_many(seeds[k]))
            rounds = 0
            while any(new.values()):
                rounds += 1
                nxt = {k: [] for k in self.free}
                for k in sorted(new):
                    rows = new[k]
                    if not rows:
                        continue
                    X = np.array(rows, dtype=np.int64)
                    for tgt, M in ops[k]:
                        Y = matmul_mod(X, M, self.mod)
                        for y in Y:
                            if y.any():
                                nxt[tgt].extend(self.K[tgt].add(y))
                new = nxt
            self.rounds = rounds
            self.elapsed = time.perf_counter() - t0
            self.saturated = True
            return self

    def relation_count(self, n, q) -> int:
        return len(self.saturate().K[(n, q)])

    def quotient(self, n, q) -> Quotient:
        self.saturate()
        Qt = self._quotients.get((n, q))
        if Qt is None:
            Qt = self.K[(n, q)].quotient()
            self._quotients[(n, q)] = Qt
        return Qt

    def contains(self, n, q, v) -> bool:
        return self.saturate().K[(n, q)].contains(np.asarray(v, dtype=np.int64) % self.mod)

    # -- element helpers --------------------------------------------------------
    def apply(self, kind, n, q, v) -> np.ndarray:
        return matmul_mod(np.asarray(v, dtype=np.int64)[None, :] % self.mod, self.operator(kind, n, q), self.mod)[0]

    def wedge(self, n, q1, x, q2, y) -> np.ndarray:
        """Product in Free_n: (w S)(w' T) = w w' · S∧T."""
        out = np.zeros(self.dim(n, q1 + q2), dtype=np.int64)
        if q1 + q2 > self.Q:
            raise ValueError("product degree exceeds the truncation")
        src1, src2 = self.free[(n, q1)], self.free[(n, q2)]
        terms = []
        for i in np.flatnonzero(x):
            b1, S1 = src1[i]
            for j in np.flatnonzero(y):
                b2, S2 = src2[j]
                w = self.W.multiply(n, self.basis_w(n, b1), self.basis_w(n, b2))
                terms.append(((w * (int(x[i]) * int(y[j]) % self.mod)) % self.mod, S1 + S2))
        if terms:
            out = self.vec(n, q1 + q2, terms)
        return out

    def dlog_vec(self, n, m) -> np.ndarray:
        return self.vec(n, 1, [(self.unit_w(n), (self.gidx(n, ("dlog", m)),))])

    def teich_vec(self, n, a) -> np.ndarray:
        return self.vec(n, 0, [(self.W.teich(n, a), ())])

    def d_teich_vec(self, n, a) -> np.ndarray:
        return self.vec(n, 1, self.d_of_witt(n, self.W.teich(n, a)))


_SYSTEMS: Dict[tuple, FreeSystem] = {}
_SYSTEMS_LOCK = threading.Lock()


def get_system(model: LiftModel, L: int, N: int, Q: int) -> FreeSystem:
    """Saturated system for (model, L, N, Q), memoized on exactly that key.

    A system with larger N or Q would give the same groups, but its
    relation counts and coordinates differ, and reports must not depend on
    what was computed earlier in the process.
    """
    key = (model.key(), L, N, Q)
    with _SYSTEMS_LOCK:
        sys_ = _SYSTEMS.get(key)
        if sys_ is None:
            sys_ = _SYSTEMS[key] = FreeSystem(model, L, N, Q)
    return sys_.saturate()


def clear_system_cache():
    with _SYSTEMS_LOCK:
        _SYSTEMS.clear()
