"""Matrices of the calibrated representation V(E, c) on the good-chain basis."""

from __future__ import annotations

from typing import Callable

from ..chains import (GoodChain, enumerate_good_chains, is_good_word, longest_good_chain,
                      swapped_word, transposition_status)
from ..edge import EdgeFunction
from ..field import ONE, Q, T, ZERO, RatFunc, to_string
from ..posets import WeightedPoset
from .sparse import SparseMatrix

DELTA_POWERS = (1, 2, 3)


class RepError(ValueError):
    pass


class Representation:
    """Levels 0..K of V(E, c).

    `complete` is True when V_{K+1} = 0, so every generator is known on every
    level and no relation needs to be skipped.  Matrices are created lazily and
    cached; operators on levels above K are zero maps between zero spaces when
    the representation is complete.
    """

    def __init__(self, poset: WeightedPoset, edge: EdgeFunction | None, K: int,
                 bases: list[list[GoodChain]], complete: bool):
        self.poset = poset
        self.edge = edge
        self.K = K
        self.bases = bases
        self.complete = complete
        self.index = [{ch.key(): j for j, ch in enumerate(b)} for b in bases]
        self._mats: dict[tuple, SparseMatrix] = {}
        self.overrides: dict[tuple, SparseMatrix] = {}
        self.records_override: dict[int, list] = {}
        self.name = "V"
        self.gamma: list[list[RatFunc]] | None = None

    # shape helpers
    def dim(self, k: int) -> int:
        if k < 0:
            return 0
        if k <= self.K:
            return len(self.bases[k])
        if self.complete:
            return 0
        raise RepError(f"level {k} outside the truncated range 0..{self.K}")

    def has_level(self, k: int) -> bool:
        return 0 <= k <= self.K or (self.complete and k >= 0)

    def chain(self, k: int, j: int) -> GoodChain:
        return self.bases[k][j]

    def find(self, k: int, base: int, word: tuple) -> int | None:
        if k > self.K:
            return None
        return self.index[k].get((base, tuple(word)))

    def _cached(self, key: tuple, make: Callable[[], SparseMatrix]) -> SparseMatrix:
        if key in self.overrides:
            return self.overrides[key]
        m = self._mats.get(key)
        if m is None:
            m = make()
            self._mats[key] = m
        return m

    def _empty(self, k_out: int, k_in: int) -> SparseMatrix:
        return SparseMatrix(self.dim(k_out), self.dim(k_in))

    # weight records: (endpoint contents, word), encoding all Delta and z eigenvalues
    def record(self, k: int, j: int) -> tuple:
        if k in self.records_override:
            return self.records_override[k][j]
        ch = self.bases[k][j]
        return (self.poset.contents[ch.endpoint], ch.word)

    def delta_eigenvalue(self, k: int, j: int, m: int) -> RatFunc:
        content, _ = self.record(k, j)
        s = ZERO
        for b, mult in content:
            s = s + mult * b ** m
        return s

    # generators
    def z(self, k: int, i: int) -> SparseMatrix:
        if not 1 <= i <= k:
            raise RepError(f"z_{i} undefined on level {k}")

        def make():
            if k > self.K:
                return self._empty(k, k)
            return SparseMatrix.diag(ch.w(i) for ch in self.bases[k])
        return self._cached(("z", k, i), make)

    def delta(self, k: int, m: int) -> SparseMatrix:
        def make():
            if k > self.K:
                return self._empty(k, k)
            return SparseMatrix.diag(self.delta_eigenvalue(k, j, m) for j in range(self.dim(k)))
        return self._cached(("Delta", k, m), make)

    def T(self, k: int, i: int) -> SparseMatrix:
        if not 1 <= i <= k - 1:
            raise RepError(f"T_{i} undefined on level {k}")
        return self._cached(("T", k, i), lambda: self._make_T(k, i))

    def _make_T(self, k: int, i: int) -> SparseMatrix:
        if k > self.K:
            return self._empty(k, k)
        cols = {}
        for j, ch in enumerate(self.bases[k]):
            wi, wn = ch.w(i), ch.w(i + 1)
            col = {j: (Q - 1) * wn / (wi - wn)}
            if transposition_status(ch, i) == "excellent":
                r = self.find(k, ch.base, swapped_word(ch, i))
                if r is None:
                    raise RepError(f"s_{i} of {ch.notation(self.poset)} is not a basis chain")
                col[r] = (wi - Q * wn) / (wi - wn)
            cols[j] = col
        return SparseMatrix(self.dim(k), self.dim(k), cols)

    def Tinv(self, k: int, i: int) -> SparseMatrix:
        # T^-1 = (T + q - 1)/q from (T - 1)(T + q) = 0
        def make():
            n = self.dim(k)
            return (self.T(k, i) + SparseMatrix.identity(n).scale(Q - 1)).scale(1 / Q)
        return self._cached(("Tinv", k, i), make)

    def dminus(self, k: int) -> SparseMatrix:
        if k < 1:
            raise RepError("d_- undefined on level 0")
        return self._cached(("dm", k), lambda: self._make_dminus(k))

    def _make_dminus(self, k: int) -> SparseMatrix:
        if k > self.K:
            return self._empty(k - 1, k)
        cols = {}
        for j, ch in enumerate(self.bases[k]):
            r = self.find(k - 1, ch.path[1], ch.word[1:])
            if r is None:
                raise RepError(f"d_- of {ch.notation(self.poset)} is not a basis chain")
            cols[j] = {r: ONE}
        return SparseMatrix(self.dim(k - 1), self.dim(k), cols)

    def dplus_available(self, k: int) -> bool:
        return k < self.K or self.complete

    def dplus(self, k: int) -> SparseMatrix:
        if not self.dplus_available(k):
            raise RepError(f"d_+ on level {k} needs level {k + 1}, beyond the truncation")
        return self._cached(("dp", k), lambda: self._make_dplus(k))

    def dplus_coefficient(self, ch: GoodChain, x: RatFunc) -> RatFunc:
        """q^k c(lambda u w; x) prod_i (x - t w_i)/(x - qt w_i)."""
        k = ch.k
        val = Q ** k * self.edge(ch.endpoint, x)
        qt = Q * T
        for w in ch.word:
            val = val * (x - T * w) / (x - qt * w)
        return val

    def _make_dplus(self, k: int) -> SparseMatrix:
        if k >= self.K:
            return self._empty(k + 1, k)
        cols = {}
        for j, ch in enumerate(self.bases[k]):
            col = {}
            for x, _, _ in self.poset.up[ch.endpoint]:
                word = ch.word + (x,)
                if not is_good_word(word):
                    continue
                r = self.find(k + 1, ch.base, word)
                col[r] = self.dplus_coefficient(ch, x)
            cols[j] = col
        return SparseMatrix(self.dim(k + 1), self.dim(k), cols)

    def phi(self, k: int) -> SparseMatrix:
        """(d_+ d_- - d_- d_+)/(q - 1), evaluated chain by chain so it exists on every level."""
        if k < 1:
            raise RepError("phi undefined on level 0")
        return self._cached(("phi", k), lambda: self._make_phi(k))

    def _make_phi(self, k: int) -> SparseMatrix:
        if k > self.K:
            return self._empty(k, k)
        E = self.poset
        qt = Q * T
        cols = {}
        for j, ch in enumerate(self.bases[k]):
            lower_base, lower_word = ch.path[1], ch.word[1:]
            wk = ch.w(k)
            col = {}
            for x, _, _ in E.up[ch.endpoint]:
                word = lower_word + (x,)
                if not is_good_word(word):
                    continue
                r = self.find(k, lower_base, word)
                # d_+ d_- term: q^(k-1) c(end; x) prod_{i<k}(x - t w_i)/(x - qt w_i)
                a = Q ** (k - 1) * self.edge(ch.endpoint, x)
                for w in lower_word:
                    a = a * (x - T * w) / (x - qt * w)
                if is_good_word(ch.word + (x,)):
                    # minus the d_- d_+ term, which carries the extra factor q (x - t w_k)/(x - qt w_k)
                    a = a * (1 - Q * (x - T * wk) / (x - qt * wk))
                col[r] = a / (Q - 1)
            cols[j] = col
        return SparseMatrix(self.dim(k), self.dim(k), cols)

    def y(self, k: int, i: int) -> SparseMatrix:
        """q^(i-k) T_{i-1}^-1 ... T_1^-1 phi T_{k-1} ... T_i."""
        if not 1 <= i <= k:
            raise RepError(f"y_{i} undefined on level {k}")

        def make():
            R =SparseMatrix.identity(self.dim(k))
            for j in range(k - 1, i - 1, -1):
                R = R @ self.T(k, j)
            L = SparseMatrix.identity(self.dim(k))
            for j in range(i - 1, 0, -1):
                L = L @ self.Tinv(k, j)
            return (L @ self.phi(k) @ R).scale(Q ** (i - k))
        return self._cached(("y", k, i), make)

    # bookkeeping
    def generator_names(self, k: int) -> list[tuple]:
        """Every generator acting from level k, as keys understood by `generator`."""
        out: list[tuple] = [("z", k, i) for i in range(1, k + 1)]
        out += [("T", k, i) for i in range(1, k)]
        if k >= 1:
            out.append(("dm", k))
        if self.dplus_available(k):
            out.append(("dp", k))
        out += [("Delta", k, m) for m in DELTA_POWERS]
        return out

    def generator(self, key: tuple) -> SparseMatrix:
        name = key[0]
        if name == "z":
            return self.z(key[1], key[2])
        if name == "T":
            return self.T(key[1], key[2])
        if name == "Tinv":
            return self.Tinv(key[1], key[2])
        if name == "dm":
            return self.dminus(key[1])
        if name == "dp":
            return self.dplus(key[1])
        if name == "Delta":
            return self.delta(key[1], key[2])
        if name == "phi":
            return self.phi(key[1])
        if name == "y":
            return self.y(key[1], key[2])
        raise RepError(f"unknown generator {key!r}")

    @staticmethod
    def target_level(key: tuple) -> int:
        if key[0] == "dm":
            return key[1] - 1
        if key[0] == "dp":
            return key[1] + 1
        return key[1]

    def materialize(self) -> None:
        for k in range(self.K + 1):
            for key in self.generator_names(k):
                self.generator(key)
            if k >= 1:
                self.phi(k)
                for i in range(1, k + 1):
                    self.y(k, i)

    def to_json(self) -> dict:
        self.materialize()
        E = self.poset
        levels = []
        for k in range(self.K + 1):
            mats = {}
            for key in sorted(self._mats, key=str):
                if key[1] == k:
                    mats["_".join(str(p) for p in key)] = self._mats[key].to_json()
            levels.append({"k": k, "basis": [ch.notation(E) for ch in self.bases[k]], "matrices": mats})
        return {"poset": E.name, "K": self.K, "complete": self.complete, "levels": levels}


def build_rep(E: WeightedPoset, c: EdgeFunction, K: int | None = None) -> Representation:
    longest = longest_good_chain(E)
    if K is None:
        K = longest
    if K < 0:
        raise RepError("K must be nonnegative")
    if c is not None and c.poset is not E:
        raise RepError("edge function belongs to a different poset")
    bases = [enumerate_good_chains(E, k) for k in range(K + 1)]
    return Representation(E, c, K, bases, complete=K >= longest)


def basis_notation(rep: Representation, k: int, j: int) -> str:
    return rep.bases[k][j].notation(rep.poset)


def describe_entry(rep: Representation, k_out: int, k_in: int, i: int, j: int, v: RatFunc) -> dict:
    return {"row": basis_notation(rep, k_out, i) if k_out <= rep.K else i,
            "col": basis_notation(rep, k_in, j) if k_in <= rep.K else j,
            "residual": to_string(v)}


def rebase_diagonal(rep: Representation, scale: list[list[RatFunc]], name: str = "rebased") -> Representation:
    """The same module on the basis b'_j = scale[k][j] b_j; every cached matrix is converted."""
    rep.materialize()
    inv = [[s.inverse() for s in level] for level in scale]
    out = Representation(rep.poset, rep.edge, rep.K, rep.bases, rep.complete)
    out.records_override = dict(rep.records_override)
    keys = set(rep._mats) | set(rep.overrides)
    for key in keys:
        M = rep.generator(key)
        k_in = key[1]
        k_out = Representation.target_level(key)
        if k_in > rep.K or k_out > rep.K:
            out.overrides[key] = M
            continue
        out.overrides[key] = M.conjugate_diag(inv[k_out], scale[k_in])
    out.name = name
    return out
