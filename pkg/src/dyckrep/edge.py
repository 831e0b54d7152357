"""Edge functions c(lambda; x) on the covers of a weighted poset.

An edge function is admissible when, on every square lambda -> lambda u x,
lambda u y -> lambda u x u y, the ratio
    c(lambda;x) c(lambda u x;y) / (c(lambda;y) c(lambda u y;x))
equals upsilon(x, y).  Any two admissible edge functions on the same poset
differ by a coboundary a(lambda)/a(lambda u x).
"""

from __future__ import annotations

import random
from collections import deque
from typing import Callable, Iterator, Mapping, Sequence

from .field import (ONE, Q, T, Character, DivisionByZero, RatFunc, char_lambda,
                    param, rf_theta, to_string)
from .posets import WeightedPoset, check_excellent, dual, product, partition_contents
from .report import Report


class EdgeError(ValueError):
    pass


class PoleAtInput(EdgeError):
    pass


class NotAddable(EdgeError):
    pass


class InconsistentCycles(EdgeError):
    pass


class VeryGeneralPositionViolated(EdgeError):
    pass


class NotExcellentPoset(EdgeError):
    pass


class EdgeFunction:
    """Values indexed by cover index of `poset`."""

    def __init__(self, poset: WeightedPoset, values: Sequence[RatFunc], name: str = "c"):
        if len(values) != len(poset.covers):
            raise EdgeError("edge function must be total on covers")
        self.poset = poset
        self.values = tuple(RatFunc.coerce(v) for v in values)
        self.name = name
        for ci, val in enumerate(self.values):
            if val.is_zero():
                cv = poset.covers[ci]
                raise EdgeError(f"edge value zero on {poset.label_str(cv.src)} -> {poset.label_str(cv.dst)}")

    def __call__(self, lam: int, x: RatFunc) -> RatFunc:
        ci = self.poset.cover(lam, x)
        if ci is None:
            raise NotAddable(f"{to_string(x)} is not addable for {self.poset.label_str(lam)}")
        return self.values[ci]

    def with_value(self, ci: int, value: RatFunc) -> "EdgeFunction":
        vals = list(self.values)
        vals[ci] = value
        return EdgeFunction(self.poset, vals, name=self.name + "*")

    def to_json(self) -> dict[str, str]:
        P = self.poset
        return {f"{P.label_str(cv.src)}->{P.label_str(cv.dst)}": to_string(v)
                for cv, v in zip(P.covers, self.values)}


def upsilon(x: RatFunc, y: RatFunc) -> RatFunc:
    qt = Q * T
    den = (y - T * x) * (y - Q * x) * (x - qt * y)
    if den.is_zero():
        raise PoleAtInput(f"upsilon has a pole at ({to_string(x)}, {to_string(y)})")
    return -((x - T * y) * (x - Q * y) * (y - qt * x)) / den


def psi_std(y: RatFunc, u: RatFunc) -> RatFunc:
    """(1 - y/u)(1 - qt y/u) / ((1 - q y/u)(1 - t y/u))."""
    if u.is_zero():
        raise PoleAtInput("psi at u = 0")
    r = y / u
    den = (1 - Q * r) * (1 - T * r)
    if den.is_zero():
        raise PoleAtInput(f"psi has a pole at ({to_string(y)}, {to_string(u)})")
    return (1 - r) * (1 - Q * T * r) / den


PsiFunction = Callable[[RatFunc, RatFunc], RatFunc]


def iter_squares(E: WeightedPoset) -> Iterator[tuple[int, RatFunc, RatFunc, int, int, int]]:
    """(lam, x, y, cover lam->lam u x, cover lam u x -> top, ...) for squares with both orders chains.

    Yields (lam, x, y, nu_x, nu_y, top); each unordered square once.
    """
    for lam in range(len(E)):
        ups = E.up[lam]
        for a in range(len(ups)):
            x, nux, _ = ups[a]
            for b in range(a + 1, len(ups)):
                y, nuy, _ = ups[b]
                top = E.add(nux, y)
                if top is not None and E.add(nuy, x) == top:
                    yield lam, x, y, nux, nuy, top


def square_ratio(c: EdgeFunction, lam: int, x: RatFunc, y: RatFunc, nux: int, nuy: int) -> RatFunc:
    return c(lam, x) * c(nux, y) / (c(lam, y) * c(nuy, x))


def verify_monodromy(E: WeightedPoset, c: EdgeFunction) -> Report:
    n = 0
    for lam, x, y, nux, nuy, top in iter_squares(E):
        n += 1
        lhs = square_ratio(c, lam, x, y, nux, nuy)
        rhs = upsilon(x, y)
        if lhs != rhs:
            return Report(False, "monodromy",
                          {"base": E.label_str(lam), "x": to_string(x), "y": to_string(y),
                           "ratio": to_string(lhs), "expected": to_string(rhs)},
                          {"squares_checked": n})
    return Report(True, "monodromy", details={"squares_checked": n})


def spanning_forest(E: WeightedPoset, seed: int = 0) -> list[int]:
    """Cover indices of a BFS spanning forest rooted at minimal elements; neighbor order shuffled by seed."""
    rng = random.Random(seed)
    seen: set[int] = set()
    tree: list[int] = []
    roots = E.minimal_elements() + list(range(len(E)))
    for r in roots:
        if r in seen:
            continue
        seen.add(r)
        dq = deque([r])
        while dq:
            a = dq.popleft()
            nbrs = [(ci, d) for _, d, ci in E.up[a]] + [(ci, s) for _, s, ci in E.down[a]]
            nbrs.sort()
            rng.shuffle(nbrs)
            for ci, b in nbrs:
                if b not in seen:
                    seen.add(b)
                    tree.append(ci)
                    dq.append(b)
    return sorted(tree)


def _gauge_potential(E: WeightedPoset, ratio: Sequence[RatFunc], tree: Sequence[int]) -> list[RatFunc]:
    """a with ratio[ci] = a(src)/a(dst) along tree edges, a = 1 at each root."""
    adj: dict[int, list[tuple[int, int, bool]]] = {i: [] for i in range(len(E))}
    for ci in tree:
        cv = E.covers[ci]
        adj[cv.src].append((ci, cv.dst, True))
        adj[cv.dst].append((ci, cv.src, False))
    a: list[RatFunc | None] = [None] * len(E)
    for r in range(len(E)):
        if a[r] is not None:
            continue
        a[r] = ONE
        stack = [r]
        while stack:
            u = stack.pop()
            for ci, w, upward in adj[u]:
                if a[w] is None:
                    a[w] = a[u] / ratio[ci] if upward else a[u] * ratio[ci]
                    stack.append(w)
    return a  # type: ignore[return-value]


def _local_solution(E: WeightedPoset) -> list[RatFunc]:
    """Some admissible edge function, built grade by grade."""
    vals: list[RatFunc | None] = [None] * len(E.covers)
    order = sorted(range(len(E)), key=lambda i: E.grades[i])
    for mu in order:
        ins = E.down[mu]
        if not ins:
            continue
        # incoming edges y: lam_y -> mu with lam_y = rho u x; link pairs sharing rho
        weights = [w for w, _, _ in ins]
        cidx = {w: ci for w, _, ci in ins}
        src = {w: s for w, s, _ in ins}
        assigned: dict[RatFunc, RatFunc] = {}
        for start in weights:
            if start in assigned:
                continue
            assigned[start] = ONE
            stack = [start]
            while stack:
                y = stack.pop()
                lam_y = src[y]
                for x, rho, _ in E.down[lam_y]:
                    # square rho -> rho u x = lam_y -> mu (adding y), rho -> rho u y -> mu (adding x)
                    if x not in src or x in assigned:
                        continue
                    rho_y = E.add(rho, y)
                    if rho_y is None or rho_y != src[x]:
                        continue
                    # c(rho;x) c(lam_y;y) / (c(rho;y) c(rho_y;x)) = upsilon(x,y)
                    cx = vals[E.cover(rho, x)]
                    cy = vals[E.cover(rho, y)]
                    assigned[x] = cx * assigned[y] / (cy * upsilon(x, y))
                    stack.append(x)
        for w in weights:
            vals[cidx[w]] = assigned[w]
    return vals  # type: ignore[return-value]


def synthesize_edge(E: WeightedPoset, tree_seed: int = 0) -> EdgeFunction:
    if not check_excellent(E).ok:
        raise NotExcellentPoset("edge synthesis needs an excellent poset")
    base = _local_solution(E)
    tree = spanning_forest(E, tree_seed)
    a = _gauge_potential(E, base, tree)
    vals = [base[ci] * a[cv.dst] / a[cv.src] for ci, cv in enumerate(E.covers)]
    c = EdgeFunction(E, vals, name=f"synth(seed={tree_seed})")
    for ci in tree:
        if not c.values[ci].is_one():
            raise InconsistentCycles("tree edge not normalized")
    rep = verify_monodromy(E, c)
    if not rep.ok:
        raise InconsistentCycles(f"synthesized edge function fails monodromy: {rep.witness}")
    return c


def recover_coboundary(E: WeightedPoset, c1: EdgeFunction, c2: EdgeFunction) -> list[RatFunc] | None:
    """a with c1(lam;x) = c2(lam;x) a(lam)/a(lam u x) on every cover, or None."""
    ratio = [v1 / v2 for v1, v2 in zip(c1.values, c2.values)]
    a = _gauge_potential(E, ratio, spanning_forest(E, 0))
    for ci, cv in enumerate(E.covers):
        if ratio[ci] != a[cv.src] / a[cv.dst]:
            return None
    return a


# closed forms

def lambda_edge(contents: Mapping[RatFunc, int], x: RatFunc, framing: Character | None = None) -> RatFunc:
    """-Lambda(-A/x + (1-q)(1-t) B/x + 1), A the framing character (default 1), B the contents."""
    xinv = Character.from_ratfunc(1 / x)
    A = framing if framing is not None else Character.from_ratfunc(ONE)
    B = Character()
    for b, m in contents.items():
        B = B + Character({k: m * v for k, v in Character.from_ratfunc(b).terms.items()})
    qt = Character.from_ratfunc((1 - Q) * (1 - T))
    arg = -(A * xinv) + qt * B * xinv + Character.from_ratfunc(ONE)
    return -char_lambda(arg)


def partition_edge(lam: Sequence[int], x: RatFunc) -> RatFunc:
    from .posets import addable_cells, cell_content
    if x not in [cell_content(r, c) for r, c in addable_cells(lam)]:
        raise NotAddable(f"{to_string(x)} is not an addable content of {tuple(lam)}")
    return lambda_edge(partition_contents(lam), x)


def closed_form_edge_function(E: WeightedPoset, framing: Sequence[RatFunc] = (ONE,)) -> EdgeFunction:
    """The Lambda closed form on every cover of E (partitions; twisted partitions and their products)."""
    A = Character()
    for a in framing:
        A = A + Character.from_ratfunc(a)
    vals = [lambda_edge(dict(E.contents[cv.src]), cv.weight, A) for cv in E.covers]
    return EdgeFunction(E, vals, name="lambda-closed-form")


def boolean_edge(S: Sequence[int], ell: int, weights: Sequence[RatFunc], psi: PsiFunction = psi_std) -> RatFunc:
    if ell in S:
        raise NotAddable(f"index {ell} already in {tuple(S)}")
    out = ONE
    for j in S:
        out = out * psi(weights[j - 1], weights[ell - 1])
    return out


def boolean_edge_function(E: WeightedPoset, weights: Sequence[RatFunc]) -> EdgeFunction:
    vals = []
    for cv in E.covers:
        S = E.labels[cv.src]
        (ell,) = set(E.labels[cv.dst]) - set(S)
        vals.append(boolean_edge(S, ell, weights))
    return EdgeFunction(E, vals, name="boolean-psi")


# M_psi and product edge functions

BaseValue = RatFunc | Callable[[RatFunc], RatFunc]


def m_psi_table(E: WeightedPoset, psi: PsiFunction, u: RatFunc,
                base_values: Mapping[int, BaseValue] | None = None) -> list[RatFunc]:
    """M_psi(lam; u) for every lam: base value per component, then M(lam u y) = M(lam) psi(y, u)."""
    base_values = dict(base_values or {})
    out: list[RatFunc | None] = [None] * len(E)
    for comp in E.components():
        roots = [r for r in comp if r in base_values]
        if roots:
            r = roots[0]
            b = base_values[r]
            val = b(u) if callable(b) else RatFunc.coerce(b)
        else:
            r = min(i for i in comp if not E.down[i])
            val = ONE
        out[r] = val
        stack = [r]
        while stack:
            a = stack.pop()
            for y, d, _ in E.up[a]:
                if out[d] is None:
                    out[d] = out[a] * psi(y, u)
                    stack.append(d)
            for y, s, _ in E.down[a]:
                if out[s] is None:
                    out[s] = out[a] / psi(y, u)
                    stack.append(s)
    return out  # type: ignore[return-value]


def m_psi(E: WeightedPoset, lam: int, psi: PsiFunction, u: RatFunc,
          base_values: Mapping[int, BaseValue] | None = None) -> RatFunc:
    return m_psi_table(E, psi, u, base_values)[lam]


def check_psi_pair(psi1: PsiFunction, psi2: PsiFunction) -> bool:
    """psi1(x,y)/psi2(y,x) = upsilon(x,y) for generic symbols x, y."""
    x, y = param(5), param(6)
    return psi1(x, y) / psi2(y, x) == upsilon(x, y)


def product_edge(E1: WeightedPoset, c1: EdgeFunction, E2: WeightedPoset, c2: EdgeFunction,
                 psi1: PsiFunction = psi_std, psi2: PsiFunction = psi_std,
                 base1: Mapping[int, BaseValue] | None = None,
                 base2: Mapping[int, BaseValue] | None = None,
                 P: WeightedPoset | None = None) -> EdgeFunction:
    if not check_psi_pair(psi1, psi2):
        raise EdgeError("psi pair does not satisfy the ratio identity")
    if P is None:
        P = product(E1, E2)
    n2 = len(E2)
    tables: dict[tuple[int, RatFunc], list[RatFunc]] = {}

    def table(which: int, u: RatFunc) -> list[RatFunc]:
        key = (which, u)
        if key not in tables:
            E, psi, base = (E2, psi2, base2) if which == 2 else (E1, psi1, base1)
            try:
                tables[key] = m_psi_table(E, psi, u, base)
            except (PoleAtInput, DivisionByZero) as exc:
                raise VeryGeneralPositionViolated(f"M_psi undefined at u={to_string(u)}: {exc}") from None
        return tables[key]

    vals = []
    for cv in P.covers:
        i0, j0 = divmod(cv.src, n2)
        i1, j1 = divmod(cv.dst, n2)
        x = cv.weight
        if j0 == j1:
            m = table(2, x)[j0]
            val = c1(i0, x) * m
        else:
            m = table(1, x)[i0]
            val = c2(j0, x) * m
        if m.is_zero():
            raise VeryGeneralPositionViolated(f"M_psi vanishes at u={to_string(x)}")
        vals.append(val)
    return EdgeFunction(P, vals, name="product")


def gieseker_base(a: RatFunc) -> Callable[[RatFunc], RatFunc]:
    """Normalization M(empty; u) = 1/(1 - a/u) of a twisted partition factor."""
    return lambda u: 1 / (1 - a / u)


def dual_edge(E: WeightedPoset, c: EdgeFunction, Ed: WeightedPoset | None = None) -> EdgeFunction:
    """c_dual(mu^v; theta(x)) = theta(c(lam; x)) where mu = lam u x."""
    if Ed is None:
        Ed = dual(E)
    vals = []
    for cv in Ed.covers:
        # cover mu^v -> lam^v with weight theta(x): the E-cover lam -> mu
        ci = E.cover(cv.dst, rf_theta(cv.weight))
        vals.append(rf_theta(c.values[ci]))
    return EdgeFunction(Ed, vals, name="dual")
