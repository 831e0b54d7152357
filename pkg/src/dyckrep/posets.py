"""Finite weighted posets and the families used to build representations.

An element carries a signed multiset of contents B (RatFunc -> multiplicity);
the weighting is p_m(element) = sum mult * b**m.  Every cover lambda -> mu is
labeled by its addable weight x with B_mu = B_lambda + {x}.  For ordinary
posets all multiplicities are +1; the dual poset negates them, which is how
p_m(lambda^dual) = -theta(p_m(lambda)) is stored without pretending it is a
genuine multiset.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from .field import ONE, Q, T, RatFunc, parse, rf_theta, to_string
from .report import Report


class PosetError(ValueError):
    pass


class InvalidPoset(PosetError):
    pass


class ZeroTwist(PosetError):
    pass


class NotInGeneralPosition(PosetError):
    def __init__(self, report: Report):
        super().__init__(f"posets not in general position: {report.witness}")
        self.report = report


Content = Mapping[RatFunc, int]


def _freeze(content: Mapping[RatFunc, int]) -> frozenset:
    return frozenset((b, m) for b, m in content.items() if m)


def _content_add(content: Mapping[RatFunc, int], x: RatFunc, sign: int = 1) -> dict[RatFunc, int]:
    out = dict(content)
    out[x] = out.get(x, 0) + sign
    if not out[x]:
        del out[x]
    return out


@dataclass(frozen=True)
class Cover:
    src: int
    dst: int
    weight: RatFunc


class WeightedPoset:
    """Immutable finite graded poset with content data; elements are ids 0..n-1."""

    def __init__(self, labels: Sequence[Hashable], contents: Sequence[Mapping[RatFunc, int]],
                 grades: Sequence[int], covers: Iterable[tuple[int, int, RatFunc]], name: str = "poset"):
        self.name = name
        self.labels = tuple(labels)
        self.contents = tuple(_freeze(c) for c in contents)
        self.grades = tuple(grades)
        self.covers = tuple(Cover(s, d, w) for s, d, w in covers)
        n = len(self.labels)
        if not (len(self.contents) == len(self.grades) == n):
            raise InvalidPoset("labels, contents and grades must have equal length")
        self._by_label = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._by_label) != n:
            raise InvalidPoset("duplicate labels")
        self.up: list[list[tuple[RatFunc, int, int]]] = [[] for _ in range(n)]
        self.down: list[list[tuple[RatFunc, int, int]]] = [[] for _ in range(n)]
        self._cover_at: dict[tuple[int, RatFunc], int] = {}
        for ci, cv in enumerate(self.covers):
            self.up[cv.src].append((cv.weight, cv.dst, ci))
            self.down[cv.dst].append((cv.weight, cv.src, ci))
            if (cv.src, cv.weight) in self._cover_at:
                raise InvalidPoset(f"two covers out of {self.labels[cv.src]!r} with weight {cv.weight}")
            self._cover_at[(cv.src, cv.weight)] = ci
        self._by_content = {c: i for i, c in enumerate(self.contents)}
        self._cache: dict[Any, Any] = {}
        self.validate()

    # invariants
    def validate(self) -> None:
        if len(self._by_content) != len(self.labels):
            dup = _first_duplicate(self.contents)
            raise InvalidPoset(f"simple spectrum fails: elements {[self.labels[i] for i in dup]} share contents")
        for cv in self.covers:
            if cv.weight.is_zero():
                raise InvalidPoset("zero cover weight")
            if self.grades[cv.dst] != self.grades[cv.src] + 1:
                raise InvalidPoset(f"cover {self.labels[cv.src]!r}->{self.labels[cv.dst]!r} does not raise grade by 1")
            expect = _freeze(_content_add(dict(self.contents[cv.src]), cv.weight))
            if expect != self.contents[cv.dst]:
                raise InvalidPoset(f"edge condition fails on {self.labels[cv.src]!r}->{self.labels[cv.dst]!r}")

    # queries
    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"WeightedPoset({self.name!r}, {len(self)} elements, {len(self.covers)} covers)"

    def index(self, label: Hashable) -> int:
        return self._by_label[label]

    def element_with_content(self, content: Mapping[RatFunc, int]) -> int | None:
        return self._by_content.get(_freeze(content))

    def content_dict(self, i: int) -> dict[RatFunc, int]:
        return dict(self.contents[i])

    def cover(self, src: int, x: RatFunc) -> int | None:
        """Index of the cover src -> src u x, or None."""
        return self._cover_at.get((src, x))

    def add(self, src: int, x: RatFunc) -> int | None:
        ci = self._cover_at.get((src, x))
        return None if ci is None else self.covers[ci].dst

    def addable_weights(self, lam: int) -> list[tuple[RatFunc, int]]:
        return [(w, d) for w, d, _ in self.up[lam]]

    def minimal_elements(self) -> list[int]:
        return [i for i in range(len(self)) if not self.down[i]]

    def maximal_elements(self) -> list[int]:
        return [i for i in range(len(self)) if not self.up[i]]

    def p(self, lam: int, m: int) -> RatFunc:
        s = RatFunc.coerce(0)
        for b, mult in self.contents[lam]:
            s = s + mult * b ** m
        return s

    def leq(self, a: int, b: int) -> bool:
        if a == b:
            return True
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for _, y, _ in self.up[x]:
                if y == b:
                    return True
                if y not in seen and self.grades[y] < self.grades[b]:
                    seen.add(y)
                    stack.append(y)
        return False

    def is_coideal(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        return all(cv.dst in s for cv in self.covers if cv.src in s)

    def is_ideal(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        return all(cv.src in s for cv in self.covers if cv.dst in s)

    def upset(self, lam: int) -> set[int]:
        out = {lam}
        stack = [lam]
        while stack:
            x = stack.pop()
            for _, y, _ in self.up[x]:
                if y not in out:
                    out.add(y)
                    stack.append(y)
        return out

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in range(len(self)):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for _, y, _ in self.up[x] + self.down[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def label_str(self, i: int) -> str:
        return _label_str(self.labels[i])

    # serialization
    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "elements": [
                {"id": i, "label": self.label_str(i), "grade": self.grades[i],
                 "contents": sorted([to_string(b), m] for b, m in self.contents[i])}
                for i in range(len(self))
            ],
            "covers": [{"src": cv.src, "dst": cv.dst, "weight": to_string(cv.weight)} for cv in self.covers],
        }

    @staticmethod
    def from_json(data: Mapping[str, Any]) -> "WeightedPoset":
        elems = sorted(data["elements"], key=lambda e: e["id"])
        if [e["id"] for e in elems] != list(range(len(elems))):
            raise InvalidPoset("element ids must be 0..n-1")
        return WeightedPoset(
            [e["label"] for e in elems],
            [{parse(b): int(m) for b, m in e["contents"]} for e in elems],
            [int(e["grade"]) for e in elems],
            [(c["src"], c["dst"], parse(c["weight"])) for c in data["covers"]],
            name=data.get("name", "poset"),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _label_str(lab) -> str:
    if isinstance(lab, tuple):
        return "(" + ",".join(_label_str(x) for x in lab) + ")"
    return str(lab)


def _first_duplicate(items):
    seen = {}
    for i, x in enumerate(items):
        if x in seen:
            return (seen[x], i)
        seen[x] = i
    return ()


def _build(labels, contents_of, covers_of, name) -> WeightedPoset:
    """Assemble from label list, content function and cover enumerator."""
    labels = list(labels)
    idx = {lab: i for i, lab in enumerate(labels)}
    contents = [contents_of(lab) for lab in labels]
    grades = [sum(c.values()) for c in contents]
    covers = []
    for lab in labels:
        for x, nxt in covers_of(lab):
            if nxt in idx:
                covers.append((idx[lab], idx[nxt], x))
    return WeightedPoset(labels, contents, grades, covers, name=name)


# partitions

def cell_content(row: int, col: int) -> RatFunc:
    """Content of the cell in row `row`, column `col` (both 1-based): q^(col-1) t^(row-1)."""
    return Q ** (col - 1) * T ** (row - 1)


def partitions_up_to(max_boxes: int, max_rows: int | None = None, max_cols: int | None = None) -> list[tuple[int, ...]]:
    out = []

    def rec(prefix: list[int], remaining: int, cap: int):
        out.append(tuple(prefix))
        if max_rows is not None and len(prefix) >= max_rows:
            return
        for part in range(1, min(cap, remaining) + 1):
            rec(prefix + [part], remaining - part, part)

    cap0 = max_boxes if max_cols is None else min(max_boxes, max_cols)
    rec([], max_boxes, cap0)
    out.sort(key=lambda p: (sum(p), tuple(-x for x in p)))
    return out


def partition_contents(lam: Sequence[int]) -> dict[RatFunc, int]:
    out: dict[RatFunc, int] = {}
    for r, part in enumerate(lam, start=1):
        for c in range(1, part + 1):
            x = cell_content(r, c)
            out[x] = out.get(x, 0) + 1
    return out


def addable_cells(lam: Sequence[int]) -> list[tuple[int, int]]:
    """(row, col) of addable cells, 1-based, top row first."""
    cells = []
    lam = list(lam)
    for r in range(len(lam) + 1):
        cur = lam[r] if r < len(lam) else 0
        above = lam[r - 1] if r > 0 else None
        if above is None or cur < above:
            cells.append((r + 1, cur + 1))
    return cells


def add_cell(lam: Sequence[int], row: int) -> tuple[int, ...]:
    lam = list(lam)
    if row - 1 == len(lam):
        lam.append(1)
    else:
        lam[row - 1] += 1
    return tuple(lam)


def build_partition_ideal(max_boxes: int, max_rows: int | None = None, max_cols: int | None = None) -> WeightedPoset:
    if max_boxes < 0:
        raise PosetError("max_boxes must be nonnegative")
    labels = partitions_up_to(max_boxes, max_rows, max_cols)

    def covers_of(lam):
        return [(cell_content(r, c), add_cell(lam, r)) for r, c in addable_cells(lam)]

    name = f"partitions(max_boxes={max_boxes}"
    if max_rows is not None:
        name += f",max_rows={max_rows}"
    if max_cols is not None:
        name += f",max_cols={max_cols}"
    return _build(labels, partition_contents, covers_of, name + ")")


def build_linear(n: int, x0: RatFunc = ONE) -> WeightedPoset:
    if n < 1:
        raise PosetError("linear poset needs n >= 1")
    x0 = RatFunc.coerce(x0)
    if x0.is_zero():
        raise PosetError("x0 must be nonzero")

    def contents_of(i):
        return {Q ** j * x0: 1 for j in range(i)}

    def covers_of(i):
        return [(Q ** i * x0, i + 1)]

    return _build(range(n), contents_of, covers_of, f"linear(n={n},x0={to_string(x0)})")


def build_boolean(weights: Sequence[RatFunc]) -> WeightedPoset:
    weights = [RatFunc.coerce(w) for w in weights]
    if any(w.is_zero() for w in weights):
        raise PosetError("boolean weights must be nonzero")
    n = len(weights)
    labels = [s for r in range(n + 1) for s in itertools.combinations(range(1, n + 1), r)]

    def contents_of(s):
        out: dict[RatFunc, int] = {}
        for j in s:
            out[weights[j - 1]] = out.get(weights[j - 1], 0) + 1
        return out

    def covers_of(s):
        return [(weights[i - 1], tuple(sorted(s + (i,)))) for i in range(1, n + 1) if i not in s]

    return _build(labels, contents_of, covers_of, f"boolean({','.join(to_string(w) for w in weights)})")


def build_singleton(contents: Iterable[RatFunc] | Mapping[RatFunc, int] = (), label: Hashable = "*") -> WeightedPoset:
    if isinstance(contents, Mapping):
        c = {RatFunc.coerce(b): m for b, m in contents.items()}
    else:
        c = {}
        for b in contents:
            b = RatFunc.coerce(b)
            c[b] = c.get(b, 0) + 1
    return WeightedPoset([label], [c], [sum(c.values())], [], name="singleton")


def twist(E: WeightedPoset, a: RatFunc) -> WeightedPoset:
    a = RatFunc.coerce(a)
    if a.is_zero():
        raise ZeroTwist("twist parameter must be nonzero")
    contents = [{a * b: m for b, m in E.contents[i]} for i in range(len(E))]
    covers = [(cv.src, cv.dst, a * cv.weight) for cv in E.covers]
    return WeightedPoset(E.labels, contents, E.grades, covers, name=f"twist({E.name},{to_string(a)})")


_GP_RATIOS = None


def _gp_ratios() -> frozenset:
    global _GP_RATIOS
    if _GP_RATIOS is None:
        qt = Q * T
        _GP_RATIOS = frozenset([ONE, Q, 1 / Q, T, 1 / T, qt, 1 / qt])
    return _GP_RATIOS


def cover_weights(E: WeightedPoset) -> list[RatFunc]:
    seen: dict[RatFunc, None] = {}
    for cv in E.covers:
        seen.setdefault(cv.weight, None)
    return list(seen)


def check_general_position(E1: WeightedPoset, E2: WeightedPoset) -> Report:
    bad = _gp_ratios()
    for z1 in cover_weights(E1):
        for z2 in cover_weights(E2):
            r = z1 / z2
            if r in bad:
                return Report(False, "general_position", {"clause": 1, "z1": to_string(z1), "z2": to_string(z2),
                                                          "ratio": to_string(r)})
    seen: dict[frozenset, tuple[int, int]] = {}
    for i in range(len(E1)):
        for j in range(len(E2)):
            key = _freeze(_merge(E1.contents[i], E2.contents[j]))
            if key in seen:
                a, b = seen[key]
                return Report(False, "general_position",
                              {"clause": 2, "pair1": [E1.label_str(a), E2.label_str(b)],
                               "pair2": [E1.label_str(i), E2.label_str(j)]})
            seen[key] = (i, j)
    return Report(True, "general_position")


def _merge(c1, c2) -> dict[RatFunc, int]:
    out: dict[RatFunc, int] = {}
    for b, m in itertools.chain(c1, c2):
        out[b] = out.get(b, 0) + m
    return {b: m for b, m in out.items() if m}


def product(E1: WeightedPoset, E2: WeightedPoset) -> WeightedPoset:
    rep = check_general_position(E1, E2)
    if not rep.ok:
        raise NotInGeneralPosition(rep)
    n2 = len(E2)
    labels = [(a, b) for a in E1.labels for b in E2.labels]
    contents = [_merge(E1.contents[i], E2.contents[j]) for i in range(len(E1)) for j in range(n2)]
    grades = [E1.grades[i] + E2.grades[j] for i in range(len(E1)) for j in range(n2)]
    covers = []
    for cv in E1.covers:
        for j in range(n2):
            covers.append((cv.src * n2 + j, cv.dst * n2 + j, cv.weight))
    for i in range(len(E1)):
        for cv in E2.covers:
            covers.append((i * n2 + cv.src, i * n2 + cv.dst, cv.weight))
    return WeightedPoset(labels, contents, grades, covers, name=f"product({E1.name},{E2.name})")


def product_factor_cover(E1: WeightedPoset, E2: WeightedPoset, P: WeightedPoset, ci: int) -> tuple[int, int, int, int]:
    """For a cover of P = product(E1, E2): (factor, lam, mu, weight-source) as ids in the factors."""
    cv = P.covers[ci]
    n2 = len(E2)
    i0, j0 = divmod(cv.src, n2)
    i1, j1 = divmod(cv.dst, n2)
    if j0 == j1:
        return (1, i0, j0, i1)
    return (2, i0, j0, j1)


def dual(E: WeightedPoset) -> WeightedPoset:
    contents = [{rf_theta(b): -m for b, m in E.contents[i]} for i in range(len(E))]
    grades = [-g for g in E.grades]
    covers = [(cv.dst, cv.src, rf_theta(cv.weight)) for cv in E.covers]
    return WeightedPoset(E.labels, contents, grades, covers, name=f"dual({E.name})")


# excellence

def check_excellent(E: WeightedPoset) -> Report:
    qt = Q * T
    for lam in range(len(E)):
        for x, nu, _ in E.up[lam]:
            for y, rho, _ in E.up[nu]:
                if y == x or y == qt * x or y * qt == x:
                    return Report(False, "excellent", {"base": E.label_str(lam), "x": to_string(x),
                                                       "y": to_string(y), "clause": 1})
                nu2 = E.add(lam, y)
                swapped = nu2 is not None and E.add(nu2, x) == rho
                hits = [y == Q * x, y == T * x, swapped]
                if sum(hits) != 1:
                    return Report(False, "excellent", {"base": E.label_str(lam), "x": to_string(x),
                                                       "y": to_string(y), "clause": 2,
                                                       "conditions": {"y=qx": hits[0], "y=tx": hits[1],
                                                                      "swapped_chain": hits[2]}})
    return Report(True, "excellent")


def is_excellent(E: WeightedPoset) -> bool:
    return check_excellent(E).ok


def addable_weights(E: WeightedPoset, lam: int) -> list[tuple[RatFunc, int]]:
    return E.addable_weights(lam)


# maps between posets

@dataclass
class PosetMap:
    """Partial map source -> target; a missing/None value is the added top element 0."""

    source: WeightedPoset
    target: WeightedPoset
    mapping: dict[int, int | None]

    def __call__(self, lam: int) -> int | None:
        return self.mapping.get(lam)

    def check(self) -> Report:
        E, Ep, F = self.source, self.target, self.mapping
        zero = {lam for lam in range(len(E)) if F.get(lam) is None}
        for cv in E.covers:
            if cv.src in zero and cv.dst not in zero:
                return Report(False, "poset_map", {"condition": 1, "lambda": E.label_str(cv.src),
                                                   "mu": E.label_str(cv.dst)})
        image = {F[lam] for lam in range(len(E)) if F.get(lam) is not None}
        for cv in Ep.covers:
            if cv.src in image and cv.dst not in image:
                return Report(False, "poset_map", {"condition": 2, "lambda'": Ep.label_str(cv.src),
                                                   "mu'": Ep.label_str(cv.dst)})
        for lam in range(len(E)):
            if F.get(lam) is not None and E.contents[lam] != Ep.contents[F[lam]]:
                return Report(False, "poset_map", {"condition": 3, "lambda": E.label_str(lam)})
        for cv in E.covers:
            if F.get(cv.dst) is None:
                continue
            if Ep.add(F[cv.src], cv.weight) != F[cv.dst]:
                return Report(False, "poset_map", {"condition": 4, "lambda": E.label_str(cv.src),
                                                   "mu": E.label_str(cv.dst)})
        pre: dict[int, list[int]] = {}
        for lam in range(len(E)):
            if F.get(lam) is not None:
                pre.setdefault(F[lam], []).append(lam)
        for cv in Ep.covers:
            for lam in pre.get(cv.src, ()):
                for mu in pre.get(cv.dst, ()):
                    if E.add(lam, cv.weight) != mu:
                        return Report(False, "poset_map", {"condition": 5, "lambda": E.label_str(lam),
                                                           "mu": E.label_str(mu)})
        return Report(True, "poset_map")


def ideal_quotient_map(E: WeightedPoset, I: WeightedPoset) -> PosetMap:
    """E -> I sending each element with the same contents to its copy in I, the rest to 0."""
    mapping = {lam: I.element_with_content(dict(E.contents[lam])) for lam in range(len(E))}
    return PosetMap(E, I, mapping)


def identity_map(E: WeightedPoset) -> PosetMap:
    return PosetMap(E, E, {i: i for i in range(len(E))})


def iter_two_chains(E: WeightedPoset) -> Iterator[tuple[int, RatFunc, RatFunc]]:
    for lam in range(len(E)):
        for x, nu, _ in E.up[lam]:
            for y, _, _ in E.up[nu]:
                yield lam, x, y


def isomorphic(E1: WeightedPoset, E2: WeightedPoset) -> Report:
    """Weight-preserving isomorphism test; elements are matched by their contents."""
    if len(E1) != len(E2) or len(E1.covers) != len(E2.covers):
        return Report(False, "isomorphic", {"sizes": [len(E1), len(E2), len(E1.covers), len(E2.covers)]})
    match = {}
    for i in range(len(E1)):
        j = E2.element_with_content(dict(E1.contents[i]))
        if j is None:
            return Report(False, "isomorphic", {"unmatched": E1.label_str(i)})
        match[i] = j
    for cv in E1.covers:
        if E2.add(match[cv.src], cv.weight) != match[cv.dst]:
            return Report(False, "isomorphic", {"cover": [E1.label_str(cv.src), to_string(cv.weight)]})
    return Report(True, "isomorphic", details={"matching": {E1.label_str(i): E2.label_str(j) for i, j in match.items()}})
