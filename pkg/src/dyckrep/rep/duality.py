"""The anti-involution Theta, the theta-dual module V(E)^*, and its identification with V(E^v).

Words in the generators are products b_1 b_2 ... b_n (b_n acts first).  Letters:

    ("z", k, i)      z_i on level k
    ("T", k, i)      T_i on level k
    ("Tinv", k, i)   T_i^-1 on level k
    ("dp", k)        d_+ from level k to k+1
    ("dm", k)        d_- from level k to k-1
    ("Delta", k, m)  Delta_{p_m} on level k

A linear combination of words is a dict word -> coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..edge import dual_edge
from ..field import ONE, Q, RatFunc, q_power, rf_theta, to_string
from ..posets import dual
from ..report import Report
from .build import Representation, RepError, build_rep
from .rescale import gammas
from .sparse import SparseMatrix

Letter = tuple
Word = tuple[Letter, ...]
LinComb = dict[Word, RatFunc]


class IllTypedWord(ValueError):
    pass


def letter_source(letter: Letter) -> int:
    return letter[1]


def letter_target(letter: Letter) -> int:
    return Representation.target_level(letter)


def _check_letter(letter: Letter) -> None:
    name, k = letter[0], letter[1]
    if name in ("z",) and not 1 <= letter[2] <= k:
        raise IllTypedWord(f"z_{letter[2]} on level {k}")
    if name in ("T", "Tinv") and not 1 <= letter[2] <= k - 1:
        raise IllTypedWord(f"T_{letter[2]} on level {k}")
    if name == "dm" and k < 1:
        raise IllTypedWord("d_- on level 0")
    if name == "Delta" and letter[2] < 1:
        raise IllTypedWord("Delta_{p_m} needs m >= 1")
    if name not in ("z", "T", "Tinv", "dp", "dm", "Delta"):
        raise IllTypedWord(f"unknown letter {letter!r}")


def check_word(word: Word) -> None:
    for letter in word:
        _check_letter(letter)
    for left, right in zip(word, word[1:]):
        if letter_source(left) != letter_target(right):
            raise IllTypedWord(f"{left!r} cannot follow {right!r}: levels do not match")


def _theta_letter(letter: Letter) -> LinComb:
    name, k = letter[0], letter[1]
    if name == "z":
        return {(("z", k, k + 1 - letter[2]),): ONE}
    if name == "T":
        return {(("Tinv", k, k - letter[2]),): ONE}
    if name == "Tinv":
        return {(("T", k, k - letter[2]),): ONE}
    if name == "dm":
        return {(("dp", k - 1),): q_power(-k)}
    if name == "dp":
        return {(("dm", k + 1),): q_power(-(k + 1))}
    if name == "Delta":
        m = letter[2]
        out: LinComb = {(("Delta", k, m),): -ONE}
        for i in range(1, k + 1):
            out[(("z", k, i),) * m] = ONE
        return out
    raise IllTypedWord(f"unknown letter {letter!r}")


def _mul(a: LinComb, b: LinComb) -> LinComb:
    out: LinComb = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            out[w] = out[w] + ca * cb if w in out else ca * cb
    return {w: c for w, c in out.items() if not c.is_zero()}


def normalize(comb: Mapping[Word, RatFunc]) -> LinComb:
    """Merge equal words; z's on one level commute, so runs of z letters are sorted."""
    out: LinComb = {}
    for w, c in comb.items():
        letters, run = [], []
        for letter in w + (None,):
            if letter is not None and letter[0] == "z":
                run.append(letter)
                continue
            letters.extend(sorted(run))
            run = []
            if letter is not None:
                letters.append(letter)
        key = tuple(letters)
        out[key] = out[key] + c if key in out else c
    return {w: c for w, c in out.items() if not c.is_zero()}


def theta_on_words(comb: Mapping[Word, RatFunc] | Word) -> LinComb:
    """Theta(c b_1 ... b_n) = theta(c) Theta(b_n) ... Theta(b_1)."""
    if isinstance(comb, tuple):
        comb = {comb: ONE}
    out: LinComb = {}
    for word, coef in comb.items():
        check_word(word)
        acc: LinComb = {(): rf_theta(coef)}
        for letter in reversed(word):
            acc = _mul(acc, _theta_letter(letter))
        for w, c in acc.items():
            out[w] = out[w] + c if w in out else c
    return normalize(out)


def evaluate_word(rep: Representation, comb: Mapping[Word, RatFunc]) -> SparseMatrix:
    total: SparseMatrix | None = None
    for word, coef in comb.items():
        check_word(word)
        if not word:
            raise IllTypedWord("empty word has no level")
        M = rep.generator(word[-1])
        for letter in reversed(word[:-1]):
            M = rep.generator(letter) @ M
        M = M.scale(coef)
        total = M if total is None else total + M
    if total is None:
        raise IllTypedWord("empty combination")
    return total


# the dual module on the theta-dual basis [lambda; w]^*

def _dual_record(rep: Representation, k: int, j: int) -> tuple:
    ch = rep.bases[k][j]
    content = frozenset((rf_theta(b), -m) for b, m in rep.poset.contents[ch.base])
    return (content, tuple(rf_theta(w) for w in reversed(ch.word)))


def _star_z(rep, k, i) -> SparseMatrix:
    return SparseMatrix.diag(rf_theta(ch.w(k - i + 1)) for ch in rep.bases[k])


def _star_T(rep, k, i) -> SparseMatrix:
    cols = {}
    s = k - i
    for j, ch in enumerate(rep.bases[k]):
        a, b = rf_theta(ch.w(s + 1)), rf_theta(ch.w(s))
        col = {j: (Q - 1) * b / (a - b)}
        w_s, w_n = ch.w(s), ch.w(s + 1)
        if not (w_s == Q * w_n or w_n == Q * w_s):
            word = list(ch.word)
            p = k - s
            word[p], word[p - 1] = word[p - 1], word[p]
            col[rep.find(k, ch.base, tuple(word))] = (Q * a - b) / (a - b)
        cols[j] = col
    return SparseMatrix(rep.dim(k), rep.dim(k), cols)


def _star_dp(rep, k) -> SparseMatrix:
    cols = {}
    scale = q_power(k + 1)
    for j, ch in enumerate(rep.bases[k]):
        col = {}
        for x, mu, _ in rep.poset.down[ch.base]:
            r = rep.find(k + 1, mu, (x,) + ch.word)
            if r is not None:
                col[r] = scale
        cols[j] = col
    return SparseMatrix(rep.dim(k + 1), rep.dim(k), cols)


def _star_dm(rep, k) -> SparseMatrix:
    cols = {}
    scale = q_power(k)
    for j, ch in enumerate(rep.bases[k]):
        r = rep.find(k - 1, ch.base, ch.word[:-1])
        prefix = rep.bases[k - 1][r]
        cols[j] = {r: scale * rf_theta(rep.dplus_coefficient(prefix, ch.word[-1]))}
    return SparseMatrix(rep.dim(k - 1), rep.dim(k), cols)


def dual_module(rep: Representation) -> Representation:
    """V(E)^* on the dual basis, with every operator written down directly."""
    if not rep.complete:
        raise RepError("the dual module needs every level of V(E); build with K >= longest chain")
    out = Representation(rep.poset, rep.edge, rep.K, rep.bases, rep.complete)
    out.name = "dual-basis"
    out.records_override = {k: [_dual_record(rep, k, j) for j in range(rep.dim(k))] for k in range(rep.K + 1)}
    for k in range(rep.K + 1):
        for i in range(1, k + 1):
            out.overrides[("z", k, i)] = _star_z(rep, k, i)
        for i in range(1, k):
            out.overrides[("T", k, i)] = _star_T(rep, k, i)
        out.overrides[("dp", k)] = _star_dp(rep, k) if k < rep.K else SparseMatrix(0, rep.dim(k))
        if k >= 1:
            out.overrides[("dm", k)] = _star_dm(rep, k)
    for k in range(1, rep.K + 1):
        pm = out.dplus(k - 1) @ out.dminus(k)
        mp = out.dminus(k + 1) @ out.dplus(k)
        out.overrides[("phi", k)] = (pm - mp).scale(1 / (Q - 1))
    return out


def theta_transpose(rep: Representation, letter: Letter) -> SparseMatrix:
    """Matrix of `letter` on V(E)^* computed as theta(Mat(Theta(letter)))^T."""
    M = evaluate_word(rep, theta_on_words((letter,)))
    return M.map_entries(rf_theta).transpose()


def check_theta_transpose(rep: Representation, star: Representation) -> Report:
    n = 0
    for k in range(rep.K + 1):
        for key in star.generator_names(k):
            if Representation.target_level(key) > rep.K:
                continue
            a = star.generator(key)
            b = theta_transpose(rep, key)
            n += 1
            diff = a.first_difference(b)
            if diff is not None:
                i, j, v = diff
                return Report(False, "theta_transpose", {"generator": list(key), "row": i, "col": j,
                                                         "residual": to_string(v)})
    return Report(True, "theta_transpose", details={"generators_checked": n})


@dataclass
class DualResult:
    dual_rep: Representation          # V(E^v, c^v) on good chains of E^v
    dual_module: Representation       # V(E)^* on the dual basis
    intertwiner: list[SparseMatrix]   # level maps V(E^v) -> V(E)^*, with the grade factor
    check: Report
    theta_check: Report
    literal_intertwiner: list[SparseMatrix]  # only the level scalars q^(-n_k)
    literal_check: Report


def dual_bijection(rep: Representation, drep: Representation, k: int, j: int) -> int:
    """Index of [mu; w_k, ..., w_1]^* matching the dual chain [lambda^v; theta(w_1), ..., theta(w_k)]."""
    ch = drep.bases[k][j]
    word = tuple(rf_theta(u) for u in reversed(ch.word))
    i = rep.find(k, ch.endpoint, word)
    if i is None:
        raise RepError(f"dual chain {ch.notation(drep.poset)} has no partner")
    return i


def dual_rep(rep: Representation) -> DualResult:
    E = rep.poset
    Ed = dual(E)
    cd = dual_edge(E, rep.edge, Ed)
    drep = build_rep(Ed, cd, rep.K)
    if not drep.complete or any(drep.dim(k) != rep.dim(k) for k in range(rep.K + 1)):
        raise RepError("dual poset has different chain counts")
    star = dual_module(rep)
    literal = dual_intertwiner(rep, drep, grade_factor=False)
    mats = dual_intertwiner(rep, drep, grade_factor=True)
    return DualResult(drep, star, mats, check_intertwiner(drep, star, mats),
                      check_theta_transpose(rep, star), literal, check_intertwiner(drep, star, literal))


def dual_intertwiner(rep: Representation, drep: Representation, grade_factor: bool = True) -> list[SparseMatrix]:
    """b_j -> q^(-n_k) gamma_j^-1 [mu; w]^*, times q^|lambda^v| for the dual base when grade_factor.

    With only the level scalars q^(-n_k) every d_- entry is off by a factor q; the
    dual d_- coefficient carries q^(k-1) inside c(lambda; w), and the grade factor
    absorbs that discrepancy since d_- raises the base grade by one.
    """
    g = gammas(drep)
    mats = []
    for k in range(rep.K + 1):
        # q^(-n_k) = q^(k(k+1)/4) = v^(k(k+1)/2)
        s = q_power(k * (k + 1) // 2)
        cols = {}
        for j, ch in enumerate(drep.bases[k]):
            val = s / g[k][j]
            if grade_factor:
                val = val * Q ** drep.poset.grades[ch.base]
            cols[j] = {dual_bijection(rep, drep, k, j): val}
        mats.append(SparseMatrix(rep.dim(k), drep.dim(k), cols))
    return mats


def check_intertwiner(src: Representation, dst: Representation, mats: list[SparseMatrix]) -> Report:
    n = 0
    K = src.K
    for k in range(K + 1):
        for key in src.generator_names(k) + ([("phi", k)] if k >= 1 else []):
            kt = Representation.target_level(key)
            if kt > K:
                continue
            lhs = mats[kt] @ src.generator(key)
            rhs = dst.generator(key) @ mats[k]
            n += 1
            diff = lhs.first_difference(rhs)
            if diff is not None:
                i, j, v = diff
                return Report(False, "dual_intertwiner", {"generator": list(key), "row": i, "col": j,
                                                          "residual": to_string(v)})
    return Report(True, "dual_intertwiner", details={"checks": n})
