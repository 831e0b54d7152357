"""The rescaled basis gamma(lambda; w) [lambda; w], in which d_+ has all coefficients 1."""

from __future__ import annotations

from ..field import ONE, Q, T, RatFunc, to_string
from ..report import Report
from .build import Representation, rebase_diagonal


def gamma(rep: Representation, k: int, j: int) -> RatFunc:
    """Product of the d_+ coefficients along the chain, starting from its base."""
    ch = rep.bases[k][j]
    g = ONE
    for step in range(k):
        prefix = rep.bases[step][rep.find(step, ch.base, ch.word[:step])]
        g = g * rep.dplus_coefficient(prefix, ch.word[step])
    return g


def gammas(rep: Representation) -> list[list[RatFunc]]:
    return [[gamma(rep, k, j) for j in range(rep.dim(k))] for k in range(rep.K + 1)]


def rescale(rep: Representation) -> Representation:
    g = gammas(rep)
    out = rebase_diagonal(rep, g, name="rescaled")
    out.gamma = g
    return out


def unrescale(rescaled: Representation) -> Representation:
    g = rescaled.gamma
    return rebase_diagonal(rescaled, [[x.inverse() for x in lvl] for lvl in g], name="unrescaled")


def rescaled_dminus_coefficient(rep: Representation, k: int, j: int) -> RatFunc:
    """q^(k-1) c(lambda; w_k) prod_{i<k} (w_i - t w_k)/(w_i - qt w_k)."""
    ch = rep.bases[k][j]
    wk = ch.w(k)
    val = Q ** (k - 1) * rep.edge(ch.base, wk)
    for i in range(1, k):
        wi = ch.w(i)
        val = val * (wi - T * wk) / (wi - Q * T * wk)
    return val


def check_rescaled_form(res: Representation) -> Report:
    """d_+ entries are 1, d_- and the T off-diagonal entries match their closed forms."""
    for k in range(res.K + 1):
        if k < res.K:
            for i, j, v in res.dplus(k).entries():
                if not v.is_one():
                    return Report(False, "rescaled_form", {"operator": "d+", "level": k, "col": j,
                                                           "value": to_string(v)})
        if k >= 1:
            for i, j, v in res.dminus(k).entries():
                want = rescaled_dminus_coefficient(res, k, j)
                if v != want:
                    return Report(False, "rescaled_form", {"operator": "d-", "level": k, "col": j,
                                                           "value": to_string(v), "expected": to_string(want)})
        for s in range(1, k):
            for i, j, v in res.T(k, s).entries():
                if i == j:
                    continue
                ch = res.bases[k][j]
                wi, wn = ch.w(s), ch.w(s + 1)
                want = (Q * wi - wn) / (wi - wn)
                if v != want:
                    return Report(False, "rescaled_form", {"operator": f"T_{s}", "level": k, "col": j,
                                                           "value": to_string(v), "expected": to_string(want)})
    return Report(True, "rescaled_form")
