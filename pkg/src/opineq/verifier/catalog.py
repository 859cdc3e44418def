"""The inequality catalog.

Each :class:`InequalityCase` knows how to draw instances satisfying its
hypothesis from a block of uniforms, how to re-check that hypothesis, and
which ordered pairs ``lhs <= rhs`` make up its claim.  Matrix pairs are
compared in the Loewner order, scalar pairs by signed margin.

Cases flagged ``review`` are reported but never fail a run: they are
statements whose printed form is known (or suspected) not to hold in
general, kept so that their counterexamples stay visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import scalar_bounds as sb
from ..matrix.linalg import mat_pow, symmetrize
from ..matrix.maps import PositiveLinearMap, phi_apply
from ..matrix.means import (
    congruence_parts,
    mean_bang,
    mean_heinz,
    mean_nabla,
    mean_natural,
    mean_sharp,
    spd_inverse,
)
from ..scalar_analysis import C_VALUE, X_CAP, X_FLOOR
from . import generators as gen

__all__ = ["InequalityCase", "CASES", "MATRIX_IDS", "SCALAR_IDS", "get_case"]

HYP_TOL = 1e-10


@dataclass(frozen=True)
class InequalityCase:
    id: str
    kind: str  # "matrix" or "scalar"
    statement: str
    hypothesis: str
    draws: Callable[[int], int]
    build: Callable  # (uniforms, n, cfg) -> instance dict
    prepare: Callable  # instance -> instance with derived quantities
    predicate: Callable  # instance -> bool array
    pairs: Callable  # instance -> [(label, lhs, rhs), ...]
    review: bool = False
    printed_products: tuple[str, ...] = field(default=())


def _col(w):
    return np.asarray(w, dtype=float)[..., None, None]


def _lin(u, lo, hi):
    return lo + u * (hi - lo)


def _logu(u, lo, hi):
    return np.exp(np.log(lo) + u * (np.log(hi) - np.log(lo)))


def _identity(inst):
    return inst


def _always(inst):
    return np.ones(np.shape(inst["v"]), dtype=bool)


def _weights(u, cfg):
    return _lin(u, *cfg.v_range)


# --------------------------------------------------------------------------
# matrix instance builders


def _build_ratio_thm_b(u, n, cfg):
    """Ratio spectrum in [h', h] with h <= 1; about 5% of trials use h = 1."""
    d = gen.draws_ratio(n)
    uh, uhp, ub, uv = u[:, d], u[:, d + 1], u[:, d + 2], u[:, d + 3]
    h = np.where(ub < cfg.boundary_rate, 1.0, _logu(uh, 0.01, 1.0))
    hp = h * _logu(uhp, 0.01, 1.0)
    A, B = gen.ratio_pairs(u[:, :d], n, cfg, hp, h)
    return {"A": A, "B": B, "v": _weights(uv, cfg)}


def _draws_ratio_thm_b(n):
    return gen.draws_ratio(n) + 4


def _ratio_spectrum(inst):
    if "h" not in inst:
        _, _, X = congruence_parts(inst["A"], inst["B"])
        lam = np.linalg.eigvalsh(X)
        inst = dict(inst, hp=lam[..., 0], h=lam[..., -1])
    return inst


def _pred_thm_b(inst):
    return inst["h"] <= 1.0 + 1e-12


def _build_ordered(u, n, cfg):
    d = gen.draws_ordered(n)
    A, B = gen.ordered_pairs(u[:, :d], n, cfg)
    return {"A": A, "B": B, "v": _weights(u[:, d], cfg)}


def _build_reverse_ordered(u, n, cfg):
    inst = _build_ordered(u, n, cfg)
    inst["A"], inst["B"] = inst["B"], inst["A"]
    return inst


def _draws_plus(base, extra=1):
    return lambda n: base(n) + extra


def _pred_a_le_b(inst):
    return _leq(inst["A"], inst["B"])


def _pred_b_le_a(inst):
    return _leq(inst["B"], inst["A"])


def _leq(X, Y, tol=HYP_TOL):
    lam = np.linalg.eigvalsh(symmetrize(Y - X))
    scale = 1.0 + np.abs(lam).max(axis=-1) + np.abs(X).max(axis=(-1, -2))
    return lam[..., 0] >= -tol * scale


def _build_free(u, n, cfg):
    d = gen.draws_free(n)
    A, B = gen.free_pairs(u[:, :d], n, cfg)
    return {"A": A, "B": B, "v": _weights(u[:, d], cfg)}


def _levels(u, cfg):
    lo, hi = cfg.level_range
    lv = np.sort(_logu(u[:, :4], lo, hi), axis=1)
    touch = u[:, 4] < cfg.boundary_rate
    mid = np.sqrt(lv[:, 1] * lv[:, 2])
    lv[touch, 1] = mid[touch]
    lv[touch, 2] = mid[touch]
    return lv


def _build_sandwich(u, n, cfg):
    d = gen.draws_sandwich(n)
    lv = _levels(u[:, d:d + 5], cfg)
    A, B = gen.sandwich_pairs(u[:, :d], n, lv[:, 0], lv[:, 1], lv[:, 2], lv[:, 3])
    return {"A": A, "B": B, "v": _weights(u[:, d + 5], cfg),
            "alpha_p": lv[:, 0], "alpha": lv[:, 1], "beta": lv[:, 2], "beta_p": lv[:, 3]}


def _draws_sandwich(n):
    return gen.draws_sandwich(n) + 6


def _sandwich_prepare(inst):
    if "alpha" not in inst:
        lb = np.linalg.eigvalsh(inst["B"])
        la = np.linalg.eigvalsh(inst["A"])
        inst = dict(inst, alpha_p=lb[..., 0], alpha=lb[..., -1], beta=la[..., 0], beta_p=la[..., -1])
    return dict(inst, h=inst["alpha"] / inst["beta"], hp=inst["alpha_p"] / inst["beta_p"])


def _pred_sandwich(inst):
    lb = np.linalg.eigvalsh(symmetrize(inst["B"]))
    la = np.linalg.eigvalsh(symmetrize(inst["A"]))
    eps = HYP_TOL
    ok = lb[..., 0] >= inst["alpha_p"] * (1 - eps)
    ok &= lb[..., -1] <= inst["alpha"] * (1 + eps)
    ok &= la[..., 0] >= inst["beta"] * (1 - eps)
    ok &= la[..., -1] <= inst["beta_p"] * (1 + eps)
    ok &= (inst["alpha_p"] > 0) & (inst["alpha"] <= inst["beta"] * (1 + eps))
    return ok


def _build_sandwich_maps(u, n, cfg):
    d = _draws_sandwich(n)
    inst = _build_sandwich(u[:, :d], n, cfg)
    Q = gen.random_orthogonal(u[:, d:d + gen.n_angles(n)], n)
    inst["V"] = Q[:, :, : max(1, n // 2)]
    return inst


def _draws_sandwich_maps(n):
    return _draws_sandwich(n) + gen.n_angles(n)


def _build_bang_b(u, n, cfg):
    d = gen.draws_ratio(n)
    A, B = gen.ratio_pairs(u[:, :d], n, cfg, C_VALUE, 1.0)
    return {"A": A, "B": B, "v": _weights(u[:, d], cfg)}


def _pred_bang_b(inst):
    return _leq(C_VALUE * inst["A"], inst["B"]) & _leq(inst["B"], inst["A"])


# --------------------------------------------------------------------------
# matrix claims


def _asym(X):
    scale = 1.0 + np.abs(X).max(axis=(-1, -2))
    return np.abs(X - np.swapaxes(X, -1, -2)).max(axis=(-1, -2)) / scale


def _pairs_thm_b(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    S, N = mean_sharp(v, A, B), mean_nabla(v, A, B)
    return [
        ("m_v(h) A#_vB <= A nabla_v B", _col(sb.m_factor(v, inst["h"])) * S, N),
        ("A nabla_v B <= M_v(h') A#_vB", N, _col(sb.M_factor(v, inst["hp"])) * S),
    ]


def _tha_terms(A, B, v):
    """Lower and upper refinement terms, evaluated literally as products."""
    n = A.shape[-1]
    root, _, X = congruence_parts(A, B)
    S = mean_sharp(v, A, B)
    Ainv = spd_inverse(A)
    nat = mean_natural(np.asarray(v) - 1.0, A, B)
    vc = _col(v)
    lower = vc * (B - A) @ Ainv @ ((A - nat) / 2.0) + S
    mid_pow = mat_pow(0.5 * (np.eye(n) + X), np.asarray(v) - 1.0)
    upper = vc * (B - A) @ Ainv @ (A - root @ mid_pow @ root) + S
    return S, lower, upper


def _pairs_tha(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    S, lower, upper = _tha_terms(A, B, v)
    inst["_asymmetry"] = np.maximum(_asym(lower), _asym(upper))
    lower, upper = symmetrize(lower), symmetrize(upper)
    N = mean_nabla(v, A, B)
    return [
        ("A#_vB <= lower refinement", S, lower),
        ("lower refinement <= A nabla_v B", lower, N),
        ("A nabla_v B <= upper reverse", N, upper),
    ]


def _pairs_harmonic_chain(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    Ai, Bi = spd_inverse(A), spd_inverse(B)
    Si, mid, _ = _tha_terms(Ai, Bi, v)
    inst["_asymmetry"] = _asym(mid)
    mid = symmetrize(mid)
    mid_inv = spd_inverse(mid)
    return [
        ("A^-1 #_v B^-1 <= middle", Si, mid),
        ("middle <= A^-1 nabla_v B^-1", mid, mean_nabla(v, Ai, Bi)),
        ("A !_v B <= middle^-1", mean_bang(v, A, B), mid_inv),
        ("middle^-1 <= A #_v B", mid_inv, mean_sharp(v, A, B)),
    ]


def _pairs_km(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    r, R = _col(np.minimum(v, 1 - v)), _col(np.maximum(v, 1 - v))
    S, N = mean_sharp(v, A, B), mean_nabla(v, A, B)
    gap = A + B - 2.0 * mean_sharp(0.5, A, B)
    return [
        ("r(A+B-2A#B) + A#_vB <= A nabla_v B", r * gap + S, N),
        ("A nabla_v B <= R(A+B-2A#B) + A#_vB", N, R * gap + S),
    ]


def _pairs_zou(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    r = np.minimum(v, 1 - v)
    S, N = mean_sharp(v, A, B), mean_nabla(v, A, B)
    return [("K(h)^r A#_vB <= A nabla_v B", _col(sb.kantorovich(inst["h"]) ** r) * S, N)]


def _pairs_liao(which):
    def pairs(inst):
        A, B, v = inst["A"], inst["B"], inst["v"]
        R = np.maximum(v, 1 - v)
        S, N = mean_sharp(v, A, B), mean_nabla(v, A, B)
        k = sb.kantorovich(inst[which]) ** R
        label = "h" if which == "h" else "h'"
        return [(f"A nabla_v B <= K({label})^R A#_vB", N, _col(k) * S)]
    return pairs


def _pairs_heinz(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    return [("H_v(A,B) <= A nabla B", mean_heinz(v, A, B), mean_nabla(0.5, A, B))]


def _pairs_heinz_reverse(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    k = np.sqrt(sb.M_factor(v, inst["hp"] ** 2))
    return [("A nabla B <= sqrt(M_v(h'^2)) H_v(A,B)", mean_nabla(0.5, A, B),
             _col(k) * mean_heinz(v, A, B))]


def _pairs_harmonic_sandwich(swap):
    def pairs(inst):
        A, B, v = inst["A"], inst["B"], inst["v"]
        w = 1.0 - np.asarray(v) if swap else np.asarray(v)
        H, S = mean_bang(v, A, B), mean_sharp(v, A, B)
        tag = "1-v" if swap else "v"
        return [
            (f"m_{tag}(h) A!_vB <= A#_vB", _col(sb.m_factor(w, inst["h"])) * H, S),
            (f"A#_vB <= M_{tag}(h') A!_vB", S, _col(sb.M_factor(w, inst["hp"])) * H),
        ]
    return pairs


def _pairs_bang_b(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    S, H = mean_sharp(v, A, B), mean_bang(v, A, B)
    return [("(A#_vB + B)/2 <= A!_vB", 0.5 * (S + B), H), ("A!_vB <= A#_vB", H, S)]


def _pairs_bang_power(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    n = A.shape[-1]
    root, iroot, X = congruence_parts(A, B)
    P = B @ iroot @ mat_pow(0.5 * (X + np.eye(n)), np.asarray(v) - 1.0) @ root
    inst["_asymmetry"] = _asym(P)
    H, S = mean_bang(v, A, B), mean_sharp(v, A, B)
    return [("B A^-1/2 ((X+I)/2)^(v-1) A^1/2 <= A!_vB", symmetrize(P), H), ("A!_vB <= A#_vB", H, S)]


def _maps_for(inst):
    n = inst["A"].shape[-1]
    half = n // 2
    return [
        ("trace", PositiveLinearMap.normalized_trace(n)),
        ("pinching", PositiveLinearMap.pinching([range(0, half), range(half, n)])),
        ("compression", PositiveLinearMap.compression(inst["V"])),
    ]


def _sq(X):
    X = symmetrize(X)
    return symmetrize(X @ X)


def _cor_factor(inst):
    v = inst["v"]
    return _col((sb.kantorovich(inst["hp"]) / sb.m_factor(v, inst["h"])) ** 2)


def _pairs_cor_a4(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    k = _cor_factor(inst)
    S, N = mean_sharp(v, A, B), mean_nabla(v, A, B)
    out = []
    for name, phi in _maps_for(inst):
        out.append((f"[{name}] Phi(A nabla_v B)^2 <= c Phi(A#_vB)^2",
                    _sq(phi_apply(phi, N)), k * _sq(phi_apply(phi, S))))
    return out


def _pairs_cor_a5(inst):
    A, B, v = inst["A"], inst["B"], inst["v"]
    k = _cor_factor(inst)
    N = mean_nabla(v, A, B)
    out = []
    for name, phi in _maps_for(inst):
        G = mean_sharp(v, phi_apply(phi, A), phi_apply(phi, B))
        out.append((f"[{name}] Phi(A nabla_v B)^2 <= c (Phi(A) #_v Phi(B))^2",
                    _sq(phi_apply(phi, N)), k * _sq(G)))
    return out


def _m(id, statement, hypothesis, draws, build, prepare, predicate, pairs, review=False,
       printed=()):
    return InequalityCase(id, "matrix", statement, hypothesis, draws, build, prepare,
                          predicate, pairs, review, tuple(printed))


_MATRIX_CASES = [
    _m("THM_B_CHAIN", "m_v(h) A#_vB <= A nabla_v B <= M_v(h') A#_vB",
       "h' I <= A^-1/2 B A^-1/2 <= h I <= I",
       _draws_ratio_thm_b, _build_ratio_thm_b, _ratio_spectrum, _pred_thm_b, _pairs_thm_b),
    _m("PROP_THA_CHAIN",
       "A#_vB <= v(B-A)A^-1(A - A nat_(v-1) B)/2 + A#_vB <= A nabla_v B "
       "<= v(B-A)A^-1(A - A^1/2((I+X)/2)^(v-1)A^1/2) + A#_vB",
       "0 < A <= B", _draws_plus(gen.draws_ordered), _build_ordered, _identity,
       _pred_a_le_b, _pairs_tha, printed=("lower", "upper")),
    _m("REMARK_HARMONIC_CHAIN",
       "A!_vB <= (refined middle term for A^-1, B^-1)^-1 <= A#_vB",
       "0 < B <= A (so that A^-1 <= B^-1)", _draws_plus(gen.draws_ordered),
       _build_reverse_ordered, _identity, _pred_b_le_a, _pairs_harmonic_chain,
       printed=("middle",)),
    _m("KM_K1", "r(A+B-2A#B) + A#_vB <= A nabla_v B <= R(A+B-2A#B) + A#_vB",
       "A, B > 0", _draws_plus(gen.draws_free), _build_free, _identity, _always, _pairs_km),
    _m("ZOU", "K(h)^r A#_vB <= A nabla_v B, h = alpha/beta",
       "alpha' I <= B <= alpha I <= beta I <= A <= beta' I",
       _draws_sandwich, _build_sandwich, _sandwich_prepare, _pred_sandwich, _pairs_zou),
    _m("LIAO", "A nabla_v B <= K(h)^R A#_vB, h = alpha/beta",
       "alpha' I <= B <= alpha I <= beta I <= A <= beta' I",
       _draws_sandwich, _build_sandwich, _sandwich_prepare, _pred_sandwich,
       _pairs_liao("h"), review=True),
    _m("LIAO_GLOBAL", "A nabla_v B <= K(h')^R A#_vB, h' = alpha'/beta'",
       "alpha' I <= B <= alpha I <= beta I <= A <= beta' I",
       _draws_sandwich, _build_sandwich, _sandwich_prepare, _pred_sandwich, _pairs_liao("hp")),
    _m("HEINZ", "H_v(A,B) <= A nabla B", "A, B > 0",
       _draws_plus(gen.draws_free), _build_free, _identity, _always, _pairs_heinz),
    _m("HEINZ_REVERSE", "A nabla B <= sqrt(M_v(h'^2)) H_v(A,B)",
       "h' I <= A^-1/2 B A^-1/2 <= h I <= I",
       _draws_ratio_thm_b, _build_ratio_thm_b, _ratio_spectrum, _pred_thm_b,
       _pairs_heinz_reverse, review=True),
    _m("HARMONIC_SANDWICH", "m_v(h) A!_vB <= A#_vB <= M_v(h') A!_vB",
       "h' I <= A^-1/2 B A^-1/2 <= h I <= I",
       _draws_ratio_thm_b, _build_ratio_thm_b, _ratio_spectrum, _pred_thm_b,
       _pairs_harmonic_sandwich(False), review=True),
    _m("HARMONIC_SANDWICH_SWAPPED", "m_(1-v)(h) A!_vB <= A#_vB <= M_(1-v)(h') A!_vB",
       "h' I <= A^-1/2 B A^-1/2 <= h I <= I",
       _draws_ratio_thm_b, _build_ratio_thm_b, _ratio_spectrum, _pred_thm_b,
       _pairs_harmonic_sandwich(True)),
    _m("REMARK_BANG_B", "(A#_vB + B)/2 <= A!_vB <= A#_vB",
       "0 < cA <= B <= A, c = 127/625", _draws_plus(gen.draws_ratio), _build_bang_b,
       _identity, _pred_bang_b, _pairs_bang_b),
    _m("REMARK_BANG_POWER", "B A^-1/2 ((A^-1/2 B A^-1/2 + I)/2)^(v-1) A^1/2 <= A!_vB <= A#_vB",
       "0 < B <= A", _draws_plus(gen.draws_ordered), _build_reverse_ordered, _identity,
       _pred_b_le_a, _pairs_bang_power, printed=("lhs",)),
    _m("COR_A4", "Phi(A nabla_v B)^2 <= (K(h')/m_v(h))^2 Phi(A#_vB)^2",
       "alpha' I <= B <= alpha I <= beta I <= A <= beta' I; Phi unital positive",
       _draws_sandwich_maps, _build_sandwich_maps, _sandwich_prepare, _pred_sandwich,
       _pairs_cor_a4),
    _m("COR_A5", "Phi(A nabla_v B)^2 <= (K(h')/m_v(h))^2 (Phi(A) #_v Phi(B))^2",
       "alpha' I <= B <= alpha I <= beta I <= A <= beta' I; Phi unital positive",
       _draws_sandwich_maps, _build_sandwich_maps, _sandwich_prepare, _pred_sandwich,
       _pairs_cor_a5),
]


# --------------------------------------------------------------------------
# scalar claims; every sampler draws directly inside the claim's domain


def _v(u):
    return u


def _x_ge1(u):
    return _logu(u, 1.0, X_CAP)


def _x_le1(u):
    return _logu(u, X_FLOOR, 1.0)


def _s(id, statement, hypothesis, ndraw, build, pred, pairs):
    def build_(u, n, cfg, _b=build):
        return _b(u, cfg)

    return InequalityCase(id, "scalar", statement, hypothesis, lambda n: ndraw, build_,
                          _identity, pred, pairs)


def _in(inst, key, lo, hi):
    x = inst[key]
    return (x >= lo) & (x <= hi)


def _young_build(u, cfg):
    return {"v": _weights(u[:, 0], cfg), "a": _logu(u[:, 1], X_FLOOR, X_CAP),
            "b": _logu(u[:, 2], X_FLOOR, X_CAP)}


def _young_pairs(inst):
    v, a, b = inst["v"], inst["a"], inst["b"]
    h, g, ar = sb.mean_harm(v, a, b), sb.mean_geom(v, a, b), sb.mean_arith(v, a, b)
    return [("harm <= geom", h, g), ("geom <= arith", g, ar)]


def _km_pairs(inst):
    v, a, b = inst["v"], inst["a"], inst["b"]
    r, R = np.minimum(v, 1 - v), np.maximum(v, 1 - v)
    gap = sb.km_gap(a, b)
    g, ar = sb.mean_geom(v, a, b), sb.mean_arith(v, a, b)
    return [("r gap + geom <= arith", r * gap + g, ar), ("arith <= R gap + geom", ar, R * gap + g)]


def _vx_build(xmap):
    return lambda u, cfg: {"v": _weights(u[:, 0], cfg), "x": xmap(u[:, 1])}


def _mult_pairs(inst):
    v, x = inst["v"], inst["x"]
    y, xv = (1 - v) + v * x, sb.ppow(x, v)
    return [("m_v(x) x^v <= (1-v)+vx", sb.m_factor(v, x) * xv, y),
            ("(1-v)+vx <= M_v(x) x^v", y, sb.M_factor(v, x) * xv)]


def _add_pairs(inst):
    v, x = inst["v"], inst["x"]
    y, xv = (1 - v) + v * x, sb.ppow(x, v)
    lo = v * (x - 1) * (1 - sb.ppow(x, v - 1)) / 2 + xv
    hi = v * (x - 1) * (1 - sb.ppow((1 + x) / 2, v - 1)) + xv
    return [("midpoint bound <= (1-v)+vx", lo, y), ("(1-v)+vx <= endpoint bound", y, hi)]


def _factor_order_pairs(inst):
    v, x = inst["v"], inst["x"]
    m, M = sb.m_factor(v, x), sb.M_factor(v, x)
    return [("1 <= m_v(x)", np.ones_like(m), m), ("m_v(x) <= M_v(x)", m, M)]


def _thm_c_build(xmap, rsign):
    def build(u, cfg):
        lo, hi = cfg.r_range
        r = _lin(u[:, 2], 0.0, hi) if rsign > 0 else _lin(u[:, 2], lo, 0.0)
        return {"v": _weights(u[:, 0], cfg), "x": xmap(u[:, 1]), "r": r}
    return build


def _thm_c_pairs(g_first):
    def pairs(inst):
        r, v, x = inst["r"], inst["v"], inst["x"]
        g, G, F = sb.g_norm(r, v, x), sb.G_norm(r, v, x), sb.heron_normalized(r, v, x)
        if g_first:
            return [("g <= F", g, F), ("F <= G", F, G)]
        return [("G <= F", G, F), ("F <= g", F, g)]
    return pairs


def _thm_c_pred(x_ge1, r_pos):
    def pred(inst):
        x_ok = inst["x"] >= 1.0 if x_ge1 else (inst["x"] > 0) & (inst["x"] <= 1.0)
        r_ok = inst["r"] >= 0.0 if r_pos else inst["r"] <= 0.0
        return x_ok & r_ok
    return pred


def _prop_build(tmap, rlo=0.0, rhi=1.0):
    return lambda u, cfg: {"v": _weights(u[:, 0], cfg), "t": tmap(u[:, 1]),
                           "r": _lin(u[:, 2], rlo, rhi)}


def _p42(inst):
    r, v, t = inst["r"], inst["v"], inst["t"]
    return [("harm <= g", sb.harm_norm(v, t), sb.g_norm(r, v, t))]


def _p43(inst):
    r, v, t = inst["r"], inst["v"], inst["t"]
    return [("harm <= t^v", sb.harm_norm(v, t), sb.ppow(t, v)), ("t^v <= g", sb.ppow(t, v), sb.g_norm(r, v, t))]


def _p44(inst):
    r, v, t = inst["r"], inst["v"], inst["t"]
    return [("harm <= G", sb.harm_norm(v, t), sb.G_norm(r, v, t))]


def _p45(inst):
    r, v, t = inst["r"], inst["v"], inst["t"]
    return [("harm <= t^v", sb.harm_norm(v, t), sb.ppow(t, v)), ("t^v <= G", sb.ppow(t, v), sb.G_norm(r, v, t))]


def _t_range(lo, hi):
    return lambda inst: (inst["t"] >= lo) & (inst["t"] <= hi) & (inst["r"] <= 1.0)


def _bang_b_scalar(inst):
    v, t = inst["v"], inst["t"]
    return [("(t^v + t)/2 <= harm", 0.5 * (sb.ppow(t, v) + t), sb.harm_norm(v, t))]


def _bang_power_scalar(inst):
    v, t = inst["v"], inst["t"]
    return [("t((t+1)/2)^(v-1) <= harm", t * sb.ppow((t + 1) / 2, v - 1), sb.harm_norm(v, t))]


def _kant_build(u, cfg):
    v = _weights(u[:, 0], cfg)
    with np.errstate(divide="ignore"):
        lo = np.where(v > 0, np.exp(-math.log(2.0) / np.where(v > 0, v, 1.0)), 0.0)
    lo = np.maximum(lo, 1e-6)
    return {"v": v, "x": _logu(u[:, 1], lo, X_CAP)}


def _kant_pred(inst):
    return sb.ppow(inst["x"], inst["v"]) >= 0.5 * (1 - 1e-15)


def _kant_pairs(inst):
    v, x = inst["v"], inst["x"]
    return [("M_v(x) <= K(x)", sb.M_factor(v, x), sb.kantorovich(x))]


def _drag_build_a(u, cfg):
    return {"v": _lin(u[:, 0], 0.0, 0.5), "x": _x_le1(u[:, 1])}


def _drag_build_b(u, cfg):
    return {"v": _weights(u[:, 0], cfg), "x": _logu(u[:, 1], 0.5, X_CAP)}


def _drag_pairs(inst):
    v, x = inst["v"], inst["x"]
    return [("M_v(x) <= exp(4v(1-v)(K(x)-1))", sb.M_factor(v, x), sb.dragomir_factor(v, x))]


def _t_build(tmap):
    return lambda u, cfg: {"v": _weights(u[:, 0], cfg), "t": tmap(u[:, 1]), "r": np.zeros_like(u[:, 0])}


_SCALAR_CASES = [
    _s("YOUNG_CHAIN", "harm <= geom <= arith", "a, b > 0", 3, _young_build, _always, _young_pairs),
    _s("KM_K1_SCALAR", "r(sqrt a - sqrt b)^2 <= arith - geom <= R(sqrt a - sqrt b)^2", "a, b > 0",
       3, _young_build, _always, _km_pairs),
    _s("SCALAR_MULT_CHAIN", "m_v(x) x^v <= (1-v)+vx <= M_v(x) x^v", "0 < x <= 1", 2,
       _vx_build(_x_le1), lambda i: _in(i, "x", 0.0, 1.0), _mult_pairs),
    _s("SCALAR_FACTOR_ORDER", "1 <= m_v(x) <= M_v(x)", "0 < x <= 1", 2,
       _vx_build(_x_le1), lambda i: _in(i, "x", 0.0, 1.0), _factor_order_pairs),
    _s("SCALAR_ADD_CHAIN", "midpoint bound <= (1-v)+vx <= endpoint bound", "x >= 1", 2,
       _vx_build(_x_ge1), lambda i: i["x"] >= 1.0, _add_pairs),
    _s("THM_C_CASE_1", "g <= F <= G", "x >= 1, r >= 0", 3, _thm_c_build(_x_ge1, +1),
       _thm_c_pred(True, True), _thm_c_pairs(True)),
    _s("THM_C_CASE_2", "G <= F <= g", "0 < x <= 1, r >= 0", 3, _thm_c_build(_x_le1, +1),
       _thm_c_pred(False, True), _thm_c_pairs(False)),
    _s("THM_C_CASE_3", "G <= F <= g", "x >= 1, r <= 0", 3, _thm_c_build(_x_ge1, -1),
       _thm_c_pred(True, False), _thm_c_pairs(False)),
    _s("THM_C_CASE_4", "g <= F <= G", "0 < x <= 1, r <= 0", 3, _thm_c_build(_x_le1, -1),
       _thm_c_pred(False, False), _thm_c_pairs(True)),
    _s("PROP_4_2", "harm(t) <= g(t)", "t >= 1, 0 <= r <= 1", 3, _prop_build(_x_ge1),
       _t_range(1.0, math.inf), _p42),
    _s("PROP_4_3", "harm(t) <= t^v <= g(t)", "0 < t <= 1, 0 <= r <= 1", 3, _prop_build(_x_le1),
       _t_range(0.0, 1.0), _p43),
    _s("PROP_4_4", "harm(t) <= G(t)", "c <= t <= 1, 0 <= r <= 1", 3,
       _prop_build(lambda u: _lin(u, C_VALUE, 1.0)), _t_range(C_VALUE, 1.0), _p44),
    _s("PROP_4_5", "harm(t) <= t^v <= G(t)", "t >= 1, r <= 1", 3, _prop_build(_x_ge1, -4.0, 1.0),
       _t_range(1.0, math.inf), _p45),
    _s("REMARK_SCALAR_BANG_B", "(t^v + t)/2 <= harm(t)", "c <= t <= 1", 2,
       _t_build(lambda u: _lin(u, C_VALUE, 1.0)), _t_range(C_VALUE, 1.0), _bang_b_scalar),
    _s("REMARK_SCALAR_BANG_POWER", "t((t+1)/2)^(v-1) <= harm(t)", "0 < t <= 1", 2,
       _t_build(_x_le1), _t_range(0.0, 1.0), _bang_power_scalar),
    _s("KANTOROVICH_UPPER", "M_v(x) <= K(x)", "x^v >= 1/2", 2, _kant_build, _kant_pred, _kant_pairs),
    _s("DRAGOMIR_UPPER", "M_v(x) <= exp(4v(1-v)(K(x)-1))", "0 <= v <= 1/2, 0 < x <= 1", 2,
       _drag_build_a, lambda i: (i["v"] <= 0.5) & _in(i, "x", 0.0, 1.0), _drag_pairs),
    _s("DRAGOMIR_UPPER_EXT", "M_v(x) <= exp(4v(1-v)(K(x)-1))", "0 <= v <= 1, x >= 1/2", 2,
       _drag_build_b, lambda i: i["x"] >= 0.5, _drag_pairs),
]

CASES: dict[str, InequalityCase] = {c.id: c for c in _MATRIX_CASES + _SCALAR_CASES}
MATRIX_IDS = tuple(c.id for c in _MATRIX_CASES)
SCALAR_IDS = tuple(c.id for c in _SCALAR_CASES)


def get_case(case_id: str) -> InequalityCase:
    try:
        return CASES[case_id]
    except KeyError:
        raise KeyError(f"unknown case id {case_id!r}") from None
