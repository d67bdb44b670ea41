"""Per-link transcript entropy lower bounds and randomness bounds.

Five bound families are computed for a randomized two-input function:
an evaluation bound at the given input distribution, an optimized bound
over full-support joint input distributions, an evaluation bound for
independent inputs, and two switched bounds whose terms are optimized
separately over independently chosen input distributions (the stronger of
the two gated on reachable-output connectivity conditions). Suprema over
open sets of full-support distributions are computed on the closed simplex
with the common-part block structure frozen from the interior support
pattern, so boundary-approaching witnesses evaluate to their limits.

Share-size bounds for dealer-generated secret sharing and for secure
sampling reuse the same term kernels.
"""

from dataclasses import dataclass, field

import numpy as np

from .common_info import blocks_from_mask, residual_info
from .dists import (
    Alphabet,
    JointDist,
    PreconditionError,
    SUPPORT_EPS,
    ZERO_TOL,
    cond_entropy,
    dist_to_json,
    join,
)
from .normal_form import (
    bigraph_connected,
    channel_normal_form,
    check_condition1,
    check_condition2,
    is_pair_normal_form,
    is_sampling_normal_form,
    pair_normal_form,
)
from .simplex import OptConfig, candidate_points, coordinate_polish, optimize_over_simplex

DEFAULT_CONFIG = OptConfig()
# a later term replaces an earlier one only if strictly better than this;
# keeps exact evaluations and canonical witness labels on near-ties
REPLACE_MARGIN = 1e-6
_CHUNK = 256

LINKS = ("m12", "m23", "m31")


@dataclass
class TermValue:
    name: str
    link: str
    value: float
    witnesses: dict = field(default_factory=dict)  # label -> JointDist
    distribution_free: bool = False
    limit_point: bool = False


@dataclass(frozen=True)
class LinkTriple:
    m23: float
    m31: float
    m12: float


def _xlogx(p):
    out = np.zeros_like(p)
    mask = p > SUPPORT_EPS
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def _H(p, axis=-1):
    return -_xlogx(p).sum(axis=axis)


def _label_matrix(labels, n_blocks):
    mat = np.zeros((len(labels), max(n_blocks, 1)))
    for i, lab in enumerate(labels):
        if lab >= 0:
            mat[i, lab] = 1.0
    return mat


class _TermBank:
    """Vectorized entropy kernels for one channel.

    Common-part blocks are precomputed from the generic support pattern
    (every input symbol occurring), which is the pattern of every
    full-support input distribution.
    """

    def __init__(self, ch):
        self.ch = ch
        W = np.asarray(ch.kernel)
        self.W = W
        self.nx, self.ny, self.nz = W.shape
        self.Hrow = _H(W)  # (nx, ny)
        lx, _, nb = blocks_from_mask((W > SUPPORT_EPS).any(axis=1))
        self.Lx = _label_matrix(lx, nb)  # x-side blocks of the (X,Z) graph
        ly, _, nb = blocks_from_mask((W > SUPPORT_EPS).any(axis=0))
        self.Ly = _label_matrix(ly, nb)  # y-side blocks of the (Y,Z) graph

    # -- product-form terms: A (n,nx) x B (m,ny), value matrices (n,m) ------

    def _pre_a(self, A):
        C = np.einsum("nx,xyz->nyz", A, self.W)
        return {
            "A": A,
            "C": C,  # C[n, y, :] is the output law at y once x ~ A[n]
            "G": _H(C),  # (n, ny)
            "H": _H(A),  # (n,)
            "blk": _H(A @ self.Lx),  # (n,)
        }

    def _pre_b(self, B):
        C = np.einsum("my,xyz->mxz", B, self.W)
        return {
            "B": B,
            "C": C,
            "G": _H(C),  # (m, nx)
            "H": _H(B),
            "blk": _H(B @ self.Ly),
        }

    def pair_values(self, A, B, kinds):
        """Evaluate product-form terms for all (A_i, B_j) pairs, chunked."""
        A = np.atleast_2d(np.asarray(A, dtype=float))
        B = np.atleast_2d(np.asarray(B, dtype=float))
        pb = self._pre_b(B)
        out = [np.empty((len(A), len(B))) for _ in kinds]
        for lo in range(0, len(A), _CHUNK):
            sl = slice(lo, min(lo + _CHUNK, len(A)))
            pa = self._pre_a(A[sl])
            pz = np.einsum("my,nyz->nmz", B, pa["C"])
            h_z = _H(pz)  # (chunk, m)
            bil = pa["A"] @ self.Hrow @ B.T
            for t, kind in enumerate(kinds):
                if kind == "ri_xz":
                    v = h_z - pa["A"] @ pb["G"].T - pa["blk"][:, None]
                elif kind == "ri_yz":
                    v = h_z - pa["G"] @ B.T - pb["blk"][None, :]
                elif kind == "h_xy_z":
                    v = pa["H"][:, None] + pb["H"][None, :] + bil - h_z
                elif kind == "h_yz_x":
                    v = pb["H"][None, :] + bil
                elif kind == "h_xz_y":
                    v = pa["H"][:, None] + bil
                else:
                    raise ValueError("unknown term kind %r" % kind)
                out[t][sl] = v
        return out

    def pair_scalar(self, a, b, kinds):
        vals = self.pair_values(a, b, kinds)
        return [float(v[0, 0]) for v in vals]

    # -- joint-form terms: Q (n, nx, ny) -------------------------------------

    def joint_values(self, Q, kinds):
        Q = np.asarray(Q, dtype=float)
        if Q.ndim == 2:
            Q = Q[None]
        n = len(Q)
        out = [np.empty(n) for _ in kinds]
        for lo in range(0, n, _CHUNK):
            sl = slice(lo, min(lo + _CHUNK, n))
            q = Q[sl]
            p_x = q.sum(axis=2)
            p_y = q.sum(axis=1)
            h_q = _H(q.reshape(len(q), -1))
            h_x, h_y = _H(p_x), _H(p_y)
            h_xyz = h_q + np.einsum("nxy,xy->n", q, self.Hrow)
            p_z = np.einsum("nxy,xyz->nz", q, self.W)
            h_z = _H(p_z)
            p_xz = np.einsum("nxy,xyz->nxz", q, self.W)
            h_xz = _H(p_xz.reshape(len(q), -1))
            p_yz = np.einsum("nxy,xyz->nyz", q, self.W)
            h_yz = _H(p_yz.reshape(len(q), -1))
            ri_xz = h_x + h_z - h_xz - _H(p_x @ self.Lx)
            ri_yz = h_y + h_z - h_yz - _H(p_y @ self.Ly)
            ri_xy = h_x + h_y - h_q  # generic (X,Y) graph is complete
            for t, kind in enumerate(kinds):
                v = {
                    "ri_xz": ri_xz,
                    "ri_yz": ri_yz,
                    "ri_xy": ri_xy,
                    "h_xy_z": h_xyz - h_z,
                    "h_yz_x": h_xyz - h_x,
                    "h_xz_y": h_xyz - h_y,
                }[kind]
                out[t][sl] = v
        return out


def _as_prob_vector(p, size, what):
    if isinstance(p, JointDist):
        if p.n_axes != 1:
            raise ValueError("%s must be a 1-axis distribution" % what)
        p = p.probs
    p = np.asarray(p, dtype=float).ravel()
    if p.size != size:
        raise ValueError("%s has size %d, expected %d" % (what, p.size, size))
    return p


def _dist1(axis_name, symbols, probs):
    return JointDist((Alphabet(axis_name, symbols),), np.asarray(probs, dtype=float))


def _marginals(p_xy):
    p_x = _dist1(p_xy.axes[0].name, p_xy.axes[0].symbols, p_xy.probs.sum(axis=1))
    p_y = _dist1(p_xy.axes[1].name, p_xy.axes[1].symbols, p_xy.probs.sum(axis=0))
    return p_x, p_y


def _is_product(p_xy):
    outer = np.outer(p_xy.probs.sum(axis=1), p_xy.probs.sum(axis=0))
    return bool(np.max(np.abs(outer - p_xy.probs)) <= ZERO_TOL)


def _full_support(d):
    return bool(d.probs.min() > SUPPORT_EPS)


# ---------------------------------------------------------------------------
# Evaluation bounds (no optimization)


def prelim_bounds(p_xy, ch):
    """Per-link bounds at the given pair: max residual information against
    the output or the co-input, plus the conditional entropy the cut must
    carry. Requires the pair in normal form."""
    if not is_pair_normal_form(p_xy, ch):
        raise PreconditionError("(p_xy, channel) pair is not in normal form")
    d = join(p_xy, ch)
    ri_xz = residual_info(d.marginal({0, 2}))
    ri_yz = residual_info(d.marginal({1, 2}))
    ri_xy = residual_info(d.marginal({0, 1}))
    return LinkTriple(
        m23=max(ri_xz, ri_xy) + cond_entropy(d, {1, 2}, {0}),
        m31=max(ri_yz, ri_xy) + cond_entropy(d, {0, 2}, {1}),
        m12=max(ri_xz, ri_yz) + cond_entropy(d, {0, 1}, {2}),
    )


def intermediate_bounds(p_x, p_y, ch):
    """Per-link bounds for independent full-support inputs; the Alice-Bob
    link collects both residual-information terms."""
    px = _as_prob_vector(p_x, len(ch.x_axis), "p_x")
    py = _as_prob_vector(p_y, len(ch.y_axis), "p_y")
    if px.min() <= SUPPORT_EPS or py.min() <= SUPPORT_EPS:
        raise PreconditionError("inputs must have full support")
    p_xy = JointDist((ch.x_axis, ch.y_axis), np.outer(px, py))
    d = join(p_xy, ch)
    ri_xz = residual_info(d.marginal({0, 2}))
    ri_yz = residual_info(d.marginal({1, 2}))
    return LinkTriple(
        m23=ri_xz + cond_entropy(d, {1, 2}, {0}),
        m31=ri_yz + cond_entropy(d, {0, 2}, {1}),
        m12=ri_xz + ri_yz + cond_entropy(d, {0, 1}, {2}),
    )


def sampling_bounds(p_xyz):
    """Share bounds for securely sampling a 3-axis joint in normal form."""
    if p_xyz.n_axes != 3:
        raise ValueError("sampling_bounds expects a 3-axis joint")
    if not is_sampling_normal_form(p_xyz):
        raise PreconditionError("joint is not in sampling normal form")
    ri_xz = residual_info(p_xyz.marginal({0, 2}))
    ri_yz = residual_info(p_xyz.marginal({1, 2}))
    ri_xy = residual_info(p_xyz.marginal({0, 1}))
    return LinkTriple(
        m23=ri_xz + ri_xy + cond_entropy(p_xyz, {1, 2}, {0}),
        m31=ri_yz + ri_xy + cond_entropy(p_xyz, {0, 2}, {1}),
        m12=ri_xz + ri_yz + cond_entropy(p_xyz, {0, 1}, {2}),
    )


# ---------------------------------------------------------------------------
# Optimized bounds


def _optimize_joint(bank, kinds, cfg, name, link, dist_free=True):
    """Maximize a sum of joint-form terms over full-support p_X'Y'."""
    nx, ny = bank.nx, bank.ny

    def batch(blocks):
        Q = blocks[0].reshape(-1, nx, ny)
        return sum(bank.joint_values(Q, kinds))

    def scalar(pts):
        return float(batch([pts[0][None]])[0])

    res = optimize_over_simplex(scalar, (nx * ny,), cfg, batch_objective=batch)
    q = res.witnesses[0].reshape(nx, ny)
    witness = JointDist((bank.ch.x_axis, bank.ch.y_axis), q)
    return TermValue(
        name=name,
        link=link,
        value=res.value,
        witnesses={"p_X'Y'": witness},
        distribution_free=dist_free,
        limit_point=res.limit_point,
    )


def improved_bounds(ch, cfg=DEFAULT_CONFIG):
    """Optimized single-distribution bounds over full-support joint inputs.

    The Alice-Bob link is unconditional; the other two links require the
    reachable-output connectivity conditions and are None otherwise.
    Returns {link: best TermValue or None} with both variants in .witnesses
    provenance via the name.
    """
    bank = _TermBank(ch)
    out = {}
    variants = {
        "m12": [("ri_xz", "h_xy_z"), ("ri_yz", "h_xy_z")],
        "m31": [("ri_yz", "h_xz_y"), ("ri_xy", "h_xz_y")] if check_condition1(ch) else None,
        "m23": [("ri_xz", "h_yz_x"), ("ri_xy", "h_yz_x")] if check_condition2(ch) else None,
    }
    for link, vs in variants.items():
        if vs is None:
            out[link] = None
            continue
        best = None
        for kinds in vs:
            tv = _optimize_joint(bank, kinds, cfg, "improved_%s_%s" % (link, kinds[0]), link)
            if best is None or tv.value > best.value + REPLACE_MARGIN:
                best = tv
        out[link] = best
    return out


def improved_value(ch, link, variant, q_xy):
    """Evaluate one optimized-bound objective at a given joint distribution.

    variant is the residual-information side, "ri_xz", "ri_yz" or "ri_xy".
    """
    bank = _TermBank(ch)
    cond_kind = {"m12": "h_xy_z", "m31": "h_xz_y", "m23": "h_yz_x"}[link]
    Q = q_xy.probs if isinstance(q_xy, JointDist) else np.asarray(q_xy, dtype=float)
    vals = bank.joint_values(Q[None], [variant, cond_kind])
    return float(vals[0][0] + vals[1][0])


def _optimize_single(bank, kind, fixed_b=None, fixed_a=None, cfg=DEFAULT_CONFIG):
    """Maximize one product-form term over a single simplex, other side fixed."""
    if fixed_b is not None:

        def batch(blocks):
            return bank.pair_values(blocks[0], fixed_b, [kind])[0][:, 0]

        def scalar(pts):
            return bank.pair_scalar(pts[0], fixed_b, [kind])[0]

        k = bank.nx
    else:

        def batch(blocks):
            return bank.pair_values(fixed_a, blocks[0], [kind])[0][0, :]

        def scalar(pts):
            return bank.pair_scalar(fixed_a, pts[0], [kind])[0]

        k = bank.ny
    return optimize_over_simplex(scalar, (k,), cfg, batch_objective=batch)


def _nested(bank, outer_side, inner_terms, cfg):
    """sup over the outer distribution of a sum of independently supremized
    inner terms, innermost evaluated first on a batched sweep per outer
    candidate, then a joint coordinate polish.

    inner_terms: list of lists of kinds (each inner distribution may carry a
    sum of kinds, e.g. ri_xz + h_xy_z shares one inner variable).
    """
    k_out = bank.nx if outer_side == "x" else bank.ny
    k_in = bank.ny if outer_side == "x" else bank.nx
    outer = candidate_points(k_out, cfg)
    inner = candidate_points(k_in, cfg)
    n = len(outer)
    totals = np.zeros(n)
    args = []
    for kinds in inner_terms:
        if outer_side == "x":
            mats = bank.pair_values(outer, inner, kinds)
            V = sum(mats)  # (n_outer, n_inner)
        else:
            mats = bank.pair_values(inner, outer, kinds)
            V = sum(mats).T
        totals += V.max(axis=1)
        args.append(V.argmax(axis=1))
    i = int(np.argmax(totals))
    pts = [outer[i].copy()] + [inner[a[i]].copy() for a in args]

    def scalar(ps):
        v = 0.0
        for t, kinds in enumerate(inner_terms):
            a, b = (ps[0], ps[1 + t]) if outer_side == "x" else (ps[1 + t], ps[0])
            v += sum(bank.pair_scalar(a, b, kinds))
        return v

    value, pts, _ = coordinate_polish(scalar, pts, cfg, value=float(totals[i]))
    limit = any(p.min() <= 1e-9 for p in pts)
    return value, pts, limit


def _pack_product_witnesses(bank, outer_side, pts, labels):
    x_axis, y_axis = bank.ch.x_axis, bank.ch.y_axis
    out = {}
    for lab, p in zip(labels, pts):
        axis = x_axis if lab.startswith("p_X") else y_axis
        out[lab] = _dist1(axis.name, axis.symbols, p)
    return out


def switched_bounds(ch, p_x, p_y, cfg=DEFAULT_CONFIG):
    """Separately-optimized switched bounds for independent full-support inputs.

    The Bob-Charlie and Charlie-Alice links keep the actual marginal of the
    non-switched input; the Alice-Bob value is the larger of the two nested
    rows and does not depend on the input distribution.
    """
    bank = _TermBank(ch)
    px = _as_prob_vector(p_x, bank.nx, "p_x")
    py = _as_prob_vector(p_y, bank.ny, "p_y")
    if px.min() <= SUPPORT_EPS or py.min() <= SUPPORT_EPS:
        raise PreconditionError("inputs must have full support")
    out = {}

    r1 = _optimize_single(bank, "ri_xz", fixed_b=py[None], cfg=cfg)
    r2 = _optimize_single(bank, "h_yz_x", fixed_b=py[None], cfg=cfg)
    out["m23"] = TermValue(
        name="switched_m23",
        link="m23",
        value=r1.value + r2.value,
        witnesses=_pack_product_witnesses(
            bank, "x", [r1.witnesses[0], r2.witnesses[0]], ["p_X'", "p_X''"]
        ),
        distribution_free=False,
        limit_point=r1.limit_point or r2.limit_point,
    )

    r1 = _optimize_single(bank, "ri_yz", fixed_a=px[None], cfg=cfg)
    r2 = _optimize_single(bank, "h_xz_y", fixed_a=px[None], cfg=cfg)
    out["m31"] = TermValue(
        name="switched_m31",
        link="m31",
        value=r1.value + r2.value,
        witnesses=_pack_product_witnesses(
            bank, "y", [r1.witnesses[0], r2.witnesses[0]], ["p_Y'", "p_Y''"]
        ),
        distribution_free=False,
        limit_point=r1.limit_point or r2.limit_point,
    )

    top_v, top_pts, top_lim = _nested(bank, "x", [["ri_yz"], ["ri_xz", "h_xy_z"]], cfg)
    bot_v, bot_pts, bot_lim = _nested(bank, "y", [["ri_xz"], ["ri_yz", "h_xy_z"]], cfg)
    if bot_v > top_v + REPLACE_MARGIN:
        out["m12"] = TermValue(
            name="switched_m12_bottom",
            link="m12",
            value=bot_v,
            witnesses=_pack_product_witnesses(bank, "y", bot_pts, ["p_Y'", "p_X'", "p_X''"]),
            distribution_free=True,
            limit_point=bot_lim,
        )
    else:
        out["m12"] = TermValue(
            name="switched_m12_top",
            link="m12",
            value=top_v,
            witnesses=_pack_product_witnesses(bank, "x", top_pts, ["p_X'", "p_Y'", "p_Y''"]),
            distribution_free=True,
            limit_point=top_lim,
        )
    return out


def conditional_bounds(ch, cfg=DEFAULT_CONFIG):
    """Nested switched bounds for the links to Charlie, gated on the
    reachable-output connectivity conditions; None when not applicable."""
    bank = _TermBank(ch)
    out = {"m31": None, "m23": None}
    if check_condition1(ch):
        v, pts, lim = _nested(bank, "x", [["ri_yz"], ["h_xz_y"]], cfg)
        out["m31"] = TermValue(
            name="conditional_m31",
            link="m31",
            value=v,
            witnesses=_pack_product_witnesses(bank, "x", pts, ["p_X'", "p_Y'", "p_Y''"]),
            distribution_free=True,
            limit_point=lim,
        )
    if check_condition2(ch):
        v, pts, lim = _nested(bank, "y", [["ri_xz"], ["h_yz_x"]], cfg)
        out["m23"] = TermValue(
            name="conditional_m23",
            link="m23",
            value=v,
            witnesses=_pack_product_witnesses(bank, "y", pts, ["p_Y'", "p_X'", "p_X''"]),
            distribution_free=True,
            limit_point=lim,
        )
    return out


# -- evaluation helpers for the switched expressions ------------------------


def switched_m23_value(ch, p_y, p_x1, p_x2):
    bank = _TermBank(ch)
    py = _as_prob_vector(p_y, bank.ny, "p_y")[None]
    a = bank.pair_scalar(_as_prob_vector(p_x1, bank.nx, "p_x1"), py, ["ri_xz"])[0]
    b = bank.pair_scalar(_as_prob_vector(p_x2, bank.nx, "p_x2"), py, ["h_yz_x"])[0]
    return a + b


def switched_m31_value(ch, p_x, p_y1, p_y2):
    bank = _TermBank(ch)
    px = _as_prob_vector(p_x, bank.nx, "p_x")[None]
    a = bank.pair_scalar(px, _as_prob_vector(p_y1, bank.ny, "p_y1"), ["ri_yz"])[0]
    b = bank.pair_scalar(px, _as_prob_vector(p_y2, bank.ny, "p_y2"), ["h_xz_y"])[0]
    return a + b


def switched_m12_value(ch, row, p_outer, p_in1, p_in2):
    """Evaluate one row of the Alice-Bob switched bound at given distributions."""
    bank = _TermBank(ch)
    if row == "top":
        a = _as_prob_vector(p_outer, bank.nx, "p_outer")
        v1 = bank.pair_scalar(a, _as_prob_vector(p_in1, bank.ny, "p_in1"), ["ri_yz"])[0]
        v2 = sum(
            bank.pair_scalar(a, _as_prob_vector(p_in2, bank.ny, "p_in2"), ["ri_xz", "h_xy_z"])
        )
    elif row == "bottom":
        b = _as_prob_vector(p_outer, bank.ny, "p_outer")
        v1 = bank.pair_scalar(_as_prob_vector(p_in1, bank.nx, "p_in1"), b, ["ri_xz"])[0]
        v2 = sum(
            bank.pair_scalar(_as_prob_vector(p_in2, bank.nx, "p_in2"), b, ["ri_yz", "h_xy_z"])
        )
    else:
        raise ValueError("row must be 'top' or 'bottom'")
    return v1 + v2


def conditional_m31_value(ch, p_x1, p_y1, p_y2):
    bank = _TermBank(ch)
    a = _as_prob_vector(p_x1, bank.nx, "p_x1")
    v1 = bank.pair_scalar(a, _as_prob_vector(p_y1, bank.ny, "p_y1"), ["ri_yz"])[0]
    v2 = bank.pair_scalar(a, _as_prob_vector(p_y2, bank.ny, "p_y2"), ["h_xz_y"])[0]
    return v1 + v2


def conditional_m23_value(ch, p_y1, p_x1, p_x2):
    bank = _TermBank(ch)
    b = _as_prob_vector(p_y1, bank.ny, "p_y1")
    v1 = bank.pair_scalar(_as_prob_vector(p_x1, bank.nx, "p_x1"), b, ["ri_xz"])[0]
    v2 = bank.pair_scalar(_as_prob_vector(p_x2, bank.nx, "p_x2"), b, ["h_yz_x"])[0]
    return v1 + v2


# ---------------------------------------------------------------------------
# Report assembly


@dataclass
class LinkBound:
    value: float
    theorem: str
    witnesses: dict
    distribution_free: bool
    limit_point: bool
    terms: list


@dataclass
class BoundReport:
    h_m12: LinkBound
    h_m23: LinkBound
    h_m31: LinkBound
    rho: float
    conditions: dict
    merges: dict
    config: OptConfig

    def link(self, name):
        return {"m12": self.h_m12, "m23": self.h_m23, "m31": self.h_m31}[name]

    def to_json(self):
        def link_json(lb):
            return {
                "value": lb.value,
                "theorem": lb.theorem,
                "distribution_free": lb.distribution_free,
                "limit_point": lb.limit_point,
                "witnesses": {k: dist_to_json(v) for k, v in lb.witnesses.items()},
                "terms": [
                    {"name": t.name, "value": t.value, "distribution_free": t.distribution_free}
                    for t in lb.terms
                ],
            }

        return {
            "links": {name: link_json(self.link(name)) for name in LINKS},
            "rho": self.rho,
            "conditions": self.conditions,
            "merges": {
                ax: {str(k): (None if v is None else str(v)) for k, v in m.items()}
                for ax, m in self.merges.items()
            },
            "config": {
                "grid_resolution": self.config.grid_resolution,
                "refine_iters": self.config.refine_iters,
                "simplex_floor": self.config.simplex_floor,
                "tolerance": self.config.tolerance,
            },
        }


def _pick(terms):
    best = None
    for t in terms:
        if t is None:
            continue
        if best is None or t.value > best.value + REPLACE_MARGIN:
            best = t
    return best


def best_bounds(p_xy, ch, cfg=DEFAULT_CONFIG):
    """Per-link maximum over every applicable bound family.

    Normalizes the channel (and the pair, for the evaluation bound)
    internally and records the merges. Dependent full-support inputs are
    handled through the product of their marginals where a bound family
    needs independence.
    """
    if p_xy.n_axes != 2 or p_xy.axes[0] != ch.x_axis or p_xy.axes[1] != ch.y_axis:
        raise ValueError("input distribution axes do not match the channel alphabets")
    chres = channel_normal_form(ch)
    ch_n = chres.reduced
    p_n = _push_inputs(p_xy, chres, ch_n)

    pairres = pair_normal_form(p_n, ch_n)
    p_nf, ch_nf = pairres.reduced

    conditions = {
        "bigraph_connected": bigraph_connected(p_n),
        "condition1": check_condition1(ch_n),
        "condition2": check_condition2(ch_n),
        "full_support": _full_support(p_n),
        "product_inputs": _is_product(p_n),
    }

    terms = {link: [] for link in LINKS}
    tri = prelim_bounds(p_nf, ch_nf)
    for link in LINKS:
        terms[link].append(
            TermValue(name="prelim_%s" % link, link=link, value=getattr(tri, link))
        )

    if conditions["full_support"]:
        p_x, p_y = _marginals(p_n)
        tri = intermediate_bounds(p_x, p_y, ch_n)
        for link in LINKS:
            terms[link].append(
                TermValue(name="intermediate_%s" % link, link=link, value=getattr(tri, link))
            )
        for link, tv in improved_bounds(ch_n, cfg).items():
            if tv is not None:
                terms[link].append(tv)
        for link, tv in switched_bounds(ch_n, p_x, p_y, cfg).items():
            terms[link].append(tv)
        for link, tv in conditional_bounds(ch_n, cfg).items():
            if tv is not None:
                terms[link].append(tv)

    links = {}
    for link in LINKS:
        best = _pick(terms[link])
        links[link] = LinkBound(
            value=best.value,
            theorem=best.name,
            witnesses=best.witnesses,
            distribution_free=best.distribution_free,
            limit_point=best.limit_point,
            terms=terms[link],
        )

    report = BoundReport(
        h_m12=links["m12"],
        h_m23=links["m23"],
        h_m31=links["m31"],
        rho=0.0,
        conditions=conditions,
        merges={"x": chres.x_map, "y": chres.y_map, "z": chres.z_map},
        config=cfg,
    )
    report.rho = randomness_bound(report)
    return report


def _push_inputs(p_xy, chres, ch_n):
    """Apply the channel's input merges to the input distribution."""
    probs = np.zeros((len(ch_n.x_axis), len(ch_n.y_axis)))
    for (x, y), p in p_xy.support():
        probs[ch_n.x_axis.index(chres.x_map[x]), ch_n.y_axis.index(chres.y_map[y])] += p
    return JointDist((ch_n.x_axis, ch_n.y_axis), probs)


def randomness_bound(report):
    """Randomness lower bound: the largest link bound whose transcript is
    forced independent of the inputs."""
    vals = []
    if report.conditions.get("bigraph_connected"):
        vals.append(report.h_m12.value)
    if report.conditions.get("full_support"):
        if report.conditions.get("condition1"):
            vals.append(report.h_m31.value)
        if report.conditions.get("condition2"):
            vals.append(report.h_m23.value)
    return max(vals, default=0.0)


# ---------------------------------------------------------------------------
# Dealer-generated share bounds


def cmss_bounds(p_xyz, cfg=DEFAULT_CONFIG):
    """Share-entropy lower bounds for dealer-generated sharing of a 3-axis
    joint: the evaluation bound at the given joint, strengthened by switching
    over distributions on its support cone, each share gated on connectivity
    of the relevant pair's generic bipartite graph."""
    if p_xyz.n_axes != 3:
        raise ValueError("cmss_bounds expects a 3-axis joint")
    ri_xz = residual_info(p_xyz.marginal({0, 2}))
    ri_yz = residual_info(p_xyz.marginal({1, 2}))
    ri_xy = residual_info(p_xyz.marginal({0, 1}))
    base = {
        "m12": max(ri_xz, ri_yz) + cond_entropy(p_xyz, {0, 1}, {2}),
        "m23": max(ri_xz, ri_xy) + cond_entropy(p_xyz, {1, 2}, {0}),
        "m31": max(ri_yz, ri_xy) + cond_entropy(p_xyz, {0, 2}, {1}),
    }
    terms = {
        link: [TermValue(name="cmss_prelim_%s" % link, link=link, value=base[link])]
        for link in LINKS
    }

    cone = _SupportCone(p_xyz)
    gates = {"m12": cone.connected("xy"), "m23": cone.connected("yz"), "m31": cone.connected("xz")}
    variants = {
        "m12": [("ri_xz", "h_xy_z"), ("ri_yz", "h_xy_z")],
        "m23": [("ri_xz", "h_yz_x"), ("ri_xy", "h_yz_x")],
        "m31": [("ri_yz", "h_xz_y"), ("ri_xy", "h_xz_y")],
    }
    for link in LINKS:
        if not gates[link]:
            continue
        for kinds in variants[link]:

            def batch(blocks, kinds=kinds):
                return cone.values(blocks[0], kinds)

            def scalar(pts, kinds=kinds):
                return float(cone.values(pts[0][None], kinds)[0])

            res = optimize_over_simplex(scalar, (cone.n_points,), cfg, batch_objective=batch)
            terms[link].append(
                TermValue(
                    name="cmss_switched_%s_%s" % (link, kinds[0]),
                    link=link,
                    value=res.value,
                    witnesses={"p_X'Y'Z'": cone.to_dist(res.witnesses[0])},
                    limit_point=res.limit_point,
                )
            )

    out = {}
    for link in LINKS:
        best = _pick(terms[link])
        out[link] = LinkBound(
            value=best.value,
            theorem=best.name,
            witnesses=best.witnesses,
            distribution_free=best.distribution_free,
            limit_point=best.limit_point,
            terms=terms[link],
        )
    return out


class _SupportCone:
    """Distributions supported inside the support of a given 3-axis joint,
    with generic-pattern common-part blocks for each pair of axes."""

    def __init__(self, p_xyz):
        self.axes = p_xyz.axes
        self.points = [idx for idx, _ in _support_indices(p_xyz)]
        self.n_points = len(self.points)
        shape = p_xyz.probs.shape
        self.pair_info = {}
        for key, (i, j) in {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}.items():
            mask = np.zeros((shape[i], shape[j]), dtype=bool)
            for idx in self.points:
                mask[idx[i], idx[j]] = True
            li, lj, nb = blocks_from_mask(mask)
            # scatter matrices: support point -> marginal cells
            Mi = np.zeros((self.n_points, shape[i]))
            Mj = np.zeros((self.n_points, shape[j]))
            Mij = np.zeros((self.n_points, shape[i] * shape[j]))
            for t, idx in enumerate(self.points):
                Mi[t, idx[i]] = 1.0
                Mj[t, idx[j]] = 1.0
                Mij[t, idx[i] * shape[j] + idx[j]] = 1.0
            self.pair_info[key] = {
                "Mi": Mi,
                "Mj": Mj,
                "Mij": Mij,
                "Li": _label_matrix(li, nb),
                "n_blocks": nb,
            }

    def connected(self, key):
        return self.pair_info[key]["n_blocks"] <= 1

    def to_dist(self, q):
        probs = np.zeros(tuple(len(a) for a in self.axes))
        for t, idx in enumerate(self.points):
            probs[idx] = q[t]
        return JointDist(self.axes, probs)

    def values(self, Qs, kinds):
        """Sum of term values for each cone distribution in the batch."""
        Qs = np.atleast_2d(np.asarray(Qs, dtype=float))
        xy, xz, yz = self.pair_info["xy"], self.pair_info["xz"], self.pair_info["yz"]
        h_xyz = _H(Qs)
        p_x = Qs @ xy["Mi"]
        p_y = Qs @ xy["Mj"]
        p_z = Qs @ xz["Mj"]
        h_x, h_y, h_z = _H(p_x), _H(p_y), _H(p_z)
        h_xy = _H(Qs @ xy["Mij"])
        h_xz = _H(Qs @ xz["Mij"])
        h_yz = _H(Qs @ yz["Mij"])
        total = np.zeros(len(Qs))
        for kind in kinds:
            if kind == "ri_xz":
                total += h_x + h_z - h_xz - _H(p_x @ xz["Li"])
            elif kind == "ri_yz":
                total += h_y + h_z - h_yz - _H(p_y @ yz["Li"])
            elif kind == "ri_xy":
                total += h_x + h_y - h_xy - _H(p_x @ xy["Li"])
            elif kind == "h_xy_z":
                total += h_xyz - h_z
            elif kind == "h_yz_x":
                total += h_xyz - h_x
            elif kind == "h_xz_y":
                total += h_xyz - h_y
            else:
                raise ValueError("unknown term kind %r" % kind)
        return total


def _support_indices(d):
    for idx in np.argwhere(d.probs > SUPPORT_EPS):
        yield tuple(int(i) for i in idx), float(d.probs[tuple(idx)])
