"""Correlated multi-secret sharing on the triangle.

A dealer maps correlated secrets (X, Y, Z) plus uniform randomness to three
link shares so that each party reconstructs exactly its own secret from its
two incident shares and learns nothing else. Transcripts of any secure
computation protocol form such a scheme; the converse fails, and the AND
scheme here is the witness: its Alice-Bob share is strictly smaller than any
protocol's transcript on that link.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import bounds as bounds_mod
from .dists import (
    Alphabet,
    Channel,
    JointDist,
    ZERO_TOL,
    cond_entropy,
    cond_mutual_info,
    entropy,
    join,
)
from .protocols import M12, M23, M31, X, Y, Z
from .simplex import OptConfig


@dataclass(frozen=True)
class CmssSpec:
    secret_axes: tuple  # (X, Y, Z) Alphabets
    dealer_randomness: Alphabet
    share_axes: tuple  # (M12, M23, M31) Alphabets
    share_fn: object  # fn(x, y, z, r) -> (m12, m23, m31)


def cmss_joint(spec, p_xyz):
    """Exact joint over (X, Y, Z, M12, M23, M31) for uniform dealer randomness."""
    if p_xyz.n_axes != 3 or tuple(p_xyz.axes) != tuple(spec.secret_axes):
        raise ValueError("secret distribution axes do not match the scheme")
    axes = tuple(spec.secret_axes) + tuple(spec.share_axes)
    probs = np.zeros(tuple(len(a) for a in axes))
    r_weight = 1.0 / len(spec.dealer_randomness)
    for (x, y, z), p in p_xyz.support():
        for r in spec.dealer_randomness:
            m12, m23, m31 = spec.share_fn(x, y, z, r)
            probs[
                spec.secret_axes[0].index(x),
                spec.secret_axes[1].index(y),
                spec.secret_axes[2].index(z),
                spec.share_axes[0].index(m12),
                spec.share_axes[1].index(m23),
                spec.share_axes[2].index(m31),
            ] += p * r_weight
    return JointDist(axes, probs)


def verify_cmss(joint, tol=ZERO_TOL):
    """Three reconstruction checks and three privacy checks on a 6-axis joint.

    Returns a dict of named booleans; works on protocol execution joints too.
    """
    return {
        "reconstruct_x": cond_entropy(joint, (X,), (M12, M31)) <= tol,
        "reconstruct_y": cond_entropy(joint, (Y,), (M12, M23)) <= tol,
        "reconstruct_z": cond_entropy(joint, (Z,), (M23, M31)) <= tol,
        "privacy_alice": cond_mutual_info(joint, (M12, M31), (Y, Z), (X,)) <= tol,
        "privacy_bob": cond_mutual_info(joint, (M12, M23), (X, Z), (Y,)) <= tol,
        "privacy_charlie": cond_mutual_info(joint, (M23, M31), (X, Y), (Z,)) <= tol,
    }


def share_entropies(joint):
    return {
        "m12": entropy(joint, (M12,)),
        "m23": entropy(joint, (M23,)),
        "m31": entropy(joint, (M31,)),
    }


def and_cmss():
    """The three-label AND scheme: a random permutation (a, b, c) of {0,1,2};
    the Alice-Bob share is a, Alice's link to Charlie carries a iff X=1 else
    b, Bob's carries a iff Y=1 else c. All three shares are uniform over
    three labels."""
    bit = (0, 1)
    x_axis, y_axis = Alphabet("X", bit), Alphabet("Y", bit)
    z_axis = Alphabet("Z", bit)
    labels = Alphabet("L", (0, 1, 2))
    perms = Alphabet("R", tuple(itertools.permutations((0, 1, 2))))

    def share(x, y, z, r):
        a, b, c = r
        return a, (a if y else c), (a if x else b)

    return CmssSpec(
        secret_axes=(x_axis, y_axis, z_axis),
        dealer_randomness=perms,
        share_axes=(Alphabet("M12", labels.symbols), Alphabet("M23", labels.symbols),
                    Alphabet("M31", labels.symbols)),
        share_fn=share,
    )


def and_secret_dist():
    """Uniform independent input bits pushed through AND."""
    bit = (0, 1)
    x_axis, y_axis, z_axis = Alphabet("X", bit), Alphabet("Y", bit), Alphabet("Z", bit)
    ch = Channel.from_function(x_axis, y_axis, z_axis, lambda x, y: x & y)
    return join(JointDist.uniform((x_axis, y_axis)), ch)


@dataclass
class SeparationReport:
    cmss_bounds: dict  # link -> share lower bound
    protocol_bounds: dict  # link -> transcript lower bound
    gaps: dict  # link -> protocol bound minus share bound (clamped at 0)
    scheme_entropies: dict  # achieved share entropies, when a scheme is known

    def to_json(self):
        return {
            "cmss_bounds": self.cmss_bounds,
            "protocol_bounds": self.protocol_bounds,
            "gaps": self.gaps,
            "scheme_entropies": self.scheme_entropies,
        }


def separation_report(ch=None, p_xy=None, cfg=None):
    """Dealer-vs-protocol gap for a channel (default: AND, uniform inputs).

    For AND the known three-label scheme achieves the share bounds, so the
    Alice-Bob gap is the protocol bound minus log 3.
    """
    cfg = cfg or OptConfig()
    is_and = ch is None
    if ch is None:
        bit = (0, 1)
        x_axis, y_axis, z_axis = Alphabet("X", bit), Alphabet("Y", bit), Alphabet("Z", bit)
        ch = Channel.from_function(x_axis, y_axis, z_axis, lambda x, y: x & y)
    if p_xy is None:
        p_xy = JointDist.uniform((ch.x_axis, ch.y_axis))
    report = bounds_mod.best_bounds(p_xy, ch, cfg)
    p_xyz = join(p_xy, ch)
    cm = bounds_mod.cmss_bounds(p_xyz, cfg)
    proto = {link: report.link(link).value for link in ("m12", "m23", "m31")}
    cmss_vals = {link: cm[link].value for link in ("m12", "m23", "m31")}
    gaps = {link: max(proto[link] - cmss_vals[link], 0.0) for link in proto}
    scheme = {}
    if is_and:
        scheme = share_entropies(cmss_joint(and_cmss(), and_secret_dist()))
    return SeparationReport(
        cmss_bounds=cmss_vals, protocol_bounds=proto, gaps=gaps, scheme_entropies=scheme
    )


def cmss_to_json(spec):
    from .dists import alphabet_to_json, sym_str

    rows = []
    for x in spec.secret_axes[0]:
        for y in spec.secret_axes[1]:
            for z in spec.secret_axes[2]:
                for r in spec.dealer_randomness:
                    m12, m23, m31 = spec.share_fn(x, y, z, r)
                    rows.append(
                        {
                            "t": [sym_str(s) for s in (x, y, z, r)],
                            "shares": [sym_str(s) for s in (m12, m23, m31)],
                        }
                    )
    return {
        "secret_axes": [alphabet_to_json(a) for a in spec.secret_axes],
        "dealer_randomness": alphabet_to_json(spec.dealer_randomness),
        "share_axes": [alphabet_to_json(a) for a in spec.share_axes],
        "share_map": rows,
    }


def cmss_from_json(obj):
    from .dists import alphabet_from_json

    secret_axes = tuple(alphabet_from_json(a) for a in obj["secret_axes"])
    randomness = alphabet_from_json(obj["dealer_randomness"])
    share_axes = tuple(alphabet_from_json(a) for a in obj["share_axes"])
    table = {tuple(str(s) for s in row["t"]): tuple(str(s) for s in row["shares"])
             for row in obj["share_map"]}

    def share_fn(x, y, z, r):
        return table[(x, y, z, r)]

    return CmssSpec(secret_axes, randomness, share_axes, share_fn)
