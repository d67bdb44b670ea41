"""Exact finite probability distributions and Shannon functionals.

Everything downstream (common information, normal forms, bounds, protocol
simulation) runs on three carriers: a named finite Alphabet, an exact
JointDist over a product of alphabets, and a Channel p(z|x,y). Probabilities
are float64; entropies are in bits.
"""

import itertools
import json

import numpy as np

# support membership: p > SUPPORT_EPS; equality-to-zero tests use ZERO_TOL
SUPPORT_EPS = 1e-12
ZERO_TOL = 1e-9


class CapacityError(Exception):
    """An exact computation would exceed the configured enumeration size."""


class PreconditionError(ValueError):
    """Input violates a documented precondition (normal form, full support...)."""


class Alphabet:
    """Ordered finite set of distinct symbol labels."""

    __slots__ = ("name", "symbols", "_index")

    def __init__(self, name, symbols):
        symbols = tuple(symbols)
        if len(symbols) < 1:
            raise ValueError("alphabet %r needs at least one symbol" % name)
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet %r has duplicate symbols" % name)
        self.name = name
        self.symbols = symbols
        self._index = {s: i for i, s in enumerate(symbols)}

    def index(self, symbol):
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError("symbol %r not in alphabet %r" % (symbol, self.name))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __eq__(self, other):
        return (
            isinstance(other, Alphabet)
            and self.name == other.name
            and self.symbols == other.symbols
        )

    def __hash__(self):
        return hash((self.name, self.symbols))

    def __repr__(self):
        return "Alphabet(%r, %r)" % (self.name, list(self.symbols))


class JointDist:
    """Exact pmf over the product of named alphabets.

    Stored dense as an ndarray of shape (|A1|, ..., |Ak|); must sum to 1
    within 1e-12 and be nonnegative. Immutable after construction.
    """

    __slots__ = ("axes", "probs")

    def __init__(self, axes, probs):
        axes = tuple(axes)
        probs = np.asarray(probs, dtype=float)
        if probs.shape != tuple(len(a) for a in axes):
            raise ValueError(
                "pmf shape %s does not match axes %s"
                % (probs.shape, tuple(len(a) for a in axes))
            )
        if probs.min(initial=0.0) < -SUPPORT_EPS:
            raise ValueError("negative probability in pmf")
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-12 * max(1.0, probs.size ** 0.5):
            raise ValueError("pmf sums to %.17g, not 1" % total)
        probs = np.clip(probs, 0.0, None)
        probs.setflags(write=False)
        self.axes = axes
        self.probs = probs

    @classmethod
    def from_pmf(cls, axes, pmf):
        """Build from a {symbol-tuple: probability} map of support points."""
        axes = tuple(axes)
        probs = np.zeros(tuple(len(a) for a in axes))
        for key, p in pmf.items():
            if len(key) != len(axes):
                raise ValueError("pmf key %r has arity %d, expected %d" % (key, len(key), len(axes)))
            probs[tuple(a.index(s) for a, s in zip(axes, key))] += p
        return cls(axes, probs)

    @classmethod
    def uniform(cls, axes):
        axes = tuple(axes)
        size = int(np.prod([len(a) for a in axes]))
        return cls(axes, np.full(tuple(len(a) for a in axes), 1.0 / size))

    @property
    def n_axes(self):
        return len(self.axes)

    def axis_index(self, name):
        for i, a in enumerate(self.axes):
            if a.name == name:
                return i
        raise ValueError("no axis named %r" % name)

    def prob(self, key):
        return float(self.probs[tuple(a.index(s) for a, s in zip(self.axes, key))])

    def support(self):
        """Yield (symbol-tuple, probability) for every support point."""
        for idx in np.argwhere(self.probs > SUPPORT_EPS):
            yield tuple(a.symbols[i] for a, i in zip(self.axes, idx)), float(self.probs[tuple(idx)])

    def marginal(self, axes_idx):
        # kept axes stay in their original order
        axes_idx = _check_axis_set(self, axes_idx, "axes")
        keep = sorted(axes_idx)
        drop = tuple(i for i in range(self.n_axes) if i not in axes_idx)
        return JointDist(
            tuple(self.axes[i] for i in keep), self.probs.sum(axis=drop) if drop else self.probs
        )

    def group_axes(self, groups, names=None):
        """Collapse axis groups into composite tuple-symbol axes.

        groups: list of index tuples partitioning a subset of the axes; axes
        not listed are dropped (marginalized). Used to take residual
        information between composite variables like (U,T) and (V,W).
        """
        flat = [i for g in groups for i in g]
        if len(set(flat)) != len(flat):
            raise ValueError("axis groups overlap")
        m = self.marginal(set(flat)) if set(flat) != set(range(self.n_axes)) else self
        pos = {i: k for k, i in enumerate(sorted(set(flat)))}
        order = [pos[i] for g in groups for i in g]
        probs = np.transpose(m.probs, order)
        sizes = [int(np.prod([len(self.axes[i]) for i in g])) for g in groups]
        probs = probs.reshape(sizes)
        axes = []
        for gi, g in enumerate(groups):
            syms = tuple(itertools.product(*(self.axes[i].symbols for i in g)))
            name = names[gi] if names else "+".join(self.axes[i].name for i in g)
            axes.append(Alphabet(name, syms))
        return JointDist(axes, probs)

    def __eq__(self, other):
        return (
            isinstance(other, JointDist)
            and self.axes == other.axes
            and np.array_equal(self.probs, other.probs)
        )

    def __repr__(self):
        return "JointDist(axes=%r, support=%d)" % (
            [a.name for a in self.axes],
            int((self.probs > SUPPORT_EPS).sum()),
        )


class Channel:
    """Conditional distribution p(z|x,y) over finite alphabets.

    kernel has shape (|X|, |Y|, |Z|); every (x, y) row sums to 1 within 1e-12.
    """

    __slots__ = ("x_axis", "y_axis", "z_axis", "kernel")

    def __init__(self, x_axis, y_axis, z_axis, kernel):
        kernel = np.asarray(kernel, dtype=float)
        if kernel.shape != (len(x_axis), len(y_axis), len(z_axis)):
            raise ValueError("kernel shape %s does not match alphabets" % (kernel.shape,))
        if kernel.min(initial=0.0) < -SUPPORT_EPS:
            raise ValueError("negative probability in kernel")
        rows = kernel.sum(axis=2)
        if np.max(np.abs(rows - 1.0)) > 1e-12 * max(1.0, len(z_axis) ** 0.5):
            raise ValueError("kernel rows must sum to 1")
        kernel = np.clip(kernel, 0.0, None)
        kernel.setflags(write=False)
        self.x_axis = x_axis
        self.y_axis = y_axis
        self.z_axis = z_axis
        self.kernel = kernel

    @classmethod
    def from_function(cls, x_axis, y_axis, z_axis, fn):
        """Deterministic channel z = fn(x, y)."""
        kernel = np.zeros((len(x_axis), len(y_axis), len(z_axis)))
        for i, x in enumerate(x_axis):
            for j, y in enumerate(y_axis):
                kernel[i, j, z_axis.index(fn(x, y))] = 1.0
        return cls(x_axis, y_axis, z_axis, kernel)

    def row(self, x, y):
        return self.kernel[self.x_axis.index(x), self.y_axis.index(y)]

    def __eq__(self, other):
        return (
            isinstance(other, Channel)
            and (self.x_axis, self.y_axis, self.z_axis)
            == (other.x_axis, other.y_axis, other.z_axis)
            and np.array_equal(self.kernel, other.kernel)
        )

    def __repr__(self):
        return "Channel(%s x %s -> %s)" % (self.x_axis.name, self.y_axis.name, self.z_axis.name)


def _check_axis_set(d, axes, what):
    axes = tuple(axes)
    if len(axes) == 0:
        raise ValueError("%s must be non-empty" % what)
    if len(set(axes)) != len(axes):
        raise ValueError("%s contains duplicate indices" % what)
    for i in axes:
        if not isinstance(i, (int, np.integer)) or not (0 <= i < d.n_axes):
            raise ValueError("invalid axis index %r for %d-axis distribution" % (i, d.n_axes))
    return set(int(i) for i in axes)


def entropy_of_array(p):
    """H of a raw probability array in bits, with 0 log 0 := 0."""
    p = np.asarray(p, dtype=float)
    mask = p > SUPPORT_EPS
    vals = p[mask]
    return float(-(vals * np.log2(vals)).sum())


def entropy(d, axes):
    """H of the marginal of d on the given axis indices, in bits."""
    axes = _check_axis_set(d, axes, "axes")
    drop = tuple(i for i in range(d.n_axes) if i not in axes)
    p = d.probs.sum(axis=drop) if drop else d.probs
    return entropy_of_array(p)


def cond_entropy(d, target_axes, given_axes=()):
    """H(target | given) = H(target u given) - H(given); >= 0 up to 1e-12."""
    target = _check_axis_set(d, target_axes, "target_axes")
    given = set()
    if given_axes:
        given = _check_axis_set(d, given_axes, "given_axes")
    if target & given:
        raise ValueError("target and given axis sets overlap")
    if not given:
        return entropy(d, target)
    return max(entropy(d, target | given) - entropy(d, given), 0.0)


def mutual_info(d, axes_a, axes_b):
    """I(A;B) = H(A) + H(B) - H(A,B), clamped to >= 0."""
    a = _check_axis_set(d, axes_a, "axes_a")
    b = _check_axis_set(d, axes_b, "axes_b")
    if a & b:
        raise ValueError("axis sets overlap")
    return max(entropy(d, a) + entropy(d, b) - entropy(d, a | b), 0.0)


def cond_mutual_info(d, axes_a, axes_b, given_axes):
    """I(A;B|C) via entropies, clamped to >= 0."""
    a = _check_axis_set(d, axes_a, "axes_a")
    b = _check_axis_set(d, axes_b, "axes_b")
    c = _check_axis_set(d, given_axes, "given_axes")
    if (a & b) or (a & c) or (b & c):
        raise ValueError("axis sets overlap")
    v = entropy(d, a | c) + entropy(d, b | c) - entropy(d, a | b | c) - entropy(d, c)
    return max(v, 0.0)


def join(p_xy, ch):
    """p(x,y,z) = p(x,y) p(z|x,y)."""
    if p_xy.n_axes != 2 or p_xy.axes[0] != ch.x_axis or p_xy.axes[1] != ch.y_axis:
        raise ValueError("input distribution axes do not match channel alphabets")
    probs = p_xy.probs[:, :, None] * ch.kernel
    return JointDist((ch.x_axis, ch.y_axis, ch.z_axis), probs)


def product(p_a, p_b):
    """Independent product; axes are concatenated."""
    shape = p_a.probs.shape + p_b.probs.shape
    probs = np.outer(p_a.probs.ravel(), p_b.probs.ravel()).reshape(shape)
    return JointDist(p_a.axes + p_b.axes, probs)


def dist_power(p, n, name=None):
    """n-fold iid power of a 1-axis distribution, over length-n tuple symbols."""
    if p.n_axes != 1:
        raise ValueError("dist_power expects a 1-axis distribution")
    axis = p.axes[0]
    syms = tuple(itertools.product(axis.symbols, repeat=n))
    probs = p.probs.copy()
    out = probs
    for _ in range(n - 1):
        out = np.outer(out, probs).ravel()
    return JointDist((Alphabet(name or axis.name, syms),), out.reshape(len(syms)))


def channel_power(ch, n):
    """n-fold iid power of a channel, over length-n tuple symbols."""
    x2 = Alphabet(ch.x_axis.name, tuple(itertools.product(ch.x_axis.symbols, repeat=n)))
    y2 = Alphabet(ch.y_axis.name, tuple(itertools.product(ch.y_axis.symbols, repeat=n)))
    z2 = Alphabet(ch.z_axis.name, tuple(itertools.product(ch.z_axis.symbols, repeat=n)))
    kernel = np.ones((len(x2), len(y2), len(z2)))
    for i, xs in enumerate(x2.symbols):
        for j, ys in enumerate(y2.symbols):
            for k, zs in enumerate(z2.symbols):
                v = 1.0
                for t in range(n):
                    v *= ch.kernel[
                        ch.x_axis.index(xs[t]), ch.y_axis.index(ys[t]), ch.z_axis.index(zs[t])
                    ]
                kernel[i, j, k] = v
    return Channel(x2, y2, z2, kernel)


# ---------------------------------------------------------------------------
# JSON serialization. Symbols are rendered as strings; loading yields
# string-symbol objects, which is the intended interchange form.

def sym_str(s):
    if isinstance(s, str):
        return s
    if isinstance(s, tuple):
        return "(" + ",".join(sym_str(v) for v in s) + ")"
    return str(s)


def alphabet_to_json(a):
    return {"name": a.name, "symbols": [sym_str(s) for s in a.symbols]}


def alphabet_from_json(obj):
    return Alphabet(obj["name"], [str(s) for s in obj["symbols"]])


def dist_to_json(d):
    return {
        "axes": [alphabet_to_json(a) for a in d.axes],
        "pmf": [{"t": [sym_str(s) for s in key], "p": p} for key, p in d.support()],
    }


def dist_from_json(obj):
    axes = [alphabet_from_json(a) for a in obj["axes"]]
    pmf = {tuple(str(s) for s in row["t"]): float(row["p"]) for row in obj["pmf"]}
    return JointDist.from_pmf(axes, pmf)


def channel_to_json(ch):
    rows = []
    for x in ch.x_axis:
        for y in ch.y_axis:
            row = {
                sym_str(z): float(p)
                for z, p in zip(ch.z_axis.symbols, ch.row(x, y))
                if p > SUPPORT_EPS
            }
            rows.append({"t": [sym_str(x), sym_str(y)], "row": row})
    return {
        "axes": [alphabet_to_json(ch.x_axis), alphabet_to_json(ch.y_axis), alphabet_to_json(ch.z_axis)],
        "kernel": rows,
    }


def channel_from_json(obj):
    x_axis, y_axis, z_axis = (alphabet_from_json(a) for a in obj["axes"])
    kernel = np.zeros((len(x_axis), len(y_axis), len(z_axis)))
    for row in obj["kernel"]:
        i = x_axis.index(str(row["t"][0]))
        j = y_axis.index(str(row["t"][1]))
        for z, p in row["row"].items():
            kernel[i, j, z_axis.index(str(z))] = float(p)
    return Channel(x_axis, y_axis, z_axis, kernel)


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)
