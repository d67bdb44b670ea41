"""Exact execution and verification of finite 3-party protocols.

A protocol is a static schedule of deterministic message maps over declared
finite alphabets, with one uniform randomness symbol per party drawn up
front (resampling makes this lossless for honest executions). Execution
enumerates every (x, y, r1, r2, r3) branch and accumulates the exact joint
over inputs, output and the three link transcripts; all security checks are
entropy statements on that joint.

Built-ins: the one-time-pad group adder, the masked arithmetic sum, the
controlled erasure transfer, remote one-out-of-m OT, and the permutation
based AND.
"""

import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .dists import (
    Alphabet,
    CapacityError,
    Channel,
    JointDist,
    SUPPORT_EPS,
    ZERO_TOL,
    alphabet_from_json,
    alphabet_to_json,
    cond_entropy,
    cond_mutual_info,
    dist_from_json,
    dist_to_json,
    entropy,
    mutual_info,
    sym_str,
)

BRANCH_CAP = 10_000_000
CELL_CAP = 50_000_000

X, Y, Z, M12, M23, M31 = range(6)
_PARTY_LINKS = {1: ("12", "31"), 2: ("12", "23"), 3: ("23", "31")}


class ProtocolSpecError(ValueError):
    """A message map stepped outside its declared alphabet."""


@dataclass(frozen=True)
class View:
    """What a sender can read when producing a message: its own input (None
    for Charlie), its randomness, and the transcripts on its two links."""

    inp: object
    rand: object
    links: dict


@dataclass(frozen=True)
class Round:
    sender: int
    receiver: int
    alphabet: Alphabet
    fn: object  # fn(View) -> symbol

    def link(self):
        return {frozenset((1, 2)): "12", frozenset((2, 3)): "23", frozenset((1, 3)): "31"}[
            frozenset((self.sender, self.receiver))
        ]


@dataclass(frozen=True)
class ProtocolSpec:
    x_axis: Alphabet
    y_axis: Alphabet
    z_axis: Alphabet
    randomness: tuple  # three Alphabets, possibly trivial
    rounds: tuple
    output_fn: object  # fn(r3, m23_tuple, m31_tuple) -> z symbol
    designed_for: object = None

    def __post_init__(self):
        for rnd in self.rounds:
            if rnd.sender not in (1, 2, 3) or rnd.receiver not in (1, 2, 3):
                raise ProtocolSpecError("parties are 1, 2, 3")
            if rnd.sender == rnd.receiver:
                raise ProtocolSpecError("sender and receiver must differ")

    def link_rounds(self, link):
        return [r for r in self.rounds if r.link() == link]


@dataclass
class ExecutionJoint:
    """Exact joint over (X, Y, Z, M12, M23, M31); transcripts are tuples of
    the symbols exchanged on the link in schedule order."""

    joint: JointDist

    def h(self, link):
        return entropy(self.joint, {"m12": (M12,), "m23": (M23,), "m31": (M31,)}[link])


def _link_alphabet(spec, link):
    rounds = spec.link_rounds(link)
    syms = tuple(itertools.product(*(r.alphabet.symbols for r in rounds)))
    return Alphabet("M" + link, syms if syms else ((),))


def run_exact(spec, p_xy, branch_cap=BRANCH_CAP):
    """Enumerate all branches and return the exact execution joint."""
    if p_xy.n_axes != 2 or p_xy.axes[0] != spec.x_axis or p_xy.axes[1] != spec.y_axis:
        raise ValueError("input distribution axes do not match the protocol")
    r1, r2, r3 = spec.randomness
    branches = len(spec.x_axis) * len(spec.y_axis) * len(r1) * len(r2) * len(r3)
    if branches > branch_cap:
        raise CapacityError("%d branches exceed cap %d" % (branches, branch_cap))
    axes = (
        spec.x_axis,
        spec.y_axis,
        spec.z_axis,
        _link_alphabet(spec, "12"),
        _link_alphabet(spec, "23"),
        _link_alphabet(spec, "31"),
    )
    cells = int(np.prod([len(a) for a in axes]))
    if cells > CELL_CAP:
        raise CapacityError("%d joint cells exceed cap %d" % (cells, CELL_CAP))
    probs = np.zeros(tuple(len(a) for a in axes))
    r_weight = 1.0 / (len(r1) * len(r2) * len(r3))
    inputs = {1: None, 2: None, 3: None}
    for (x, y), p in p_xy.support():
        ix, iy = spec.x_axis.index(x), spec.y_axis.index(y)
        inputs[1], inputs[2] = x, y
        for v1 in r1:
            for v2 in r2:
                for v3 in r3:
                    rand = {1: v1, 2: v2, 3: v3}
                    transcripts = {"12": [], "23": [], "31": []}
                    for rnd in spec.rounds:
                        view = View(
                            inp=inputs[rnd.sender],
                            rand=rand[rnd.sender],
                            links={l: tuple(transcripts[l]) for l in _PARTY_LINKS[rnd.sender]},
                        )
                        msg = rnd.fn(view)
                        if msg not in rnd.alphabet._index:
                            raise ProtocolSpecError(
                                "round %d->%d produced %r outside its alphabet"
                                % (rnd.sender, rnd.receiver, msg)
                            )
                        transcripts[rnd.link()].append(msg)
                    z = spec.output_fn(v3, tuple(transcripts["23"]), tuple(transcripts["31"]))
                    if z not in spec.z_axis._index:
                        raise ProtocolSpecError("output %r outside the output alphabet" % (z,))
                    probs[
                        ix,
                        iy,
                        spec.z_axis.index(z),
                        axes[M12].index(tuple(transcripts["12"])),
                        axes[M23].index(tuple(transcripts["23"])),
                        axes[M31].index(tuple(transcripts["31"])),
                    ] += p * r_weight
    return ExecutionJoint(joint=JointDist(axes, probs))


# ---------------------------------------------------------------------------
# Security checks (all tolerances 1e-9)


def verify_correctness(e, ch, tol=ZERO_TOL):
    """Charlie's conditional output law equals the channel row on every
    supported input pair."""
    d = e.joint
    p_xyz = d.marginal({X, Y, Z})
    for i, x in enumerate(ch.x_axis):
        for j, y in enumerate(ch.y_axis):
            pxy = p_xyz.probs[i, j].sum()
            if pxy <= SUPPORT_EPS:
                continue
            got = p_xyz.probs[i, j] / pxy
            if np.max(np.abs(got - ch.kernel[i, j])) > tol:
                return False
    return True


def verify_privacy(e, tol=ZERO_TOL):
    """The three curious-party Markov chains, as vanishing conditional MI:
    (against Alice, against Bob, against Charlie)."""
    d = e.joint
    return (
        cond_mutual_info(d, (M12, M31), (Y, Z), (X,)) <= tol,
        cond_mutual_info(d, (M12, M23), (X, Z), (Y,)) <= tol,
        cond_mutual_info(d, (M23, M31), (X, Y), (Z,)) <= tol,
    )


def verify_cutset(e, tol=ZERO_TOL):
    """Each party's cut determines its input/output:
    (H(X|M12,M31), H(Y|M12,M23), H(Z|M23,M31)) all zero."""
    d = e.joint
    return (
        cond_entropy(d, (X,), (M12, M31)) <= tol,
        cond_entropy(d, (Y,), (M12, M23)) <= tol,
        cond_entropy(d, (Z,), (M23, M31)) <= tol,
    )


def verify_info_inequality(e, tol=ZERO_TOL):
    """For independent inputs, unconditioned link MI dominates the MI
    conditioned on the third link, for all three rotations."""
    d = e.joint
    checks = []
    for a, b, c in ((M31, M23, M12), (M12, M31, M23), (M23, M12, M31)):
        lhs = mutual_info(d, (a,), (b,))
        rhs = cond_mutual_info(d, (a,), (b,), (c,))
        checks.append(lhs >= rhs - tol)
    return tuple(checks)


def verify_transcript_independence(
    e, bigraph_connected=None, condition1=None, condition2=None, product_inputs=None, tol=ZERO_TOL
):
    """Transcript-input independences, each checked only when its gating
    flag is True; inapplicable checks come back None."""
    d = e.joint
    out = {}
    out["m12"] = mutual_info(d, (X, Y, Z), (M12,)) <= tol if bigraph_connected else None
    out["m31"] = mutual_info(d, (X, Y, Z), (M31,)) <= tol if condition1 else None
    out["m23"] = mutual_info(d, (X, Y, Z), (M23,)) <= tol if condition2 else None
    if product_inputs:
        out["x_m23"] = mutual_info(d, (X,), (M23,)) <= tol
        out["y_m31"] = mutual_info(d, (Y,), (M31,)) <= tol
    else:
        out["x_m23"] = out["y_m31"] = None
    return out


# ---------------------------------------------------------------------------
# Expected communication under per-round prefix-free codes


def huffman_lengths(weights):
    """Binary Huffman codeword lengths for {label: probability}.

    Merges the two lowest-probability nodes, ties broken lexicographically
    on the smallest label string in each node. A single symbol needs no bits.
    """
    items = sorted(weights.items(), key=lambda kv: str(kv[0]))
    if len(items) == 1:
        return {items[0][0]: 0}
    heap = [(p, str(lab), [lab]) for lab, p in items]
    heapq.heapify(heap)
    depth = {lab: 0 for lab, _ in items}
    while len(heap) > 1:
        p1, k1, l1 = heapq.heappop(heap)
        p2, k2, l2 = heapq.heappop(heap)
        for lab in l1 + l2:
            depth[lab] += 1
        heapq.heappush(heap, (p1 + p2, min(k1, k2), l1 + l2))
    return depth


def expected_lengths(spec, p_xy, execution=None):
    """Expected bits per link when each round's message is Huffman-coded
    conditioned on the link's transcript so far."""
    e = execution or run_exact(spec, p_xy)
    out = {}
    for link, axis_idx in (("12", M12), ("23", M23), ("31", M31)):
        marg = e.joint.marginal({axis_idx})
        support = [(key[0], p) for key, p in marg.support()]
        n_rounds = len(spec.link_rounds(link))
        total = 0.0
        for t in range(n_rounds):
            by_prefix = {}
            for sym, p in support:
                by_prefix.setdefault(sym[:t], {}).setdefault(sym[t], 0.0)
                by_prefix[sym[:t]][sym[t]] += p
            for prefix, cond in by_prefix.items():
                w = sum(cond.values())
                lens = huffman_lengths({m: q / w for m, q in cond.items()})
                total += sum(cond[m] * lens[m] for m in cond)
        out["m" + link] = total
    return out


# ---------------------------------------------------------------------------
# Built-in protocols


@dataclass(frozen=True)
class Builtin:
    name: str
    spec: ProtocolSpec
    channel: Channel
    default_input: JointDist


def _tuples(base, n):
    return tuple(itertools.product(base, repeat=n))


def _trivial(name):
    return Alphabet(name, ("-",))


def _uniform_product(x_axis, y_axis):
    return JointDist.uniform((x_axis, y_axis))


def _bernoulli_power(axis, p1):
    probs = np.array([
        float(np.prod([p1 if b else 1.0 - p1 for b in sym])) for sym in axis.symbols
    ])
    return JointDist((axis,), probs)


def group_add(order=2, n=1):
    """One-time-pad addition in the cyclic group of the given order: Charlie
    keys Bob, the masked sum travels Bob -> Alice -> Charlie."""
    if order < 2:
        raise ValueError("group order must be >= 2")
    syms = _tuples(range(order), n)
    x_axis, y_axis, z_axis = (Alphabet(nm, syms) for nm in ("X", "Y", "Z"))
    r3 = Alphabet("R3", syms)

    def add(a, b):
        return tuple((u + v) % order for u, v in zip(a, b))

    def sub(a, b):
        return tuple((u - v) % order for u, v in zip(a, b))

    rounds = (
        Round(3, 2, Alphabet("K", syms), lambda v: v.rand),
        Round(2, 1, Alphabet("YK", syms), lambda v: add(v.inp, v.links["23"][0])),
        Round(1, 3, Alphabet("XYK", syms), lambda v: add(v.inp, v.links["12"][0])),
    )
    spec = ProtocolSpec(
        x_axis, y_axis, z_axis,
        (_trivial("R1"), _trivial("R2"), r3),
        rounds,
        lambda r, m23, m31: sub(m31[0], r),
    )
    ch = Channel.from_function(x_axis, y_axis, z_axis, add)
    return Builtin("group-add", spec, ch, _uniform_product(x_axis, y_axis))


def sum_protocol(n=1):
    """Arithmetic sum of two bits into {0,1,2}, masked with a uniform
    ternary pad from Charlie, travelling Charlie -> Alice -> Bob -> Charlie."""
    bits = _tuples((0, 1), n)
    tern = _tuples((0, 1, 2), n)
    x_axis, y_axis = Alphabet("X", bits), Alphabet("Y", bits)
    z_axis = Alphabet("Z", tern)
    r3 = Alphabet("R3", tern)

    def add3(a, b):
        return tuple((u + v) % 3 for u, v in zip(a, b))

    def sub3(a, b):
        return tuple((u - v) % 3 for u, v in zip(a, b))

    rounds = (
        Round(3, 1, Alphabet("K", tern), lambda v: v.rand),
        Round(1, 2, Alphabet("KX", tern), lambda v: add3(v.links["31"][0], v.inp)),
        Round(2, 3, Alphabet("KXY", tern), lambda v: add3(v.links["12"][0], v.inp)),
    )
    spec = ProtocolSpec(
        x_axis, y_axis, z_axis,
        (_trivial("R1"), _trivial("R2"), r3),
        rounds,
        lambda r, m23, m31: sub3(m23[0], r),
    )
    ch = Channel.from_function(
        x_axis, y_axis, z_axis, lambda x, y: tuple(a + b for a, b in zip(x, y))
    )
    return Builtin("sum", spec, ch, _uniform_product(x_axis, y_axis))


def erasure(p=0.5, q=0.5, n=1):
    """Controlled erasure: Alice's bit decides whether Charlie sees Bob's bit
    or an erasure (output symbol 2). Bob one-time-pads his input to Charlie
    and hands the key to Alice; Alice reveals her input and the key bits at
    the non-erased positions."""
    bits = _tuples((0, 1), n)
    x_axis, y_axis = Alphabet("X", bits), Alphabet("Y", bits)
    z_axis = Alphabet("Z", _tuples((0, 1, 2), n))
    r2 = Alphabet("R2", bits)

    def xor(a, b):
        return tuple(u ^ v for u, v in zip(a, b))

    reveal_syms = tuple(
        (x, ks) for x in bits for ks in itertools.product((0, 1), repeat=sum(x))
    )

    def reveal(v):
        k = v.links["12"][0]
        return (v.inp, tuple(k[i] for i in range(n) if v.inp[i]))

    def out(r, m23, m31):
        masked = m23[0]
        x, keys = m31[0]
        z, pos = [], 0
        for i in range(n):
            if x[i]:
                z.append(masked[i] ^ keys[pos])
                pos += 1
            else:
                z.append(2)
        return tuple(z)

    rounds = (
        Round(2, 1, Alphabet("K", bits), lambda v: v.rand),
        Round(2, 3, Alphabet("YK", bits), lambda v: xor(v.inp, v.rand)),
        Round(1, 3, Alphabet("XKsel", reveal_syms), reveal),
    )
    spec = ProtocolSpec(
        x_axis, y_axis, z_axis,
        (_trivial("R1"), r2, _trivial("R3")),
        rounds,
        out,
    )
    ch = Channel.from_function(
        x_axis, y_axis, z_axis,
        lambda x, y: tuple(y[i] if x[i] else 2 for i in range(n)),
    )
    p_xy = JointDist(
        (x_axis, y_axis),
        np.outer(_bernoulli_power(x_axis, p).probs, _bernoulli_power(y_axis, q).probs),
    )
    return Builtin("erasure", spec, ch, p_xy)


def remote_ot(m=2, n=1):
    """Remote one-out-of-m OT on n-bit strings: Alice pads all strings and a
    rotation offset to Bob, sends the rotated masked strings to Charlie; Bob
    forwards the rotated index and the one key Charlie needs."""
    strings = _tuples((0, 1), n)
    x_syms = _tuples(strings, m)
    x_axis = Alphabet("X", x_syms)
    y_axis = Alphabet("Y", tuple(range(m)))
    z_axis = Alphabet("Z", strings)
    r1_syms = tuple((k, pi) for k in _tuples(strings, m) for pi in range(m))
    r1 = Alphabet("R1", r1_syms)

    def xor(a, b):
        return tuple(u ^ v for u, v in zip(a, b))

    def masked(v):
        k, pi = v.rand
        return tuple(xor(v.inp[(pi + i) % m], k[(pi + i) % m]) for i in range(m))

    def forward(v):
        k, pi = v.links["12"][0]
        return ((v.inp - pi) % m, k[v.inp])

    rounds = (
        Round(1, 2, Alphabet("KP", r1_syms), lambda v: v.rand),
        Round(1, 3, Alphabet("MS", _tuples(strings, m)), masked),
        Round(2, 3, Alphabet("CK", tuple((c, k) for c in range(m) for k in strings)), forward),
    )
    spec = ProtocolSpec(
        x_axis, y_axis, z_axis,
        (r1, _trivial("R2"), _trivial("R3")),
        rounds,
        lambda r, m23, m31: xor(m31[0][m23[0][0]], m23[0][1]),
    )
    ch = Channel.from_function(x_axis, y_axis, z_axis, lambda x, y: x[y])
    return Builtin("remote-ot", spec, ch, _uniform_product(x_axis, y_axis))


def and_protocol(n=1):
    """AND via a random labelling: Alice deals a random permutation of three
    labels to Bob; each sends Charlie one label (the shared one iff their bit
    is 1), and Charlie outputs whether the labels match."""
    bits = _tuples((0, 1), n)
    x_axis, y_axis = Alphabet("X", bits), Alphabet("Y", bits)
    z_axis = Alphabet("Z", bits)
    perms = tuple(itertools.permutations((0, 1, 2)))
    r1 = Alphabet("R1", _tuples(perms, n))
    tern = _tuples((0, 1, 2), n)

    rounds = (
        Round(1, 2, Alphabet("Perm", _tuples(perms, n)), lambda v: v.rand),
        Round(
            1, 3, Alphabet("LA", tern),
            lambda v: tuple(s[0] if b else s[1] for s, b in zip(v.rand, v.inp)),
        ),
        Round(
            2, 3, Alphabet("LB", tern),
            lambda v: tuple(s[0] if b else s[2] for s, b in zip(v.links["12"][0], v.inp)),
        ),
    )
    spec = ProtocolSpec(
        x_axis, y_axis, z_axis,
        (r1, _trivial("R2"), _trivial("R3")),
        rounds,
        lambda r, m23, m31: tuple(int(a == b) for a, b in zip(m31[0], m23[0])),
    )
    ch = Channel.from_function(
        x_axis, y_axis, z_axis, lambda x, y: tuple(a & b for a, b in zip(x, y))
    )
    return Builtin("and", spec, ch, _uniform_product(x_axis, y_axis))


_BUILTINS = {
    "and": and_protocol,
    "group-add": group_add,
    "sum": sum_protocol,
    "erasure": erasure,
    "remote-ot": remote_ot,
}


def builtin(name, **params):
    """Construct a named built-in; params: order (group-add), m (remote-ot),
    p/q (erasure), n (all)."""
    try:
        fn = _BUILTINS[name]
    except KeyError:
        raise ValueError("unknown builtin %r; have %s" % (name, sorted(_BUILTINS)))
    return fn(**params)


# ---------------------------------------------------------------------------
# JSON form: either {"builtin": name, "params": {...}} or explicit lookup
# tables listing (view -> symbol) for every reachable view.


def _view_json(view):
    row = {"rand": sym_str(view.rand)}
    if view.inp is not None:
        row["input"] = sym_str(view.inp)
    for link, msgs in sorted(view.links.items()):
        row["m" + link] = [sym_str(s) for s in msgs]
    return row


def _view_key(row):
    return (
        row.get("input"),
        row["rand"],
        tuple(tuple(row.get("m" + l, [])) for l in ("12", "23", "31")),
    )


def spec_to_json(spec):
    """Serialize by exhausting every view reachable from any input pair."""
    r1, r2, r3 = spec.randomness
    tables = [dict() for _ in spec.rounds]
    out_table = {}
    inputs = {1: None, 2: None, 3: None}
    for x in spec.x_axis:
        for y in spec.y_axis:
            inputs[1], inputs[2] = x, y
            for v1 in r1:
                for v2 in r2:
                    for v3 in r3:
                        rand = {1: v1, 2: v2, 3: v3}
                        transcripts = {"12": [], "23": [], "31": []}
                        for t, rnd in enumerate(spec.rounds):
                            view = View(
                                inp=inputs[rnd.sender],
                                rand=rand[rnd.sender],
                                links={
                                    l: tuple(transcripts[l]) for l in _PARTY_LINKS[rnd.sender]
                                },
                            )
                            msg = rnd.fn(view)
                            tables[t][_view_key(_view_json(view))] = (view, msg)
                            transcripts[rnd.link()].append(msg)
                        ov = View(inp=None, rand=v3, links={
                            "23": tuple(transcripts["23"]), "31": tuple(transcripts["31"])})
                        z = spec.output_fn(v3, ov.links["23"], ov.links["31"])
                        out_table[_view_key(_view_json(ov))] = (ov, z)
    rounds_json = []
    for t, rnd in enumerate(spec.rounds):
        rounds_json.append(
            {
                "sender": rnd.sender,
                "receiver": rnd.receiver,
                "alphabet": alphabet_to_json(rnd.alphabet),
                "map": [
                    {"view": _view_json(v), "send": sym_str(m)}
                    for v, m in tables[t].values()
                ],
            }
        )
    return {
        "x_axis": alphabet_to_json(spec.x_axis),
        "y_axis": alphabet_to_json(spec.y_axis),
        "z_axis": alphabet_to_json(spec.z_axis),
        "randomness": [alphabet_to_json(a) for a in spec.randomness],
        "rounds": rounds_json,
        "output_map": [
            {"view": _view_json(v), "z": sym_str(z)} for v, z in out_table.values()
        ],
        "designed_for": dist_to_json(spec.designed_for) if spec.designed_for else None,
    }


def spec_from_json(obj):
    """Rebuild a protocol from JSON; symbols become strings."""
    if "builtin" in obj:
        return builtin(obj["builtin"], **obj.get("params", {})).spec
    x_axis = alphabet_from_json(obj["x_axis"])
    y_axis = alphabet_from_json(obj["y_axis"])
    z_axis = alphabet_from_json(obj["z_axis"])
    randomness = tuple(alphabet_from_json(a) for a in obj["randomness"])

    def make_fn(table):
        def fn(view):
            key = _view_key(_view_json(view))
            try:
                return table[key]
            except KeyError:
                raise ProtocolSpecError("no table entry for view %r" % (key,))

        return fn

    rounds = []
    for row in obj["rounds"]:
        table = {_view_key(r["view"]): str(r["send"]) for r in row["map"]}
        rounds.append(
            Round(
                int(row["sender"]),
                int(row["receiver"]),
                alphabet_from_json(row["alphabet"]),
                make_fn(table),
            )
        )

    out_table = {_view_key(r["view"]): str(r["z"]) for r in obj["output_map"]}

    def output_fn(r, m23, m31):
        view = View(inp=None, rand=r, links={"23": m23, "31": m31})
        key = _view_key(_view_json(view))
        try:
            return out_table[key]
        except KeyError:
            raise ProtocolSpecError("no output entry for view %r" % (key,))

    designed = obj.get("designed_for")
    return ProtocolSpec(
        x_axis, y_axis, z_axis, randomness, tuple(rounds), output_fn,
        designed_for=dist_from_json(designed) if designed else None,
    )
