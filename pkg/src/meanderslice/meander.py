"""Meander combinatorics for a coprime pair (p, q).

The orbit of {1..n}, n = p+q, under the two involutions sigma (global
flip) and tau (per-block flip) is a single cycle exactly when p and q are
coprime.  Walking it from the tau-fixed starting point gives a traversal
phi, a chain of roots beta_i = e_{phi(i)} - e_{phi(i+1)}, turning points,
a sign vector and finally the signature invariant of the pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import rootlab


class MeanderError(ValueError):
    pass


class NotCoprimeError(MeanderError):
    pass


@dataclass(frozen=True)
class CoprimePair:
    p: int
    q: int

    def __post_init__(self):
        if not (1 <= self.p <= self.q):
            raise MeanderError("need 1 <= p <= q, got (%d,%d)" % (self.p, self.q))
        if self.p + self.q <= 2:
            raise MeanderError("degenerate: p + q must exceed 2")
        if math.gcd(self.p, self.q) != 1:
            raise NotCoprimeError(
                "gcd(%d,%d)=%d: the orbit splits" % (self.p, self.q, math.gcd(self.p, self.q))
            )
        # coprimality forces exactly one of p, q, n to be even
        assert (self.p % 2 == 0) + (self.q % 2 == 0) + ((self.p + self.q) % 2 == 0) == 1

    @property
    def n(self):
        return self.p + self.q


def sigma(i, n):
    if not 1 <= i <= n:
        raise MeanderError("index %d out of 1..%d" % (i, n))
    return n + 1 - i


def tau(i, p, n):
    if not 1 <= i <= n:
        raise MeanderError("index %d out of 1..%d" % (i, n))
    if i <= p:
        return p + 1 - i
    return n + p + 1 - i


@dataclass(frozen=True)
class Traversal:
    pair: CoprimePair
    phi: tuple  # phi[i-1] is the i-th visited element
    a: int  # starting point, tau-fixed
    b: int  # finishing point

    def position(self, value):
        return self.phi.index(value) + 1


def traversal(pair):
    """Walk the orbit from a, alternating sigma and tau."""
    p, q, n = pair.p, pair.q, pair.n
    if p % 2 == 1:
        a = (p + 1) // 2
        b = (n + 1) // 2 if n % 2 == 1 else p + (q + 1) // 2
    else:
        b = (n + 1) // 2
        a = p + (q + 1) // 2
    assert tau(a, p, n) == a
    phi = [a]
    for i in range(1, n):
        prev = phi[-1]
        nxt = sigma(prev, n) if i % 2 == 1 else tau(prev, p, n)
        assert nxt != prev, "walk stalled before covering the orbit"
        phi.append(nxt)
    if len(set(phi)) != n:
        raise NotCoprimeError("orbit is not a single cycle")
    assert phi[-1] == b
    # the walk must terminate at b: the pending involution fixes it
    pending = sigma(b, n) if n % 2 == 1 else tau(b, p, n)
    assert pending == b
    return Traversal(pair=pair, phi=tuple(phi), a=a, b=b)


def beta_sequence(tr):
    """The chain beta_i = e_{phi(i)} - e_{phi(i+1)}, a simple root system."""
    n = tr.pair.n
    return tuple(
        rootlab.eps_diff(tr.phi[i], tr.phi[i + 1], n) for i in range(n - 1)
    )


def turning_set_closed_form(pair):
    """(A, B) as integer ranges."""
    p, q, n = pair.p, pair.q, pair.n
    A = frozenset(range(p // 2 + 1, p + 1))
    B = frozenset(range(n // 2 + 1, p + (q + 1) // 2 + 1))
    return A, B


def turning_set_sign_flip(pair):
    """Orbit values v where v - sigma(v) and v - tau(v) have opposite
    signs, end points (one difference zero) included."""
    p, n = pair.p, pair.n
    out = set()
    for v in range(1, n + 1):
        ds = v - sigma(v, n)
        dt = v - tau(v, p, n)
        if ds == 0 or dt == 0 or (ds > 0) != (dt > 0):
            out.add(v)
    return frozenset(out)


@dataclass(frozen=True)
class TurningData:
    pair: CoprimePair
    traversal: Traversal
    positions: tuple  # strictly increasing positions t with phi(t) turning
    tags: tuple  # "A" or "B" per position
    labels: tuple  # consecutive ints; odd labels are the A side
    eps: tuple  # eps[i-1] in {+1,-1} for i in 1..n-1
    nil: tuple  # nil[i-1]: a_p shows up in beta_i
    boundary: tuple
    isolated: tuple
    e: int  # exceptional index: beta_e is +- a simple root
    m: int  # the even member of {p, 2p+q, n}

    @property
    def internal_positions(self):
        return self.positions[1:-1]

    def tag_at(self, t):
        return self.tags[self.positions.index(t)]

    def label_at(self, t):
        return self.labels[self.positions.index(t)]

    def position_of_label(self, lab):
        return self.positions[self.labels.index(lab)]


def turning_data(tr, pair=None):
    pair = pair or tr.pair
    p, q, n = pair.p, pair.q, pair.n
    A, B = turning_set_closed_form(pair)
    flips = turning_set_sign_flip(pair)
    if flips != A | B:
        raise MeanderError(
            "turning-point computations disagree for (%d,%d): %r vs %r"
            % (p, q, sorted(flips), sorted(A | B))
        )
    positions = tuple(t for t in range(1, n + 1) if tr.phi[t - 1] in flips)
    tags = tuple("A" if tr.phi[t - 1] in A else "B" for t in positions)
    assert len(positions) == p + 1
    assert positions[0] == 1 and positions[-1] == n
    for x, y in zip(tags, tags[1:]):
        assert x != y, "turning tags must alternate along the orbit"
    first_label = 1 if tags[0] == "A" else 0
    labels = tuple(range(first_label, first_label + p + 1))
    # odd labels sit on the A side under this numbering
    for lab, tag in zip(labels, tags):
        assert (lab % 2 == 1) == (tag == "A")

    betas = beta_sequence(tr)
    eps = [0] * (n - 1)
    for k in range(p):
        t0, t1 = positions[k], positions[k + 1]
        sign = 1 if tags[k] == "A" else -1
        for i in range(t0, t1):
            eps[i - 1] = sign
    assert all(s != 0 for s in eps)

    nil = tuple(rootlab.alpha_p_coefficient(b, p) != 0 for b in betas)
    turning = set(positions)
    boundary = tuple(i in turning or i + 1 in turning for i in range(1, n))
    isolated = tuple(i in turning and i + 1 in turning for i in range(1, n))
    for i in range(n - 1):
        if isolated[i]:
            assert nil[i], "an isolated value must be nil"

    exc = [i for i in range(1, n) if abs(tr.phi[i - 1] - tr.phi[i]) == 1]
    assert len(exc) == 1, "exactly one chain value is +- a simple root"
    e = exc[0]
    m = next(x for x in (p, 2 * p + q, n) if x % 2 == 0)
    alpha_idx = min(tr.phi[e - 1], tr.phi[e])
    assert alpha_idx == m // 2, "exceptional value must be +- a_{m/2}"
    assert not nil[e - 1], "the exceptional value is never nil"

    return TurningData(
        pair=pair,
        traversal=tr,
        positions=positions,
        tags=tags,
        labels=labels,
        eps=tuple(eps),
        nil=nil,
        boundary=boundary,
        isolated=isolated,
        e=e,
        m=m,
    )


@dataclass(frozen=True)
class Signature:
    sg: tuple  # published signature, length p // 2
    full: tuple  # one sign per A turning point, in orbit order
    first_sign: int
    changes: tuple  # run starts j_1=1 < j_2 < ... over `full` (1-based)

    def as_string(self):
        return "".join("+" if s > 0 else "-" for s in self.sg)


def signature(td):
    """Per A turning point: -1 if the nil boundary value is above it,
    +1 if below.  The published signature keeps the first floor(p/2)
    entries; run starts are recorded over the full vector."""
    p = td.pair.p
    full = []
    for t, tag in zip(td.positions, td.tags):
        if tag != "A":
            continue
        above = td.nil[t - 2] if t >= 2 else False
        below = td.nil[t - 1] if t <= td.pair.n - 1 else False
        assert above != below, "exactly one boundary value of an A point is nil"
        full.append(1 if below else -1)
    full = tuple(full)
    if p % 2 == 1:
        assert full and full[0] == 1, "odd p forces a nil value below the first A point"
    changes = [1]
    for j in range(1, len(full)):
        if full[j] != full[j - 1]:
            changes.append(j + 1)
    return Signature(
        sg=full[: p // 2],
        full=full,
        first_sign=full[0] if full else 1,
        changes=tuple(changes),
    )


def coprime_pairs(max_n):
    """All (p,q), p <= q, p+q <= max_n, gcd 1, sorted by (n, p)."""
    out = []
    for n in range(3, max_n + 1):
        for p in range(1, n // 2 + 1):
            q = n - p
            if p <= q and math.gcd(p, q) == 1:
                out.append(CoprimePair(p, q))
    return out


def signature_atlas(max_n):
    """Deterministic table pair -> signature plus image/fiber reports."""
    assert max_n >= 3
    rows = []
    for pair in coprime_pairs(max_n):
        sig = signature(turning_data(traversal(pair)))
        rows.append((pair, sig))
    fibers = {}
    for pair, sig in rows:
        fibers.setdefault(sig.as_string(), []).append((pair.p, pair.q))
    image = sorted(fibers)
    shared = {s: ps for s, ps in fibers.items() if len(ps) > 1}
    return {"rows": rows, "image": image, "fibers": fibers, "shared": shared}
