"""Builds the modified simple root systems for a coprime pair.

Starting from the chain beta_1..beta_{n-1} of the traversal, selected
boundary values are changed by adding interval values so that the signed
list eps_i * beta'_i becomes a directed Hamiltonian path again, with every
changed value contributing the p-th simple root with coefficient -1.
A deterministic rule engine performs the changes from the signature; a
checker certifies the result, and an exhaustive search over admissible
changes provides a fallback.  When the exceptional value is left unchanged
a local repair step replaces it by the negative of an interval value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from . import rootlab
from .meander import beta_sequence, signature, traversal, turning_data


class ConstructionRuleError(RuntimeError):
    """The rule engine hit a state its case analysis does not cover."""


class ConstructionFailed(RuntimeError):
    """Neither the rule engine nor the exhaustive search produced a
    certified result."""


@dataclass(frozen=True)
class IntervalValue:
    s: int  # smaller turning position
    t: int  # larger turning position
    value: tuple  # e_{phi(s)} - e_{phi(t)}
    simple: bool  # consecutive turning points
    sign: int  # +1 iff phi(s) is on the A side


def interval_value(td, s, t):
    if s > t:
        s, t = t, s
    posset = set(td.positions)
    if s == t or s not in posset or t not in posset:
        raise ValueError("(%d,%d) are not distinct turning positions" % (s, t))
    phi = td.traversal.phi
    n = td.pair.n
    value = rootlab.eps_diff(phi[s - 1], phi[t - 1], n)
    simple = td.positions.index(t) == td.positions.index(s) + 1
    sign = 1 if td.tag_at(s) == "A" else -1
    return IntervalValue(s=s, t=t, value=value, simple=simple, sign=sign)


@dataclass(frozen=True)
class ChangeEntry:
    index: int  # the changed value beta_index
    span: tuple  # (s, t) turning positions of the added interval value
    case: str  # adjacent | compound | compound-short | isolated-swap | tail
    added: tuple  # the added root vector


@dataclass
class ChangeLedger:
    entries: dict  # index -> ChangeEntry
    chi: dict  # internal A turning position -> matched turning position
    undecided: tuple  # (position d, disposition tag)
    beta_prime: tuple  # values after the rule changes
    fix_entries: dict = field(default_factory=dict)  # index -> new value
    beta_final: tuple = None  # values after the repair step (or beta_prime)

    def final(self):
        return self.beta_final if self.beta_final is not None else self.beta_prime


def _prev_pos(td, t):
    return td.positions[td.positions.index(t) - 1]


def _next_pos(td, t):
    return td.positions[td.positions.index(t) + 1]


def build_pi_star(td, sig):
    """Apply the signature-driven change rules; returns a ChangeLedger.

    Raises ConstructionRuleError whenever an internal consistency rule is
    violated (a nil value selected, a turning point served twice, a
    changed value not elementary with p-th coefficient -1, ...).
    """
    p, n = td.pair.p, td.pair.n
    pos = td.positions
    pos_of = dict(zip(td.labels, pos))
    betas = beta_sequence(td.traversal)
    J = len(sig.full)
    runs = sig.changes
    r = len(runs)
    internal = set(pos[1:-1])

    instructions = {}  # index -> (span, case)
    covered = {}  # turning position -> index changed on its behalf
    chi = {}

    def a_pos(j):
        return pos_of[2 * j - 1]

    def run_bounds(u):
        j0 = runs[u - 1]
        j1 = runs[u] - 1 if u < r else J
        return j0, j1

    def add_instr(idx, span, case, turn):
        if not 1 <= idx <= n - 1:
            raise ConstructionRuleError("index %d out of range" % idx)
        if td.nil[idx - 1]:
            raise ConstructionRuleError("tried to change the nil value beta_%d" % idx)
        if not td.boundary[idx - 1]:
            raise ConstructionRuleError("beta_%d is not a boundary value" % idx)
        if idx in instructions:
            raise ConstructionRuleError("beta_%d changed twice" % idx)
        if turn in covered:
            raise ConstructionRuleError("two changes at turning position %d" % turn)
        instructions[idx] = (span, case)
        covered[turn] = idx

    def partner(t_src, t_b, compound_span=None, short=False):
        # the matched change at the turning position t_b, induced by the
        # change made for t_src
        if t_b in (1, n):
            return
        if t_b > t_src:
            wprime, w = t_b, t_b - 1
        else:
            wprime, w = t_b - 1, t_b
        if td.nil[wprime - 1]:
            # the preferred side is an isolated value: change the other
            # boundary instead, adding that isolated value
            if compound_span is not None:
                raise ConstructionRuleError(
                    "isolated value met a compound change at position %d" % t_b
                )
            if w == t_b:
                span = (_prev_pos(td, t_b), t_b)
            else:
                span = (t_b, _next_pos(td, t_b))
            add_instr(w, span, "isolated-swap", t_b)
        elif compound_span is not None:
            add_instr(wprime, compound_span, "compound-short" if short else "compound", t_b)
        else:
            span = (t_src, t_b) if wprime == t_b else (t_b, t_src)
            add_instr(wprime, span, "adjacent", t_b)

    if sig.first_sign == 1:
        for u in range(1, r + 1, 2):
            j0, j1 = run_bounds(u)
            k = runs[u] if u < r else None
            l = runs[u + 1] if u + 1 < r else None
            for jj in range(j0, j1 + 1):
                t = a_pos(jj)
                if k is not None and jj == k - 1:
                    # last positive point of the run reaches past the
                    # negative run that follows
                    s_pos = pos_of[2 * l - 2] if l is not None else n
                    span = (t, s_pos)
                    if t > 1:
                        add_instr(t - 1, span, "compound", t)
                        chi[t] = s_pos
                    iso1 = pos_of[2 * k - 2] == pos_of[2 * k - 3] + 1
                    if l is not None:
                        short_span = (pos_of[2 * k - 1], s_pos)
                        partner(
                            t,
                            s_pos,
                            compound_span=short_span if iso1 else span,
                            short=iso1,
                        )
                else:
                    if t == 1:
                        continue  # the starting end point takes no change
                    nxt = _next_pos(td, t)
                    add_instr(t - 1, (t, nxt), "adjacent", t)
                    chi[t] = nxt
                    partner(t, nxt)
            if k is not None:
                j0n, j1n = run_bounds(u + 1)
                for jj in range(j0n, j1n + 1):
                    t = a_pos(jj)
                    prv = _prev_pos(td, t)
                    add_instr(t, (prv, t), "adjacent", t)
                    chi[t] = prv
                    partner(t, prv)
        if p % 2 == 1:
            if J >= 2 and sig.full[1] == 1:
                # the point matched from the starting end still changes
                t2 = pos_of[2]
                add_instr(t2, (pos_of[1], t2), "adjacent", t2)
                undecided = (t2, "changed-from-start")
            elif J >= 2:
                l = runs[2] if r > 2 else None
                d_pos = pos_of[2 * l - 2] if l is not None else n
                undecided = (d_pos, "compound-partner" if l is not None else "finishing-end")
            else:
                undecided = (pos_of[2], "finishing-end")
        else:
            undecided = (1, "starting-end")
    else:
        tail = None
        for u in range(1, r + 1, 2):
            j0, j1 = run_bounds(u)
            k = runs[u] if u < r else None
            l = runs[u + 1] if u + 1 < r else None
            for jj in range(j0, j1 + 1):
                if u >= 3 and jj == j0:
                    continue  # already served by the long change of the previous block
                t = a_pos(jj)
                prv = _prev_pos(td, t)
                add_instr(t, (prv, t), "adjacent", t)
                chi[t] = prv
                partner(t, prv)
            if k is None:
                continue
            j0p, j1p = run_bounds(u + 1)
            for jj in range(j0p, j1p + 1):
                t = a_pos(jj)
                nxt = _next_pos(td, t)
                add_instr(t - 1, (t, nxt), "adjacent", t)
                chi[t] = nxt
                partner(t, nxt)
            if l is not None:
                # first negative point after the positive run reaches back
                # past it
                t_a = a_pos(l)
                s_pos = pos_of[2 * k - 2]
                span = (s_pos, t_a)
                add_instr(t_a, span, "compound", t_a)
                chi[t_a] = s_pos
                iso1 = pos_of[2 * l - 1] == pos_of[2 * l - 2] + 1
                short_span = (s_pos, pos_of[2 * l - 3])
                partner(
                    t_a,
                    s_pos,
                    compound_span=short_span if iso1 else span,
                    short=iso1,
                )
            else:
                # trailing positive run: its entry point keeps the value
                # below it and changes the value above by a long interval
                t_d = pos_of[2 * k - 2]
                s_a = a_pos(J)
                add_instr(t_d - 1, (t_d, s_a), "tail", t_d)
                tail = t_d
        undecided = (tail, "tail") if tail is not None else (n, "finishing-end")

    missing = [t for t in internal if t not in covered]
    if missing:
        raise ConstructionRuleError("no change at turning positions %r" % missing)

    beta_prime = list(betas)
    entries = {}
    for idx in sorted(instructions):
        span, case = instructions[idx]
        iv = interval_value(td, *span)
        newv = rootlab.add(betas[idx - 1], iv.value)
        signed = rootlab.scale(td.eps[idx - 1], newv)
        if not rootlab.is_elementary(signed):
            raise ConstructionRuleError("changed beta_%d is not elementary" % idx)
        if rootlab.alpha_p_coefficient(signed, p) != -1:
            raise ConstructionRuleError("changed beta_%d misses coefficient -1" % idx)
        beta_prime[idx - 1] = newv
        entries[idx] = ChangeEntry(index=idx, span=span, case=case, added=iv.value)

    return ChangeLedger(
        entries=entries,
        chi=chi,
        undecided=undecided,
        beta_prime=tuple(beta_prime),
    )


def check_conditions(td, beta_now):
    """Certify conditions (a)-(d) for a candidate list of values.

    (a) the signed values form a directed Hamiltonian path; (b) every
    changed signed value carries the p-th simple root with coefficient -1;
    (c) the exceptional value actually changed; (d) every original signed
    value except the exceptional one stays positive for the new path.
    """
    p, n = td.pair.p, td.pair.n
    betas = beta_sequence(td.traversal)
    beta_star = tuple(
        rootlab.scale(td.eps[i], beta_now[i]) for i in range(n - 1)
    )
    res = {"witness": None}
    try:
        order = rootlab.validate_path_system(beta_star)
        res["a"] = True
    except rootlab.PathSystemError as ex:
        order = None
        res["a"] = False
        res["witness"] = "path: %s (%s)" % (ex, ex.kind)
    changed = [i for i in range(1, n) if beta_now[i - 1] != betas[i - 1]]
    res["changed"] = tuple(changed)
    res["b"] = True
    for i in changed:
        bs = beta_star[i - 1]
        if not rootlab.is_elementary(bs) or rootlab.alpha_p_coefficient(bs, p) != -1:
            res["b"] = False
            res["witness"] = res["witness"] or "coefficient at beta_%d" % i
            break
    res["c"] = beta_now[td.e - 1] != betas[td.e - 1]
    if order is None:
        res["d"] = False
        res["d_all"] = False
    else:
        old_star = [rootlab.scale(td.eps[i], betas[i]) for i in range(n - 1)]
        pos_ok = [rootlab.positive_wrt(v, order) for v in old_star]
        res["d"] = all(ok for i, ok in enumerate(pos_ok, start=1) if i != td.e)
        res["d_all"] = all(pos_ok)
        if not res["d"]:
            bad = [i for i, ok in enumerate(pos_ok, start=1) if not ok and i != td.e]
            res["witness"] = res["witness"] or "negative original values %r" % bad
    res["ok"] = res["a"] and res["b"] and res["c"] and res["d"]
    res["order"] = order
    return res


def exceptional_fix(td, ledger):
    """Repair step when the exceptional value was left unchanged.

    Returns (fixes, beta_final): a dict of replaced values and the full
    repaired list.
    """
    e, n = td.e, td.pair.n
    betas = beta_sequence(td.traversal)
    posset = set(td.positions)
    anchors = [t for t in (e, e + 1) if t in posset]
    if len(anchors) != 1:
        raise ConstructionRuleError("exceptional value without a unique turning point")
    t0 = anchors[0]
    if td.tag_at(t0) != "B":
        raise ConstructionRuleError("exceptional anchor is not on the B side")
    bp = list(ledger.beta_prime)
    fixes = {}
    if t0 in (1, n):
        s = _next_pos(td, 1) if t0 == 1 else _prev_pos(td, n)
        if td.tag_at(s) != "A":
            raise ConstructionRuleError("closest turning point is not on the A side")
        lo, hi = (t0, s) if t0 < s else (s, t0)
        iv = interval_value(td, lo, hi).value
        nil_idx = s - 1 if (s >= 2 and td.nil[s - 2]) else s
        in_support = lo <= nil_idx < hi
        second = None
        if 2 <= s <= n - 1:
            second = s if nil_idx == s - 1 else s - 1
        if in_support and second is not None:
            fixes[second] = rootlab.sub(bp[second - 1], betas[e - 1])
        fixes[e] = rootlab.neg(iv)
    else:
        f = t0 - 1 if t0 - 1 != e else t0
        if f not in ledger.entries:
            raise ConstructionRuleError("second boundary of the anchor was not changed")
        iota1 = ledger.entries[f].added
        fixes[f] = betas[f - 1]  # revert
        fixes[e] = rootlab.neg(iota1)
        cands = [
            i
            for i in ledger.entries
            if i != f and rootlab.is_elementary(rootlab.sub(bp[i - 1], betas[e - 1]))
        ]
        if len(cands) > 1:
            raise ConstructionRuleError("ambiguous re-anchoring of the exceptional value")
        if cands:
            i0 = cands[0]
            fixes[i0] = rootlab.sub(bp[i0 - 1], betas[e - 1])
    beta_final = list(bp)
    for i, v in fixes.items():
        beta_final[i - 1] = v
    return fixes, tuple(beta_final)


def _change_options(td, t):
    """Admissible single changes at the internal turning position t.

    Either boundary value (never a nil one) may change, by adding an
    interval value reaching an odd number of turning steps away on the
    opposite side, provided the signed result is elementary with p-th
    coefficient -1.  Sorted for deterministic enumeration.
    """
    p = td.pair.p
    betas = beta_sequence(td.traversal)
    ti = td.positions.index(t)
    opts = []
    for idx in (t - 1, t):
        if not 1 <= idx <= td.pair.n - 1 or td.nil[idx - 1]:
            continue
        if idx == t - 1:
            spans = [(t, f) for f in td.positions[ti + 1 :: 2]]
        else:
            spans = [(f, t) for f in td.positions[ti - 1 :: -2]]
        for span in spans:
            iv = interval_value(td, *span)
            newv = rootlab.add(betas[idx - 1], iv.value)
            signed = rootlab.scale(td.eps[idx - 1], newv)
            if rootlab.is_elementary(signed) and rootlab.alpha_p_coefficient(signed, p) == -1:
                opts.append((idx, span))
    opts.sort()
    return opts


def exhaustive_solutions(td, first_only=False):
    """Every certified assignment of one admissible change per internal
    turning point, with the repair step applied when only condition (c)
    fails.  Returns a list of ChangeLedger objects in deterministic
    order."""
    betas = beta_sequence(td.traversal)
    internal = list(td.positions[1:-1])
    options = [_change_options(td, t) for t in internal]
    out = []
    for combo in product(*options):
        idxs = [idx for idx, _ in combo]
        if len(set(idxs)) != len(idxs):
            continue
        entries = {}
        beta_prime = list(betas)
        for idx, span in combo:
            iv = interval_value(td, *span)
            beta_prime[idx - 1] = rootlab.add(betas[idx - 1], iv.value)
            entries[idx] = ChangeEntry(index=idx, span=span, case="search", added=iv.value)
        ledger = ChangeLedger(
            entries=entries,
            chi={},
            undecided=(None, "search"),
            beta_prime=tuple(beta_prime),
        )
        res = check_conditions(td, ledger.beta_prime)
        if res["a"] and res["b"] and res["d"] and not res["c"]:
            try:
                fixes, beta_final = exceptional_fix(td, ledger)
            except ConstructionRuleError:
                continue
            res2 = check_conditions(td, beta_final)
            if res2["ok"]:
                ledger.fix_entries = fixes
                ledger.beta_final = beta_final
                out.append(ledger)
        elif res["ok"]:
            ledger.beta_final = ledger.beta_prime
            out.append(ledger)
        if out and first_only:
            break
    return out


@dataclass
class SliceConstruction:
    pair: object
    traversal: object
    turning: object
    sig: object
    ledger: ChangeLedger
    pi_star: tuple  # the signed values after the rules, before any repair
    pi_final: tuple  # after the repair step (equal to pi_star without one)
    order: tuple  # path order of pi_final
    used_exceptional_fix: bool
    construction_mode: str  # "rule-based" | "search-fallback"
    checks: dict

    @property
    def changed(self):
        return self.checks["changed"]


def construct(pair):
    """Full pipeline for one coprime pair."""
    tr = traversal(pair)
    td = turning_data(tr)
    sig = signature(td)
    mode = "rule-based"
    ledger = None
    checks = None
    used_fix = False
    try:
        ledger = build_pi_star(td, sig)
        checks = check_conditions(td, ledger.beta_prime)
        if checks["a"] and checks["b"] and checks["d"] and not checks["c"]:
            fixes, beta_final = exceptional_fix(td, ledger)
            ledger.fix_entries = fixes
            ledger.beta_final = beta_final
            used_fix = True
            checks = check_conditions(td, beta_final)
        else:
            ledger.beta_final = ledger.beta_prime
        ok = checks["ok"]
    except ConstructionRuleError:
        ok = False
    if not ok:
        mode = "search-fallback"
        found = exhaustive_solutions(td, first_only=True)
        if not found:
            raise ConstructionFailed(
                "no certified construction for (%d,%d)" % (pair.p, pair.q)
            )
        ledger = found[0]
        used_fix = bool(ledger.fix_entries)
        checks = check_conditions(td, ledger.final())
        assert checks["ok"]
    n = pair.n
    pi_star = tuple(
        rootlab.scale(td.eps[i], ledger.beta_prime[i]) for i in range(n - 1)
    )
    pi_final = tuple(
        rootlab.scale(td.eps[i], ledger.final()[i]) for i in range(n - 1)
    )
    return SliceConstruction(
        pair=pair,
        traversal=tr,
        turning=td,
        sig=sig,
        ledger=ledger,
        pi_star=pi_star,
        pi_final=pi_final,
        order=checks["order"],
        used_exceptional_fix=used_fix,
        construction_mode=mode,
        checks=checks,
    )


def triangularity_order(sc):
    """Total order on 1..n-1 making the rule changes unitriangular.

    Unchanged values come first, then simple-interval changes, then
    compound changes, ties broken by index.  Verified on the pre-repair
    values: each signed changed value must expand over the original signed
    chain with unit diagonal and support only on earlier values.  Raises
    ConstructionRuleError when the expansion breaks the pattern.
    """
    import heapq

    from . import linalg

    td = sc.turning
    n = td.pair.n
    betas = beta_sequence(td.traversal)
    levels = {i: 0 for i in range(1, n)}
    for idx, entry in sc.ledger.entries.items():
        s, t = entry.span
        gap = td.label_at(t) - td.label_at(s)
        compound = entry.case in ("compound", "compound-short") or gap > 1
        levels[idx] = 3 if compound else 2
    old_star = [rootlab.scale(td.eps[i - 1], betas[i - 1]) for i in range(1, n)]
    basis = [rootlab.to_simple_coords(v) for v in old_star]
    cols = list(zip(*basis))  # column j is old_star[j] in simple coords
    expansion = {}
    for i in range(1, n):
        target = rootlab.to_simple_coords(sc.pi_star[i - 1])
        sol = linalg.solve_unique([list(row) for row in cols], list(target))
        if sol is None:
            raise ConstructionRuleError("original chain is not a basis")
        row = {}
        for j in range(1, n):
            cj = sol[j - 1]
            if cj.denominator != 1:
                raise ConstructionRuleError("non-integral expansion at beta_%d" % i)
            if int(cj):
                row[j] = int(cj)
        if row.get(i) != 1:
            raise ConstructionRuleError("diagonal is not 1 at beta_%d" % i)
        expansion[i] = row
    # deterministic topological sort of the dependency graph, smallest
    # (level, index) first
    deps = {i: set(j for j in expansion[i] if j != i) for i in range(1, n)}
    users = {i: set() for i in range(1, n)}
    for i, js in deps.items():
        for j in js:
            users[j].add(i)
    heap = [(levels[i], i) for i in range(1, n) if not deps[i]]
    heapq.heapify(heap)
    order = []
    while heap:
        _, i = heapq.heappop(heap)
        order.append(i)
        for u in sorted(users[i]):
            deps[u].discard(i)
            if not deps[u]:
                heapq.heappush(heap, (levels[u], u))
    if len(order) != n - 1:
        raise ConstructionRuleError("cycle detected among the changed values")
    return tuple(order)
