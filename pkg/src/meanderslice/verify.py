"""Exact certification of the adapted pair and its completed element.

Everything here works with integer or rational matrices only: the
nilpotent eta supported on the cascades, the rational diagonal h with
eta-eigenvalue -1, the regularity of eta in the truncated two-block
parabolic, and the completed regular nilpotent built from the modified
simple root system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, rootlab
from .meander import beta_sequence
from .slicebuild import construct

# small primes for fast certified rank lower bounds
_PRIMES = (32749, 32719, 32717)


def matrix_unit(a, b, n):
    m = linalg.zeros(n, n)
    m[a - 1][b - 1] = 1
    return m


def root_matrix(r):
    """The matrix unit x_r = E_{a,b} for the elementary root r = e_a - e_b."""
    a, b = rootlab.elementary_support(r)
    return matrix_unit(a, b, len(r))


@dataclass(frozen=True)
class AdaptedPair:
    pair: object
    eta_support: tuple  # sorted roots beta with x_beta in eta
    alpha: tuple  # the one +- simple root dropped from the union
    h: tuple  # rational diagonal entries h_1..h_n
    m: int  # h-eigenvalue of x_alpha


def h_eigenvalue(h, r):
    """Eigenvalue of ad(diag h) on x_r."""
    return rootlab.dot(h, r)


def adapted_pair(pair):
    """The pair (h, eta): eta supported on the two cascades minus the one
    +- simple root, h the unique block-traceless diagonal with
    h(beta) = -1 on the support."""
    p, q, n = pair.p, pair.q, pair.n
    union = rootlab.kostant_cascade(n) | rootlab.levi_cascade(p, q)
    assert len(union) == n - 1
    alphas = [r for r in union if abs(r.index(1) - r.index(-1)) == 1]
    assert len(alphas) == 1, "the union must contain exactly one +- simple root"
    alpha = alphas[0]
    support = sorted(union - {alpha})
    rows = [list(r) for r in support]
    rows.append([1] * p + [0] * q)  # trace of the first diagonal block
    rows.append([0] * p + [1] * q)  # trace of the second
    rhs = [-1] * len(support) + [0, 0]
    sol = linalg.solve_unique(rows, rhs)
    assert sol is not None, "the eigenvalue system must be non-degenerate"
    h = tuple(sol)
    m = h_eigenvalue(h, alpha)
    assert m.denominator == 1
    m = int(m)
    # closed form for the eigenvalue on the dropped root
    assert 2 * (m + 1) == p * p + q * q + p * q - 1
    return AdaptedPair(pair=pair, eta_support=tuple(support), alpha=alpha, h=h, m=m)


def eta_matrix(ap):
    n = ap.pair.n
    m = linalg.zeros(n, n)
    for r in ap.eta_support:
        a, b = rootlab.elementary_support(r)
        m[a - 1][b - 1] = 1
    return m


def parabolic_basis(pair):
    """Basis of the truncated two-block parabolic: both traceless diagonal
    blocks plus the lower-left corner block.  Each element is a sparse
    dict (row, col) -> coeff, 1-based."""
    p, n = pair.p, pair.n
    basis = []
    for lo, hi in ((1, p), (p + 1, n)):
        for i in range(lo, hi + 1):
            for j in range(lo, hi + 1):
                if i != j:
                    basis.append({(i, j): 1})
        for i in range(lo, hi):
            basis.append({(i, i): 1, (i + 1, i + 1): -1})
    for i in range(p + 1, n + 1):
        for j in range(1, p + 1):
            basis.append({(i, j): 1})
    q = pair.q
    assert len(basis) == p * p + q * q + p * q - 2
    return basis


def _sparse_from_roots(roots):
    out = {}
    for r in roots:
        a, b = rootlab.elementary_support(r)
        out[(a, b)] = out.get((a, b), 0) + 1
    return out


def _sparse_commutator(x, y):
    out = {}
    for (a, b), xv in x.items():
        for (c, d), yv in y.items():
            if b == c:
                out[(a, d)] = out.get((a, d), 0) + xv * yv
            if d == a:
                out[(c, b)] = out.get((c, b), 0) - xv * yv
    return {k: v for k, v in out.items() if v}


def _sparse_trace_product(x, y):
    """trace(x y) for sparse matrices."""
    return sum(v * y.get((b, a), 0) for (a, b), v in x.items())


def skew_form_matrix(pair, ap=None, eta=None):
    """S_{jk} = trace(eta [b_j, b_k]) over the fixed basis of the
    truncated parabolic; alternating and integral."""
    if eta is None:
        ap = ap or adapted_pair(pair)
        eta = _sparse_from_roots(ap.eta_support)
    basis = parabolic_basis(pair)
    d = len(basis)
    # trace(eta [b_j, b_k]) = trace([eta, b_j] b_k)
    derived = [_sparse_commutator(eta, b) for b in basis]
    s = linalg.zeros(d, d)
    for j in range(d):
        dj = derived[j]
        row = s[j]
        for k in range(j + 1, d):
            v = _sparse_trace_product(dj, basis[k])
            if v:
                row[k] = v
                s[k][j] = -v
    return s, basis


def certified_rank(m, upper_bound):
    """Exact rank, fast path first: a modular rank reaching a known upper
    bound certifies the rational rank (a minor that is non-zero mod a
    prime is non-zero); otherwise fall back to fraction-free elimination."""
    for prime in _PRIMES:
        if linalg.rank_mod_prime(m, prime) == upper_bound:
            return upper_bound
    return linalg.rank_int(m)


def eta_regularity(pair, ap=None):
    """Dimension of the centraliser of eta inside the truncated parabolic.

    The kernel of the skew form S is that centraliser.  dim is always odd
    here and S alternating, so rank <= dim - 1 a priori.
    """
    ap = ap or adapted_pair(pair)
    s, basis = skew_form_matrix(pair, ap)
    d = len(basis)
    assert d % 2 == 1, "the truncated parabolic has odd dimension"
    rank = certified_rank(s, d - 1)
    return {
        "dim_p": d,
        "rank": rank,
        "stabiliser_dim": d - rank,
        "regular": d - rank == 1,
    }


def complement_check(pair, ap=None, top_root=None):
    """Check that the coadjoint orbit directions of eta together with the
    functional of x_alpha span the dual of the truncated parabolic."""
    ap = ap or adapted_pair(pair)
    s, basis = skew_form_matrix(pair, ap)
    top = _sparse_from_roots([top_root if top_root is not None else ap.alpha])
    extra = [_sparse_trace_product(top, b) for b in basis]
    rows = [row[:] for row in s] + [extra]
    return certified_rank(rows, len(basis)) == len(basis)


def completed_element(sc):
    """Support of y'': the modified system itself plus, for every changed
    non-exceptional index, the original signed value.  Each added root must
    be positive and non-simple for the new path order."""
    td = sc.turning
    n = td.pair.n
    betas = beta_sequence(td.traversal)
    support = list(sc.pi_final)
    pos = {v: i for i, v in enumerate(sc.order)}
    for i in sc.changed:
        if i == td.e:
            continue
        r = rootlab.scale(td.eps[i - 1], betas[i - 1])
        a, b = rootlab.elementary_support(r)
        if not pos[a] < pos[b]:
            raise ValueError("added root at beta_%d is not positive for the path" % i)
        if pos[b] - pos[a] < 2:
            raise ValueError("added root at beta_%d is simple for the path" % i)
        support.append(r)
    assert len(set(support)) == len(support)
    m = linalg.zeros(n, n)
    for r in support:
        a, b = rootlab.elementary_support(r)
        m[a - 1][b - 1] += 1
    return tuple(sorted(support)), m


def check_regular_nilpotent(mat):
    """A nilpotent n x n matrix is regular iff rank(M^k) = n - k."""
    n = len(mat)
    power = [row[:] for row in mat]
    for k in range(1, n + 1):
        r = linalg.rank_int(power)
        if r != n - k:
            return False
        if r == 0:
            break
        power = linalg.mat_mul(power, mat)
    return True


def check_restriction(sc, ap):
    """Split the support of y'' by the coefficient of the p-th simple root:
    the 0/1 part must be exactly the eta support, the rest must have
    coefficient -1 (hence lie in the complementary nilradical)."""
    p = sc.pair.p
    support, _ = completed_element(sc)
    zero_one = {r for r in support if rootlab.alpha_p_coefficient(r, p) in (0, 1)}
    minus = {r for r in support if rootlab.alpha_p_coefficient(r, p) == -1}
    return {
        "matches_eta": zero_one == set(ap.eta_support),
        "rest_in_nilradical": zero_one | minus == set(support),
        "zero_one": tuple(sorted(zero_one)),
        "minus": tuple(sorted(minus)),
    }


def weyl_permutation(sc):
    """The path order c as a permutation: conjugating the principal
    nilpotent chain E_{c_i, c_{i+1}} back to the standard Jordan chain."""
    n = sc.pair.n
    c = sc.order
    perm = linalg.zeros(n, n)
    for i, v in enumerate(c):
        perm[v - 1][i] = 1  # P e_i = e_{c_i}
    jordan = linalg.zeros(n, n)
    for i in range(n - 1):
        jordan[i][i + 1] = 1
    lhs = linalg.mat_mul(linalg.mat_mul(perm, jordan), linalg.transpose(perm))
    yprime = linalg.zeros(n, n)
    for r in sc.pi_final:
        a, b = rootlab.elementary_support(r)
        yprime[a - 1][b - 1] = 1
    assert lhs == yprime, "path order does not conjugate the Jordan chain to y'"
    return tuple(c)


def full_report(pair, with_stabiliser=True):
    """One pair end to end: construction, adapted pair, regularity of eta
    and of the completed element, restriction and complement checks."""
    sc = construct(pair)
    ap = adapted_pair(pair)
    support, y2 = completed_element(sc)
    regular = check_regular_nilpotent(y2)
    restrict = check_restriction(sc, ap)
    eigen_ok = all(
        h_eigenvalue(ap.h, r) == Fraction(-1) for r in ap.eta_support
    ) and all(h_eigenvalue(ap.h, r).denominator == 1 for r in support)
    report = {
        "pair": (pair.p, pair.q),
        "n": pair.n,
        "signature": sc.sig.as_string(),
        "construction_mode": sc.construction_mode,
        "used_exceptional_fix": sc.used_exceptional_fix,
        "order": sc.order,
        "weyl_perm": weyl_permutation(sc),
        "pi_star": sc.pi_star,
        "pi_final": sc.pi_final,
        "support_y2": support,
        "added_roots": tuple(r for r in support if r not in set(sc.pi_final)),
        "regular_nilpotent": regular,
        "restriction": restrict,
        "h": ap.h,
        "m": ap.m,
        "eta_eigenvalues_ok": eigen_ok,
        "conditions": {k: sc.checks[k] for k in ("a", "b", "c", "d", "ok")},
    }
    if with_stabiliser:
        reg = eta_regularity(pair, ap)
        report["eta_regular"] = reg["regular"]
        report["stabiliser_dim"] = reg["stabiliser_dim"]
        report["complement_ok"] = complement_check(pair, ap)
    ok = (
        report["conditions"]["ok"]
        and regular
        and restrict["matches_eta"]
        and restrict["rest_in_nilradical"]
        and eigen_ok
        and report.get("eta_regular", True)
        and report.get("complement_ok", True)
    )
    report["all_ok"] = ok
    return report


# name used in the interface contract for the adapted-pair solver
eta_and_h = adapted_pair
