"""Exit criteria.  Each test prints one line: ``[criterion k] PASS|FAIL  detail  (t s / budget s)``.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or ``python tests/test_acceptance.py``.
"""
import random
import sys
import time
from fractions import Fraction
from itertools import product
from math import factorial

import pytest

from twistcyc import complexes as cx
from twistcyc import verify
from twistcyc.barcomplex import (BarChain, GroupRep, bar_boundary, boundary_rows, coinvariant_dim, cyclic,
                                 cyclic_rotation_rep, decomposable_cycle, group_homology, s3_sign_rep,
                                 s3_standard_rep, sign_rep)
from twistcyc.cli import run as cli_run
from twistcyc.exactfield import QQ_I, ExactMatrix
from twistcyc.geometry import (PositiveSubspace, PreconditionError, RationalQuadraticForm,
                               complementary_tuple_search, sample_pointwise_stabilizer)
from twistcyc.intersect import DecomposableCycle, agrees_with_cup, check_general_position, intersect
from twistcyc.localsys import LocalSystem, PairingRule, cohomology, homology, pairing_matrix
from twistcyc.schur import QuadraticSpace, invariance_check, pair_invariants, tau, torus_element, witt_u
from twistcyc.weights import branch

pytestmark = pytest.mark.acceptance


def report(k, ok, detail, elapsed, budget):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    line = f"[criterion {k}] {status}  {detail}  ({elapsed:.2f} s / {budget} s)"
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()
    assert ok, line
    assert elapsed < budget, line


# independent enumerations --------------------------------------------------------

def weights_for(n, max_size):
    m = (n + 1) // 2
    for e in product(range(max_size + 1), repeat=m):
        if sum(e) <= max_size and all(a >= b for a, b in zip(e, e[1:])):
            yield e


def all_partitions(total):
    if total == 0:
        yield ()
        return

    def rec(rem, cap):
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, cap), 0, -1):
            for rest in rec(rem - first, first):
                yield (first,) + rest
    yield from rec(total, total)


def interlacing(mu):
    """All nu with mu_1 >= nu_1 >= mu_2 >= nu_2 >= ... (brute force over boxes)."""
    mu = list(mu)
    out = set()
    for nu in product(*[range(mu[i + 1] if i + 1 < len(mu) else 0, mu[i] + 1) for i in range(len(mu))]):
        out.add(tuple(b for b in nu if b))
    return out


def col_group_order(mu):
    parts = [b for b in mu if b]
    cols = [sum(1 for b in parts if b > c) for c in range(parts[0])] if parts else []
    out = 1
    for c in cols:
        out *= factorial(c)
    return out


def i_of(mu):
    return sum(1 for b in mu if b)


# criteria --------------------------------------------------------------------------

def test_criterion_1_range_tables():
    t0 = time.perf_counter()
    bad, count = [], 0
    for n in range(2, 8):
        m = (n + 1) // 2
        for mu in weights_for(n, 4):
            code, out = cli_run(["ranges", "--n", str(n), "--mu", ",".join(map(str, mu))])
            i = i_of(mu)
            expected = [] if (n % 2 == 1 and i == m) else list(range(i, n - i + 1))
            count += 1
            if code != 0 or out["degrees"] != expected or out["i"] != i or out["vanishes"] != (expected == []):
                bad.append((n, mu, out))
    code, out = cli_run(["ranges", "--n", "6", "--mu", "1,1,1"])
    special = out["degrees"] == [3]
    report(1, not bad and special, f"{count} (n, mu) pairs, n=6 mu=(1,1,1) -> {out['degrees']}; mismatches {bad[:3]}",
           time.perf_counter() - t0, 1)


def test_criterion_2_invariant_pairing():
    t0 = time.perf_counter()
    bad, count = [], 0
    for n in (3, 4, 5, 6):
        sp = QuadraticSpace.diagonal([1] * n + [-1], QQ_I)
        for mu in weights_for(n, 4):
            k = i_of(mu)
            e = [[Fraction(int(i == j)) for i in range(n + 1)] for j in range(k)]
            u = [v.coords() for v in witt_u(sp, n, k)]
            value = pair_invariants(e, u, mu, sp)
            oracle = verify.oracle_pairing(e, u, mu, sp.gram)
            expected = Fraction(1, col_group_order(mu))
            count += 1
            if not (value == oracle == expected):
                bad.append((n, mu, value, oracle, expected))
    report(2, not bad, f"{count} (n, mu) pairs equal 1/|Q_mu| and the brute-force oracle; mismatches {bad[:3]}",
           time.perf_counter() - t0, 120)


def test_criterion_3_branching_bound():
    t0 = time.perf_counter()
    bad, count = [], 0
    for total in range(1, 6):
        for mu in all_partitions(total):
            nus = {tuple(b for b in nu if b) for nu in branch(mu)}
            i = i_of(mu)
            seen = {i_of(nu) for nu in nus}
            count += 1
            if nus != interlacing(mu) or seen != {i - 1, i}:
                bad.append((mu, seen))
    report(3, not bad, f"{count} partitions with 1 <= |mu| <= 5; failures {bad[:3]}", time.perf_counter() - t0, 1)


def _random_pair(rng):
    kind = rng.randrange(5)
    r = rng.randint(1, 2)
    if kind == 0:
        X = cx.random_graph(rng.randint(3, 7), rng.randint(2, 12), rng)
        return X, cx.random_graph_system(X, r, rng)
    if kind == 1:
        X = cx.circle(rng.randint(3, 6))
        return X, cx.circle_system(X, cx.random_invertible(r, rng))
    if kind == 2:
        T = cx.Torus(2, 3)
        return T.complex, T.system(cx.random_commuting(r, 2, rng))
    if kind == 3:
        X = rng.choice([cx.octahedron(), cx.boundary_of_simplex(3), cx.seven_vertex_torus()])
        return X, cx.random_gauge(LocalSystem.trivial(X, r), rng, 0.5)
    T = cx.Torus(3, 3)
    return T.complex, T.system(cx.random_commuting(1, 3, rng))


def test_criterion_4_twisted_homology():
    t0 = time.perf_counter()
    X = cx.circle(3)
    circle_ok = all(
        [homology(X, cx.circle_system(X, lam), p).dim for p in (0, 1)] == ([1, 1] if lam == 1 else [0, 0])
        for lam in (1, 2, -1, Fraction(1, 3), Fraction(-5, 2)))
    T = cx.Torus(2, 3)
    torus_ok = [homology(T.complex, T.system([2, 1]), p).dim for p in range(3)] == [0, 0, 0]
    rng = random.Random(4)
    bad = []
    for trial in range(50):
        Y, L = _random_pair(rng)
        alt = sum((-1) ** p * homology(Y, L, p, basis=False).dim for p in range(Y.dim + 1))
        if alt != Y.euler_characteristic() * L.rank:
            bad.append((trial, Y.name))
    report(4, circle_ok and torus_ok and not bad,
           f"circle ok={circle_ok}, torus(2,1) ok={torus_ok}, Euler identity on 50 random pairs (seed 4), "
           f"failures {bad[:3]}", time.perf_counter() - t0, 60)


def test_criterion_5_duality_and_pairing():
    t0 = time.perf_counter()
    rng = random.Random(5)
    cases = []
    for _ in range(3):
        X = cx.circle(rng.randint(3, 5))
        cases.append((X, cx.circle_system(X, cx.random_invertible(rng.randint(1, 2), rng))))
    cases.append((cx.circle(3), cx.circle_system(cx.circle(3), [[1, 1], [0, 1]])))
    for r in (1, 2):
        X = cx.octahedron()
        cases.append((X, cx.random_gauge(LocalSystem.trivial(X, r), rng, 0.6)))
    for r in (1, 2, 2):
        T = cx.Torus(2, 3)
        cases.append((T.complex, T.system(cx.random_commuting(r, 2, rng))))
    T2 = cx.Torus(2, 3)
    cases.append((T2.complex, T2.system([ExactMatrix.identity(2), ExactMatrix.from_rows([[1, 1], [0, 1]])])))
    T3 = cx.Torus(3, 3)
    cases.append((T3.complex, T3.system(cx.random_commuting(1, 3, rng))))
    cases.append((T3.complex, T3.system([ExactMatrix.identity(2), ExactMatrix.identity(2),
                                         ExactMatrix.from_rows([[1, 1], [0, 1]])])))
    bad, nonzero = [], 0
    for X, L in cases:
        n = X.dim
        for p in range(n + 1):
            dc = cohomology(X, L, p, basis=False).dim
            dh = homology(X, L, n - p, basis=False).dim
            M = pairing_matrix(X, L, p)
            perfect = (ExactMatrix.from_rows(M).det() != 0) if M and M[0] else len(M) == homology(X, L, p, False).dim
            nonzero += bool(M and M[0])
            if dc != dh or not perfect:
                bad.append((X.name, L.rank, p, dc, dh, perfect))
    report(5, not bad, f"{len(cases)} (space, system) cases on S1, S2, T2, T3, {nonzero} nonzero pairing blocks "
           f"all invertible; failures {bad[:3]}", time.perf_counter() - t0, 120)


def _loop(X, L, edges, seed):
    simp = [tuple(sorted(e)) for e in edges]
    return DecomposableCycle(X, L, simp, [1 if a < b else -1 for a, b in edges], edges[0][0], seed)


def _diagonal(T, base):
    cur, out = list(base), []
    for _ in range(T.N):
        a = T.vid(cur)
        cur = [(c + 1) % T.N for c in cur]
        out.append((a, T.vid(cur)))
    return out


def test_criterion_6_intersection_oracle():
    t0 = time.perf_counter()
    rng = random.Random(6)
    T = cx.Torus(2, 3)
    X = T.complex
    triv = LocalSystem.trivial(X, 1)
    pairs = []
    # trivial coefficients: coordinate circles at several offsets, both orders, and the diagonal
    for a, b in ((0, 0), (1, 2), (2, 1)):
        h = _loop(X, triv, T.coordinate_circle(0, (0, b)), (Fraction(1),))
        v = _loop(X, triv, T.coordinate_circle(1, (a, 0)), (Fraction(2),))
        pairs += [("trivial", h, v, PairingRule.tensor(triv, triv)), ("trivial", v, h, PairingRule.tensor(triv, triv))]
    d = _loop(X, triv, _diagonal(T, (0, 0)), (Fraction(1),))
    pairs.append(("trivial-diagonal", d, _loop(X, triv, T.coordinate_circle(0), (Fraction(1),)),
                  PairingRule.tensor(triv, triv)))
    # rank 1 with non-identity transports (gauge twisted)
    for _ in range(4):
        L = cx.random_gauge(triv, rng, 0.7)
        h = _loop(X, L, T.coordinate_circle(0, (0, rng.randrange(3))), (Fraction(rng.randint(1, 4)),))
        v = _loop(X, L, T.coordinate_circle(1, (rng.randrange(3), 0)), (Fraction(-rng.randint(1, 4)),))
        pairs.append(("gauge", h, v, PairingRule.tensor(L, L)))
    # rank 1 with nontrivial monodromy: each cycle runs along the untwisted direction of its system
    for _ in range(3):
        lam, mu = Fraction(rng.choice((2, 3, -1))), Fraction(rng.choice((2, -2))) / rng.choice((1, 3))
        E, F = T.system([1, mu]), T.system([lam, 1])
        h = _loop(X, E, T.coordinate_circle(0, (0, rng.randrange(3))), (Fraction(1),))
        v = _loop(X, F, T.coordinate_circle(1, (rng.randrange(3), 0)), (Fraction(3),))
        pairs.append(("monodromy", h, v, PairingRule.tensor(E, F)))
    E2 = T.system([ExactMatrix.identity(2), ExactMatrix.from_rows([[1, 1], [0, 1]])])
    h = _loop(X, E2.dual(), T.coordinate_circle(0), (Fraction(2), Fraction(-1)))
    v = _loop(X, E2, T.coordinate_circle(1), (Fraction(1), Fraction(0)))
    pairs.append(("rank2-unipotent", h, v, PairingRule.evaluation(E2, E2.dual())))
    S = cx.octahedron()
    ts = LocalSystem.trivial(S, 1)
    eq = _loop(S, ts, [(0, 2), (2, 1), (1, 3), (3, 0)], (Fraction(1),))
    mer = _loop(S, ts, [(0, 4), (4, 1), (1, 5), (5, 0)], (Fraction(1),))
    pairs.append(("sphere", eq, mer, PairingRule.tensor(ts, ts)))
    bad, kinds = [], {}
    for kind, a, b, nu in pairs:
        assert check_general_position(a, b).ok
        intersect(a, b, nu)
        kinds[kind] = kinds.get(kind, 0) + 1
        if not agrees_with_cup(a, b, nu):
            bad.append(kind)
    report(6, not bad and len(pairs) >= 10, f"{len(pairs)} transverse pairs {kinds}; disagreements {bad}",
           time.perf_counter() - t0, 120)


def _compose_zero(rep, p):
    """boundary_{p-1} o boundary_p == 0 on the full bar complex."""
    hi = boundary_rows(rep, p)      # rows index C_{p-1}
    lo = boundary_rows(rep, p - 1)  # rows index C_{p-2}
    lo_cols: dict = {}
    for r, row in enumerate(lo):
        for i, y in row.items():
            lo_cols.setdefault(i, []).append((r, y))
    hi_cols: dict = {}
    for i, row in enumerate(hi):
        for j, x in row.items():
            hi_cols.setdefault(j, []).append((i, x))
    for col in hi_cols.values():
        acc: dict = {}
        for i, x in col:
            for r, y in lo_cols.get(i, ()):
                acc[r] = acc.get(r, 0) + y * x
        if any(v != 0 for v in acc.values()):
            return False
    return True


def test_criterion_7_bar_complex():
    t0 = time.perf_counter()
    z2, z3 = cyclic(2), cyclic(3)
    G6, std = s3_standard_rep()
    reps = [("Z2 triv", GroupRep.trivial(z2)), ("Z2 sign", sign_rep(z2, [1, -1])), ("Z3 rot", cyclic_rotation_rep(3)),
            ("Z3 reg", GroupRep.regular(z3)), ("S3 std", std), ("S3 sign", s3_sign_rep()[1]),
            ("S3 triv", GroupRep.trivial(G6))]
    d2 = all(_compose_zero(rep, p) for _, rep in reps for p in range(2, 5))
    vanish = {name: [group_homology(rep.group, rep, p) for p in (1, 2, 3)] for name, rep in reps}
    maschke = all(v == [0, 0, 0] for v in vanish.values())
    h0 = all(group_homology(rep.group, rep, 0) == coinvariant_dim(rep) for _, rep in reps)
    deg1, accept = True, True
    rng = random.Random(7)
    for _, rep in reps:
        for g in rep.group.elements():
            for _ in range(3):
                v = tuple(Fraction(rng.randint(-2, 2)) for _ in range(rep.rank))
                gv = rep.right_act(g, v)
                d = bar_boundary(BarChain(rep, 1, {(g,): v}))
                deg1 &= d.vector() == tuple(a - b for a, b in zip(gv, v))
                c = decomposable_cycle(g, v, rep)
                accept &= bool(c) == (gv == v)
            fixed = tuple(Fraction(1) for _ in range(rep.rank))
            accept &= bool(decomposable_cycle(rep.group.identity, fixed, rep))
    ok = d2 and maschke and h0 and deg1 and accept
    report(7, ok, f"d^2=0 (deg<=4): {d2}; H1..H3=0: {maschke}; H0=coinvariants: {h0}; "
           f"d1 formula: {deg1}; cycle acceptance: {accept}", time.perf_counter() - t0, 60)


def test_criterion_8_invariance():
    t0 = time.perf_counter()
    bad, count = [], 0
    for n, mu, k in ((4, (1, 0), 1), (4, (1, 1), 2), (6, (2, 1, 0), 2)):
        f = RationalQuadraticForm(n, 2)
        X = PositiveSubspace.coordinate(f, k)
        t = tau([list(v) for v in X.vectors], mu, f.space)
        for seed in range(20):
            g = sample_pointwise_stabilizer(X, seed)
            count += 1
            if g.is_identity() or not invariance_check(t, g):
                bad.append((n, mu, seed))
    report(8, not bad, f"{count} seeded Cayley isometries fix tau_e; failures {bad[:3]}", time.perf_counter() - t0, 60)


def test_criterion_9_tuple_searches():
    t0 = time.perf_counter()
    bad, runs, max_trials, transcript = [], 0, 0, []
    for n in range(2, 7):
        f = RationalQuadraticForm(n, 2)
        for mu in weights_for(n, 3):
            i = i_of(mu)
            if i > n // 2:
                continue
            for k in range(i, min(3, n // 2) + 1):
                x = [[Fraction(int(a == b)) for a in range(n + 1)] for b in range(k)]
                seed = 1000 * n + 10 * k + sum(mu)
                res = complementary_tuple_search(x, mu, trials=10 ** 4, seed=seed, form=f)
                v = verify.verify_complementary(x, res.vectors, mu, f.gram, n)
                runs += 1
                max_trials = max(max_trials, res.trials)
                transcript.append((n, k, mu, seed, res.trials))
                if not v["ok"] or v["pairing"] != res.pairings[0]:
                    bad.append((n, k, mu, seed))
    f5 = RationalQuadraticForm(5, 2)
    e = [[Fraction(int(a == b)) for a in range(6)] for b in range(3)]
    try:
        complementary_tuple_search(e, (1, 1, 1), seed=0, form=f5)
        rejected = False
    except PreconditionError:
        rejected = True
    code, _ = cli_run(["search", "complementary", "--n", "5", "--mu", "1,1,1", "--seed", "0"])
    rejected = rejected and code == 3
    report(9, not bad and rejected, f"{runs} searches verified independently (seeds 1000n+10k+|mu|, "
           f"max trials {max_trials}); n=5 mu=(1,1,1) rejected: {rejected}; failures {bad[:3]}",
           time.perf_counter() - t0, 300)


def test_criterion_10_torus_scaling():
    t0 = time.perf_counter()
    rng = random.Random(10)
    bad, count = [], 0
    for trial in range(10):
        n = rng.choice((3, 4, 5, 6))
        m = (n + 1) // 2
        sp = QuadraticSpace.diagonal([1] * n + [-1], QQ_I)
        ts = [Fraction(rng.choice((1, -1)) * rng.randint(1, 5), rng.randint(1, 5)) for _ in range(m)]
        g = torus_element(n, ts)
        assert sp.is_isometry(g)
        for mu in weights_for(n, 3):
            u = witt_u(sp, n, i_of(mu))
            tu = tau(u, mu, sp)
            scale = Fraction(1)
            for t, b in zip(ts, mu):
                scale *= t ** b
            count += 1
            if tu.act(g) != tu * scale:
                bad.append((n, mu, ts))
    report(10, not bad, f"{count} (t, mu) checks over 10 random torus elements (seed 10); failures {bad[:3]}",
           time.perf_counter() - t0, 60)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
