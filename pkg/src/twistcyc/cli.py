"""twistcyc command line.  Every result is printed as one JSON object; scalars are exact strings.

Exit codes: 0 ok, 2 invalid input, 3 infeasible / precondition / not transverse, 4 search exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import barcomplex as bc
from . import complexes as cx
from . import geometry as geo
from . import intersect as ix
from . import localsys as ls
from . import schur, verify
from .exactfield import QQ, QQ_I, ExactMatrix, field_of, format_scalar, parse_scalar, sparse_rank
from .weights import (DominantWeight, InvalidWeight, branch, normalize_partition, nonvanishing_range,
                      support_count, vanishes_identically)

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_EXHAUSTED = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str, **extra):
        super().__init__(message)
        self.code, self.extra = code, extra


def _bad(msg: str, **extra):
    return CliError(EXIT_INPUT, msg, **extra)


# input helpers -----------------------------------------------------------------

def _read_json(arg: str):
    """A path to a JSON file, or an inline JSON document."""
    if os.path.exists(arg):
        with open(arg) as fh:
            return json.load(fh)
    try:
        return json.loads(arg)
    except json.JSONDecodeError:
        raise _bad(f"{arg!r} is neither a readable file nor inline JSON") from None


def _weight(text: str, n: int) -> DominantWeight:
    try:
        return DominantWeight.parse(text, n)
    except InvalidWeight as exc:
        raise _bad(str(exc)) from None


def _partition_arg(text: str) -> tuple[int, ...]:
    try:
        p = tuple(int(t) for t in text.replace("(", "").replace(")", "").split(",") if t.strip())
    except ValueError:
        raise _bad(f"malformed partition {text!r}") from None
    if any(b < 0 for b in p) or any(a < b for a, b in zip(p, p[1:])):
        raise _bad(f"{text!r} is not a partition")
    return p


def _vectors(spec: str, count: int, space: schur.QuadraticSpace, n: int) -> list:
    if spec == "e":
        return [[Fraction(int(i == j)) for i in range(space.dim)] for j in range(count)]
    if spec == "u":
        return [v.coords() for v in schur.witt_u(space, n, count)]
    data = _read_json(spec)
    if not isinstance(data, list) or any(not isinstance(v, list) for v in data):
        raise _bad("vectors must be a JSON list of coordinate lists")
    out = [[parse_scalar(x) for x in v] for v in data]
    for v in out:
        if len(v) != space.dim:
            raise _bad(f"vector has {len(v)} coordinates, the space has dimension {space.dim}")
    return out


def _vectors_field(spec: str):
    if spec == "u":
        return QQ_I
    if spec == "e":
        return QQ
    f = QQ
    data = _read_json(spec)
    for v in data if isinstance(data, list) else []:
        for x in v if isinstance(v, list) else []:
            f = f.join(field_of(parse_scalar(x)))
    return f


def _space(args, field) -> schur.QuadraticSpace:
    n = args.n
    if args.form == "lorentz":
        return schur.QuadraticSpace.diagonal([1] * n + [-1], field)
    if args.form == "euclidean":
        return schur.QuadraticSpace.diagonal([1] * n, field)
    f = geo.RationalQuadraticForm(n, args.m)
    if field not in (QQ, f.field):
        raise _bad(f"vectors over {field.name} do not live in the {f.field.name} form")
    return f.space


def _complex_and_system(args, system_arg: str | None = None, monodromy: str | None = None):
    name = args.complex
    torus = None
    if name in cx.BUILTINS:
        if name.startswith("torus") and name != "torus7":
            torus = cx.Torus(int(name[5]), 3)
            X = torus.complex
        else:
            X = cx.builtin(name)
    else:
        X = ls.SimplicialComplex.from_json(_read_json(name))
    L = _system(X, system_arg if system_arg is not None else args.system,
                monodromy if monodromy is not None else getattr(args, "monodromy", None), torus, name)
    return X, L


def _system(X, spec: str | None, monodromy: str | None, torus, name: str) -> ls.LocalSystem:
    if monodromy:
        vals = [parse_scalar(t) for t in monodromy.split(",")]
        if torus is not None:
            return torus.system(vals)
        if name.startswith("circle"):
            if len(vals) != 1:
                raise _bad("a circle takes one monodromy value")
            return cx.circle_system(X, vals[0])
        raise _bad("--monodromy is only available on builtin circles and tori")
    if spec in (None, "trivial"):
        return ls.LocalSystem.trivial(X, 1)
    return ls.LocalSystem.from_json(X, _read_json(spec))


# commands ------------------------------------------------------------------------

def cmd_ranges(args) -> dict:
    mu = _weight(args.mu, args.n)
    return {"i": support_count(mu), "degrees": nonvanishing_range(mu), "vanishes": vanishes_identically(mu)}


def cmd_branch(args) -> dict:
    mu = _partition_arg(args.mu)
    nus = branch(mu)
    return {"mu": list(normalize_partition(mu)), "i": support_count(mu),
            "branch": [{"nu": list(nu), "i": support_count(nu)} for nu in nus]}


def _invariant_setup(args, specs):
    mu = _weight(args.mu, args.n)
    k_needed = support_count(mu)
    field = QQ
    for s in specs:
        field = field.join(_vectors_field(s))
    space = _space(args, field)
    return mu, k_needed, space


def cmd_invariant(args) -> dict:
    mu, i_mu, space = _invariant_setup(args, [args.x])
    x = _vectors(args.x, args.k if args.k is not None else i_mu, space, args.n)
    if len(x) < i_mu:
        raise _bad(f"k={len(x)} vectors but i(mu)={i_mu}: an invariant needs dim(X) >= i(mu)")
    t = schur.tau(x, mu.entries, space)
    return {"mu": list(mu.entries), "k": len(x), "tensor": t.to_json(), "nonzero": not t.is_zero()}


def cmd_pair(args) -> dict:
    mu, i_mu, space = _invariant_setup(args, [args.x, args.y])
    k = args.k if args.k is not None else i_mu
    x = _vectors(args.x, k, space, args.n)
    y = _vectors(args.y, k, space, args.n)
    if min(len(x), len(y)) < i_mu:
        raise _bad(f"need at least i(mu)={i_mu} vectors on each side: dim(X) >= i(mu)")
    return {"mu": list(mu.entries), "value": format_scalar(schur.pair_invariants(x, y, mu.entries, space))}


def _degrees(args, X) -> list[int]:
    return [args.deg] if args.deg is not None else list(range(X.dim + 1))


def cmd_homology(args) -> dict:
    X, L = _complex_and_system(args)
    out: dict = {}
    reps = {}
    for p in _degrees(args, X):
        res = ls.homology(X, L, p)
        out[f"H{p}"] = res.dim
        reps[f"H{p}"] = [c.to_json() for c in res.basis]
    out["representatives"] = reps
    return out


def cmd_cohomology(args) -> dict:
    X, L = _complex_and_system(args)
    out: dict = {}
    reps = {}
    for p in _degrees(args, X):
        res = ls.cohomology(X, L, p)
        out[f"H^{p}"] = res.dim
        reps[f"H^{p}"] = [c.to_json() for c in res.basis]
    out["representatives"] = reps
    return out


def cmd_cup(args) -> dict:
    X, E = _complex_and_system(args)
    F = _system(X, args.system2, None, None, args.complex) if args.system2 else ls.LocalSystem.trivial(X, 1)
    nu = ls.PairingRule.tensor(E, F)
    A = ls.cohomology(X, E, args.p).basis
    B = ls.cohomology(X, F, args.q).basis
    prods = []
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            c = ls.cup(a, b, nu)
            prods.append({"i": i, "j": j, "zero_class": ls.is_coboundary(c), "cochain": c.to_json()})
    return {"p": args.p, "q": args.q, "dims": [len(A), len(B)], "products": prods}


def cmd_dual(args) -> dict:
    X, L = _complex_and_system(args)
    if not X.has_fundamental_class:
        raise CliError(EXIT_INFEASIBLE, "duality needs a closed oriented complex")
    n, p = X.dim, args.deg
    co = ls.cohomology(X, L, p)
    ho = ls.homology(X, L, n - p, basis=False)
    images = [ls.cap_fundamental(h) for h in co.basis]
    k = n - p
    bnd = L.boundary_rows(k + 1) if k + 1 <= n else []
    cols = [{i: x for i, x in enumerate(c.flat()) if x != 0} for c in images]
    bcols: list[dict] = [dict() for _ in range(X.count(k + 1) * L.rank)] if bnd else []
    for i, row in enumerate(bnd):
        for j, x in row.items():
            bcols[j][i] = x
    rb = sparse_rank(bcols, L.field) if bcols else 0
    rank_img = (sparse_rank(cols + bcols, L.field) if cols or bcols else 0) - rb
    return {"degree": p, "cohomology_dim": co.dim, "homology_dim": ho.dim,
            "isomorphism": rank_img == co.dim == ho.dim,
            "images": [c.to_json() for c in images]}


def _cycle(X, L, data) -> ix.DecomposableCycle:
    try:
        return ix.DecomposableCycle(X, L, [tuple(s) for s in data["subcomplex"]], data.get("orientation"),
                                    int(data["basepoint"]), [parse_scalar(s) for s in data["seed"]])
    except (KeyError, TypeError) as exc:
        raise _bad(f"malformed cycle: missing or bad field {exc}") from None


def _pairing(spec: str, E, F) -> ls.PairingRule:
    if spec == "tensor":
        return ls.PairingRule.tensor(E, F)
    if spec == "scalar":
        if E.rank != 1 or F.rank != 1:
            raise _bad("the scalar pairing needs rank-1 systems")
        return ls.PairingRule.tensor(E, F)
    if spec == "evaluation":
        return ls.PairingRule(E, F, ls.LocalSystem.trivial(E.complex, 1, E.field.join(F.field)),
                              [[Fraction(int(i // F.rank == i % F.rank)) for i in range(E.rank * F.rank)]])
    data = _read_json(spec)
    X = E.complex
    G = ls.LocalSystem.from_json(X, data["target"]) if isinstance(data.get("target"), dict) \
        else ls.LocalSystem.trivial(X, len(data["matrix"]))
    return ls.PairingRule(E, F, G, ExactMatrix.from_json(data["matrix"]))


def cmd_intersect(args) -> dict:
    X, L1 = _complex_and_system(args)
    L2 = _system(X, args.system2, args.monodromy2, None, args.complex) if (args.system2 or args.monodromy2) else L1
    d1 = _cycle(X, L1, _read_json(args.cycle1))
    d2 = _cycle(X, L2, _read_json(args.cycle2))
    data = ix.check_general_position(d1, d2)
    if not data.ok:
        raise CliError(EXIT_INFEASIBLE, "cycles are not in general position", report=data.to_json())
    nu = _pairing(args.pairing, L1, L2)
    chain = ix.intersect(d1, d2, nu)
    info = ix.intersection_data(d1, d2)
    points = []
    for P in info.points:
        w = chain.terms.get((P,), tuple(Fraction(0) for _ in range(nu.G.rank)))
        coeff = [format_scalar(x) for x in w]
        points.append({"vertex": P, "sign": info.signs[P], "coeff": coeff[0] if len(coeff) == 1 else coeff})
    out = {"points": points, "chain": chain.to_json()}
    if nu.G.rank == 1 and all(m.is_identity() for m in nu.G.edge_transports.values()):
        out["value"] = format_scalar(ls.kronecker(ls.unit_cochain(nu.G), chain)[0])
    if args.check:
        out["agrees_with_cup"] = ix.agrees_with_cup(d1, d2, nu)
    return out


_NAMED_GROUPS = {"s3": lambda: bc.symmetric(3)[0], "trivial": bc.trivial_group}


def _group(spec: str) -> bc.FiniteGroup:
    if spec.startswith("cyclic:"):
        return bc.cyclic(int(spec.split(":")[1]))
    if spec in _NAMED_GROUPS:
        return _NAMED_GROUPS[spec]()
    return bc.FiniteGroup.from_json(_read_json(spec))


def _rep(spec: str, G: bc.FiniteGroup, gspec: str) -> bc.GroupRep:
    if spec == "trivial":
        return bc.GroupRep.trivial(G)
    if spec == "regular":
        return bc.GroupRep.regular(G)
    if spec == "rotation" and gspec.startswith("cyclic:"):
        R = bc.cyclic_rotation_rep(G.order)
        return bc.GroupRep(G, R.matrices, R.field)
    if gspec == "s3" and spec in ("standard", "sign"):
        H, R = bc.s3_standard_rep() if spec == "standard" else bc.s3_sign_rep()
        return bc.GroupRep(G, R.matrices, R.field)
    if spec.startswith("{") or os.path.exists(spec):
        return bc.GroupRep.from_json(G, _read_json(spec))
    raise _bad(f"unknown representation {spec!r} for group {gspec!r}")


def cmd_group_homology(args) -> dict:
    G = _group(args.group)
    rep = _rep(args.rep, G, args.group)
    degs = [args.deg] if args.deg is not None else list(range(args.max_deg + 1))
    out = {"order": G.order, "rank": rep.rank}
    for p in degs:
        out[f"H{p}"] = bc.group_homology(G, rep, p)
    return out


def _passfail(b: bool) -> str:
    return "pass" if b else "fail"


def cmd_search(args) -> dict:
    seed = args.seed if args.seed is not None else random.SystemRandom().randrange(2 ** 31)
    try:
        form = geo.RationalQuadraticForm(args.n, args.m)
    except geo.InvalidForm as exc:
        raise _bad(str(exc)) from None
    try:
        if args.kind == "complementary":
            mu = _weight(args.mu, args.n)
            k = args.k if args.k is not None else max(support_count(mu), 1)
            x = [[Fraction(int(i == j)) for i in range(form.dim)] for j in range(k)]
            res = geo.complementary_tuple_search(x, mu.entries, args.trials, seed, form)
            v = verify.verify_complementary(x, res.vectors, mu.entries, form.gram, args.n)
            checks = {"pairing_nonzero": _passfail(v["pairing_nonzero"]), "dimension": _passfail(v["dimension"]),
                      "positive_definite": _passfail(v["positive"])}
            recomputed = [format_scalar(v["pairing"])]
            params = {"n": args.n, "m": args.m, "k": k, "mu": list(mu.entries)}
        else:
            mu1, mu2 = _weight(args.mu1, args.n), _weight(args.mu2, args.n)
            res = geo.cup_tuple_search(args.q1, args.q2, mu1.entries, mu2.entries, args.trials, seed, form)
            v = verify.verify_cup(args.q1, args.q2, mu1.entries, mu2.entries, res.vectors, form.gram, args.n)
            checks = {"pairing_x_w": _passfail(v["pairings"][0] != 0), "pairing_y_w": _passfail(v["pairings"][1] != 0),
                      "dimension": _passfail(v["dimension"]), "positive_definite": _passfail(v["positive"])}
            recomputed = [format_scalar(p) for p in v["pairings"]]
            params = {"n": args.n, "m": args.m, "q1": args.q1, "q2": args.q2,
                      "mu1": list(mu1.entries), "mu2": list(mu2.entries)}
    except geo.PreconditionError as exc:
        raise CliError(EXIT_INFEASIBLE, str(exc), seed=seed) from None
    except geo.TrialsExhausted as exc:
        raise CliError(EXIT_EXHAUSTED, str(exc), seed=seed, trials=args.trials) from None
    out = {"kind": args.kind, "params": params, "seed": seed}
    out.update(res.to_json())
    out["witness"] = out.pop("vectors")
    out["verification"] = {"checks": checks, "recomputed_pairings": recomputed, "ok": v["ok"]}
    return out


# parser ----------------------------------------------------------------------------

def _add_space(p, system=True):
    p.add_argument("--complex", required=True, help="builtin name or complex JSON")
    if system:
        p.add_argument("--system", default=None, help="'trivial' (default) or system JSON")
        p.add_argument("--monodromy", default=None, help="comma-separated rank-1 monodromies (builtin circle/torus)")


def _add_form(p):
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--form", choices=("lorentz", "euclidean", "arithmetic"), default="lorentz")
    p.add_argument("--m", type=int, default=2, help="square-free m for the arithmetic form")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistcyc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ranges")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_ranges)

    p = sub.add_parser("branch")
    p.add_argument("--mu", required=True)
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("invariant")
    _add_form(p)
    p.add_argument("--x", default="e", help="'e', 'u' or vectors JSON")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("pair")
    _add_form(p)
    p.add_argument("--x", default="e")
    p.add_argument("--y", default="u")
    p.set_defaults(func=cmd_pair)

    for name, fn in (("homology", cmd_homology), ("cohomology", cmd_cohomology)):
        p = sub.add_parser(name)
        _add_space(p)
        p.add_argument("--deg", type=int, default=None)
        p.set_defaults(func=fn)

    p = sub.add_parser("cup")
    _add_space(p)
    p.add_argument("--system2", default=None)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_cup)

    p = sub.add_parser("dual")
    _add_space(p)
    p.add_argument("--deg", type=int, required=True)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("intersect")
    _add_space(p)
    p.add_argument("--system2", default=None)
    p.add_argument("--monodromy2", default=None)
    p.add_argument("--cycle1", required=True)
    p.add_argument("--cycle2", required=True)
    p.add_argument("--pairing", default="tensor", help="tensor, scalar, evaluation or pairing JSON")
    p.add_argument("--check", action="store_true", help="also compare with the cup-product route")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("group-homology")
    p.add_argument("--group", required=True, help="cyclic:N, s3, trivial or group JSON")
    p.add_argument("--rep", default="trivial", help="trivial, regular, rotation, standard, sign or rep JSON")
    p.add_argument("--deg", type=int, default=None)
    p.add_argument("--max-deg", type=int, default=2)
    p.set_defaults(func=cmd_group_homology)

    p = sub.add_parser("search")
    p.add_argument("kind", choices=("complementary", "cup"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mu", default=None)
    p.add_argument("--q1", type=int, default=None)
    p.add_argument("--q2", type=int, default=None)
    p.add_argument("--mu1", default=None)
    p.add_argument("--mu2", default=None)
    p.add_argument("--trials", type=int, default=geo.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_search)
    return ap


_INFEASIBLE = (geo.PreconditionError, ix.NotInGeneralPosition, ix.UnsupportedIntersection,
               ix.MonodromyObstruction, ls.NoFundamentalClass, bc.SizeLimitExceeded)


def _check_search_args(args):
    if args.command != "search":
        return
    need = ("mu",) if args.kind == "complementary" else ("q1", "q2", "mu1", "mu2")
    missing = [f"--{k}" for k in need if getattr(args, k) is None]
    if missing:
        raise _bad(f"search {args.kind} needs {', '.join(missing)}")


def run(argv=None) -> tuple[int, dict | None]:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        if not exc.code:
            return EXIT_OK, None  # --help
        return EXIT_INPUT, {"error": "bad command line"}
    try:
        _check_search_args(args)
        return EXIT_OK, args.func(args)
    except CliError as exc:
        return exc.code, {"error": str(exc), **exc.extra}
    except schur.InadmissibleTuple as exc:
        return EXIT_INPUT, {"error": str(exc)}
    except _INFEASIBLE as exc:
        return EXIT_INFEASIBLE, {"error": str(exc)}
    except (ValueError, KeyError, TypeError, ArithmeticError) as exc:
        return EXIT_INPUT, {"error": f"{type(exc).__name__}: {exc}"}


def main(argv=None) -> int:
    code, out = run(argv)
    if out is None:
        return code
    print(json.dumps(out, indent=None if code else 1))
    if code:
        print(out.get("error", ""), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
