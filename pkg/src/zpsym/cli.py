"""Command-line front end.

Exit codes: 0 success, 1 computation error (precision, budget, ...), 2 bad
arguments.  Probabilities are printed as exact rationals {"num", "den"} or
intervals {"lower", "upper"}; only Monte Carlo reports contain floats.

CSV and table output write one row per record, with the keys of the first
record as the header.  Rationals appear as num/den, intervals as [lo, hi]
(decimal, table) or lo/hi rationals (csv); other nested values are JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import densities as D
from .canonical import SymClass, isotropy_by_invariants, isotropy_search, qp_class, sym_canonical
from .errors import ZpSymError
from .padic import PrecisionRing, RandomStream, SquareClass, check_odd_prime

SUBCOMMANDS = (
    "decompose", "class-prob", "eldiv-prob", "gen-prob", "rank-dist", "rho", "isotropy",
    "isotropy-prob", "partition-limit", "det-dist", "event-prob", "enumerate", "stabilizer",
    "orth-count", "simulate", "euler-product", "check",
)


class UsageError(Exception):
    pass


# -- parsing helpers --------------------------------------------------------

def _int_list(text: str | None, what: str) -> list[int]:
    if text is None:
        raise UsageError(f"--{what} is required")
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--{what} must be comma-separated integers, got {text!r}") from None


def _signs(text: str | None) -> list[int]:
    if text is None:
        raise UsageError("--signs is required")
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in ("+", "+1", "1"):
            out.append(1)
        elif tok in ("-", "-1", "−"):
            out.append(-1)
        else:
            raise UsageError(f"--signs entries must be + or -, got {tok!r}")
    return out


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"-{name} is required" if len(name) == 1 else f"--{name} is required")
    return v


def _prime(args) -> int:
    p = _need(args, "p")
    try:
        return check_odd_prime(p)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _n(args, minimum=1) -> int:
    n = _need(args, "n")
    if n < minimum:
        raise UsageError(f"-n must be >= {minimum}")
    return n


def _K(args) -> int:
    K = _need(args, "K")
    if K < 1:
        raise UsageError("-K must be >= 1")
    return K


def _matrix(args):
    text = _need(args, "matrix")
    if text == "-":
        text = sys.stdin.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"--matrix is not valid JSON: {e}") from None
    if isinstance(data, dict):
        args.p = data.get("p", args.p)
        args.K = data.get("K", args.K)
        data = data.get("matrix")
    if not (isinstance(data, list) and data and all(isinstance(r, list) for r in data)):
        raise UsageError("--matrix must be a JSON array of arrays of integers")
    if any(not isinstance(x, int) for r in data for x in r):
        raise UsageError("--matrix entries must be integers")
    return data


def _class(args, n) -> SymClass:
    ks = _int_list(args.lam, "lambda")
    if len(ks) != n:
        raise UsageError(f"--lambda needs {n} exponents")
    if any(k < 0 for k in ks):
        raise UsageError("--lambda exponents must be >= 0")
    signs = _signs(args.signs)
    try:
        return SymClass.from_lists(ks, signs)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _seed(args, out_meta):
    if args.seed is None:
        args.seed = int.from_bytes(os.urandom(8), "little")
    out_meta["seed"] = args.seed
    return RandomStream(args.seed)


def _fmt_q(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- subcommand implementations ---------------------------------------------

def cmd_decompose(args):
    X = _matrix(args)
    ring = PrecisionRing(_prime(args), _K(args))
    cls, U = sym_canonical(X, ring)
    out = {"p": ring.p, "K": ring.K, "class": cls.label(),
           "eldivs": ["inf" if k == math.inf else k for k in cls.eldivs],
           "signs": [{"k": "inf" if k == math.inf else k, "s": "+" if s > 0 else "-"} for k, s in cls.signs],
           "U": U}
    if cls.finite:
        q = qp_class(cls, ring.p)
        out["disc"], out["hasse"] = q.disc.tag, q.hasse
    return out


def cmd_class_prob(args):
    n, p = _n(args), _prime(args)
    return D.sym_class_prob(_class(args, n), n, p)


def cmd_eldiv_prob(args):
    n, p = _n(args), _prime(args)
    ks = _int_list(args.lam, "lambda")
    if len(ks) != n:
        raise UsageError(f"--lambda needs {n} exponents")
    return D.sym_eldiv_prob(ks, n, p)


def cmd_gen_prob(args):
    n = _n(args)
    p = _need(args, "p")
    ks = _int_list(args.lam, "lambda")
    if args.cols is not None:
        if len(ks) != args.cols or args.cols > n:
            raise UsageError("--lambda needs --cols exponents and --cols <= -n")
        return D.rect_eldiv_prob(ks, n, args.cols, p)
    if len(ks) != n:
        raise UsageError(f"--lambda needs {n} exponents")
    return D.gen_eldiv_prob(ks, n, p)


def cmd_rank_dist(args):
    n = _n(args, 0)
    if args.cols is None:
        p = _prime(args)
        return [{"rank": n - r, "prob": D.rank_dist_symmetric(n, r, p)} for r in range(n, -1, -1)]
    q = _need(args, "p")
    if q < 2:
        raise UsageError("-p (field size q) must be >= 2")
    a, b = min(n, args.cols), max(n, args.cols)
    return [{"rank": a - r, "prob": D.rank_dist_general(a, b, r, q)} for r in range(a, -1, -1)]


def cmd_rho(args):
    p = _prime(args)
    if args.limit:
        return [{"disc": a.tag, "hasse": b, "prob": D.rho_limit(a, b, p)} for a, b in D.PAIRS]
    n = _n(args, 0)
    return [{"disc": a.tag, "hasse": b, "prob": D.rho_n(a, b, n, p)} for a, b in D.PAIRS]


def cmd_isotropy(args):
    X = _matrix(args)
    ring = PrecisionRing(_prime(args), _K(args))
    out = {"p": ring.p, "K": ring.K}
    cert = isotropy_search(X, ring, args.depth)
    out["certificate"] = None if cert is None else {"witness": list(cert.witness),
                                                    "gradient_valuation": cert.gradient_valuation}
    try:
        cls, _ = sym_canonical(X, ring)
        if cls.finite:
            q = qp_class(cls, ring.p)
            out.update(disc=q.disc.tag, hasse=q.hasse, isotropic=isotropy_by_invariants(q, ring.p))
        else:
            out["isotropic"] = None
    except ZpSymError:
        out["isotropic"] = None
    return out


def cmd_isotropy_prob(args):
    return D.isotropy_prob(_n(args), _prime(args))


def cmd_partition_limit(args):
    p = _prime(args)
    lam = D.as_partition(_int_list(args.lam, "lambda"))
    if args.n is not None:
        return D.finite_partition_prob(lam, args.n, p)
    return D.limit_partition_prob(lam, p)


def cmd_det_dist(args):
    n, p = _n(args), _prime(args)
    k = _need(args, "k")
    cap = args.cap if args.cap is not None else k
    if cap < k:
        raise UsageError("--cap must be >= -k")
    return D.det_dist(n, k, p, cap)


def cmd_event_prob(args):
    n, p = _n(args), _prime(args)
    cap = _need(args, "cap")
    event = args.event
    if event == "isotropic":
        pred = lambda c: isotropy_by_invariants(qp_class(c, p), p)  # noqa: E731
    elif event == "unimodular":
        pred = lambda c: max(c.eldivs) == 0  # noqa: E731
    elif event == "tail":
        r, m = _need(args, "r"), _need(args, "m")
        if not 1 <= r <= n:
            raise UsageError("--r must be in 1..n")
        pred = lambda c: all(k >= m for k in c.eldivs[n - r:])  # noqa: E731
    else:
        raise UsageError(f"unknown --event {event!r}")
    return D.event_prob_capped(pred, n, p, cap)


def cmd_enumerate(args):
    from .oracle import enumerate_orbits

    orbits = enumerate_orbits(_n(args), _prime(args), _K(args), args.budget)
    return [{"representative": rep, "size": size} for rep, size in orbits]


def cmd_stabilizer(args):
    from .oracle import stabilizer_closed_form, stabilizer_count

    n, p, K = _n(args), _prime(args), _K(args)
    cls = _class(args, n)
    return {"class": cls.label(), "count": stabilizer_count(cls, p, K, args.budget),
            "closed_form": stabilizer_closed_form(cls, p, K)}


def cmd_orth_count(args):
    from .oracle import orth_count_mod

    n, p, K = _n(args), _prime(args), _K(args)
    s = _signs(args.signs or "+")
    if len(s) != 1:
        raise UsageError("--signs takes a single + or - here")
    formula = D.alpha_ns(n, s[0], p) * p ** (K * n * (n - 1) // 2)
    return {"n": n, "s": "+" if s[0] > 0 else "-", "p": p, "k": K,
            "count": orth_count_mod(n, s[0], p, K, args.budget), "formula": int(formula)}


def cmd_simulate(args):
    from .montecarlo import gof_chisq, parallel_class_dist, resolved_classes

    n, p, K = _n(args), _prime(args), _K(args)
    cutoff = args.cutoff if args.cutoff is not None else (K - 1) // n
    samples = _need(args, "samples")
    meta: dict = {}
    rng = _seed(args, meta)
    tally = parallel_class_dist(n, p, K, samples, rng, cutoff, args.threads)
    expected = {c: D.sym_class_prob(c, n, p) for c in resolved_classes(n, cutoff)}
    rep = gof_chisq(tally, expected, seed=meta["seed"]).to_json()
    rep["seed"] = meta["seed"]
    return rep


def cmd_euler_product(args):
    from .localglobal import INF, density_first_divisors_one, density_squarefree_det

    n_text = args.size if args.size is not None else (str(args.n) if args.n is not None else None)
    if n_text is None:
        raise UsageError("-n is required (an integer or 'inf')")
    n = INF if n_text in ("inf", "oo") else int(n_text)
    cutoff = args.cutoff if args.cutoff is not None else 10 ** 5
    if cutoff < 2:
        raise UsageError("--cutoff must be >= 2")
    fn = density_first_divisors_one if args.kind == "first-divisors" else density_squarefree_det
    try:
        res = fn(n, cutoff, args.assume_p2)
    except ValueError as e:
        raise UsageError(str(e)) from None
    out = res.to_json()
    out["kind"] = args.kind
    return out


def cmd_check(args):
    from .acceptance import run_all

    only = set(_int_list(args.only, "only")) if args.only else None
    results = run_all(only, out=lambda line: print(line, flush=True))
    return 0 if all(r.ok for r in results) else 1


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in SUBCOMMANDS}


# -- output -----------------------------------------------------------------

def _render(obj, fmt: str) -> str:
    data = D.to_json(obj)
    if fmt == "json":
        return json.dumps(data, sort_keys=False)
    rows = data if isinstance(data, list) else [data]
    rows = [r if isinstance(r, dict) else {"value": r} for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = list(rows[0].keys())
        w.writerow(keys)
        for r in rows:
            w.writerow([_exact(r.get(k)) for k in keys])
        return buf.getvalue().rstrip("\n")
    # table
    keys = list(rows[0].keys())
    cells = [[_pretty(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _cell(v) -> str:
    return v if isinstance(v, str) else json.dumps(v)


def _pretty(v) -> str:
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return v["num"] if v["den"] == "1" else f"{v['num']}/{v['den']}"
    if isinstance(v, dict) and set(v) == {"lower", "upper"}:
        lo, hi = Fraction(int(v["lower"]["num"]), int(v["lower"]["den"])), \
            Fraction(int(v["upper"]["num"]), int(v["upper"]["den"]))
        return f"[{float(lo):.12g}, {float(hi):.12g}]"
    return _cell(v)


def _exact(v) -> str:
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return v["num"] if v["den"] == "1" else f"{v['num']}/{v['den']}"
    if isinstance(v, dict) and set(v) == {"lower", "upper"}:
        return f"[{_exact(v['lower'])}, {_exact(v['upper'])}]"
    return _cell(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, help="odd prime (field size q for rank-dist --cols)")
    common.add_argument("-n", type=int, help="matrix size / number of variables")
    common.add_argument("-K", type=int, help="precision exponent (orth-count: modulus exponent k)")
    common.add_argument("-k", type=int, help="determinant valuation for det-dist")
    common.add_argument("--lambda", dest="lam", help="comma-separated exponents, e.g. 0,1")
    common.add_argument("--signs", help="comma-separated signatures, e.g. +,-")
    common.add_argument("--matrix", help="JSON array of arrays, or - to read stdin")
    common.add_argument("--samples", type=int, help="Monte Carlo sample size")
    common.add_argument("--seed", type=int, help="random seed (printed when omitted)")
    common.add_argument("--cap", type=int, help="largest exponent summed in capped enumerations")
    common.add_argument("--cutoff", type=int, help="Monte Carlo class cutoff, or Euler prime cutoff")
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--assume-p2", dest="assume_p2", action=argparse.BooleanOptionalAction, default=True,
                        help="include the p=2 Euler factor (default on)")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--budget", type=int, default=10 ** 6, help="brute-force size budget")

    parser = argparse.ArgumentParser(prog="zpsym", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "decompose": "canonical form X = U Sigma S U^T of a symmetric matrix",
        "class-prob": "Haar probability of a GL_n(Z_p) class",
        "eldiv-prob": "probability of an elementary divisor sequence (symmetric)",
        "gen-prob": "same for general (or --cols rectangular) matrices",
        "rank-dist": "rank distribution over F_p (symmetric) or F_q (with --cols)",
        "rho": "joint law of discriminant and Hasse invariant (--limit for n -> inf)",
        "isotropy": "isotropy verdict and certificate for one matrix",
        "isotropy-prob": "probability that an n-ary Haar form is isotropic",
        "partition-limit": "limiting partition law f(lambda), or f_n with -n",
        "det-dist": "P(|det| = p^-k)",
        "event-prob": "certified capped probability of a class event",
        "enumerate": "brute-force congruence orbits mod p^K",
        "stabilizer": "brute-force stabiliser size of a class mod p^K",
        "orth-count": "brute-force |O_n^s(Z/p^k)| (use -K for k)",
        "simulate": "Monte Carlo class tally with chi-square report",
        "euler-product": "local-global densities over primes up to --cutoff",
        "check": "run the acceptance suite",
    }
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common], help=helps[name])
        if name in ("gen-prob", "rank-dist"):
            sp.add_argument("--cols", type=int, help="number of columns m (rectangular / general)")
        if name == "rho":
            sp.add_argument("--limit", action="store_true", help="n -> infinity intervals")
        if name == "isotropy":
            sp.add_argument("--depth", type=int, help="rescaling depth (default 2K)")
        if name == "event-prob":
            sp.add_argument("--event", choices=("isotropic", "unimodular", "tail"), default="isotropic")
            sp.add_argument("--r", type=int, help="tail event: last r exponents")
            sp.add_argument("--m", type=int, help="tail event: each >= m")
        if name == "euler-product":
            sp.add_argument("--kind", choices=("first-divisors", "squarefree"), default="squarefree")
            sp.add_argument("--size", help="matrix size, integer or 'inf' (overrides -n)")
        if name == "check":
            sp.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = HANDLERS[args.command](args)
    except UsageError as e:
        print(f"zpsym {args.command}: error: {e}", file=sys.stderr)
        return 2
    except ZpSymError as e:
        print(f"zpsym {args.command}: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"zpsym {args.command}: error: {e}", file=sys.stderr)
        return 2
    if args.command == "check":
        return result
    print(_render(result, args.format))
    return 0


def main():
    sys.exit(run())
