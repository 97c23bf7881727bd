"""Command-line front end: one binary, subcommand per capability.

Subcommands: sieve, expsum, arcs, typesums, singular, count, gowers,
nilseq, mobius-corr, obstruction, acceptance.

Every report is a JSON envelope {command, version, seed, timestamp, N,
params, results} (schema shipped in hlmlab/schemas/report.schema.json);
identical (command, config, seed) runs re-serialize byte-identically
apart from the timestamp. --format csv switches tabular payloads
(spectra, orbits, sweeps) to CSV with a header row.

Config file: key=value lines loaded before flag parsing; flags win.
HLM_DATA_DIR, when set, caches sieve tables as table_<N>.bin.

Exit codes: 0 success, 1 usage error, 2 validation error (degenerate
system, bad parameter), 3 acceptance-suite failure.
"""

import argparse
import csv
import datetime
import json
import math
import os
import sys

import numpy as np

from . import __version__, acceptance, arith, counting, fourier, gowers, linsys, nilseq, obstruction
from ._parallel import available_parallelism


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _envelope(command: str, args, params: dict, results) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": args.seed,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "N": params.get("N"),
        "params": params,
        "results": results,
    }


def _emit(report: dict, args, csv_rows=None, csv_header=None) -> None:
    if args.format == "csv" and csv_rows is not None:
        out = sys.stdout if args.out is None else open(args.out, "w", newline="")
        try:
            wr = csv.writer(out)
            wr.writerow(csv_header)
            wr.writerows(csv_rows)
        finally:
            if args.out is not None:
                out.close()
        return
    text = json.dumps(report, sort_keys=True, indent=2, default=_jsonable)
    if args.out is None:
        print(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    raise TypeError(f"not JSON-serializable: {type(v)}")


def _cached_table(N: int) -> arith.ArithTable:
    cache_dir = os.environ.get("HLM_DATA_DIR")
    if cache_dir:
        path = os.path.join(cache_dir, f"table_{N}.bin")
        if os.path.exists(path):
            return arith.load_table(path)
        tab = arith.build_table(N)
        os.makedirs(cache_dir, exist_ok=True)
        arith.dump_table(tab, path)
        return tab
    return arith.build_table(N)


def _weights(tab: arith.ArithTable, name: str, N: int) -> np.ndarray:
    if name == "lambda":
        return tab.vonmangoldt_seq(N)
    if name == "mobius":
        return tab.mobius_seq(N)
    raise ValueError(f"unknown weights {name!r}")


def cmd_sieve(args) -> int:
    tab = _cached_table(args.n)
    if args.dump:
        arith.dump_table(tab, args.dump)
    results = {
        "pi": int(tab.is_prime.sum()),
        "mertens": int(tab.mobius[1:].astype(np.int64).sum()),
        "mean_vonmangoldt": float(tab.vonmangoldt[1:].mean()),
        "dumped_to": args.dump,
    }
    _emit(_envelope("sieve", args, {"N": args.n}, results), args)
    return 0


def cmd_expsum(args) -> int:
    tab = _cached_table(args.n)
    w = _weights(tab, args.weights, args.n)
    rows = []
    for theta in args.theta:
        s = fourier.exp_sum(w, theta)
        rows.append({"theta": theta, "re": s.real, "im": s.imag, "abs": abs(s)})
    sup_theta, sup_val = fourier.sup_exp_sum(w, args.oversample)
    results = {"values": rows, "sup": {"theta": sup_theta, "value": sup_val}}
    params = {"N": args.n, "weights": args.weights, "oversample": args.oversample}
    _emit(
        _envelope("expsum", args, params, results),
        args,
        csv_rows=[[r["theta"], r["re"], r["im"], r["abs"]] for r in rows],
        csv_header=["theta", "re", "im", "abs"],
    )
    return 0


def cmd_arcs(args) -> int:
    if args.thetas:
        thetas = [float(t) for t in args.thetas.split(",")]
    else:
        thetas = ((np.arange(args.grid) + 0.5) / args.grid).tolist()
    sweep = fourier.arc_sweep(thetas, args.n, args.exponent)
    params = {"N": args.n, "A": args.exponent}
    _emit(
        _envelope("arcs", args, params, sweep),
        args,
        csv_rows=[[d["theta"], d["verdict"], d["a"], d["q"]] for d in sweep],
        csv_header=["theta", "verdict", "a", "q"],
    )
    return 0


def cmd_typesums(args) -> int:
    tab = _cached_table(args.n)
    if args.phase is not None:
        n = np.arange(1, args.n + 1)
        f = np.exp(2j * np.pi * np.mod(args.phase * n, 1.0))
        kind = f"e({args.phase}*n)"
    else:
        f = _weights(tab, args.weights, args.n).astype(np.complex128)
        kind = args.weights
    results = {"f": kind, "type1": fourier.type1_max(f, args.d)}
    if args.w:
        results["type2"] = fourier.type2_max(f, args.d, args.w, seed=args.seed)
    params = {"N": args.n, "D": args.d, "W": args.w}
    _emit(_envelope("typesums", args, params, results), args)
    return 0


def cmd_singular(args) -> int:
    system = linsys.parse_system(args.system)
    series = linsys.singular_series(system, args.p_max, threads=args.threads)
    results = json.loads(series.to_json())
    params = {"system": args.system, "P0": args.p_max, "N": None}
    _emit(
        _envelope("singular", args, params, results),
        args,
        csv_rows=[[p, f.numerator, f.denominator] for p, f in sorted(series.local_factors.items())],
        csv_header=["p", "num", "den"],
    )
    return 0


def cmd_count(args) -> int:
    ns = [int(v) for v in args.sweep.split(",")] if args.sweep else [args.n]
    if args.n is None and not args.sweep:
        raise ValueError("need --n or --sweep")
    tab = _cached_table(max(ns))
    reports = []
    for n in ns:
        if args.system:
            system = linsys.parse_system(args.system)
            rep = counting.generic_count(
                tab, system, n, mode=args.mode, samples=args.samples, seed=args.seed
            )
        elif args.weighted:
            rep = counting.weighted_ap_report(tab, n, args.k)
        else:
            rep = counting.ap_count_report(tab, n, args.k)
        reports.append(rep)
    results = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
    params = {"N": ns[-1], "k": args.k, "system": args.system, "mode": args.mode,
              "sweep": args.sweep}
    _emit(
        _envelope("count", args, params, results),
        args,
        csv_rows=[
            [r.N, r.descriptor, r.observed, r.predicted,
             r.ratio if r.predicted else "", r.method]
            for r in reports
        ],
        csv_header=["N", "descriptor", "observed", "predicted", "ratio", "method"],
    )
    return 0


def cmd_gowers(args) -> int:
    if args.input:
        f = np.loadtxt(args.input, delimiter=",", dtype=np.float64)
        if f.ndim != 1:
            raise ValueError("input CSV must be a single column")
    elif args.weights:
        f = _weights(_cached_table(args.m), args.weights, args.m)
    else:
        rng = np.random.default_rng(args.seed)
        f = rng.uniform(-1.0, 1.0, args.m)
    if args.method == "bruteforce":
        value = gowers.uk_norm_bruteforce(f, args.k)
    else:
        value = gowers.uk_norm(f, args.k, args.method)
    report = gowers.GowersReport(k=args.k, modulus=f.size, norm_value=value, method=args.method)
    params = {"N": None, "M": f.size, "k": args.k, "method": args.method}
    _emit(_envelope("gowers", args, params, json.loads(report.to_json())), args)
    return 0


def cmd_nilseq(args) -> int:
    g = nilseq.HeisenbergElement(args.alpha_g, args.beta_g, args.gamma_g)
    if args.character.startswith("torus:"):
        m1, m2 = (int(v) for v in args.character[6:].split(","))
        F = nilseq.TestFunction.torus_character(m1, m2)
    elif args.character.startswith("vertical:"):
        F = nilseq.TestFunction.vertical_character(int(args.character[9:]))
    else:
        raise ValueError(f"unknown character {args.character!r}")
    orbit = nilseq.orbit_array(g, nilseq.ORIGIN, args.n)
    vals = F.evaluate(orbit[:, 0], orbit[:, 1], orbit[:, 2])
    rows = [
        [i + 1, orbit[i, 0], orbit[i, 1], orbit[i, 2], vals[i].real, vals[i].imag]
        for i in range(args.n)
    ]
    results = {
        "g": [g.alpha, g.beta, g.gamma],
        "character": args.character,
        "lipschitz_estimate": F.lipschitz_estimate,
        "mean": {"re": float(vals.real.mean()), "im": float(vals.imag.mean())},
        "head": rows[: min(10, len(rows))],
    }
    params = {"N": args.n, "character": args.character}
    _emit(
        _envelope("nilseq", args, params, results),
        args,
        csv_rows=rows,
        csv_header=["n", "x", "y", "z", "re_F", "im_F"],
    )
    return 0


def cmd_mobius_corr(args) -> int:
    tab = _cached_table(args.n)
    battery = nilseq.correlation_battery(tab.mobius_seq(args.n), args.n)
    params = {"N": args.n}
    _emit(
        _envelope("mobius-corr", args, params, battery),
        args,
        csv_rows=sorted(battery.items()),
        csv_header=["sequence", "abs_correlation"],
    )
    return 0


def cmd_obstruction(args) -> int:
    obset = obstruction.build(args.kind, args.n, args.alpha)
    report = obstruction.stats_report(obset)
    if args.members_csv:
        obset.to_csv(args.members_csv)
    if args.bitset:
        obset.to_bitset(args.bitset)
    params = {"N": args.n, "kind": args.kind, "alpha": args.alpha}
    _emit(_envelope("obstruction", args, params, report), args)
    return 0


def cmd_acceptance(args) -> int:
    results = acceptance.run_all(only=args.only, threads=args.threads)
    if not results:
        print(f"error: no acceptance items match {args.only!r}", file=sys.stderr)
        return 1
    report = _envelope(
        "acceptance",
        args,
        {"N": None, "only": args.only},
        [
            {"id": r.cid, "title": r.title, "passed": r.passed,
             "measured": r.measured, "elapsed_s": r.elapsed}
            for r in results
        ],
    )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, sort_keys=True, indent=2, default=_jsonable)
    failed = [r.cid for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} acceptance items passed"
          + (f"; FAILED: {', '.join(failed)}" if failed else ""))
    return 3 if failed else 0


def _load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


GLOBAL_DEFAULTS = {
    "config": None,
    "seed": 0,
    "threads": None,  # filled with available parallelism at parse time
    "format": "json",
    "out": None,
}


def build_parser() -> _Parser:
    shared = argparse.ArgumentParser(add_help=False)
    sup = argparse.SUPPRESS
    shared.add_argument("--config", default=sup, help="key=value config file; flags override it")
    shared.add_argument("--seed", type=int, default=sup, help="seed for randomized paths")
    shared.add_argument("--threads", type=int, default=sup,
                        help="worker pool size (1 = reference mode)")
    shared.add_argument("--format", choices=["json", "csv"], default=sup)
    shared.add_argument("--out", default=sup, help="write the report here instead of stdout")

    p = _Parser(prog="hlmlab", description=__doc__.splitlines()[0], parents=[shared])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[shared], **kw)


    s = add_parser("sieve", help="build arithmetic tables, report summary stats")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dump", help="write the binary table dump here")
    s.set_defaults(fn=cmd_sieve)

    s = add_parser("expsum", help="exponential sums and their sup over the grid")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--theta", type=float, action="append", default=[])
    s.add_argument("--weights", choices=["lambda", "mobius"], default="lambda")
    s.add_argument("--oversample", type=int, default=4)
    s.set_defaults(fn=cmd_expsum)

    s = add_parser("arcs", help="major/minor classification sweep")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--exponent", type=float, default=2.0, help="arc exponent A")
    s.add_argument("--thetas", help="comma-separated list")
    s.add_argument("--grid", type=int, default=100, help="uniform grid size if no list")
    s.set_defaults(fn=cmd_arcs)

    s = add_parser("typesums", help="Type I / Type II maximal bilinear sums")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--w", type=int)
    s.add_argument("--phase", type=float, help="use f(n) = e(phase*n)")
    s.add_argument("--weights", choices=["lambda", "mobius"], default="mobius")
    s.set_defaults(fn=cmd_typesums)

    s = add_parser("singular", help="local factors and singular series")
    s.add_argument("--system", required=True, help='rows ";", entries ","')
    s.add_argument("--p-max", type=int, default=10**4)
    s.set_defaults(fn=cmd_singular)

    s = add_parser("count", help="prime-solution counts and predictions")
    s.add_argument("--n", type=int)
    s.add_argument("--sweep", help="comma-separated N values (CSV table mode)")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--weighted", action="store_true")
    s.add_argument("--system", help="count a general system instead of k-APs")
    s.add_argument("--mode", choices=["exact", "montecarlo"], default="exact")
    s.add_argument("--samples", type=int, default=10**4)
    s.set_defaults(fn=cmd_count)

    s = add_parser("gowers", help="U^k norms of a supplied or random function")
    s.add_argument("--m", type=int, default=64, help="modulus for random input")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--method", choices=["fft", "recursive", "bruteforce"], default="fft")
    s.add_argument("--input", help="single-column CSV of function values")
    s.add_argument("--weights", choices=["lambda", "mobius"],
                   help="use an arithmetic-table sequence on [1, m] as input")
    s.set_defaults(fn=cmd_gowers)

    s = add_parser("nilseq", help="Heisenberg orbit and nilsequence values")
    s.add_argument("--alpha-g", type=float, required=True)
    s.add_argument("--beta-g", type=float, default=0.0)
    s.add_argument("--gamma-g", type=float, default=0.0)
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--character", default="vertical:1",
                   help="vertical:m or torus:m1,m2")
    s.set_defaults(fn=cmd_nilseq)

    s = add_parser("mobius-corr", help="Mobius correlation battery")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(fn=cmd_mobius_corr)

    s = add_parser("obstruction", help="quadratic obstruction set statistics")
    s.add_argument("--kind", choices=["A1", "A2"], default="A1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", type=float, default=0.1)
    s.add_argument("--members-csv", help="export the member list")
    s.add_argument("--bitset", help="export the membership bitset")
    s.set_defaults(fn=cmd_obstruction)

    s = add_parser("acceptance", help="run the acceptance suite")
    s.add_argument("--only", help="filter by item id (A3) or tag (gowers)")
    s.set_defaults(fn=cmd_acceptance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if "--config" in argv:
        idx = argv.index("--config")
        cfg = _load_config(argv[idx + 1])
        injected = []
        for key, val in cfg.items():
            flag = "--" + key.replace("_", "-")
            if not any(a == flag or a.startswith(flag + "=") for a in argv):
                injected.extend([flag, val])
        # drop the --config pair, then append config-derived flags after the
        # subcommand; explicitly passed flags already occupy their spot and win
        argv = argv[:idx] + argv[idx + 2 :]
        argv = argv + injected
    args = parser.parse_args(argv)
    for key, default in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    if args.threads is None:
        args.threads = available_parallelism()
    try:
        return args.fn(args)
    except linsys.DegenerateSystem as exc:
        print(f"validation error: {exc.reason}", file=sys.stderr)
        return 2
    except (ValueError, arith.CapacityError, counting.FreeRankTooLarge,
            linsys.EnumerationTooLarge) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
