"""Command-line interface: splitaut <command> [options]."""

import argparse
import json
import logging
import os
import sys

from .analytics import REFERENCE_N_RANGE, genus_table, involution_ruled_out, parity_sequence, weil_polynomial
from .catalog import CatalogError, catalog_summary, get_catalog, import_catalog, save_catalog
from .exact.arith import is_prime
from .hyper import OTHER, hyperelliptic_model, plus_space_basis, verify_p11
from .verdict import (
    DEFAULT_SAMPLE,
    FAILED,
    SMALL_PRIMES,
    RunOptions,
    automorphism_verdict,
    report_json,
    report_text,
    run_report,
)

log = logging.getLogger("splitaut")


def prime_arg(text):
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if not is_prime(p) or p < 11:
        raise argparse.ArgumentTypeError(f"{p} is not a prime >= 11")
    return p


def prime_list(text):
    if not text.strip():
        return []
    return [prime_arg(t) for t in text.replace(" ", "").split(",") if t]


def _emit(args, data, text=None):
    if args.format == "json" or text is None:
        sys.stdout.write(json.dumps(data, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _catalog(args, p):
    path = getattr(args, "import_path", None)
    if path:
        cat = import_catalog(path, os.path.basename(path))
        if cat.p != p:
            raise CatalogError(f"{path} holds data for p = {cat.p}, not {p}")
        return cat
    return get_catalog(p, getattr(args, "lmax", 100), use_cache=not args.no_cache)


def cmd_genus(args):
    g = genus_table(args.p)
    _emit(args, {"p": g.p, "g_plus": g.g_plus, "g_zero": g.g_zero}, f"p = {g.p}: g+ = {g.g_plus}, g0 = {g.g_zero}")
    return 0


def cmd_catalog(args):
    cat = _catalog(args, args.p)
    if args.output:
        save_catalog(cat, args.output)
    s = catalog_summary(cat)
    lines = [f"p = {cat.p} ({cat.provenance}), g+ = {s['g_plus']}, t = {s['t']}, splitting field {s['splitting_field']}"]
    for o in s["orbits"]:
        flags = ",".join(f for f in ("cm", "inner_twist") if o[f]) or "-"
        lines.append(f"  {o['label']:<8} dim {o['dimension']:>2} eps {o['epsilon']:+d} {flags:<11} twist {o['twist']}")
    _emit(args, s, "\n".join(lines))
    return 0


def cmd_pointcount(args):
    cat = _catalog(args, args.p)
    w = weil_polynomial(cat, args.ell)
    N = [w.N(n) for n in range(1, args.nmax + 1)]
    data = {
        "p": args.p,
        "ell": args.ell,
        "weil_polynomial": [str(c) for c in w.weil_poly.coeffs],
        "N": [str(v) for v in N],
        "functional_equation": w.functional_equation_holds(),
    }
    text = "\n".join(f"N_{args.ell}({n}) = {v}" for n, v in enumerate(N, 1))
    _emit(args, data, text)
    return 0


def cmd_parity(args):
    cat = _catalog(args, args.p)
    if args.p in REFERENCE_N_RANGE or args.nmax:
        cert = involution_ruled_out(cat, args.nmax)
    else:
        cert = parity_sequence(weil_polynomial(cat, 2), 40)
    text = (
        f"p = {args.p}: s = {cert.s}, N_2(s) = {cert.N[0]}, sum P_2(n) for n <= {cert.n_max} = {cert.sum_P}, "
        f"allowed {cert.allowed_max}, ruled out: {cert.ruled_out}"
    )
    _emit(args, cert.to_json(), text)
    return 0 if cert.ruled_out or cert.ruled_out is None else 1


def cmd_hyper(args):
    if args.p == 11:
        cat = get_catalog(11, 150, use_cache=not args.no_cache)
        weil = {ell: weil_polynomial(cat, ell) for ell in (2, 3, 5)}
        cert = verify_p11(cat, weil)
        text = f"{cert['model']['equation']}\nx = {cert['model']['x']}\ny = {cert['model']['y']}\nstatus {cert['status']}"
        _emit(args, cert, text)
        return 0 if cert["status"] == "VERIFIED" else 1
    cat = _catalog(args, args.p)
    basis = plus_space_basis(cat, args.precision)
    data = {"p": args.p, "pivots": basis.pivots, "shape": basis.shape, "precision": basis.precision}
    text = f"p = {args.p}: pivots {basis.pivots}, shape {basis.shape}"
    if basis.shape != OTHER:
        res = hyperelliptic_model(basis).to_json()
        data["model"] = res
        text += "\n" + json.dumps(res, sort_keys=True)
    _emit(args, data, text)
    return 0


def _options(args):
    return RunOptions(
        ell_max=getattr(args, "lmax", 100),
        n_max=getattr(args, "nmax", None),
        precision=getattr(args, "precision", None),
        use_cache=not args.no_cache,
    )


def cmd_verdict(args):
    if args.all:
        primes = list(SMALL_PRIMES) + list(args.sample)
    elif args.p:
        primes = [args.p]
    else:
        args.parser.error("verdict needs -p P or --all")
    opts = _options(args)
    verdicts = [automorphism_verdict(p, opts) for p in primes]
    data = [v.to_json() for v in verdicts]
    lines = [f"p = {v.p}: {v.aut_group} [{v.status}] via {v.branch}" for v in verdicts]
    _emit(args, data if len(data) > 1 else data[0], "\n".join(lines))
    return 1 if any(v.status == FAILED for v in verdicts) else 0


def cmd_report(args):
    report = run_report(args.primes, _options(args), jobs=args.jobs)
    body = report_json(report) if args.format == "json" else report_text(report)
    if args.output:
        tmp = args.output + ".tmp"
        try:
            with open(tmp, "w") as fh:
                fh.write(body)
            os.replace(tmp, args.output)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(body)
    failed = any(sec["verdict"]["status"] == FAILED for sec in report["primes"])
    return 1 if failed else 0


GLOBAL_DEFAULTS = {"cache_dir": None, "no_cache": False, "format": "text", "verbose": False}


def build_parser():
    # global options are accepted before or after the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=argparse.SUPPRESS, help="catalog cache directory")
    common.add_argument("--no-cache", action="store_true", default=argparse.SUPPRESS, help="bypass the catalog cache")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="splitaut", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("genus", help="genera of X_0^+(p^2) and X_0(p)")
    p.add_argument("-p", type=prime_arg, required=True)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("catalog", help="newform orbits at levels p and p^2")
    p.add_argument("-p", type=prime_arg, required=True)
    p.add_argument("--lmax", type=int, default=100)
    p.add_argument("--import", dest="import_path", metavar="FILE", help="use external newform data")
    p.add_argument("-o", "--output", help="also write the catalog record to this file")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("pointcount", help="N_l(n) from the Weil polynomial")
    p.add_argument("-p", type=prime_arg, required=True)
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--import", dest="import_path", metavar="FILE")
    p.set_defaults(func=cmd_pointcount)

    p = sub.add_parser("parity", help="parity certificate against involutions")
    p.add_argument("-p", type=prime_arg, required=True)
    p.add_argument("--nmax", type=int)
    p.add_argument("--import", dest="import_path", metavar="FILE")
    p.set_defaults(func=cmd_parity)

    p = sub.add_parser("hyper", help="basis shape and hyperelliptic model")
    p.add_argument("-p", type=prime_arg, required=True)
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_hyper)

    p = sub.add_parser("verdict", help="automorphism group verdict")
    g = p.add_mutually_exclusive_group()
    g.add_argument("-p", type=prime_arg)
    g.add_argument("--all", action="store_true", help=f"{', '.join(map(str, SMALL_PRIMES))} and a sample above 31")
    p.add_argument("--sample", type=prime_list, default=list(DEFAULT_SAMPLE), help="primes > 31 for --all")
    p.add_argument("--lmax", type=int, default=100)
    p.add_argument("--nmax", type=int)
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_verdict, parser=p)

    p = sub.add_parser("report", help="full deterministic report")
    p.add_argument("--primes", type=prime_list, required=True, help="comma-separated primes")
    p.add_argument("-o", "--output")
    p.add_argument("--lmax", type=int, default=100)
    p.add_argument("--nmax", type=int)
    p.add_argument("--precision", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    # defaults are filled in here: set_defaults would leak into the shared parent actions
    for name, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, value)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.cache_dir:
        os.environ["SPLITAUT_CACHE"] = args.cache_dir
    try:
        return args.func(args)
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
