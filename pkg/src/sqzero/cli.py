"""Command line frontend.

Exit codes: 0 for success / a Yes verdict, 1 for a definite No or any error,
2 for an Unknown verdict (the open branch of the three-summand problem).
"""

from __future__ import annotations

import argparse
import sys

from . import io as sio
from .canonical import char_poly, fitting, invariant_polynomials, minimal_polynomial, rcf
from .division import (
    quotient_left,
    quotient_right,
    sqz_quotient_left,
    sqz_quotient_left_rank_bounds,
    sqz_quotient_rank_bounds,
    sqz_quotient_right,
)
from .errors import SqzeroError
from .matrices import Matrix, rank
from .oracle import (
    NILPOTENT,
    SQUARE_ZERO,
    EnumSpec,
    brute_product_decide,
    brute_sum_decide,
    enumerate_matrices,
    verify_certificate,
)
from .products import (
    ProductCertificate,
    nilpotent_product_two,
    sqz_product_chain,
    sqz_product_three,
    sqz_product_two,
)
from .sums import (
    SumCertificate,
    nilpotent_sum,
    sum_four_sqz,
    sum_three_decide,
    sum_two_sqz,
)


def _print_matrix(M: Matrix, name: str, out_mode: str):
    if out_mode == "structured":
        sys.stdout.write(sio.structured_matrix(name, M))
    else:
        print(f"{name}:")
        print(M)


def _print_poly(p, name: str, out_mode: str):
    if out_mode == "structured":
        print(f"poly {name} {sio.format_poly(p)}")
    else:
        print(f"{name}: {p}")


def _emit_certificate(cert, out_mode: str):
    report = verify_certificate(cert)
    if out_mode == "structured":
        sys.stdout.write(sio.format_certificate(cert))
        print(f"verified {str(report)}")
    else:
        parts = cert.factors if isinstance(cert, ProductCertificate) else cert.summands
        word = "factor" if isinstance(cert, ProductCertificate) else "summand"
        for i, m in enumerate(parts, 1):
            _print_matrix(m, f"{word} {i} ({cert.roles[i - 1]})", out_mode)
        print(f"verified: {report}")
        print("-- certificate --")
        sys.stdout.write(sio.format_certificate(cert))
    if not report.passed:
        raise SqzeroError("certificate failed verification")


def _read(args, path):
    override = sio.parse_field(args.field) if args.field else None
    return sio.read_matrix(path, override)


def cmd_invariants(args):
    A = _read(args, args.matrix)
    inv = invariant_polynomials(A)
    for i, f in enumerate(inv.nonconstant, 1):
        _print_poly(f, f"f{i}", args.out)
    return 0


def cmd_charpoly(args):
    _print_poly(char_poly(_read(args, args.matrix)), "charpoly", args.out)
    return 0


def cmd_minpoly(args):
    _print_poly(minimal_polynomial(_read(args, args.matrix)), "minpoly", args.out)
    return 0


def cmd_rcf(args):
    A = _read(args, args.matrix)
    res = rcf(A)
    for i, f in enumerate(res.polys, 1):
        _print_poly(f, f"f{i}", args.out)
    _print_matrix(res.form, "form", args.out)
    _print_matrix(res.transform, "transform", args.out)
    print("verified: P^-1 A P = form")
    return 0


def cmd_fitting(args):
    A = _read(args, args.matrix)
    res = fitting(A)
    _print_matrix(res.nilpotent, "nilpotent", args.out)
    _print_matrix(res.invertible, "invertible", args.out)
    _print_matrix(res.transform, "transform", args.out)
    return 0


def _load_recipe(args, field):
    if not args.recipe:
        return None
    with open(args.recipe) as fh:
        return sio.parse_recipe(fh.read(), field)


def cmd_divide(args):
    G = _read(args, args.G)
    F = _read(args, args.F)
    recipe = _load_recipe(args, G.field)
    if args.left:
        H = quotient_left(G, F, args.rank, recipe)
        factors, note = (F, H), "G = F * H"
    else:
        H = quotient_right(G, F, args.rank, recipe)
        factors, note = (H, F), "G = H * F"
    _print_matrix(H, "quotient", args.out)
    print(f"verified: {note}, rank = {rank(H)}")
    cert = ProductCertificate(G, factors, ("Any", "Any"),
                              tuple(rank(f) for f in factors), "general quotient")
    _emit_certificate(cert, args.out)
    return 0


def cmd_sqzq(args):
    G = _read(args, args.G)
    F = _read(args, args.F)
    recipe = _load_recipe(args, G.field)
    if args.left:
        bounds = sqz_quotient_left_rank_bounds(G, F)
        H = sqz_quotient_left(G, F, args.rank, recipe)
        factors, note = (F, H), "G = F * H, H^2 = 0"
        roles = ("Any", SQUARE_ZERO)
    else:
        bounds = sqz_quotient_rank_bounds(G, F)
        H = sqz_quotient_right(G, F, args.rank, recipe)
        factors, note = (H, F), "G = H * F, H^2 = 0"
        roles = (SQUARE_ZERO, "Any")
    print(f"rank bounds: {bounds.low}..{bounds.high} ({bounds.tag})")
    _print_matrix(H, "quotient", args.out)
    print(f"verified: {note}, rank = {rank(H)}")
    cert = ProductCertificate(G, factors, roles, tuple(rank(f) for f in factors),
                              "square-zero quotient")
    _emit_certificate(cert, args.out)
    return 0


def _parse_ranks(text):
    return [int(t) for t in text.split(",")] if text else None


def cmd_factor(args):
    A = _read(args, args.matrix)
    ranks = _parse_ranks(args.ranks)
    if args.kind == "nilpotent2":
        cert = nilpotent_product_two(A)
    elif args.kind == "sqz2":
        pair = (ranks + [None, None])[:2] if ranks else (None, None)
        cert = sqz_product_two(A, pair[0], pair[1])
    elif args.kind == "sqz3":
        cert = sqz_product_three(A, ranks)
    elif args.kind == "sqzk":
        if not args.k:
            raise SqzeroError("--k is required for kind sqzk")
        cert = sqz_product_chain(A, args.k, ranks)
    else:
        raise SqzeroError(f"unknown factor kind {args.kind!r}")
    _emit_certificate(cert, args.out)
    return 0


def cmd_sum(args):
    A = _read(args, args.matrix)
    if args.k == "nilpotent":
        cert = nilpotent_sum(A)
    elif args.k == "2":
        cert = sum_two_sqz(A)
    elif args.k == "4":
        cert = sum_four_sqz(A)
    elif args.k == "3":
        verdict = sum_three_decide(A)
        return _report_verdict(verdict, args.out)
    else:
        raise SqzeroError(f"unknown sum kind {args.k!r}")
    _emit_certificate(cert, args.out)
    return 0


def _report_verdict(verdict, out_mode):
    print(f"verdict: {verdict.status}")
    if verdict.reason:
        print(f"reason: {verdict.reason}")
    if verdict.checks:
        print("checks: " + "; ".join(verdict.checks))
    if verdict.status == "Yes":
        _emit_certificate(verdict.certificate, out_mode)
        return 0
    return 1 if verdict.status == "No" else 2


def cmd_sum3_decide(args):
    A = _read(args, args.matrix)
    return _report_verdict(sum_three_decide(A), args.out)


def cmd_verify(args):
    with open(args.certificate) as fh:
        cert = sio.parse_certificate(fh.read())
    report = verify_certificate(cert)
    print(str(report))
    return 0 if report.passed else 1


_CLAIMS = {
    "sum2": "sum of two square-zero <=> all invariant polynomials even/odd",
    "sum3": "sum of three square-zero <=> trace zero (characteristic two)",
    "sum4": "sum of four square-zero <=> trace zero",
    "prod2sqz": "product of two square-zero <=> r <= n(G) - dim(R cap N)",
    "prod3sqz": "product of three square-zero <=> 2 r <= n",
    "prod2nilp": "product of two nilpotent <=> singular, excluding nonzero nilpotent 2x2",
}


def cmd_oracle_scan(args):
    from .matrices import colspace_basis, intersect_subspaces, nullspace_basis
    from .sums import is_sum_two_sqz

    field = sio.parse_field(args.field or "GF(2)")
    n = args.n
    claims = list(_CLAIMS) if args.claim == "all" else [args.claim]
    total = 0
    fails = {c: 0 for c in claims}
    counts = {c: 0 for c in claims}
    for A in enumerate_matrices(EnumSpec(field, n)):
        total += 1
        r = rank(A)
        tr0 = field.is_zero(A.trace())
        for c in claims:
            if c == "sum2":
                brute = brute_sum_decide(A, 2)
                pred = is_sum_two_sqz(A)
            elif c == "sum3":
                if field.characteristic != 2:
                    continue
                brute = brute_sum_decide(A, 3)
                pred = tr0
            elif c == "sum4":
                brute = brute_sum_decide(A, 4)
                pred = tr0
            elif c == "prod2sqz":
                brute = brute_product_decide(A, 2, SQUARE_ZERO)
                rn = len(intersect_subspaces(field, colspace_basis(A).matrix(field),
                                             nullspace_basis(A).matrix(field)))
                pred = r <= (n - r) - rn
            elif c == "prod3sqz":
                brute = brute_product_decide(A, 3, SQUARE_ZERO)
                pred = 2 * r <= n
            elif c == "prod2nilp":
                brute = brute_product_decide(A, 2, NILPOTENT)
                exceptional = n == 2 and A.is_nilpotent() and not A.is_zero()
                pred = r < n and not exceptional
            else:
                raise SqzeroError(f"unknown claim {c!r}")
            counts[c] += 1
            if brute != pred:
                fails[c] += 1
    print(f"scanned {total} matrices over {sio.format_field(field)}, order {n}")
    bad = False
    for c in claims:
        status = "pass" if fails[c] == 0 else f"FAIL ({fails[c]} mismatches)"
        print(f"{c}: {counts[c]} checked, {status} -- {_CLAIMS[c]}")
        bad = bad or fails[c] > 0
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", choices=("text", "structured"), default="text")
    common.add_argument("--field", help="field override for input files, e.g. Q or GF(7)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized factor splitting")
    ap = argparse.ArgumentParser(
        prog="sqzero",
        description="exact nilpotent and square-zero matrix decompositions over Q and GF(p)")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn in (("invariants", cmd_invariants), ("rcf", cmd_rcf),
                     ("fitting", cmd_fitting), ("minpoly", cmd_minpoly),
                     ("charpoly", cmd_charpoly)):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("matrix")
        sp.set_defaults(fn=fn)

    for name, fn in (("divide", cmd_divide), ("sqzq", cmd_sqzq)):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("G")
        sp.add_argument("F")
        sp.add_argument("--rank", type=int)
        sp.add_argument("--left", action="store_true")
        sp.add_argument("--recipe")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("factor", parents=[common])
    sp.add_argument("matrix")
    sp.add_argument("--kind", required=True,
                    choices=("nilpotent2", "sqz2", "sqz3", "sqzk"))
    sp.add_argument("--k", type=int)
    sp.add_argument("--ranks")
    sp.set_defaults(fn=cmd_factor)

    sp = sub.add_parser("sum", parents=[common])
    sp.add_argument("matrix")
    sp.add_argument("--k", required=True, choices=("2", "3", "4", "nilpotent"))
    sp.set_defaults(fn=cmd_sum)

    sp = sub.add_parser("sum3-decide", parents=[common])
    sp.add_argument("matrix")
    sp.set_defaults(fn=cmd_sum3_decide)

    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("certificate")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("oracle-scan", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--claim", default="all", choices=list(_CLAIMS) + ["all"])
    sp.set_defaults(fn=cmd_oracle_scan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SqzeroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
