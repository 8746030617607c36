"""Command-line interface.

Commands: search, analyze, refute, fiber, verify, dickson, gen-corpus.

Exit codes (stable contract):
  0  decisive positive (Found / Exists / certificate emitted / file valid)
  1  decisive negative (NoneBelow / NotExists / no certificate / file invalid)
  2  inconclusive (cap exceeded)
  3  invalid input (field/polynomial/flag parsing)
  4  I/O error
  5  internal error

Flag values may also come from a key=value config file (--config) and the
default seed from the COMPOSITUM_SEED environment variable; explicit flags
win over the config file, which wins over the environment.
"""

from __future__ import annotations

import argparse
import os
import sys
from math import lcm

from . import certio
from .closure import analyze as closure_analyze
from .closure import compatible_closure, solve_labeling, ClosureOverflow
from .errors import AlgebraError
from .families import (
    additive_family,
    deg2_family,
    dickson,
    shifted_family,
    tame_family,
)
from .fields import GF, FieldElement
from .parser import field_text, modulus_text, parse_element, parse_field, parse_poly
from .poly import Polynomial
from .refute import RefutationCertificate, refute
from .search import (
    default_bound,
    fiber_iterate,
    search_linear,
    verify_certificate,
)

ENV_SEED = "COMPOSITUM_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p, need_polys=True):
    p.add_argument("--field", help="GF(p), GF(p^n), GF(p^n; m=<poly in t>), QQ")
    if need_polys:
        p.add_argument("--f1", help="first polynomial in x")
        p.add_argument("--f2", help="second polynomial in x")
    p.add_argument("--bound", type=int, help="search degree bound / cap")
    p.add_argument("--max-d", type=int, default=None, help="cycle half-length cap")
    p.add_argument("--max-size", type=int, default=None, help="closure size cap")
    p.add_argument("--max-ext", type=int, default=None,
                   help="extension degree cap over the prime field")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for generated moduli and sampling")
    p.add_argument("--output", help="write the certificate/report here")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--config", help="key=value file with defaults for flags")


def build_parser():
    top = _Parser(prog="compositum",
                  description="Decide, certify, and refute common composites "
                              "h = g1(f1(x)) = g2(f2(x)) with exact arithmetic.")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="linear-dependence and fiber-iteration search")
    _add_common(p)

    p = sub.add_parser("analyze", help="search, then closure analysis, then refutation")
    _add_common(p)
    p.add_argument("--seeds", default="0",
                   help="comma-separated seed points for the closure")

    p = sub.add_parser("refute", help="cycle search with both product tests")
    _add_common(p)

    p = sub.add_parser("fiber", help="compatible closure and labeling from a seed point")
    _add_common(p)
    p.add_argument("--seed-point", default="0", help="starting point expression")

    p = sub.add_parser("verify", help="re-validate a certificate file offline")
    p.add_argument("path")
    p.add_argument("--format", choices=("text", "machine"), default="text")

    p = sub.add_parser("dickson", help="print a Dickson polynomial")
    p.add_argument("n", type=int)
    p.add_argument("alpha", help="parameter element expression")
    p.add_argument("--field", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", help="key=value file with defaults for flags")

    p = sub.add_parser("gen-corpus", help="emit family instances with known answers")
    _add_common(p, need_polys=False)
    p.add_argument("--out", required=True)
    p.add_argument("--kinds", default="additive,shifted,deg2,tame-cyclic,tame-dickson")
    p.add_argument("--count", type=int, default=5,
                   help="instances per kind (deterministic grid)")
    return top


def _load_config(path):
    try:
        with open(path) as fh:
            return certio.parse_kv_lines(fh.read())
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e}")


def _resolve(args):
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    def pick(name, cast=str, default=None):
        v = getattr(args, name.replace("-", "_"), None)
        if v is not None:
            return v
        if name in cfg:
            return cast(cfg[name])
        return default
    seed = pick("seed", int)
    if seed is None:
        seed = int(os.environ.get(ENV_SEED, "0"))
    return cfg, seed


def _parse_inputs(args, cfg, seed):
    field_s = getattr(args, "field", None) or cfg.get("field")
    if not field_s:
        raise UsageError("--field is required")
    fld = parse_field(field_s, seed=seed)
    f1_s = getattr(args, "f1", None) or cfg.get("f1")
    f2_s = getattr(args, "f2", None) or cfg.get("f2")
    if not f1_s or not f2_s:
        raise UsageError("--f1 and --f2 are required")
    f1 = parse_poly(f1_s, fld)
    f2 = parse_poly(f2_s, fld)
    if f1.degree < 1 or f2.degree < 1:
        raise UsageError("f1 and f2 must be nonconstant")
    return fld, f1, f2


def _emit(args, lines, human):
    text = "\n".join(lines) + "\n" if args.format == "machine" else human
    sys.stdout.write(text)
    if getattr(args, "output", None):
        certio.atomic_write(args.output, "\n".join(lines) + "\n")


def cmd_search(args) -> int:
    cfg, seed = _resolve(args)
    fld, f1, f2 = _parse_inputs(args, cfg, seed)
    bound = args.bound or (int(cfg["bound"]) if "bound" in cfg else None) \
        or default_bound(f1, f2)
    lin = search_linear(f1, f2, bound)
    fib = fiber_iterate(f1, f2, bound)
    if lin.found != fib.found:
        raise AssertionError(
            f"engines disagree: linear={lin.status} fiber={fib.status}")
    lines = [f"command=search", f"field={field_text(fld)}",
             f"modulus={modulus_text(fld)}", f"seed={seed}",
             f"f1={f1.to_text()}", f"f2={f2.to_text()}", f"bound={bound}"]
    if lin.found:
        cert = lin.certificate
        if fib.certificate.h != cert.h:
            raise AssertionError("engines found different normalized minima")
        ver = verify_certificate(cert)
        if not ver:
            raise AssertionError(f"self-verification failed: {ver.reason}")
        lines.append("outcome=found")
        lines.append(f"trace_degrees={','.join(str(r.degree) for r in fib.trace)}")
        lines += certio.composite_lines(cert, seed)
        human = (f"found a minimal common composite of degree {cert.h.degree}\n"
                 f"  h  = {cert.h}\n  g1 = {cert.g1}\n  g2 = {cert.g2}\n"
                 f"certificate verified\n")
        _emit(args, lines, human)
        if args.output and args.format != "machine":
            certio.write_certificate(args.output, cert, seed)
        return 0
    # negative case: search_linear proved NoneBelow(bound) and the
    # iteration exceeded the cap.  In characteristic zero with bound >= lcm
    # this settles nonexistence outright; otherwise it is a bounded claim.
    degs = ",".join(str(r.degree) for r in fib.trace)
    decisive = fld.p == 0 and bound >= lcm(f1.degree, f2.degree)
    lines.append("outcome=" + ("none_below" if decisive else "cap_exceeded"))
    lines.append(f"none_below={bound}")
    lines.append(f"trace_degrees={degs}")
    human = (f"no common composite of degree <= {bound} exists"
             f"{' (decisive in characteristic zero)' if decisive else ''}\n"
             f"  iteration degrees: {degs}\n")
    _emit(args, lines, human)
    return 1 if decisive else 2


def cmd_analyze(args) -> int:
    cfg, seed = _resolve(args)
    fld, f1, f2 = _parse_inputs(args, cfg, seed)
    bound = args.bound or (int(cfg["bound"]) if "bound" in cfg else None) \
        or default_bound(f1, f2)
    max_size = args.max_size or 4096
    max_ext = args.max_ext or 60
    max_d = args.max_d or 5
    lines = [f"command=analyze", f"field={field_text(fld)}",
             f"modulus={modulus_text(fld)}", f"seed={seed}",
             f"f1={f1.to_text()}", f"f2={f2.to_text()}", f"bound={bound}"]

    lin = search_linear(f1, f2, bound)
    if lin.found:
        ver = verify_certificate(lin.certificate)
        assert ver, ver.reason
        lines.append("verdict=exists")
        lines += certio.composite_lines(lin.certificate, seed)
        _emit(args, lines, f"verdict: exists (degree {lin.certificate.h.degree})\n")
        if args.output and args.format != "machine":
            certio.write_certificate(args.output, lin.certificate, seed)
        return 0
    if fld.p == 0:
        # characteristic zero: a composite would force one of degree lcm
        cert = RefutationCertificate("module_nonexistence", f1, f2,
                                     bound=lcm(f1.degree, f2.degree))
        lines.append("verdict=not_exists")
        lines += certio.refutation_lines(cert, seed)
        _emit(args, lines,
              "verdict: not_exists (no composite at degree lcm, which "
              "characteristic zero would force)\n")
        if args.output and args.format != "machine":
            certio.write_certificate(args.output, cert, seed)
        return 1

    seeds = []
    for s in (args.seeds or "0").split(","):
        s = s.strip()
        if s:
            seeds.append(parse_element(s, fld))
    rep = closure_analyze(f1, f2, seeds, max_size=max_size, max_ext=max_ext,
                          field_seed=seed)
    if rep.verdict == "exists":
        lines.append("verdict=exists")
        lines += certio.composite_lines(rep.certificate, seed)
        _emit(args, lines,
              f"verdict: exists (degree {rep.certificate.h.degree})\n")
        if args.output and args.format != "machine":
            certio.write_certificate(args.output, rep.certificate, seed)
        return 0
    if rep.verdict == "not_exists":
        cyc_pts = rep.inconsistency.cycle
        amb = cyc_pts[0].value.field
        from .refute import FiberCycle
        cert = RefutationCertificate(
            "inconsistent_set", f1, f2,
            cycle=FiberCycle(tuple(p.value for p in cyc_pts), amb),
            set_points=tuple(rep.seed_reports[-1].closure.points)
            if rep.seed_reports[-1].closure else (),
            product=rep.inconsistency.product)
        lines.append("verdict=not_exists")
        lines += certio.refutation_lines(cert, seed)
        _emit(args, lines,
              f"verdict: not_exists (inconsistent set, ratio product "
              f"{rep.inconsistency.product})\n")
        if args.output and args.format != "machine":
            certio.write_certificate(args.output, cert, seed)
        return 1

    cert = refute(f1, f2, max_d=max_d, max_ext=max_ext, field_seed=seed)
    if cert is not None:
        lines.append("verdict=not_exists")
        lines += certio.refutation_lines(cert, seed)
        _emit(args, lines, f"verdict: not_exists ({cert.kind})\n")
        if args.output and args.format != "machine":
            certio.write_certificate(args.output, cert, seed)
        return 1
    lines.append("verdict=inconclusive")
    for sr in rep.seed_reports:
        lines.append(f"seed_point={sr.seed}")
        lines.append(f"seed_status={sr.status}")
        if sr.overflow is not None and sr.overflow.arithmetic_orbit:
            a, b, c = sr.overflow.arithmetic_orbit
            lines.append(f"arithmetic_orbit={a};{b};{c}")
    _emit(args, lines, "verdict: inconclusive (caps reached)\n")
    return 2


def cmd_refute(args) -> int:
    cfg, seed = _resolve(args)
    fld, f1, f2 = _parse_inputs(args, cfg, seed)
    max_d = args.max_d or 5
    max_ext = args.max_ext or 60
    cert = refute(f1, f2, max_d=max_d, max_ext=max_ext, field_seed=seed)
    lines = [f"command=refute", f"field={field_text(fld)}",
             f"modulus={modulus_text(fld)}", f"seed={seed}",
             f"f1={f1.to_text()}", f"f2={f2.to_text()}"]
    if cert is None:
        lines.append("outcome=no_certificate")
        _emit(args, lines, "no refutation certificate found within caps\n")
        return 1
    lines.append("outcome=certificate")
    lines += certio.refutation_lines(cert, seed)
    human = [f"no common composite: {cert.kind}"]
    if cert.cycle:
        human.append("  cycle: " + ", ".join(str(p) for p in cert.cycle.points))
    if cert.product is not None:
        human.append(f"  multiplicity ratio product = {cert.product}")
    if cert.lhs is not None:
        human.append(f"  derivative products {cert.lhs} != {cert.rhs}")
        human.append(f"  point degree {cert.witness_degree} has prime "
                     f"{cert.witness_prime} > max(deg f1, deg f2)")
    _emit(args, lines, "\n".join(human) + "\n")
    if args.output and args.format != "machine":
        certio.write_certificate(args.output, cert, seed)
    return 0


def cmd_fiber(args) -> int:
    cfg, seed = _resolve(args)
    fld, f1, f2 = _parse_inputs(args, cfg, seed)
    start = parse_element(args.seed_point, fld)
    max_size = args.max_size or 4096
    max_ext = args.max_ext or 60
    out = compatible_closure(f1, f2, start, max_size=max_size,
                             max_ext=max_ext, field_seed=seed)
    lines = [f"command=fiber", f"field={field_text(fld)}",
             f"modulus={modulus_text(fld)}",
             f"f1={f1.to_text()}", f"f2={f2.to_text()}",
             f"seed_point={start}"]
    if isinstance(out, ClosureOverflow):
        lines.append("outcome=cap_exceeded")
        lines.append(f"cap={out.cap}")
        lines.append(f"sizes={','.join(str(s) for s in out.sizes)}")
        _emit(args, lines, f"closure exceeded {out.cap} "
                           f"(growth {list(out.sizes[:12])}...)\n")
        return 2
    lines.append("outcome=closed")
    lines.append(f"ambient={field_text(out.ambient)}")
    lines.append(f"ambient_modulus={modulus_text(out.ambient)}")
    lab = solve_labeling(out, f1, f2)
    human = [f"closure has {len(out.points)} points in {field_text(out.ambient)}"]
    if lab.consistent:
        lines.append("labeling=consistent")
        pl = []
        for p in out.points:
            pl.append(f"{p.value}:{p.m1}:{p.m2}:{lab.labels[p.value]}")
            human.append(f"  {p.value}  m1={p.m1} m2={p.m2} "
                         f"label={lab.labels[p.value]}")
        lines.append("points=" + ";".join(pl))
        human.append("labeling: consistent")
    else:
        lines.append("labeling=inconsistent")
        lines.append(f"product={lab.certificate.product.numerator}/"
                     f"{lab.certificate.product.denominator}")
        lines.append("cycle=" + ";".join(str(p.value)
                                         for p in lab.certificate.cycle))
        human.append(f"labeling: inconsistent "
                     f"(ratio product {lab.certificate.product})")
    _emit(args, lines, "\n".join(human) + "\n")
    return 0


def cmd_verify(args) -> int:
    res = certio.verify_file(args.path)
    if args.format == "machine":
        sys.stdout.write(f"valid={'true' if res.ok else 'false'}\n"
                         f"reason={res.reason}\n")
    else:
        sys.stdout.write(f"{'VALID' if res.ok else 'INVALID'}: {res.reason}\n")
    return 0 if res.ok else 1


def cmd_dickson(args) -> int:
    cfg, seed = _resolve(args)
    fld = parse_field(args.field, seed=seed)
    alpha = parse_element(args.alpha, fld)
    poly = dickson(args.n, alpha)
    sys.stdout.write(poly.to_text() + "\n")
    return 0


def cmd_gen_corpus(args) -> int:
    import random

    cfg, seed = _resolve(args)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    count = args.count
    rng = random.Random(f"corpus:{seed}")
    instances = []
    if "additive" in kinds:
        grid = [(n, p, r) for p in (2, 3, 5) for n in (2, 3, 4, 5, 7)
                for r in (1, 2) if n % p]
        for n, p, r in grid[:count * 2]:
            instances.append(additive_family(n, p, r))
    if "shifted" in kinds:
        grid = [(n, m, p) for p in (2, 3, 5) for n in (2, 3, 5)
                for m in (2, 3, 5) if (n * m) % p and n > 1 and m > 1]
        for n, m, p in grid[:count * 2]:
            instances.append(shifted_family(n, m, p))
    if "deg2" in kinds:
        for p in (2, 3, 5, 7, 11)[:max(1, count // 1)]:
            fld = GF(p)
            a = rng.randrange(p)
            b = rng.randrange(p)
            instances.append(deg2_family(a, b, fld))
    if "tame-cyclic" in kinds:
        from .fields import QQ
        for i in range(count):
            fld = QQ if i % 2 == 0 else GF(7)
            P = Polynomial(fld, [1 + rng.randrange(3), 1])
            instances.append(tame_family("cyclic", P=P, r=1,
                                         n=2 + (i % 2)))
    if "tame-dickson" in kinds:
        from .fields import QQ
        for i in range(count):
            fld = QQ if i % 2 == 0 else GF(5)
            alpha = fld(1 + rng.randrange(3))
            instances.append(tame_family("dickson", m=2, n=3, alpha=alpha))
    text = "\n".join(certio.corpus_line(inst) for inst in instances) + "\n"
    certio.atomic_write(args.out, text)
    sys.stdout.write(f"wrote {len(instances)} instances to {args.out}\n")
    return 0


_COMMANDS = {
    "search": cmd_search,
    "analyze": cmd_analyze,
    "refute": cmd_refute,
    "fiber": cmd_fiber,
    "verify": cmd_verify,
    "dickson": cmd_dickson,
    "gen-corpus": cmd_gen_corpus,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return 3
    except AlgebraError as e:
        sys.stderr.write(f"error: {e}\n")
        return 3
    except OSError as e:
        sys.stderr.write(f"i/o error: {e}\n")
        return 4
    except Exception as e:  # pragma: no cover - defensive
        sys.stderr.write(f"internal error: {e!r}\n")
        return 5


if __name__ == "__main__":
    sys.exit(main())
