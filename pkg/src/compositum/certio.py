"""Line-oriented certificate, report, and corpus files.

Every file is a sequence of ``key=value`` lines using the canonical
polynomial/element serialization (no spaces inside values), so files diff
cleanly and identical runs are byte-identical.  The pinned modulus always
travels with extension-field data; `verify_file` re-derives every claim
offline.
"""

from __future__ import annotations

import os
import tempfile
from fractions import Fraction

from .errors import AlgebraError
from .fields import Field, FieldElement
from .parser import field_text, modulus_text, parse_element, parse_field, parse_poly
from .poly import Polynomial
from .search import CompositeCertificate, VerifyResult, verify_certificate
from .refute import FiberCycle, RefutationCertificate, verify_refutation


def atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-cert-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _lines_to_text(lines):
    return "\n".join(lines) + "\n"


def composite_lines(cert: CompositeCertificate, seed: int | None = None):
    fld = cert.h.field
    lines = [
        "kind=composite",
        f"field={field_text(fld)}",
        f"modulus={modulus_text(fld)}",
        f"seed={seed if seed is not None else '-'}",
        f"f1={cert.f1.to_text()}",
        f"f2={cert.f2.to_text()}",
        f"h={cert.h.to_text()}",
        f"g1={cert.g1.to_text()}",
        f"g2={cert.g2.to_text()}",
        f"minimal={'true' if cert.minimal else 'false'}",
        f"normalized={'true' if cert.normalized else 'false'}",
    ]
    return lines


def refutation_lines(cert: RefutationCertificate, seed: int | None = None):
    base = cert.f1.field
    lines = [
        f"kind={cert.kind}",
        f"field={field_text(base)}",
        f"modulus={modulus_text(base)}",
        f"seed={seed if seed is not None else '-'}",
        f"f1={cert.f1.to_text()}",
        f"f2={cert.f2.to_text()}",
    ]
    if cert.cycle is not None:
        amb = cert.cycle.ambient
        lines.append(f"ambient={field_text(amb)}")
        lines.append(f"ambient_modulus={modulus_text(amb)}")
        lines.append("points=" + ";".join(str(p) for p in cert.cycle.points))
    if cert.set_points:
        lines.append("set=" + ";".join(str(p.value) for p in cert.set_points))
    if cert.product is not None:
        lines.append(f"product={cert.product.numerator}/{cert.product.denominator}")
    if cert.lhs is not None:
        lines.append(f"lhs={cert.lhs}")
        lines.append(f"rhs={cert.rhs}")
    if cert.witness_degree is not None:
        lines.append(f"degree={cert.witness_degree}")
    if cert.witness_prime is not None:
        lines.append(f"prime={cert.witness_prime}")
    if cert.bound is not None:
        lines.append(f"bound={cert.bound}")
    return lines


def write_certificate(path: str, cert, seed: int | None = None):
    if isinstance(cert, CompositeCertificate):
        lines = composite_lines(cert, seed)
    elif isinstance(cert, RefutationCertificate):
        lines = refutation_lines(cert, seed)
    else:
        raise TypeError(f"not a certificate: {cert!r}")
    atomic_write(path, _lines_to_text(lines))


def parse_kv_lines(text: str):
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise AlgebraError(f"line {lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def read_certificate(path: str):
    """Parse a certificate file into its typed certificate object."""
    with open(path) as fh:
        kv = parse_kv_lines(fh.read())
    kind = kv.get("kind")
    if kind == "composite":
        fld = parse_field(kv["field"], kv.get("modulus", "-"))
        polys = {k: parse_poly(kv[k], fld) for k in ("f1", "f2", "h", "g1", "g2")}
        return CompositeCertificate(
            polys["f1"], polys["f2"], polys["h"], polys["g1"], polys["g2"],
            minimal=kv.get("minimal") == "true",
            normalized=kv.get("normalized", "true") == "true")
    if kind in ("multiplicity_cycle", "derivative_cycle", "inconsistent_set",
                "module_nonexistence"):
        base = parse_field(kv["field"], kv.get("modulus", "-"))
        f1 = parse_poly(kv["f1"], base)
        f2 = parse_poly(kv["f2"], base)
        cycle = None
        if "points" in kv:
            amb = parse_field(kv["ambient"], kv.get("ambient_modulus", "-"))
            pts = tuple(parse_element(s, amb)
                        for s in kv["points"].split(";") if s)
            cycle = FiberCycle(pts, amb)
        product = None
        if "product" in kv:
            num, den = kv["product"].split("/")
            product = Fraction(int(num), int(den))
        lhs = rhs = None
        if "lhs" in kv and cycle is not None:
            lhs = parse_element(kv["lhs"], cycle.ambient)
            rhs = parse_element(kv["rhs"], cycle.ambient)
        return RefutationCertificate(
            kind, f1, f2, cycle=cycle, product=product, lhs=lhs, rhs=rhs,
            witness_degree=int(kv["degree"]) if "degree" in kv else None,
            witness_prime=int(kv["prime"]) if "prime" in kv else None,
            bound=int(kv["bound"]) if "bound" in kv else None)
    raise AlgebraError(f"unknown certificate kind {kind!r}")


def verify_file(path: str) -> VerifyResult:
    """Re-validate any certificate file offline."""
    try:
        cert = read_certificate(path)
    except (AlgebraError, OSError, KeyError, ValueError) as e:
        return VerifyResult(False, f"unreadable: {e}")
    if isinstance(cert, CompositeCertificate):
        return verify_certificate(cert)
    return verify_refutation(cert)


# ---------------------------------------------------------------------------
# corpus records (one instance per line; values contain no whitespace)

def corpus_line(inst) -> str:
    parts = [f"family={inst.family_tag}"]
    parts += [f"{k}={v}" for k, v in sorted(inst.params.items())]
    parts.append(f"field={field_text(inst.f1.field)}")
    parts.append(f"modulus={modulus_text(inst.f1.field)}")
    parts.append(f"f1={inst.f1.to_text()}")
    parts.append(f"f2={inst.f2.to_text()}")
    parts.append(f"expected_min_degree={inst.expected_min_degree}")
    if inst.expected_h is not None:
        parts.append(f"expected_h={inst.expected_h.to_text()}")
    return " ".join(parts)


def read_corpus(path: str):
    """Parse corpus records back into (tag, field, f1, f2, degree, h|None)."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            kv = dict(tok.split("=", 1) for tok in line.split())
            fld = parse_field(kv["field"], kv.get("modulus", "-"))
            rec = {
                "family": kv["family"],
                "field": fld,
                "f1": parse_poly(kv["f1"], fld),
                "f2": parse_poly(kv["f2"], fld),
                "expected_min_degree": int(kv["expected_min_degree"]),
                "expected_h": parse_poly(kv["expected_h"], fld)
                if "expected_h" in kv else None,
                "params": {k: v for k, v in kv.items()
                           if k not in ("family", "field", "modulus", "f1",
                                        "f2", "expected_min_degree",
                                        "expected_h")},
            }
            out.append(rec)
    return out
