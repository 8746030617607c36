"""Fiber closure in the algebraic closure, labelings, and the decision report.

A compatible set is a nonempty finite subset of the algebraic closure that
is simultaneously a union of f1-fibers and of f2-fibers.  The closure of a
seed is the least such set containing it; the solver then looks for a
labeling ell with ell(a)/m_i(a) a positive integer that is constant on
every f_i-fiber.  A consistent labeling yields an explicit composite
prod (x-a)^ell(a); a failed labeling yields a verifiable inconsistency
cycle, which rules the composite out entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (
    ExtensionCapExceeded,
    IncompatibleFields,
    NotCompatible,
    NotConsistent,
    UnsupportedAlgebraicExtension,
)
from .fields import Field, FieldElement, embed, make_extension
from .poly import (
    Polynomial,
    RootMultiplicity,
    compose,
    multiplicity,
    roots_in,
    factor_degrees,
)
from .search import (
    CompositeCertificate,
    extract_cofactor,
    normalize_monic_zero,
    verify_certificate,
)
from .fields import subfield_preimage

DEFAULT_MAX_SIZE = 4096
DEFAULT_MAX_EXT = 60


@dataclass(frozen=True)
class ClosurePoint:
    value: FieldElement
    m1: int
    m2: int
    label: int | None = None


@dataclass(frozen=True)
class CompatibleSet:
    points: tuple[ClosurePoint, ...]
    ambient: Field
    seed: FieldElement
    closed: bool = True

    def elements(self):
        return tuple(p.value for p in self.points)


@dataclass(frozen=True)
class ClosureOverflow:
    points: tuple[FieldElement, ...]
    sizes: tuple[int, ...]
    cap: str
    ambient: Field
    arithmetic_orbit: tuple | None = None


@dataclass(frozen=True)
class InconsistencyCertificate:
    """A fiber-alternating cycle whose multiplicity ratio product is not 1."""

    cycle: tuple[ClosurePoint, ...]
    product: Fraction

    @property
    def product_numerator(self):
        return self.product.numerator

    @property
    def product_denominator(self):
        return self.product.denominator


@dataclass(frozen=True)
class LabelingResult:
    consistent: bool
    labels: dict | None = None          # FieldElement -> positive int
    certificate: InconsistencyCertificate | None = None
    components: tuple = ()


def fiber(f: Polynomial, a: FieldElement, ambient: Field | None = None,
          max_ext: int = DEFAULT_MAX_EXT, field_seed: int = 0):
    """All roots of f(x) - f(a) in the algebraic closure, with multiplicity.

    Over finite fields the ambient grows (degree times the lcm of the
    factor degrees) until the fiber splits; the enlarged ambient is
    returned alongside the roots.  Over Q only rational fibers are
    supported; a nonlinear irreducible factor raises.
    """
    ambient = ambient or a.field
    if a.field.key() != ambient.key():
        a = embed(a, ambient)
    if ambient.kind == "rationals":
        g = f - Polynomial.const(f.field, f(a))
        roots = roots_in(g, ambient)
        if sum(r.multiplicity for r in roots) != f.degree:
            raise UnsupportedAlgebraicExtension(
                f"fiber of {f} at {a} leaves the rationals")
        return tuple(roots), ambient
    fa = f.map_to(ambient)
    g = fa - Polynomial.const(ambient, fa(a))
    need = 1
    for d, _ in factor_degrees(g):
        need = lcm(need, d)
    if need > 1:
        new_deg = ambient.degree * need
        if new_deg > max_ext:
            raise ExtensionCapExceeded(new_deg, max_ext)
        bigger = make_extension(f.field.p, new_deg, field_seed)
        a2 = embed(a, bigger)
        fb = f.map_to(bigger)
        g = fb - Polynomial.const(bigger, fb(a2))
        ambient = bigger
    roots = roots_in(g, ambient)
    assert sum(r.multiplicity for r in roots) == f.degree
    return tuple(roots), ambient


def compatible_closure(f1: Polynomial, f2: Polynomial, seed: FieldElement,
                       max_size: int = DEFAULT_MAX_SIZE,
                       max_ext: int = DEFAULT_MAX_EXT,
                       field_seed: int = 0):
    """Least compatible set containing the seed, or an overflow trace.

    Points are processed in insertion order, f1-fiber then f2-fiber; each
    fiber is complete in the algebraic closure when computed, so a point is
    expanded at most once per input polynomial even as the ambient grows.
    """
    if f1.field.key() != f2.field.key():
        raise IncompatibleFields("inputs over different fields")
    ambient = seed.field
    if (ambient.kind == "rationals") != (f1.field.kind == "rationals"):
        raise IncompatibleFields("seed in an unrelated field")
    if ambient.kind != "rationals" and ambient.p != f1.field.p:
        raise IncompatibleFields("seed in an unrelated field")
    pts = [seed]
    index = {seed.val: 0}
    sizes = [1]

    def lift_all(new_ambient):
        nonlocal pts, index, ambient
        pts = [embed(e, new_ambient) for e in pts]
        index = {e.val: i for i, e in enumerate(pts)}
        ambient = new_ambient

    i = 0
    while i < len(pts):
        for f in (f1, f2):
            roots, new_ambient = fiber(f, pts[i], ambient,
                                       max_ext=max_ext, field_seed=field_seed)
            if new_ambient.key() != ambient.key():
                lift_all(new_ambient)
            for rm in roots:
                if rm.root.val not in index:
                    index[rm.root.val] = len(pts)
                    pts.append(rm.root)
                    if len(pts) > max_size:
                        orbit = _arithmetic_orbit(pts) \
                            if ambient.kind == "rationals" else None
                        return ClosureOverflow(tuple(pts), tuple(sizes),
                                               "max_size", ambient, orbit)
            sizes.append(len(pts))
        i += 1
    points = tuple(
        ClosurePoint(e, multiplicity(f1, e), multiplicity(f2, e))
        for e in pts)
    return CompatibleSet(points, ambient, pts[0], closed=True)


def _arithmetic_orbit(pts):
    """A 3-term arithmetic progression in the orbit, if one exists.

    Over Q an unbounded closure is typically driven by a translation
    x -> x + t obtained by composing two fiber involutions; three points in
    arithmetic progression are reported as evidence (never as a verdict).
    """
    vals = sorted(e.val for e in pts)
    present = set(vals)
    for i, a in enumerate(vals):
        for b in vals[i + 1:]:
            if 2 * b - a in present and b != a:
                return (a, b, 2 * b - a)
    return None


def solve_labeling(points, f1: Polynomial, f2: Polynomial) -> LabelingResult:
    """Find the minimal consistent labeling of a point set, or refute it.

    Labels propagate along fiber edges as exact rationals
    (ell(b) = ell(a) * m_i(b)/m_i(a)); a cycle with accumulated ratio != 1
    is returned as an InconsistencyCertificate in alternating form.
    Otherwise each connected component is scaled by the least positive
    integer making every ell(a)/m_i(a) a positive integer.
    """
    pts = _as_closure_points(points, f1, f2)
    n = len(pts)
    if n == 0:
        raise NotConsistent("empty point set")
    mult = {1: [p.m1 for p in pts], 2: [p.m2 for p in pts]}
    # star adjacency per fiber value
    adj = [[] for _ in range(n)]
    for famno, f in ((1, f1), (2, f2)):
        groups = {}
        fa = f.map_to(pts[0].value.field)
        for idx, p in enumerate(pts):
            groups.setdefault(fa(p.value).val, []).append(idx)
        for members in groups.values():
            head = members[0]
            for other in members[1:]:
                adj[head].append((other, famno))
                adj[other].append((head, famno))
    labels = [None] * n
    parent = [None] * n
    components = []
    for root in range(n):
        if labels[root] is not None:
            continue
        comp = [root]
        labels[root] = Fraction(1)
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v, famno in adj[u]:
                expected = labels[u] * Fraction(mult[famno][v],
                                                mult[famno][u])
                if labels[v] is None:
                    labels[v] = expected
                    parent[v] = (u, famno)
                    comp.append(v)
                    queue.append(v)
                elif labels[v] != expected:
                    cert = _inconsistency_from_conflict(
                        pts, parent, u, v, famno, mult)
                    return LabelingResult(False, certificate=cert)
        components.append(tuple(comp))
    # scale each component to the minimal integral labeling
    out = {}
    for comp in components:
        t = 1
        for idx in comp:
            for famno in (1, 2):
                q = labels[idx] / mult[famno][idx]
                t = lcm(t, q.denominator)
        for idx in comp:
            val = labels[idx] * t
            assert val.denominator == 1
            out[pts[idx].value] = int(val)
    return LabelingResult(True, labels=out, components=tuple(components))


def _as_closure_points(points, f1, f2):
    if isinstance(points, CompatibleSet):
        return list(points.points)
    pts = []
    for p in points:
        if isinstance(p, ClosurePoint):
            pts.append(p)
        elif isinstance(p, FieldElement):
            pts.append(ClosurePoint(p, multiplicity(f1, p),
                                    multiplicity(f2, p)))
        else:
            raise TypeError(f"not a point: {p!r}")
    return pts


def _path_to_root(parent, v):
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]][0])
    return path


def _inconsistency_from_conflict(pts, parent, u, v, famno, mult):
    pu = _path_to_root(parent, u)
    pv = _path_to_root(parent, v)
    # strip the common tail above the meeting point
    su, sv = set(pu), set(pv)
    meet = next(x for x in pu if x in sv)
    pu = pu[:pu.index(meet) + 1]
    pv = pv[:pv.index(meet) + 1]
    # cycle: v -> ... -> meet -> ... -> u -> v
    nodes = pv[:-1] + pu[::-1]
    edge_types = []
    for i in range(len(pv) - 1):
        edge_types.append(parent[pv[i]][1])
    for i in range(len(pu) - 1, 0, -1):
        edge_types.append(parent[pu[i - 1]][1])
    nodes.append(v)
    edge_types.append(famno)  # closing conflict edge u -> v
    # nodes has length len(edge_types) + 1 with nodes[0] == nodes[-1] == v
    cyc_nodes = nodes[:-1]
    cyc_types = edge_types
    cyc_nodes, cyc_types = _merge_same_type(cyc_nodes, cyc_types)
    if cyc_types[0] == 2:  # rotate so the first edge is an f1 edge
        cyc_nodes = cyc_nodes[1:] + cyc_nodes[:1]
        cyc_types = cyc_types[1:] + cyc_types[:1]
    cyc_points = tuple(pts[i] for i in cyc_nodes)
    cyc_points = _canonical_cycle(cyc_points)
    prod = _ratio_product([(p.m1, p.m2) for p in cyc_points])
    assert prod != 1
    return InconsistencyCertificate(cyc_points, prod)


def _merge_same_type(nodes, types):
    """Collapse to alternating form.

    Edge i joins nodes[i] and nodes[(i+1) % k].  Merging two consecutive
    same-type edges removes the shared node (the fiber relation is
    transitive), and a self-loop edge removes its duplicated node; both
    moves preserve the ratio product.
    """
    changed = True
    while changed:
        changed = False
        k = len(nodes)
        if k <= 2:
            break
        for i in range(k):
            j = (i + 1) % k
            if types[i] == types[j]:
                nodes = [nodes[x] for x in range(k) if x != j]
                types = [types[x] for x in range(k) if x != j]
                changed = True
                break
        if changed:
            continue
        for i in range(k):
            j = (i + 1) % k
            if nodes[i] == nodes[j]:
                nodes = [nodes[x] for x in range(k) if x != j]
                types = [types[x] for x in range(k) if x != i]
                changed = True
                break
    assert len(nodes) >= 2 and len(nodes) % 2 == 0
    return nodes, types


def _ratio_product(ms):
    """prod over the alternating cycle of m1/m2 (odd) and m2/m1 (even)."""
    prod = Fraction(1)
    for i, (m1, m2) in enumerate(ms):
        if i % 2 == 0:
            prod *= Fraction(m1, m2)
        else:
            prod *= Fraction(m2, m1)
    return prod


def _canonical_cycle(points):
    """Lexicographically least valid reindexing of an alternating cycle.

    Validity is preserved exactly by even rotations and by the reflection
    (c2, c1, c_{2d}, ..., c3) together with its even rotations.
    """
    n = len(points)
    points = tuple(points)
    reflected = (points[1], points[0]) + points[:1:-1]
    best = None
    for base in (points, reflected):
        for s in range(0, n, 2):
            cand = base[s:] + base[:s]
            key = tuple(p.value.sort_key() if isinstance(p, ClosurePoint)
                        else p.sort_key() for p in cand)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


def composite_from_set(points, labels, f1: Polynomial, f2: Polynomial,
                       reference_h: Polynomial | None = None) -> CompositeCertificate:
    """Build h = prod (x - a)^ell(a) and extract both cofactors.

    Compatibility (the set is a union of full fibers of both inputs) and
    consistency of the labeling are re-validated, never trusted.  When all
    coefficients of the normalized h lie in the embedded base field the
    certificate descends to the base field.
    """
    pts = _as_closure_points(points, f1, f2)
    if not pts:
        raise NotCompatible("empty set")
    ambient = pts[0].value.field
    elems = {p.value.val for p in pts}
    for p in pts:
        ell = labels.get(p.value)
        if ell is None or ell <= 0 or ell % p.m1 or ell % p.m2:
            raise NotConsistent(
                f"label {ell!r} at {p.value} is not a positive multiple "
                f"of both multiplicities ({p.m1}, {p.m2})")
    by_val = {}
    for famno, f in ((1, f1), (2, f2)):
        fa = f.map_to(ambient)
        groups = {}
        for p in pts:
            groups.setdefault(fa(p.value).val, []).append(p)
        for val, members in groups.items():
            g = fa - Polynomial.const(ambient, FieldElement(ambient, val))
            froots = roots_in(g, ambient)
            if sum(r.multiplicity for r in froots) != f.degree:
                raise NotCompatible(
                    f"fiber of input {famno} at value "
                    f"{FieldElement(ambient, val)} leaves the ambient field")
            for rm in froots:
                if rm.root.val not in elems:
                    raise NotCompatible(
                        f"fiber of input {famno} at value "
                        f"{FieldElement(ambient, val)} contains "
                        f"{rm.root} missing from the set")
            ratios = {labels[p.value] // (p.m1 if famno == 1 else p.m2)
                      for p in members}
            if len(ratios) != 1:
                raise NotConsistent(
                    f"labels are not proportional on a fiber of input {famno}")
        by_val[famno] = groups
    h = Polynomial.one(ambient)
    x = Polynomial.x(ambient)
    for p in pts:
        h = h * (x - Polynomial.const(ambient, p.value)) ** labels[p.value]
    gs = {}
    for famno, f in ((1, f1), (2, f2)):
        fa = f.map_to(ambient)
        g = Polynomial.one(ambient)
        for val, members in by_val[famno].items():
            rep = members[0]
            e = labels[rep.value] // (rep.m1 if famno == 1 else rep.m2)
            g = g * (x - Polynomial.const(
                ambient, FieldElement(ambient, val))) ** e
        assert compose(g, fa) == h, "fiber regrouping failed"
        gs[famno] = g
    shift = h.constant
    hn = h - Polynomial.const(ambient, shift)
    g1n = gs[1] - Polynomial.const(ambient, shift)
    g2n = gs[2] - Polynomial.const(ambient, shift)
    # descend to the base field when possible
    base = f1.field
    descended = []
    ok = base.key() != ambient.key()
    if ok:
        for c in hn.coeffs:
            pre = subfield_preimage(c, base)
            if pre is None:
                ok = False
                break
            descended.append(pre)
    if ok:
        h_base = Polynomial(base, descended)
        g1b = extract_cofactor(h_base, f1)
        g2b = extract_cofactor(h_base, f2)
        assert g1b is not None and g2b is not None
        cert = CompositeCertificate(f1, f2, h_base, g1b, g2b,
                                    minimal=False, normalized=True)
    else:
        cert = CompositeCertificate(f1.map_to(ambient), f2.map_to(ambient),
                                    hn, g1n, g2n,
                                    minimal=False, normalized=True)
    if reference_h is not None and reference_h.degree == hn.degree:
        target = cert.h if cert.h.field.key() == reference_h.field.key() \
            else hn
        ref = reference_h if target.field.key() == reference_h.field.key() \
            else reference_h.map_to(target.field)
        if target != ref:
            raise NotConsistent(
                "constructed composite differs from the minimal reference")
    return cert


@dataclass(frozen=True)
class SeedReport:
    seed: FieldElement
    status: str  # closed | size_cap | ext_cap
    closure: CompatibleSet | None = None
    overflow: ClosureOverflow | None = None
    labeling: LabelingResult | None = None
    certificate: CompositeCertificate | None = None
    cap_note: str = ""


@dataclass(frozen=True)
class AnalysisReport:
    verdict: str  # exists | not_exists | inconclusive
    certificate: CompositeCertificate | None
    inconsistency: InconsistencyCertificate | None
    seed_reports: tuple[SeedReport, ...]


def analyze(f1: Polynomial, f2: Polynomial, seeds,
            max_size: int = DEFAULT_MAX_SIZE, max_ext: int = DEFAULT_MAX_EXT,
            field_seed: int = 0) -> AnalysisReport:
    """Closure -> labeling -> explicit composite, for each seed in order.

    A consistent closed set proves existence (with a verified certificate);
    an inconsistent one refutes it.  Cap overruns are reported per seed and
    the overall verdict stays inconclusive unless some seed decides.
    """
    reports = []
    for seed in seeds:
        try:
            closed = compatible_closure(f1, f2, seed, max_size=max_size,
                                        max_ext=max_ext, field_seed=field_seed)
        except ExtensionCapExceeded as e:
            reports.append(SeedReport(seed, "ext_cap",
                                      cap_note=f"max_ext: {e}"))
            continue
        if isinstance(closed, ClosureOverflow):
            reports.append(SeedReport(seed, "size_cap", overflow=closed,
                                      cap_note="max_size"))
            continue
        labeling = solve_labeling(closed, f1, f2)
        if not labeling.consistent:
            reports.append(SeedReport(seed, "closed", closure=closed,
                                      labeling=labeling))
            return AnalysisReport("not_exists", None,
                                  labeling.certificate, tuple(reports))
        cert = composite_from_set(closed, labeling.labels, f1, f2)
        assert verify_certificate(cert)
        reports.append(SeedReport(seed, "closed", closure=closed,
                                  labeling=labeling, certificate=cert))
        return AnalysisReport("exists", cert, None, tuple(reports))
    return AnalysisReport("inconclusive", None, None, tuple(reports))
