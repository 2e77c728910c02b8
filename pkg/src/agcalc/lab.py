"""Nilpotency testing, vanishing scans, and the t-deformation workbench.

For a polynomial map F = z - H the deformation F_t = z - t*H is inverted
over Q[t]; the z-degree-0-in-xi part of the phase series recovers the
Jacobian of the deformed inverse, and its xi-degree-1 part recovers the
deformed inverse tail itself.  Everything here is exact: series-truncated
maps are rejected, and every scan value is a genuine polynomial identity.

The scans are combinatorially explosive in m, so they run under a
term-count ceiling and abort loudly (TermCeilingExceeded, carrying the
partial report) instead of grinding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import (
    ContractViolation,
    PreconditionError,
    TermCeilingExceeded,
    VerificationError,
)
from .inversion import invert_fixed_point
from .poly import (
    MapTuple,
    PolyMatrix,
    SparsePoly,
    VarSet,
    compose,
    det,
    diff_witness,
    jacobian,
    render_poly,
    xi_pairing,
)
from .report import Check, failed_check, passed_check, skipped_check
from .weyl import lambda_apply

DEFAULT_TERM_CEILING = 10_000_000


def _require_exact(h: MapTuple) -> None:
    if not h.is_exact:
        raise PreconditionError(
            "deformation machinery needs an exact polynomial map; "
            "series-truncated input is refused")
    if h.vars.has_t:
        raise ContractViolation("the deformation variable t is introduced internally")
    if h.order() < 2:
        raise PreconditionError(f"map order must be >= 2; got {h.order()}")


@dataclass(frozen=True)
class NilpotencyCertificate:
    nilpotent: bool
    det_deformation: SparsePoly  # det(I - t*JH) over the (z, t) layout

    def __str__(self) -> str:
        verdict = "nilpotent" if self.nilpotent else "not nilpotent"
        return f"{verdict}; det(I - t*JH) = {self.det_deformation}"


def is_nilpotent(h: MapTuple) -> NilpotencyCertificate:
    """JH is nilpotent exactly when det(I - t*JH) collapses to 1."""
    _require_exact(h)
    zt = VarSet.zt(h.vars.n)
    t = SparsePoly.t_var(zt)
    tjh = jacobian(h).map(lambda p: p.lift(zt).mul(t))
    cert = det(PolyMatrix.identity(zt, h.n).sub(tjh))
    return NilpotencyCertificate(cert == SparsePoly.one(zt), cert)


# -- vanishing scans ---------------------------------------------------------


@dataclass(frozen=True)
class VanishingReport:
    """Values lambda^m(P^(m+k)) for one phase polynomial P."""

    label: str
    k: int
    mmax: int
    values: tuple[tuple[int, SparsePoly], ...]
    first_nonzero: int | None
    last_nonzero: int | None
    stabilized: bool | None  # set only when a stabilization threshold was supplied

    @property
    def all_zero(self) -> bool:
        return self.first_nonzero is None

    def value(self, m: int) -> SparsePoly:
        for mm, v in self.values:
            if mm == m:
                return v
        raise KeyError(m)

    def __str__(self) -> str:
        if self.all_zero:
            return f"{self.label}: scan k={self.k} all zero through m={self.mmax}"
        return (f"{self.label}: scan k={self.k} first nonzero at m={self.first_nonzero}, "
                f"last at m={self.last_nonzero} (through m={self.mmax})")


def _guard(p: SparsePoly, ceiling: int, partial_fn) -> SparsePoly:
    if len(p.terms) > ceiling:
        raise TermCeilingExceeded(
            f"term count {len(p.terms)} exceeded ceiling {ceiling}",
            partial=partial_fn())
    return p


def vanishing_scan_poly(p: SparsePoly, k: int, mmax: int, *,
                        term_ceiling: int | None = None,
                        label: str = "phase-poly",
                        stabilization_threshold: int | None = None) -> VanishingReport:
    """Exact scan of lambda^m(p^(m+k)) for a general phase polynomial p.

    This is the open-ended entry point: no equivalence with nilpotency is
    claimed for arbitrary p, only for the pairing built from a map (see
    vanishing_scan).  k=0 scans m = 1..mmax; k=1 also reports the base term
    m=0, which is p itself.
    """
    if not p.vars.has_xi:
        raise ContractViolation("scans run over a xi-extended layout")
    if k not in (0, 1):
        raise ContractViolation("scan offset k must be 0 or 1")
    if mmax < 1:
        raise ContractViolation("mmax must be >= 1")
    ceiling = DEFAULT_TERM_CEILING if term_ceiling is None else term_ceiling
    values: list[tuple[int, SparsePoly]] = []

    def partial_report() -> VanishingReport:
        return _finish_report(label, k, mmax, values, stabilization_threshold)

    power = SparsePoly.one(p.vars)  # p^j, grown incrementally
    j = 0
    start = 1 if k == 0 else 0
    for m in range(start, mmax + 1):
        while j < m + k:
            power = _guard(power.mul(p), ceiling, partial_report)
            j += 1
        v = power
        for _ in range(m):
            v = _guard(lambda_apply(v), ceiling, partial_report)
        values.append((m, v))
    return _finish_report(label, k, mmax, values, stabilization_threshold)


def _finish_report(label, k, mmax, values, threshold) -> VanishingReport:
    nonzero = [m for m, v in values if not v.is_zero]
    first = nonzero[0] if nonzero else None
    last = nonzero[-1] if nonzero else None
    stabilized = None
    if threshold is not None:
        stabilized = all(v.is_zero for m, v in values if m > threshold)
    return VanishingReport(label, k, mmax, tuple(values), first, last, stabilized)


def vanishing_scan(h: MapTuple, k: int, mmax: int, *,
                   term_ceiling: int | None = None,
                   label: str = "map",
                   stabilization_threshold: int | None = None) -> VanishingReport:
    """Scan for P = <xi, H> built from an exact polynomial map."""
    _require_exact(h)
    return vanishing_scan_poly(xi_pairing(h), k, mmax, term_ceiling=term_ceiling,
                               label=label,
                               stabilization_threshold=stabilization_threshold)


# -- deformation series ------------------------------------------------------


def _deformed_map(h: MapTuple) -> MapTuple:
    """t*H over the (z, t) layout; the tail of F_t = z - t*H."""
    zt = VarSet.zt(h.vars.n)
    t = SparsePoly.t_var(zt)
    return MapTuple.exact(tuple(c.lift(zt).mul(t) for c in h.components))


def gt_jacobian_series(h: MapTuple, mmax: int, *,
                       term_ceiling: int | None = None) -> SparsePoly:
    """sum_m t^m lambda^m(P^m) / (m!)^2 over (z, t), cross-checked.

    The sum is computed exactly to t-degree mmax, then compared in the
    shared window against det(jacobian(G_t)) with G_t the fixed-point
    inverse of z - t*H over Q[t].  A window mismatch raises
    VerificationError naming the offending coefficient.
    """
    _require_exact(h)
    scan = vanishing_scan_poly(xi_pairing(h), 0, mmax, term_ceiling=term_ceiling,
                               label="jacobian series")
    zt = VarSet.zt(h.vars.n)
    t = SparsePoly.t_var(zt)
    series = SparsePoly.one(zt)
    for m, v in scan.values:
        if v.is_zero:
            continue
        piece = v.drop_xi().lift(zt).mul(t.power(m)).scale(Fraction(1, factorial(m) ** 2))
        series = series + piece
    z_window = max(int(series.degree()), 0)
    oracle_bound = z_window + 1  # one extra degree: the determinant differentiates
    oracle = invert_fixed_point(_deformed_map(h), oracle_bound, t_bound=mmax)
    jg = det(jacobian(oracle.G), trunc=z_window).truncate_t(mmax)
    wit = diff_witness(series, jg.truncate_z(z_window))
    if wit is not None:
        raise VerificationError(
            f"deformed-Jacobian series disagrees with the oracle at {wit}", witness=wit)
    return series


def nt_pairing_series(h: MapTuple, mmax: int, *,
                      term_ceiling: int | None = None) -> SparsePoly:
    """<xi, N_t> = sum_m t^m lambda^m(P^(m+1)) / (m!(m+1)!) over (xi, z, t).

    Requires a nilpotent Jacobian (so the deformed map has Jacobian one);
    non-nilpotent input is a precondition error.  The xi-degree-1 result is
    cross-checked componentwise against the fixed-point inverse of
    z - t*H using N_t = (G_t - z)/t.
    """
    cert = is_nilpotent(h)
    if not cert.nilpotent:
        raise PreconditionError(
            "the deformed-inverse series needs JH nilpotent (deformed Jacobian == 1); "
            f"certificate: det(I - t*JH) = {cert.det_deformation}")
    scan = vanishing_scan_poly(xi_pairing(h), 1, mmax, term_ceiling=term_ceiling,
                               label="deformed inverse series")
    xizt = VarSet.xizt(h.vars.n)
    t = SparsePoly.t_var(xizt)
    series = SparsePoly.zero(xizt)
    for m, v in scan.values:
        if v.is_zero:
            continue
        piece = v.lift(xizt).mul(t.power(m)).scale(
            Fraction(1, factorial(m) * factorial(m + 1)))
        series = series + piece
    if not series.is_zero and series.xi_slice(1) != series:
        raise VerificationError("deformed-inverse series is not purely xi-linear")

    z_window = int(series.degree()) if not series.is_zero else 1
    oracle = invert_fixed_point(_deformed_map(h), z_window, t_bound=mmax + 1)
    zt = VarSet.zt(h.vars.n)
    n_t = []
    for i, comp in enumerate(oracle.N.components):
        # every term of N_t carries t; shift the factor out
        shifted = {e[:-1] + (e[-1] - 1,): c for e, c in comp.terms.items()}
        if any(e[-1] < 0 for e in shifted):
            raise VerificationError(f"deformed inverse component {i + 1} missing its t factor")
        n_t.append(SparsePoly(zt, shifted).truncate_t(mmax))
    oracle_pairing = xi_pairing(MapTuple.exact(tuple(n_t)))
    wit = diff_witness(series, oracle_pairing.truncate_z(z_window))
    if wit is not None:
        raise VerificationError(
            f"deformed-inverse series disagrees with the oracle at {wit}", witness=wit)
    return series


def deformed_tail_components(h: MapTuple, mmax: int, *,
                             term_ceiling: int | None = None) -> MapTuple:
    """N_t read off the xi-linear series componentwise, over (z, t)."""
    series = nt_pairing_series(h, mmax, term_ceiling=term_ceiling)
    return MapTuple.exact(tuple(series.xi_linear_component(i) for i in range(h.n)))


# -- the per-instance equivalence report --------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    label: str
    nilpotent: bool
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def __str__(self) -> str:
        lines = [f"{self.label}: {'nilpotent' if self.nilpotent else 'not nilpotent'}"]
        lines.extend(f"  {c.status.upper():4s} {c.name}" for c in self.checks)
        return "\n".join(lines)


def check_equivalences(h: MapTuple, mmax: int, *,
                       known_nt_degree: int | None = None,
                       term_ceiling: int | None = None,
                       label: str = "map") -> EquivalenceReport:
    """Consolidated instance-level report.

    (i)   det(I - t*JH) == 1 iff the k=0 scan vanishes; a non-nilpotent
          instance must yield a witness at some m <= n (the determinant's
          first nonunit coefficient sits at t-degree <= n).
    (ii)  with a known polynomial inverse of t-degree d: the k=1 scan is
          zero beyond m=d and nonzero at m=d, and the deformed-inverse
          series cross-checks against the oracle.  Skipped otherwise.
    (iii) the deformed-Jacobian series cross-checks (and equals 1 when
          nilpotent).  Skipped for non-nilpotent instances.
    """
    _require_exact(h)
    cert = is_nilpotent(h)
    checks: list[Check] = []

    scan_depth = max(mmax, h.n)
    scan0 = vanishing_scan(h, 0, scan_depth, term_ceiling=term_ceiling, label=label)
    if cert.nilpotent:
        if scan0.all_zero:
            checks.append(passed_check(
                "nilpotent iff scan vanishes",
                detail=f"det certificate 1; scan zero through m={scan_depth}"))
        else:
            m = scan0.first_nonzero
            checks.append(failed_check(
                "nilpotent iff scan vanishes",
                witness=f"m={m}: {render_poly(scan0.value(m))}",
                detail="nilpotent certificate but nonzero scan value"))
    else:
        m = scan0.first_nonzero
        if m is not None and m <= h.n:
            checks.append(passed_check(
                "nilpotent iff scan vanishes",
                detail=f"witness m={m} <= n={h.n}: {render_poly(scan0.value(m))}"))
        else:
            checks.append(failed_check(
                "nilpotent iff scan vanishes",
                witness=f"first nonzero at m={m}",
                detail=f"non-nilpotent instance needs a witness at m <= n={h.n}"))

    if cert.nilpotent and known_nt_degree is not None:
        d = known_nt_degree
        depth = max(mmax, d + 1)
        scan1 = vanishing_scan(h, 1, depth, term_ceiling=term_ceiling, label=label,
                               stabilization_threshold=d)
        tail_ok = scan1.stabilized
        # an all-zero series (H = 0) has no t-dependence: index 0
        observed = scan1.last_nonzero if scan1.last_nonzero is not None else 0
        if tail_ok and observed == d:
            checks.append(passed_check(
                "deformed inverse stabilizes at known t-degree",
                detail=f"stabilization index {d}, scanned through m={depth}"))
        else:
            checks.append(failed_check(
                "deformed inverse stabilizes at known t-degree",
                witness=f"last nonzero at m={scan1.last_nonzero}",
                detail=f"expected exactly m={d}"))
        try:
            nt_pairing_series(h, depth, term_ceiling=term_ceiling)
            checks.append(passed_check("deformed inverse series cross-check"))
        except VerificationError as err:
            checks.append(failed_check("deformed inverse series cross-check",
                                       witness=err.witness))
    else:
        reason = ("not nilpotent" if not cert.nilpotent
                  else "no known-inverse metadata")
        checks.append(skipped_check(
            "deformed inverse stabilizes at known t-degree", detail=reason))

    if cert.nilpotent:
        try:
            series = gt_jacobian_series(h, mmax, term_ceiling=term_ceiling)
            zt = VarSet.zt(h.vars.n)
            if series == SparsePoly.one(zt):
                checks.append(passed_check(
                    "deformed Jacobian series", detail="equals 1, oracle agrees"))
            else:
                checks.append(failed_check(
                    "deformed Jacobian series",
                    witness=render_poly(series),
                    detail="nilpotent instance must have unit deformed Jacobian"))
        except VerificationError as err:
            checks.append(failed_check("deformed Jacobian series", witness=err.witness))
    else:
        checks.append(skipped_check("deformed Jacobian series", detail="not nilpotent"))

    return EquivalenceReport(label, cert.nilpotent, tuple(checks))


# -- corpus generation ---------------------------------------------------------


FAMILIES = ("triangular", "cubic", "control", "series")


@dataclass(frozen=True)
class CorpusSpec:
    n: int
    family: str
    count: int = 3
    seed: int = 0
    max_degree: int = 3
    series_trunc: int = 12

    def __post_init__(self) -> None:
        if not 1 <= self.n <= 4:
            raise ContractViolation("corpus supports 1 <= n <= 4")
        if self.family not in FAMILIES:
            raise ContractViolation(
                f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.count < 1:
            raise ContractViolation("corpus count must be >= 1")
        if self.max_degree < 2:
            raise ContractViolation("corpus max_degree must be >= 2")
        if self.family == "cubic" and self.n < 2:
            raise ContractViolation(
                "no nonzero strictly-triangular homogeneous cubic exists for n=1")


@dataclass(frozen=True)
class CorpusItem:
    item_id: str
    family: str
    h: MapTuple
    nilpotent: bool | None  # None for series items: the lab refuses them
    known_n: MapTuple | None = None  # exact inverse tail, G = z + N
    nt_degree: int | None = None

    @property
    def is_polynomial(self) -> bool:
        return self.h.is_exact


def _random_monomial(rng, vs: VarSet, allowed: Sequence[int], degree: int,
                     coeff_range=(-2, 2)) -> SparsePoly:
    exps = [0] * vs.nvars
    for _ in range(degree):
        exps[vs.z_index(rng.choice(allowed))] += 1
    c = 0
    while c == 0:
        c = rng.randint(*coeff_range)
    return SparsePoly.monomial(vs, exps, c)


def _strictly_triangular(rng, n: int, max_degree: int,
                         homogeneous: int | None = None) -> MapTuple:
    vs = VarSet.z(n)
    comps = []
    for i in range(n):
        allowed = list(range(i + 1, n))
        if not allowed:
            comps.append(SparsePoly.zero(vs))
            continue
        acc = SparsePoly.zero(vs)
        for _ in range(rng.randint(1, 2)):
            d = homogeneous if homogeneous is not None else rng.randint(2, max_degree)
            acc = acc + _random_monomial(rng, vs, allowed, d)
        comps.append(acc)
    return MapTuple.exact(tuple(comps))


def _back_substitute(h: MapTuple) -> MapTuple:
    """Exact inverse tail N for strictly triangular H, by back-substitution."""
    vs = h.vars
    n = h.n
    g = [SparsePoly.z_var(vs, i) for i in range(n)]
    for i in range(n - 1, -1, -1):
        hi = h.components[i]
        if hi.is_zero:
            continue
        g_map = MapTuple.exact(tuple(g))
        bound = int(hi.degree()) * max(1, max(int(c.degree()) for c in g))
        g[i] = SparsePoly.z_var(vs, i) + compose(hi, g_map, bound).poly
    return MapTuple.exact(tuple(gi - SparsePoly.z_var(vs, i) for i, gi in enumerate(g)))


def _deformed_back_substitute(h: MapTuple) -> MapTuple:
    """Exact deformed inverse tail N_t over (z, t) for strictly triangular H."""
    zt = VarSet.zt(h.vars.n)
    n = h.n
    t = SparsePoly.t_var(zt)
    g = [SparsePoly.z_var(zt, i) for i in range(n)]
    for i in range(n - 1, -1, -1):
        hi = h.components[i].lift(zt)
        if hi.is_zero:
            continue
        g_map = MapTuple.exact(tuple(g))
        bound = int(hi.degree()) * max(1, max(int(c.degree()) for c in g))
        g[i] = SparsePoly.z_var(zt, i) + t.mul(compose(hi, g_map, bound).poly)
    tails = []
    for i, gi in enumerate(g):
        diff = gi - SparsePoly.z_var(zt, i)
        shifted = {e[:-1] + (e[-1] - 1,): c for e, c in diff.terms.items()}
        tails.append(SparsePoly(zt, shifted))
    return MapTuple.exact(tuple(tails))


def _unimodular(rng, n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Integer matrix with integer inverse, as a product of random shears."""
    t_mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    t_inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(rng.randint(1, 3)):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        # T <- E_ij(c) T ; T^-1 <- T^-1 E_ij(-c)
        for col in range(n):
            t_mat[i][col] += c * t_mat[j][col]
        for row in range(n):
            t_inv[row][j] += -c * t_inv[row][i]
    return t_mat, t_inv


def _linear_map(vs: VarSet, m: list[list[int]]) -> MapTuple:
    comps = []
    for i in range(vs.n):
        acc = SparsePoly.zero(vs)
        for j in range(vs.n):
            if m[i][j]:
                acc = acc + SparsePoly.z_var(vs, j).scale(m[i][j])
        comps.append(acc)
    return MapTuple.exact(tuple(comps))


def _conjugate_map(h: MapTuple, t_mat: list[list[int]],
                   t_inv: list[list[int]]) -> MapTuple:
    """T^-1 H(T z): same nilpotency and inverse structure in new coordinates."""
    vs = h.vars
    n = h.n
    tz = _linear_map(vs, t_mat)
    substituted = []
    for c in h.components:
        if c.is_zero:
            substituted.append(c)
        else:
            substituted.append(compose(c, tz, int(c.degree())).poly)
    comps = []
    for i in range(n):
        acc = SparsePoly.zero(vs)
        for j in range(n):
            if t_inv[i][j]:
                acc = acc + substituted[j].scale(t_inv[i][j])
        comps.append(acc)
    return MapTuple.exact(tuple(comps))


def _random_series_map(rng, n: int, max_degree: int, trunc: int) -> MapTuple:
    vs = VarSet.z(n)
    comps = []
    for _ in range(n):
        acc = SparsePoly.zero(vs)
        for _ in range(rng.randint(1, 3)):
            d = rng.randint(2, max_degree + 1)
            acc = acc + _random_monomial(rng, vs, list(range(n)), d)
        comps.append(acc)
    return MapTuple.truncated(tuple(comps), trunc)


def _control_map(rng, n: int, max_degree: int) -> MapTuple:
    vs = VarSet.z(n)
    for _ in range(32):
        comps = []
        for i in range(n):
            acc = SparsePoly.zero(vs)
            for _ in range(rng.randint(0, 2)):
                d = rng.randint(2, max_degree)
                acc = acc + _random_monomial(rng, vs, list(range(n)), d)
            comps.append(acc)
        # a diagonal square term usually forces a nonzero Jacobian trace;
        # random cancellation is possible, so reject and redraw
        comps[0] = comps[0] + SparsePoly.monomial(vs, tuple(
            2 if j == vs.z_index(0) else 0 for j in range(vs.nvars)))
        h = MapTuple.exact(tuple(comps))
        if not is_nilpotent(h).nilpotent:
            return h
    raise ContractViolation("could not draw a non-nilpotent control instance")


def gen_corpus(spec: CorpusSpec) -> list[CorpusItem]:
    """Deterministic corpus for one (n, family) cell."""
    import random as _random

    # integer mix, stable across processes (string hashing is not)
    mixed = ((spec.seed * 1_000_003 + spec.n) * 101
             + FAMILIES.index(spec.family)) * 1009 + spec.count
    rng = _random.Random(mixed)
    items: list[CorpusItem] = []
    n = spec.n
    vs = VarSet.z(n)

    for idx in range(spec.count):
        item_id = f"{spec.family}-n{n}-{idx}"
        if spec.family == "triangular":
            if n == 1:
                h = MapTuple.exact((SparsePoly.zero(vs),))
            elif n == 2 and idx == 0:
                # canonical smallest member
                h = MapTuple.exact((SparsePoly.monomial(vs, (0, 2)), SparsePoly.zero(vs)))
            else:
                h = _strictly_triangular(rng, n, spec.max_degree)
            known_n = _back_substitute(h)
            nt = _deformed_back_substitute(h)
            nt_degree = max(c.max_t_degree() for c in nt.components)
            items.append(CorpusItem(item_id, spec.family, h, True, known_n, nt_degree))
        elif spec.family == "cubic":
            base = _strictly_triangular(rng, n, 3, homogeneous=3)
            t_mat, t_inv = _unimodular(rng, n)
            h = _conjugate_map(base, t_mat, t_inv)
            cert = is_nilpotent(h)
            if not cert.nilpotent:
                raise ContractViolation(
                    f"conjugated cubic instance lost nilpotency: {cert.det_deformation}")
            base_n = _back_substitute(base)
            known_n = _conjugate_map(base_n, t_mat, t_inv)
            base_nt = _deformed_back_substitute(base)
            nt_degree = max(int(c.max_t_degree()) for c in base_nt.components)
            items.append(CorpusItem(item_id, spec.family, h, True, known_n, nt_degree))
        elif spec.family == "control":
            if n == 1:
                h = MapTuple.exact((SparsePoly.monomial(vs, (2,)),))
            elif n == 2 and idx == 0:
                h = MapTuple.exact((SparsePoly.monomial(vs, (2, 0)), SparsePoly.zero(vs)))
            else:
                h = _control_map(rng, n, spec.max_degree)
            if is_nilpotent(h).nilpotent:
                raise ContractViolation("control instance is unexpectedly nilpotent")
            items.append(CorpusItem(item_id, spec.family, h, False))
        else:  # series
            h = _random_series_map(rng, n, spec.max_degree, spec.series_trunc)
            items.append(CorpusItem(item_id, spec.family, h, None))
    return items


def standard_corpus(seed: int = 0, *, series_trunc: int = 12) -> list[CorpusItem]:
    """The mixed corpus used by the acceptance suite: 21 maps over n in {1,2,3}."""
    cells = [
        (1, "control", 1), (1, "series", 2),
        (2, "triangular", 3), (2, "cubic", 2), (2, "control", 2), (2, "series", 2),
        (3, "triangular", 3), (3, "cubic", 2), (3, "control", 2), (3, "series", 2),
    ]
    items: list[CorpusItem] = []
    for n, family, count in cells:
        items.extend(gen_corpus(CorpusSpec(
            n=n, family=family, count=count, seed=seed, series_trunc=series_trunc)))
    return items
