"""Formal inversion of maps F = z - H with o(H) >= 2, by three independent routes.

fixed_point      iterate N <- H(z + N) until the truncation freezes; this is
                 the oracle every other route is checked against.
abhyankar_gurjar evaluate the derivative sum over multi-indices alpha of
                 d^alpha(u * H^alpha * JF) / alpha!, truncated by the order
                 bound o(H^alpha) >= 2|alpha|.
lambda_series    evaluate sum_m lambda^m(q * P^m * JF) / (m!)^2 with
                 P = <xi, H>, reading the inverse off the xi-degree-0 part.

Every summation cutoff is justified by an order bound; with debug=True the
first discarded shell is actually computed (truncated to the output window)
and must vanish, turning the convergence argument into a runtime-checked
fact.  The number of such verified discards is reported on the result.

Series-truncated H is accepted when it is known deep enough: composition
routes need trunc(H) >= D, while the derivative-based routes need
trunc(H) >= D + 1 because the Jacobian factor at z-degree D already
depends on H at degree D + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .errors import (
    AgcalcError,
    ContractViolation,
    ConvergenceViolation,
    PreconditionError,
    TruncationError,
)
from .poly import (
    INF,
    MapTuple,
    SeriesTrunc,
    SparsePoly,
    VarSet,
    compose,
    det,
    diff_witness,
    jacobian,
    series_parts,
    xi_pairing,
)
from .weyl import lambda_pow, phi_apply

FIXED_POINT = "fixed_point"
ABHYANKAR_GURJAR = "abhyankar_gurjar"
LAMBDA_SERIES = "lambda_series"
METHODS = (FIXED_POINT, ABHYANKAR_GURJAR, LAMBDA_SERIES)


@dataclass(frozen=True)
class InversionResult:
    """Inverse G = z + N of F = z - H, correct mod z-degree > D."""

    G: MapTuple
    N: MapTuple
    method: str
    D: int
    checked_discards: int = 0


@dataclass(frozen=True)
class IdentityReport:
    """Two independently computed sides of one identity, compared exactly."""

    name: str
    passed: bool
    lhs: SparsePoly
    rhs: SparsePoly
    witness: str | None

    def __str__(self) -> str:
        return f"{self.name}: {'pass' if self.passed else f'FAIL at {self.witness}'}"


def _identity_report(name: str, lhs: SparsePoly, rhs: SparsePoly) -> IdentityReport:
    wit = diff_witness(lhs, rhs)
    return IdentityReport(name, wit is None, lhs, rhs, wit)


def _require_h(h: MapTuple, bound: int, *, derivatives: bool) -> None:
    if bound < 1:
        raise ContractViolation("inversion degree must be >= 1")
    if h.order() < 2:
        raise PreconditionError(
            f"map order must be >= 2 componentwise; got order {h.order()}")
    need = bound + 1 if derivatives else bound
    if h.effective_trunc < need:
        raise TruncationError(
            f"map truncated at z-degree {h.trunc}; this route to output degree "
            f"{bound} needs >= {need}")


def f_from_h(h: MapTuple) -> MapTuple:
    """The forward map F = z - H over the same layout and truncation."""
    vs = h.vars
    return MapTuple(tuple(SparsePoly.z_var(vs, i) - h.components[i]
                          for i in range(h.n)), h.trunc)


def jacobian_factor(h: MapTuple, bound: int) -> SparsePoly:
    """JF = det(d(z - H)_i / d z_j), truncated at z-degree bound."""
    return det(jacobian(f_from_h(h)), trunc=bound)


def _h_input(h: MapTuple, i: int) -> SparsePoly | SeriesTrunc:
    c = h.components[i]
    return c if h.is_exact else SeriesTrunc(c, h.trunc)


# -- route 1: fixed point ---------------------------------------------------


def invert_fixed_point(h: MapTuple, bound: int, *,
                       t_bound: int | None = None) -> InversionResult:
    """Oracle inverse: iterate N <- H(z + N) mod z-degree > bound.

    Each pass freezes at least one more z-degree because o(H) >= 2, so the
    iteration reaches its fixed point within bound passes.  t_bound, when
    given, additionally truncates t-degrees between passes (a congruence
    mod t^(t_bound+1); used by the deformation machinery).
    """
    _require_h(h, bound, derivatives=False)
    vs = h.vars
    zs = tuple(SparsePoly.z_var(vs, i) for i in range(vs.n))
    n_comps = tuple(SparsePoly.zero(vs) for _ in range(vs.n))
    for _ in range(bound + 2):
        g = MapTuple(tuple(z + c for z, c in zip(zs, n_comps)), bound)
        new_comps = tuple(compose(_h_input(h, i), g, bound).poly
                          for i in range(h.n))
        if t_bound is not None:
            new_comps = tuple(c.truncate_t(t_bound) for c in new_comps)
        if new_comps == n_comps:
            break
        n_comps = new_comps
    else:
        raise AgcalcError("fixed-point iteration failed to freeze (order contract broken?)")
    n_map = MapTuple(n_comps, bound)
    g_map = MapTuple(tuple(z + c for z, c in zip(zs, n_comps)), bound)
    return InversionResult(g_map, n_map, FIXED_POINT, bound)


# -- route 2: the derivative sum --------------------------------------------


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multi_factorial(alpha: Sequence[int]) -> int:
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


class _PowerCache:
    """Truncated powers of the components of a map, grown on demand."""

    def __init__(self, comps: Sequence[SparsePoly], trunc: int):
        self.comps = comps
        self.trunc = trunc
        self.cache: list[dict[int, SparsePoly]] = [
            {0: SparsePoly.one(comps[0].vars)} for _ in comps]

    def get(self, i: int, k: int) -> SparsePoly:
        cache = self.cache[i]
        if k not in cache:
            top = max(cache)
            cur = cache[top]
            for j in range(top + 1, k + 1):
                cur = cur.mul(self.comps[i], trunc=self.trunc)
                cache[j] = cur
        return cache[k]

    def monomial_power(self, alpha: Sequence[int], trunc: int) -> SparsePoly:
        acc = None
        for i, k in enumerate(alpha):
            if k == 0:
                continue
            p = self.get(i, k)
            acc = p if acc is None else acc.mul(p, trunc=trunc)
            if acc.is_zero:
                break
        if acc is None:
            acc = SparsePoly.one(self.comps[0].vars)
        return acc.truncate_z(trunc)


def _derivative_sum(us: Sequence[tuple[SparsePoly, int | float]], h: MapTuple,
                    bound: int, *, include_jf: bool,
                    debug: bool) -> tuple[list[SparsePoly], int]:
    """sum over |alpha| <= bound of d^alpha(u * H^alpha * JF?) / alpha!, per u.

    Term |alpha| = a is evaluated with internal pad bound + a (the a degrees
    the derivative removes).  Returns the sums truncated at bound, plus the
    count of debug-verified discarded terms.
    """
    vs = h.vars
    n = h.n
    one = SparsePoly.one(vs)
    jf = jacobian_factor(h, bound) if include_jf else one
    max_shell = bound
    powers = _PowerCache(h.components, bound + max_shell + (1 if debug else 0))
    sums = [SparsePoly.zero(vs) for _ in us]
    checked = 0
    top = max_shell + (1 if debug else 0)
    for a in range(top + 1):
        discard_shell = a > max_shell
        pad = bound + a
        for alpha in _compositions(a, n):
            if discard_shell:
                # a vanishing truncated product verifies the discard too
                checked += len(us)
            h_alpha = powers.monomial_power(alpha, pad)
            if h_alpha.is_zero:
                continue
            base = h_alpha if not include_jf else h_alpha.mul(jf, trunc=pad)
            if base.is_zero:
                continue
            inv_fact = Fraction(1, _multi_factorial(alpha))
            for idx, (u_poly, _) in enumerate(us):
                prod = base.mul(u_poly, trunc=pad)
                term = prod.diff_z_multi(alpha).truncate_z(bound)
                if discard_shell:
                    if not term.is_zero:
                        raise ConvergenceViolation(
                            f"discarded derivative-sum term at |alpha|={a} has "
                            f"order <= {bound}: {term.scale(inv_fact)}")
                elif not term.is_zero:
                    sums[idx] = sums[idx] + term.scale(inv_fact)
    return sums, checked


def invert_ag(h: MapTuple, bound: int, *, debug: bool = False) -> InversionResult:
    """Inverse via the derivative sum applied to each coordinate function."""
    _require_h(h, bound, derivatives=True)
    vs = h.vars
    us = [(SparsePoly.z_var(vs, i), INF) for i in range(h.n)]
    comps, checked = _derivative_sum(us, h, bound, include_jf=True, debug=debug)
    g_map = MapTuple(tuple(comps), bound)
    n_map = MapTuple(tuple(c - SparsePoly.z_var(vs, i)
                           for i, c in enumerate(comps)), bound)
    if n_map.order() < 2:
        raise AgcalcError("derivative-sum inverse violated o(N) >= 2")
    return InversionResult(g_map, n_map, ABHYANKAR_GURJAR, bound, checked)


def ag_apply(u: SparsePoly | SeriesTrunc, h: MapTuple, bound: int, *,
             debug: bool = False) -> SeriesTrunc:
    """u composed with the inverse map, via the derivative sum (no oracle)."""
    _require_h(h, bound, derivatives=True)
    u_poly, u_trunc = series_parts(u)
    if u_trunc < bound:
        raise TruncationError(f"u known to z-degree {u_trunc}; need >= {bound}")
    sums, _ = _derivative_sum([(u_poly, u_trunc)], h, bound,
                              include_jf=True, debug=debug)
    return SeriesTrunc(sums[0], bound)


def ag_jacobian_identity(u: SparsePoly | SeriesTrunc, h: MapTuple,
                         bound: int) -> IdentityReport:
    """Check sum_alpha d^alpha(H^alpha u)/alpha! == JG * u(G), both sides built
    independently (left: derivative sum without JF; right: oracle inverse)."""
    _require_h(h, bound, derivatives=True)
    u_poly, u_trunc = series_parts(u)
    if u_trunc < bound:
        raise TruncationError(f"u known to z-degree {u_trunc}; need >= {bound}")
    sums, _ = _derivative_sum([(u_poly, u_trunc)], h, bound,
                              include_jf=False, debug=False)
    lhs = sums[0]
    oracle = invert_fixed_point(h, bound + 1)
    jg = det(jacobian(oracle.G), trunc=bound)
    u_of_g = compose(u, oracle.G, bound)
    rhs = jg.mul(u_of_g.poly, trunc=bound)
    return _identity_report("derivative sum == JG * u(G)", lhs, rhs)


# -- route 3: the phase-space series ----------------------------------------


def _phase_data(h: MapTuple, bound: int) -> tuple[VarSet, SparsePoly, SparsePoly]:
    """Target xi-layout, the pairing P = <xi, H>, and lifted JF (trunc bound)."""
    vs = h.vars
    target = VarSet.xizt(vs.n) if vs.has_t else VarSet.xiz(vs.n)
    pairing = xi_pairing(h)
    jf = jacobian_factor(h, bound).lift(target)
    return target, pairing, jf


def _lambda_sum(us: Sequence[SparsePoly], h: MapTuple, bound: int, *,
                extra_orders: Sequence[int], debug: bool
                ) -> tuple[list[SparsePoly], int]:
    """sum_m lambda^m(u * P^m * JF) / (m!)^2 for each u (lifted, xi-free).

    extra_orders[i] is a lower bound on o(u_i); term m then has z-order
    >= m + extra_orders[i], which sets the per-u summation cutoff.
    """
    target, pairing, jf = _phase_data(h, bound)
    jf_is_one = jf == SparsePoly.one(target)
    us_l = [u.lift(target) for u in us]
    cutoffs = [bound - o for o in extra_orders]
    max_m = max(cutoffs)
    sums = [SparsePoly.zero(target) for _ in us]
    checked = 0
    p_power = SparsePoly.one(target)
    top = max_m + (1 if debug else 0)
    for m in range(top + 1):
        pad = bound + m
        if m > 0:
            p_power = p_power.mul(pairing, trunc=pad)
        scale = Fraction(1, factorial(m) ** 2)
        for idx, u_l in enumerate(us_l):
            if m > cutoffs[idx] + (1 if debug else 0):
                continue
            discard = m > cutoffs[idx]
            if discard:
                # the truncated computation below IS the verification
                checked += 1
            if p_power.is_zero:
                continue
            base = u_l.mul(p_power, trunc=pad)
            if not jf_is_one:
                base = base.mul(jf, trunc=pad)
            term = lambda_pow(base, m).truncate_z(bound)
            if term.max_xi_degree() != 0:
                raise AgcalcError("phase-series term kept a xi-degree > 0 part")
            if discard:
                if not term.is_zero:
                    raise ConvergenceViolation(
                        f"discarded phase-series term at m={m} has order <= {bound}")
            elif not term.is_zero:
                sums[idx] = sums[idx] + term.scale(scale)
    return [s.drop_xi() for s in sums], checked


def invert_lambda(h: MapTuple, bound: int, *, debug: bool = False) -> InversionResult:
    """Inverse via the phase-space series with u = z_i (cutoff m <= bound - 1)."""
    _require_h(h, bound, derivatives=True)
    vs = h.vars
    us = [SparsePoly.z_var(vs, i) for i in range(h.n)]
    comps, checked = _lambda_sum(us, h, bound, extra_orders=[1] * h.n, debug=debug)
    g_map = MapTuple(tuple(comps), bound)
    n_map = MapTuple(tuple(c - SparsePoly.z_var(vs, i)
                           for i, c in enumerate(comps)), bound)
    if n_map.order() < 2:
        raise AgcalcError("phase-series inverse violated o(N) >= 2")
    return InversionResult(g_map, n_map, LAMBDA_SERIES, bound, checked)


def lambda_compose(q: SparsePoly | SeriesTrunc, h: MapTuple, bound: int, *,
                   debug: bool = False) -> SeriesTrunc:
    """q composed with the inverse map, via the phase-space series (m <= bound)."""
    _require_h(h, bound, derivatives=True)
    q_poly, q_trunc = series_parts(q)
    if q_trunc < bound:
        raise TruncationError(f"q known to z-degree {q_trunc}; need >= {bound}")
    sums, _ = _lambda_sum([q_poly], h, bound, extra_orders=[0], debug=debug)
    return SeriesTrunc(sums[0], bound)


def xi_moment_series(h: MapTuple, q: SparsePoly | SeriesTrunc, k: int,
                     bound: int) -> SparsePoly:
    """The xi-degree-k phase series k! sum_m lambda^m(P^(m+k) q JF)/(m!(m+k)!).

    Equals q(G) * <xi, N>^k mod z-degree > bound, with N the inverse tail;
    the k = 0 case reduces to lambda_compose.
    """
    if k < 0:
        raise ContractViolation("moment index k must be >= 0")
    _require_h(h, bound, derivatives=True)
    q_poly, q_trunc = series_parts(q)
    if q_trunc < bound:
        raise TruncationError(f"q known to z-degree {q_trunc}; need >= {bound}")
    target, pairing, jf = _phase_data(h, bound)
    jf_is_one = jf == SparsePoly.one(target)
    q_l = q_poly.lift(target)
    acc = SparsePoly.zero(target)
    # term m has z-order >= m + 2k, so m ranges to bound - 2k
    max_m = bound - 2 * k
    if max_m < 0:
        return acc
    p_power = pairing.power(k, trunc=bound) if k else SparsePoly.one(target)
    for m in range(max_m + 1):
        pad = bound + m
        if m > 0:
            p_power = p_power.mul(pairing, trunc=pad)
        if p_power.is_zero and k + m > 0:
            break
        base = q_l.mul(p_power, trunc=pad)
        if not jf_is_one:
            base = base.mul(jf, trunc=pad)
        term = lambda_pow(base, m).truncate_z(bound)
        if term.is_zero:
            continue
        acc = acc + term.scale(Fraction(factorial(k), factorial(m) * factorial(m + k)))
    return acc


# -- the exponential transport identity --------------------------------------


def verify_phi_exponential(h: MapTuple, q: SparsePoly | SeriesTrunc, xi_bound: int,
                           bound: int) -> IdentityReport:
    """Window check of Phi(q JF e^<xi,H>) == q(G) e^<xi,N>.

    The left side is assembled from the xi-degree-j slices q JF P^j / j!
    (slice j padded to z-degree bound + j, j <= bound); by the order profile
    o(H) >= 2 that input window determines the output exactly on
    xi-degree <= xi_bound, z-degree <= bound.  The right side is built from
    the fixed-point oracle.  xi_bound is capped at bound by the window rule.
    """
    _require_h(h, bound, derivatives=True)
    q_poly, q_trunc = series_parts(q)
    if q_trunc < bound:
        raise TruncationError(f"q known to z-degree {q_trunc}; need >= {bound}")
    k_eff = min(xi_bound, bound)
    target, pairing, jf = _phase_data(h, bound)
    q_l = q_poly.lift(target)
    head = q_l.mul(jf, trunc=bound)

    assembled = SparsePoly.zero(target)
    slice_j = head  # q JF P^j / j!, truncated at z-degree bound + j
    for j in range(bound + 1):
        if j > 0:
            slice_j = slice_j.mul(pairing, trunc=bound + j).scale(Fraction(1, j))
            if slice_j.is_zero:
                break
        assembled = assembled + slice_j
    lhs = phi_apply(assembled, xi_bound=k_eff, z_bound=bound)

    oracle = invert_fixed_point(h, bound)
    q_of_g = compose(q, oracle.G, bound).poly.lift(target)
    xi_n = xi_pairing(oracle.N)
    rhs = SparsePoly.zero(target)
    tail = q_of_g  # q(G) <xi,N>^k / k!, truncated at z-degree bound
    for k in range(k_eff + 1):
        if k > 0:
            tail = tail.mul(xi_n, trunc=bound).scale(Fraction(1, k))
            if tail.is_zero:
                break
        rhs = rhs + tail
    rhs = rhs.restrict_xi(k_eff).truncate_z(bound)
    return _identity_report(
        f"exponential transport (xi<={k_eff}, z<={bound})", lhs, rhs)


# -- cross-route verification -------------------------------------------------


def verify_round_trip(h: MapTuple, result: InversionResult) -> IdentityReport:
    """F(G) == z == G(F) mod z-degree > D, componentwise via plain composition."""
    bound = result.D
    f_map = f_from_h(h)
    vs = h.vars
    for i in range(h.n):
        zi = SparsePoly.z_var(vs, i)
        fg = compose(_h_input(f_map, i), result.G, bound).poly
        if fg != zi:
            rep = _identity_report(f"round trip, component {i + 1} of F(G)", fg, zi)
            return rep
        gf = compose(SeriesTrunc(result.G.components[i], bound), f_map, bound).poly
        if gf != zi:
            return _identity_report(f"round trip, component {i + 1} of G(F)", gf, zi)
    ident = SparsePoly.z_var(vs, 0)
    return IdentityReport("round trip F(G) == z == G(F)", True, ident, ident, None)


def cross_method_results(h: MapTuple, bound: int, *,
                         debug: bool = False) -> dict[str, InversionResult]:
    return {
        FIXED_POINT: invert_fixed_point(h, bound),
        ABHYANKAR_GURJAR: invert_ag(h, bound, debug=debug),
        LAMBDA_SERIES: invert_lambda(h, bound, debug=debug),
    }
