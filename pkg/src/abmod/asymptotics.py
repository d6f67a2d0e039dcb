"""The bridge to differential systems and log-power expansions.

Three views of the same structure: a simple-pole system z dF/dz = A(z) F
turns into a module by solving a e = b A(a+b) e as a b-adic fixed point;
geometric modules embed equivariantly into expansion modules; elements of
expansion modules are realized as exact sums of terms
c * s^(alpha+m-1) * log(s)^j, with multiplication by s and primitives
computed in closed form on those terms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoEmbeddingFound, PrecisionExhausted
from .lattices import _reduce_vectors, lattice_reduce, sub_module_structure
from .linsolve import ParamSolver, form_add, form_scale
from .modules import AbModule, ModuleElement, build_xi_tensor, module_from_matrix
from .ratpoly import RationalPolynomial
from .saturation import bernstein_polynomial, require_geometric, saturate
from .decomposition import class_mod_z, semisimple_part
from .series import DEFAULT_PREC, TruncSeries, rat, rat_str


# -- differential systems ------------------------------------------------

@dataclass
class DiffSystem:
    """z d/dz F = A(z) F with polynomial (or truncated series) entries."""

    entries: tuple      # k x k, each a tuple of z-coefficients (Fractions)

    def __post_init__(self):
        rows = tuple(tuple(tuple(rat(c) for c in e) for e in row)
                     for row in self.entries)
        k = len(rows)
        for row in rows:
            if len(row) != k:
                raise ValueError("system matrix must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def to_json(self):
        return {"size": self.size,
                "entries": [[[rat_str(c) for c in e] for e in row]
                            for row in self.entries]}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(tuple(tuple(rat(c) for c in e) for e in row)
                         for row in obj["entries"]))


def from_differential_system(sys: DiffSystem, prec=DEFAULT_PREC) -> AbModule:
    """Module representing the system: the unique action with
    a e_j = b * sum_i A_ij(a+b) e_i, found as a b-adic fixed point.

    Each nested application of a lands in b * (...), so iterating from the
    zero action gains at least one b-order per pass.
    """
    k = sys.size
    if k == 0:
        return AbModule([], prec=prec)
    z = TruncSeries.zero(prec)
    mat = [[z for _ in range(k)] for _ in range(k)]
    for _ in range(prec + 2):
        module = module_from_matrix([row[:] for row in mat], prec=prec)
        new = [[z for _ in range(k)] for _ in range(k)]
        for j in range(k):
            acc = module.zero()
            for i in range(k):
                poly = sys.entries[i][j]
                h = module.zero()
                for c in reversed(poly):
                    h = h.act_a() + h.act_b()
                    if c:
                        h = h + module.basis(i).scale(c)
                acc = acc + h
            col = acc.act_b()
            for i in range(k):
                new[i][j] = col.coords[i]
        if all(new[i][j].eq_shared(mat[i][j]) for i in range(k) for j in range(k)):
            return module_from_matrix(new, prec=prec)
        mat = new
    raise PrecisionExhausted(
        "fixed-point iteration for the differential system did not converge")


# -- embeddings into expansion modules ------------------------------------

@dataclass
class Embedding:
    """An injective equivariant map into an expansion module."""

    source: AbModule
    target: AbModule
    matrix: tuple                # target.rank x source.rank series matrix
    classes: tuple
    depth: int
    dim_v: int
    diagnostics: list = field(default_factory=list)

    def apply(self, x: ModuleElement) -> ModuleElement:
        if x.host is not self.source:
            raise ValueError("element does not live in the embedding source")
        cap = self.target.prec
        out = []
        for i in range(self.target.rank):
            acc = TruncSeries.zero(cap)
            for j, c in enumerate(x.coords):
                acc = acc + self.matrix[i][j].mul_sharp(c, cap=cap)
            out.append(acc)
        return self.target.element(out)

    def check_equivariance(self) -> bool:
        for j in range(self.source.rank):
            e = self.source.basis(j)
            if not self.apply(e.act_a()).eq_shared(self.apply(e).act_a()):
                return False
            if not self.apply(e.act_b()).eq_shared(self.apply(e).act_b()):
                return False
        return True


def _solve_equivariance(source: AbModule, target: AbModule, cutoff: int):
    """Parametric solution of Phi . A = B . Phi + b^2 Phi' order by order.

    Both modules must have a simple pole.  Returns (solver, forms) where
    forms[n][t][j] is the linear form for the order-n coefficient of the
    (t, j) matrix entry.
    """
    ks, kt = source.rank, target.rank
    p = min(source.prec, target.prec)
    a_co = [
        tuple(tuple(source.a_matrix[i][j].coeffs[m] for j in range(ks))
              for i in range(ks)) for m in range(p)]
    b_co = [
        tuple(tuple(target.a_matrix[i][j].coeffs[m] for j in range(kt))
              for i in range(kt)) for m in range(p)]
    solver = ParamSolver()
    phi = [[[{solver.new_param(tag=n): Fraction(1)} for _ in range(ks)]
            for _ in range(kt)] for n in range(p)]
    for n in range(1, p):
        for t in range(kt):
            for j in range(ks):
                eq = {}
                for m in range(1, n + 1):
                    # (Phi_{n-m} A_m)_{tj}
                    for i in range(ks):
                        c = a_co[m][i][j]
                        if c:
                            eq = form_add(eq, form_scale(phi[n - m][t][i], c))
                    # -(B_m Phi_{n-m})_{tj}
                    for u in range(kt):
                        c = b_co[m][t][u]
                        if c:
                            eq = form_add(eq, form_scale(phi[n - m][u][j], -c))
                eq = form_add(eq, form_scale(phi[n - 1][t][j], -Fraction(n - 1)))
                solver.add_equation(eq)
    return solver, phi, p


def _series_matrix_rank(matrix, dim, prec) -> int:
    cols = [tuple(matrix[i][j] for i in range(dim))
            for j in range(len(matrix[0]))]
    basis, _, _, _ = _reduce_vectors(cols, dim, prec)
    return len(basis)


def embed_into_xi(module: AbModule, depth=None, dim_v=None, seed=0,
                  max_tries=40) -> Embedding:
    """Injective equivariant map into an expansion module.

    Classes come from the Bernstein roots mod Z; the log depth is searched
    upward (0 .. rank-1) unless forced, and the multiplicity space starts
    at the rank of the semi-simple part.  The unknown coordinate series
    are solved order by order; parameters are then chosen to make the
    column rank full over the series fraction field.
    """
    cert = require_geometric(module)
    sat = saturate(module)
    src = sat.module
    k = src.rank
    classes = tuple(sorted({class_mod_z(-v) for v, _ in cert["roots"]}))
    prec = src.prec
    cutoff = prec // 2

    if dim_v is not None:
        dim_candidates = [dim_v]
    else:
        try:
            s1, _ = semisimple_part(src)
            vmin = max(1, s1.rank)
        except Exception:  # noqa: BLE001 - fall back to the worst case
            vmin = 1
        dim_candidates = list(range(vmin, k + 1)) or [1]
    depth_candidates = [depth] if depth is not None else list(range(k))

    rng = random.Random(seed)
    searched = []
    for n_depth in depth_candidates:
        for dv in dim_candidates:
            searched.append((n_depth, dv))
            target = build_xi_tensor(classes, n_depth, dv, prec)
            solver, phi, p = _solve_equivariance(src, target, cutoff)
            forms = [phi[n][t][j] for n in range(p)
                     for t in range(target.rank) for j in range(k)]
            live = [q for q in solver.live_params(forms)
                    if solver.tag(q) <= cutoff]
            if not live:
                continue

            def build(assign):
                cols = []
                for j in range(k):
                    col = []
                    for t in range(target.rank):
                        coeffs = [solver.evaluate(phi[n][t][j], assign)
                                  for n in range(p)]
                        col.append(TruncSeries(coeffs, p))
                    cols.append(col)
                return tuple(tuple(cols[j][t] for j in range(k))
                             for t in range(target.rank))

            candidates = []
            for q in live:
                candidates.append({q: Fraction(1)})
            candidates.append({q: Fraction(i + 1)
                               for i, q in enumerate(live)})
            for _ in range(max_tries):
                candidates.append({q: Fraction(rng.randint(-5, 5))
                                   for q in live})
            for assign in candidates:
                mat = build(assign)
                if _series_matrix_rank(mat, target.rank, p) < k:
                    continue
                emb = Embedding(source=src, target=target, matrix=mat,
                                classes=classes, depth=n_depth, dim_v=dv)
                if not emb.check_equivariance():
                    continue
                b_img = _image_bernstein(emb)
                b_src = bernstein_polynomial(src, mode="minimal")
                if b_img != b_src:
                    emb.diagnostics.append(
                        "image Bernstein polynomial differs from the source")
                    continue
                return _compose_with_inclusion(module, sat, emb)
    raise NoEmbeddingFound(
        "no injective equivariant map found; searched (depth, dimV) pairs "
        + ", ".join(map(str, searched)))


def _image_bernstein(emb: Embedding) -> RationalPolynomial:
    cols = [emb.target.element(tuple(emb.matrix[i][j]
                                     for i in range(emb.target.rank)))
            for j in range(emb.source.rank)]
    lat = lattice_reduce(cols, host=emb.target)
    sub = sub_module_structure(lat)
    return bernstein_polynomial(sub.module, mode="minimal")


def _compose_with_inclusion(module: AbModule, sat, emb: Embedding) -> Embedding:
    """Pull an embedding of the saturation back to the original module."""
    cap = emb.target.prec
    cols = []
    for j in range(module.rank):
        col = []
        for t in range(emb.target.rank):
            acc = TruncSeries.zero(cap)
            for i in range(emb.source.rank):
                acc = acc + emb.matrix[t][i].mul_sharp(sat.inclusion[i][j], cap=cap)
            col.append(acc)
        cols.append(col)
    matrix = tuple(tuple(cols[j][t] for j in range(module.rank))
                   for t in range(emb.target.rank))
    return Embedding(source=module, target=emb.target, matrix=matrix,
                     classes=emb.classes, depth=emb.depth, dim_v=emb.dim_v,
                     diagnostics=emb.diagnostics)


# -- log-power expansions --------------------------------------------------

@dataclass(frozen=True)
class ExpansionTerm:
    """One term c * s^(alpha+m-1) * log(s)^j of an expansion."""

    alpha: Fraction
    m: int
    j: int
    coeff: Fraction

    def exponent(self) -> Fraction:
        return self.alpha + self.m - 1

    def render(self) -> str:
        c = self.coeff
        if c.denominator == 1:
            cstr = str(c.numerator)
        else:
            cstr = f"({rat_str(c)})"
        e = self.exponent()
        parts = [cstr]
        if e != 0:
            estr = rat_str(e) if (e.denominator == 1 and e >= 0) else f"({rat_str(e)})"
            parts.append(f"s^{estr}")
        if self.j == 1:
            parts.append("log(s)")
        elif self.j > 1:
            parts.append(f"log(s)^{self.j}")
        return "*".join(parts)

    def to_json(self):
        return {"alpha": rat_str(self.alpha), "m": self.m, "j": self.j,
                "coeff": rat_str(self.coeff)}


class LogPowerFunction:
    """Exact finite sums of terms c s^(alpha+m-1) log(s)^j, closed under
    multiplication by s and primitives vanishing at 0."""

    __slots__ = ("terms", "order_cap")

    def __init__(self, terms=None, order_cap=64):
        self.terms = dict(terms or {})   # (alpha, m, j) -> Fraction
        self.order_cap = order_cap

    def _add_term(self, key, c):
        if key[1] > self.order_cap or not c:
            return
        v = self.terms.get(key, Fraction(0)) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def add(self, other: "LogPowerFunction") -> "LogPowerFunction":
        out = LogPowerFunction(self.terms, self.order_cap)
        for key, c in other.terms.items():
            out._add_term(key, c)
        return out

    def scale(self, c) -> "LogPowerFunction":
        c = rat(c)
        return LogPowerFunction({k: v * c for k, v in self.terms.items()},
                                self.order_cap)

    def mul_s(self) -> "LogPowerFunction":
        out = LogPowerFunction(order_cap=self.order_cap)
        for (alpha, m, j), c in self.terms.items():
            out._add_term((alpha, m + 1, j), c)
        return out

    def integrate(self) -> "LogPowerFunction":
        """Primitive vanishing at 0, term by term:
        int_0^s t^(b-1) log^j = (s^b / b) log^j - (j/b) int_0^s t^(b-1) log^(j-1)."""
        out = LogPowerFunction(order_cap=self.order_cap)
        for (alpha, m, j), c in self.terms.items():
            beta = alpha + m
            coeff = c
            jj = j
            while True:
                out._add_term((alpha, m + 1, jj), coeff / beta)
                if jj == 0:
                    break
                coeff = -coeff * jj / beta
                jj -= 1
        return out

    def apply_series(self, s: TruncSeries) -> "LogPowerFunction":
        """S(b) acting by iterated primitives."""
        out = LogPowerFunction(order_cap=self.order_cap)
        cur = self
        for q, c in enumerate(s.coeffs):
            if q > self.order_cap:
                break
            if c:
                out = out.add(cur.scale(c))
            cur = cur.integrate()
        return out

    def truncate_order(self, order: int) -> "LogPowerFunction":
        return LogPowerFunction(
            {k: v for k, v in self.terms.items() if k[1] <= order},
            self.order_cap)

    def term_list(self, order=None):
        keys = sorted(self.terms)
        out = []
        for (alpha, m, j) in keys:
            if order is not None and m > order:
                continue
            out.append(ExpansionTerm(alpha, m, j, self.terms[(alpha, m, j)]))
        return out

    def eq_through_order(self, other: "LogPowerFunction", order: int) -> bool:
        def upto(f):
            return {k: v for k, v in f.terms.items() if k[1] <= order}
        return upto(self) == upto(other)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def basis_realization(host: AbModule, index: int, order_cap=64) -> LogPowerFunction:
    """The expansion-function realization of a basis vector of an
    expansion module: e_j corresponds to (alpha^j / j!) s^(alpha-1) log^j."""
    if host.xi is None:
        raise ValueError("module does not carry expansion-block structure")
    alpha, j, _copy = host.xi.legend[index]
    c = Fraction(alpha) ** j / _factorial(j)
    return LogPowerFunction({(alpha, 0, j): c}, order_cap)


def realize_expansion(x: ModuleElement, order: int):
    """Exact expansion terms of an element of an expansion module, up to
    s-order *order* (coefficients of s^(alpha+m-1) with m <= order).

    Terms from different copies of the multiplicity space are summed.
    """
    host = x.host
    if host.xi is None:
        raise ValueError("element does not live in an expansion module")
    cap = order + 2
    total = LogPowerFunction(order_cap=cap)
    for t, coeff in enumerate(x.coords):
        base = basis_realization(host, t, cap)
        total = total.add(base.apply_series(coeff))
    usable = min(order, x.host.prec - 1)
    return total.term_list(order=usable)


def realize_function(x: ModuleElement, order_cap: int) -> LogPowerFunction:
    host = x.host
    if host.xi is None:
        raise ValueError("element does not live in an expansion module")
    total = LogPowerFunction(order_cap=order_cap)
    for t, coeff in enumerate(x.coords):
        base = basis_realization(host, t, order_cap)
        total = total.add(base.apply_series(coeff))
    return total


# -- singular term reports --------------------------------------------------

@dataclass
class SingularClassReport:
    alpha: Fraction
    nilpotent_order: int
    top_roots: tuple           # roots of the top Bernstein polynomial
    terms: tuple               # (two_alpha_minus_2, m, log_power)

    def to_json(self):
        return {
            "alpha": rat_str(self.alpha),
            "nilpotent_order": self.nilpotent_order,
            "top_roots": [rat_str(r) for r in self.top_roots],
            "predicted_terms": [
                {"modulus_exponent": rat_str(e), "m": m, "log_power": lp}
                for e, m, lp in self.terms
            ],
        }


@dataclass
class SingularTermReport:
    """Algebraic predictions of singular expansion terms, per class.

    For each class alpha with nilpotent order d, each root -alpha-m of the
    top-level Bernstein polynomial predicts a term with modulus exponent
    2 alpha - 2, holomorphic shift m, and log power d-1 (d when alpha = 1).
    No integral is evaluated; this reports exponents only.
    """

    classes: tuple
    diagnostics: list = field(default_factory=list)

    def to_json(self):
        return {"classes": [c.to_json() for c in self.classes],
                "note": "algebraic predictions; antiholomorphic exponent m' "
                        "is not determined by this computation"}


def singular_term_report(fresco_or_module) -> SingularTermReport:
    from .decomposition import higher_bernstein

    hb = higher_bernstein(fresco_or_module)
    classes = []
    diagnostics = list(hb.diagnostics)
    for c in hb.classes:
        d = c.nilpotent_order
        top = c.levels[-1][2] if c.levels else None
        roots = tuple(v for v, _ in (top.roots if top else ()))
        log_power = d if c.alpha == 1 else d - 1
        terms = []
        for r in roots:
            m = -r - c.alpha
            if m.denominator != 1 or m < 0:
                diagnostics.append(
                    f"root {rat_str(r)} is not of the form -alpha-m for "
                    f"alpha={rat_str(c.alpha)}")
                continue
            terms.append((2 * c.alpha - 2, int(m), log_power))
        classes.append(SingularClassReport(
            alpha=c.alpha, nilpotent_order=d, top_roots=roots,
            terms=tuple(terms)))
    return SingularTermReport(classes=tuple(classes), diagnostics=diagnostics)
