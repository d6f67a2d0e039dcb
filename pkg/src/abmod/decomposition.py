"""Semi-simplicity, the canonical filtration, primitive decomposition and
higher Bernstein polynomials.

The filtration is computed from eigen-elements: solutions of
(a - lambda b) x = 0 found coefficient-by-coefficient as an exact linear
system.  The algorithmic choices the underlying theory leaves open (the
eigen-span hull realizing the first filtration step, the candidate bound
for lambda) are validated post hoc; failures surface as diagnostics, and
never as silently wrong answers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotGeometric, ValidationFailed
from .lattices import (Lattice, Quotient, full_lattice, is_normal,
                       lattice_reduce, normal_hull, quotient_module,
                       sub_module_structure, kernel_of_series_map,
                       zero_lattice)
from .linsolve import ParamSolver, form_add, form_scale
from .modules import AbModule, smat_from_const, smat_mul, smat_inverse
from .qlinalg import identity, mat_mul, mat_sub, mat_scale, nullspace, solve as qsolve
from .ratpoly import RationalPolynomial
from .saturation import bernstein_polynomial, require_geometric, saturate
from .series import TruncSeries, rat, rat_str


def class_mod_z(x) -> Fraction:
    """Representative of x mod Z in the half-open interval (0, 1]."""
    x = rat(x)
    f = x - (x.numerator // x.denominator)
    return f if f != 0 else Fraction(1)


# -- eigen elements -----------------------------------------------------

def eigen_elements(module: AbModule, lam, max_valuation=None) -> Lattice:
    """Solution lattice of (a - lambda b) x = 0, order by order in b.

    Solutions of the truncated system whose valuation exceeds
    *max_valuation* (default prec // 2) are discarded: their defining
    constraints lie beyond the truncation order, so they are
    indistinguishable from zero and carry no structure.
    """
    lam = rat(lam)
    k = module.rank
    p = module.prec
    cutoff = max_valuation if max_valuation is not None else p // 2
    if k == 0 or p < 2:
        return zero_lattice(module)
    mats = [
        tuple(tuple(module.a_matrix[i][j].coeffs[m] for j in range(k))
              for i in range(k))
        for m in range(p)
    ]
    solver = ParamSolver()
    s = [[{solver.new_param(tag=n): Fraction(1)} for _ in range(k)]
         for n in range(p)]
    for n in range(p):
        for i in range(k):
            eq = {}
            for m in range(n + 1):
                row = mats[m][i]
                for j in range(k):
                    if row[j]:
                        eq = form_add(eq, form_scale(s[n - m][j], row[j]))
            if n >= 1:
                eq = form_add(eq, form_scale(s[n - 1][i], Fraction(n - 1) - lam))
            solver.add_equation(eq)
    forms = [f for row in s for f in row]
    live = [q for q in solver.live_params(forms) if solver.tag(q) <= cutoff]
    sols = []
    for q in live:
        assign = {q: Fraction(1)}
        coords = []
        for i in range(k):
            coeffs = [solver.evaluate(s[n][i], assign) for n in range(p)]
            coords.append(TruncSeries(coeffs, p))
        elem = module.element(coords)
        if not elem.is_zero_known() and elem.valuation_lower_bound() <= cutoff:
            sols.append(elem)
    return lattice_reduce(sols, host=module)


# -- semi-simple part and filtration -------------------------------------

def semisimple_part(module: AbModule, max_shift=None, _roots=None):
    """Normal hull of the span of eigen-elements over all candidate lambdas.

    Returns (lattice, diagnostics).  Candidates run over negated Bernstein
    roots shifted by 0..max_shift (default prec // 2).
    """
    diagnostics = []
    if module.rank == 0:
        return full_lattice(module), diagnostics
    if _roots is None:
        cert = require_geometric(module)
        _roots = [v for v, _ in cert["roots"]]
    mmax = max_shift if max_shift is not None else module.prec // 2
    lambdas = []
    for r in sorted(set(_roots)):
        base = -r
        for m in range(mmax + 1):
            if base + m not in lambdas:
                lambdas.append(base + m)
    elems = []
    for lam in lambdas:
        lat = eigen_elements(module, lam)
        elems.extend(lat.basis_elements())
    if not elems:
        diagnostics.append("no eigen-elements found; semi-simple part is zero")
        return zero_lattice(module), diagnostics
    hull = normal_hull(lattice_reduce(elems, host=module))
    try:
        sub = sub_module_structure(hull)
    except Exception as exc:  # noqa: BLE001 - recorded, not hidden
        diagnostics.append(f"eigen-span hull is not a-stable: {exc}")
        return hull, diagnostics
    if hull.rank < module.rank:
        ok, _ = _is_semisimple_inner(sub.module)
        if not ok:
            diagnostics.append(
                "eigen-span hull failed its own semi-simplicity validation")
    return hull, diagnostics


def _is_semisimple_inner(module: AbModule):
    if module.rank == 0:
        return True, []
    part, diags = semisimple_part(module)
    return part.rank == module.rank and is_normal(part), diags


def is_semisimple(module: AbModule, cross_check=False) -> bool:
    """A module is semi-simple iff its semi-simple part is everything.

    With cross_check=True the answer is compared against the depth-zero
    embedding search; a mismatch raises ValidationFailed.
    """
    ok, _ = _is_semisimple_inner(module)
    if cross_check and module.rank > 0:
        from .asymptotics import embed_into_xi
        from .errors import NoEmbeddingFound
        try:
            embed_into_xi(module, depth=0)
            embeds_flat = True
        except NoEmbeddingFound:
            embeds_flat = False
        if embeds_flat != ok:
            raise ValidationFailed(
                f"semi-simplicity check ({ok}) disagrees with the depth-0 "
                f"embedding search ({embeds_flat})")
    return ok


@dataclass
class Filtration:
    """Strictly increasing chain of normal a-stable lattices with
    semi-simple quotients; its length is the nilpotent order."""

    host: AbModule
    steps: tuple          # lattices S_1 c ... c S_d = E
    diagnostics: list = field(default_factory=list)

    @property
    def nilpotent_order(self) -> int:
        return len(self.steps)

    def level_module(self, j: int) -> AbModule:
        """The module S_j / S_{j-1} (1-indexed)."""
        sub = sub_module_structure(self.steps[j - 1])
        if j == 1:
            return sub.module
        prev = self.steps[j - 2]
        inner = lattice_reduce(
            [sub.to_sub_coords(g) for g in prev.basis_elements()],
            host=sub.module)
        return quotient_module(sub.module, inner).module

    def to_json(self):
        return {
            "nilpotent_order": self.nilpotent_order,
            "step_ranks": [s.rank for s in self.steps],
        }


def semisimple_filtration(module: AbModule, max_shift=None) -> Filtration:
    """S_1 = semi-simple part; S_{j+1} = preimage of the part of E/S_j."""
    diagnostics = []
    if module.rank == 0:
        return Filtration(module, (), diagnostics)
    require_geometric(module)
    part, diags = semisimple_part(module, max_shift=max_shift)
    diagnostics.extend(diags)
    if part.is_zero():
        raise ValidationFailed(
            "semi-simple part of a nonzero geometric module came out zero")
    steps = [part]
    while steps[-1].rank < module.rank:
        quot = quotient_module(module, steps[-1])
        qpart, qdiags = semisimple_part(quot.module)
        diagnostics.extend(qdiags)
        if qpart.is_zero():
            raise ValidationFailed(
                "filtration stalled: quotient has zero semi-simple part")
        nxt = quot.preimage_lattice(qpart)
        if nxt.rank <= steps[-1].rank:
            raise ValidationFailed("filtration failed to increase strictly")
        steps.append(nxt)
    for s in steps:
        if not is_normal(s):
            diagnostics.append("a filtration step is not normal")
    return Filtration(module, tuple(steps), diagnostics)


# -- primitive decomposition ---------------------------------------------

@dataclass
class PrimitiveSplit:
    """Decomposition along a set of exponent classes mod Z."""

    host: AbModule
    classes: tuple                # normalized class representatives
    not_part: Lattice             # E_[!=classes]: largest off-class normal sub
    quotient: Quotient | None     # E -> E^[classes]
    diagnostics: list = field(default_factory=list)

    @property
    def part_module(self) -> AbModule:
        if self.quotient is None:
            return self.host
        return self.quotient.module

    def project(self, x):
        if self.quotient is None:
            return x
        return self.quotient.project(x)

    def project_lattice(self, lat):
        if self.quotient is None:
            return lat
        return self.quotient.project_lattice(lat)


def _sylvester_solve(p, q, shift, rhs):
    """Solve (p + shift I) X - X q = rhs exactly; raises if singular."""
    np_, nq = len(p), len(q)
    size = np_ * nq
    rows = []
    vec = []
    for i in range(np_):
        for j in range(nq):
            row = [Fraction(0)] * size
            for t in range(np_):
                row[t * nq + j] += p[i][t]
            row[i * nq + j] += shift
            for u in range(nq):
                row[i * nq + u] -= q[u][j]
            rows.append(row)
            vec.append(rhs[i][j])
    sol = qsolve(tuple(tuple(r) for r in rows), tuple(vec))
    if sol is None:
        raise ValidationFailed("singular Sylvester block across distinct classes")
    return tuple(tuple(sol[i * nq + j] for j in range(nq)) for i in range(np_))


def primitive_split(module: AbModule, classes, mode="minimal",
                    max_iter=None) -> PrimitiveSplit:
    """Split off the largest normal sub-module with no Bernstein root in
    the given classes mod Z; the quotient is primitive for those classes.

    Works on the saturation: the residue is block-split by generalized
    eigenvalue classes, the full series matrix is block-diagonalized by
    solving Sylvester equations order by order (solvable because distinct
    classes stay disjoint under integer shifts), and the off-class block is
    pulled back to the module.
    """
    diagnostics = []
    cls_set = tuple(sorted({class_mod_z(c) for c in classes}))
    if module.rank == 0:
        return PrimitiveSplit(module, cls_set, full_lattice(module), None,
                              diagnostics)
    cert = require_geometric(module, max_iter=max_iter)
    b_poly = bernstein_polynomial(module, mode=mode, max_iter=max_iter)
    sat = saturate(module, max_iter=max_iter)
    res = sat.module.residue()
    k = len(res)
    eigvals = sorted({-v for v, _ in
                      RationalPolynomial.from_matrix(
                          tuple(tuple(-c for c in row) for row in res),
                          mode="minimal").roots})
    in_vals = [nu for nu in eigvals if class_mod_z(nu) in cls_set]
    out_vals = [nu for nu in eigvals if class_mod_z(nu) not in cls_set]

    if not out_vals:
        split = PrimitiveSplit(module, cls_set, zero_lattice(module),
                               quotient_module(module, zero_lattice(module)),
                               diagnostics)
        _check_part_bernstein(split, b_poly, cls_set, mode, diagnostics, max_iter)
        return split
    if not in_vals:
        split = PrimitiveSplit(module, cls_set, full_lattice(module),
                               quotient_module(module, full_lattice(module)),
                               diagnostics)
        _check_part_bernstein(split, b_poly, cls_set, mode, diagnostics, max_iter)
        return split

    def gen_eigenspace(vals):
        m = identity(k)
        for nu in vals:
            factor = mat_sub(res, mat_scale(identity(k), nu))
            for _ in range(k):
                m = mat_mul(factor, m)
        return nullspace(m)

    u_in = gen_eigenspace(in_vals)
    u_out = gen_eigenspace(out_vals)
    if len(u_in) + len(u_out) != k:
        raise ValidationFailed("generalized eigenspaces do not fill the module")
    cmat = tuple(tuple(col[i] for col in (list(u_in) + list(u_out)))
                 for i in range(k))
    from .qlinalg import inverse as qinverse
    cinv = qinverse(cmat)

    p = sat.module.prec
    a_t = smat_mul(smat_mul(smat_from_const(cinv, p), sat.module.a_matrix),
                   smat_from_const(cmat, p), cap=p)
    coeff = [
        tuple(tuple(a_t[i][j].coeffs[m] if m < a_t[i][j].prec else Fraction(0)
                    for j in range(k)) for i in range(k))
        for m in range(p)
    ]
    k_in = len(u_in)
    r_t = coeff[1]
    for i in range(k_in):
        for j in range(k_in, k):
            if r_t[i][j] or r_t[j][i]:
                raise ValidationFailed("residue did not block-diagonalize")

    r_ii = tuple(tuple(r_t[i][j] for j in range(k_in)) for i in range(k_in))
    r_oo = tuple(tuple(r_t[i][j] for j in range(k_in, k)) for i in range(k_in, k))

    h_coeffs = [identity(k)]          # H_0 = I
    b_coeffs = [None, r_t]            # B_1 = residue
    for n in range(2, p + 1):
        # K_n = -sum_{m=2..n} A_m H_{n-m} + sum_{l=1..n-2} H_l B_{n-l}
        kmat = [[Fraction(0)] * k for _ in range(k)]
        for m in range(2, n + 1):
            if m >= p or n - m >= len(h_coeffs):
                continue
            part = mat_mul(coeff[m], h_coeffs[n - m])
            for i in range(k):
                for j in range(k):
                    kmat[i][j] -= part[i][j]
        for l in range(1, n - 1):
            if l >= len(h_coeffs) or n - l >= len(b_coeffs):
                continue
            part = mat_mul(h_coeffs[l], b_coeffs[n - l])
            for i in range(k):
                for j in range(k):
                    kmat[i][j] += part[i][j]
        # off-diagonal blocks of H_{n-1} from Sylvester equations
        hn = [[Fraction(0)] * k for _ in range(k)]
        k_io = tuple(tuple(-kmat[i][j] for j in range(k_in, k))
                     for i in range(k_in))
        x_io = _sylvester_solve(r_ii, r_oo, Fraction(n - 1), k_io)
        for i in range(k_in):
            for j in range(k - k_in):
                hn[i][k_in + j] = x_io[i][j]
        k_oi = tuple(tuple(-kmat[i][j] for j in range(k_in))
                     for i in range(k_in, k))
        x_oi = _sylvester_solve(r_oo, r_ii, Fraction(n - 1), k_oi)
        for i in range(k - k_in):
            for j in range(k_in):
                hn[k_in + i][j] = x_oi[i][j]
        if n - 1 >= len(h_coeffs):
            h_coeffs.append(tuple(tuple(r) for r in hn))
        # diagonal blocks of B_n
        bn = [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                same_block = (i < k_in) == (j < k_in)
                if same_block:
                    bn[i][j] = -kmat[i][j]
        if n < p:
            b_coeffs.append(tuple(tuple(r) for r in bn))

    h_mat = tuple(
        tuple(TruncSeries([h_coeffs[n][i][j] if n < len(h_coeffs) else Fraction(0)
                           for n in range(p)], p) for j in range(k))
        for i in range(k))
    t_mat = smat_mul(smat_from_const(cmat, p), h_mat, cap=p)
    t_inv = smat_inverse(t_mat)

    # rows of T^-1 . inclusion restricted to the in-class block
    rows = []
    for i in range(k_in):
        row = []
        for j in range(module.rank):
            acc = TruncSeries.zero(p)
            for t in range(k):
                acc = acc + t_inv[i][t].mul_sharp(sat.inclusion[t][j], cap=p)
            row.append(acc)
        rows.append(row)
    kernel = kernel_of_series_map(rows, module.rank, module.prec)
    e_not = lattice_reduce([module.element(v) for v in kernel], host=module)
    if not is_normal(e_not):
        diagnostics.append("off-class kernel lattice is not normal")
    quot = quotient_module(module, e_not)
    split = PrimitiveSplit(module, cls_set, e_not, quot, diagnostics)
    _check_part_bernstein(split, b_poly, cls_set, mode, diagnostics, max_iter)
    return split


def _check_part_bernstein(split, b_poly, cls_set, mode, diagnostics, max_iter):
    """The part's Bernstein polynomial must equal the class part of the
    module's Bernstein polynomial."""
    if not b_poly.is_split():
        diagnostics.append("class comparison skipped: unsplit Bernstein factor")
        return
    expected = [(v, m) for v, m in b_poly.roots if class_mod_z(-v) in cls_set]
    actual = bernstein_polynomial(split.part_module, mode=mode,
                                  max_iter=max_iter)
    if RationalPolynomial.from_roots(expected) != actual:
        diagnostics.append(
            "Bernstein polynomial of the class part does not match the "
            "class part of the Bernstein polynomial")


# -- higher Bernstein polynomials ------------------------------------------

@dataclass
class ClassLevels:
    alpha: Fraction
    nilpotent_order: int
    part_rank: int
    levels: tuple      # (j, delta_j, RationalPolynomial) per level

    def to_json(self):
        return {
            "alpha": rat_str(self.alpha),
            "nilpotent_order": self.nilpotent_order,
            "levels": [
                {"j": j, "delta": d, "poly": poly.to_json(),
                 "roots": [{"value": rat_str(v), "mult": m}
                           for v, m in poly.roots]}
                for j, d, poly in self.levels
            ],
        }


@dataclass
class HigherBernstein:
    total: RationalPolynomial
    classes: tuple                # ClassLevels per class, alpha ascending
    assembled: tuple              # B_j over all classes, j = 1..d
    product_check: bool
    roots_simple: bool
    degrees_non_increasing: bool
    diagnostics: list = field(default_factory=list)

    def to_json(self):
        return {
            "classes": [c.to_json() for c in self.classes],
            "B": [p.to_json() for p in self.assembled],
            "product_check": self.product_check,
            "roots_simple": self.roots_simple,
            "degrees_non_increasing": self.degrees_non_increasing,
        }


def higher_bernstein(fresco_or_module, max_shift=None) -> HigherBernstein:
    """Per-class filtration Bernstein polynomials, shifted by corank.

    For each class alpha present in the Bernstein roots: filter the
    primitive part, take the Bernstein polynomial of each graded piece and
    shift level j by the rank of part/S_j.  The assembled product is
    validated against the Bernstein polynomial of the module.
    """
    module = getattr(fresco_or_module, "module", fresco_or_module)
    diagnostics = []
    b_total = bernstein_polynomial(module, mode="characteristic")
    if not b_total.is_split():
        raise NotGeometric("higher Bernstein polynomials need split rational roots")
    alphas = sorted({class_mod_z(-v) for v, _ in b_total.roots})
    per_class = []
    for alpha in alphas:
        split = primitive_split(module, {alpha}, mode="characteristic")
        diagnostics.extend(split.diagnostics)
        part = split.part_module
        if part.rank == 0:
            continue
        filt = semisimple_filtration(part, max_shift=max_shift)
        diagnostics.extend(filt.diagnostics)
        d = filt.nilpotent_order
        part_rank = part.rank
        levels = []
        for j in range(1, d + 1):
            level_mod = filt.level_module(j)
            level_poly = bernstein_polynomial(level_mod, mode="characteristic")
            delta = part_rank - filt.steps[j - 1].rank
            levels.append((j, delta, level_poly.shift(delta)))
        per_class.append(ClassLevels(alpha, d, part_rank, tuple(levels)))

    dmax = max((c.nilpotent_order for c in per_class), default=0)
    assembled = []
    for j in range(1, dmax + 1):
        acc = RationalPolynomial.one()
        for c in per_class:
            for (jj, _, poly) in c.levels:
                if jj == j:
                    acc = acc.mul(poly)
        assembled.append(acc)

    product = RationalPolynomial.one()
    for p in assembled:
        product = product.mul(p)
    product_ok = product == b_total
    simple_ok = all(m == 1 for p in assembled for _, m in p.roots)
    degs = [p.degree() for p in assembled]
    non_increasing = all(degs[i] >= degs[i + 1] for i in range(len(degs) - 1))
    if not product_ok:
        diagnostics.append("product of higher Bernstein polynomials != total")
    if not simple_ok:
        diagnostics.append("a higher Bernstein polynomial has a repeated root")
    if not non_increasing:
        diagnostics.append("higher Bernstein degrees increased along levels")
    return HigherBernstein(
        total=b_total, classes=tuple(per_class), assembled=tuple(assembled),
        product_check=product_ok, roots_simple=simple_ok,
        degrees_non_increasing=non_increasing, diagnostics=diagnostics)
