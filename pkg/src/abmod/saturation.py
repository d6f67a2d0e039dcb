"""Saturation by b^(-1)a and Bernstein polynomials.

The saturation chain L_0 = E, L_{m+1} = L_m + b^(-1) a L_m is carried in
scaled coordinates: M_m := b^m L_m is a genuine lattice inside E and obeys

    M_{m+1} = b M_m + (a - m b) M_m,

so the whole computation happens in E.  The chain has stabilized exactly
when (a - m b) maps the basis of M_m into b M_m, i.e. when every basis
image has pivot coordinates of valuation >= 1; the coordinate solutions
are then the a-matrix of the saturated module in the rescaled basis, and
they have a simple pole by construction.
"""

from __future__ import annotations

from .errors import NotGeometric, NotRegular, PrecisionExhausted
from .lattices import Lattice, full_lattice, lattice_reduce
from .modules import AbModule, ModuleElement
from .ratpoly import RationalPolynomial
from .series import TruncSeries, rat_str


class SaturationResult:
    """Saturated module, inclusion data and the number of b^(-1)a steps."""

    __slots__ = ("module", "inclusion", "steps", "scaled_lattice", "source")

    def __init__(self, module, inclusion, steps, scaled_lattice, source):
        self.module = module          # the saturated module E#
        self.inclusion = inclusion    # k x k series matrix, column j = coords of e_j
        self.steps = steps            # saturation index m
        self.scaled_lattice = scaled_lattice  # b^m E# as a lattice in E
        self.source = source

    def include(self, x: ModuleElement) -> ModuleElement:
        """Image of an element of E inside E#."""
        out = []
        cap = self.module.prec
        for i in range(self.module.rank):
            acc = TruncSeries.zero(cap)
            for j, c in enumerate(x.coords):
                acc = acc + self.inclusion[i][j].mul_sharp(c, cap=cap)
            out.append(acc)
        return self.module.element(out)


def _shifted_basis_images(lat: Lattice, m: int):
    """(a - m b) applied to each basis element."""
    out = []
    for g in lat.basis_elements():
        img = g.act_a()
        if m:
            img = img - g.act_b().scale(m)
        out.append(img)
    return out


def saturate(module: AbModule, max_iter=None) -> SaturationResult:
    """Smallest simple-pole module containing the input, with inclusion."""
    if module.rank == 0:
        return SaturationResult(module, (), 0, full_lattice(module), module)
    if max_iter is not None:
        cap, cap_why = max_iter, "configured cap"
    else:
        cap, cap_why = module.rank * module.prec, "default cap rank * prec"
    lat = full_lattice(module)
    m = 0
    while True:
        images = _shifted_basis_images(lat, m)
        coords = []
        stable = True
        for img in images:
            c = lat.member_coords(img)
            if c is None or any(s.valuation_lower_bound() < 1 for s in c):
                stable = False
                break
            coords.append(c)
        if stable:
            break
        if m >= cap:
            raise NotRegular(
                f"saturation did not stabilize within {cap} steps "
                f"({cap_why}); the module is not detectably regular")
        nxt = lattice_reduce(
            [g.act_b() for g in lat.basis_elements()] + images,
            host=module)
        if nxt.rank == lat.rank and nxt.eq(lat):
            raise NotRegular(
                f"saturation chain is self-similar at step {m}: "
                "each step strictly enlarges the module, so the chain never "
                "stabilizes")
        lat = nxt
        m += 1

    r = lat.rank
    mat = [[coords[j][i] for j in range(r)] for i in range(r)]
    sat = AbModule(mat)
    # inclusion: coordinates of b^m e_j in the scaled basis
    incl_cols = []
    for j in range(module.rank):
        e = module.basis(j)
        for _ in range(m):
            e = e.act_b()
        c = lat.member_coords(e)
        if c is None:
            raise PrecisionExhausted("could not express the inclusion at precision")
        incl_cols.append(c)
    inclusion = tuple(tuple(incl_cols[j][i] for j in range(module.rank))
                      for i in range(r))
    return SaturationResult(sat, inclusion, m, lat, module)


def bernstein_polynomial(module: AbModule, mode="minimal", hints=(),
                         max_iter=None) -> RationalPolynomial:
    """Minimal (default) or characteristic polynomial of -b^(-1)a on E#/bE#."""
    if module.rank == 0:
        return RationalPolynomial.one()
    sat = saturate(module, max_iter=max_iter)
    res = sat.module.residue()
    neg = tuple(tuple(-c for c in row) for row in res)
    return RationalPolynomial.from_matrix(neg, mode=mode, hints=hints)


def is_geometric(module: AbModule, max_iter=None):
    """All Bernstein roots rational and negative; returns (bool, certificate)."""
    poly = bernstein_polynomial(module, mode="minimal", max_iter=max_iter)
    if not poly.is_split():
        return False, {
            "reason": "unsplit factor without rational roots",
            "unsplit": poly.unsplit,
            "roots": poly.roots,
        }
    bad = [v for v, _ in poly.roots if v >= 0]
    if bad:
        return False, {
            "reason": "non-negative roots " + ", ".join(rat_str(v) for v in bad),
            "roots": poly.roots,
        }
    return True, {"roots": poly.roots}


def require_geometric(module: AbModule, max_iter=None):
    ok, cert = is_geometric(module, max_iter=max_iter)
    if not ok:
        raise NotGeometric(cert["reason"])
    return cert
