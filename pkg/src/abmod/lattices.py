"""Lattices: finitely generated sub-modules over the truncated-series DVR.

The normal form is pivot-based Hermite reduction: pick the entry of lowest
valuation (ties broken by coordinate, then by generator order), normalize
the pivot entry to a pure power b^v, eliminate that coordinate everywhere
else.  In the resulting basis, listed in processing order,

  * basis[j] has exact zeros at all earlier pivot coordinates,
  * basis[j][pivot_j] = b^(v_j) exactly,
  * every entry of basis[j] has valuation >= v_j,

which makes membership a straight forward-elimination and keeps the
valuation-aware precision tracking from ever inventing coefficients.
"""

from __future__ import annotations

from .errors import (HostMismatch, NotAStable, NotNormal, PrecisionExhausted)
from .modules import AbModule, ModuleElement
from .series import TruncSeries


class Lattice:
    """Reduced generating set of a sub-module, with pivot data."""

    __slots__ = ("host", "basis", "pivots", "tracks", "ngens")

    def __init__(self, host, basis, pivots, tracks=None, ngens=0):
        self.host = host
        self.basis = tuple(basis)       # list of coordinate vectors (tuples)
        self.pivots = tuple(pivots)     # (coord, valuation) per basis vector
        self.tracks = tuple(tracks) if tracks is not None else None
        self.ngens = ngens

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_elements(self):
        return [ModuleElement(self.host, vec) for vec in self.basis]

    def is_zero(self) -> bool:
        return not self.basis

    def pivot_valuations(self):
        return tuple(v for _, v in self.pivots)

    def member(self, x) -> bool:
        return self.member_coords(x) is not None

    def member_coords(self, x):
        """Coordinates of x in the pivot basis, or None if not a member."""
        vec = _coerce_vec(self, x)
        r = list(vec)
        coords = []
        for g, (p, v) in zip(self.basis, self.pivots):
            entry = r[p]
            low = entry.coeffs[:min(v, entry.prec)]
            if any(c for c in low):
                return None
            if entry.prec - v < 1:
                raise PrecisionExhausted(
                    "membership needs coefficients beyond precision "
                    f"(pivot valuation {v}, known precision {entry.prec})")
            c = entry.divide_bpow(v)
            coords.append(c)
            if not c.is_zero_known():
                for i in range(len(r)):
                    r[i] = r[i] - c.mul_sharp(g[i], cap=self.host.prec)
            r[p] = TruncSeries.zero(r[p].prec)
        for e in r:
            if not e.decided_zero("membership residual"):
                return None
        return coords

    def contains(self, other: "Lattice") -> bool:
        return all(self.member(ModuleElement(self.host, v)) for v in other.basis)

    def eq(self, other: "Lattice") -> bool:
        if self.host is not other.host:
            raise HostMismatch("lattices in different modules")
        if len(self.basis) != len(other.basis):
            return False
        return self.contains(other) and other.contains(self)

    def generator_coords(self, x):
        """Coordinates of x in terms of the original generators (if tracked)."""
        if self.tracks is None:
            raise ValueError("lattice was reduced without tracking")
        c = self.member_coords(x)
        if c is None:
            return None
        out = [TruncSeries.zero(self.host.prec) for _ in range(self.ngens)]
        for cj, trk in zip(c, self.tracks):
            for i in range(self.ngens):
                out[i] = out[i] + cj.mul_sharp(trk[i], cap=self.host.prec)
        return out

    def __repr__(self):
        return f"Lattice(rank={self.rank}, pivots={self.pivots})"


def _coerce_vec(lat, x):
    if isinstance(x, ModuleElement):
        if x.host is not lat.host:
            raise HostMismatch("element does not live in the lattice's module")
        return x.coords
    return tuple(x)


# -- core reduction ----------------------------------------------------

def _reduce_vectors(vectors, dim, prec, tracks=None):
    """Hermite reduction of raw series vectors.

    Returns (basis, pivots, out_tracks, zero_tracks).  When *tracks* is
    given, each work vector carries a companion coefficient vector which
    undergoes the same operations; tracks of vectors that reduce to zero
    are collected (they encode relations among the generators).
    """
    work = [list(v) for v in vectors]
    wtr = [list(t) for t in tracks] if tracks is not None else None
    basis, pivots, btr, zero_tracks = [], [], [], []

    def scale_vec(vec, s):
        for i in range(len(vec)):
            vec[i] = s.mul_sharp(vec[i], cap=prec)

    def sub_scaled(dst, q, src):
        for i in range(len(dst)):
            dst[i] = dst[i] - q.mul_sharp(src[i], cap=prec)

    while True:
        # drop decided-zero vectors, keeping their tracks
        alive = []
        for idx, vec in enumerate(work):
            nonzero = False
            for e in vec:
                if not e.decided_zero("lattice generator entry"):
                    nonzero = True
                    break
            if nonzero:
                alive.append(idx)
            elif wtr is not None:
                zero_tracks.append(tuple(wtr[idx]))
        work = [work[i] for i in alive]
        if wtr is not None:
            wtr = [wtr[i] for i in alive]
        if not work:
            break

        # pick the pivot: minimal (valuation, coordinate, generator index)
        best = None
        for idx, vec in enumerate(work):
            for coord in range(dim):
                v = vec[coord].known_valuation()
                if v is None:
                    continue
                key = (v, coord, idx)
                if best is None or key < best:
                    best = key
        v, coord, idx = best
        g = work.pop(idx)
        gt = wtr.pop(idx) if wtr is not None else None

        unit = g[coord].divide_bpow(v)
        uinv = unit.invert()
        scale_vec(g, uinv)
        if gt is not None:
            scale_vec(gt, uinv)
        g[coord] = TruncSeries.b_power(v, g[coord].prec)

        # eliminate the pivot coordinate from every other vector
        for vec, tr in _pairs(work, wtr):
            entry = vec[coord]
            low, high = entry.split_at(v)
            if not low.is_zero_known():
                raise PrecisionExhausted(
                    "pivot minimality violated; cannot reduce exactly")
            if not high.is_zero_known():
                sub_scaled(vec, high, g)
                if tr is not None:
                    sub_scaled(tr, high, gt)
            vec[coord] = TruncSeries.zero(vec[coord].prec)
        for bvec, btrk, (bp, bv) in zip(basis, btr if wtr is not None else basis, pivots):
            entry = bvec[coord]
            low, high = entry.split_at(v)
            if not high.is_zero_known():
                sub_scaled(bvec, high, g)
                if wtr is not None:
                    sub_scaled(btrk, high, gt)
                bvec[coord] = low
        basis.append(g)
        if wtr is not None:
            btr.append(gt)
        pivots.append((coord, v))

    out_tracks = [tuple(t) for t in btr] if tracks is not None else None
    return ([tuple(b) for b in basis], pivots, out_tracks, zero_tracks)


def _pairs(vectors, tracks):
    if tracks is None:
        return [(v, None) for v in vectors]
    return list(zip(vectors, tracks))


def lattice_reduce(gens, host=None, track=False) -> Lattice:
    """Valuation-pivot normal form of the span of the generators."""
    elems = list(gens)
    if host is None:
        if not elems:
            raise ValueError("empty generator list needs an explicit host")
        host = elems[0].host
    vectors = []
    for g in elems:
        if isinstance(g, ModuleElement):
            if g.host is not host:
                raise HostMismatch("generators live in different modules")
            vectors.append(g.coords)
        else:
            vectors.append(tuple(g))
    tracks = None
    if track:
        n = len(vectors)
        tracks = [tuple(TruncSeries.constant(int(i == j), host.prec)
                        for j in range(n)) for i in range(n)]
    basis, pivots, out_tracks, _ = _reduce_vectors(
        vectors, host.rank, host.prec, tracks)
    return Lattice(host, basis, pivots, out_tracks, len(vectors))


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    if a.host is not b.host:
        raise HostMismatch("lattices in different modules")
    return lattice_reduce(list(a.basis_elements()) + list(b.basis_elements()),
                          host=a.host)


def full_lattice(host: AbModule) -> Lattice:
    return lattice_reduce(host.basis_elements(), host=host)


def zero_lattice(host: AbModule) -> Lattice:
    return lattice_reduce([], host=host)


# -- normality and hulls -------------------------------------------------

def is_normal(lat: Lattice) -> bool:
    """Normal means L intersect b*host = b*L; equivalently all pivots have
    valuation zero."""
    return all(v == 0 for _, v in lat.pivots)


def normal_hull(lat: Lattice) -> Lattice:
    """Smallest normal sub-module containing the lattice.

    Computed by Smith reduction over the DVR: row operations are tracked as
    a running basis change of the host, and the hull is spanned by the new
    basis directions carrying the pure-power elementary divisors.
    """
    if lat.is_zero():
        return lat
    host = lat.host
    k = host.rank
    prec = host.prec
    r = len(lat.basis)
    # G[i][j] = coordinate i of generator j
    G = [[lat.basis[j][i] for j in range(r)] for i in range(k)]
    # F columns = current host basis expressed in original coordinates
    F = [[TruncSeries.constant(int(i == j), prec) for j in range(k)]
         for i in range(k)]
    done_rows, done_cols = set(), set()
    divisors = []  # (row index in F, valuation)

    while True:
        best = None
        for i in range(k):
            if i in done_rows:
                continue
            for j in range(r):
                if j in done_cols:
                    continue
                v = G[i][j].known_valuation()
                if v is None:
                    G[i][j].decided_zero("hull entry")
                    continue
                key = (v, i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        v, pi, pj = best
        unit = G[pi][pj].divide_bpow(v)
        uinv = unit.invert()
        for i in range(k):
            G[i][pj] = uinv.mul_sharp(G[i][pj], cap=prec)
        G[pi][pj] = TruncSeries.b_power(v, prec)
        # clear the pivot row (column operations; span preserved)
        for j in range(r):
            if j == pj:
                continue
            entry = G[pi][j]
            low, high = entry.split_at(v)
            if not low.is_zero_known():
                raise PrecisionExhausted("hull pivot was not minimal")
            if not high.is_zero_known():
                for i in range(k):
                    G[i][j] = G[i][j] - high.mul_sharp(G[i][pj], cap=prec)
            G[pi][j] = TruncSeries.zero(prec)
        # clear the pivot column (row operations; update F by the inverse op)
        for i in range(k):
            if i == pi:
                continue
            entry = G[i][pj]
            low, high = entry.split_at(v)
            if not low.is_zero_known():
                raise PrecisionExhausted("hull pivot was not minimal")
            if not high.is_zero_known():
                # row_i -= high * row_pi  on G; F gets col_pi += high * col_i
                for j in range(r):
                    G[i][j] = G[i][j] - high.mul_sharp(G[pi][j], cap=prec)
                for t in range(k):
                    F[t][pi] = F[t][pi] + high.mul_sharp(F[t][i], cap=prec)
            G[i][pj] = TruncSeries.zero(prec)
        done_rows.add(pi)
        done_cols.add(pj)
        divisors.append((pi, v))

    gens = []
    for (pi, v) in divisors:
        gens.append(ModuleElement(host, tuple(F[t][pi] for t in range(k))))
    return lattice_reduce(gens, host=host)


# -- sub-module structure and quotients ---------------------------------

class SubModule:
    """An a-stable lattice endowed with its own module structure."""

    __slots__ = ("lattice", "module")

    def __init__(self, lattice: Lattice, module: AbModule):
        self.lattice = lattice
        self.module = module

    def to_sub_coords(self, x) -> "ModuleElement | None":
        c = self.lattice.member_coords(x)
        if c is None:
            return None
        return self.module.element(c)

    def to_host(self, y: ModuleElement) -> ModuleElement:
        host = self.lattice.host
        acc = host.zero()
        for cj, g in zip(y.coords, self.lattice.basis_elements()):
            acc = acc + g.mul_series(cj)
        return acc


def sub_module_structure(lat: Lattice) -> SubModule:
    """Module structure on a lattice basis; requires a-stability."""
    if lat.is_zero():
        return SubModule(lat, AbModule([], prec=lat.host.prec))
    cols = []
    for g in lat.basis_elements():
        c = lat.member_coords(g.act_a())
        if c is None:
            raise NotAStable("lattice is not stable under the a-action")
        cols.append(c)
    r = len(cols)
    mat = [[cols[j][i] for j in range(r)] for i in range(r)]
    return SubModule(lat, AbModule(mat))


class Quotient:
    """Quotient of a module by a normal a-stable lattice."""

    __slots__ = ("module", "lattice", "complement", "_host")

    def __init__(self, module, lattice, complement, host):
        self.module = module
        self.lattice = lattice
        self.complement = complement
        self._host = host

    def project(self, x: ModuleElement) -> ModuleElement:
        return self.module.element(quot_project_raw(self, x))

    def lift(self, y: ModuleElement) -> ModuleElement:
        vec = [TruncSeries.zero(self._host.prec) for _ in range(self._host.rank)]
        for c, i in zip(y.coords, self.complement):
            vec[i] = c
        return ModuleElement(self._host, tuple(vec))

    def project_lattice(self, lat: Lattice) -> Lattice:
        return lattice_reduce([self.project(g) for g in lat.basis_elements()],
                              host=self.module)

    def preimage_lattice(self, lat: Lattice) -> Lattice:
        gens = [self.lift(g) for g in lat.basis_elements()]
        gens += self.lattice.basis_elements()
        return lattice_reduce(gens, host=self._host)


def quotient_module(host: AbModule, lat: Lattice) -> Quotient:
    """Quotient by a normal, a-stable lattice, with projection and section."""
    if lat.host is not host:
        raise HostMismatch("lattice does not live in the module")
    if not is_normal(lat):
        raise NotNormal("lattice has a pivot of positive valuation")
    for g in lat.basis_elements():
        if not lat.member(g.act_a()):
            raise NotAStable("lattice is not stable under the a-action")
    pivot_cols = {p for p, _ in lat.pivots}
    complement = [i for i in range(host.rank) if i not in pivot_cols]
    quot = Quotient(None, lat, complement, host)
    cols = []
    for i in complement:
        img = quot_project_raw(quot, host.basis(i).act_a())
        cols.append(img)
    r = len(complement)
    mat = [[cols[j][i] for j in range(r)] for i in range(r)]
    quot.module = AbModule(mat, prec=host.prec)
    return quot


def quot_project_raw(quot: Quotient, x: ModuleElement):
    vec = list(x.coords)
    for g, (p, v) in zip(quot.lattice.basis, quot.lattice.pivots):
        c = vec[p]
        if not c.is_zero_known():
            for i in range(len(vec)):
                vec[i] = vec[i] - c.mul_sharp(g[i], cap=quot._host.prec)
        vec[p] = TruncSeries.zero(vec[p].prec)
    return [vec[i] for i in quot.complement]


def kernel_of_series_map(rows, ncols, prec):
    """Kernel of a series matrix (list of row vectors) acting on R^ncols.

    Returns coordinate vectors spanning {w : M w = 0}, obtained as the
    tracked relations of the column reduction of M.
    """
    dim = len(rows)
    if dim == 0:
        return [tuple(TruncSeries.constant(int(i == j), prec)
                      for j in range(ncols)) for i in range(ncols)]
    columns = [tuple(rows[i][j] for i in range(dim)) for j in range(ncols)]
    tracks = [tuple(TruncSeries.constant(int(i == j), prec)
                    for j in range(ncols)) for i in range(ncols)]
    _, _, _, zero_tracks = _reduce_vectors(columns, dim, prec, tracks)
    return zero_tracks
