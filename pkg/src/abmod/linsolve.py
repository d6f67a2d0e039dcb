"""Incremental solver for homogeneous rational linear systems.

Unknowns are numbered parameters; linear forms are sparse dicts
{param: coefficient}.  Feeding an equation eliminates its highest-numbered
parameter in favour of the others, keeping all stored substitutions fully
reduced, so recursive order-by-order problems (kernel of a - lambda b,
equivariant maps into expansion modules) can introduce unknowns lazily and
let later consistency conditions cut earlier degrees of freedom.
"""

from __future__ import annotations

from fractions import Fraction


def form_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for p, c in b.items():
        v = out.get(p, Fraction(0)) + c
        if v:
            out[p] = v
        else:
            out.pop(p, None)
    return out


def form_scale(a: dict, c: Fraction) -> dict:
    if not c:
        return {}
    return {p: v * c for p, v in a.items()}


class ParamSolver:
    def __init__(self):
        self._subs: dict[int, dict[int, Fraction]] = {}
        self._tags: dict[int, int] = {}
        self._count = 0
        self.inconsistent = False

    def new_param(self, tag=0) -> int:
        p = self._count
        self._count += 1
        self._tags[p] = tag
        return p

    def new_params(self, n, tag=0):
        return [self.new_param(tag) for _ in range(n)]

    def tag(self, p: int) -> int:
        return self._tags[p]

    def reduce(self, form: dict) -> dict:
        out = {}
        for p, c in form.items():
            if not c:
                continue
            sub = self._subs.get(p)
            if sub is None:
                v = out.get(p, Fraction(0)) + c
                if v:
                    out[p] = v
                else:
                    out.pop(p, None)
            else:
                for q, d in sub.items():
                    v = out.get(q, Fraction(0)) + c * d
                    if v:
                        out[q] = v
                    else:
                        out.pop(q, None)
        return out

    def add_equation(self, form: dict):
        """Impose form == 0."""
        form = self.reduce(form)
        if not form:
            return
        pivot = max(form)
        c = form.pop(pivot)
        sub = {q: -v / c for q, v in form.items()}
        self._subs[pivot] = sub
        # keep every stored substitution independent of the pivot
        for q, g in self._subs.items():
            if q == pivot or pivot not in g:
                continue
            coeff = g.pop(pivot)
            for r, d in sub.items():
                v = g.get(r, Fraction(0)) + coeff * d
                if v:
                    g[r] = v
                else:
                    g.pop(r, None)

    def is_eliminated(self, p: int) -> bool:
        return p in self._subs

    def live_params(self, forms) -> list:
        seen = set()
        for f in forms:
            seen.update(self.reduce(f).keys())
        return sorted(seen)

    def evaluate(self, form: dict, assignment: dict) -> Fraction:
        acc = Fraction(0)
        for p, c in self.reduce(form).items():
            acc += c * assignment.get(p, Fraction(0))
        return acc
