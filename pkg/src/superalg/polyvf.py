"""Superpolynomials and polynomial super vector fields.

Coordinates are named, each with a parity and an optional positive integer
degree (used for graded prolongations, where a coordinate dual to a basis
vector of degree -d has degree d).  Odd coordinates anticommute and square to
zero; derivatives are left derivatives, so moving d/dθ past an odd factor
costs a sign.

A monomial is a tuple of (var_index, exponent) pairs sorted by index.  A
Polynomial maps monomials to scalars; a VectorField maps each coordinate index
to the polynomial coefficient of its partial derivative.
"""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Tuple

from .scalars import FIELD_Q, ZERO

Monomial = Tuple[Tuple[int, int], ...]

ONE_MONO: Monomial = ()


class Coords:
    """A coordinate system: names with parities, optional degrees and a field."""

    def __init__(self, names, parities, degrees=None, field=FIELD_Q):
        self.names = list(names)
        self.parities = list(parities)
        if len(self.names) != len(self.parities):
            raise ValueError("names and parities length mismatch")
        self.degrees = list(degrees) if degrees is not None else None
        if self.degrees is not None and len(self.degrees) != len(self.names):
            raise ValueError("degrees length mismatch")
        self.field = field
        self.index = {n: k for k, n in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate coordinate names")

    def __len__(self):
        return len(self.names)

    def parity(self, k):
        return self.parities[k]

    def degree(self, k):
        return self.degrees[k] if self.degrees is not None else 1

    def var(self, name_or_index) -> "Polynomial":
        k = name_or_index if isinstance(name_or_index, int) else self.index[name_or_index]
        return Polynomial(self, {((k, 1),): self.field.one})

    def one(self) -> "Polynomial":
        return Polynomial(self, {ONE_MONO: self.field.one})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def __repr__(self):
        return f"Coords({self.names!r})"


def mono_parity(mono: Monomial, coords: Coords) -> int:
    return sum(coords.parities[v] * e for v, e in mono) % 2


def mono_degree(mono: Monomial, coords: Coords) -> int:
    return sum(coords.degree(v) * e for v, e in mono)


def mono_str(mono: Monomial, coords: Coords) -> str:
    if not mono:
        return "1"
    parts = []
    for v, e in mono:
        n = coords.names[v]
        parts.append(n if e == 1 else f"{n}^{e}")
    return "*".join(parts)


def _mono_mul(m1: Monomial, m2: Monomial, coords: Coords):
    """Multiply canonical monomials; returns (monomial, sign) or None if zero."""
    odd1 = [v for v, e in m1 if coords.parities[v]]
    odd2 = [v for v, e in m2 if coords.parities[v]]
    if set(odd1) & set(odd2):
        return None
    sign = 1
    # count inversions between the odd word of m1 and that of m2
    for a in odd1:
        for b in odd2:
            if a > b:
                sign = -sign
    merged: Dict[int, int] = {}
    for v, e in m1:
        merged[v] = merged.get(v, 0) + e
    for v, e in m2:
        merged[v] = merged.get(v, 0) + e
    mono = tuple(sorted(merged.items()))
    return mono, sign


class Polynomial:
    __slots__ = ("coords", "terms")

    def __init__(self, coords: Coords, terms: Optional[Dict[Monomial, object]] = None):
        self.coords = coords
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coords is other.coords and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def copy(self):
        return Polynomial(self.coords, dict(self.terms))

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            nv = out.get(m, ZERO) + c
            if nv:
                out[m] = nv
            elif m in out:
                del out[m]
        return Polynomial(self.coords, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Polynomial(self.coords, {m: -c for m, c in self.terms.items()})

    def scale(self, s):
        if not s:
            return Polynomial(self.coords, {})
        return Polynomial(self.coords, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = _mono_mul(m1, m2, self.coords)
                if r is None:
                    continue
                mono, sign = r
                c = c1 * c2
                if sign < 0:
                    c = -c
                nv = out.get(mono, ZERO) + c
                if nv:
                    out[mono] = nv
                elif mono in out:
                    del out[mono]
        return Polynomial(self.coords, out)

    def __rmul__(self, other):
        return self.scale(other)

    def deriv(self, var: int) -> "Polynomial":
        """Left partial derivative with respect to coordinate var."""
        coords = self.coords
        odd_var = coords.parities[var] == 1
        out: Dict[Monomial, object] = {}
        for mono, c in self.terms.items():
            entry = None
            for v, e in mono:
                if v == var:
                    entry = (v, e)
                    break
            if entry is None:
                continue
            if odd_var:
                sign = 1
                for v, e in mono:
                    if v >= var:
                        break
                    if coords.parities[v]:
                        sign = -sign
                new_mono = tuple((v, e) for v, e in mono if v != var)
                coef = c if sign > 0 else -c
            else:
                e = entry[1]
                coef = c * e
                if e == 1:
                    new_mono = tuple((v, ee) for v, ee in mono if v != var)
                else:
                    new_mono = tuple((v, ee if v != var else ee - 1) for v, ee in mono)
            nv = out.get(new_mono, ZERO) + coef
            if nv:
                out[new_mono] = nv
            elif new_mono in out:
                del out[new_mono]
        return Polynomial(coords, out)

    def parity(self):
        """Parity if homogeneous, raises otherwise (None for the zero polynomial)."""
        ps = {mono_parity(m, self.coords) for m in self.terms}
        if not ps:
            return None
        if len(ps) > 1:
            raise ValueError(f"non-homogeneous polynomial: {self}")
        return ps.pop()

    def degree(self):
        ds = {mono_degree(m, self.coords) for m in self.terms}
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"non-homogeneous polynomial: {self}")
        return ds.pop()

    def constant_term(self):
        return self.terms.get(ONE_MONO, ZERO)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            parts.append(f"({self.terms[m]})*{mono_str(m, self.coords)}")
        return " + ".join(parts)

    __repr__ = __str__


def monomials_of_degree(coords: Coords, d: int):
    """All canonical monomials of graded degree d, lexicographic order."""
    out = []

    def rec(start, remaining, current):
        if remaining == 0:
            out.append(tuple(current))
            return
        for v in range(start, len(coords)):
            dv = coords.degree(v)
            if dv > remaining:
                continue
            if coords.parities[v]:
                current.append((v, 1))
                rec(v + 1, remaining - dv, current)
                current.pop()
            else:
                e = 1
                while e * dv <= remaining:
                    current.append((v, e))
                    rec(v + 1, remaining - e * dv, current)
                    current.pop()
                    e += 1

    if d == 0:
        return [ONE_MONO]
    if d < 0:
        return []
    rec(0, d, [])
    return sorted(out)


class VectorField:
    """X = sum_a f_a d/dx_a with polynomial coefficients f_a."""

    __slots__ = ("coords", "coeffs")

    def __init__(self, coords: Coords, coeffs: Optional[Dict[int, Polynomial]] = None):
        self.coords = coords
        self.coeffs = {v: p for v, p in (coeffs or {}).items() if p}

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.coords is other.coords and self.coeffs == other.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for v, p in other.coeffs.items():
            q = out.get(v)
            out[v] = p if q is None else q + p
        return VectorField(self.coords, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return VectorField(self.coords, {v: -p for v, p in self.coeffs.items()})

    def scale(self, s):
        return VectorField(self.coords, {v: p.scale(s) for v, p in self.coeffs.items()})

    def apply(self, poly: Polynomial) -> Polynomial:
        out = self.coords.zero()
        for v, f in self.coeffs.items():
            d = poly.deriv(v)
            if d:
                out = out + f * d
        return out

    def parity(self):
        ps = set()
        for v, f in self.coeffs.items():
            for m in f.terms:
                ps.add((mono_parity(m, self.coords) + self.coords.parities[v]) % 2)
        if not ps:
            return None
        if len(ps) > 1:
            raise ValueError("non-homogeneous vector field")
        return ps.pop()

    def degree(self):
        ds = set()
        for v, f in self.coeffs.items():
            for m in f.terms:
                ds.add(mono_degree(m, self.coords) - self.coords.degree(v))
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"non-homogeneous vector field: {self}")
        return ds.pop()

    def bracket(self, other: "VectorField") -> "VectorField":
        """[X, Y] = X Y - (-1)^{p(X)p(Y)} Y X as superderivations."""
        px = self.parity()
        py = other.parity()
        if px is None or py is None:
            if px is None and py is None:
                return VectorField(self.coords)
            # zero field on either side
            return VectorField(self.coords)
        sign = -1 if (px and py) else 1
        out: Dict[int, Polynomial] = {}
        for v, g in other.coeffs.items():
            p = self.apply(g)
            if p:
                out[v] = out.get(v, self.coords.zero()) + p
        for v, f in self.coeffs.items():
            p = other.apply(f)
            if p:
                out[v] = out.get(v, self.coords.zero()) - p.scale(sign)
        return VectorField(self.coords, out)

    def coordinates(self, monomial_index: Dict[Tuple[int, Monomial], int], dim: int):
        """Flatten into a vector over an index (var, monomial) -> position."""
        vec = [ZERO] * dim
        for v, f in self.coeffs.items():
            for m, c in f.terms.items():
                vec[monomial_index[(v, m)]] = c
        return vec

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for v in sorted(self.coeffs):
            parts.append(f"({self.coeffs[v]})∂_{self.coords.names[v]}")
        return " + ".join(parts)

    __repr__ = __str__


def coordinate_field(coords: Coords, var, poly: Optional[Polynomial] = None) -> VectorField:
    k = var if isinstance(var, int) else coords.index[var]
    return VectorField(coords, {k: poly if poly is not None else coords.one()})


def fields_of_degree(coords: Coords, d: int):
    """Canonical basis of degree-d fields: monomial times coordinate derivative."""
    out = []
    for v in range(len(coords)):
        target = d + coords.degree(v)
        for m in monomials_of_degree(coords, target):
            out.append(VectorField(coords, {v: Polynomial(coords, {m: coords.field.one})}))
    return out


def field_basis_index(coords: Coords, d: int):
    """Index map (var, monomial) -> position matching fields_of_degree order."""
    index = {}
    pos = 0
    for v in range(len(coords)):
        target = d + coords.degree(v)
        for m in monomials_of_degree(coords, target):
            index[(v, m)] = pos
            pos += 1
    return index, pos


class OneForm:
    """omega = sum_a f_a dx_a with left polynomial coefficients."""

    __slots__ = ("coords", "coeffs", "dparity")

    def __init__(self, coords: Coords, coeffs: Dict[int, Polynomial]):
        self.coords = coords
        self.coeffs = {v: p for v, p in coeffs.items() if p}

    def parity(self):
        """d is odd, so dx_a has parity p(x_a) + 1."""
        ps = set()
        for v, f in self.coeffs.items():
            for m in f.terms:
                ps.add((mono_parity(m, self.coords) + self.coords.parities[v] + 1) % 2)
        if not ps:
            return None
        if len(ps) > 1:
            raise ValueError("non-homogeneous form")
        return ps.pop()

    def pair(self, field: VectorField) -> Polynomial:
        """iota_X omega with iota_X(f dx_a) = (-1)^{p(f)(p(X)+1)} f X(x_a).

        The normalization makes <df, X> = X(f); the inner derivation iota_X
        has parity p(X)+1 and passes left coefficients with a Koszul sign.
        """
        px = field.parity()
        if px is None:
            return self.coords.zero()
        q = (px + 1) % 2
        out = self.coords.zero()
        for v, f in self.coeffs.items():
            g = field.coeffs.get(v)
            if not g:
                continue
            adjusted = {
                m: (-c if (q and mono_parity(m, self.coords) % 2) else c)
                for m, c in f.terms.items()
            }
            out = out + Polynomial(self.coords, adjusted) * g
        return out

    def lie_derive(self, X: VectorField) -> "OneForm":
        """L_X omega via [L_X, iota_Y] = iota_{[X,Y]} on coordinate fields."""
        px = X.parity()
        if px is None:
            return OneForm(self.coords, {})
        out = {}
        for b in range(len(self.coords)):
            db = coordinate_field(self.coords, b)
            s = px * (self.coords.parities[b] + 1)
            sign = -1 if s % 2 else 1
            val = (X.apply(self.pair(db)) - self.pair(X.bracket(db))).scale(sign)
            if val:
                out[b] = val
        return OneForm(self.coords, out)
