"""Exact scalars: rationals and Gaussian rationals.

Every computation in this package runs over QQ or QQ(i); there is no floating
point anywhere.  Plain rationals are gmpy2.mpq values (with a pure-Python
fractions.Fraction fallback); Gaussian rationals get their own small class.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _mpq

    def rational(num=0, den=1):
        return _mpq(num, den)

    _RAT_TYPES = (type(_mpq(0)), int)
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _mpq

    def rational(num=0, den=1):
        return _mpq(num, den)

    _RAT_TYPES = (_mpq, int)

QQ = rational

ZERO = rational(0)
ONE = rational(1)


def is_rational(x) -> bool:
    return isinstance(x, _RAT_TYPES)


class GaussianRational:
    """A number re + im*i with exact rational re, im.

    Behaves like a builtin number: supports +,-,*,/ and mixes freely with int
    and plain rationals.  Hash and equality agree with the real value when
    im == 0, so dict keys stay consistent across scalar types.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", rational(re))
        object.__setattr__(self, "im", rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- structure ---------------------------------------------------------

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self):
        """re^2 + im^2, a rational >= 0, zero iff the value is zero."""
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if is_rational(x):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        c = o.conjugate()
        return GaussianRational(
            (self.re * c.re - self.im * c.im) / n,
            (self.re * c.im + self.im * c.re) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if is_rational(other):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


I = GaussianRational(0, 1)


def gaussian(re=0, im=0) -> GaussianRational:
    return GaussianRational(re, im)


def conjugate_scalar(x):
    """Complex conjugation; the identity on plain rationals."""
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def as_gaussian(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)


def real_imag(x):
    """Split any scalar into (re, im) rationals."""
    if isinstance(x, GaussianRational):
        return x.re, x.im
    return rational(x), ZERO


# -- field descriptors -----------------------------------------------------


class RationalField:
    """The field QQ, as a tiny descriptor object used where a field tag is needed."""

    name = "Q"
    zero = ZERO
    one = ONE

    @staticmethod
    def coerce(x):
        if isinstance(x, GaussianRational):
            if x.im:
                raise ValueError(f"{x} is not rational")
            return x.re
        return rational(x)

    @staticmethod
    def random(rng, bound=6):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, 4)
        return rational(num, den)


class GaussianRationalField:
    """The field QQ(i)."""

    name = "Q(i)"
    zero = GaussianRational(0)
    one = GaussianRational(1)

    @staticmethod
    def coerce(x):
        return as_gaussian(x)

    @staticmethod
    def random(rng, bound=6):
        return GaussianRational(RationalField.random(rng, bound), RationalField.random(rng, bound))


FIELD_Q = RationalField()
FIELD_QI = GaussianRationalField()


def field_by_name(name: str):
    if name in ("Q", "QQ", "rational"):
        return FIELD_Q
    if name in ("Q(i)", "QQ(i)", "gaussian"):
        return FIELD_QI
    raise ValueError(f"unknown field {name!r}")


# -- serialization ---------------------------------------------------------


def _format_rational(r) -> str:
    s = str(r)
    return s


def format_scalar(x) -> str:
    """Render a scalar as "p/q" or "p/q+r/s*i" (exact, parseable)."""
    if isinstance(x, GaussianRational):
        if not x.im:
            return _format_rational(x.re)
        if not x.re:
            return f"{_format_rational(x.im)}*i"
        im = _format_rational(x.im)
        sign = "+" if not im.startswith("-") else ""
        return f"{_format_rational(x.re)}{sign}{im}*i"
    return _format_rational(x)


def parse_scalar(s: str):
    """Inverse of format_scalar.  Returns a rational or a GaussianRational."""
    s = s.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar string")
    if s.endswith("*i") or s.endswith("i"):
        body = s[: -2] if s.endswith("*i") else s[:-1]
        # split off the imaginary tail: find the sign that separates re and im
        depth_start = 1 if body and body[0] in "+-" else 0
        split = -1
        for k in range(len(body) - 1, depth_start, -1):
            if body[k] in "+-" and body[k - 1] not in "+-/*":
                split = k
                break
        if split == -1:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:split], body[split:]
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
        return GaussianRational(_parse_rat(re_part), _parse_rat(im_part))
    return _parse_rat(s)


def _parse_rat(s: str):
    s = s.strip()
    if not s:
        return ZERO
    if s in ("+", "-"):
        s += "1"
    if "/" in s:
        num, den = s.split("/")
        return rational(int(num), int(den))
    return rational(int(s))
