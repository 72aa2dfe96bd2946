"""Extended naturals (with a single infinite value) and coefficient vectors.

Finite values are plain Python ``int``; the infinite count is the singleton
:data:`OMEGA`.  A :class:`Form` is a vector of such coefficients, one per
generator, read as ``c_1 X_1 + ... + c_k X_k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union


class _Omega:
    """The countably infinite count.  Compares greater than every int."""

    _instance: _Omega | None = None

    def __new__(cls) -> _Omega:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ω"

    def __reduce__(self):
        return (_Omega, ())

    def __hash__(self) -> int:
        return hash("omega")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        _check(other)
        return False

    def __le__(self, other) -> bool:
        _check(other)
        return other is self

    def __gt__(self, other) -> bool:
        _check(other)
        return other is not self

    def __ge__(self, other) -> bool:
        _check(other)
        return True

    def __add__(self, other) -> _Omega:
        _check(other)
        return self

    __radd__ = __add__

    def __mul__(self, other) -> ExtNat:
        return ext_mul(self, other)

    __rmul__ = __mul__


OMEGA = _Omega()

ExtNat = Union[int, _Omega]


def _check(a) -> None:
    if a is OMEGA:
        return
    if isinstance(a, bool) or not isinstance(a, int) or a < 0:
        raise TypeError(f"not an extended natural: {a!r}")


def is_ext_nat(a) -> bool:
    try:
        _check(a)
    except TypeError:
        return False
    return True


def ext_add(a: ExtNat, b: ExtNat) -> ExtNat:
    _check(a)
    _check(b)
    if a is OMEGA or b is OMEGA:
        return OMEGA
    return a + b


def ext_mul(s: ExtNat, a: ExtNat) -> ExtNat:
    _check(s)
    _check(a)
    if s == 0 or a == 0:
        return 0
    if s is OMEGA or a is OMEGA:
        return OMEGA
    return s * a


def parse_ext_nat(token: str) -> ExtNat:
    """``'w'`` or ``'ω'`` for the infinite count, otherwise a decimal natural."""
    if token in ("w", "ω"):
        return OMEGA
    if not token.isdigit():
        raise ValueError(f"malformed coefficient {token!r}")
    return int(token)


def format_ext_nat(a: ExtNat, ascii: bool = False) -> str:
    if a is OMEGA:
        return "w" if ascii else "ω"
    return str(a)


@dataclass(frozen=True)
class Form:
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        for c in coeffs:
            _check(c)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def of(cls, *coeffs: ExtNat) -> Form:
        return cls(coeffs)

    @classmethod
    def zero(cls, k: int) -> Form:
        return cls((0,) * k)

    @classmethod
    def unit(cls, k: int, i: int, coeff: ExtNat = 1) -> Form:
        c = [0] * k
        c[i] = coeff
        return cls(tuple(c))

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[ExtNat]:
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> ExtNat:
        return self.coeffs[i]

    def __add__(self, other: Form) -> Form:
        if not isinstance(other, Form):
            return NotImplemented
        if len(other) != len(self):
            raise ValueError(f"forms of different length: {self} + {other}")
        return Form(tuple(ext_add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, s: ExtNat) -> Form:
        return Form(tuple(ext_mul(s, a) for a in self.coeffs))

    def __rmul__(self, s: ExtNat) -> Form:
        return self.scale(s)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_finite(self) -> bool:
        return all(c is not OMEGA for c in self.coeffs)

    def __repr__(self) -> str:
        return "Form(" + ", ".join(format_ext_nat(c) for c in self.coeffs) + ")"

    def render(self, names: Sequence[str] | None = None, ascii: bool = False) -> str:
        """Human form such as ``2*x1 + w*x2``; the zero form renders as ``0``."""
        if names is None:
            names = [f"x{i + 1}" for i in range(len(self))]
        terms = [
            f"{format_ext_nat(c, ascii)}*{n}" for c, n in zip(self.coeffs, names) if c != 0
        ]
        return " + ".join(terms) if terms else "0"


def form_sum(fs: Iterable[Form], k: int | None = None) -> Form:
    """Componentwise sum.  ``k`` gives the length of the empty sum (default 2)."""
    fs = list(fs)
    if not fs:
        return Form.zero(2 if k is None else k)
    if k is not None and len(fs[0]) != k:
        raise ValueError(f"expected forms of length {k}, got {fs[0]}")
    total = fs[0]
    for f in fs[1:]:
        total = total + f
    return total


@dataclass(frozen=True)
class FamilySpec:
    """The countable family ``prefix[0], ..., prefix[p-1], tail, tail, ...``."""

    prefix: tuple
    tail: Form

    def __post_init__(self):
        prefix = tuple(self.prefix)
        k = len(self.tail)
        for f in prefix:
            if len(f) != k:
                raise ValueError(f"family element {f} has length {len(f)}, tail has {k}")
        object.__setattr__(self, "prefix", prefix)

    @property
    def k(self) -> int:
        return len(self.tail)

    def element(self, i: int) -> Form:
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def interval_sum(self, lo: int, hi: int) -> Form:
        """Sum of elements ``lo..hi`` inclusive (empty when ``hi < lo``)."""
        return form_sum((self.element(i) for i in range(lo, hi + 1)), self.k)


def family_sum(f: FamilySpec) -> Form:
    return form_sum(f.prefix, f.k) + f.tail.scale(OMEGA)
