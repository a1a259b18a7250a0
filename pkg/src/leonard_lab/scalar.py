"""Exact scalars: arbitrary-precision rationals and integers mod a prime.

Elements are immutable and canonical (reduced fractions, residues in
``0..p-1``), so ``==`` and ``hash`` agree with mathematical equality.
Plain Python ``int`` operands are promoted into the element's field, which
keeps numpy object-array sums (which start from ``0``) working.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero, FieldMismatch, InvalidFieldSpec, ParseError

RATIONALS = "rationals"
PRIME_FIELD = "prime_field"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind == RATIONALS:
            if self.modulus is not None:
                raise InvalidFieldSpec("the rational field takes no modulus")
        elif self.kind == PRIME_FIELD:
            if not isinstance(self.modulus, int) or not is_prime(self.modulus):
                raise InvalidFieldSpec(f"modulus {self.modulus!r} is not prime")
        else:
            raise InvalidFieldSpec(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(PRIME_FIELD, p)

    @property
    def is_prime_field(self) -> bool:
        return self.kind == PRIME_FIELD

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind == PRIME_FIELD else 0

    # constructors -------------------------------------------------------

    @property
    def zero(self) -> "FieldElement":
        return self.from_integer(0)

    @property
    def one(self) -> "FieldElement":
        return self.from_integer(1)

    def from_integer(self, n: int) -> "FieldElement":
        if self.kind == PRIME_FIELD:
            return FieldElement._make(self, n % self.modulus)
        return FieldElement._make(self, Fraction(n))

    def fraction(self, num: int, den: int = 1) -> "FieldElement":
        return self.from_integer(num) / self.from_integer(den)

    def __call__(self, value) -> "FieldElement":
        """Coerce an int, Fraction, numeric string or element into this field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element used in {self}")
            return value
        if isinstance(value, bool):
            raise ParseError("booleans are not field elements")
        if isinstance(value, int):
            return self.from_integer(value)
        if isinstance(value, Fraction):
            return self.fraction(value.numerator, value.denominator)
        if isinstance(value, str):
            return self.parse(value)
        raise ParseError(f"cannot coerce {value!r} into {self}")

    def elements(self):
        """All elements of a prime field in residue order."""
        if self.kind != PRIME_FIELD:
            raise InvalidFieldSpec("only finite fields can be enumerated")
        return [FieldElement._make(self, r) for r in range(self.modulus)]

    # serialization ------------------------------------------------------

    _SCALAR_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

    def parse(self, text: str) -> "FieldElement":
        m = self._SCALAR_RE.match(text)
        if not m:
            raise ParseError(f"malformed scalar {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        try:
            return self.fraction(num, den)
        except DivisionByZero:
            raise ParseError(f"{text!r} has a denominator divisible by {self.modulus}") from None

    def to_json(self):
        if self.kind == PRIME_FIELD:
            return {"field": {"p": self.modulus}}
        return {"field": "Q"}

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        value = obj.get("field") if isinstance(obj, dict) else obj
        if value == "Q":
            return cls.rationals()
        if isinstance(value, dict) and set(value) == {"p"} and isinstance(value["p"], int):
            return cls.prime(value["p"])
        raise InvalidFieldSpec(f"unrecognised field declaration {obj!r}")

    @classmethod
    def from_cli(cls, text: str) -> "FieldSpec":
        """Parse the ``Q`` / ``p=<prime>`` command-line form."""
        text = text.strip()
        if text in ("Q", "q", "QQ"):
            return cls.rationals()
        m = re.fullmatch(r"p\s*=\s*(\d+)", text)
        if not m:
            raise InvalidFieldSpec(f"expected 'Q' or 'p=<prime>', got {text!r}")
        return cls.prime(int(m.group(1)))

    def __str__(self):
        return "Q" if self.kind == RATIONALS else f"GF({self.modulus})"


Operand = Union["FieldElement", int]


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value):
        canonical = field(value)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", canonical.value)

    @classmethod
    def _make(cls, field, value):
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "value", value)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> "FieldElement | None":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} with {other.field}")
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.field.from_integer(other)
        return None

    def _new(self, value):
        if self.field.kind == PRIME_FIELD:
            value %= self.field.modulus
        return FieldElement._make(self.field, value)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(o.value - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._new(self.value * o.value)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def __pos__(self):
        return self

    def inv(self) -> "FieldElement":
        if not self.value:
            raise DivisionByZero(f"inverse of zero in {self.field}")
        if self.field.kind == PRIME_FIELD:
            return FieldElement._make(self.field, pow(self.value, -1, self.field.modulus))
        return FieldElement._make(self.field, 1 / self.value)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        if self.field.kind == PRIME_FIELD:
            return FieldElement._make(self.field, pow(self.value, n, self.field.modulus))
        return FieldElement._make(self.field, self.value**n)

    def is_zero(self) -> bool:
        return not self.value

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot compare {self.field} with {other.field}")
            return self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self == self.field.from_integer(other)
        return NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.field, self.value))

    def sort_key(self):
        """Deterministic total order: numeric for Q, residue order for GF(p)."""
        return self.value

    def serialize(self) -> str:
        if self.field.kind == PRIME_FIELD:
            return str(self.value)
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"

    def __str__(self):
        return self.serialize()

    def __repr__(self):
        return f"FieldElement({self.field}, {self.serialize()})"

    def __reduce__(self):
        return (_rebuild, (self.field, self.serialize()))


def _rebuild(field, text):
    return field.parse(text)


# module-level conveniences mirroring the arithmetic vocabulary


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def div(x: FieldElement, y: FieldElement) -> FieldElement:
    return x / y


def neg(x: FieldElement) -> FieldElement:
    return -x


def inv(x: FieldElement) -> FieldElement:
    return x.inv()


QQ = FieldSpec.rationals()
