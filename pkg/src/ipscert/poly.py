"""Exact sparse multivariate polynomials over arbitrary-precision rationals.

A polynomial is a map from monomials to nonzero Fraction coefficients.  A
monomial is a tuple of (Var, exponent) pairs sorted by variable order with
all exponents positive; the empty tuple is the constant monomial.  Two
polynomials are equal iff their term maps are equal, so canonical form is
the equality test.  All values are immutable after construction and every
operation is a pure function, which makes sharing across workers safe.

Coefficients are fractions.Fraction, never floats: the certificate
constructions need the exact constants 1/2 and powers of two, and every
identity in this package is checked with tolerance-free equality.

Variables live in fixed namespaces with a structured integer/string index,
e.g. x1, u3, v_1_2_4, y_5_0, w_1_4_top.  The induced order (namespace,
index) is total and stable across runs, so serialized output is
reproducible byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

# Variable namespaces: problem inputs (x, u, z), gadget controls (y, w),
# split selectors (v), and verifier placeholders (fresh).
NAMESPACES = ("fresh", "u", "v", "w", "x", "y", "z")

# Dense-size guard: no operation may produce more than this many terms.
TERM_GUARD = 1 << 24


class ResourceLimitError(RuntimeError):
    """An operation would exceed the dense-size guard (2**24 terms)."""


class UnassignedVariableError(ValueError):
    """Evaluation is missing a value for a variable; names the variable."""


def _elem_key(e):
    # Ints sort before strings; within a kind, natural order.
    if isinstance(e, int):
        return (0, e, "")
    return (1, 0, str(e))


class Var:
    """An interned variable: namespace plus structured index tuple.

    Index elements are ints or short strings (e.g. ("w", (1, 4, "top"))).
    Instances are interned, so equality is cheap and hashing is precomputed.
    """

    __slots__ = ("ns", "idx", "name", "_key", "_hash")
    _cache: dict = {}

    def __new__(cls, ns: str, *idx):
        cache_key = (ns, idx)
        cached = cls._cache.get(cache_key)
        if cached is not None:
            return cached
        if ns not in NAMESPACES:
            raise ValueError(f"unknown variable namespace {ns!r}")
        if not idx:
            raise ValueError("variable index must be nonempty")
        for e in idx:
            if not isinstance(e, (int, str)):
                raise ValueError(f"bad index element {e!r} in {ns}{idx}")
        self = object.__new__(cls)
        self.ns = ns
        self.idx = idx
        if len(idx) == 1 and isinstance(idx[0], int):
            self.name = f"{ns}{idx[0]}"
        else:
            self.name = ns + "_" + "_".join(str(e) for e in idx)
        self._key = (ns, tuple(_elem_key(e) for e in idx))
        self._hash = hash(self._key)
        cls._cache[cache_key] = self
        return self

    def __repr__(self):
        return f"Var({self.name})"

    def __str__(self):
        return self.name

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Var) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key


def parse_var(name: str) -> Var:
    """Parse a variable name produced by Var.name back into a Var."""
    for ns in NAMESPACES:
        if not name.startswith(ns):
            continue
        rest = name[len(ns):]
        if rest.isdigit():
            return Var(ns, int(rest))
        if rest.startswith("_") and len(rest) > 1:
            parts = rest[1:].split("_")
            idx = tuple(int(p) if p.isdigit() or (p.startswith("-") and p[1:].isdigit()) else p
                        for p in parts)
            return Var(ns, *idx)
    raise ValueError(f"cannot parse variable name {name!r}")


# A monomial is a tuple of (Var, positive int exponent) pairs sorted by
# variable order; () is the constant monomial.
Monomial = tuple

CONST_MONO: Monomial = ()


def mono_from_pairs(pairs: Iterable[tuple]) -> Monomial:
    """Build a canonical monomial from (Var, exponent) pairs."""
    acc: dict = {}
    for v, e in pairs:
        acc[v] = acc.get(v, 0) + e
    items = [(v, e) for v, e in acc.items() if e != 0]
    for v, e in items:
        if e < 0:
            raise ValueError(f"negative exponent for {v}")
    items.sort(key=lambda ve: ve[0]._key)
    return tuple(items)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Product of two canonical monomials (merge of sorted pair lists)."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        va, ea = a[i]
        vb, eb = b[j]
        if va is vb or va._key == vb._key:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va._key < vb._key:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_key(m: Monomial):
    """Stable sort key for monomials (lex on the variable/exponent list)."""
    return tuple((v._key, e) for v, e in m)


def _coerce(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"coefficients must be exact rationals, got {type(value).__name__}")


class SparsePoly:
    """Immutable sparse polynomial: dict from Monomial to nonzero Fraction."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        t: dict = {}
        if terms:
            for m, c in terms.items():
                c = _coerce(c)
                if c:
                    t[m] = t.get(m, Fraction(0)) + c
                    if not t[m]:
                        del t[m]
        self._t = t

    @classmethod
    def _raw(cls, terms: dict) -> "SparsePoly":
        # Internal: terms already canonical, adopt without copying.
        self = object.__new__(cls)
        self._t = terms
        return self

    @classmethod
    def zero(cls) -> "SparsePoly":
        return cls._raw({})

    @classmethod
    def constant(cls, value) -> "SparsePoly":
        c = _coerce(value)
        return cls._raw({CONST_MONO: c} if c else {})

    @classmethod
    def variable(cls, v: Var) -> "SparsePoly":
        return cls._raw({((v, 1),): Fraction(1)})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._t)

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == SparsePoly.constant(other)._t
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"SparsePoly({format_poly(self)!r})"

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if len(self._t) + len(other._t) > TERM_GUARD:
            raise ResourceLimitError("sum would exceed the dense-size guard")
        out = dict(self._t)
        for m, c in other._t.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return SparsePoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._t, other._t
        if not a or not b:
            return SparsePoly.zero()
        if len(a) * len(b) > TERM_GUARD:
            raise ResourceLimitError(
                f"product projects to {len(a)}*{len(b)} terms, over the dense-size guard")
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                s = out.get(m)
                if s is None:
                    out[m] = ca * cb
                else:
                    s = s + ca * cb
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return SparsePoly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of a polynomial by zero")
        inv = Fraction(1, 1) / other
        return SparsePoly._raw({m: c * inv for m, c in self._t.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = SparsePoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def variables(self) -> tuple:
        seen = set()
        for m in self._t:
            for v, _ in m:
                seen.add(v)
        return tuple(sorted(seen, key=lambda v: v._key))

    def degree_in(self, v: Var) -> int:
        d = 0
        for m in self._t:
            for mv, e in m:
                if mv == v and e > d:
                    d = e
        return d

    def total_degree(self) -> int:
        if not self._t:
            return 0
        return max(sum(e for _, e in m) for m in self._t)

    def is_multilinear(self) -> bool:
        return all(e == 1 for m in self._t for _, e in m)

    def constant_term(self) -> Fraction:
        return self._t.get(CONST_MONO, Fraction(0))

    def evaluate(self, assignment: Mapping[Var, object]) -> Fraction:
        """Exact value at a total assignment of this polynomial's variables."""
        total = Fraction(0)
        for m, c in self._t.items():
            acc = c
            for v, e in m:
                if v not in assignment:
                    raise UnassignedVariableError(f"no value assigned to {v.name}")
                acc = acc * Fraction(assignment[v]) ** e
            total += acc
        return total

    def evaluate_mod(self, assignment: Mapping[Var, int], prime: int) -> int:
        """Value at an assignment over GF(prime); p/q maps to p * q^-1 mod prime."""
        total = 0
        for m, c in self._t.items():
            acc = frac_mod(c, prime)
            for v, e in m:
                if v not in assignment:
                    raise UnassignedVariableError(f"no value assigned to {v.name}")
                acc = acc * pow(assignment[v] % prime, e, prime) % prime
            total = (total + acc) % prime
        return total

    def restrict(self, v: Var, value) -> "SparsePoly":
        """Substitute a single variable by a rational constant."""
        value = Fraction(value)
        out: dict = {}
        for m, c in self._t.items():
            rest = []
            coeff = c
            for mv, e in m:
                if mv == v:
                    coeff = coeff * value ** e
                else:
                    rest.append((mv, e))
            if not coeff:
                continue
            key = tuple(rest)
            s = out.get(key)
            if s is None:
                out[key] = coeff
            else:
                s = s + coeff
                if s:
                    out[key] = s
                else:
                    del out[key]
        return SparsePoly._raw(out)

    def substitute(self, mapping: Mapping[Var, "SparsePoly"]) -> "SparsePoly":
        """Substitute variables by polynomials (unmapped variables unchanged)."""
        result = SparsePoly.zero()
        for m, c in self._t.items():
            term = SparsePoly.constant(c)
            for v, e in m:
                image = mapping.get(v)
                if image is None:
                    image = SparsePoly.variable(v)
                term = term * image ** e
            result = result + term
        return result

    def multilinear_reduce(self) -> "SparsePoly":
        """Clamp every exponent to 1; agrees with self on Boolean points."""
        out: dict = {}
        for m, c in self._t.items():
            key = tuple((v, 1) for v, _ in m)
            s = out.get(key)
            if s is None:
                out[key] = c
            else:
                s = s + c
                if s:
                    out[key] = s
                else:
                    del out[key]
        return SparsePoly._raw(out)


def _as_poly(x):
    if isinstance(x, SparsePoly):
        return x
    if isinstance(x, (int, Fraction)):
        return SparsePoly.constant(x)
    return NotImplemented


def arith(p: SparsePoly, q: SparsePoly, op: str) -> SparsePoly:
    """Exact ring arithmetic by operation name: add, sub, or mul."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def multilinear_reduce(p: SparsePoly) -> SparsePoly:
    return p.multilinear_reduce()


def frac_mod(q: Fraction, prime: int) -> int:
    """Transport p/q into GF(prime); errors if the denominator vanishes mod prime."""
    den = q.denominator % prime
    if den == 0:
        raise ZeroDivisionError(
            f"denominator {q.denominator} of constant {q} is divisible by prime {prime}")
    return q.numerator % prime * pow(den, -1, prime) % prime


def format_frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text: str) -> Fraction:
    return Fraction(text.strip())


def format_poly(p: SparsePoly) -> str:
    """Canonical text form: `p/q * v1^e1 * v2 + ...`, terms in monomial order."""
    if not p:
        return "0"
    parts = []
    for m in sorted(p._t, key=mono_key):
        toks = [format_frac(p._t[m])]
        for v, e in m:
            toks.append(v.name if e == 1 else f"{v.name}^{e}")
        parts.append(" * ".join(toks))
    return " + ".join(parts)


def parse_poly(text: str) -> SparsePoly:
    """Parse the canonical text form back into a polynomial."""
    text = text.strip()
    if text == "0":
        return SparsePoly.zero()
    terms: dict = {}
    for chunk in text.split(" + "):
        toks = [t.strip() for t in chunk.split("*")]
        coeff = parse_frac(toks[0])
        pairs = []
        for tok in toks[1:]:
            if "^" in tok:
                name, exp = tok.split("^")
                pairs.append((parse_var(name.strip()), int(exp)))
            else:
                pairs.append((parse_var(tok), 1))
        m = mono_from_pairs(pairs)
        terms[m] = terms.get(m, Fraction(0)) + coeff
    return SparsePoly(terms)


def boolean_axiom(v: Var) -> SparsePoly:
    """The Boolean axiom v^2 - v."""
    return SparsePoly({((v, 2),): Fraction(1), ((v, 1),): Fraction(-1)})
