"""Truncated power-series arithmetic over Z_p.

A :class:`LambdaSeries` models an element of the one-variable power series
ring over Z_p (the Iwasawa algebra of a rank-one group, under the usual
identification) at finite precision: coefficients are known mod p^N and
terms are known up to T^(D-1).  All equality statements are therefore
"equality at precision", and every operation records the precision of its
result as the minimum of its operands'.

The heavy lifting is :func:`weierstrass_prepare`, which factors a nonzero
series as p^mu * P(T) * U(T) with P monic distinguished of degree lambda
and U an invertible series.  The algorithm is classical Weierstrass
division by successive approximation, run entirely in Z/p^N -- exact and
deterministic, no floating point.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import InputError, PrecisionError, PrimeMismatchError
from .padics import check_prime, int_valuation

_MAX_PARSE_DEGREE = 512


@dataclass(frozen=True)
class LambdaSeries:
    """A power series known mod (p^coeff_precision, T^trunc_degree).

    ``coeffs`` is little-endian in T, has length ``trunc_degree``, and every
    entry is reduced into [0, p^coeff_precision).
    """

    prime: int
    coeff_precision: int  # N: coefficients known mod p^N
    trunc_degree: int     # D: terms known up to T^(D-1)
    coeffs: tuple

    def __post_init__(self):
        check_prime(self.prime)
        if self.coeff_precision < 1:
            raise InputError("coefficient precision must be >= 1")
        if self.trunc_degree < 1:
            raise InputError("truncation degree must be >= 1")
        if len(self.coeffs) != self.trunc_degree:
            raise InputError("coefficient list length must equal truncation degree")
        m = self.modulus
        if any(not (0 <= c < m) for c in self.coeffs):
            raise InputError("coefficients must be reduced into [0, p^N)")

    # -- construction ------------------------------------------------------

    @classmethod
    def make(cls, prime: int, coeffs: Sequence[int], precision: int,
             degree: Optional[int] = None) -> "LambdaSeries":
        """Build a series, reducing coefficients and zero-padding to ``degree``."""
        if degree is None:
            degree = max(len(coeffs), 1)
        m = prime ** precision
        reduced = [c % m for c in coeffs[:degree]]
        reduced.extend([0] * (degree - len(reduced)))
        return cls(prime, precision, degree, tuple(reduced))

    @classmethod
    def one(cls, prime: int, precision: int, degree: int) -> "LambdaSeries":
        return cls.make(prime, [1], precision, degree)

    @property
    def modulus(self) -> int:
        return self.prime ** self.coeff_precision

    # -- predicates and views ----------------------------------------------

    def is_zero(self) -> bool:
        """True when indistinguishable from zero at the declared precision."""
        return all(c == 0 for c in self.coeffs)

    def t_order(self) -> Optional[int]:
        """Index of the first coefficient nonzero at precision, or None."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def restrict(self, precision: int, degree: int) -> "LambdaSeries":
        """View at a coarser precision (never finer)."""
        if precision > self.coeff_precision or degree > self.trunc_degree:
            raise PrecisionError("cannot refine a series beyond its declared precision")
        return LambdaSeries.make(self.prime, self.coeffs, precision, degree)

    def agrees_with(self, other: "LambdaSeries") -> bool:
        """Equality at the shared precision (min N, min D)."""
        if self.prime != other.prime:
            return False
        n = min(self.coeff_precision, other.coeff_precision)
        d = min(self.trunc_degree, other.trunc_degree)
        m = self.prime ** n
        return all((self.coeffs[i] - other.coeffs[i]) % m == 0 for i in range(d))

    # -- arithmetic ----------------------------------------------------------

    def _common(self, other: "LambdaSeries"):
        if self.prime != other.prime:
            raise PrimeMismatchError("prime mismatch")
        n = min(self.coeff_precision, other.coeff_precision)
        d = min(self.trunc_degree, other.trunc_degree)
        return n, d, self.prime ** n

    def __add__(self, other: "LambdaSeries") -> "LambdaSeries":
        n, d, m = self._common(other)
        coeffs = [(self.coeffs[i] + other.coeffs[i]) % m for i in range(d)]
        return LambdaSeries(self.prime, n, d, tuple(coeffs))

    def __mul__(self, other: "LambdaSeries") -> "LambdaSeries":
        n, d, m = self._common(other)
        out = [0] * d
        for i, a in enumerate(self.coeffs[:d]):
            if a == 0:
                continue
            for j in range(d - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = (out[i + j] + a * b) % m
        return LambdaSeries(self.prime, n, d, tuple(out))

    def scale(self, c: int) -> "LambdaSeries":
        m = self.modulus
        return LambdaSeries(self.prime, self.coeff_precision, self.trunc_degree,
                            tuple((c * a) % m for a in self.coeffs))

    def shift_down(self, k: int) -> "LambdaSeries":
        """Divide by T^k; requires the first k coefficients to vanish at precision."""
        if k == 0:
            return self
        if any(self.coeffs[i] != 0 for i in range(k)):
            raise InputError("series not divisible by the requested T power")
        if self.trunc_degree - k < 1:
            raise PrecisionError("truncation degree exhausted by T-power division")
        return LambdaSeries(self.prime, self.coeff_precision, self.trunc_degree - k,
                            self.coeffs[k:])

    def divide_p_power(self, e: int) -> "LambdaSeries":
        """Divide by p^e, losing e digits of coefficient precision."""
        if e == 0:
            return self
        if e >= self.coeff_precision:
            raise PrecisionError("coefficient precision exhausted by p-power division")
        pe = self.prime ** e
        if any(c % pe for c in self.coeffs):
            raise InputError("series not divisible by the requested p power")
        return LambdaSeries(self.prime, self.coeff_precision - e, self.trunc_degree,
                            tuple(c // pe for c in self.coeffs))

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.prime, "N": self.coeff_precision,
                "D": self.trunc_degree, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, doc) -> "LambdaSeries":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            return cls.make(int(doc["p"]), [int(c) for c in doc["coeffs"]],
                            int(doc["N"]), int(doc["D"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed series document: {exc}") from None

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                t = "T" if i == 1 else f"T^{i}"
                terms.append(t if c == 1 else f"{c}*{t}")
        body = " + ".join(terms) if terms else "0"
        return f"{body}  (mod {self.prime}^{self.coeff_precision}, T^{self.trunc_degree})"


@dataclass(frozen=True)
class LeadingTerm:
    """Lowest-degree term alpha*T^k of a series nonzero at precision."""

    prime: int
    precision: int  # alpha is a residue mod p^precision
    alpha: int
    k: int

    @property
    def alpha_valuation(self) -> int:
        return int_valuation(self.alpha, self.prime)


@dataclass(frozen=True)
class WeierstrassForm:
    """Factorization g = p^mu * P(T) * U(T) at precision.

    ``distinguished_poly`` is little-endian of length lam+1, monic, with all
    lower coefficients divisible by p; ``unit`` has an invertible constant
    term.  Both are known mod p^precision where precision = N - mu.
    """

    prime: int
    precision: int
    mu: int
    lam: int
    distinguished_poly: tuple
    unit: LambdaSeries

    def __post_init__(self):
        if self.mu < 0 or self.lam < 0 or self.precision < 1:
            raise InputError("factorization exponents must be nonnegative")
        poly = self.distinguished_poly
        if len(poly) != self.lam + 1 or poly[-1] != 1:
            raise InputError("distinguished polynomial must be monic of degree lambda")
        if any(c % self.prime for c in poly[:-1]):
            raise InputError("distinguished polynomial has a unit coefficient "
                             "below the leading term")
        if self.unit.coeffs[0] % self.prime == 0:
            raise InputError("unit part has constant term divisible by p")

    def poly_series(self, degree: Optional[int] = None) -> LambdaSeries:
        if degree is None:
            degree = self.unit.trunc_degree
        return LambdaSeries.make(self.prime, self.distinguished_poly,
                                 self.precision, degree)

    def reconstruct(self) -> LambdaSeries:
        """p^mu * P * U, carrying precision (N, D) of the prepared input."""
        prod = self.poly_series() * self.unit
        m = self.prime ** (self.precision + self.mu)
        scaled = tuple((c * self.prime ** self.mu) % m for c in prod.coeffs)
        return LambdaSeries(self.prime, self.precision + self.mu,
                            prod.trunc_degree, scaled)

    def same_characteristic_element(self, other: "WeierstrassForm") -> bool:
        """Equality up to units: compare (mu, distinguished_poly) at shared precision.

        Characteristic elements are only defined modulo invertible series,
        so the unit part is deliberately ignored.
        """
        if self.prime != other.prime:
            return False
        if self.mu != other.mu or self.lam != other.lam:
            return False
        m = self.prime ** min(self.precision, other.precision)
        return all((a - b) % m == 0 for a, b in
                   zip(self.distinguished_poly, other.distinguished_poly))


def _invert_unit(u: LambdaSeries) -> LambdaSeries:
    """Inverse of a series with invertible constant term, mod (p^N, T^D)."""
    m = u.modulus
    if u.coeffs[0] % u.prime == 0:
        raise InputError("series is not a unit: constant term divisible by p")
    inv0 = pow(u.coeffs[0], -1, m)
    d = u.trunc_degree
    out = [0] * d
    out[0] = inv0
    for k in range(1, d):
        acc = 0
        for j in range(1, k + 1):
            if u.coeffs[j]:
                acc = (acc + u.coeffs[j] * out[k - j]) % m
        out[k] = (-inv0 * acc) % m
    return LambdaSeries(u.prime, u.coeff_precision, d, tuple(out))


def min_coeff_valuation(g: LambdaSeries) -> int:
    """min_i v_p(c_i) over stored coefficients; requires g nonzero at precision."""
    best = None
    for c in g.coeffs:
        if c == 0:
            continue
        v = int_valuation(c, g.prime)
        if best is None or v < best:
            best = v
            if best == 0:
                break
    if best is None:
        raise PrecisionError("indistinguishable from zero at precision")
    return best


def weierstrass_prepare(g: LambdaSeries) -> WeierstrassForm:
    """Factor g = p^mu * P * U with P monic distinguished and U a unit.

    mu is the minimum p-valuation of the stored coefficients and lambda the
    index of the first unit coefficient of g / p^mu.  Division of T^lambda
    by g / p^mu converges in at most N steps because each correction gains
    a factor of p; the remainder r gives P = T^lambda - r and U is the
    inverse of the quotient.
    """
    p = g.prime
    mu = min_coeff_valuation(g)
    h = g.divide_p_power(mu)
    n, d, m = h.coeff_precision, h.trunc_degree, h.modulus

    lam = None
    for i, c in enumerate(h.coeffs):
        if c % p != 0:
            lam = i
            break
    if lam is None:
        # Unreachable when mu is the min over stored coefficients (the min
        # is attained in range); kept as a guard for hand-built inputs.
        raise PrecisionError("λ exceeds truncation degree")

    # Divide T^lam by h = h_low + T^lam * h_high (h_low = 0 mod p).
    h_high = LambdaSeries(p, n, d, tuple(h.coeffs[lam:]) + (0,) * lam)
    h_high_inv = _invert_unit(h_high)
    quotient = [0] * d
    s = [0] * d
    s[lam] = 1
    for _ in range(n + 1):
        if all(c == 0 for c in s[lam:]):
            break
        s_high = LambdaSeries(p, n, d, tuple(s[lam:]) + (0,) * lam)
        dq = s_high * h_high_inv
        for i in range(d):
            quotient[i] = (quotient[i] + dq.coeffs[i]) % m
        # s -= dq * h
        sub = dq * h
        for i in range(d):
            s[i] = (s[i] - sub.coeffs[i]) % m
    remainder = s  # degree < lam at precision

    poly = [(-remainder[i]) % m for i in range(lam)] + [1]
    q_series = LambdaSeries(p, n, d, tuple(quotient))
    unit = _invert_unit(q_series)
    return WeierstrassForm(p, n, mu, lam, tuple(poly), unit)


def leading_term(g: LambdaSeries) -> LeadingTerm:
    """Lowest term alpha*T^k with alpha nonzero at precision."""
    k = g.t_order()
    if k is None:
        raise PrecisionError("indistinguishable from zero at precision")
    return LeadingTerm(g.prime, g.coeff_precision, g.coeffs[k], k)


def mu_lambda(g: LambdaSeries):
    """The classical (mu, lambda) invariants, via preparation."""
    form = weierstrass_prepare(g)
    return form.mu, form.lam


# -- compact polynomial notation ---------------------------------------------


def _poly_add(a: List[int], b: List[int]) -> List[int]:
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    if len(a) + len(b) - 1 > _MAX_PARSE_DEGREE:
        raise InputError(f"polynomial degree exceeds parser cap {_MAX_PARSE_DEGREE}")
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, e in enumerate(b):
                out[i + j] += c * e
    return out


def polynomial_from_text(text: str) -> List[int]:
    """Parse an integer polynomial in T.

    Supports integer literals, the variable T, parentheses, unary minus,
    and the operators + - * ^.  Used for compact generators in JSON files,
    e.g. "T^2" or "T*(T-7)".
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError:
        raise InputError(f"cannot parse polynomial {text!r}") from None

    def ev(node) -> List[int]:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return [node.value]
        if isinstance(node, ast.Name) and node.id in ("T", "t"):
            return [0, 1]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = ev(node.operand)
            return [-c for c in inner] if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return _poly_add(ev(node.left), ev(node.right))
            if isinstance(node.op, ast.Sub):
                return _poly_add(ev(node.left), [-c for c in ev(node.right)])
            if isinstance(node.op, ast.Mult):
                return _poly_mul(ev(node.left), ev(node.right))
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)
                        and 0 <= exp.value <= _MAX_PARSE_DEGREE):
                    raise InputError(f"unsupported exponent in polynomial {text!r}")
                base = ev(node.left)
                out = [1]
                for _ in range(exp.value):
                    out = _poly_mul(out, base)
                return out
        raise InputError(f"unsupported expression in polynomial {text!r}")

    return ev(tree.body)


def series_from_text(prime: int, text: str, precision: int, degree: int) -> LambdaSeries:
    """Read a polynomial string as a series at the given (N, D) precision."""
    poly = polynomial_from_text(text)
    if len(poly) > degree:
        raise InputError("polynomial degree exceeds truncation degree")
    return LambdaSeries.make(prime, poly, precision, degree)
