"""Exact arithmetic in the dyadic cyclotomic ring Z[zeta, 1/2].

``zeta = exp(i*pi / 2**(a-1))`` is a primitive ``2**a``-th root of unity.  An
element is stored as integer coefficients over the negacyclic basis
``1, zeta, ..., zeta**(N-1)`` (``N = 2**(a-1)``, ``zeta**N = -1``) together with
a power-of-two denominator.

The scalar :class:`CycEntry` is the reference implementation.  The ``*_vec``
helpers at the bottom apply the same rules to numpy coefficient arrays whose
last axis holds the ``N`` basis coefficients; gate matrices are built on them.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

DEFAULT_ORDER_LOG2 = 3
MIN_ORDER_LOG2 = 2
MAX_ORDER_LOG2 = 8

# Coefficients above this stay in int64 arrays; larger values switch to object arrays.
INT64_SAFE = 1 << 62


class RingMismatchError(ValueError):
    """Operands live in rings of different order; lift them to a common ring first."""


def basis_size(order_log2: int) -> int:
    check_order(order_log2)
    return 1 << (order_log2 - 1)


def check_order(order_log2: int) -> None:
    if not MIN_ORDER_LOG2 <= order_log2 <= MAX_ORDER_LOG2:
        raise ValueError(
            f"ring order_log2 must lie in [{MIN_ORDER_LOG2}, {MAX_ORDER_LOG2}], got {order_log2}"
        )


def _trailing_zeros(v: int) -> int:
    return (v & -v).bit_length() - 1


def _reduce(coeffs: tuple[int, ...], k: int) -> tuple[tuple[int, ...], int]:
    acc = 0
    for c in coeffs:
        acc |= c
    if acc == 0:
        return coeffs, 0
    shift = min(_trailing_zeros(acc), k)
    if shift:
        coeffs = tuple(c >> shift for c in coeffs)
    return coeffs, k - shift


@dataclass(frozen=True)
class CycEntry:
    """Immutable element ``sum(coeffs[j] * zeta**j) / 2**denom_log2``.

    Construction always canonicalizes: the denominator is reduced until it is
    zero or some coefficient is odd, so equal values have equal fields.
    """

    order_log2: int
    coeffs: tuple[int, ...]
    denom_log2: int = 0

    def __post_init__(self) -> None:
        n = basis_size(self.order_log2)
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != n:
            raise ValueError(f"expected {n} coefficients for order_log2={self.order_log2}, got {len(coeffs)}")
        if self.denom_log2 < 0:
            raise ValueError("denom_log2 must be non-negative")
        coeffs, k = _reduce(coeffs, int(self.denom_log2))
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "denom_log2", k)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, value: int, order_log2: int = DEFAULT_ORDER_LOG2, denom_log2: int = 0) -> CycEntry:
        n = basis_size(order_log2)
        return cls(order_log2, (value,) + (0,) * (n - 1), denom_log2)

    @classmethod
    def zero(cls, order_log2: int = DEFAULT_ORDER_LOG2) -> CycEntry:
        return cls.from_int(0, order_log2)

    @classmethod
    def one(cls, order_log2: int = DEFAULT_ORDER_LOG2) -> CycEntry:
        return cls.from_int(1, order_log2)

    @classmethod
    def zeta(cls, power: int = 1, order_log2: int = DEFAULT_ORDER_LOG2) -> CycEntry:
        """``zeta**power``; any integer power, reduced modulo ``2**order_log2``."""
        n = basis_size(order_log2)
        power %= 2 * n
        sign = 1
        if power >= n:
            power -= n
            sign = -1
        coeffs = [0] * n
        coeffs[power] = sign
        return cls(order_log2, tuple(coeffs))

    @classmethod
    def inv_sqrt2(cls, order_log2: int = DEFAULT_ORDER_LOG2) -> CycEntry:
        """1/sqrt(2) = (zeta_8 - zeta_8**3) / 2; needs order_log2 >= 3."""
        if order_log2 < 3:
            raise ValueError("1/sqrt(2) is not in the ring for order_log2 < 3")
        base = cls(3, (0, 1, 0, -1), 1)
        return base.lift(order_log2)

    # -- arithmetic ---------------------------------------------------------

    @property
    def basis_size(self) -> int:
        return len(self.coeffs)

    def _coerce(self, other: object) -> CycEntry:
        if isinstance(other, CycEntry):
            if other.order_log2 != self.order_log2:
                raise RingMismatchError(
                    f"ring orders differ ({self.order_log2} vs {other.order_log2}); lift to a common ring"
                )
            return other
        if isinstance(other, int):
            return CycEntry.from_int(other, self.order_log2)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> CycEntry:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        k = max(self.denom_log2, y.denom_log2)
        sa, sb = k - self.denom_log2, k - y.denom_log2
        return CycEntry(self.order_log2, tuple((a << sa) + (b << sb) for a, b in zip(self.coeffs, y.coeffs)), k)

    __radd__ = __add__

    def __neg__(self) -> CycEntry:
        return CycEntry(self.order_log2, tuple(-c for c in self.coeffs), self.denom_log2)

    def __sub__(self, other: object) -> CycEntry:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self + (-y)

    def __rsub__(self, other: object) -> CycEntry:
        return (-self) + other

    def __mul__(self, other: object) -> CycEntry:
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        n = self.basis_size
        out = [0] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(y.coeffs):
                if not b:
                    continue
                r = i + j
                if r >= n:
                    out[r - n] -= a * b
                else:
                    out[r] += a * b
        return CycEntry(self.order_log2, tuple(out), self.denom_log2 + y.denom_log2)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> CycEntry:
        if exponent < 0:
            raise ValueError("negative powers are only defined for units; use conj() for roots of unity")
        result = CycEntry.one(self.order_log2)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def half(self, times: int = 1) -> CycEntry:
        return CycEntry(self.order_log2, self.coeffs, self.denom_log2 + times)

    def conj(self) -> CycEntry:
        # zeta**j -> zeta**(2N - j) = -zeta**(N - j)
        c = self.coeffs
        n = len(c)
        out = [c[0]] + [-c[n - j] for j in range(1, n)]
        return CycEntry(self.order_log2, tuple(out), self.denom_log2)

    def lift(self, new_order_log2: int) -> CycEntry:
        if new_order_log2 < self.order_log2:
            raise ValueError(f"cannot shrink ring from order_log2={self.order_log2} to {new_order_log2}")
        if new_order_log2 == self.order_log2:
            return self
        stride = 1 << (new_order_log2 - self.order_log2)
        out = [0] * basis_size(new_order_log2)
        for j, c in enumerate(self.coeffs):
            out[j * stride] = c
        return CycEntry(new_order_log2, tuple(out), self.denom_log2)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_real(self) -> bool:
        return self == self.conj()

    def root_of_unity_power(self) -> int | None:
        """Return ``t`` with ``self == zeta**t`` (0 <= t < 2**order_log2), else None."""
        if self.denom_log2:
            return None
        nz = [(j, c) for j, c in enumerate(self.coeffs) if c]
        if len(nz) != 1 or abs(nz[0][1]) != 1:
            return None
        j, c = nz[0]
        return j if c == 1 else j + self.basis_size

    def __complex__(self) -> complex:
        # Debug aid only; carries no exactness contract.
        n = self.basis_size
        z = cmath.exp(1j * cmath.pi / n)
        return sum(c * z**j for j, c in enumerate(self.coeffs)) / (1 << self.denom_log2)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "denom_log2": self.denom_log2}

    @classmethod
    def from_json(cls, data: dict, order_log2: int) -> CycEntry:
        return cls(order_log2, tuple(int(c) for c in data["coeffs"]), int(data["denom_log2"]))

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                terms.append(f"{c}")
            else:
                mono = "z" if j == 1 else f"z^{j}"
                terms.append(mono if c == 1 else "-" + mono if c == -1 else f"{c}{mono}")
        body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
        if self.denom_log2:
            return f"({body})/2^{self.denom_log2}" if len(terms) > 1 else f"{body}/2^{self.denom_log2}"
        return body


def add(x: CycEntry, y: CycEntry) -> CycEntry:
    return x + y


def mul(x: CycEntry, y: CycEntry) -> CycEntry:
    return x * y


def conj(x: CycEntry) -> CycEntry:
    return x.conj()


def lift(x: CycEntry, new_order_log2: int) -> CycEntry:
    return x.lift(new_order_log2)


def normalize(order_log2: int, coeffs: Iterable[int], denom_log2: int) -> CycEntry:
    return CycEntry(order_log2, tuple(coeffs), denom_log2)


def common_order(*entries: CycEntry) -> int:
    return max(e.order_log2 for e in entries)


# ---------------------------------------------------------------------------
# Vectorized helpers over coefficient arrays (last axis = basis coefficients).
# Every array is int64 when its magnitudes are safely bounded, otherwise an
# object array of Python ints; ``fit_dtype`` moves between the two.
# ---------------------------------------------------------------------------


def max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(max(int(arr.max()), -int(arr.min())))


def fit_dtype(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        if max_abs(arr) < INT64_SAFE:
            return arr.astype(np.int64)
        return arr
    return arr


def as_object(arr: np.ndarray) -> np.ndarray:
    return arr if arr.dtype == object else arr.astype(object)


def reduce_vec(arr: np.ndarray, k: int) -> tuple[np.ndarray, int]:
    """Strip the common power of two shared by every coefficient (at most ``k``)."""
    if arr.size == 0:
        return arr, 0
    acc = int(np.bitwise_or.reduce(arr.ravel()))
    if acc == 0:
        return arr, 0
    shift = min(_trailing_zeros(acc), k)
    if shift:
        arr = arr >> shift
    return arr, k - shift


def shift_up(arr: np.ndarray, bits: int) -> np.ndarray:
    """Multiply by ``2**bits`` without overflowing int64."""
    if bits == 0:
        return arr
    if arr.dtype != object and max_abs(arr) >= (INT64_SAFE >> bits):
        arr = arr.astype(object)
    return arr << bits


def add_vec(a: np.ndarray, ka: int, b: np.ndarray, kb: int) -> tuple[np.ndarray, int]:
    k = max(ka, kb)
    a = shift_up(a, k - ka)
    b = shift_up(b, k - kb)
    if a.dtype != object and b.dtype != object and max_abs(a) + max_abs(b) >= INT64_SAFE:
        a = a.astype(object)
    if a.dtype == object or b.dtype == object:
        a, b = as_object(a), as_object(b)
    out, k = reduce_vec(a + b, k)
    return fit_dtype(out), k


def conj_vec(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[-1]
    out = -arr[..., (n - np.arange(n)) % n]
    out[..., 0] = arr[..., 0]
    return out


def zeta_mul_vec(arr: np.ndarray, power: int) -> np.ndarray:
    """Multiply every element by ``zeta**power``."""
    n = arr.shape[-1]
    power %= 2 * n
    sign = 1
    if power >= n:
        power -= n
        sign = -1
    if power == 0:
        return arr.copy() if sign == 1 else -arr
    out = np.empty_like(arr)
    out[..., power:] = arr[..., : n - power]
    out[..., :power] = -arr[..., n - power :]
    return out if sign == 1 else -out


def lift_vec(arr: np.ndarray, order_log2: int, new_order_log2: int) -> np.ndarray:
    if new_order_log2 < order_log2:
        raise ValueError(f"cannot shrink ring from order_log2={order_log2} to {new_order_log2}")
    if new_order_log2 == order_log2:
        return arr
    stride = 1 << (new_order_log2 - order_log2)
    out = np.zeros(arr.shape[:-1] + (basis_size(new_order_log2),), dtype=arr.dtype)
    out[..., ::stride] = arr
    return out


@lru_cache(maxsize=None)
def _negacyclic_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    r = np.arange(n)[:, None]
    s = np.arange(n)[None, :]
    idx = (r - s) % n
    sign = np.where(r >= s, 1, -1).astype(np.int64)
    return idx, sign


def matmul_vec(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of ring-valued matrices ``a (d,e,N)`` and ``b (e,f,N)``.

    Each entry of ``a`` is expanded into its ``N x N`` multiplication matrix so
    the whole product becomes one integer matmul.
    """
    d, e, n = a.shape
    f = b.shape[1]
    idx, sign = _negacyclic_tables(n)
    bound = max_abs(a) * max_abs(b) * e * n
    use_object = a.dtype == object or b.dtype == object or bound >= INT64_SAFE
    if use_object:
        a, b = as_object(a), as_object(b)
        sign = sign.astype(object)
    big_a = (a[:, :, idx] * sign).transpose(0, 2, 1, 3).reshape(d * n, e * n)
    big_b = b.transpose(0, 2, 1).reshape(e * n, f)
    out = (big_a @ big_b).reshape(d, n, f).transpose(0, 2, 1)
    return fit_dtype(np.ascontiguousarray(out))


def entry_vec(entry: CycEntry) -> np.ndarray:
    return np.array(entry.coeffs, dtype=object if max(map(abs, entry.coeffs)) >= INT64_SAFE else np.int64)
