"""Exact algebra of finitely supported and periodic real sequences.

Two carriers are provided.  :class:`FinSeq` stores a finitely supported
bi-infinite sequence as an offset plus a coefficient block, trimmed so
that the first and last stored entries are nonzero.  :class:`PeriodicSeq`
stores one period of an N-periodic sequence; all indexing is modulo N.

The free functions (:func:`convolve`, :func:`upsample2`,
:func:`downsample2`, the norms, :func:`max_abs_diff`, :func:`k_const`)
accept either carrier where that makes sense.  Convolution is linear for
two finite sequences and cyclic when a finite filter meets a periodic
signal.  All values are immutable; every operation returns a new object.
"""

from __future__ import annotations

import numpy as np

from .errors import BadParamsError, OddPeriodError

# Magnitudes below this are flushed to exact zero on construction to keep
# denormals out of canonical trimming.
_FLUSH = 1e-300


def _clean(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float).copy()
    if arr.ndim != 1:
        raise BadParamsError("sequence values must be one-dimensional")
    arr[np.abs(arr) < _FLUSH] = 0.0
    return arr


class FinSeq:
    """Finitely supported real sequence on the integers.

    Parameters
    ----------
    coeffs : array_like
        Consecutive coefficients starting at ``offset``.  Leading and
        trailing zeros are trimmed; interior zeros are kept.
    offset : int
        Index of the first entry of ``coeffs``.

    Notes
    -----
    The support of a nonempty sequence is ``[offset, offset + len - 1]``
    and both endpoints hold nonzero values.  The empty sequence is the
    zero sequence.
    """

    __slots__ = ("offset", "coeffs")

    def __init__(self, coeffs=(), offset: int = 0):
        arr = _clean(coeffs)
        nz = np.nonzero(arr)[0]
        if nz.size == 0:
            arr = arr[:0]
        else:
            offset += int(nz[0])
            arr = arr[nz[0]: nz[-1] + 1]
        arr.setflags(write=False)
        object.__setattr__(self, "offset", int(offset) if arr.size else 0)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FinSeq is immutable")

    def __len__(self) -> int:
        return self.coeffs.size

    @property
    def is_empty(self) -> bool:
        return self.coeffs.size == 0

    @property
    def support(self):
        """(lo, hi) index pair, or None for the zero sequence."""
        if self.is_empty:
            return None
        return (self.offset, self.offset + len(self) - 1)

    def __getitem__(self, index: int) -> float:
        pos = index - self.offset
        if 0 <= pos < len(self):
            return float(self.coeffs[pos])
        return 0.0

    def indices(self) -> np.ndarray:
        return self.offset + np.arange(len(self))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinSeq):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.offset, self.coeffs.tobytes()))

    def __repr__(self):
        if self.is_empty:
            return "FinSeq([])"
        return f"FinSeq({self.coeffs.tolist()}, offset={self.offset})"


class PeriodicSeq:
    """N-periodic real sequence; ``values`` holds the period starting at 0."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = _clean(values)
        if arr.size < 1:
            raise BadParamsError("period must be at least 1")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("PeriodicSeq is immutable")

    @property
    def period(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, index: int) -> float:
        return float(self.values[index % self.period])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PeriodicSeq):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return f"PeriodicSeq({self.values.tolist()})"


def delta() -> FinSeq:
    """Kronecker delta: 1 at index 0."""
    return FinSeq([1.0], 0)


# ---------------------------------------------------------------------------
# arithmetic


def add(a, b):
    """Pointwise sum of two sequences of the same kind."""
    if isinstance(a, FinSeq) and isinstance(b, FinSeq):
        if a.is_empty:
            return b
        if b.is_empty:
            return a
        lo = min(a.offset, b.offset)
        hi = max(a.offset + len(a), b.offset + len(b))
        out = np.zeros(hi - lo)
        out[a.offset - lo: a.offset - lo + len(a)] += a.coeffs
        out[b.offset - lo: b.offset - lo + len(b)] += b.coeffs
        return FinSeq(out, lo)
    if isinstance(a, PeriodicSeq) and isinstance(b, PeriodicSeq):
        if a.period != b.period:
            raise BadParamsError("periods differ")
        return PeriodicSeq(a.values + b.values)
    raise BadParamsError("mixed sequence kinds")


def scale(c, factor: float):
    if isinstance(c, FinSeq):
        return FinSeq(c.coeffs * factor, c.offset)
    return PeriodicSeq(c.values * factor)


def subtract(a, b):
    return add(a, scale(b, -1.0))


# ---------------------------------------------------------------------------
# convolution and sampling-rate changes


def _cyclic_convolve(taps: np.ndarray, offset: int, values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values)
    for tap, j in zip(taps, range(offset, offset + taps.size)):
        out += tap * np.roll(values, j)
    return out


def convolve(a, b):
    """Convolution ``(a*b)_j = sum_i a_i b_{j-i}``.

    Linear for two :class:`FinSeq` operands (support is the Minkowski sum
    of the supports).  Cyclic when one operand is periodic: the finite
    filter wraps modulo the period and the result has the same period.
    """
    if isinstance(a, FinSeq) and isinstance(b, FinSeq):
        if a.is_empty or b.is_empty:
            return FinSeq()
        return FinSeq(np.convolve(a.coeffs, b.coeffs), a.offset + b.offset)
    if isinstance(a, FinSeq) and isinstance(b, PeriodicSeq):
        if a.is_empty:
            return PeriodicSeq(np.zeros(b.period))
        return PeriodicSeq(_cyclic_convolve(a.coeffs, a.offset, b.values))
    if isinstance(a, PeriodicSeq) and isinstance(b, FinSeq):
        return convolve(b, a)
    if isinstance(a, PeriodicSeq) and isinstance(b, PeriodicSeq):
        if a.period != b.period:
            raise BadParamsError("cyclic convolution needs equal periods")
        n = a.period
        idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
        return PeriodicSeq(a.values[idx] @ b.values)
    raise BadParamsError("unsupported operand kinds for convolve")


def upsample2(c):
    """Insert a zero after every entry: even output 2k holds c_k."""
    if isinstance(c, FinSeq):
        if c.is_empty:
            return FinSeq()
        up = np.zeros(2 * len(c) - 1)
        up[0::2] = c.coeffs
        return FinSeq(up, 2 * c.offset)
    up = np.zeros(2 * c.period)
    up[0::2] = c.values
    return PeriodicSeq(up)


def downsample2(c):
    """Keep even-indexed entries: output j holds c_{2j}.

    For a periodic sequence the period must be even (the result has
    period N/2); an odd period raises :class:`OddPeriodError`.
    """
    if isinstance(c, FinSeq):
        if c.is_empty:
            return FinSeq()
        first = c.offset if c.offset % 2 == 0 else c.offset + 1
        kept = c.coeffs[first - c.offset:: 2]
        return FinSeq(kept, first // 2)
    if c.period % 2 != 0:
        raise OddPeriodError(f"odd period {c.period}: cannot halve")
    return PeriodicSeq(c.values[0::2])


# ---------------------------------------------------------------------------
# norms and functionals


def _data(c) -> np.ndarray:
    return c.coeffs if isinstance(c, FinSeq) else c.values


def norm_l1(c) -> float:
    return float(np.abs(_data(c)).sum())


def norm_inf(c) -> float:
    d = _data(c)
    return float(np.abs(d).max()) if d.size else 0.0


def max_abs_diff(c, include_boundary: bool = True) -> float:
    """Largest absolute first difference ``sup_j |c_{j+1} - c_j|``.

    Periodic sequences wrap.  For a finite sequence the default views the
    sequence with implicit zeros outside its support, so the steps onto
    and off the support count; ``include_boundary=False`` restricts to
    differences between stored neighbours, which is the right reading
    when the sequence is a sampled window of a larger signal.
    """
    if isinstance(c, PeriodicSeq):
        if c.period == 1:
            return 0.0
        return float(np.abs(np.diff(np.append(c.values, c.values[0]))).max())
    if c.is_empty:
        return 0.0
    interior = float(np.abs(np.diff(c.coeffs)).max()) if len(c) > 1 else 0.0
    if not include_boundary:
        return interior
    return max(interior, abs(float(c.coeffs[0])), abs(float(c.coeffs[-1])))


def k_const(c: FinSeq) -> float:
    """Moment constant ``2 * sum_i |c_i| * |i|`` in the sequence's own frame.

    Masks and filters are stored centered (symmetry point at index 0), so
    the constant is well defined for them.
    """
    if not isinstance(c, FinSeq):
        raise BadParamsError("k_const needs a finitely supported sequence")
    if c.is_empty:
        return 0.0
    return float(2.0 * np.sum(np.abs(c.coeffs) * np.abs(c.indices())))


# ---------------------------------------------------------------------------
# CSV interchange


def write_sequence_csv(path, c) -> None:
    """Write ``index,value`` rows (FinSeq) or a period header plus values."""
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(c, PeriodicSeq):
            fh.write(f"# period={c.period}\n")
            for v in c.values:
                fh.write(f"{float(v)!r}\n")
        else:
            for i, v in zip(c.indices(), c.coeffs):
                fh.write(f"{int(i)},{float(v)!r}\n")


def read_sequence_csv(path):
    """Inverse of :func:`write_sequence_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if lines and lines[0].startswith("#"):
        header = lines[0].lstrip("#").strip()
        if not header.startswith("period="):
            raise BadParamsError(f"unrecognized sequence header: {header!r}")
        period = int(header.split("=", 1)[1])
        values = [float(ln) for ln in lines[1:]]
        if len(values) != period:
            raise BadParamsError(
                f"expected {period} values, found {len(values)}")
        return PeriodicSeq(values)
    pairs = []
    for ln in lines:
        idx, val = ln.split(",")
        pairs.append((int(idx), float(val)))
    if not pairs:
        return FinSeq()
    pairs.sort()
    lo = pairs[0][0]
    hi = pairs[-1][0]
    out = np.zeros(hi - lo + 1)
    for i, v in pairs:
        out[i - lo] = v
    return FinSeq(out, lo)
