"""Finite-alphabet probability model.

Pmfs, joint pmfs over 2- or 3-fold product alphabets, channels (row-stochastic
matrices), Markov-chain composition, i.i.d. product extension, and the
classical Shannon quantities used as asymptotic reference points.

Conventions:
  * symbols of an alphabet of size ``a`` are the integers ``0..a-1``;
  * all mass arrays are dense, row-major, and frozen after construction;
  * all entropies/divergences are in bits (log base 2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError, ResourceError

#: Hard ceiling on the number of dense cells any single mass array may have.
#: Product extensions refuse to materialize beyond this.
CELL_CAP = 2**24

#: Normalization tolerance on input validation.
MASS_ATOL = 1e-12

#: Relaxed tolerance for n-fold products, where rounding error accumulates.
PRODUCT_MASS_ATOL = 1e-9


def _validated_mass(mass, ndim: tuple[int, ...], sum_atol: float) -> np.ndarray:
    arr = np.asarray(mass, dtype=float)
    if arr.ndim not in ndim:
        raise InputError(f"mass array must have {ndim} axes, got {arr.ndim}")
    if arr.size == 0:
        raise InputError("mass array must be nonempty")
    if arr.size > CELL_CAP:
        raise ResourceError(f"mass array has {arr.size} cells, cap is {CELL_CAP}")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InputError("mass entries must be finite and nonnegative")
    total = float(arr.sum())
    if abs(total - 1.0) > sum_atol:
        raise InputError(f"mass must sum to 1 within {sum_atol:g}, got {total!r}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


class Pmf:
    """Probability mass function on the alphabet ``0..size-1``.

    Parameters
    ----------
    mass : array_like
        Nonnegative vector summing to 1 within ``sum_atol``.
    sum_atol : float
        Normalization tolerance (relaxed internally for product extensions).
    """

    def __init__(self, mass, *, sum_atol: float = MASS_ATOL):
        self.mass = _validated_mass(mass, (1,), sum_atol)

    @property
    def size(self) -> int:
        return self.mass.shape[0]

    def support(self) -> np.ndarray:
        """Indices of symbols with strictly positive mass."""
        return np.nonzero(self.mass > 0)[0]

    @classmethod
    def uniform(cls, size: int) -> "Pmf":
        if size < 1:
            raise InputError("alphabet size must be >= 1")
        return cls(np.full(size, 1.0 / size))

    def __repr__(self) -> str:
        return f"Pmf(size={self.size})"


class JointPmf:
    """Joint pmf over a Cartesian product of 2 or 3 alphabets.

    ``mass[x, y]`` (or ``mass[x, y, u]``) is dense and row-major; axis order
    is part of the contract for file I/O and marginalization.
    """

    def __init__(self, mass, *, sum_atol: float = MASS_ATOL):
        self.mass = _validated_mass(mass, (2, 3), sum_atol)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.mass.shape

    @property
    def ndim(self) -> int:
        return self.mass.ndim

    def __repr__(self) -> str:
        return f"JointPmf(shape={self.shape})"


class Channel:
    """Conditional pmf: one output distribution per input symbol.

    ``matrix[y, u]`` is the probability of output ``u`` given input ``y``;
    every row must be a valid pmf.
    """

    def __init__(self, matrix):
        arr = np.asarray(matrix, dtype=float)
        if arr.ndim != 2:
            raise InputError("channel matrix must be 2-D")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise InputError("channel entries must be finite and nonnegative")
        rows = arr.sum(axis=1)
        bad = np.nonzero(np.abs(rows - 1.0) > MASS_ATOL)[0]
        if bad.size:
            raise InputError(f"channel row {bad[0]} sums to {rows[bad[0]]!r}, not 1")
        arr = arr.copy()
        arr.flags.writeable = False
        self.matrix = arr

    @property
    def input_size(self) -> int:
        return self.matrix.shape[0]

    @property
    def output_size(self) -> int:
        return self.matrix.shape[1]

    @classmethod
    def identity(cls, size: int) -> "Channel":
        return cls(np.eye(size))

    @classmethod
    def constant(cls, input_size: int) -> "Channel":
        """Channel with a single output symbol (the trivial helper)."""
        return cls(np.ones((input_size, 1)))

    @classmethod
    def binary_symmetric(cls, flip: float) -> "Channel":
        if not 0.0 <= flip <= 1.0:
            raise InputError("flip probability must be in [0, 1]")
        return cls([[1.0 - flip, flip], [flip, 1.0 - flip]])

    def __repr__(self) -> str:
        return f"Channel({self.input_size}->{self.output_size})"


class SubPmf:
    """Sub-normalized nonnegative function dominated by a reference mass array.

    The smoothing object of the smooth quantities: ``0 <= mass <= reference``
    cellwise and total mass <= 1.
    """

    def __init__(self, mass, reference):
        ref = np.asarray(reference, dtype=float)
        arr = np.asarray(mass, dtype=float)
        if arr.shape != ref.shape:
            raise InputError("sub-pmf and reference shapes differ")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise InputError("sub-pmf entries must be finite and nonnegative")
        if np.any(arr > ref + 1e-12):
            raise InputError("sub-pmf exceeds its reference mass")
        total = float(arr.sum())
        if total > 1.0 + PRODUCT_MASS_ATOL:
            raise InputError(f"sub-pmf total mass {total!r} exceeds 1")
        arr = np.minimum(arr, ref)
        arr.flags.writeable = False
        ref = ref.copy()
        ref.flags.writeable = False
        self.mass = arr
        self.reference = ref

    @property
    def total(self) -> float:
        return float(self.mass.sum())

    def __repr__(self) -> str:
        return f"SubPmf(shape={self.mass.shape}, total={self.total:.6f})"


class ConditionalPmf(NamedTuple):
    """A conditional slice P(.|symbol); ``degenerate`` marks a zero marginal.

    By convention the degenerate slice is identically zero rather than an
    error, so downstream averages over the conditioning variable stay exact.
    """

    probs: np.ndarray
    degenerate: bool


def marginalize(j: JointPmf, keep: tuple[int, ...] | list[int]):
    """Sum out all axes not in ``keep``; returns a Pmf (1 axis) or JointPmf.

    ``keep`` must be a nonempty proper subset of the joint's axes.
    """
    axes = tuple(sorted(set(int(a) for a in keep)))
    if any(a < 0 or a >= j.ndim for a in axes):
        raise InputError(f"keep axes {keep} out of range for {j.ndim}-D joint")
    if len(axes) == 0 or len(axes) == j.ndim:
        raise InputError("keep must be a nonempty proper subset of the axes")
    drop = tuple(a for a in range(j.ndim) if a not in axes)
    out = j.mass.sum(axis=drop)
    if out.ndim == 1:
        return Pmf(out, sum_atol=PRODUCT_MASS_ATOL)
    return JointPmf(out, sum_atol=PRODUCT_MASS_ATOL)


def condition(j: JointPmf, given_axis: int, symbol: int) -> ConditionalPmf:
    """Conditional distribution over the remaining axis of a 2-D joint.

    If the marginal of ``symbol`` is zero the all-zero slice is returned with
    ``degenerate=True`` instead of raising.
    """
    if j.ndim != 2:
        raise InputError("condition expects a 2-D joint")
    if given_axis not in (0, 1):
        raise InputError("given_axis must be 0 or 1")
    n = j.shape[given_axis]
    if not 0 <= symbol < n:
        raise InputError(f"symbol {symbol} out of range for axis of size {n}")
    slice_ = j.mass[symbol, :] if given_axis == 0 else j.mass[:, symbol]
    total = float(slice_.sum())
    if total <= 0.0:
        return ConditionalPmf(np.zeros_like(slice_), True)
    return ConditionalPmf(slice_ / total, False)


def compose_markov(p_xy: JointPmf, helper: Channel) -> JointPmf:
    """Joint over X x Y x U with mass P(x,y) * helper(u|y).

    The output satisfies the chain X -> Y -> U exactly: X and U are
    conditionally independent given Y.
    """
    if p_xy.ndim != 2:
        raise InputError("compose_markov expects a 2-D joint over X x Y")
    if helper.input_size != p_xy.shape[1]:
        raise InputError(
            f"helper input size {helper.input_size} != |Y| = {p_xy.shape[1]}"
        )
    mass = p_xy.mass[:, :, None] * helper.matrix[None, :, :]
    return JointPmf(mass, sum_atol=PRODUCT_MASS_ATOL)


def product_extend(p: Pmf | JointPmf, n: int) -> Pmf | JointPmf:
    """n-fold i.i.d. extension; tuple mass is the product of coordinate masses.

    Tuples index row-major: the tuple (x1..xn) maps to x1*a^(n-1)+...+xn, and
    for joints each axis extends independently, so ``np.kron`` realizes the
    construction exactly.
    """
    if n < 1:
        raise InputError("n must be a positive integer")
    cells = 1
    for a in p.mass.shape:
        cells *= a**n
    if cells > CELL_CAP:
        raise ResourceError(
            f"product extension needs {cells} cells, cap is {CELL_CAP}"
        )
    out = p.mass
    for _ in range(n - 1):
        out = np.kron(out, p.mass)
    if isinstance(p, Pmf):
        return Pmf(out, sum_atol=PRODUCT_MASS_ATOL)
    return JointPmf(out, sum_atol=PRODUCT_MASS_ATOL)


def entropy_bits(mass: np.ndarray) -> float:
    """Shannon entropy in bits of an (unnormalized-safe) mass array.

    Zero-mass cells contribute 0.
    """
    m = np.asarray(mass, dtype=float).ravel()
    pos = m[m > 0]
    return float(-(pos * np.log2(pos)).sum())


def shannon_quantities(j: JointPmf) -> dict[str, float]:
    """Classical reference quantities of a joint, in bits.

    For a 2-D joint over (X, Y): H(X), H(Y), H(X,Y), H(X|Y), I(X;Y).
    For a 3-D joint over (X, Y, U) additionally: H(U), H(X|U), I(U;Y).
    """
    if j.ndim == 2:
        h_xy = entropy_bits(j.mass)
        h_x = entropy_bits(j.mass.sum(axis=1))
        h_y = entropy_bits(j.mass.sum(axis=0))
        return {
            "h_x": h_x,
            "h_y": h_y,
            "h_xy": h_xy,
            "h_x_given_y": h_xy - h_y,
            "i_xy": h_x + h_y - h_xy,
        }
    h_x = entropy_bits(j.mass.sum(axis=(1, 2)))
    h_y = entropy_bits(j.mass.sum(axis=(0, 2)))
    h_u = entropy_bits(j.mass.sum(axis=(0, 1)))
    h_xy = entropy_bits(j.mass.sum(axis=2))
    h_xu = entropy_bits(j.mass.sum(axis=1))
    h_uy = entropy_bits(j.mass.sum(axis=0))
    return {
        "h_x": h_x,
        "h_y": h_y,
        "h_u": h_u,
        "h_x_given_y": h_xy - h_y,
        "h_x_given_u": h_xu - h_u,
        "i_xy": h_x + h_y - h_xy,
        "i_uy": h_u + h_y - h_uy,
    }


def dsbs(crossover: float) -> JointPmf:
    """Doubly symmetric binary source: uniform X, Y = X through a BSC."""
    if not 0.0 <= crossover <= 1.0:
        raise InputError("crossover must be in [0, 1]")
    c = crossover
    return JointPmf([[0.5 * (1 - c), 0.5 * c], [0.5 * c, 0.5 * (1 - c)]])


# ---------------------------------------------------------------------------
# JSON file interface: {"alphabets": [sizes...], "mass": [row-major flat]}
# ---------------------------------------------------------------------------


def _load_payload(path) -> tuple[list[int], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        sizes = [int(a) for a in payload["alphabets"]]
        flat = np.asarray(payload["mass"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: expected keys 'alphabets' and 'mass'") from exc
    expected = math.prod(sizes)
    if flat.ndim != 1 or flat.size != expected:
        raise InputError(
            f"{path}: mass length {flat.size} != product of alphabets {expected}"
        )
    return sizes, flat


def load_pmf(path) -> Pmf:
    sizes, flat = _load_payload(path)
    if len(sizes) != 1:
        raise InputError(f"{path}: a pmf needs exactly 1 alphabet")
    return Pmf(flat)


def load_joint(path) -> JointPmf:
    sizes, flat = _load_payload(path)
    if len(sizes) not in (2, 3):
        raise InputError(f"{path}: a joint needs 2 or 3 alphabets")
    return JointPmf(flat.reshape(sizes))


def load_channel(path) -> Channel:
    sizes, flat = _load_payload(path)
    if len(sizes) != 2:
        raise InputError(f"{path}: a channel needs exactly 2 alphabets")
    return Channel(flat.reshape(sizes))


def dump_mass(obj: Pmf | JointPmf | Channel | SubPmf, path) -> None:
    """Write the row-major JSON form of any mass-carrying object."""
    if isinstance(obj, Channel):
        arr = obj.matrix
    else:
        arr = obj.mass
    payload = {"alphabets": list(arr.shape), "mass": arr.ravel().tolist()}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")
