"""Fourier symbols F(k) of the dispersion-modifying multipliers.

Two symbols are built in: the identity (original Green-Naghdi / MCC model)
and the "improved" symbol matching the linear dispersion of the Euler
equations for a layer of depth d,

    F(k) = sqrt(3 / (d|k| tanh(d|k|)) - 3 / (d|k|)**2).

Custom symbols are tabulated on k >= 0 and linearly interpolated.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigurationError

SERIES_SWITCH = 1e-3


class ExtrapolationWarning(UserWarning):
    """A tabulated symbol was evaluated outside its table."""


def eval_identity(k):
    return np.ones_like(np.asarray(k, dtype=float))


def eval_improved(k, d: float = 1.0):
    if d <= 0:
        raise ConfigurationError(f"layer depth must be positive, got {d}")
    k = np.asarray(k, dtype=float)
    x = np.abs(np.atleast_1d(k)) * d
    out = np.empty_like(x)
    small = x < SERIES_SWITCH
    xs = x[small]
    out[small] = 1.0 - xs**2 / 30.0 + 11.0 * xs**4 / 4200.0
    # the closed form cancels two O(x**-2) terms; extended precision keeps
    # the result accurate to ~1e-14 at the switch point
    xl = x[~small].astype(np.longdouble)
    out[~small] = np.sqrt(3.0 / (xl * np.tanh(xl)) - 3.0 / xl**2).astype(float)
    return out.reshape(k.shape) if k.ndim else float(out[0])


@dataclass(frozen=True)
class MultiplierSpec:
    """A Fourier symbol plus its declared decay exponent.

    ``depth`` is the layer depth used by the improved symbol (1 for the
    upper layer, 1/delta for the lower one).  ``c_minus``/``c_plus`` are the
    declared sandwich constants; ``None`` means "report what is measured".
    """

    kind: str = "identity"
    depth: float = 1.0
    theta: float = 0.0
    c_minus: float | None = None
    c_plus: float | None = None
    table_k: tuple = field(default=(), repr=False)
    table_f: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in ("identity", "improved", "custom"):
            raise ConfigurationError(f"unknown multiplier kind {self.kind!r}")
        if not 0.0 <= self.theta < 1.0:
            raise ConfigurationError(f"theta must lie in [0, 1), got {self.theta}")
        if self.depth <= 0:
            raise ConfigurationError(f"depth must be positive, got {self.depth}")
        if self.kind == "custom":
            k = np.asarray(self.table_k, dtype=float)
            if k.ndim != 1 or k.size < 2 or len(self.table_f) != k.size:
                raise ConfigurationError("custom symbol needs matching k and F columns")
            if np.any(k < 0) or np.any(np.diff(k) <= 0):
                raise ConfigurationError("custom symbol table must have increasing k >= 0")

    @classmethod
    def identity(cls) -> "MultiplierSpec":
        return cls("identity", theta=0.0)

    @classmethod
    def improved(cls, depth: float = 1.0, theta: float = 0.5) -> "MultiplierSpec":
        return cls("improved", depth=float(depth), theta=theta)

    @classmethod
    def from_table(cls, k, f, theta: float = 0.0, c_minus=None, c_plus=None):
        return cls("custom", theta=theta, c_minus=c_minus, c_plus=c_plus,
                   table_k=tuple(float(v) for v in k), table_f=tuple(float(v) for v in f))

    @classmethod
    def from_csv(cls, path, theta: float = 0.0, c_minus=None, c_plus=None):
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows or set(rows[0]) != {"k", "F"}:
            raise ConfigurationError(f"{path}: expected a CSV with header 'k,F'")
        k = [float(r["k"]) for r in rows]
        f = [float(r["F"]) for r in rows]
        return cls.from_table(k, f, theta, c_minus, c_plus)

    def __call__(self, k):
        if self.kind == "identity":
            return eval_identity(k)
        if self.kind == "improved":
            return eval_improved(k, self.depth)
        ak = np.abs(np.asarray(k, dtype=float))
        tk = np.asarray(self.table_k)
        if np.any(ak > tk[-1]) or np.any(ak < tk[0]):
            warnings.warn("custom symbol held constant outside its table",
                          ExtrapolationWarning, stacklevel=2)
        return np.interp(ak, tk, np.asarray(self.table_f))

    def describe(self) -> dict:
        d = {"kind": self.kind, "depth": self.depth, "theta": self.theta}
        if self.kind == "custom":
            d["table_size"] = len(self.table_k)
        return d


@dataclass
class AdmissibilityReport:
    spec: dict
    k_max: float
    samples: int
    items: dict

    @property
    def passed(self) -> bool:
        return all(item["passed"] for item in self.items.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def check_admissible(spec: MultiplierSpec, k_max: float = 1e4, samples: int = 10_000,
                     j: int = 2) -> AdmissibilityReport:
    """Sampled check of the four admissibility requirements on [0, k_max].

    Item 3 (L2 integrability of the j-th derivative of kF) is only evaluated
    on the sampled window; the report says so and makes no claim about the
    tail beyond ``k_max``.
    """
    if samples < 100 or not k_max > 10:
        raise ConfigurationError("admissibility check needs samples >= 100 and k_max > 10")
    k = np.linspace(0.0, k_max, int(samples))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExtrapolationWarning)
        f = np.asarray(spec(k), dtype=float)
        f_neg = np.asarray(spec(-k), dtype=float)
        h = 1e-6
        f0, fp, fm = (float(np.asarray(spec(np.array([v])))[0]) for v in (0.0, h, -h))
        h2 = 1e-3
        fp2, fm2 = (float(np.asarray(spec(np.array([v])))[0]) for v in (h2, -h2))

    items = {}
    even_err = float(np.max(np.abs(f - f_neg)))
    items["1_even_and_bounded"] = {
        "passed": bool(even_err == 0.0 and np.all(f > 0) and np.all(f <= 1.0)),
        "evenness_error": even_err,
        "min_F": float(f.min()),
        "max_F": float(f.max()),
    }

    slope0 = (fp - fm) / (2 * h)
    second = (fp2 - 2 * f0 + fm2) / h2**2
    items["2_regular_at_zero"] = {
        "passed": bool(abs(f0 - 1.0) <= 1e-12 and abs(slope0) < 1e-6 and np.isfinite(second)),
        "F0": f0,
        "dF0_estimate": slope0,
        "second_difference": second,
    }

    dk = k[1] - k[0]
    g = k * f
    dj = np.diff(g, n=j) / dk**j
    # kF is odd, so its j-th derivative squared is even: double the half line
    integral = float(2.0 * np.sum(dj**2) * dk)
    items["3_derivative_L2"] = {
        "passed": bool(np.isfinite(integral)),
        "j": j,
        "window": [0.0, float(k_max)],
        "integral": integral,
        "finite": bool(np.isfinite(integral)),
        "note": "finite-window estimate; integrability beyond the window is not certified",
    }

    top = k >= k_max / 10
    slope, _ = np.polyfit(np.log1p(k[top]), np.log(f[top]), 1)
    fitted = float(-slope)
    scaled = f * (1.0 + k) ** spec.theta
    c_lo, c_hi = float(scaled.min()), float(scaled.max())
    sandwich = c_lo > 0 and np.isfinite(c_hi)
    if spec.c_minus is not None:
        sandwich = sandwich and c_lo >= spec.c_minus
    if spec.c_plus is not None:
        sandwich = sandwich and c_hi <= spec.c_plus
    items["4_decay_rate"] = {
        "passed": bool(abs(fitted - spec.theta) <= 0.05 and sandwich),
        "declared_theta": spec.theta,
        "fitted_theta": fitted,
        "fit_window": [float(k_max / 10), float(k_max)],
        "C_minus": c_lo,
        "C_plus": c_hi,
    }
    return AdmissibilityReport(spec.describe(), float(k_max), int(samples), items)
