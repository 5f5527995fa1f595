"""Nonlinear tracking-differentiator (TD).

A TD is a second-order system with one input and two outputs: x1 tracks the
input signal, x2 is the derivative of x1.  The gain r bounds the acceleration
of the tracked output and is the smoothing knob: raising it tightens tracking,
lowering it rejects more noise.

Two forms are provided:

* the discrete form driven by the time-optimal ``fst`` synthesis function
  (:func:`td_step` / :func:`td_track`), used by the gene-finding pipeline, and
* the continuous second-order form with a fractional-power or bang-bang
  feedback, integrated with fixed-step RK4 (:func:`integrate_continuous`).

Both are pure functions of their inputs; series are processed sequentially
but independent series may be tracked concurrently.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from ._backend import kernels
from .errors import ParameterError, UsageError

__all__ = [
    "Nonlinearity",
    "TDParams",
    "TDState",
    "TDTrace",
    "fst",
    "td_step",
    "td_track",
    "alpha_feedback",
    "sign_feedback",
    "integrate_continuous",
    "tracking_error_l1",
]


class Nonlinearity(enum.Enum):
    """Feedback nonlinearity of the tracker."""

    FHAN = "fhan"  # discrete time-optimal synthesis (default, pipeline)
    ALPHA = "alpha"  # fractional-power feedback, continuous mode
    SIGN = "sign"  # bang-bang feedback, continuous mode


@dataclass(frozen=True)
class TDParams:
    """Tracker configuration.

    r is the acceleration gain (per sample^2), h the sampling step.  alpha1
    and alpha2 parameterize the ALPHA nonlinearity and must lie in (0, 1).
    integrator_step is the RK4 substep of the continuous mode and must divide
    the unit sample interval evenly.
    """

    r: float
    h: float = 1.0
    nonlinearity: Nonlinearity = Nonlinearity.FHAN
    alpha1: float = 0.5
    alpha2: float = 0.5
    integrator_step: float = 0.01

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0):
            raise ParameterError(f"gain r must be positive and finite, got {self.r}")
        if not (math.isfinite(self.h) and self.h > 0):
            raise ParameterError(f"step h must be positive and finite, got {self.h}")
        if self.nonlinearity is Nonlinearity.ALPHA:
            for name, a in (("alpha1", self.alpha1), ("alpha2", self.alpha2)):
                if not 0.0 < a < 1.0:
                    raise ParameterError(f"{name} must lie in (0, 1), got {a}")
        if not (math.isfinite(self.integrator_step) and self.integrator_step > 0):
            raise ParameterError(
                f"integrator_step must be positive and finite, got {self.integrator_step}"
            )

    def substeps_per_sample(self) -> int:
        """Number of RK4 substeps per unit sample interval."""
        nsub = round(1.0 / self.integrator_step)
        if nsub < 1 or abs(nsub * self.integrator_step - 1.0) > 1e-9:
            raise ParameterError(
                f"integrator_step {self.integrator_step} does not divide the sample interval"
            )
        return nsub


class TDState(NamedTuple):
    """Tracker state: x1 is the tracking output, x2 its derivative estimate."""

    x1: float
    x2: float


@dataclass(frozen=True)
class TDTrace:
    """Per-sample tracker output; smoothed[k+1] - smoothed[k] == h * derivative[k]."""

    smoothed: np.ndarray
    derivative: np.ndarray

    def __len__(self) -> int:
        return len(self.smoothed)


def fst(e1: float, e2: float, r: float, h: float) -> float:
    """Time-optimal synthesis function of the discrete tracker.

    e1 is the tracking error (x1 - v), e2 the current derivative estimate.
    With d = r*h, d0 = d*h and y = e1 + h*e2:

        a = e2 + y/h                      if |y| < d0
        a = e2 + sgn(y)*(sqrt(d^2 + 8r|y|) - d)/2   otherwise

    and the result is -r*a/d for |a| <= d, else -r*sgn(a).  The return value
    always lies in [-r, r].
    """
    if not (math.isfinite(e1) and math.isfinite(e2)):
        raise ParameterError(f"fst inputs must be finite, got e1={e1}, e2={e2}")
    if not (math.isfinite(r) and r > 0 and math.isfinite(h) and h > 0):
        raise ParameterError(f"fst requires positive finite r and h, got r={r}, h={h}")
    return kernels.fst_scalar(e1, e2, r, h)


def td_step(state: TDState, v: float, params: TDParams) -> TDState:
    """One step of the discrete tracker toward input sample v.

    x1' = x1 + h*x2 and x2' = x2 + h*fst(x1 - v, x2, r, h); the velocity
    change per step is bounded by h*r in magnitude.
    """
    if params.nonlinearity is not Nonlinearity.FHAN:
        raise ParameterError("the discrete tracker supports the FHAN nonlinearity only")
    if not math.isfinite(v):
        raise ParameterError(f"input sample must be finite, got {v}")
    x1, x2 = state
    acc = fst(x1 - v, x2, params.r, params.h)
    return TDState(x1 + params.h * x2, x2 + params.h * acc)


def _resolve_init(signal: np.ndarray, init) -> TDState:
    if isinstance(init, str):
        if init != "auto":
            raise UsageError(f"init must be a TDState or 'auto', got {init!r}")
        return TDState(float(signal[0]), 0.0)
    x1, x2 = init
    if not (math.isfinite(x1) and math.isfinite(x2)):
        raise ParameterError(f"initial state must be finite, got ({x1}, {x2})")
    return TDState(float(x1), float(x2))


def _check_signal(signal) -> np.ndarray:
    arr = np.ascontiguousarray(signal, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise UsageError("signal must be a non-empty 1-d series")
    if not np.isfinite(arr).all():
        raise ParameterError("signal contains non-finite values")
    return arr


def td_track(signal, params: TDParams, init: Union[TDState, str] = "auto") -> TDTrace:
    """Track a whole series with the discrete tracker.

    'auto' initialization starts on the signal (x1 = signal[0], x2 = 0),
    which eliminates the startup transient on well-behaved inputs.  Element k
    of the trace is the state after consuming signal[0..k]; a single-sample
    series returns the initial state unchanged.
    """
    if params.nonlinearity is not Nonlinearity.FHAN:
        raise ParameterError("the discrete tracker supports the FHAN nonlinearity only")
    arr = _check_signal(signal)
    state = _resolve_init(arr, init)
    smoothed, derivative = kernels.td_fhan(arr, params.r, params.h, state.x1, state.x2)
    return TDTrace(smoothed, derivative)


def alpha_feedback(x1: float, x2: float, alpha1: float, alpha2: float) -> float:
    """Fractional-power feedback -|x1|^a1*sgn(x1) - |x2|^a2*sgn(x2); odd in each argument."""
    for name, a in (("alpha1", alpha1), ("alpha2", alpha2)):
        if not 0.0 < a < 1.0:
            raise ParameterError(f"{name} must lie in (0, 1), got {a}")
    return -(abs(x1) ** alpha1) * _sign(x1) - (abs(x2) ** alpha2) * _sign(x2)


def sign_feedback(x1: float, x2: float) -> float:
    """Bang-bang feedback -sgn(x1 + |x2|*x2/2); returns -1, 0 or +1."""
    if not (math.isfinite(x1) and math.isfinite(x2)):
        raise ParameterError(f"inputs must be finite, got ({x1}, {x2})")
    return -_sign(x1 + 0.5 * abs(x2) * x2)


def _sign(x: float) -> float:
    if x > 0:
        return 1.0
    if x < 0:
        return -1.0
    return 0.0


def integrate_continuous(signal, params: TDParams, init: Union[TDState, str] = "auto") -> TDTrace:
    """Integrate the continuous tracker over a sampled series.

    The system  x1' = x2,  x2' = r^2 * f(x1 - v, x2/r)  is integrated with
    classical fixed-step RK4, holding the input piecewise-constant over each
    unit sample interval; the state is reported at integer sample times.
    f is the ALPHA or SIGN nonlinearity (the FHAN form is discrete-only).
    """
    if params.nonlinearity is Nonlinearity.FHAN:
        raise ParameterError("continuous mode requires the ALPHA or SIGN nonlinearity")
    arr = _check_signal(signal)
    state = _resolve_init(arr, init)
    nsub = params.substeps_per_sample()
    smoothed, derivative = kernels.rk4_track(
        arr,
        params.r,
        nsub,
        params.nonlinearity is Nonlinearity.SIGN,
        params.alpha1,
        params.alpha2,
        state.x1,
        state.x2,
    )
    return TDTrace(smoothed, derivative)


def tracking_error_l1(signal, trace: TDTrace, h: float) -> float:
    """Discretized L1 tracking error h * sum |smoothed - signal|.

    Zero exactly when the trace tracks the signal exactly; invariant under
    shifting both series by the same constant.
    """
    if not (math.isfinite(h) and h > 0):
        raise ParameterError(f"step h must be positive and finite, got {h}")
    arr = np.asarray(signal, dtype=np.float64)
    if arr.shape != trace.smoothed.shape:
        raise UsageError(
            f"signal length {arr.shape} does not match trace length {trace.smoothed.shape}"
        )
    return float(h * np.sum(np.abs(trace.smoothed - arr)))
