"""Measure specifications, their moment sequences, and partial-sum growth fits.

A measure on [0,1) is written in a small mini-language:

    spec  := term ('+' term)*
    term  := (number '*')? atom
    atom  := 'dirac' '(' number ')'
           | 'lebesgue' [ '(' number ')' ]
           | 'power' '(' number ')'
           | 'logpower' '(' number ')'

Numbers are unsigned decimal literals, whitespace is insignificant, and
'lebesgue' defaults to the full interval (r = 1).  Examples:

    dirac(0.5)                point mass at 1/2
    dirac(0)+0.5*lebesgue     unit atom at 0 plus half the uniform density
    power(2)                  density t^2 dt
    logpower(3)               density (-log t)^2 / Gamma(3) dt

The n-th moment of a measure is the integral of t^n against it.  All four
atoms admit closed-form moments; an adaptive-quadrature path exists as an
independent cross-check and reports a certified error bound per entry.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .quadrature import integrate

#: absolute quadrature tolerance per moment
MOMENT_TOL = 1e-13
#: fitted log-slope below this (with a good fit) declares bounded partial sums
BOUNDED_SLOPE = 0.02
BOUNDED_RESIDUAL = 1e-3

CLOSED_FORM = "closed-form"
QUADRATURE = "quadrature"


class MeasureSyntaxError(ValueError):
    """Input does not conform to the measure mini-language."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class MeasureParameterError(ValueError):
    """Weight or atom parameter outside its admissible range."""


@dataclass(frozen=True)
class Dirac:
    """Point mass at t, 0 <= t < 1."""

    t: float

    def __post_init__(self):
        if not (0.0 <= self.t < 1.0) or not math.isfinite(self.t):
            raise MeasureParameterError(f"dirac location must lie in [0,1), got {self.t}")

    def closed_moments(self, ns: np.ndarray) -> np.ndarray:
        return np.power(self.t, ns.astype(float))

    def quadrature_moment(self, n: int, tol: float) -> tuple[float, float]:
        # an atom carries no density to integrate; the closed form is exact
        return float(self.t**n), 0.0

    def text(self) -> str:
        return f"dirac({self.t!r})"


@dataclass(frozen=True)
class Lebesgue:
    """Uniform density on [0, r], 0 < r <= 1."""

    r: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.r <= 1.0) or not math.isfinite(self.r):
            raise MeasureParameterError(f"lebesgue endpoint must lie in (0,1], got {self.r}")

    def closed_moments(self, ns: np.ndarray) -> np.ndarray:
        n = ns.astype(float)
        return np.power(self.r, n + 1.0) / (n + 1.0)

    def quadrature_moment(self, n: int, tol: float) -> tuple[float, float]:
        return integrate(lambda t: t**n, 0.0, self.r, tol)

    def text(self) -> str:
        return "lebesgue" if self.r == 1.0 else f"lebesgue({self.r!r})"


@dataclass(frozen=True)
class PowerDensity:
    """Density t^alpha dt on [0,1), alpha > 0."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0.0) or not math.isfinite(self.alpha):
            raise MeasureParameterError(f"power exponent must be positive, got {self.alpha}")

    def closed_moments(self, ns: np.ndarray) -> np.ndarray:
        return 1.0 / (ns.astype(float) + self.alpha + 1.0)

    def quadrature_moment(self, n: int, tol: float) -> tuple[float, float]:
        return integrate(lambda t: t ** (n + self.alpha), 0.0, 1.0, tol)

    def text(self) -> str:
        return f"power({self.alpha!r})"


@dataclass(frozen=True)
class LogPowerDensity:
    """Density (-log t)^(s-1) / Gamma(s) dt on (0,1), s > 1."""

    s: float

    def __post_init__(self):
        if not (self.s > 1.0) or not math.isfinite(self.s):
            raise MeasureParameterError(f"logpower exponent must exceed 1, got {self.s}")

    def closed_moments(self, ns: np.ndarray) -> np.ndarray:
        return np.power(ns.astype(float) + 1.0, -self.s)

    def quadrature_moment(self, n: int, tol: float) -> tuple[float, float]:
        # integrate in x = -log t; the integrand exp(-(n+1)x) x^(s-1) decays
        # fast enough that truncating at x_max leaves a negligible tail
        s = self.s
        norm = math.gamma(s)
        x_max = (120.0 + 20.0 * s) / (n + 1.0)
        value, bound = integrate(
            lambda x: np.exp(-(n + 1.0) * x) * np.power(x, s - 1.0) / norm,
            0.0,
            x_max,
            tol,
        )
        return value, bound

    def text(self) -> str:
        return f"logpower({self.s!r})"


Atom = Union[Dirac, Lebesgue, PowerDensity, LogPowerDensity]


@dataclass(frozen=True)
class MeasureSpec:
    """Positive linear combination of measure atoms on [0,1)."""

    terms: tuple[tuple[float, Atom], ...]

    def __post_init__(self):
        if not self.terms:
            raise MeasureParameterError("a measure needs at least one term")
        for weight, _ in self.terms:
            if not (weight > 0.0) or not math.isfinite(weight):
                raise MeasureParameterError(f"term weights must be positive, got {weight}")

    def text(self) -> str:
        parts = []
        for weight, atom in self.terms:
            prefix = "" if weight == 1.0 else f"{weight!r}*"
            parts.append(prefix + atom.text())
        return "+".join(parts)


# --------------------------------------------------------------------------
# parsing

_NUMBER_RE = re.compile(r"\d+\.?\d*|\.\d+")
_NAME_RE = re.compile(r"[a-zA-Z]+")
_ATOM_NAMES = ("dirac", "lebesgue", "power", "logpower")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self._skip_ws()
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_number(self) -> float:
        self._skip_ws()
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise MeasureSyntaxError("expected a number", self.pos)
        self.pos = m.end()
        return float(m.group())

    def take_name(self) -> tuple[str, int]:
        self._skip_ws()
        start = self.pos
        m = _NAME_RE.match(self.text, self.pos)
        if not m:
            raise MeasureSyntaxError("expected an atom name", self.pos)
        self.pos = m.end()
        return m.group(), start

    def take_char(self, ch: str):
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise MeasureSyntaxError(f"expected '{ch}'", self.pos)
        self.pos += 1


def parse_measure(text: str) -> MeasureSpec:
    """Parse a measure mini-language string into a MeasureSpec.

    Raises MeasureSyntaxError (with position) on malformed input and
    MeasureParameterError when a weight or atom parameter is out of range.
    """
    toks = _Tokens(text)
    terms = [_parse_term(toks)]
    while True:
        ch = toks.peek()
        if ch is None:
            break
        if ch != "+":
            raise MeasureSyntaxError("expected '+' between terms", toks.pos)
        toks.take_char("+")
        terms.append(_parse_term(toks))
    return MeasureSpec(terms=tuple(terms))


def _parse_term(toks: _Tokens) -> tuple[float, Atom]:
    ch = toks.peek()
    if ch is None:
        raise MeasureSyntaxError("expected a term", toks.pos)
    weight = 1.0
    if ch.isdigit() or ch == ".":
        weight = toks.take_number()
        toks.take_char("*")
    return weight, _parse_atom(toks)


def _parse_atom(toks: _Tokens) -> Atom:
    name, start = toks.take_name()
    if name not in _ATOM_NAMES:
        raise MeasureSyntaxError(f"unknown atom '{name}'", start)
    if name == "lebesgue":
        if toks.peek() == "(":
            toks.take_char("(")
            r = toks.take_number()
            toks.take_char(")")
            return Lebesgue(r)
        return Lebesgue()
    toks.take_char("(")
    value = toks.take_number()
    toks.take_char(")")
    if name == "dirac":
        return Dirac(value)
    if name == "power":
        return PowerDensity(value)
    return LogPowerDensity(value)


# --------------------------------------------------------------------------
# moments

@dataclass(frozen=True)
class MomentProvenance:
    kind: str
    error_bound: float = 0.0

    def label(self) -> str:
        if self.kind == CLOSED_FORM:
            return CLOSED_FORM
        return f"{QUADRATURE}({self.error_bound:.3e})"


@dataclass(eq=False)
class MomentSequence:
    """Moments mu_0..mu_{n-1} with partial sums s_n and per-entry provenance."""

    values: np.ndarray
    partial_sums: np.ndarray
    provenance: tuple[MomentProvenance, ...]
    n_terms: int
    degenerate: bool


def moments(spec: MeasureSpec, n_terms: int, method: str = "closed",
            tol: float = MOMENT_TOL) -> MomentSequence:
    """Moment sequence of a measure: entry n integrates t^n against it.

    method="closed" evaluates the per-atom closed forms; method="quadrature"
    forces adaptive integration of the density terms (atoms stay closed) and
    records a certified error bound per entry.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    if method not in ("closed", "quadrature"):
        raise ValueError(f"unknown moment method {method!r}")
    ns = np.arange(n_terms)
    values = np.zeros(n_terms)
    bounds = np.zeros(n_terms)
    any_quadrature = False
    for weight, atom in spec.terms:
        if method == "closed" or isinstance(atom, Dirac):
            values += weight * atom.closed_moments(ns)
        else:
            any_quadrature = True
            # split the per-moment tolerance so weighted bounds still sum
            # below it
            term_tol = tol / (len(spec.terms) * max(weight, 1.0))
            for n in ns:
                v, b = atom.quadrature_moment(int(n), term_tol)
                values[n] += weight * v
                bounds[n] += weight * b
    if any_quadrature:
        provenance = tuple(MomentProvenance(QUADRATURE, float(b)) for b in bounds)
    else:
        provenance = tuple(MomentProvenance(CLOSED_FORM) for _ in ns)
    degenerate = bool(n_terms >= 2 and values[0] > 0.0 and np.all(values[1:] == 0.0))
    return MomentSequence(
        values=values,
        partial_sums=np.cumsum(values),
        provenance=provenance,
        n_terms=n_terms,
        degenerate=degenerate,
    )


# --------------------------------------------------------------------------
# partial-sum growth

@dataclass(frozen=True)
class GrowthEstimate:
    """Fit of s_n ~ beta * log n over the tail window.

    bounded means the partial sums converge; bounded implies beta == 0.
    """

    beta: float
    bounded: bool
    fit_residual: float


def fit_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares affine fit y ~ slope*x + intercept; returns rms residual."""
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    denom = float(np.dot(dx, dx))
    slope = float(np.dot(dx, y - ym) / denom) if denom > 0.0 else 0.0
    intercept = ym - slope * xm
    resid = y - (slope * x + intercept)
    return slope, intercept, float(np.sqrt(np.mean(resid**2)))


def growth_exponent(ms: MomentSequence) -> GrowthEstimate:
    """Fit the partial sums against log(n+1) over the window [n/2, n).

    The fitted slope below BOUNDED_SLOPE together with an rms residual below
    BOUNDED_RESIDUAL declares the partial sums bounded (beta = 0); otherwise
    beta is the fitted slope and fit_residual reports the fit quality.
    """
    n = ms.n_terms
    if n < 64:
        raise ValueError("growth fit needs at least 64 moments")
    idx = np.arange(n // 2, n)
    x = np.log(idx + 1.0)
    y = ms.partial_sums[idx]
    slope, _, residual = fit_line(x, y)
    slope = max(slope, 0.0)
    if slope < BOUNDED_SLOPE and residual < BOUNDED_RESIDUAL:
        return GrowthEstimate(beta=0.0, bounded=True, fit_residual=residual)
    return GrowthEstimate(beta=slope, bounded=False, fit_residual=residual)
