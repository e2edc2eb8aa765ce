"""
The linear program behind the approximation ratio, and its per-instance ledger.

Variables are ``y`` and, for the five triangle classes, the weight share
``alpha_i`` with its split ``rho_i + sigma_i + theta_i`` over light, middle
and heavy edges.  The LP minimises ``y`` subject to ``y`` dominating each of
the four lower bounds on ``w(T_j)/w(B*)``; its value is the guaranteed ratio
for a given ``tau``.

The solver is a small dense two-phase simplex with Bland's rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .classify import _check_tau, parameters
from .core import MetricInstance, OrientedCyclePacking, StructuralError, TrianglePacking, packing_weight

CLASSES = range(1, 6)
VARIABLES = (("y",) + tuple(f"alpha{i}" for i in CLASSES)
             + tuple(f"rho{i}" for i in CLASSES) + tuple(f"sigma{i}" for i in CLASSES)
             + tuple(f"theta{i}" for i in CLASSES))

PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: dict[str, Fraction]
    sense: str          # "==", ">=", "<="
    rhs: Fraction

    def value(self, x: dict[str, float]) -> float:
        return sum(float(c) * x[v] for v, c in self.coeffs.items())

    def satisfied(self, x: dict[str, float], tol: float = 1e-9) -> bool:
        lhs, rhs = self.value(x), float(self.rhs)
        if self.sense == "==":
            return abs(lhs - rhs) <= tol
        if self.sense == ">=":
            return lhs >= rhs - tol
        return lhs <= rhs + tol


@dataclass(frozen=True)
class TradeoffLP:
    """``min y`` over nonnegative ``VARIABLES`` subject to ``constraints``."""
    tau: Fraction
    constraints: tuple[Constraint, ...]
    variables: tuple[str, ...] = VARIABLES

    def constraint(self, name: str) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)

    def feasible(self, x: dict[str, float], tol: float = 1e-9) -> bool:
        return (all(x[v] >= -tol for v in self.variables)
                and all(c.satisfied(x, tol) for c in self.constraints))


def _frac(x: float | Fraction) -> Fraction:
    if isinstance(x, Fraction):
        return x
    # limit_denominator recovers 1/3 from 0.333... while keeping 0.25 exact
    f = Fraction(x)
    g = f.limit_denominator(10**6)
    return g if abs(float(g) - x) < 1e-15 else f


def t2_coefficients(tau: float | Fraction) -> tuple[Fraction, Fraction]:
    """Coefficients of ``alpha_2`` and ``alpha_4`` in the randomized T2 bound."""
    t = _frac(tau)
    return Fraction(97) * (1 - 3 * t) / 3645, Fraction(97) * (1 - 3 * t) / 1215


def build_lp(tau: float | Fraction, t3_const: float | Fraction = Fraction(2, 3)) -> TradeoffLP:
    """The trade-off LP for ``tau``.

    ``t3_const`` is the constant term of the T3 bound: 2/3 in the limit of
    small eps; an instance ledger may pass ``(2/3) w(C)/w(B*)`` instead.
    """
    _check_tau(float(tau))
    t = _frac(tau)
    one = Fraction(1)
    cons = [Constraint("shares", {f"alpha{i}": one for i in CLASSES}, "==", one)]
    for i in CLASSES:
        cons.append(Constraint(f"split{i}", {f"rho{i}": one, f"sigma{i}": one,
                                             f"theta{i}": one, f"alpha{i}": -one}, "==", Fraction(0)))
    cons.append(Constraint("T1", {"y": one, "alpha1": -one, "rho2": Fraction(-2),
                                  "rho3": Fraction(-2)}, ">=", Fraction(0)))
    t2 = {"y": one}
    t2.update({f"theta{i}": Fraction(-2) for i in CLASSES})
    cons.append(Constraint("T2_matching", t2, ">=", Fraction(0)))
    c2, c4 = t2_coefficients(t)
    cons.append(Constraint("T2_random", {"y": one, "alpha2": -c2, "alpha4": -c4}, ">=",
                           Fraction(2, 3)))
    c3 = t / 36
    cons.append(Constraint("T3", {"y": one, "alpha3": -c3, "alpha5": -c3}, ">=", _frac(t3_const)))
    for i in CLASSES:
        r, s, h = f"rho{i}", f"sigma{i}", f"theta{i}"
        cons.append(Constraint(f"triangle{i}", {r: one, s: one, h: -one}, ">=", Fraction(0)))
        cons.append(Constraint(f"heavy{i}", {h: one, s: -one}, ">=", Fraction(0)))
        cons.append(Constraint(f"middle{i}", {s: one, r: -one}, ">=", Fraction(0)))
    return TradeoffLP(t, tuple(cons))


@dataclass(frozen=True)
class LPSolution:
    value: float
    point: dict[str, float]
    iterations: int


def solve_lp(lp: TradeoffLP, order: Sequence[int] | None = None) -> LPSolution:
    """Minimise ``y``.  ``order`` permutes the constraint rows (for rechecks)."""
    cons = list(lp.constraints)
    if order is not None:
        if sorted(order) != list(range(len(cons))):
            raise ValueError("order must be a permutation of the constraint indices")
        cons = [cons[i] for i in order]
    nv = len(lp.variables)
    col = {v: j for j, v in enumerate(lp.variables)}
    nslack = sum(1 for c in cons if c.sense != "==")
    m = len(cons)
    A = np.zeros((m, nv + nslack))
    b = np.zeros(m)
    s = nv
    for i, c in enumerate(cons):
        for v, a in c.coeffs.items():
            A[i, col[v]] = float(a)
        b[i] = float(c.rhs)
        if c.sense == ">=":
            A[i, s] = -1.0
            s += 1
        elif c.sense == "<=":
            A[i, s] = 1.0
            s += 1
        if b[i] < 0:
            A[i] *= -1.0
            b[i] *= -1.0
    cost = np.zeros(nv + nslack)
    cost[col["y"]] = 1.0
    x, iters = _two_phase(A, b, cost)
    point = {v: float(x[col[v]]) for v in lp.variables}
    return LPSolution(point["y"], point, iters)


def _two_phase(A: np.ndarray, b: np.ndarray, cost: np.ndarray) -> tuple[np.ndarray, int]:
    m, n = A.shape
    # phase 1: artificial variable per row, minimise their sum
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n, n + m))
    T[m, :] = 0.0
    T[m, n:n + m] = 1.0
    for i in range(m):
        T[m] -= T[i]
    iters = _simplex(T, basis, n + m)
    if T[m, -1] < -1e-9:
        raise StructuralError("trade-off LP is infeasible")
    # drive artificial variables out of the basis
    for i, bv in enumerate(basis):
        if bv >= n:
            for j in range(n):
                if abs(T[i, j]) > PIVOT_TOL:
                    _pivot(T, basis, i, j)
                    break
    keep = [i for i, bv in enumerate(basis) if bv < n]
    T2 = np.zeros((len(keep) + 1, n + 1))
    T2[:-1, :n] = T[keep, :n]
    T2[:-1, -1] = T[keep, -1]
    basis2 = [basis[i] for i in keep]
    T2[-1, :n] = cost
    for i, bv in enumerate(basis2):
        T2[-1] -= cost[bv] * T2[i]
    iters += _simplex(T2, basis2, n)
    x = np.zeros(n)
    for i, bv in enumerate(basis2):
        x[bv] = T2[i, -1]
    return x, iters


def _pivot(T: np.ndarray, basis: list[int], r: int, c: int) -> None:
    T[r] /= T[r, c]
    for i in range(T.shape[0]):
        if i != r and T[i, c] != 0.0:
            T[i] -= T[i, c] * T[r]
    basis[r] = c


def _simplex(T: np.ndarray, basis: list[int], ncols: int) -> int:
    """Bland's rule on tableau ``T`` (objective in the last row)."""
    m = T.shape[0] - 1
    iters = 0
    while True:
        enter = next((j for j in range(ncols) if T[m, j] < -PIVOT_TOL), None)
        if enter is None:
            return iters
        best, leave = np.inf, -1
        for i in range(m):
            a = T[i, enter]
            if a > PIVOT_TOL:
                ratio = T[i, -1] / a
                if ratio < best - PIVOT_TOL or (abs(ratio - best) <= PIVOT_TOL
                                               and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave < 0:
            raise StructuralError("trade-off LP is unbounded")
        _pivot(T, basis, leave, enter)
        iters += 1
        if iters > 10000:
            raise StructuralError("simplex did not terminate")


def sweep(taus: Sequence[float]) -> list[tuple[float, float]]:
    return [(t, solve_lp(build_lp(t)).value) for t in taus]


# ----------------------------------------------------------------------
# Per-instance ledger

@dataclass(frozen=True)
class LedgerLine:
    name: str
    bound_ratio: float      # right-hand side as a fraction of w(B*)
    bound: float            # right-hand side times w(B*)
    measured: float
    ok: bool


@dataclass
class Ledger:
    w_Bstar: float
    w_C: float
    tau: float
    lines: list[LedgerLine] = field(default_factory=list)
    adjusted_lp: float = 0.0     # LP value with the measured T3 constant
    best_ratio: float = 0.0

    @property
    def ok(self) -> bool:
        return all(l.ok for l in self.lines) and self.best_ratio >= self.adjusted_lp - 1e-9

    def table(self) -> str:
        rows = [f"{'bound':<12} {'rhs/w(B*)':>10} {'rhs':>12} {'measured':>12} ok"]
        for l in self.lines:
            rows.append(f"{l.name:<12} {l.bound_ratio:10.6f} {l.bound:12.6g} "
                        f"{l.measured:12.6g} {'yes' if l.ok else 'NO'}")
        rows.append(f"best/w(B*) = {self.best_ratio:.6f} >= LP({self.tau}) with measured "
                    f"w(C) = {self.adjusted_lp:.6f}: {'yes' if self.ok else 'NO'}")
        return "\n".join(rows)


def instance_ledger(inst: MetricInstance, Bstar: TrianglePacking, C: OrientedCyclePacking,
                    tau: float, w_T1: float, w_T2: float, w_T3: float) -> Ledger:
    """Check the four lower bounds on ``w(T1)``, ``w(T2)`` (twice) and ``w(T3)``."""
    p = parameters(Bstar, C, tau, inst)
    wb = packing_weight(Bstar, inst)
    wc = packing_weight(C, inst)
    a, rho, theta = p.alpha, p.rho, p.theta
    c2, c4 = (float(c) for c in t2_coefficients(tau))
    t3_const = (2.0 / 3.0) * wc / wb if wb > 0 else 2.0 / 3.0
    rows = [
        ("T1", a[1] + 2 * rho[2] + 2 * rho[3], w_T1),
        ("T2_matching", 2 * sum(theta[1:]), w_T2),
        ("T2_random", 2 / 3 + c2 * a[2] + c4 * a[4], w_T2),
        ("T3", t3_const + tau / 36 * (a[3] + a[5]), w_T3),
    ]
    tol = inst.tol * max(1, inst.n)
    led = Ledger(wb, wc, tau)
    for name, ratio, measured in rows:
        bound = ratio * wb
        led.lines.append(LedgerLine(name, ratio, bound, measured, measured >= bound - tol))
    led.adjusted_lp = solve_lp(build_lp(tau, t3_const)).value
    led.best_ratio = max(w_T1, w_T2, w_T3) / wb if wb > 0 else 1.0
    return led
