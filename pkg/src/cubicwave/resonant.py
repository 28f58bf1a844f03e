"""Order-by-order Poincare-Lindstedt construction for the cubic wave equation.

We look for solutions of ``-f_tt + f_psipsi = f**3 / sin(psi)**2`` on
``[0, pi]`` with Dirichlet ends of the form

    f = sum_lam eps**lam f_lam(tau, psi),   tau = Omega t,
    Omega**2 = sum_lam theta_lam eps**lam,  theta_0 = 1,

seeded by ``f_1 = cos(tau) e_0(psi)``.  Projected on ``e_m`` the order-``lam``
equation is

    f_lam'' + w_m**2 f_lam = -sum C f f f - sum_{nu >= 1} theta_nu f_{lam-nu}''

and every order is solved in closed form with exact rationals.  Secular
(``tau``-growing) terms are removed by choosing ``theta_{lam-1}`` from mode 0
and forcing the mode ``m >= 1`` data of order ``lam - 2``.  Both unknowns
enter affinely, so each is found by building the candidate at 0 and at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Union

from .modes import eigen_eval, interaction_coeff, omega
from .trigpoly import COS, SIN, TrigPoly, duhamel

SignSpec = Union[int, Callable[[int], int]]


class ExpansionError(RuntimeError):
    """Base class for failures of the cancellation procedure."""


class DegenerateSlopeError(ExpansionError):
    """The unknown does not influence the secular term it should cancel."""


class SecularResidueError(ExpansionError):
    """A secular term survives after all unknowns have been chosen."""


@dataclass(frozen=True)
class EngineConfig:
    """Knobs of the expansion.

    ``cubic_sign`` multiplies the projected cubic term on the right-hand side;
    ``-1`` is the equation above.  It may also be a function of the order,
    which is only useful for studying sign conventions.
    ``cutoff`` of ``None`` means the active mode set is discovered
    automatically; an integer ``M`` keeps modes ``0..M-1`` only.
    """

    cubic_sign: SignSpec = -1
    probe_modes: int = 4
    cutoff: Optional[int] = None

    def sign(self, lam: int) -> int:
        s = self.cubic_sign(lam) if callable(self.cubic_sign) else self.cubic_sign
        if s not in (-1, 1):
            raise ValueError("cubic sign must be +1 or -1")
        return s


@dataclass(frozen=True)
class ForcedDatum:
    order: int          # order lam at which the secular term appeared
    mode: int
    datum_order: int    # lam - 2
    slope: Fraction     # coefficient of tau*sin(w_m tau) per unit datum
    value: Fraction     # chosen datum

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "mode": self.mode,
            "datum_order": self.datum_order,
            "slope": _frac_str(self.slope),
            "value": _frac_str(self.value),
        }


def _frac_str(x: Fraction) -> str:
    return str(x)


def _secular_key(w: int) -> tuple:
    return (1, w, SIN)


@dataclass
class PerturbativeState:
    max_order: int
    polys: dict                         # (lam, m) -> TrigPoly, nonzero only
    thetas: list                        # theta_0 .. theta_{max_order-1}
    free_data: dict                     # lam -> f_lam^(0)(0)
    mode_data: dict = field(default_factory=dict)   # (lam, m) -> datum, m >= 1
    forced_log: list = field(default_factory=list)
    config: EngineConfig = field(default_factory=EngineConfig)

    # -- lookups --------------------------------------------------------------

    def poly(self, lam: int, m: int) -> TrigPoly:
        return self.polys.get((lam, m), TrigPoly())

    def datum(self, lam: int, m: int) -> Fraction:
        if m == 0:
            return self.free_data.get(lam, Fraction(0))
        return self.mode_data.get((lam, m), Fraction(0))

    def active_modes(self, upto: Optional[int] = None) -> list:
        top = self.max_order if upto is None else upto
        return sorted({m for (lam, m) in self.polys if lam <= top})

    def copy(self) -> "PerturbativeState":
        return PerturbativeState(
            self.max_order,
            dict(self.polys),
            list(self.thetas),
            dict(self.free_data),
            dict(self.mode_data),
            list(self.forced_log),
            self.config,
        )

    # -- series ---------------------------------------------------------------

    def omega_squared(self, epsilon: float) -> float:
        return sum(float(th) * epsilon ** k for k, th in enumerate(self.thetas))

    def frequency(self, epsilon: float) -> float:
        w2 = self.omega_squared(epsilon)
        if w2 <= 0:
            raise ValueError(f"Omega^2 = {w2} is not positive at epsilon={epsilon}")
        return math.sqrt(w2)

    def evaluate(self, epsilon: float, t: float, psi: float) -> float:
        tau = self.frequency(epsilon) * t
        total = 0.0
        for (lam, m), p in self.polys.items():
            total += epsilon ** lam * p(tau) * eigen_eval(m, psi)
        return total

    def initial_amplitudes(self, epsilon: float, n_modes: int) -> list:
        """Mode amplitudes of the truncated series at ``t = 0``."""
        out = [0.0] * n_modes
        for (lam, m), p in self.polys.items():
            if m < n_modes:
                out[m] += epsilon ** lam * float(p.value_at_zero())
        return out


# -- construction --------------------------------------------------------------


def seed(
    free_data: Optional[Mapping[int, Union[int, Fraction, str]]] = None,
    config: Optional[EngineConfig] = None,
) -> PerturbativeState:
    """Order-1 state ``f_1 = cos(tau) e_0``.

    ``free_data`` maps orders ``lam >= 2`` to the mode-0 initial amplitudes
    ``f_lam^(0)(0)``; unspecified orders default to zero.
    """
    data = {1: Fraction(1)}
    for lam, val in (free_data or {}).items():
        lam = int(lam)
        if lam < 2:
            raise ValueError("free data may only be set for orders >= 2")
        data[lam] = Fraction(val)
    return PerturbativeState(
        max_order=1,
        polys={(1, 0): TrigPoly.cos(1)},
        thetas=[Fraction(1)],
        free_data=data,
        config=config or EngineConfig(),
    )


def _cubic_products(polys: Mapping, lam: int, modes: list) -> dict:
    """``Q[i,j,k] = sum_{mu+nu+rho=lam} f_mu^i f_nu^j f_rho^k`` for nonzero triples."""
    by_order: dict = {}
    for (sigma, m), p in polys.items():
        if 1 <= sigma <= lam - 2 and m in modes:
            by_order.setdefault(sigma, {})[m] = p
    out: dict = {}
    for mu, fm in by_order.items():
        for nu, fn in by_order.items():
            rho = lam - mu - nu
            if rho not in by_order:
                continue
            fr = by_order[rho]
            for i, pi in fm.items():
                for j, pj in fn.items():
                    pij = pi * pj
                    for k, pk in fr.items():
                        key = (i, j, k)
                        out[key] = out.get(key, TrigPoly()) + pij * pk
    return {k: v for k, v in out.items() if v}


def _target_modes(polys: Mapping, lam: int, cutoff: Optional[int], extra=()) -> list:
    low = {m for (sigma, m) in polys if sigma < lam}
    targets = set(low) | set(extra)
    for i in low:
        for j in low:
            for k in low:
                for m in range(i + j + k + 3):
                    if interaction_coeff(i, j, k, m):
                        targets.add(m)
    if cutoff is not None:
        targets = {m for m in targets if m < cutoff}
    return sorted(targets)


def _cubic_source(q: Mapping, m: int) -> TrigPoly:
    acc = TrigPoly()
    for (i, j, k), p in q.items():
        c = interaction_coeff(i, j, k, m)
        if c:
            acc = acc + p.scale(c)
    return acc


def _nonlinear(polys, thetas, lam, m, sign, q) -> TrigPoly:
    """``N_lam^(m)``: ``w_m sum theta_nu f_mu^(m) + (sign / w_m) sum C f f f``."""
    w = omega(m)
    acc = TrigPoly()
    for nu in range(1, lam):
        th = thetas[nu]
        if th:
            acc = acc + polys.get((lam - nu, m), TrigPoly()).scale(th * w)
    return acc + _cubic_source(q, m).scale(Fraction(sign, w))


def _assemble(polys, thetas, data_fn, lam, m, sign, q) -> TrigPoly:
    """Candidate ``f_lam^(m)`` from the integrated recurrence (may be secular)."""
    w = omega(m)
    out = TrigPoly.cos(w, data_fn(lam, m))
    for nu in range(1, lam):
        th = thetas[nu]
        low = polys.get((lam - nu, m))
        if th and low is not None:
            out = out + (TrigPoly.cos(w, low.value_at_zero()) - low).scale(th)
    src = _nonlinear(polys, thetas, lam, m, sign, q)
    if src:
        out = out + duhamel(w, src, allow_secular=True)
    return out


def _source(polys, thetas, lam, m, sign, q) -> TrigPoly:
    """Right-hand side ``S_lam^(m)`` of the projected second-order equation."""
    acc = _cubic_source(q, m).scale(sign)
    for nu in range(1, lam):
        th = thetas[nu]
        low = polys.get((lam - nu, m))
        if th and low is not None:
            acc = acc - low.differentiate().differentiate().scale(th)
    return acc


class _Workspace:
    """Mutable scratch copy used while probing unknowns at a new order."""

    def __init__(self, state: PerturbativeState, lam: int):
        self.state = state
        self.lam = lam
        self.polys = {k: v for k, v in state.polys.items() if k[0] < lam}
        self.mode_data = dict(state.mode_data)
        self.cfg = state.config

    def data(self, lam: int, m: int) -> Fraction:
        if m == 0:
            return self.state.free_data.get(lam, Fraction(0))
        return self.mode_data.get((lam, m), Fraction(0))

    def set_datum(self, lam: int, m: int, value: Fraction) -> None:
        """Change a mode ``m >= 1`` datum at order ``lam`` and rebuild order ``lam + 1``."""
        old = self.data(lam, m)
        if value == old:
            return
        self.mode_data[(lam, m)] = value
        p = self.polys.get((lam, m), TrigPoly()) + TrigPoly.cos(omega(m), value - old)
        self._put(lam, m, p)
        nxt = lam + 1
        if nxt < self.lam:
            self.build_order(nxt, self.state.thetas)

    def _put(self, lam, m, p):
        if p:
            self.polys[(lam, m)] = p
        else:
            self.polys.pop((lam, m), None)

    def build_order(self, lam: int, thetas, extra=()) -> dict:
        seeded = [m for (sigma, m), v in self.mode_data.items() if sigma == lam and v]
        modes = _target_modes(self.polys, lam, self.cfg.cutoff, tuple(extra) + tuple(seeded))
        q = _cubic_products(self.polys, lam, modes)
        sign = self.cfg.sign(lam)
        for key in [k for k in self.polys if k[0] == lam]:
            del self.polys[key]
        built = {}
        for m in modes:
            p = _assemble(self.polys, thetas, self.data, lam, m, sign, q)
            built[m] = p
        for m, p in built.items():
            self._put(lam, m, p)
        return built

    def candidate(self, m: int, theta) -> TrigPoly:
        thetas = list(self.state.thetas[: self.lam - 1]) + [Fraction(theta)]
        modes = _target_modes(self.polys, self.lam, self.cfg.cutoff, (m,))
        q = _cubic_products(self.polys, self.lam, modes)
        return _assemble(
            self.polys, thetas, self.data, self.lam, m, self.cfg.sign(self.lam), q
        )


def _solve_affine(p0: TrigPoly, p1: TrigPoly, key: tuple, what: str) -> Fraction:
    """Unknown ``x`` with ``secular(p0 + x (p1 - p0)) = 0``, pivoting on ``key``."""
    s0 = p0.secular_part()
    slope_poly = p1.secular_part() - s0
    slope = slope_poly.coeff(key[1], key[2], key[0])
    if slope == 0:
        raise DegenerateSlopeError(f"{what}: zero slope on tau*{key[2]}({key[1]} tau)")
    x = -s0.coeff(key[1], key[2], key[0]) / slope
    left = s0 + slope_poly.scale(x)
    if left:
        raise SecularResidueError(f"{what}: secular terms remain: {left.to_text()}")
    return x


def assemble_order(
    state: PerturbativeState,
    lam: int,
    m: int,
    unknown_theta=None,
    unknown_data=None,
) -> TrigPoly:
    """Candidate ``f_lam^(m)`` for ``lam = state.max_order + 1``.

    ``unknown_theta`` replaces ``theta_{lam-1}`` (default 0).  ``unknown_data``
    replaces the mode-``m`` datum of order ``lam - 2`` (``m >= 1`` only), with
    orders ``lam - 2`` and ``lam - 1`` rebuilt accordingly.
    """
    if lam != state.max_order + 1:
        raise ValueError(f"state is at order {state.max_order}; can only assemble {state.max_order + 1}")
    ws = _Workspace(state, lam)
    if unknown_data is not None:
        if m == 0 or lam - 2 < 2:
            raise ValueError("probed data must be a mode m >= 1 datum of order >= 2")
        ws.set_datum(lam - 2, m, Fraction(unknown_data))
    return ws.candidate(m, unknown_theta if unknown_theta is not None else 0)


def nonlinear_source(state: PerturbativeState, lam: int, m: int, theta=None) -> TrigPoly:
    """``N_lam^(m)`` with ``theta_{lam-1}`` taken from ``theta`` when the order is new."""
    if lam > state.max_order + 1 or lam < 1:
        raise ValueError(f"orders below {lam} are not available")
    thetas = list(state.thetas[: lam - 1])
    if lam - 1 < len(state.thetas) and theta is None:
        thetas.append(state.thetas[lam - 1])
    else:
        thetas.append(Fraction(theta or 0))
    polys = {k: v for k, v in state.polys.items() if k[0] < lam}
    modes = sorted({mm for (_, mm) in polys} | {m})
    q = _cubic_products(polys, lam, modes)
    return _nonlinear(polys, thetas, lam, m, state.config.sign(lam), q)


def solve_shift(state: PerturbativeState, lam: int) -> Fraction:
    """``theta_{lam-1}`` cancelling the secular part of ``f_lam^(0)``."""
    ws = _Workspace(state, lam)
    return _solve_affine(ws.candidate(0, 0), ws.candidate(0, 1), _secular_key(1), f"theta_{lam - 1}")


def _probe_set(state: PerturbativeState, lam: int) -> list:
    modes = set(range(1, state.config.probe_modes + 1))
    modes |= {m for m in state.active_modes(lam - 1) if m >= 1}
    if state.config.cutoff is not None:
        modes = {m for m in modes if m < state.config.cutoff}
    return sorted(modes)


def _forced_datum(ws: _Workspace, lam: int, m: int, theta: Fraction) -> ForcedDatum:
    base = ws.data(lam - 2, m)
    ws.set_datum(lam - 2, m, Fraction(0))
    p0 = ws.candidate(m, theta)
    ws.set_datum(lam - 2, m, Fraction(1))
    p1 = ws.candidate(m, theta)
    ws.set_datum(lam - 2, m, base)
    key = _secular_key(omega(m))
    slope = (p1 - p0).coeff(key[1], key[2], key[0])
    value = _solve_affine(p0, p1, key, f"f_{lam - 2}^({m})(0)")
    return ForcedDatum(lam, m, lam - 2, slope, value)


def solve_forced_data(state: PerturbativeState, lam: int, m: int) -> ForcedDatum:
    """Datum ``f_{lam-2}^(m)(0)`` cancelling the secular part of ``f_lam^(m)``."""
    if lam < 4 or m < 1:
        raise ValueError("forced data exist for lam >= 4 and m >= 1")
    if lam != state.max_order + 1:
        raise ValueError("can only solve at the next order")
    theta = solve_shift(state, lam)
    ws = _Workspace(state, lam)
    return _forced_datum(ws, lam, m, theta)


def advance(state: PerturbativeState) -> PerturbativeState:
    """Return a new state one order higher, with all secular terms removed."""
    lam = state.max_order + 1
    ws = _Workspace(state, lam)
    theta = _solve_affine(
        ws.candidate(0, 0), ws.candidate(0, 1), _secular_key(1), f"theta_{lam - 1}"
    )
    log = []
    if lam >= 4:
        for m in _probe_set(state, lam):
            rec = _forced_datum(ws, lam, m, theta)
            log.append(rec)
            ws.set_datum(lam - 2, m, rec.value)
        if any(r.value != 0 for r in log):
            theta = _solve_affine(
                ws.candidate(0, 0), ws.candidate(0, 1), _secular_key(1), f"theta_{lam - 1}"
            )
    thetas = list(state.thetas[: lam - 1]) + [theta]
    built = ws.build_order(lam, thetas, extra=(0,))
    for m, p in built.items():
        if not p.is_periodic():
            raise SecularResidueError(
                f"f_{lam}^({m}) keeps secular terms: {p.secular_part().to_text()}"
            )
    new = state.copy()
    new.max_order = lam
    new.polys = dict(ws.polys)
    new.thetas = thetas
    new.mode_data = ws.mode_data
    new.forced_log = state.forced_log + log
    return new


def expand(
    order: int,
    free_data: Optional[Mapping] = None,
    config: Optional[EngineConfig] = None,
) -> PerturbativeState:
    """Run the construction from the seed up to ``order``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    state = seed(free_data, config)
    while state.max_order < order:
        state = advance(state)
    return state


def residual(
    state: PerturbativeState, lam: int, m: int, thetas: Optional[Mapping[int, Fraction]] = None
) -> TrigPoly:
    """``f'' + w_m**2 f - S`` for a stored order; zero for a true solution.

    ``thetas`` optionally overrides individual shifts (by index) in the source.
    """
    if not 1 <= lam <= state.max_order:
        raise ValueError(f"order {lam} not computed")
    th = list(state.thetas)
    for k, v in (thetas or {}).items():
        th[k] = Fraction(v)
    polys = {k: v for k, v in state.polys.items() if k[0] <= lam}
    modes = sorted({mm for (_, mm) in polys} | {m})
    q = _cubic_products(polys, lam, modes)
    f = state.poly(lam, m)
    w = omega(m)
    lhs = f.differentiate().differentiate() + f.scale(w * w)
    return lhs - _source(polys, th, lam, m, state.config.sign(lam), q)


def frequency(state: PerturbativeState, epsilon: float) -> float:
    return state.frequency(epsilon)


def evaluate_solution(state: PerturbativeState, epsilon: float, t: float, psi: float) -> float:
    return state.evaluate(epsilon, t, psi)
