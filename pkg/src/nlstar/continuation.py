"""Kirchhoff matching at fixed k and continuation of spectral curves.

A general (not necessarily central-Dirichlet) state is fixed by k and one
coordinate u_e per edge with signed amplitude
``a_e = sigma_e sqrt(m_e) = b tanh(u_e)``, where b = 1 (g=+1) or
1/sqrt(2) (g=-1). The sign is part of the coordinate, so the profile
depends smoothly on u_e through m_e = 0 and no sign bookkeeping is needed
when chi(l_e) passes through zero; the singular end m -> 1 (or 1/2) sits
at |u_e| -> infinity, where 1 - m (or 1/2 - m) = O(exp(-2|u_e|)) is
evaluated without cancellation. The matching conditions at the centre
are the E equations

    phi_e(0) - phi_1(0) = 0   (e = 2..E),     sum_e phi_e'(0) = 0,

with phi_e(0) = chi(l_e) and phi_e'(0) = -chi'(l_e). Together with k they
define curves in the (k, N) plane, traced here by pseudo-arclength
continuation in the coordinates z = (u_1, ..., u_E, k / k_seed).
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import interval as iv
from . import stargraph as sg
from .errors import (DomainError, NoConvergence, RangeEscape, RuleViolation,
                     StepCollapse)

TOL = 1e-10
FD_STEP = 1e-7
MAX_NEWTON = 50
MAX_HALVINGS = 20
BIFURCATION_COND = 1e10
# a sample must satisfy the Kirchhoff bound with this slack
SAMPLE_TOL = 1e-9


def amplitude_bound(g):
    """|a| stays below 1 (g=+1, m < 1) or 1/sqrt(2) (g=-1, m < 1/2)."""
    return 1.0 if g == 1 else 1.0 / math.sqrt(2.0)


U_MAX = iv.U_MAX


# ------------------------------------------------------------ residual

@dataclass
class MatchingResidual:
    """Continuity gaps phi_e(0) - phi_1(0) (e >= 2) followed by the flux sum."""

    r: np.ndarray
    k: float
    amplitude: float

    @property
    def continuity(self):
        return self.r[:-1]

    @property
    def flux(self):
        return float(self.r[-1])

    def norm(self):
        return float(np.max(np.abs(self.r))) if self.r.size else 0.0

    def converged(self, tol=TOL):
        cont = float(np.max(np.abs(self.continuity))) if self.r.size > 1 else 0.0
        return (cont <= tol * self.amplitude
                and abs(self.flux) <= tol * self.k * self.amplitude)


def residual(graph, k, profiles):
    """Matching residual of the candidate profiles {sigma_e, m_e} at k."""
    if not k > 0.0:
        raise DomainError(f"k must be positive, got {k!r}")
    if len(profiles) != graph.E:
        raise DomainError(f"need {graph.E} profiles, got {len(profiles)}")
    vals, slopes = [], []
    for prof, ell in zip(profiles, graph.lengths):
        v, s = sg.edge_value_slope(graph.g, prof, k, ell)
        vals.append(v)
        slopes.append(s)
    r = np.array([v - vals[0] for v in vals[1:]] + [math.fsum(slopes)])
    amp = max((iv.amplitude(graph.g, p.param, k) for p in profiles if p.m > 0.0),
              default=0.0)
    return MatchingResidual(r, k, amp)


def _edge_terms(graph, u, k):
    vals = np.empty(graph.E)
    slopes = np.empty(graph.E)
    sqs = np.empty(graph.E)
    for e, ell in enumerate(graph.lengths):
        sigma, p = iv.deformation_of_u(graph.g, u[e])
        vals[e], slopes[e], sqs[e] = iv.edge_terms(graph.g, sigma, p, k, ell)
    return vals, slopes, sqs


def _raw_residual(graph, u, k):
    vals, slopes, _ = _edge_terms(graph, u, k)
    return np.concatenate([vals[1:] - vals[0], [math.fsum(slopes)]])


def _max_amp(graph, u, k):
    # max_e amplitude of chi
    if not len(u):
        return 0.0
    _, p = iv.deformation_of_u(graph.g, float(np.max(np.abs(u))))
    if p.m == 0.0:
        return 0.0
    if graph.g == 1:
        return k * math.sqrt(2.0 * p.m / (1.0 + p.m))
    return k * math.sqrt(p.m / p.hg)


def graph_norm(graph, u, k):
    """N = sum_e int phi_e^2 for the state (u, k)."""
    return math.fsum(_edge_terms(graph, u, k)[2])


def _ok(graph, u, k, r, tol):
    amp = _max_amp(graph, u, k)
    cont = float(np.max(np.abs(r[:-1]))) if r.size > 1 else 0.0
    return cont <= tol * amp and abs(r[-1]) <= tol * k * amp


def _in_box(graph, u, k):
    return k > 0.0 and bool(np.all(np.abs(u) < U_MAX))


def _fd_jacobian(F, x, steps):
    cols = []
    for i in range(len(x)):
        h = steps[i]
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        cols.append((F(xp) - F(xm)) / (2.0 * h))
    return np.column_stack(cols)


def _solve_linear(J, rhs):
    try:
        return np.linalg.solve(J, rhs)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(J, rhs, rcond=None)[0]


def _damped_newton(F, x0, inbox, done, weights, steps, max_iter=MAX_NEWTON,
                   max_halvings=MAX_HALVINGS):
    """Newton with step halving; returns (x, F(x), iterations)."""
    x = np.array(x0, dtype=float)
    fx = F(x)
    merit = float(np.linalg.norm(weights * fx))
    best = (merit, x.copy())
    for it in range(max_iter):
        if done(x, fx):
            return x, fx, it
        J = _fd_jacobian(F, x, steps(x))
        dx = _solve_linear(J, -fx)
        lam = 1.0
        escaped = True
        for _ in range(max_halvings + 1):
            xn = x + lam * dx
            if inbox(xn):
                escaped = False
                fn = F(xn)
                mn = float(np.linalg.norm(weights * fn))
                if mn < merit or done(xn, fn):
                    break
            lam *= 0.5
        else:
            if escaped:
                raise RangeEscape("Newton step leaves the admissible box after "
                                  f"{max_halvings} halvings", best[1], best[0])
            raise NoConvergence("damped Newton step does not reduce the residual",
                                best[1], best[0])
        x, fx, merit = xn, fn, mn
        if merit < best[0]:
            best = (merit, x.copy())
    if done(x, fx):
        return x, fx, max_iter
    raise NoConvergence(f"no convergence in {max_iter} Newton iterations "
                        f"(residual {merit!r})", best[1], best[0])


def _clip_steps(graph, u, h=FD_STEP):
    # keep u +- h inside the box by shrinking the difference step
    room = U_MAX - np.abs(u)
    return np.maximum(np.minimum(h, 0.5 * room), 1e-14)


def _u_of_profile(g, prof):
    return iv.u_of_deformation(g, prof.sigma, prof.param)


def state_of(solution):
    """State coordinates and k of a solution: (u, k)."""
    u = np.array([_u_of_profile(solution.g, p) for p in solution.profiles])
    return u, solution.k


def signed_amplitudes(graph, u):
    """a_e = sigma_e sqrt(m_e) of the state coordinates."""
    return amplitude_bound(graph.g) * np.tanh(np.asarray(u, dtype=float))


def solution_from_state(graph, u, k, info=None):
    """Assemble a :class:`GraphSolution` from state coordinates."""
    profs = []
    for ue in u:
        sigma, p = iv.deformation_of_u(graph.g, float(ue))
        profs.append(sg.EdgeProfile.from_param(sigma, p, 1))
    return sg.assemble(graph, k, profs, info=info)


def solve_matching(graph, k, profiles, tol=TOL, max_iter=MAX_NEWTON):
    """Newton solve of the matching equations in {m_e} at fixed k.

    ``profiles`` is a list of :class:`EdgeProfile` (or a solution). The
    iteration runs in the state coordinates u_e, so sigma_e follows the
    sign of u_e after every step.
    """
    if isinstance(profiles, sg.GraphSolution):
        profiles = profiles.profiles
    if len(profiles) != graph.E:
        raise DomainError(f"need {graph.E} profiles, got {len(profiles)}")
    for p in profiles:
        iv.check_m(graph.g, p.param)
    u0 = np.array([_u_of_profile(graph.g, p) for p in profiles])
    if not _in_box(graph, u0, k):
        raise RangeEscape("initial profiles outside the admissible range", u0, None)
    F = lambda u: _raw_residual(graph, u, k)
    if not np.all(np.isfinite(F(u0))):
        raise DomainError("initial residual is not finite")
    w = np.ones(graph.E)
    w[-1] = 1.0 / k
    u, r, it = _damped_newton(
        F, u0, lambda u: _in_box(graph, u, k),
        lambda u, r: _ok(graph, u, k, r, tol), w,
        lambda u: _clip_steps(graph, u), max_iter)
    return solution_from_state(graph, u, k, {"newton_iterations": it})


def solve_at_norm(graph, N, u0, k0, tol=TOL, max_iter=MAX_NEWTON):
    """Solve matching together with sum_e int phi_e^2 = N for (u, k)."""
    if not N > 0.0:
        raise DomainError(f"target norm must be positive, got {N!r}")
    E = graph.E

    def F(x):
        a, k = x[:E], x[E] * k0
        return np.concatenate([_raw_residual(graph, a, k), [graph_norm(graph, a, k) / N - 1.0]])

    def done(x, fx):
        a, k = x[:E], x[E] * k0
        return _ok(graph, a, k, fx[:E], tol) and abs(fx[E]) <= 1e-12

    def inbox(x):
        return _in_box(graph, x[:E], x[E] * k0)

    w = np.ones(E + 1)
    w[E - 1] = 1.0 / k0

    def steps(x):
        return np.concatenate([_clip_steps(graph, x[:E]), [FD_STEP]])

    x, _, it = _damped_newton(F, np.concatenate([u0, [1.0]]), inbox, done, w, steps, max_iter)
    return solution_from_state(graph, x[:E], x[E] * k0, {"newton_iterations": it})


# ------------------------------------------------------ linear seeding

def _poles(lengths, k_hi):
    ps = []
    for ell in lengths:
        j = 1
        while j * math.pi / ell <= k_hi:
            ps.append(j * math.pi / ell)
            j += 1
    ps.sort()
    out = []
    for p in ps:
        if out and p - out[-1] <= 1e-12 * p:
            continue
        out.append(p)
    return out


def linear_eigenvalues(lengths, count):
    """Lowest ``count`` roots of sum_e cot(k l_e) = 0 (k > 0).

    These are the eigenvalues of the linear star with Kirchhoff centre and
    Dirichlet ends whose eigenfunctions do not vanish at the centre. Each
    interval between consecutive poles j pi / l_e contains exactly one,
    because the sum decreases from +inf to -inf there.
    """
    lengths = [float(x) for x in lengths]
    if count < 1:
        return []
    k_hi = math.pi / max(lengths)
    while True:
        poles = [0.0] + _poles(lengths, k_hi)
        if len(poles) - 1 >= count:
            break
        k_hi *= 2.0
    f = lambda k: math.fsum(1.0 / math.tan(k * ell) for ell in lengths)
    roots = []
    for lo, hi in zip(poles[:-1], poles[1:]):
        eps = 1e-13 * hi
        roots.append(brentq(f, lo + eps, hi - eps, xtol=1e-15, rtol=1e-15, maxiter=300))
        if len(roots) == count:
            break
    return roots


def seed_from_linear(graph, index=0, N=1e-8, tol=TOL):
    """Nonlinear solution of small norm N on the branch of a linear eigenvalue.

    Edge amplitudes of the linear eigenfunction are c / sin(k l_e); for
    small m, chi ~ sqrt(2) k a sin(k x), which fixes a_e to first order.
    The augmented Newton solve then lands on the nonlinear branch.
    """
    k0 = linear_eigenvalues(graph.lengths, index + 1)[index]
    amps = np.array([1.0 / math.sin(k0 * ell) for ell in graph.lengths])
    n_lin = sum(A * A * (0.5 * ell - math.sin(2.0 * k0 * ell) / (4.0 * k0))
                for A, ell in zip(amps, graph.lengths))
    c = math.sqrt(N / n_lin)
    a0 = c * amps / (math.sqrt(2.0) * k0)
    sol = solve_at_norm(graph, N, np.arctanh(a0 / amplitude_bound(graph.g)), k0, tol)
    sol.info["seed"] = f"linear:{index}"
    sol.info["k_linear"] = k0
    return sol


# ----------------------------------------------------------- tracing

@dataclass
class Event:
    index: int
    kind: str
    detail: dict = field(default_factory=dict)


@dataclass
class SpectralCurve:
    """Ordered samples of a spectral curve with their events."""

    graph: object
    samples: list
    states: list
    events: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    @property
    def k(self):
        return np.array([s.k for s in self.samples])

    @property
    def N(self):
        return np.array([s.N for s in self.samples])

    def __len__(self):
        return len(self.samples)

    def events_at(self, index):
        return [ev for ev in self.events if ev.index == index]


def _z_map(graph, k_seed):
    E = graph.E

    def R(z):
        return _raw_residual(graph, z[:E], z[E] * k_seed)

    return R


def _weights(graph, k):
    w = np.ones(graph.E)
    w[-1] = 1.0 / k
    return w


def _tangent(graph, z, k_seed, prev=None, direction=1):
    E = graph.E
    R = _z_map(graph, k_seed)
    steps = np.concatenate([_clip_steps(graph, z[:E]), [FD_STEP]])
    J = _fd_jacobian(R, z, steps) * _weights(graph, z[E] * k_seed)[:, None]
    _, _, vt = np.linalg.svd(J)
    t = vt[-1]
    t = t / np.linalg.norm(t)
    if prev is not None:
        if float(t @ prev) < 0.0:
            t = -t
    else:
        # orient by dN/ds, falling back to dk/ds where N is stationary
        h = 1e-6
        n_plus = graph_norm(graph, z[:E] + h * t[:E], (z[E] + h * t[E]) * k_seed)
        n_minus = graph_norm(graph, z[:E] - h * t[:E], (z[E] - h * t[E]) * k_seed)
        dn = n_plus - n_minus
        lead = dn if abs(dn) > 1e-14 * max(abs(n_plus), 1e-300) else t[E]
        if lead * direction < 0.0:
            t = -t
    cond = np.linalg.cond(np.vstack([J, t]))
    return t, cond


def _corrector(graph, z_pred, t, k_seed, tol, max_iter=12):
    E = graph.E
    R = _z_map(graph, k_seed)

    def F(z):
        return np.concatenate([R(z), [float(t @ (z - z_pred))]])

    def done(z, fz):
        return _ok(graph, z[:E], z[E] * k_seed, fz[:E], tol) and abs(fz[E]) <= 1e-12

    def inbox(z):
        return _in_box(graph, z[:E], z[E] * k_seed)

    w = np.concatenate([_weights(graph, z_pred[E] * k_seed), [1.0]])

    def steps(z):
        return np.concatenate([_clip_steps(graph, z[:E]), [FD_STEP]])

    return _damped_newton(F, z_pred, inbox, done, w, steps, max_iter=max_iter, max_halvings=8)


def _near_bound(graph, u, margin=1.0):
    return bool(np.any(np.abs(u) > U_MAX - margin))


def trace_curve(graph, seed, direction=1, step=1e-2, step_min=1e-8, step_max=5e-2,
                max_samples=500, kmax=None, kmin=None, n_cap=None, n_min=0.0,
                tol=TOL, collapse=1e-12):
    """Pseudo-arclength continuation of the spectral curve through ``seed``.

    ``direction`` = +1 starts towards increasing N. Steps are taken in
    z = (u, k/k_seed); a step is accepted only if the corrector converges
    and the move in normalised (k/k_seed, N/max(N_seed, 1)) is at most
    ``step_max``. Successful corrections grow the step (up to
    ``step_max``), slow ones shrink it (down to ``step_min``); failed ones
    halve it, and below ``collapse`` a :class:`StepCollapse` carrying the
    partial curve is raised.
    """
    u0, k_seed = state_of(seed)
    E = graph.E
    if not _in_box(graph, u0, k_seed):
        raise DomainError("seed lies outside the resolvable parameter range")
    res = _raw_residual(graph, u0, k_seed)
    if not _ok(graph, u0, k_seed, res, SAMPLE_TOL):
        raise DomainError("seed does not satisfy the matching conditions")
    n_scale = max(seed.N, 1.0)
    z = np.concatenate([u0, [1.0]])
    first = solution_from_state(graph, u0, k_seed)
    curve = SpectralCurve(graph, [first], [z.copy()],
                          metadata={"k_seed": k_seed, "N_seed": seed.N, "direction": direction,
                                    "step_max": step_max, "stop": None,
                                    "seed": seed.info.get("seed", "solution")})
    t, cond = _tangent(graph, z, k_seed, direction=direction)
    h = min(max(step, step_min), step_max)
    while len(curve.samples) < max_samples:
        prev = curve.samples[-1]
        accepted = False
        while not accepted:
            if h < collapse:
                curve.metadata["stop"] = "step_collapse"
                err = StepCollapse(f"continuation step fell below {collapse!r} "
                                   f"after {len(curve.samples)} samples")
                err.curve = curve
                raise err
            z_pred = z + h * t
            try:
                z_new, _, its = _corrector(graph, z_pred, t, k_seed, tol)
            except (NoConvergence, RangeEscape, DomainError, ValueError, ZeroDivisionError):
                h *= 0.5
                continue
            k_new = z_new[E] * k_seed
            n_new = graph_norm(graph, z_new[:E], k_new)
            dist = math.hypot(k_new / k_seed - prev.k / k_seed, (n_new - prev.N) / n_scale)
            if dist > step_max:
                h *= 0.5
                continue
            accepted = True
        u_new = z_new[:E]
        if E > 0 and np.all(np.sign(u_new) == -np.sign(z[:E])) and np.all(z[:E] != 0.0):
            # all amplitudes flipped: the step went through the trivial solution
            curve.metadata["stop"] = "trivial_solution"
            break
        t_new, cond = _tangent(graph, z_new, k_seed, prev=t)
        sol = solution_from_state(graph, u_new, k_new)
        idx = len(curve.samples)
        curve.samples.append(sol)
        curve.states.append(z_new.copy())
        if (t_new[E] > 0.0) != (t[E] > 0.0) and t[E] != 0.0:
            curve.events.append(Event(idx, "FOLD", {"k": k_new, "N": n_new}))
        if cond > BIFURCATION_COND:
            curve.events.append(Event(idx, "BIFURCATION_SUSPECT", {"cond": float(cond)}))
        z, t = z_new, t_new
        if its <= 3:
            h = min(1.5 * h, step_max)
        elif its > 6:
            h = max(0.5 * h, step_min)
        if kmax is not None and k_new >= kmax:
            curve.metadata["stop"] = "kmax"
            break
        if kmin is not None and k_new <= kmin:
            curve.metadata["stop"] = "kmin"
            break
        if n_new <= n_min:
            curve.metadata["stop"] = "n_min"
            break
        if n_cap is not None and n_new >= n_cap:
            curve.metadata["stop"] = "n_cap"
            break
        if _near_bound(graph, u_new):
            curve.metadata["stop"] = "parameter_bound"
            break
    if curve.metadata["stop"] is None:
        curve.metadata["stop"] = "max_samples"
    return curve


# ------------------------------------------------ central-Dirichlet events

@dataclass
class CrossingEvent:
    """Central-Dirichlet crossing between samples ``after`` and ``after + 1``.

    ``at_sample`` is set when a sample itself is the crossing point.
    """

    after: int
    solution: object
    state: np.ndarray
    nodal_before: tuple
    nodal_after: tuple
    nodal_at: tuple
    jumps: tuple
    rule_ok: bool
    at_sample: bool = False

    def as_dict(self):
        return {"k": self.solution.k, "N": self.solution.N,
                "centre_value": self.solution.centre_value,
                "nodal_before": list(self.nodal_before), "nodal_after": list(self.nodal_after),
                "nodal_at": list(self.nodal_at), "jumps": list(self.jumps),
                "rule_ok": self.rule_ok}


def _cd_value(sol):
    amp = sol.max_amplitude()
    if abs(sol.centre_value) <= TOL * max(amp, 1e-300):
        return 0.0
    return sol.centre_value


def _check_rule(before, after, at):
    jumps = tuple(b - a for a, b in zip(before, after))
    ok = all(abs(j) <= 1 for j in jumps) and all(
        n0 == min(a, b) for a, b, n0 in zip(before, after, at))
    return jumps, ok


def _refine_crossing(curve, i):
    graph = curve.graph
    E = graph.E
    k_seed = curve.metadata["k_seed"]
    z0, z1 = curve.states[i], curve.states[i + 1]
    d = z1 - z0

    def corrected(lam):
        zp = z0 + lam * d
        dn = d / np.linalg.norm(d)
        z, _, _ = _corrector(graph, zp, dn, k_seed, TOL, max_iter=30)
        return z

    def cv(lam):
        z = corrected(lam)
        vals, _, _ = _edge_terms(graph, z[:E], z[E] * k_seed)
        return float(np.mean(vals))

    lam = brentq(cv, 0.0, 1.0, xtol=1e-15, rtol=1e-15, maxiter=200)
    z = corrected(lam)
    return z, solution_from_state(graph, z[:E], z[E] * k_seed)


def detect_central_dirichlet_crossings(curve, strict=True):
    """Locate sign changes of the centre value and record the nodal jumps.

    For each crossing the nodal vectors on both sides and at the crossing
    are compared with the local rule: per-edge jumps in {-1, 0, +1} and
    n_at = min(n_before, n_after). A violation raises
    :class:`RuleViolation` when ``strict``; otherwise it is recorded with
    ``rule_ok = False``.
    """
    if len(curve.samples) < 2:
        return []
    events = []
    cvs = [_cd_value(s) for s in curve.samples]
    n = len(cvs)
    for i in range(n - 1):
        c0, c1 = cvs[i], cvs[i + 1]
        if c0 == 0.0:
            continue
        if c1 == 0.0:
            # the next sample sits on the crossing; look past it
            j = i + 1
            while j < n and cvs[j] == 0.0:
                j += 1
            if j == n:
                continue
            sol = curve.samples[i + 1]
            before = tuple(curve.samples[i].nodal)
            after = tuple(curve.samples[j].nodal)
            at = tuple(sol.nodal)
            jumps, ok = _check_rule(before, after, at)
            ev = CrossingEvent(i + 1, sol, curve.states[i + 1], before, after, at, jumps, ok, True)
        elif (c0 > 0.0) != (c1 > 0.0):
            z, sol = _refine_crossing(curve, i)
            sol = sg.assemble(curve.graph, sol.k, sol.profiles, central_dirichlet=True)
            before = tuple(curve.samples[i].nodal)
            after = tuple(curve.samples[i + 1].nodal)
            at = tuple(sol.nodal)
            jumps, ok = _check_rule(before, after, at)
            ev = CrossingEvent(i, sol, z, before, after, at, jumps, ok)
        else:
            continue
        if not ev.rule_ok and strict:
            raise RuleViolation(f"nodal jump {before} -> {after} with {at} at the "
                                "crossing breaks the min rule", ev)
        events.append(ev)
    return events


def with_crossings(curve, crossings):
    """Copy of ``curve`` with refined crossing points inserted as samples."""
    samples, states, mapping = [], [], {}
    inserts = {ev.after: ev for ev in crossings if not ev.at_sample}
    marks = {ev.after: ev for ev in crossings if ev.at_sample}
    new_events = []
    for i, (s, z) in enumerate(zip(curve.samples, curve.states)):
        mapping[i] = len(samples)
        samples.append(s)
        states.append(z)
        if i in marks:
            new_events.append(Event(mapping[i], "CENTRAL_DIRICHLET", marks[i].as_dict()))
        if i in inserts:
            ev = inserts[i]
            new_events.append(Event(len(samples), "CENTRAL_DIRICHLET", ev.as_dict()))
            samples.append(ev.solution)
            states.append(ev.state)
    for ev in curve.events:
        new_events.append(Event(mapping[ev.index], ev.kind, ev.detail))
    new_events.sort(key=lambda e: (e.index, e.kind))
    return SpectralCurve(curve.graph, samples, states, new_events, dict(curve.metadata))


def trace_through(graph, seed, max_samples=200, **kw):
    """Trace the curve through ``seed`` in both directions and stitch it.

    Samples run from the end of the decreasing-N branch through the seed
    to the end of the increasing-N branch. Central-Dirichlet crossings are
    left to :func:`detect_central_dirichlet_crossings`.
    """
    warnings = []
    halves = []
    for direction in (-1, 1):
        try:
            halves.append(trace_curve(graph, seed, direction=direction,
                                      max_samples=max_samples, **kw))
        except StepCollapse as exc:
            warnings.append(str(exc))
            halves.append(exc.curve)
    back, fwd = halves
    nb = len(back.samples)
    samples = back.samples[::-1] + fwd.samples[1:]
    states = back.states[::-1] + fwd.states[1:]
    events = [Event(nb - 1 - ev.index, ev.kind, ev.detail) for ev in back.events]
    events += [Event(nb - 1 + ev.index, ev.kind, ev.detail) for ev in fwd.events]
    meta = dict(fwd.metadata)
    meta["direction"] = 0
    meta["stop"] = [back.metadata["stop"], fwd.metadata["stop"]]
    meta["seed_index"] = nb - 1
    meta["warnings"] = warnings
    curve = SpectralCurve(graph, samples, states, events, meta)
    return curve
