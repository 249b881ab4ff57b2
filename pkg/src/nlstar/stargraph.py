"""Star graphs, nodal structure and central-Dirichlet solutions.

Edge e is parametrised by x_e in [0, l_e] with the centre at x_e = 0 and a
Dirichlet end at x_e = l_e. Every edge wavefunction is written as

    phi_e(x) = sigma_e * chi(g, m_e, k, l_e - x),

so the Dirichlet condition at the far end holds by construction. A
central-Dirichlet solution puts one half-wavelength of chi on each edge,
which leaves only the flux condition at the centre; that condition is a
scalar equation f_sigma(k) = 0 in the spectral parameter.
"""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import elliptic as ell_
from . import interval as iv
from .errors import (ConditionFailed, DomainError, DuplicateReducedLength,
                     NoRoot, ReducedGraphTooSmall)
from .interval import Deformation

SQRT2 = math.sqrt(2.0)
INFINITE = math.inf

KIRCHHOFF_TOL = 1e-10
DISTINCT_RTOL = 1e-9
SCAN_POINTS = 256
KMAX_FACTOR = 50.0
ROOT_RTOL = 1e-13


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class StarGraph:
    """Edge lengths (stored in ascending order) and interaction sign g."""

    lengths: tuple
    g: int = 1

    def __post_init__(self):
        try:
            ls = tuple(sorted(float(x) for x in self.lengths))
        except (TypeError, ValueError) as exc:
            raise DomainError(f"edge lengths must be real numbers: {exc}") from None
        if not ls:
            raise DomainError("a star graph needs at least one edge")
        for x in ls:
            if not (math.isfinite(x) and x > 0.0):
                raise DomainError(f"edge lengths must be finite and positive, got {x!r}")
        if self.g not in (1, -1):
            raise DomainError(f"interaction sign g must be +1 or -1, got {self.g!r}")
        object.__setattr__(self, "lengths", ls)

    @property
    def E(self):
        return len(self.lengths)

    def scaled(self, lam):
        return StarGraph(tuple(lam * x for x in self.lengths), self.g)

    def has_distinct_lengths(self, rtol=DISTINCT_RTOL):
        ls = self.lengths
        return all(ls[i + 1] - ls[i] > rtol * ls[i + 1] for i in range(len(ls) - 1))


class NodalVector(tuple):
    """Per-edge nodal-domain counts; INFINITE marks an edge where phi = 0."""

    def __new__(cls, entries):
        out = []
        for n in entries:
            if n == INFINITE:
                out.append(INFINITE)
            else:
                n = int(n)
                if n < 1:
                    raise DomainError(f"nodal counts must be positive, got {n}")
                out.append(n)
        return super().__new__(cls, out)

    @property
    def regular(self):
        return all(n != INFINITE for n in self)

    def __str__(self):
        return "|".join("inf" if n == INFINITE else str(n) for n in self)

    @classmethod
    def parse(cls, text):
        sep = "|" if "|" in text else ","
        return cls(INFINITE if t.strip() in ("inf", "INF") else int(t)
                   for t in text.split(sep))


@dataclass(frozen=True)
class EdgeProfile:
    """Sign, deformation parameter and nodal-domain count on one edge.

    ``mc`` (1 - m) and ``hg`` (1/2 - m) are kept separately so that m
    close to 1 or to 1/2 loses no precision.
    """

    sigma: int
    m: float
    n: float = 1
    mc: float = None
    hg: float = None

    def __post_init__(self):
        if self.sigma not in (1, -1):
            raise DomainError(f"sigma must be +1 or -1, got {self.sigma!r}")
        if self.mc is None:
            object.__setattr__(self, "mc", 1.0 - self.m)
        if self.hg is None:
            object.__setattr__(self, "hg", 0.5 - self.m)

    @classmethod
    def from_param(cls, sigma, p, n=1):
        return cls(sigma, p.m, n, p.mc, p.hg)

    @property
    def param(self):
        return Deformation(self.m, self.mc, self.hg)


@dataclass
class GraphSolution:
    """A stationary state on a star graph."""

    graph: StarGraph
    k: float
    profiles: list
    N: float
    nodal: NodalVector
    centre_value: float
    centre_flux: float
    info: dict = field(default_factory=dict)

    @property
    def g(self):
        return self.graph.g

    @property
    def E(self):
        return self.graph.E

    @property
    def sigmas(self):
        return tuple(p.sigma for p in self.profiles)

    @property
    def ms(self):
        return tuple(p.m for p in self.profiles)

    def max_amplitude(self):
        return max((iv.amplitude(self.g, p.param, self.k) for p in self.profiles),
                   default=0.0)

    def phi(self, e, x):
        """Wavefunction on edge ``e`` at x (0 = centre, l_e = outer end)."""
        p = self.profiles[e]
        ell = self.graph.lengths[e]
        x = np.asarray(x, dtype=float)
        if p.m == 0.0:
            return np.zeros_like(x) if x.ndim else 0.0
        return p.sigma * iv.chi(self.g, p.param, self.k, np.clip(ell - x, 0.0, None))

    def dphi(self, e, x):
        p = self.profiles[e]
        ell = self.graph.lengths[e]
        x = np.asarray(x, dtype=float)
        if p.m == 0.0:
            return np.zeros_like(x) if x.ndim else 0.0
        return -p.sigma * iv.chi_derivative(self.g, p.param, self.k,
                                            np.clip(ell - x, 0.0, None))

    def sample(self, points_per_edge=201):
        """Dense profile table as a list of (edge, x, phi) arrays."""
        out = []
        for e, ell in enumerate(self.graph.lengths):
            x = np.linspace(0.0, ell, points_per_edge)
            out.append((e, x, np.asarray(self.phi(e, x))))
        return out

    def is_central_dirichlet(self, tol=KIRCHHOFF_TOL):
        return abs(self.centre_value) <= tol * max(self.max_amplitude(), 1e-300)


@dataclass
class ConditionReport:
    """Outcome of a theorem condition check with all intermediate numbers."""

    theorem: str
    satisfied: bool
    details: dict
    message: str = ""

    @property
    def status(self):
        return "SATISFIED" if self.satisfied else "NOT_SATISFIED"

    def as_dict(self):
        return {"theorem": self.theorem, "status": self.status,
                "message": self.message, **self.details}


@dataclass(frozen=True)
class NodalCounts:
    nodal: NodalVector
    xi: int
    nu: int
    central_dirichlet: bool


# ------------------------------------------------------ theta and f_sigma

def theta(g, m):
    """Centre-slope factor theta(m) = chi'(0) / (sqrt(2) k^2)."""
    return iv.theta(g, m)


def _theta_deficit(g, p):
    # 1/2 - theta for g=+1, accurate for m near 1
    if p.m >= 0.5:
        return iv.theta_deficit(p)
    return 0.5 - iv.theta(g, p)


def _check_signs(graph, sigma):
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != graph.E or any(s not in (1, -1) for s in sigma):
        raise DomainError(f"need {graph.E} signs in {{+1, -1}}, got {sigma!r}")
    return sigma


def _repulsive_terms(lengths, k):
    # theta deficits (1/2 - theta_e); an edge at its threshold k l = pi has theta 0
    out = []
    for ell in lengths:
        if k * ell <= math.pi:
            out.append(0.5)
        else:
            out.append(_theta_deficit(1, iv.deformation_of_k(1, 1, ell, k)))
    return out


def f_sigma_repulsive(graph, sigma, k):
    """sum_e sigma_e theta+(m_{1,l_e}(k)) for k >= pi/l_1 (g=+1)."""
    sigma = _check_signs(graph, sigma)
    if graph.g != 1:
        raise DomainError("f_sigma_repulsive needs g=+1")
    k_lo = math.pi / graph.lengths[0]
    if not k >= k_lo:
        raise DomainError(f"k={k!r} below the admissible bound pi/l_1={k_lo!r}")
    d = _repulsive_terms(graph.lengths, k)
    # exact summation: the 1/2 parts cancel and only tiny deficits may remain
    return math.fsum([0.5 * s for s in sigma] + [-s * x for s, x in zip(sigma, d)])


def _attractive_term(ell, k):
    # (k^2) theta-(m) = 4 sqrt(m(1-m)) K(m)^2 / l^2 with m = m-_{1,l}(k)
    if k * ell >= math.pi:
        return 0.0
    if k == 0.0:
        p = Deformation.from_hg(0.0)
    else:
        p = iv.deformation_of_k(-1, 1, ell, k)
    kk = ell_.ellipk_complement(p.mc)
    return 4.0 * math.sqrt(p.m * p.mc) * kk * kk / (ell * ell)


def f_sigma_attractive(graph, sigma, k):
    """sum_e sigma_e 4 sqrt(m_e(1-m_e)) K(m_e)^2 / l_e^2 on 0 <= k < pi/l_E."""
    sigma = _check_signs(graph, sigma)
    if graph.g != -1:
        raise DomainError("f_sigma_attractive needs g=-1")
    k_hi = math.pi / graph.lengths[-1]
    if not 0.0 <= k < k_hi:
        raise DomainError(f"k={k!r} outside [0, pi/l_E) = [0, {k_hi!r})")
    return sum(s * _attractive_term(ell, k) for s, ell in zip(sigma, graph.lengths))


def _f_attractive_closed(graph, sigma, k):
    # same as f_sigma_attractive but with the limit value at k = pi/l_E
    return sum(s * _attractive_term(ell, k) for s, ell in zip(sigma, graph.lengths))


# --------------------------------------------------- condition checkers

def _require_theorem_graph(graph):
    if graph.E < 3:
        raise DomainError(f"the existence theorems need E >= 3 edges, got E={graph.E}")
    if not graph.has_distinct_lengths():
        raise DomainError("the existence theorems need pairwise distinct edge lengths")


def check_thm1_condition(graph):
    """Length condition for a regular central-Dirichlet solution at g=+1.

    Odd E is unconditional. For E = 2M the balanced sign choice works if
    sqrt(m+/m-) (1+m-)/(1+m+) > E/(E-2), where m+ and m- solve
    K(m) sqrt(1+m) = (pi/2) l_{M+2}/l_1 and (pi/2) l_{M+1}/l_1.
    """
    if graph.g != 1:
        raise DomainError("check_thm1_condition needs g=+1")
    _require_theorem_graph(graph)
    E = graph.E
    if E % 2 == 1:
        return ConditionReport("thm1", True, {"E": E, "parity": "odd"},
                               "odd number of edges")
    M = E // 2
    ls = graph.lengths
    # K sqrt(1+m) = (pi/2) l/l_1 is k_{1,1}(m) = pi l / l_1
    p_plus = iv.deformation_of_k(1, 1, 1.0, math.pi * ls[M + 1] / ls[0])
    p_minus = iv.deformation_of_k(1, 1, 1.0, math.pi * ls[M] / ls[0])
    lhs = math.sqrt(p_plus.m / p_minus.m) * (1.0 + p_minus.m) / (1.0 + p_plus.m)
    rhs = E / (E - 2.0)
    ok = lhs > rhs
    return ConditionReport(
        "thm1", ok,
        {"E": E, "parity": "even", "M": M, "m_plus": p_plus.m, "m_minus": p_minus.m,
         "lhs": lhs, "rhs": rhs},
        f"{'holds' if ok else 'fails'}: lhs={lhs!r} vs rhs={rhs!r}")


def _inv_sq(ls):
    return [1.0 / (x * x) for x in ls]


def check_thm2_condition(graph):
    """Length condition for a regular central-Dirichlet solution at g=-1.

    Lists every M < E/2 with
    sum_{M+1}^{E-1} l^-2 < sum_1^M l^-2 < sum_{M+1}^E l^-2, together with
    the weaker ratio conditions l_M/l_{M+1} < sqrt(M/(E-M-1)) and
    l_1/l_E > sqrt(M/(E-M)).
    """
    if graph.g != -1:
        raise DomainError("check_thm2_condition needs g=-1")
    _require_theorem_graph(graph)
    E = graph.E
    ls = graph.lengths
    w = _inv_sq(ls)
    rows = []
    admissible = []
    for M in range(1, (E + 1) // 2):
        head = sum(w[:M])
        mid = sum(w[M:E - 1])
        tail = sum(w[M:])
        left = mid < head
        right = head < tail
        weak_a = ls[M - 1] / ls[M] < math.sqrt(M / (E - M - 1.0))
        weak_b = ls[0] / ls[-1] > math.sqrt(M / float(E - M))
        row = {"M": M, "sum_head": head, "sum_mid": mid, "sum_tail": tail,
               "left": left, "right": right, "cond1": left and right,
               "cond2": weak_a and weak_b,
               "cond2_implies_cond1": (not (weak_a and weak_b)) or (left and right)}
        rows.append(row)
        if left and right:
            admissible.append(M)
    ok = bool(admissible)
    return ConditionReport(
        "thm2", ok, {"E": E, "admissible_M": admissible, "rows": rows},
        f"admissible M: {admissible}" if ok else "no admissible M")


# --------------------------------------------------------- sign choices

def choose_signs(graph, mode, M=None):
    """Sign vector for the central-Dirichlet construction.

    ``mode`` is ``"odd"`` (sigma_1 = -1, balanced rest, f(pi/l_1) > 0,
    maximal among such choices), ``"even_balanced"`` (+1 on e=1 and
    e >= M+2, -1 on 2..M+1 for E = 2M), ``"even_unbalanced"`` (one more
    -1 than that: -1 on 1..M+1) or ``"attractive"`` (+1 for e <= M,
    -1 otherwise).
    """
    E = graph.E
    if mode == "odd":
        if E % 2 != 1 or E < 3:
            raise DomainError("odd sign choice needs an odd number of edges >= 3")
        k0 = math.pi / graph.lengths[0]
        d = _repulsive_terms(graph.lengths, k0)
        best = None
        for neg in itertools.combinations(range(1, E), (E - 1) // 2):
            sigma = [1] * E
            sigma[0] = -1
            for e in neg:
                sigma[e] = -1
            f = math.fsum([0.5 * s for s in sigma] + [-s * x for s, x in zip(sigma, d)])
            if best is None or f > best[0]:
                best = (f, tuple(sigma))
        if not best[0] > 0.0:  # pragma: no cover - excluded by theta > 0 for e > 1
            raise AssertionError("no balanced sign choice gives f(pi/l_1) > 0")
        return best[1]
    if mode in ("even_balanced", "even_unbalanced"):
        if E % 2 != 0 or E < 4:
            raise DomainError("even sign choices need an even number of edges >= 4")
        half = E // 2
        if mode == "even_balanced":
            return tuple(1 if (e == 0 or e >= half + 1) else -1 for e in range(E))
        return tuple(-1 if e <= half else 1 for e in range(E))
    if mode == "attractive":
        if M is None or not 1 <= M < E / 2.0:
            raise DomainError(f"attractive sign choice needs 1 <= M < E/2, got M={M!r}")
        return tuple(1 if e < M else -1 for e in range(E))
    raise DomainError(f"unknown sign mode {mode!r}")


# --------------------------------------------------------- root finding

@dataclass
class Scan:
    """Record of the root search: grid, f-values and the bracket found."""

    k: list
    f: list
    bracket: tuple = None
    root: float = None
    iterations: int = 0

    def as_dict(self):
        return {"bracket": list(self.bracket) if self.bracket else None,
                "root": self.root, "iterations": self.iterations,
                "grid_min": self.k[0], "grid_max": self.k[-1], "points": len(self.k)}


def scan_root(f, lo, hi, geometric, points=SCAN_POINTS, rtol=ROOT_RTOL):
    """First sign change of ``f`` on a grid over [lo, hi], refined to a root.

    Bisection down to |dk| <= rtol * k, then secant steps that are kept
    only while they stay inside the bracket and reduce |f|.
    """
    if geometric:
        grid = np.geomspace(lo, hi, points)
    else:
        grid = np.linspace(lo, hi, points)
    grid[0], grid[-1] = lo, hi
    scan = Scan(k=[float(x) for x in grid], f=[])
    prev_k = prev_f = None
    for kk in scan.k:
        fk = f(kk)
        scan.f.append(fk)
        if fk == 0.0 and prev_k is not None:
            scan.bracket = (kk, kk)
            scan.root = kk
            return scan
        if prev_f is not None and (prev_f > 0.0) != (fk > 0.0):
            a, b, fa, fb = prev_k, kk, prev_f, fk
            break
        prev_k, prev_f = kk, fk
    else:
        raise NoRoot(f"no sign change of f_sigma on [{lo!r}, {hi!r}]", scan)
    scan.bracket = (a, b)
    it = 0
    while b - a > rtol * abs(b) and it < 200:
        c = 0.5 * (a + b)
        fc = f(c)
        it += 1
        if fc == 0.0:
            a = b = c
            fa = fb = 0.0
            break
        if (fc > 0.0) == (fa > 0.0):
            a, fa = c, fc
        else:
            b, fb = c, fc
    x, fx = (a, fa) if abs(fa) <= abs(fb) else (b, fb)
    for _ in range(3):
        if fa == fb:
            break
        c = b - fb * (b - a) / (fb - fa)
        if not a <= c <= b:
            break
        fc = f(c)
        it += 1
        if abs(fc) >= abs(fx):
            break
        x, fx = c, fc
        if fc == 0.0:
            break
        if (fc > 0.0) == (fa > 0.0):
            a, fa = c, fc
        else:
            b, fb = c, fc
    scan.root = x
    scan.iterations = it
    return scan


# ------------------------------------------------------------ assembly

def edge_value_slope(g, profile, k, ell):
    """(phi_e(0), dphi_e/dx(0)) evaluated directly from chi."""
    if profile.m == 0.0:
        return 0.0, 0.0
    p = profile.param
    v = profile.sigma * iv.chi(g, p, k, ell)
    s = -profile.sigma * iv.chi_derivative(g, p, k, ell)
    return v, s


def kirchhoff_residuals(graph, k, profiles):
    """(continuity spread, flux sum, centre value) from direct evaluation."""
    vals, slopes = [], []
    for prof, ell in zip(profiles, graph.lengths):
        v, s = edge_value_slope(graph.g, prof, k, ell)
        vals.append(v)
        slopes.append(s)
    spread = max(vals) - min(vals)
    return spread, math.fsum(slopes), math.fsum(vals) / len(vals)


def _edge_norm(g, prof, k, ell, central_dirichlet):
    if prof.m == 0.0:
        return 0.0
    if central_dirichlet:
        return iv.norm_of_m(g, int(prof.n), ell, prof.param)
    return iv.edge_terms(g, prof.sigma, prof.param, k, ell)[2]


def edge_nodal_count(g, prof, k, ell, central_dirichlet):
    """Nodal domains on one edge from its length and the wavelength."""
    if prof.m == 0.0:
        return INFINITE
    lam = iv.wavelength(g, prof.param, k)
    if not math.isfinite(lam):
        return 1
    r = 2.0 * ell / lam
    if central_dirichlet:
        return max(int(round(r)), 1)
    return int(math.floor(r)) + 1


def assemble(graph, k, profiles, central_dirichlet=None, info=None, exact_centre=False):
    """Build a :class:`GraphSolution`, filling in N, nodal vector and residuals.

    With ``exact_centre`` the centre value is recorded as exactly 0 (the
    profiles carry a node at the centre by construction).
    """
    spread, flux, centre = kirchhoff_residuals(graph, k, profiles)
    amp = max((iv.amplitude(graph.g, p.param, k) for p in profiles if p.m > 0.0),
              default=0.0)
    if exact_centre:
        centre = 0.0
    if central_dirichlet is None:
        central_dirichlet = abs(centre) <= KIRCHHOFF_TOL * max(amp, 1e-300)
    ns = [edge_nodal_count(graph.g, p, k, ell, central_dirichlet)
          for p, ell in zip(profiles, graph.lengths)]
    profiles = [EdgeProfile(p.sigma, p.m, n, p.mc, p.hg) for p, n in zip(profiles, ns)]
    N = math.fsum(_edge_norm(graph.g, p, k, ell, central_dirichlet and exact_centre)
                  for p, ell in zip(profiles, graph.lengths))
    info = dict(info or {})
    info.setdefault("continuity_spread", spread)
    info.setdefault("flux", flux)
    info["central_dirichlet"] = bool(central_dirichlet)
    return GraphSolution(graph, k, profiles, N, NodalVector(ns), centre, flux, info)


def nodal_counts(solution):
    """Nodal vector with total nodal points xi and nodal domains nu.

    Boundary zeros count as nodal points. Regular solutions obey
    nu = xi + 1 - E, central-Dirichlet ones nu = xi - 1. Returns ``None``
    for xi and nu when some edge carries no wavefunction.
    """
    sol = solution
    cd = sol.is_central_dirichlet()
    ns = NodalVector(edge_nodal_count(sol.g, p, sol.k, ell, cd)
                     for p, ell in zip(sol.profiles, sol.graph.lengths))
    if not ns.regular:
        return NodalCounts(ns, None, None, cd)
    total = sum(ns)
    if cd:
        return NodalCounts(ns, total + 1, total, True)
    return NodalCounts(ns, total, total - sol.E + 1, False)


# ------------------------------------------------------- constructions

def _cd_profiles(g, lengths, sigma, k):
    profs = []
    for s, ell in zip(sigma, lengths):
        p = iv.deformation_of_k(g, 1, ell, k) if k * ell != math.pi else Deformation.from_m(0.0)
        profs.append(EdgeProfile.from_param(s, p, 1))
    return profs


def _solve_cd_core(graph, sigma, k_lo=None, k_hi=None):
    # root of f_sigma on the admissible window, narrowed by optional bounds
    ls = graph.lengths
    if graph.g == 1:
        lo = math.pi / ls[0]
        hi = KMAX_FACTOR * math.pi / ls[0]
        if k_lo is not None:
            lo = max(lo, k_lo)
        f = lambda k: f_sigma_repulsive(graph, sigma, k)
        scan = scan_root(f, lo, hi, geometric=True)
    else:
        lo, hi = 0.0, math.pi / ls[-1]
        if k_hi is not None:
            hi = min(hi, k_hi)
        f = lambda k: _f_attractive_closed(graph, sigma, k)
        scan = scan_root(f, lo, hi, geometric=False)
    k0 = scan.root
    if graph.g == 1 and not k0 > math.pi / ls[0]:
        raise NoRoot("root of f_sigma sits on the admissible boundary", scan)
    if graph.g == -1 and not 0.0 < k0 < math.pi / ls[-1]:
        raise NoRoot("root of f_sigma sits on the admissible boundary", scan)
    return k0, scan


def _default_signs(graph, strategy, M, report):
    if graph.g == 1:
        if graph.E % 2 == 1:
            return choose_signs(graph, "odd")
        mode = "even_unbalanced" if strategy == "unbalanced" else "even_balanced"
        return choose_signs(graph, mode)
    if M is None:
        M = report.details["admissible_M"][0] if report.details["admissible_M"] else (graph.E - 1) // 2
    return choose_signs(graph, "attractive", M)


def _find_distinct(graph, sigma=None, M=None, strategy="balanced", force=False,
                   k_lo=None, k_hi=None):
    _require_theorem_graph(graph)
    if graph.g == 1:
        report = check_thm1_condition(graph)
    else:
        report = check_thm2_condition(graph)
        if M is not None and M not in report.details["admissible_M"]:
            report = ConditionReport("thm2", False, report.details,
                                     f"M={M} is not admissible "
                                     f"(admissible: {report.details['admissible_M']})")
    if not report.satisfied and not force:
        raise ConditionFailed(f"{report.theorem} condition not satisfied: {report.message}",
                              report)
    if sigma is None:
        sigma = _default_signs(graph, strategy, M, report)
    sigma = _check_signs(graph, sigma)
    k0, scan = _solve_cd_core(graph, sigma, k_lo, k_hi)
    profiles = _cd_profiles(graph.g, graph.lengths, sigma, k0)
    info = {"condition": report.as_dict(), "scan": scan.as_dict(), "sigma": list(sigma)}
    if graph.g == -1:
        info["f_at_ends"] = (_f_attractive_closed(graph, sigma, 0.0),
                             _f_attractive_closed(graph, sigma, math.pi / graph.lengths[-1]))
    return assemble(graph, k0, profiles, central_dirichlet=True, info=info,
                    exact_centre=True)


def reduce_equal_pairs(graph, rtol=DISTINCT_RTOL):
    """Remove pairs of equal-length edges.

    The two edges of a pair get opposite signs and the same m, so their
    centre slopes cancel for every k. Returns ``(reduced graph, pairs,
    kept)`` where ``pairs`` lists ``((i, +1), (j, -1))`` index/sign pairs in
    the original edge order and ``kept`` the indices that remain.
    """
    ls = graph.lengths
    pairs, kept = [], []
    i = 0
    while i < len(ls):
        if i + 1 < len(ls) and ls[i + 1] - ls[i] <= rtol * ls[i + 1]:
            pairs.append(((i, 1), (i + 1, -1)))
            i += 2
        else:
            kept.append(i)
            i += 1
    if not pairs:
        return graph, [], kept
    if len(kept) < 3:
        raise ReducedGraphTooSmall(
            f"removing {len(pairs)} equal-length pair(s) leaves {len(kept)} edge(s); need 3")
    reduced = StarGraph(tuple(ls[i] for i in kept), graph.g)
    if not reduced.has_distinct_lengths(rtol):
        raise DuplicateReducedLength("equal lengths remain after pair removal")
    return reduced, pairs, kept


def extend_with_pairs(solution, graph, pairs, kept):
    """Rebuild a reduced-graph central-Dirichlet solution on the full graph."""
    k = solution.k
    profs = [None] * graph.E
    for idx, prof in zip(kept, solution.profiles):
        profs[idx] = prof
    for (i, si), (j, sj) in pairs:
        ell = graph.lengths[i]
        if graph.g == 1 and not k * ell > math.pi:
            raise NoRoot(f"k={k!r} leaves no half-wavelength on the paired edges of length {ell!r}")
        if graph.g == -1 and not k * ell < math.pi:
            raise NoRoot(f"k={k!r} leaves no half-wavelength on the paired edges of length {ell!r}")
        p = iv.deformation_of_k(graph.g, 1, ell, k)
        profs[i] = EdgeProfile.from_param(si, p, 1)
        profs[j] = EdgeProfile.from_param(sj, p, 1)
    info = dict(solution.info)
    info["reduced_lengths"] = list(solution.graph.lengths)
    info["pairs"] = [[i, j] for (i, _), (j, _) in pairs]
    info.pop("continuity_spread", None)
    info.pop("flux", None)
    return assemble(graph, k, profs, central_dirichlet=True, info=info, exact_centre=True)


def find_central_dirichlet(graph, sigma=None, M=None, strategy="balanced", force=False):
    """Regular central-Dirichlet solution with one nodal domain per edge.

    Uses the sign construction of the existence theorems (odd / balanced
    even for g=+1, the first admissible M for g=-1 unless ``M`` is given)
    and returns the first root of f_sigma on the scanned k-window. Equal
    edge lengths are paired off and re-attached with opposite signs.
    ``force`` skips the condition gate.
    """
    if graph.E < 3:
        raise DomainError(f"central-Dirichlet construction needs E >= 3, got E={graph.E}")
    if graph.has_distinct_lengths():
        return _find_distinct(graph, sigma, M, strategy, force)
    reduced, pairs, kept = reduce_equal_pairs(graph)
    pair_ls = [graph.lengths[i] for (i, _), _ in pairs]
    k_lo = math.pi / min(pair_ls) if graph.g == 1 else None
    k_hi = math.pi / max(pair_ls) if graph.g == -1 else None
    sub_sigma = None if sigma is None else [sigma[i] for i in kept]
    try:
        base = _find_distinct(reduced, sub_sigma, M, strategy, force, k_lo, k_hi)
    except NoRoot as exc:
        bound = f"k > {k_lo!r}" if graph.g == 1 else f"k < {k_hi!r}"
        raise NoRoot(f"{exc}; the paired edges need {bound} to carry one nodal domain "
                     "(a nodal vector with more domains on the long edges may still work)",
                     exc.scan) from None
    return extend_with_pairs(base, graph, pairs, kept)


def reduced_lengths(graph, nodal):
    nodal = NodalVector(nodal)
    if len(nodal) != graph.E or not nodal.regular:
        raise DomainError(f"need {graph.E} finite nodal counts, got {nodal}")
    return [ell / n for ell, n in zip(graph.lengths, nodal)]


def find_central_dirichlet_with_nodal_vector(graph, nodal, sigma=None, M=None,
                                             strategy="balanced", force=False):
    """Central-Dirichlet solution with n_e nodal domains on edge e.

    Solves on the star with reduced lengths l_e / n_e and repeats the
    profile periodically: edge e keeps k and m and gets sign
    sigma~_e (-1)^(n_e - 1). Equal reduced lengths that can be paired off
    are handled as in :func:`find_central_dirichlet`; otherwise they raise
    :class:`DuplicateReducedLength`.
    """
    nodal = NodalVector(nodal)
    red = reduced_lengths(graph, nodal)
    order = sorted(range(graph.E), key=lambda e: red[e])
    rgraph = StarGraph(tuple(red[e] for e in order), graph.g)
    if not rgraph.has_distinct_lengths():
        try:
            reduce_equal_pairs(rgraph)
        except (ReducedGraphTooSmall, DuplicateReducedLength) as exc:
            raise DuplicateReducedLength(
                f"reduced lengths {sorted(red)} are not pairwise distinct ({exc})") from None
    rsigma = None if sigma is None else [sigma[e] for e in order]
    try:
        core = find_central_dirichlet(rgraph, rsigma, M, strategy, force)
    except ConditionFailed as exc:
        raise ConditionFailed(f"reduced graph fails the existence condition: {exc}",
                              exc.report) from None
    k0 = core.k
    profs = [None] * graph.E
    for pos, e in enumerate(order):
        rp = core.profiles[pos]
        n = nodal[e]
        s = rp.sigma * (-1) ** (n - 1)
        profs[e] = EdgeProfile(s, rp.m, n, rp.mc, rp.hg)
    info = dict(core.info)
    info["reduced_lengths"] = list(rgraph.lengths)
    info["reduced_order"] = order
    info["core_k"] = k0
    info["core_m"] = list(core.ms)
    info.pop("continuity_spread", None)
    info.pop("flux", None)
    sol = assemble(graph, k0, profs, central_dirichlet=True, info=info, exact_centre=True)
    if tuple(sol.nodal) != tuple(nodal):  # pragma: no cover - guards the extension
        raise AssertionError(f"extended nodal vector {sol.nodal} != requested {nodal}")
    return sol
