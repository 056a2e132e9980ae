"""Mean-square excess of the truncated sinh-log flow over the Taylor flow.

For driftless linear vector fields the one-step mean-square error of the
truncated stochastic Taylor flow exceeds that of the sinh-log flow by

    E = E0 - eps * E1 - eps^2 * E2,

a quadratic in the top-coefficient perturbation with E0 >= 0 and E2 >= 0.
The word-pair moment table behind E is exact rational; floating point enters
only in the final contraction against the vector-field data.

Sign convention: the perturbation argument `eps` of :func:`evaluate_excess`
et al. follows the closed-form 4x4 matrix :func:`b_matrix` (under which the
exponential-Lie/Magnus truncation sits at eps = +1/6).  It is the negative of
the perturbation used by :func:`sinhlog.coeffs.sinhlog_closed_form`, whose
convention the exact table from :func:`excess_terms` keeps.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .coeffs import EpsPoly, sinhlog_closed_form
from .moments import MomentValue, expect_poly_product
from .words import Word, WordPoly, antipode, full_shuffle_of_letters, word, words_of_length


@dataclass(frozen=True)
class LinearVectorFieldSet:
    """Matrices a_1..a_d of the linear fields V_i(y) = a_i y."""

    matrices: tuple
    dim: int
    channels: int

    @classmethod
    def of(cls, matrices) -> "LinearVectorFieldSet":
        mats = tuple(np.asarray(m, dtype=float) for m in matrices)
        if not mats:
            raise ValueError("need at least one coefficient matrix")
        n = mats[0].shape[0]
        for m in mats:
            if m.shape != (n, n):
                raise ValueError("all coefficient matrices must be square of one size")
        return cls(mats, n, len(mats))

    def word_matrix(self, w) -> np.ndarray:
        """Composition matrix a_{w_1} a_{w_2} ... a_{w_k}."""
        out = np.eye(self.dim)
        for a in word(w).letters:
            if a > self.channels:
                raise ValueError("letter %d exceeds channel count %d" % (a, self.channels))
            out = out @ self.matrices[a - 1]
        return out

    def flow_matrix(self, w) -> np.ndarray:
        """Matrix multiplying J_w in the flow-map: differential-operator
        composition puts the last letter leftmost, a_{w_k} ... a_{w_1}."""
        return self.word_matrix(word(w).letters[::-1])

    def word_vector(self, w, y0) -> np.ndarray:
        return self.word_matrix(w) @ np.asarray(y0, dtype=float)


@dataclass
class ExcessBreakdown:
    """The three components of E = E0 - eps*E1 - eps^2*E2 at a data point."""

    e0: float
    e1: float
    e2: float
    eps: float
    order: int
    table: dict

    @property
    def excess(self) -> float:
        return self.e0 - self.eps * self.e1 - self.eps ** 2 * self.e2


def remainder_coefficient(w, eps):
    """Leading remainder split for a word of full length: returns (K, Jbar)
    with K the sinh-log coefficient polynomial and Jbar = w - K."""
    w = word(w)
    k = sinhlog_closed_form(w, eps)
    jbar = WordPoly.from_word(w) - k
    return k, jbar


@lru_cache(maxsize=None)
def excess_terms(n: int, d: int) -> dict:
    """Exact word-pair moment table at truncation grade n.

    Maps each pair (u, v) of words of length n+1 to the eps-quadratic
    expectation E(Jbar_u K_v + K_u Jbar_v + Jbar_u Jbar_v) as an EpsPoly of
    MomentValues, in the closed-form (+eps) parametrization.
    """
    if n + 1 > 4:
        raise ValueError("word length n+1 > 4 is too expensive for the exact table")
    if d > 3:
        raise ValueError("channel count above 3 is unsupported in the table")
    eps = EpsPoly.eps()
    ws = list(words_of_length(d, n + 1))
    parts = {w: remainder_coefficient(w, eps) for w in ws}
    table = {}
    for u in ws:
        k_u, jbar_u = parts[u]
        for v in ws:
            k_v, jbar_v = parts[v]
            m = expect_poly_product(jbar_u, k_v)
            m = m + expect_poly_product(k_u, jbar_v)
            m = m + expect_poly_product(jbar_u, jbar_v)
            if not isinstance(m, EpsPoly):
                m = EpsPoly.const(m)
            table[(u, v)] = m
    return table


def _contract(table: dict, vf: LinearVectorFieldSet, y0, h: float):
    """Contract the exact table against V_u(y0) . V_v(y0), at t = h.

    Returns (m0, m1, m2): the eps-power sums in the table's own (+eps)
    parametrization.
    """
    y0 = np.asarray(y0, dtype=float)
    if y0.shape != (vf.dim,):
        raise ValueError("data point has dimension %s, fields are %d-dimensional"
                         % (y0.shape, vf.dim))
    vecs = {}
    sums = [0.0, 0.0, 0.0]
    for (u, v), poly in table.items():
        if u not in vecs:
            vecs[u] = vf.word_vector(u, y0)
        if v not in vecs:
            vecs[v] = vf.word_vector(v, y0)
        dot = float(vecs[u] @ vecs[v])
        for k in range(3):
            mv = poly.coeff(k)
            if isinstance(mv, MomentValue) and mv:
                sums[k] += mv(h) * dot
    return sums


def evaluate_excess(vf: LinearVectorFieldSet, y0, h: float, n: int, eps: float) -> ExcessBreakdown:
    """Mean-square excess for a linear system at one step of length h.

    `eps` follows the b_matrix convention (see module docstring): the exact
    table is evaluated at the negated closed-form parameter, so
    E = E0 - eps*E1 - eps^2*E2 with E0 = sum of eps^0 terms.
    """
    table = excess_terms(n, vf.channels)
    m0, m1, m2 = _contract(table, vf, y0, h)
    # table is in the +eps closed-form parametrization: value(x) = m0 + m1 x + m2 x^2;
    # here E(eps) = value(-eps) = m0 - m1 eps + m2 eps^2 = E0 - eps E1 - eps^2 E2.
    return ExcessBreakdown(e0=m0, e1=m1, e2=-m2, eps=float(eps), order=n, table=table)


def b_matrix(eps) -> np.ndarray:
    """Closed-form symmetric 4x4 excess matrix at truncation grade 2 for
    two-channel linear systems; b(0) has eigenvalues {5/24, 0, 0, 0}.

    The (1,4)/(3,4) entries are -eps*(3*eps - 5/4): their eps^2 coefficient
    is pinned at -3 by the exact moment table (E(J_1^2 J_2 * J_2^3) = 3t^3)
    and by the reference eigenvalue list at eps = 1/6.
    """
    e = Fraction(eps).limit_denominator(10 ** 12) if isinstance(eps, float) else Fraction(eps)
    f = Fraction
    p = (e - f(1, 4)) * (3 * e - f(5, 12))
    q = e * (3 * e - f(11, 12))
    r = e * (3 * e - f(5, 4))
    rows = [
        [f(5, 24) - p, -q, -p, -r],
        [-q, -e * (3 * e - f(2, 3)), -q, -e * (3 * e - f(1, 2))],
        [-p, -q, f(5, 24) - p, -r],
        [-r, -e * (3 * e - f(1, 2)), -r, -5 * e * (3 * e - 1)],
    ]
    return np.array([[float(x) for x in row] for row in rows])


def eig_sym(m, tol: float = 1e-13, max_sweeps: int = 64) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
    descending order.  Off-diagonal Frobenius norm is driven below tol."""
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if np.max(np.abs(a - a.T)) > 1e-12 * max(1.0, np.max(np.abs(a))):
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2) * 2)
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < tol / (n * n):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) \
                    if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    else:
        raise RuntimeError("Jacobi sweep limit reached without convergence")
    return np.sort(np.diag(a))[::-1]


_GROUP_112 = ("112", "121", "211", "222")
_GROUP_221 = ("221", "212", "122", "111")


def quadratic_form_excess(vf: LinearVectorFieldSet, y0, h: float, eps: float) -> float:
    """Closed-form excess h^3 * sum of two b(eps) quadratic forms in the
    grade-3 composition vectors (two channels, truncation grade 2)."""
    if vf.channels != 2:
        raise ValueError("closed form requires exactly two channels")
    b = b_matrix(eps)
    total = 0.0
    for group in (_GROUP_112, _GROUP_221):
        xs = [vf.word_vector(w, y0) for w in group]
        for i in range(4):
            for j in range(4):
                total += b[i, j] * float(xs[i] @ xs[j])
    return h ** 3 * total


def excess_vs_quadratic_form(vf: LinearVectorFieldSet, y0, h: float, eps: float,
                             floor: float = 1e-30) -> float:
    """Relative difference between the moment-table route and the closed-form
    quadratic form; the flagship cross-validation of the symbolic pipeline."""
    direct = evaluate_excess(vf, y0, h, 2, eps).excess
    closed = quadratic_form_excess(vf, y0, h, eps)
    return abs(direct - closed) / max(abs(closed), floor)


def excess_grid(vf: LinearVectorFieldSet, u_range, v_range, h: float, n: int, eps: float):
    """Excess over a rectangle of 2d data points.

    u_range/v_range are (lo, hi, count) triples; returns a row-major list of
    (u0, v0, E) with u varying slowest.
    """
    if vf.dim != 2:
        raise ValueError("grids are defined for 2-dimensional systems")
    table = excess_terms(n, vf.channels)
    u_lo, u_hi, nu = u_range
    v_lo, v_hi, nv = v_range
    us = np.linspace(u_lo, u_hi, int(nu))
    vs = np.linspace(v_lo, v_hi, int(nv))
    rows = []
    for u0 in us:
        for v0 in vs:
            m0, m1, m2 = _contract(table, vf, (u0, v0), h)
            e = m0 - m1 * eps + m2 * eps ** 2
            rows.append((float(u0), float(v0), e))
    return rows


def grid_to_csv(rows) -> str:
    lines = ["u0,v0,E"]
    for u0, v0, e in rows:
        lines.append("%.17g,%.17g,%.17g" % (u0, v0, e))
    return "\n".join(lines) + "\n"


def eps_sweep(eps_values):
    """Eigenvalues of b(eps) along a parameter sweep: rows (eps, l1..l4),
    eigenvalues in descending order."""
    rows = []
    for e in eps_values:
        lams = eig_sym(b_matrix(float(e)))
        rows.append((float(e),) + tuple(float(x) for x in lams))
    return rows


def sweep_to_csv(rows) -> str:
    lines = ["eps,l1,l2,l3,l4"]
    for row in rows:
        lines.append(",".join("%.17g" % x for x in row))
    return "\n".join(lines) + "\n"
