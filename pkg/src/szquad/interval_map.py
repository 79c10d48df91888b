"""Transfer between symmetric circle rules and positive rules on [-1, 1].

The substitution x = cos(phi) identifies a measure psi on [-1, 1] with a
circle measure symmetric under phi -> -phi; its circle moments are the
Chebyshev moments c_k = int T_k(x) dpsi(x). A symmetric circle rule folds
to an interval rule: paired nodes +-phi give x = cos(phi) with weight
2*mu, a node at phi = 0 (or pi) becomes the endpoint +1 (or -1) keeping
its weight mu, fixed so that the interval masses sum to 1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMeasureError, SymmetryViolationError

TWO_PI = 2.0 * np.pi

# how close a node must be to 0 or pi to count as an endpoint
ENDPOINT_TOL = 1e-9

# worst allowed mismatch between mirror-image nodes
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class IntervalRule:
    """Nodes x (decreasing, endpoints allowed), positive weights, exactness."""

    x: np.ndarray
    lam: np.ndarray
    degree: int

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        lam = np.asarray(self.lam, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "lam", lam)
        if np.any(np.diff(x) >= 0):
            raise InvalidMeasureError("interval nodes must be strictly decreasing")
        if np.min(lam) <= 0:
            raise InvalidMeasureError("interval weights must be positive")


def chebyshev_values(x, k_max):
    """T_0..T_{k_max} at the points x via the three-term recurrence."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((k_max + 1, len(x)))
    out[0] = 1.0
    if k_max >= 1:
        out[1] = x
    for k in range(2, k_max + 1):
        out[k] = 2.0 * x * out[k - 1] - out[k - 2]
    return out


def symmetrize(interval_moments):
    """Circle moments of the symmetric lift of a measure on [-1, 1].

    Input: monomial moments int x^k dpsi, k = 0..N, of a positive measure
    with mass 1 (normalized here if m_0 differs slightly). Output:
    c_k = int T_k(x) dpsi(x), real with c_{-k} = c_k. The result is checked
    for positive definiteness through the available order.
    """
    m = np.asarray(interval_moments, dtype=float)
    if len(m) == 0 or m[0] <= 0:
        raise InvalidMeasureError("interval moment sequence has no positive mass")
    m = m / m[0]
    order = len(m) - 1
    c = np.empty(order + 1)
    coeffs = np.zeros(order + 1)
    prev = np.zeros(order + 1)
    coeffs[0] = 1.0                      # T_0
    c[0] = m[0]
    if order >= 1:
        prev, coeffs = coeffs, np.zeros(order + 1)
        coeffs[1] = 1.0                  # T_1
        c[1] = m[1]
    for k in range(2, order + 1):
        nxt = 2.0 * np.concatenate(([0.0], coeffs[:-1])) - prev
        prev, coeffs = coeffs, nxt
        c[k] = coeffs @ m

    # positive measures (incl. atomic ones) give a positive SEMIdefinite
    # Toeplitz matrix; only genuinely indefinite results are rejected
    idx = np.arange(order + 1)
    toeplitz = c[np.abs(idx[:, None] - idx[None, :])]
    min_eig = float(np.min(np.linalg.eigvalsh(toeplitz)))
    if min_eig < -1e-10 * max(1.0, float(np.max(np.abs(c)))):
        raise InvalidMeasureError(
            f"symmetrized moments are not positive semidefinite (eigenvalue {min_eig:.3e})"
        )
    return c.astype(complex)


def circle_to_interval(rule):
    """Fold a symmetric circle rule down to [-1, 1].

    The node set must be invariant under phi -> 2*pi - phi within
    SYMMETRY_TOL (unpaired nodes allowed only at 0 and pi); mirror nodes
    must carry equal weights.
    """
    nodes = rule.nodes
    weights = rule.weights
    at_one = (nodes < ENDPOINT_TOL) | (nodes > TWO_PI - ENDPOINT_TOL)
    at_minus_one = np.abs(nodes - np.pi) < ENDPOINT_TOL
    interior = ~(at_one | at_minus_one)

    lower = interior & (nodes < np.pi)
    upper = interior & (nodes > np.pi)
    phi_lo = nodes[lower]
    w_lo = weights[lower]
    phi_hi = nodes[upper][::-1]          # mirror order
    w_hi = weights[upper][::-1]
    if len(phi_lo) != len(phi_hi):
        raise SymmetryViolationError(
            f"{len(phi_lo)} nodes below pi vs {len(phi_hi)} above; set is not "
            "symmetric (symmetric rules need real coefficient data and eta = +1 or -1)"
        )
    if len(phi_lo):
        angle_gap = np.abs(phi_lo + phi_hi - TWO_PI)
        weight_gap = np.abs(w_lo - w_hi)
        wi = int(np.argmax(angle_gap))
        if np.max(angle_gap) > SYMMETRY_TOL:
            raise SymmetryViolationError(
                f"worst pair ({phi_lo[wi]:.17g}, {phi_hi[wi]:.17g}) misses symmetry "
                f"by {angle_gap[wi]:.3e}"
            )
        if np.max(weight_gap) > 1e-9:
            raise SymmetryViolationError(
                f"mirror nodes carry unequal weights, gap {np.max(weight_gap):.3e}"
            )

    xs = []
    lams = []
    if np.any(at_one):
        xs.append(1.0)
        lams.append(float(np.sum(weights[at_one])))
    for phi, w_a, w_b in zip(phi_lo, w_lo, w_hi):
        xs.append(float(np.cos(phi)))
        lams.append(float(w_a + w_b))
    if np.any(at_minus_one):
        xs.append(-1.0)
        lams.append(float(np.sum(weights[at_minus_one])))

    order = np.argsort(xs)[::-1]
    x = np.asarray(xs, dtype=float)[order]
    lam = np.asarray(lams, dtype=float)[order]
    return IntervalRule(x=x, lam=lam, degree=rule.n - 1 - rule.m)


def check_algebraic_exactness(interval_rule, interval_moments, degree):
    """max_k |sum lam x^k - int x^k dpsi| for k = 0..degree."""
    m = np.asarray(interval_moments, dtype=float)
    if len(m) < degree + 1:
        raise ValueError(f"need moments to degree {degree}, have {len(m) - 1}")
    powers = np.vander(interval_rule.x, degree + 1, increasing=True).T
    return float(np.max(np.abs(powers @ interval_rule.lam - m[: degree + 1])))


def chebyshev_weight_moments(k_max):
    """Monomial moments of dx/(pi sqrt(1-x^2)): m_{2j} = C(2j, j)/4^j, odd zero."""
    m = np.zeros(k_max + 1)
    m[0] = 1.0
    for j in range(1, k_max // 2 + 1):
        m[2 * j] = m[2 * j - 2] * (2 * j - 1) / (2 * j)
    return m


def legendre_weight_moments(k_max):
    """Monomial moments of dx/2: 1/(k+1) for even k, zero for odd."""
    m = np.zeros(k_max + 1)
    m[::2] = 1.0 / (np.arange(0, k_max + 1, 2) + 1.0)
    return m


def load_interval_moments(path):
    """Interval moment file: one real per line."""
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            rows.append(float(line))
    if not rows:
        raise InvalidMeasureError(f"no moments found in {path}")
    return np.asarray(rows, dtype=float)
