"""Gain synthesis and certification for the switched error dynamics.

The search variables are a symmetric matrix Y > 0 and a gain block Ka; a
feasible pair must make every vertex expression

    A_i Y + Y A_i^T + B Ka + Ka^T B^T

negative definite.  The controller gain and Lyapunov matrix are then
recovered as K = Ka Y^-1 and P = Y^-1, and the pair (P, K) is re-checked
against the original bilinear condition

    (A_i + B K)^T P + P (A_i + B K) < 0

at every vertex before a certificate object is allowed to exist.  The
feasibility search may use any numerics it likes (it runs on numpy's
batched eigensolver); the margins stored in a certificate are always
recomputed with the package's own Jacobi kernel, so the check never trusts
solver internals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InfeasibleError, InvalidInputError
from .polytope import entry_intervals, enumerate_vertices
from .system import distribution_matrix, linear_error_matrix

B_FORMS = ("ones", "identity")

# A certificate's P and Y must multiply to the identity within this bound.
PY_RESIDUAL_TOL = 1e-8

# Projection solver knobs: over-relaxed halfspace projections, a stall
# window realizing the "improvement below 1e-12" cutoff, and a doubling
# schedule that pushes margins beyond bare feasibility while budget lasts.
_RELAX = 1.5
_STALL_WINDOW = 300
_STALL_EPS = 1e-12
_FIRST_GAMMA = 0.02

# Packing order of the six independent entries of symmetric Y.
_Y_SLOTS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


@dataclass(frozen=True)
class LmiProblem:
    """Vertex matrices, input distribution, and strictness margins.

    ``eps`` is the floor on Y (Y - eps*I must stay positive semidefinite)
    and ``delta`` the strictness each vertex inequality must beat.
    ``alpha_range`` is carried as metadata by the canonical constructor
    ``problem_for_alpha_range`` and may be None for ad-hoc vertex sets.
    """

    vertices: np.ndarray
    b: np.ndarray
    eps: float = 1e-3
    delta: float = 1e-3
    alpha_range: tuple[float, float] | None = None

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 3 or verts.shape[1:] != (3, 3) or len(verts) < 1:
            raise InvalidInputError(f"vertices must be (n, 3, 3), got {verts.shape}")
        b = linalg.as_matrix(self.b)
        if b.shape not in ((3, 1), (3, 3)):
            raise InvalidInputError(f"distribution matrix must be 3x1 or 3x3, got {b.shape}")
        if not (self.eps > 0.0 and self.delta > 0.0):
            raise InvalidInputError("eps and delta must be positive")
        if not np.isfinite(verts).all():
            raise InvalidInputError("vertex entries must be finite")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "b", b)

    @property
    def b_form(self) -> str:
        return "ones" if self.b.shape == (3, 1) else "identity"


def problem_for_alpha_range(
    alpha_lo: float = 0.0,
    alpha_hi: float = 1.0,
    b_form: str = "ones",
    eps: float = 1e-3,
    delta: float = 1e-3,
) -> LmiProblem:
    """Build the 32-vertex feasibility problem for a parameter range."""
    if b_form not in B_FORMS:
        raise InvalidInputError(f"b_form must be one of {B_FORMS}, got {b_form!r}")
    verts = enumerate_vertices(entry_intervals(alpha_lo, alpha_hi))
    return LmiProblem(
        vertices=verts,
        b=distribution_matrix(b_form),
        eps=eps,
        delta=delta,
        alpha_range=(float(alpha_lo), float(alpha_hi)),
    )


def assemble_lmi(problem: LmiProblem, y, ka) -> np.ndarray:
    """Per-vertex constraint matrices, exactly symmetric by construction."""
    ysym = linalg.symmetrize(y)
    kam = _as_gain_block(ka, problem.b)
    bka = problem.b @ kam
    t_part = bka + bka.T
    out = np.empty_like(problem.vertices)
    for i, a in enumerate(problem.vertices):
        s = a @ ysym
        out[i] = s + s.T + t_part
    return out


def lmi_margins(problem: LmiProblem, y, ka) -> np.ndarray:
    """Largest eigenvalue of each assembled vertex constraint."""
    return np.array(
        [linalg.sym_eigenvalues(m)[-1] for m in assemble_lmi(problem, y, ka)]
    )


def recover_gains(y, ka) -> tuple[np.ndarray, np.ndarray]:
    """Recover (P, K) = (Y^-1 symmetrized, Ka Y^-1) from the LMI variables."""
    ysym = linalg.symmetrize(y)
    if not linalg.is_positive_definite(ysym):
        raise InvalidInputError("Y must be positive definite to recover gains")
    p = linalg.symmetrize(linalg.invert(ysym))
    k = linalg.matmul(np.atleast_2d(np.asarray(ka, dtype=float)), p)
    return p, k


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking (P, K) against the per-vertex stability condition."""

    bmi_margins: np.ndarray
    p_min_eig: float

    @property
    def passed(self) -> bool:
        return self.p_min_eig > 0.0 and bool((self.bmi_margins < 0.0).all())


def closed_loop_margin(a, p, k, b) -> float:
    """Largest eigenvalue of (A + BK)^T P + P (A + BK), symmetrized."""
    acl = np.asarray(a, dtype=float) + b @ np.atleast_2d(np.asarray(k, dtype=float))
    half = acl.T @ linalg.symmetrize(p)
    return float(linalg.sym_eigenvalues(half + half.T)[-1])


def verify_certificate(p, k, b, vertices) -> VerificationReport:
    """Check the recovered pair at every vertex; reports, never raises."""
    psym = linalg.symmetrize(p)
    margins = np.array([closed_loop_margin(a, psym, k, b) for a in vertices])
    p_min = float(linalg.sym_eigenvalues(psym)[0])
    return VerificationReport(bmi_margins=margins, p_min_eig=p_min)


def alpha_grid_margins(
    p, k, b, count: int = 101, alpha_lo: float = 0.0, alpha_hi: float = 1.0
) -> np.ndarray:
    """Closed-loop margins for evenly spaced parameter values."""
    if count < 2:
        raise InvalidInputError("grid needs at least two points")
    alphas = [alpha_lo + (alpha_hi - alpha_lo) * i / (count - 1) for i in range(count)]
    return np.array(
        [closed_loop_margin(linear_error_matrix(a), p, k, b) for a in alphas]
    )


def lyapunov_value(p, e) -> float:
    """Quadratic form e^T P e."""
    ev = np.asarray(e, dtype=float)
    return float(ev @ (np.asarray(p, dtype=float) @ ev))


@dataclass(frozen=True)
class GainCertificate:
    """A verified synthesis result.

    Construction re-checks every invariant, so holding a GainCertificate
    means the gain passed verification: P is positive definite, every
    stored margin is negative, and P inverts Y to within PY_RESIDUAL_TOL.
    """

    b_form: str
    alpha_range: tuple[float, float] | None
    y: np.ndarray
    ka: np.ndarray
    p: np.ndarray
    k: np.ndarray
    eps: float
    delta: float
    lmi_margins: np.ndarray
    bmi_margins: np.ndarray
    p_eigenvalues: np.ndarray

    def __post_init__(self):
        if self.b_form not in B_FORMS:
            raise InvalidInputError(f"unknown b_form {self.b_form!r}")
        rows = 1 if self.b_form == "ones" else 3
        y = linalg.symmetrize(self.y)
        p = linalg.symmetrize(self.p)
        ka = np.atleast_2d(np.asarray(self.ka, dtype=float))
        k = np.atleast_2d(np.asarray(self.k, dtype=float))
        if y.shape != (3, 3) or p.shape != (3, 3):
            raise InvalidInputError("Y and P must be 3x3")
        if ka.shape != (rows, 3) or k.shape != (rows, 3):
            raise InvalidInputError(f"Ka and K must be {rows}x3 for b_form {self.b_form!r}")
        if not (self.eps > 0.0 and self.delta > 0.0):
            raise InvalidInputError("eps and delta must be positive")
        lmi = np.asarray(self.lmi_margins, dtype=float)
        bmi = np.asarray(self.bmi_margins, dtype=float)
        p_eigs = np.asarray(self.p_eigenvalues, dtype=float)
        if p_eigs.shape != (3,):
            raise InvalidInputError("expected three eigenvalues for P")
        if not (np.isfinite(lmi).all() and np.isfinite(bmi).all() and np.isfinite(p_eigs).all()):
            raise InvalidInputError("certificate carries non-finite values")
        if not p_eigs[0] > 0.0:
            raise InvalidInputError(
                f"P is not positive definite (min eigenvalue {p_eigs[0]:.3e})"
            )
        if not (lmi < 0.0).all():
            raise InvalidInputError(
                f"LMI margins must all be negative (worst {lmi.max():.3e})"
            )
        if not (bmi < 0.0).all():
            raise InvalidInputError(
                f"closed-loop margins must all be negative (worst {bmi.max():.3e})"
            )
        residual = float(np.abs(p @ y - np.eye(3)).max())
        if residual > PY_RESIDUAL_TOL:
            raise InvalidInputError(f"P*Y deviates from identity by {residual:.3e}")
        alpha_range = self.alpha_range
        if alpha_range is not None:
            alpha_range = (float(alpha_range[0]), float(alpha_range[1]))
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ka", ka)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "lmi_margins", lmi)
        object.__setattr__(self, "bmi_margins", bmi)
        object.__setattr__(self, "p_eigenvalues", p_eigs)
        object.__setattr__(self, "alpha_range", alpha_range)

    @property
    def p_min_eig(self) -> float:
        return float(self.p_eigenvalues[0])


def certificate_from_gains(problem: LmiProblem, y, ka) -> GainCertificate:
    """Recover gains from (Y, Ka), verify them, and freeze a certificate.

    All margins are computed with the Jacobi kernel, independent of
    whatever produced (Y, Ka).
    """
    ysym = linalg.symmetrize(y)
    kam = _as_gain_block(ka, problem.b)
    p, k = recover_gains(ysym, kam)
    lmi = lmi_margins(problem, ysym, kam)
    report = verify_certificate(p, k, problem.b, problem.vertices)
    return GainCertificate(
        b_form=problem.b_form,
        alpha_range=problem.alpha_range,
        y=ysym,
        ka=kam,
        p=p,
        k=k,
        eps=problem.eps,
        delta=problem.delta,
        lmi_margins=lmi,
        bmi_margins=report.bmi_margins,
        p_eigenvalues=linalg.sym_eigenvalues(p),
    )


def solve_feasibility(problem: LmiProblem, max_iter: int = 10000) -> GainCertificate:
    """Search for (Y, Ka) meeting every vertex inequality with margin.

    The method is successive over-relaxed projection onto the halfspace cut
    by the most violated constraint (the subgradient of its largest
    eigenvalue), with the search normalized to trace(Y) = 1 to remove the
    feasible cone's scale ray.  The vertex constraints are aimed deeper
    than strictly required, doubling the extra margin whenever it is met,
    so the returned point sits well inside the feasible region rather than
    on its boundary.  The search stops at ``max_iter`` iterations, or
    earlier once the best worst-case violation has stopped improving by
    1e-12 over a stall window; the deepest feasible iterate seen is the
    answer.

    Raises InfeasibleError (carrying the best margin reached) if no
    feasible point was encountered.
    """
    m = problem.b.shape[1]
    x = np.zeros(6 + 3 * m)
    x[0] = x[3] = x[5] = 1.0 / 3.0
    verts = problem.vertices
    verts_t = verts.transpose(0, 2, 1)
    b = problem.b
    gamma = _FIRST_GAMMA
    solution = None
    solution_depth = -np.inf
    best = np.inf
    stall = 0
    for _ in range(max_iter):
        y, ka = _unpack(x, m)
        bka = b @ ka
        mats = verts @ y + y @ verts_t + (bka + bka.T)
        eigvals, eigvecs = np.linalg.eigh(mats)
        vertex_vals = eigvals[:, -1] + problem.delta
        y_vals, y_vecs = np.linalg.eigh(y)
        floor_val = float(problem.eps - y_vals[0])
        worst_vertex = float(vertex_vals.max())
        g_true = max(floor_val, worst_vertex)
        # Progress means approaching feasibility, then deepening the vertex
        # margins; the Y floor never deepens, so it is excluded once met.
        progress = g_true if g_true > 0.0 else worst_vertex
        if progress < best - _STALL_EPS:
            best = progress
            stall = 0
        else:
            stall += 1
            if stall >= _STALL_WINDOW:
                break
        if g_true <= 0.0 and -worst_vertex > solution_depth:
            solution = x.copy()
            solution_depth = -worst_vertex
        # Aim beyond the requirement on the vertex constraints only; the Y
        # floor keeps its plain shift (tightening it shrinks the target set).
        g_aim = max(floor_val, worst_vertex + gamma)
        if g_aim <= 0.0:
            gamma *= 2.0
            continue
        grad = np.zeros_like(x)
        if floor_val >= worst_vertex + gamma:
            u = y_vecs[:, 0]
            for slot, (i, j) in enumerate(_Y_SLOTS):
                grad[slot] = -(u[i] * u[j] if i == j else 2.0 * u[i] * u[j])
        else:
            idx = int(np.argmax(vertex_vals))
            v = eigvecs[idx][:, -1]
            w = verts[idx].T @ v
            for slot, (i, j) in enumerate(_Y_SLOTS):
                if i == j:
                    grad[slot] = 2.0 * w[i] * v[i]
                else:
                    grad[slot] = 2.0 * (w[i] * v[j] + w[j] * v[i])
            grad[6:] = 2.0 * np.outer(b.T @ v, v).ravel()
        norm_sq = float(grad @ grad)
        if norm_sq == 0.0:
            break
        x = x - (_RELAX * g_aim / norm_sq) * grad
        off = (x[0] + x[3] + x[5] - 1.0) / 3.0
        x[0] -= off
        x[3] -= off
        x[5] -= off
    if solution is None:
        raise InfeasibleError("gain synthesis found no feasible point", best)
    y, ka = _unpack(solution, m)
    # Rescale off the trace normalization so the Y floor is comfortably met;
    # scaling (Y, Ka) together preserves feasibility and leaves K unchanged.
    scale = max(1.0, 2.0 * problem.eps / float(np.linalg.eigvalsh(y)[0]))
    return certificate_from_gains(problem, y * scale, ka * scale)


def _as_gain_block(ka, b) -> np.ndarray:
    kam = np.atleast_2d(np.asarray(ka, dtype=float))
    if kam.shape != (b.shape[1], 3):
        raise InvalidInputError(
            f"gain block must be {b.shape[1]}x3 for this distribution, got {kam.shape}"
        )
    if not np.isfinite(kam).all():
        raise InvalidInputError("gain entries must be finite")
    return kam


def _unpack(x: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    y = np.empty((3, 3))
    for slot, (i, j) in enumerate(_Y_SLOTS):
        y[i, j] = y[j, i] = x[slot]
    return y, x[6:].reshape(m, 3)


# --- certificate files ----------------------------------------------------

_CERT_KEYS = (
    "b_form",
    "alpha_range",
    "Y",
    "Ka",
    "P",
    "K",
    "eps",
    "delta",
    "lmi_margins",
    "bmi_margins",
    "p_eigenvalues",
)


def save_certificate(cert: GainCertificate, path) -> None:
    """Write a certificate as JSON; floats keep full precision via repr."""
    if cert.alpha_range is None:
        raise InvalidInputError("only certificates with an alpha range can be saved")
    doc = {
        "b_form": cert.b_form,
        "alpha_range": list(cert.alpha_range),
        "Y": cert.y.tolist(),
        "Ka": cert.ka.tolist(),
        "P": cert.p.tolist(),
        "K": cert.k.tolist(),
        "eps": cert.eps,
        "delta": cert.delta,
        "lmi_margins": cert.lmi_margins.tolist(),
        "bmi_margins": cert.bmi_margins.tolist(),
        "p_eigenvalues": cert.p_eigenvalues.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_certificate(path) -> GainCertificate:
    """Load and re-verify a certificate file.

    Margins and eigenvalues are recomputed from the stored matrices with
    the Jacobi kernel; the file's own margin fields are informational.
    Raises InvalidInputError if the stored certificate fails any check.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read certificate file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"certificate file is not valid JSON: {exc}") from exc
    missing = [key for key in _CERT_KEYS if key not in doc]
    if missing:
        raise InvalidInputError(f"certificate file missing fields: {missing}")
    b_form = doc["b_form"]
    if b_form not in B_FORMS:
        raise InvalidInputError(f"unknown b_form {b_form!r} in certificate file")
    alpha_range = doc["alpha_range"]
    if not (isinstance(alpha_range, list) and len(alpha_range) == 2):
        raise InvalidInputError("alpha_range must be a [lo, hi] pair")
    eps = float(doc["eps"])
    delta = float(doc["delta"])
    problem = problem_for_alpha_range(
        float(alpha_range[0]), float(alpha_range[1]), b_form, eps, delta
    )
    y = linalg.symmetrize(np.asarray(doc["Y"], dtype=float))
    ka = _as_gain_block(np.asarray(doc["Ka"], dtype=float), problem.b)
    p = linalg.symmetrize(np.asarray(doc["P"], dtype=float))
    k = _as_gain_block(np.asarray(doc["K"], dtype=float), problem.b)
    report = verify_certificate(p, k, problem.b, problem.vertices)
    return GainCertificate(
        b_form=b_form,
        alpha_range=(float(alpha_range[0]), float(alpha_range[1])),
        y=y,
        ka=ka,
        p=p,
        k=k,
        eps=eps,
        delta=delta,
        lmi_margins=lmi_margins(problem, y, ka),
        bmi_margins=report.bmi_margins,
        p_eigenvalues=linalg.sym_eigenvalues(p),
    )
