"""Projected gradient ascent for the reflection-phase / covariance problem.

The objective is the log-det rate of a composite channel

    Z(phi) = F1 + F3 diag(phi) F2,    phi_n = exp(j theta_n),

maximized jointly over the unit-modulus reflection coefficients phi and the
Hermitian PSD transmit covariance Q with bounded trace. Both blocks use
Wirtinger steepest-ascent directions (gradients with respect to the
conjugated variables):

    d f / d phi_n^* = log2(e) * [F3^H W^-1 Z Q F2^H]_nn
    grad_Q f        = log2(e) * Z^H W^-1 Z,        W = sigma^2 I + Z Q Z^H.

Each block step backtracks its own step size from a fixed maximum until the
sufficient-ascent condition f(new) >= f(old) + delta * ||step||^2 holds, so
no per-scenario step tuning is needed. Projections: phi is renormalized
entrywise to the unit circle; Q is Hermitian-symmetrized and its eigenvalues
projected onto the nonnegative capped-sum set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import solve_triangular

ComplexMatrix = NDArray[np.complex128]
ComplexVector = NDArray[np.complex128]

LOG2E = float(np.log2(np.e))


@dataclass(frozen=True)
class RisPhaseProfile:
    """Per-cell phase shifts in radians, each wrapped to [-pi, pi]."""

    phases: NDArray[np.float64]

    def __post_init__(self) -> None:
        p = np.asarray(self.phases, dtype=np.float64)
        if p.ndim != 1:
            raise ValueError(f"phases must be a vector, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("phases must be finite")
        object.__setattr__(self, "phases", wrap_phase(p))

    @property
    def size(self) -> int:
        return self.phases.size

    @property
    def reflection(self) -> ComplexVector:
        """Unit-modulus reflection coefficients exp(j theta)."""
        return np.exp(1j * self.phases)


@dataclass(frozen=True)
class TransmitCovariance:
    """Hermitian PSD covariance with a total power budget on its trace."""

    q: ComplexMatrix

    def __post_init__(self) -> None:
        m = np.asarray(self.q, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"covariance must be square, got shape {m.shape}")
        object.__setattr__(self, "q", m)

    @property
    def size(self) -> int:
        return self.q.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.q)))

    def validate(self, power_budget: float) -> None:
        """Raise unless Hermitian, PSD, and within budget at the spec tolerances."""
        scale = max(float(np.linalg.norm(self.q)), 1e-300)
        if np.linalg.norm(self.q - self.q.conj().T) > 1e-10 * scale:
            raise ValueError("covariance is not Hermitian")
        eigvals = np.linalg.eigvalsh((self.q + self.q.conj().T) / 2.0)
        tr = self.trace
        if eigvals.min(initial=0.0) < -1e-10 * max(tr, 1e-300):
            raise ValueError(f"covariance has negative eigenvalue {eigvals.min()}")
        if tr > power_budget * (1.0 + 1e-9):
            raise ValueError(f"trace {tr} exceeds budget {power_budget}")


@dataclass(frozen=True)
class PgmSettings:
    """Step-size schedule, stopping rule, and the physical constants."""

    power_budget: float
    noise_power: float
    max_initial_steps: tuple[float, float] = (1e3, 1e3)
    contraction: tuple[float, float] = (0.5, 0.5)
    ascent_margins: tuple[float, float] = (1e-5, 1e-5)
    max_iterations: int = 1000
    rel_tolerance: float = 1e-6
    max_backtracks: int = 60

    def __post_init__(self) -> None:
        if self.power_budget <= 0.0 or self.noise_power <= 0.0:
            raise ValueError("power_budget and noise_power must be positive")
        if any(s <= 0.0 for s in self.max_initial_steps):
            raise ValueError("max_initial_steps must be positive")
        if any(not 0.0 < r < 1.0 for r in self.contraction):
            raise ValueError("contraction factors must lie in (0, 1)")
        if any(m <= 0.0 for m in self.ascent_margins):
            raise ValueError("ascent_margins must be positive")
        if self.max_iterations < 1 or self.max_backtracks < 1:
            raise ValueError("iteration limits must be >= 1")
        if self.rel_tolerance <= 0.0:
            raise ValueError("rel_tolerance must be positive")


@dataclass
class PgmTrace:
    """Per-iteration log: objective, accepted steps, projection step norms."""

    objective: list[float] = field(default_factory=list)
    mu1: list[float] = field(default_factory=list)
    mu2: list[float] = field(default_factory=list)
    theta_step_norm: list[float] = field(default_factory=list)
    q_step_norm: list[float] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("iteration,objective,mu1,mu2\n")
            for i, obj in enumerate(self.objective):
                mu1 = self.mu1[i - 1] if i >= 1 else 0.0
                mu2 = self.mu2[i - 1] if i >= 1 else 0.0
                fh.write(f"{i},{obj:.12g},{mu1:.6g},{mu2:.6g}\n")


class PgmResult(NamedTuple):
    theta: RisPhaseProfile
    q: TransmitCovariance
    trace: PgmTrace


def wrap_phase(theta: NDArray[np.float64]) -> NDArray[np.float64]:
    """Wrap angles to [-pi, pi)."""
    return np.mod(np.asarray(theta, dtype=np.float64) + np.pi, 2.0 * np.pi) - np.pi


def composite_channel(
    phi: ComplexVector, f1: ComplexMatrix, f2: ComplexMatrix, f3: ComplexMatrix
) -> ComplexMatrix:
    """Z = F1 + F3 diag(phi) F2."""
    return f1 + (f3 * phi[None, :]) @ f2


def _check_dims(f1: ComplexMatrix, f2: ComplexMatrix, f3: ComplexMatrix, n_phi: int, n_q: int) -> None:
    m, el = f1.shape
    if f2.shape != (n_phi, el) or f3.shape != (m, n_phi) or n_q != el:
        raise ValueError(
            f"dimension mismatch: f1 {f1.shape}, f2 {f2.shape}, f3 {f3.shape}, "
            f"phases {n_phi}, covariance {n_q}"
        )


def _rate_of_z(z: ComplexMatrix, q: ComplexMatrix, noise_power: float) -> float:
    zq = z @ q
    a = np.eye(z.shape[0], dtype=np.complex128) + (zq @ z.conj().T) / noise_power
    a = (a + a.conj().T) / 2.0
    chol = np.linalg.cholesky(a)
    return float(2.0 * np.sum(np.log2(np.real(np.diag(chol)))))


def _solve_noise_plus_zqz(
    z: ComplexMatrix, q: ComplexMatrix, noise_power: float, rhs: ComplexMatrix
) -> ComplexMatrix:
    """(sigma^2 I + Z Q Z^H)^-1 rhs via a Cholesky factorization.

    The factorization runs on the well-scaled I + Z Q Z^H / sigma^2 so tiny
    physical noise powers cannot degrade it.
    """
    a = np.eye(z.shape[0], dtype=np.complex128) + (z @ q @ z.conj().T) / noise_power
    a = (a + a.conj().T) / 2.0
    chol = np.linalg.cholesky(a)
    y = solve_triangular(chol, rhs, lower=True, check_finite=False)
    x = solve_triangular(chol.conj().T, y, lower=False, check_finite=False)
    return x / noise_power


def _raw_objective(
    phi: ComplexVector,
    q: ComplexMatrix,
    f1: ComplexMatrix,
    f2: ComplexMatrix,
    f3: ComplexMatrix,
    noise_power: float,
) -> float:
    return _rate_of_z(composite_channel(phi, f1, f2, f3), q, noise_power)


def objective(
    theta: RisPhaseProfile,
    q: TransmitCovariance,
    f1: ComplexMatrix,
    f2: ComplexMatrix,
    f3: ComplexMatrix,
    noise_power: float,
) -> float:
    """Achievable rate log2 det(I + Z Q Z^H / sigma^2) in bits/s/Hz."""
    _check_dims(f1, f2, f3, theta.size, q.size)
    return _raw_objective(theta.reflection, q.q, f1, f2, f3, noise_power)


def _raw_grad_theta(
    phi: ComplexVector,
    q: ComplexMatrix,
    f1: ComplexMatrix,
    f2: ComplexMatrix,
    f3: ComplexMatrix,
    noise_power: float,
    z: ComplexMatrix | None = None,
) -> ComplexVector:
    if z is None:
        z = composite_channel(phi, f1, f2, f3)
    t = _solve_noise_plus_zqz(z, q, noise_power, z @ q)  # W^-1 Z Q, shape (M, L)
    u = f3.conj().T @ t  # (N, L)
    return LOG2E * np.sum(u * f2.conj(), axis=1)


def grad_theta(
    theta: RisPhaseProfile,
    q: TransmitCovariance,
    f1: ComplexMatrix,
    f2: ComplexMatrix,
    f3: ComplexMatrix,
    noise_power: float,
) -> ComplexVector:
    """Ascent direction with respect to the conjugated reflection coefficients."""
    _check_dims(f1, f2, f3, theta.size, q.size)
    return _raw_grad_theta(theta.reflection, q.q, f1, f2, f3, noise_power)


def _raw_grad_q(z: ComplexMatrix, q: ComplexMatrix, noise_power: float) -> ComplexMatrix:
    g = LOG2E * (z.conj().T @ _solve_noise_plus_zqz(z, q, noise_power, z))
    return (g + g.conj().T) / 2.0


def grad_q(
    theta: RisPhaseProfile,
    q: TransmitCovariance,
    f1: ComplexMatrix,
    f2: ComplexMatrix,
    f3: ComplexMatrix,
    noise_power: float,
) -> ComplexMatrix:
    """Hermitian ascent direction for the covariance block."""
    _check_dims(f1, f2, f3, theta.size, q.size)
    z = composite_channel(theta.reflection, f1, f2, f3)
    return _raw_grad_q(z, q.q, noise_power)


def _project_phi(raw: ComplexVector) -> ComplexVector:
    mags = np.abs(raw)
    out = np.ones_like(raw)
    nonzero = mags > 0.0
    out[nonzero] = raw[nonzero] / mags[nonzero]
    return out


def project_theta(raw: ComplexVector) -> RisPhaseProfile:
    """Entrywise radial projection onto the unit circle; zeros map to phase 0."""
    return RisPhaseProfile(np.angle(_project_phi(np.asarray(raw, dtype=np.complex128))))


def _project_eigenvalues(eigvals: NDArray[np.float64], budget: float) -> NDArray[np.float64]:
    clipped = np.maximum(eigvals, 0.0)
    total = clipped.sum()
    if total <= budget:
        return clipped
    # Euclidean projection onto {x >= 0, sum x = budget}: shift-and-clip with
    # the exact threshold found by scanning the sorted values.
    order = np.sort(eigvals)[::-1]
    csum = np.cumsum(order)
    k = np.arange(1, eigvals.size + 1)
    shifts = (csum - budget) / k
    valid = np.nonzero(order - shifts > 0.0)[0]
    if valid.size == 0:
        # the k=1 test is exact in reals (top value minus its shift equals the
        # budget) but absorbs to zero when the values dwarf the budget by more
        # than 1/eps; the true projection then puts the whole budget on top
        out = np.zeros_like(eigvals)
        out[np.argmax(eigvals)] = budget
        return out
    active = valid[-1]
    return np.maximum(eigvals - shifts[active], 0.0)


def project_q(raw: ComplexMatrix, power_budget: float) -> TransmitCovariance:
    """Frobenius-nearest Hermitian PSD matrix with trace at most the budget."""
    if power_budget <= 0.0:
        raise ValueError(f"power_budget must be positive, got {power_budget}")
    sym = (raw + raw.conj().T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(sym)
    projected = _project_eigenvalues(eigvals, power_budget)
    q = (eigvecs * projected) @ eigvecs.conj().T
    return TransmitCovariance((q + q.conj().T) / 2.0)


def pgm_solve(
    f1: ComplexMatrix,
    f2: ComplexMatrix,
    f3: ComplexMatrix,
    settings: PgmSettings,
    init_theta: RisPhaseProfile | None = None,
    init_q: TransmitCovariance | None = None,
    rng: np.random.Generator | None = None,
) -> PgmResult:
    """Alternating projected-ascent solve of the joint phase/covariance problem.

    Starts from ``init_theta`` (uniform random phases from ``rng`` when not
    given) and ``init_q`` (uniform power when not given). Terminates when the
    relative objective change drops below ``settings.rel_tolerance``, when
    neither block finds an ascent step, or at the iteration cap; the cap is
    reported as ``trace.converged == False`` with the best iterate returned.
    """
    m, el = f1.shape
    n = f2.shape[0]
    if init_theta is None:
        if rng is None:
            rng = np.random.default_rng(0)
        init_theta = RisPhaseProfile(rng.uniform(-np.pi, np.pi, n))
    if init_q is None:
        init_q = TransmitCovariance(
            (settings.power_budget / el) * np.eye(el, dtype=np.complex128)
        )
    _check_dims(f1, f2, f3, init_theta.size, init_q.size)
    init_q.validate(settings.power_budget)

    sigma2 = settings.noise_power
    l1, l2 = settings.max_initial_steps
    rho1, rho2 = settings.contraction
    delta1, delta2 = settings.ascent_margins

    phi = init_theta.reflection
    q = init_q.q
    z = composite_channel(phi, f1, f2, f3)
    f_cur = _rate_of_z(z, q, sigma2)

    trace = PgmTrace()
    trace.objective.append(f_cur)

    for _ in range(settings.max_iterations):
        # phase block
        g_phi = _raw_grad_theta(phi, q, f1, f2, f3, sigma2, z=z)
        mu1 = l1
        theta_accepted = False
        phi_new, z_new, f_theta = phi, z, f_cur
        for _ in range(settings.max_backtracks + 1):
            cand = _project_phi(phi + mu1 * g_phi)
            z_cand = composite_channel(cand, f1, f2, f3)
            f_cand = _rate_of_z(z_cand, q, sigma2)
            step = float(np.linalg.norm(cand - phi)) ** 2
            if f_cand >= f_cur + delta1 * step:
                phi_new, z_new, f_theta = cand, z_cand, f_cand
                theta_accepted = True
                break
            mu1 *= rho1

        # covariance block (composite channel fixed)
        g_q = _raw_grad_q(z_new, q, sigma2)
        mu2 = l2
        q_accepted = False
        q_new, f_new = q, f_theta
        for _ in range(settings.max_backtracks + 1):
            cand = project_q(q + mu2 * g_q, settings.power_budget).q
            f_cand = _rate_of_z(z_new, cand, sigma2)
            step = float(np.linalg.norm(cand - q)) ** 2
            if f_cand >= f_theta + delta2 * step:
                q_new, f_new = cand, f_cand
                q_accepted = True
                break
            mu2 *= rho2

        trace.iterations += 1
        trace.objective.append(f_new)
        trace.mu1.append(mu1 if theta_accepted else 0.0)
        trace.mu2.append(mu2 if q_accepted else 0.0)
        trace.theta_step_norm.append(float(np.linalg.norm(phi_new - phi)))
        trace.q_step_norm.append(float(np.linalg.norm(q_new - q)))

        phi, z, q = phi_new, z_new, q_new
        if not theta_accepted and not q_accepted:
            # stationary to within the line searches: report convergence
            trace.converged = True
            break
        if abs(f_new - f_cur) <= settings.rel_tolerance * max(abs(f_cur), 1e-12):
            f_cur = f_new
            trace.converged = True
            break
        f_cur = f_new

    # every accepted q came out of project_q, so the iterate is feasible as-is
    return PgmResult(RisPhaseProfile(np.angle(phi)), TransmitCovariance(q), trace)
