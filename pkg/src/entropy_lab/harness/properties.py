"""Registry of randomized properties and the suite runner.

A property draws inputs for one trial from its own substream, evaluates
library functions on them and returns one or more :class:`Sample` rows,
each a measured value, the value it is compared with and a direction.
The runner turns samples into slacks, keeps the minimum slack per
property and records every sample whose slack is below ``-tolerance``.

Library functions are always looked up through their modules
(``classical.tsallis_entropy`` rather than a bare name) so that patched
functions are the ones being tested.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .. import bounds, classical, io, kernel, operators, quantum
from ..kernel import DomainError
from . import oracles, sampling

DEFAULT_SEED = 20240601
DEFAULT_DIMS = (2, 3, 4, 8)
DEFAULT_ALPHAS = (0.1, 0.25, 0.3, 0.5, 0.7, 0.75, 0.9, 1.5, 2.0, 3.0, 5.0)
DEFAULT_TRIALS = 60
DEFAULT_TOLERANCE = 1e-9


class ConfigError(ValueError):
    """Invalid sampler configuration."""


@dataclass(frozen=True)
class SamplerConfig:
    """Everything that determines a suite run.

    ``properties`` restricts the run to the named property ids; ``None``
    runs them all.
    """

    seed: int = DEFAULT_SEED
    dims: Tuple[int, ...] = DEFAULT_DIMS
    alphas: Tuple[float, ...] = DEFAULT_ALPHAS
    trials: int = DEFAULT_TRIALS
    tolerance: float = DEFAULT_TOLERANCE
    properties: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "seed", int(self.seed))
            object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
            object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
            tr = self.trials
            if isinstance(tr, float) and not tr.is_integer():
                raise ConfigError(f"trials must be an integer, got {tr}")
            object.__setattr__(self, "trials", int(tr))
            object.__setattr__(self, "tolerance", float(self.tolerance))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed configuration: {exc}") from exc
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if not self.dims or any(d < 1 or d > operators.MAX_DIM for d in self.dims):
            raise ConfigError(f"dims must be non-empty and within [1, {operators.MAX_DIM}]")
        if not self.alphas or any(not 0 < a <= 8 for a in self.alphas):
            raise ConfigError("alphas must be non-empty and inside (0, 8]")
        if not self.tolerance >= 0:
            raise ConfigError("tolerance must be nonnegative")
        if self.properties is not None:
            props = tuple(self.properties)
            unknown = sorted(set(props) - set(REGISTRY))
            if unknown:
                raise ConfigError(f"unknown property ids: {', '.join(unknown)}")
            object.__setattr__(self, "properties", props)

    @classmethod
    def from_mapping(cls, data: Dict[str, Any]) -> "SamplerConfig":
        allowed = {"seed", "dims", "alphas", "trials", "tolerance", "properties"}
        extra = set(data) - allowed
        if extra:
            raise ConfigError(f"unknown configuration keys: {', '.join(sorted(extra))}")
        return cls(**data)

    @classmethod
    def from_toml(cls, path) -> "SamplerConfig":
        import tomli

        try:
            with open(path, "rb") as fh:
                data = tomli.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_mapping(data)


@dataclass
class Sample:
    """One comparison.  ``direction``: ``upper`` (measured <= reference),
    ``lower`` (measured >= reference) or ``equal``.  With ``relative`` the
    slack is divided by ``max(1, |reference|)``."""

    measured: float
    reference: float
    direction: str = "upper"
    inputs: Dict[str, Any] = field(default_factory=dict)
    relative: bool = False
    note: str = ""

    @property
    def slack(self) -> float:
        try:
            m, b = float(self.measured), float(self.reference)
        except (TypeError, ValueError):
            # None, or a complex value from a corrupted formula
            return -math.inf
        if math.isnan(m) or math.isnan(b):
            return -math.inf
        if self.direction == "equal":
            if m == b:
                return 0.0
            s = -abs(m - b)
        else:
            s = bounds._slack(m, b, self.direction)
        if self.relative and math.isfinite(s):
            s = s / max(1.0, abs(b))
        return float(s)


@dataclass
class ViolationRecord:
    property: str
    cell: Dict[str, Any]
    trial: int
    inputs: str
    measured: float
    bound: float
    slack: float
    note: str = ""

    def to_row(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class Cell:
    d: int
    alpha: Optional[float]

    def key(self) -> Tuple:
        return (self.d, self.alpha)

    def as_dict(self) -> Dict[str, Any]:
        return {"d": self.d, "alpha": self.alpha}


TrialFn = Callable[[Cell, np.random.Generator], List[Sample]]


@dataclass(frozen=True)
class Property:
    id: str
    description: str
    covers: Tuple[str, ...]
    trial: TrialFn
    alpha_filter: Optional[Callable[[float], bool]] = None  # None: order-free
    # None: the property does not depend on a dimension and runs once per order
    dim_filter: Optional[Callable[[int], bool]] = lambda d: True
    tolerance: Optional[float] = None
    # share of config.trials used (for the slower properties)
    trial_fraction: float = 1.0

    def cells(self, cfg: SamplerConfig) -> List[Cell]:
        if self.dim_filter is None:
            dims = [0]
        else:
            dims = [d for d in cfg.dims if self.dim_filter(d)]
        if self.alpha_filter is None:
            return [Cell(d, None) for d in dims]
        alphas = [a for a in cfg.alphas if self.alpha_filter(a)]
        return [Cell(d, a) for d in dims for a in alphas]

    def n_trials(self, cfg: SamplerConfig) -> int:
        return max(1, int(round(cfg.trials * self.trial_fraction)))


REGISTRY: Dict[str, Property] = {}


def register(prop: Property) -> Property:
    if prop.id in REGISTRY:
        raise ValueError(f"duplicate property id {prop.id}")
    REGISTRY[prop.id] = prop
    return prop


def _prop(id, description, covers, alpha_filter=None, dim_filter=lambda d: True,
          tolerance=None, trial_fraction=1.0):
    def deco(fn: TrialFn):
        register(Property(id, description, tuple(covers), fn, alpha_filter, dim_filter,
                          tolerance, trial_fraction))
        return fn

    return deco


# order filters
def below_one(a):
    return 0 < a < 1


def above_one(a):
    return a > 1


def any_order(a):
    return True


def to_half(a):
    return a <= 0.5


# ---------------------------------------------------------------------------
# helpers


def _ser(x):
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            return {"re": x.real.tolist(), "im": x.imag.tolist()}
        return x.tolist()
    return x


def _diag_op(p):
    return np.diag(np.asarray(p, dtype=float))


def _binary_pair(rng):
    """Two-point distributions, half of them in the symmetric configuration
    ``u = (1+t)/2, v = (1-t)/2`` where the Pinsker-type bounds are tight."""
    if rng.uniform() < 0.5:
        t = rng.uniform()
        return (1 + t) / 2, (1 - t) / 2
    return rng.uniform(), rng.uniform()


def _weights(N, rng, floor=0.0):
    return sampling.sample_distribution(N, rng, floor) * rng.uniform(0.2, 5.0)


# ---------------------------------------------------------------------------
# scalar kernel


@_prop("kernel.alpha-log", "ln_a(xy) = ln_a x + x^(1-a) ln_a y and the a -> 1 limit",
       ["kernel.alpha_log"], alpha_filter=any_order, dim_filter=None, tolerance=1e-10)
def _alpha_log(cell, rng):
    a = cell.alpha
    x, y = 10 ** rng.uniform(-3, 1, size=2)
    lhs = kernel.alpha_log(x * y, a)
    rhs = kernel.alpha_log(x, a) + x ** (1 - a) * kernel.alpha_log(y, a)
    near = kernel.alpha_log(x, 1 + 1e-7)
    return [
        Sample(lhs, rhs, "equal", {"x": x, "y": y}, relative=True),
        Sample(near, math.log(x), "equal", {"x": x}, relative=True, note="near-one"),
    ]


@_prop("kernel.binary-tsallis", "h_a(u) matches the entropy of {u, 1-u}",
       ["kernel.binary_tsallis", "classical.tsallis_entropy"], alpha_filter=any_order,
       dim_filter=None, tolerance=1e-12)
def _binary(cell, rng):
    u = rng.uniform() if rng.uniform() < 0.9 else float(rng.integers(2))
    h = kernel.binary_tsallis(u, cell.alpha)
    return [
        Sample(h, classical.tsallis_entropy([u, 1 - u], cell.alpha), "equal", {"u": u}, relative=True),
        Sample(h, kernel.binary_tsallis(1 - u, cell.alpha), "equal", {"u": u}, relative=True),
    ]


@_prop("kernel.phi-nonpositive", "Phi_uv <= 0 for 0 <= a <= 1/2",
       ["kernel.phi_uv", "kernel.g_of_t"], alpha_filter=to_half, dim_filter=None, tolerance=1e-12)
def _phi(cell, rng):
    u, v = _binary_pair(rng)
    a = cell.alpha if rng.uniform() < 0.5 else rng.uniform(0, 0.5)
    return [Sample(kernel.phi_uv(u, v, a), 0.0, "upper", {"u": u, "v": v, "alpha": a})]


@_prop("kernel.fidelity-g", "sqrt(uv) + sqrt((1-u)(1-v)) <= 1 - g(|u-v|)",
       ["kernel.g_of_t"], dim_filter=None, tolerance=1e-12)
def _fid(cell, rng):
    u, v = _binary_pair(rng)
    lhs = math.sqrt(u * v) + math.sqrt((1 - u) * (1 - v))
    return [Sample(lhs, 1 - kernel.g_of_t(abs(u - v)), "upper", {"u": u, "v": v})]


@_prop("kernel.two-point-pinsker", "H_a(u||v) >= kappa_a g(|u-v|) for two-point distributions",
       ["kernel.kappa", "kernel.g_of_t", "classical.tsallis_rel_entropy"], alpha_filter=below_one,
       dim_filter=None)
def _two_point(cell, rng):
    u, v = _binary_pair(rng)
    h = classical.tsallis_rel_entropy([u, 1 - u], [v, 1 - v], cell.alpha)
    b = kernel.kappa(cell.alpha) * kernel.g_of_t(abs(u - v))
    return [Sample(h, b, "lower", {"u": u, "v": v})]


@_prop("kernel.series-dominance", "partial sums increase in n and stay below the full bound",
       ["kernel.pinsker_series_coeff", "bounds.pinsker_series_bound", "bounds.pinsker_lower_bound"],
       alpha_filter=below_one, dim_filter=None, tolerance=1e-12)
def _series(cell, rng):
    theta = (1.0, 2.5)[int(rng.integers(2))]
    tau = theta * rng.uniform()
    full = bounds.pinsker_lower_bound(theta, tau, cell.alpha)
    inp = {"theta": theta, "tau": tau}
    out, prev = [], 0.0
    for n in range(1, 9):
        cur = bounds.pinsker_series_bound(theta, tau, cell.alpha, n)
        out.append(Sample(cur, prev, "lower", inp, note=f"n={n}"))
        out.append(Sample(cur, full, "upper", inp, note=f"n={n}"))
        prev = cur
    return out


# ---------------------------------------------------------------------------
# classical information


@_prop("classical.renyi-tsallis", "(1-a) R_a = ln[1 + (1-a) H_a] for entropies and divergences",
       ["classical.tsallis_entropy", "classical.renyi_entropy",
        "classical.tsallis_rel_entropy", "classical.renyi_rel_entropy"],
       alpha_filter=any_order, tolerance=1e-10)
def _c_relation(cell, rng):
    a, N = cell.alpha, cell.d
    P = sampling.sample_distribution(N, rng)
    Q = sampling.sample_distribution(N, rng, floor=0.01 / N)
    H = classical.tsallis_entropy(P, a)
    R = classical.renyi_entropy(P, a)
    Hr = classical.tsallis_rel_entropy(P, Q, a)
    Rr = classical.renyi_rel_entropy(P, Q, a)
    inp = {"P": P, "Q": Q}
    return [
        Sample(R, math.log1p((1 - a) * H) / (1 - a), "equal", inp, relative=True, note="entropy"),
        Sample(Rr, math.log1p((a - 1) * Hr) / (a - 1), "equal", inp, relative=True, note="divergence"),
    ]


@_prop("classical.homogeneity", "H_a(lA||lB) = l H_a(A||B)", ["classical.tsallis_rel_entropy"],
       alpha_filter=any_order, tolerance=1e-10)
def _homog(cell, rng):
    A, B = _weights(cell.d, rng), _weights(cell.d, rng, floor=0.01 / cell.d)
    lam = 10 ** rng.uniform(-1, 1)
    lhs = classical.tsallis_rel_entropy(lam * A, lam * B, cell.alpha)
    rhs = lam * classical.tsallis_rel_entropy(A, B, cell.alpha)
    return [Sample(lhs, rhs, "equal", {"A": A, "B": B, "lambda": lam}, relative=True)]


@_prop("classical.joint-convexity", "H_a is jointly convex in its arguments",
       ["classical.tsallis_rel_entropy"], alpha_filter=any_order, tolerance=1e-10)
def _jconv(cell, rng):
    N, a = cell.d, cell.alpha
    A1, A2 = _weights(N, rng), _weights(N, rng)
    B1, B2 = _weights(N, rng, 0.01 / N), _weights(N, rng, 0.01 / N)
    t = rng.uniform()
    lhs = classical.tsallis_rel_entropy(t * A1 + (1 - t) * A2, t * B1 + (1 - t) * B2, a)
    rhs = t * classical.tsallis_rel_entropy(A1, B1, a) + (1 - t) * classical.tsallis_rel_entropy(A2, B2, a)
    return [Sample(lhs, rhs, "upper", {"A1": A1, "A2": A2, "B1": B1, "B2": B2, "t": t}, relative=True)]


@_prop("classical.shift", "H_a(A+C||B+C) <= H_a(A||B)", ["classical.tsallis_rel_entropy"],
       alpha_filter=any_order, tolerance=1e-10)
def _shift(cell, rng):
    N, a = cell.d, cell.alpha
    A, B, C = _weights(N, rng), _weights(N, rng, 0.01 / N), _weights(N, rng)
    lhs = classical.tsallis_rel_entropy(A + C, B + C, a)
    rhs = classical.tsallis_rel_entropy(A, B, a)
    return [Sample(lhs, rhs, "upper", {"A": A, "B": B, "C": C}, relative=True)]


@_prop("classical.f-divergence", "f_a-divergence + tr(A)/(1-a) equals H_a(A||B), zeros included",
       ["classical.f_divergence"], alpha_filter=lambda a: a != 1, tolerance=1e-10)
def _fdiv(cell, rng):
    N, a = cell.d, cell.alpha
    A, B = _weights(N, rng), _weights(N, rng)
    if N > 1 and rng.uniform() < 0.3:
        B[rng.integers(N)] = 0.0
    S = classical.f_divergence(A, B, classical.tsallis_f(a))
    H = classical.tsallis_rel_entropy(A, B, a)
    lhs = S + A.sum() / (1 - a) if math.isfinite(S) else S
    return [Sample(lhs, H, "equal", {"A": A, "B": B}, relative=True)]


@_prop("classical.qbar", "P - Q + Qbar >= 0 and Q - Qbar >= 0 on supp P; q0 is the minimum",
       ["classical.qbar_construction", "classical.minimal_probability"], tolerance=1e-15)
def _qbar(cell, rng):
    N = cell.d
    P = sampling.sample_distribution(N, rng)
    if N > 1 and rng.uniform() < 0.3:
        P[rng.integers(N)] = 0.0
        P = P / P.sum()
    Q = sampling.sample_distribution(N, rng, floor=0.01 / N)
    q0 = classical.minimal_probability(Q, P)
    Qb = classical.qbar_construction(P, Q)
    sp = classical.support(P)
    inp = {"P": P, "Q": Q}
    return [
        Sample(float(np.min((P - Q + Qb)[sp])), 0.0, "lower", inp, note="P-Q+Qbar"),
        Sample(float(np.min((Q - Qb)[sp])), 0.0, "lower", inp, note="Q-Qbar"),
        Sample(q0, float(Q[sp].min()), "equal", inp, note="q0"),
    ]


@_prop("classical.maximal-coupling", "coupling marginals are exact and P_e = D(P, Q)",
       ["classical.maximal_coupling", "classical.error_probability",
        "classical.trace_distance_classical"], tolerance=1e-12)
def _coupling(cell, rng):
    N = cell.d
    P, Q = sampling.sample_distribution(N, rng), sampling.sample_distribution(N, rng)
    J = classical.maximal_coupling(P, Q)
    inp = {"P": P, "Q": Q}
    marg = max(np.abs(J.sum(axis=1) - P).max(), np.abs(J.sum(axis=0) - Q).max())
    return [
        Sample(float(marg), 0.0, "upper", inp, note="marginals"),
        Sample(float(J.min()), 0.0, "lower", inp, note="nonnegative"),
        Sample(classical.error_probability(J), classical.trace_distance_classical(P, Q), "equal", inp),
    ]


@_prop("classical.chain-rule", "H_a(X,Y) = H_a(Y) + H_a(X|Y)",
       ["classical.joint_tsallis_entropy", "classical.conditional_tsallis_entropy",
        "classical.tsallis_entropy"], alpha_filter=any_order, tolerance=1e-12)
def _chain(cell, rng):
    J = sampling.sample_joint(cell.d, rng)
    a = cell.alpha
    lhs = classical.joint_tsallis_entropy(J, a)
    rhs = classical.tsallis_entropy(J.sum(axis=0), a) + classical.conditional_tsallis_entropy(J, a)
    return [Sample(lhs, rhs, "equal", {"J": J}, relative=True)]


# ---------------------------------------------------------------------------
# operators


def _random_hermitian(d, rng):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (G + G.conj().T) / 2


@_prop("operators.spectral", "spectral reconstruction, powers on the support and inner products",
       ["operators.eigendecompose", "operators.power_on_support", "operators.hs_inner",
        "operators.trace_norm"], tolerance=1e-10)
def _spectral(cell, rng):
    d = cell.d
    X = _random_hermitian(d, rng)
    if d > 1 and rng.uniform() < 0.3:
        # force a repeated eigenvalue
        w, V = np.linalg.eigh(X)
        w[1] = w[0]
        X = (V * w) @ V.conj().T
        X = (X + X.conj().T) / 2
    sd = operators.eigendecompose(X)
    scale = max(1.0, float(np.abs(X).max()))
    inp = {"X": X}
    rank = int(rng.integers(1, d + 1))
    A = sampling.sample_density(d, rank, rng)
    half = operators.power_on_support(A, 0.5)
    proj = operators.power_on_support(A, 0)
    pinv = operators.power_on_support(A, -1)
    out = [
        Sample(float(np.abs(sd.reconstruct() - X).max()) / scale, 0.0, "upper", inp, note="reconstruct"),
        Sample(float(np.abs(sum(sd.projectors) - np.eye(d)).max()), 0.0, "upper", inp, note="resolution"),
        Sample(float(sum(sd.multiplicities)), float(d), "equal", inp, note="multiplicities"),
        Sample(float(np.abs(half @ half - A).max()), 0.0, "upper", {"A": A}, note="square root"),
        Sample(float(np.abs(proj @ A - A).max()), 0.0, "upper", {"A": A}, note="support projector"),
        Sample(float(np.abs(A @ pinv @ A - A).max()), 0.0, "upper", {"A": A}, note="generalized inverse"),
        Sample(float(np.trace(proj).real), float(rank), "equal", {"A": A}, note="rank"),
        Sample(operators.hs_inner(X, X).real, float(np.linalg.norm(X) ** 2), "equal", inp,
               relative=True, note="hs norm"),
        Sample(operators.trace_norm(X), float(np.abs(sd.eigenvalues * sd.multiplicities).sum()),
               "equal", inp, relative=True, note="trace norm"),
    ]
    return out


@_prop("operators.jordan", "P+ + P- = 1, tr P+(A - B) = D(A, B) and the two-point coarse graining",
       ["operators.jordan_projectors", "operators.coarse_grain_two_point",
        "operators.trace_distance_quantum"], tolerance=1e-10)
def _jordan(cell, rng):
    rho, sigma = sampling.sample_density_pair(cell.d, rng)
    plus, minus = operators.jordan_projectors(rho, sigma)
    D = operators.trace_distance_quantum(rho, sigma)
    u = operators.coarse_grain_two_point(rho, plus, minus)
    v = operators.coarse_grain_two_point(sigma, plus, minus)
    inp = {"rho": rho, "sigma": sigma}
    return [
        Sample(float(np.abs(plus + minus - np.eye(cell.d)).max()), 0.0, "upper", inp, note="resolution"),
        Sample(u[0] - v[0], D, "equal", inp, note="positive part"),
        Sample(sum(u), 1.0, "equal", inp, note="trace"),
        Sample(classical.trace_distance_classical(np.clip(u, 0, None), np.clip(v, 0, None)), D,
               "equal", inp, note="coarse distance"),
    ]


@_prop("operators.pinching", "pinching keeps the diagonal, preserves trace and contracts distances",
       ["operators.pinching_map", "operators.trace_distance_quantum"], tolerance=1e-10)
def _pinching(cell, rng):
    d = cell.d
    rho, sigma = sampling.sample_density_pair(d, rng)
    U = sampling.haar_unitary(d, rng)
    pr, ps = operators.pinching_map(rho, U), operators.pinching_map(sigma, U)
    inp = {"rho": rho, "sigma": sigma, "basis": U}
    off = U.conj().T @ pr @ U
    diag_in = np.einsum("ik,ij,jk->k", U.conj(), rho, U).real
    return [
        Sample(float(np.abs(off - np.diag(np.diag(off))).max()), 0.0, "upper", inp, note="off-diagonal"),
        Sample(float(np.abs(np.diag(off).real - diag_in).max()), 0.0, "upper", inp, note="diagonal kept"),
        Sample(float(np.trace(pr).real), 1.0, "equal", inp, note="trace"),
        Sample(operators.trace_distance_quantum(pr, ps), operators.trace_distance_quantum(rho, sigma),
               "upper", inp, note="contraction"),
    ]


# ---------------------------------------------------------------------------
# quantum divergences


@_prop("quantum.classical-consistency", "quantum quantities on diagonal inputs equal classical ones",
       ["quantum.quantum_tsallis_entropy", "quantum.quantum_renyi_entropy",
        "quantum.quantum_relative_entropy", "quantum.quantum_tsallis_rel_entropy",
        "quantum.quantum_renyi_rel_entropy", "quantum.quantum_f_divergence"],
       alpha_filter=any_order, tolerance=1e-10)
def _q_classical(cell, rng):
    d, a = cell.d, cell.alpha
    P = sampling.sample_distribution(d, rng)
    Q = sampling.sample_distribution(d, rng, floor=0.01 / d)
    rho, sigma = _diag_op(P), _diag_op(Q)
    inp = {"P": P, "Q": Q}
    spec = classical.tsallis_f(a)
    return [
        Sample(quantum.quantum_tsallis_entropy(rho, a), classical.tsallis_entropy(P, a), "equal", inp,
               relative=True, note="tsallis entropy"),
        Sample(quantum.quantum_renyi_entropy(rho, a), classical.renyi_entropy(P, a), "equal", inp,
               relative=True, note="renyi entropy"),
        Sample(quantum.quantum_relative_entropy(rho, sigma), classical.tsallis_rel_entropy(P, Q, 1.0),
               "equal", inp, relative=True, note="relative entropy"),
        Sample(quantum.quantum_tsallis_rel_entropy(rho, sigma, a), classical.tsallis_rel_entropy(P, Q, a),
               "equal", inp, relative=True, note="tsallis divergence"),
        Sample(quantum.quantum_renyi_rel_entropy(rho, sigma, a), classical.renyi_rel_entropy(P, Q, a),
               "equal", inp, relative=True, note="renyi divergence"),
        Sample(quantum.quantum_f_divergence(rho, sigma, spec), classical.f_divergence(P, Q, spec),
               "equal", inp, relative=True, note="f-divergence"),
    ]


@_prop("quantum.unitary-invariance", "divergences are invariant under a common unitary",
       ["quantum.quantum_tsallis_rel_entropy", "quantum.quantum_renyi_rel_entropy",
        "quantum.quantum_tsallis_entropy"], alpha_filter=any_order, tolerance=1e-9)
def _q_unitary(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_full_rank_pair(d, rng)
    U = sampling.haar_unitary(d, rng)
    r2, s2 = U @ rho @ U.conj().T, U @ sigma @ U.conj().T
    inp = {"rho": rho, "sigma": sigma, "U": U}
    return [
        Sample(quantum.quantum_tsallis_rel_entropy(r2, s2, a), quantum.quantum_tsallis_rel_entropy(rho, sigma, a),
               "equal", inp, relative=True, note="tsallis divergence"),
        Sample(quantum.quantum_renyi_rel_entropy(r2, s2, a), quantum.quantum_renyi_rel_entropy(rho, sigma, a),
               "equal", inp, relative=True, note="renyi divergence"),
        Sample(quantum.quantum_tsallis_entropy(r2, a), quantum.quantum_tsallis_entropy(rho, a),
               "equal", inp, relative=True, note="entropy"),
    ]


@_prop("quantum.renyi-tsallis", "(a-1) R_a(rho||sigma) = ln[1 + (a-1) H_a(rho||sigma)], and for entropies",
       ["quantum.quantum_renyi_rel_entropy", "quantum.quantum_tsallis_rel_entropy",
        "quantum.quantum_renyi_entropy", "quantum.quantum_tsallis_entropy"],
       alpha_filter=any_order, tolerance=1e-10)
def _q_relation(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_full_rank_pair(d, rng)
    H = quantum.quantum_tsallis_rel_entropy(rho, sigma, a)
    R = quantum.quantum_renyi_rel_entropy(rho, sigma, a)
    He = quantum.quantum_tsallis_entropy(rho, a)
    Re = quantum.quantum_renyi_entropy(rho, a)
    inp = {"rho": rho, "sigma": sigma}
    return [
        Sample(R, math.log1p((a - 1) * H) / (a - 1), "equal", inp, relative=True, note="divergence"),
        Sample(Re, math.log1p((1 - a) * He) / (1 - a), "equal", inp, relative=True, note="entropy"),
    ]


@_prop("quantum.order-chain", "H_a <= H_1 <= H_b for a < 1 < b, and H_1 >= 2 D^2",
       ["quantum.quantum_tsallis_rel_entropy", "quantum.quantum_relative_entropy",
        "operators.trace_distance_quantum"])
def _q_chain(cell, rng):
    d = cell.d
    rho, sigma = sampling.sample_full_rank_pair(d, rng)
    H1 = quantum.quantum_relative_entropy(rho, sigma)
    D = operators.trace_distance_quantum(rho, sigma)
    inp = {"rho": rho, "sigma": sigma}
    out = [Sample(H1, 2 * D * D, "lower", inp, note="pinsker")]
    for a in (0.3, 0.7):
        out.append(Sample(quantum.quantum_tsallis_rel_entropy(rho, sigma, a), H1, "upper", inp, note=f"alpha={a}"))
    for b in (1.5, 2.0):
        out.append(Sample(quantum.quantum_tsallis_rel_entropy(rho, sigma, b), H1, "lower", inp, note=f"beta={b}"))
    return out


@_prop("quantum.limit-agreement", "the eps-regularized limit equals the direct value for full-rank B",
       ["quantum.quantum_f_divergence_limit", "quantum.quantum_f_divergence"],
       alpha_filter=lambda a: a != 1, tolerance=1e-8, trial_fraction=0.5)
def _q_limit(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_full_rank_pair(d, rng)
    spec = classical.tsallis_f(a)
    lim = quantum.quantum_f_divergence_limit(rho, sigma, spec)
    direct = quantum.quantum_f_divergence(rho, sigma, spec)
    return [Sample(lim, direct, "equal", {"rho": rho, "sigma": sigma}, relative=True)]


@_prop("quantum.jordan-floor", "S_f(A||B) >= two-outcome f-divergence on the Jordan projections",
       ["quantum.jordan_classical_floor", "quantum.quantum_f_divergence"], alpha_filter=below_one)
def _q_floor(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_density_pair(d, rng)
    spec = classical.tsallis_f(a)
    floor = quantum.jordan_classical_floor(rho, sigma, spec)
    if quantum.kernel_included(rho, sigma):
        S = quantum.quantum_f_divergence(rho, sigma, spec)
    else:
        S = quantum.quantum_f_divergence_limit(rho, sigma, spec)
    return [Sample(S, floor, "lower", {"rho": rho, "sigma": sigma})]


@_prop("quantum.pinching-monotonicity", "S_a(Psi(A)||Psi(B)) <= S_a(A||B) under pinching",
       ["quantum.quantum_f_divergence", "operators.pinching_map"], alpha_filter=below_one)
def _q_pinch(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_full_rank_pair(d, rng)
    if rng.uniform() < 0.5:
        U, _ = operators.jordan_basis(rho, sigma)
    else:
        U = sampling.haar_unitary(d, rng)
    spec = classical.tsallis_f(a)
    lhs = quantum.quantum_f_divergence(operators.pinching_map(rho, U), operators.pinching_map(sigma, U), spec)
    rhs = quantum.quantum_f_divergence(rho, sigma, spec)
    return [Sample(lhs, rhs, "upper", {"rho": rho, "sigma": sigma, "basis": U})]


@_prop("quantum.shift", "H_a(A+C||B+C) <= H_a(A||B) for 0 < a <= 2",
       ["quantum.quantum_tsallis_rel_entropy"], alpha_filter=lambda a: a <= 2, tolerance=1e-9)
def _q_shift(cell, rng):
    d, a = cell.d, cell.alpha
    A, B = sampling.sample_full_rank_pair(d, rng)
    C = sampling.sample_density(d, int(rng.integers(1, d + 1)), rng) * rng.uniform(0.1, 2)
    lhs = quantum.quantum_tsallis_rel_entropy(A + C, B + C, a)
    rhs = quantum.quantum_tsallis_rel_entropy(A, B, a)
    return [Sample(lhs, rhs, "upper", {"A": A, "B": B, "C": C}, relative=True)]


# ---------------------------------------------------------------------------
# bounds


@_prop("bounds.pinsker", "H_a(A||B) >= kappa_a theta g(tau/theta) for equal traces theta in {1, 2.5}",
       ["bounds.pinsker_lower_bound", "bounds.pinsker_series_bound", "kernel.kappa",
        "quantum.quantum_tsallis_rel_entropy", "operators.trace_distance_quantum"],
       alpha_filter=below_one)
def _b_pinsker(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_density_pair(d, rng)
    out = []
    for theta in (1.0, 2.5):
        A, B = theta * rho, theta * sigma
        H = quantum.quantum_tsallis_rel_entropy(A, B, a)
        tau = operators.trace_distance_quantum(A, B)
        inp = {"rho": rho, "sigma": sigma, "theta": theta}
        out.append(Sample(H, bounds.pinsker_lower_bound(theta, tau, a), "lower", inp, note=f"theta={theta}"))
        out.append(Sample(H, bounds.pinsker_series_bound(theta, tau, a, 1), "lower", inp,
                          note=f"theta={theta} quadratic"))
    return out


@_prop("bounds.renyi-pinsker", "R_a(rho||sigma) >= Renyi Pinsker-type bound >= kappa_a g(tau)",
       ["bounds.renyi_pinsker_bound", "quantum.quantum_renyi_rel_entropy"], alpha_filter=below_one)
def _b_renyi(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_density_pair(d, rng)
    tau = operators.trace_distance_quantum(rho, sigma)
    b = bounds.renyi_pinsker_bound(tau, a)
    inp = {"rho": rho, "sigma": sigma}
    return [
        Sample(quantum.quantum_renyi_rel_entropy(rho, sigma, a), b, "lower", inp),
        Sample(b, kernel.kappa(a) * kernel.g_of_t(tau), "lower", inp, note="log relaxation"),
    ]


def _min_prob_pair(N, rng):
    mode = int(rng.integers(3))
    Q = sampling.sample_distribution(N, rng, floor=10 ** rng.uniform(-3, -0.3) / N)
    if mode == 0:
        P = sampling.sample_distribution(N, rng)
    elif mode == 1:
        # small perturbation of Q
        t = 10 ** rng.uniform(-3, 0)
        P = (1 - t) * Q + t * sampling.sample_distribution(N, rng)
    else:
        # mass moved onto the smallest entry of Q
        P = Q.copy()
        j, k = int(np.argmin(Q)), int(np.argmax(Q))
        m = rng.uniform() * P[k]
        P[j] += m
        P[k] -= m
    return P, Q


@_prop("bounds.min-prob-upper", "H_a(P||Q) and R_a(P||Q) stay below the minimal-probability bound",
       ["bounds.min_prob_upper_bound", "bounds.min_prob_upper_bound_log_form",
        "classical.tsallis_rel_entropy", "classical.renyi_rel_entropy",
        "classical.minimal_probability", "classical.trace_distance_classical"],
       alpha_filter=above_one, dim_filter=lambda d: d >= 2)
def _b_minprob(cell, rng):
    N, a = cell.d, cell.alpha
    P, Q = _min_prob_pair(N, rng)
    q0 = classical.minimal_probability(Q, P)
    tau = classical.trace_distance_classical(P, Q)
    if tau > 1 - q0:
        return []
    inp = {"P": P, "Q": Q}
    b = bounds.min_prob_upper_bound(q0, tau, a)
    return [
        Sample(classical.tsallis_rel_entropy(P, Q, a), b, "upper", inp, relative=True),
        Sample(classical.renyi_rel_entropy(P, Q, a), bounds.min_prob_upper_bound_log_form(q0, tau, a),
               "upper", inp, relative=True, note="renyi"),
    ]


@_prop("bounds.min-prob-extremal", "explicit pairs attain the bound; closed forms agree and are continuous",
       ["bounds.min_prob_upper_bound", "bounds.min_prob_upper_bound_log_form",
        "harness.extremal_min_prob_instance"],
       alpha_filter=above_one, dim_filter=lambda d: d >= 2, tolerance=1e-10)
def _b_extremal(cell, rng):
    N, a = cell.d, cell.alpha
    q0 = rng.uniform(0.02, 1.0) / N
    near = rng.uniform() < 0.5
    tau = q0 * rng.uniform() if near else q0 + (1 - 2 * q0) * rng.uniform()
    inst = oracles.extremal_min_prob_instance(q0, tau, a, N)
    b = bounds.min_prob_upper_bound(q0, tau, a)
    inp = {"q0": q0, "tau": tau, "N": N}
    out = [
        Sample(bounds.min_prob_upper_bound_log_form(q0, tau, a), b, "equal", inp, relative=True, note="log form"),
        Sample(bounds.min_prob_upper_bound(q0, q0 * (1 - 1e-13), a), bounds.min_prob_upper_bound(q0, q0, a),
               "equal", inp, relative=True, note="continuity below"),
        Sample(bounds.min_prob_upper_bound(q0, min(q0 * (1 + 1e-13), 1 - q0), a),
               bounds.min_prob_upper_bound(q0, q0, a), "equal", inp, relative=True, note="continuity above"),
    ]
    if inst.attained:
        out.append(Sample(inst.value, b, "equal", inp, relative=True, note="attained"))
    else:
        out.append(Sample(inst.value, b, "upper", inp, relative=True, note="not attained"))
    return out


@_prop("bounds.fano", "H_a(X|Y) <= per-column intermediate bound <= closed-form Fano bound",
       ["bounds.fano_bound", "bounds.fano_intermediate", "classical.conditional_tsallis_entropy",
        "classical.error_probability", "classical.joint_tsallis_entropy"],
       alpha_filter=any_order, dim_filter=lambda d: d >= 2)
def _b_fano(cell, rng):
    N, a = cell.d, cell.alpha
    J = sampling.sample_joint(N, rng)
    H = classical.conditional_tsallis_entropy(J, a)
    mid = bounds.fano_intermediate(J, a)
    Pe = classical.error_probability(J)
    top = bounds.fano_bound(Pe, N, a)
    chain = classical.joint_tsallis_entropy(J, a) - classical.tsallis_entropy(J.sum(axis=0), a)
    inp = {"J": J}
    return [
        Sample(H, top, "upper", inp),
        Sample(H, mid, "upper", inp, note="intermediate"),
        Sample(mid, top, "upper", inp, note="closed form"),
        Sample(chain, H, "equal", inp, relative=True, note="chain rule"),
    ]


@_prop("bounds.fannes", "|H_a(rho) - H_a(sigma)| <= Fannes-type bound inside its tau-range",
       ["bounds.fannes_bound", "quantum.quantum_tsallis_entropy", "operators.trace_distance_quantum"],
       alpha_filter=any_order, dim_filter=lambda d: d >= 2)
def _b_fannes(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_density_pair(d, rng)
    tau = operators.trace_distance_quantum(rho, sigma)
    if tau > bounds.fannes_domain(d, a):
        return []
    gap = abs(quantum.quantum_tsallis_entropy(rho, a) - quantum.quantum_tsallis_entropy(sigma, a))
    return [Sample(gap, bounds.fannes_bound(tau, d, a), "upper", {"rho": rho, "sigma": sigma})]


@_prop("bounds.yanagi", "the comparison bound holds where it applies and is weaker at d = 2, a = 1/2",
       ["bounds.yanagi_comparison_bound", "quantum.quantum_tsallis_entropy"],
       alpha_filter=below_one, dim_filter=lambda d: d >= 2)
def _b_yanagi(cell, rng):
    d, a = cell.d, cell.alpha
    rho, sigma = sampling.sample_density_pair(d, rng, "close")
    tau = operators.trace_distance_quantum(rho, sigma)
    b = bounds.yanagi_comparison_bound(tau, d, a)
    out = []
    if b is not None:
        gap = abs(quantum.quantum_tsallis_entropy(rho, a) - quantum.quantum_tsallis_entropy(sigma, a))
        out.append(Sample(gap, b, "upper", {"rho": rho, "sigma": sigma}))
    t = rng.uniform(0, 0.125)
    if t > 0:
        out.append(Sample(bounds.fannes_bound(t, 2, 0.5), bounds.yanagi_comparison_bound(t, 2, 0.5),
                          "upper", {"tau": t}, note="comparison"))
    return out


@_prop("bounds.monotonicity", "Fano and Fannes bounds are nondecreasing where they should be",
       ["bounds.fano_bound", "bounds.fannes_bound"], alpha_filter=any_order,
       dim_filter=lambda d: d >= 2, tolerance=1e-12)
def _b_mono(cell, rng):
    N, a = cell.d, cell.alpha
    top = 1.0 if a < 1 else bounds.fano_monotone_limit(N)
    x, y = np.sort(rng.uniform(0, top, size=2))
    inp = {"x": x, "y": y}
    out = [Sample(bounds.fano_bound(y, N, a), bounds.fano_bound(x, N, a), "lower", inp, note="fano")]
    out.append(Sample(bounds.fannes_bound(y, N, a), bounds.fannes_bound(x, N, a), "lower", inp, note="fannes"))
    return out


@_prop("harness.oracle-soundness", "grid search never beats the closed form; the explicit pair is never beaten",
       ["harness.brute_force_min_prob_oracle", "bounds.min_prob_upper_bound"],
       alpha_filter=above_one, dim_filter=lambda d: 2 <= d <= 6, tolerance=1e-9, trial_fraction=0.25)
def _h_oracle(cell, rng):
    N, a = cell.d, cell.alpha
    q0 = rng.uniform(0.05, 1.0) / N
    tau = (1 - q0) * rng.uniform()
    val = oracles.brute_force_min_prob_oracle(q0, tau, a, N, 20)
    inp = {"q0": q0, "tau": tau, "N": N}
    b = bounds.min_prob_upper_bound(q0, tau, a)
    out = [Sample(val, b, "upper", inp, relative=True)]
    inst = oracles.extremal_min_prob_instance(q0, tau, a, N)
    if inst.attained:
        out.append(Sample(inst.value, val, "lower", inp, relative=True, note="explicit pair"))
    return out


# ---------------------------------------------------------------------------
# runner


CORE_OPERATIONS: Tuple[str, ...] = (
    "kernel.alpha_log", "kernel.binary_tsallis", "kernel.g_of_t", "kernel.kappa", "kernel.phi_uv",
    "kernel.pinsker_series_coeff",
    "classical.trace_distance_classical", "classical.tsallis_entropy", "classical.renyi_entropy",
    "classical.tsallis_rel_entropy", "classical.renyi_rel_entropy", "classical.f_divergence",
    "classical.minimal_probability", "classical.qbar_construction", "classical.joint_tsallis_entropy",
    "classical.conditional_tsallis_entropy", "classical.error_probability", "classical.maximal_coupling",
    "operators.eigendecompose", "operators.power_on_support", "operators.trace_distance_quantum",
    "operators.hs_inner", "operators.jordan_projectors", "operators.pinching_map",
    "operators.coarse_grain_two_point",
    "quantum.quantum_tsallis_entropy", "quantum.quantum_renyi_entropy", "quantum.quantum_relative_entropy",
    "quantum.quantum_tsallis_rel_entropy", "quantum.quantum_renyi_rel_entropy",
    "quantum.quantum_f_divergence", "quantum.quantum_f_divergence_limit", "quantum.jordan_classical_floor",
    "bounds.pinsker_lower_bound", "bounds.pinsker_series_bound", "bounds.renyi_pinsker_bound",
    "bounds.min_prob_upper_bound", "bounds.min_prob_upper_bound_log_form", "bounds.fano_intermediate",
    "bounds.fano_bound", "bounds.fannes_bound", "bounds.yanagi_comparison_bound",
)


@dataclass
class PropertyStats:
    property: str
    cells: int = 0
    trials: int = 0
    samples: int = 0
    skipped_trials: int = 0
    violations: int = 0
    min_slack: float = math.inf
    min_slack_at: str = ""

    def as_dict(self):
        return asdict(self)


@dataclass
class SuiteResult:
    config: SamplerConfig
    violations: List[ViolationRecord]
    stats: List[PropertyStats]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> Dict[str, Any]:
        cfg = asdict(self.config)
        return {
            "seed": self.config.seed,
            "config": cfg,
            "total_violations": len(self.violations),
            "properties": [s.as_dict() for s in self.stats],
        }

    def summary_json(self) -> str:
        return json.dumps(io.clean_for_json(self.summary()), indent=2, sort_keys=True) + "\n"

    def summary_csv(self) -> str:
        rows = [s.as_dict() for s in self.stats]
        header = ["property", "cells", "trials", "samples", "skipped_trials", "violations",
                  "min_slack", "min_slack_at"]
        return io.rows_to_csv(rows, header)

    def violations_csv(self) -> str:
        header = ["property", "cell", "trial", "measured", "bound", "slack", "note", "inputs"]
        rows = []
        for v in self.violations:
            r = v.to_row()
            r["cell"] = json.dumps(r["cell"], sort_keys=True)
            rows.append(r)
        return io.rows_to_csv(rows, header)


def _serialize_inputs(inputs: Dict[str, Any]) -> str:
    return json.dumps(io.clean_for_json({k: _ser(v) for k, v in inputs.items()}), sort_keys=True,
                      default=io.json_default)


def _record(sample: Sample, prop: Property, cell: Cell, t: int, slack: float) -> ViolationRecord:
    return ViolationRecord(prop.id, cell.as_dict(), t, _serialize_inputs(sample.inputs),
                           sample.measured, sample.reference, slack, sample.note)


def run_property(prop: Property, cfg: SamplerConfig, violations: List[ViolationRecord],
                 max_records: int = 1000) -> PropertyStats:
    tol = cfg.tolerance if prop.tolerance is None else prop.tolerance
    st = PropertyStats(prop.id)
    n = prop.n_trials(cfg)
    for cell in prop.cells(cfg):
        st.cells += 1
        for t in range(n):
            rng = sampling.substream(cfg.seed, prop.id, cell.d, cell.alpha, t)
            st.trials += 1
            try:
                samples = prop.trial(cell, rng)
            except (DomainError, ArithmeticError, ValueError) as exc:
                samples = [Sample(math.nan, math.nan, note=f"error: {type(exc).__name__}: {exc}")]
            if not samples:
                st.skipped_trials += 1
                continue
            for s in samples:
                st.samples += 1
                slack = s.slack
                if slack < st.min_slack:
                    st.min_slack = slack
                    st.min_slack_at = json.dumps({"d": cell.d, "alpha": cell.alpha, "trial": t,
                                                  "note": s.note}, sort_keys=True)
                if slack < -tol:
                    st.violations += 1
                    if len(violations) < max_records:
                        violations.append(_record(s, prop, cell, t, slack))
    return st


def selected_properties(cfg: SamplerConfig) -> List[Property]:
    ids = cfg.properties if cfg.properties is not None else tuple(REGISTRY)
    return [REGISTRY[i] for i in ids]


def run_property_suite(config: Optional[SamplerConfig] = None) -> SuiteResult:
    """Run every selected property over its cells and trials.

    Violations are data: the returned result lists them (capped at 1000
    records, the per-property counts are exact) together with per-property
    statistics including the minimum slack.
    """
    cfg = config or SamplerConfig()
    violations: List[ViolationRecord] = []
    stats = [run_property(p, cfg, violations) for p in selected_properties(cfg)]
    return SuiteResult(cfg, violations, stats)
