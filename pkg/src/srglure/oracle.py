"""Time-domain ground truth for the set-level claims.

Signals are finite sample buffers with the discrete inner product
``<f, g> = dt * sum(f * g)``.  Everything here produces samples or lower
bounds; nothing in this module certifies a supremum.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps

from .lti import TransferFunction, is_stable, tf_eval
from .nonlinearity import PiecewiseLinearNl, nl_eval

OVERFLOW_GUARD = 1e12


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class SignalBuffer:
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if not self.dt > 0:
            raise OracleError("dt must be positive")
        if not np.all(np.isfinite(s)):
            raise OracleError("signal samples must be finite")
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return len(self.samples)

    @property
    def t(self):
        return self.dt * np.arange(len(self.samples))

    def norm(self):
        return math.sqrt(self.dt * float(np.dot(self.samples, self.samples)))

    def inner(self, other: "SignalBuffer"):
        _check_compatible(self, other)
        return self.dt * float(np.dot(self.samples, other.samples))

    def __sub__(self, other):
        _check_compatible(self, other)
        return SignalBuffer(self.dt, self.samples - other.samples)

    def truncated(self, T):
        """Copy with samples at times after T set to zero."""
        s = self.samples.copy()
        s[self.t > T] = 0.0
        return SignalBuffer(self.dt, s)

    def padded(self, n_extra):
        return SignalBuffer(self.dt, np.concatenate([self.samples, np.zeros(n_extra)]))


def _check_compatible(a, b):
    if a.dt != b.dt or len(a) != len(b):
        raise OracleError("signals need equal dt and length")


def random_signal(seed, n, dt, bandwidth, rng=None) -> SignalBuffer:
    """Zero-mean noise with a random spectrum up to ``bandwidth`` rad/s, unit norm."""
    if n < 2:
        raise OracleError("n must be at least 2")
    rng = rng if rng is not None else np.random.default_rng(seed)
    w = 2 * math.pi * np.fft.rfftfreq(n, dt)
    spec = np.zeros(len(w), dtype=complex)
    band = (w > 0) & (w <= bandwidth)
    if not np.any(band):
        band[1] = True
    spec[band] = rng.standard_normal(band.sum()) + 1j * rng.standard_normal(band.sum())
    if n % 2 == 0:
        spec[-1] = spec[-1].real
    x = np.fft.irfft(spec, n)
    buf = SignalBuffer(dt, x)
    return SignalBuffer(dt, x / buf.norm())


def signal_angle(u: SignalBuffer, y: SignalBuffer) -> float:
    """Angle between two signals in [0, π]."""
    nu, ny = u.norm(), y.norm()
    if nu == 0 or ny == 0:
        raise OracleError("angle undefined for a zero-norm signal")
    c = u.inner(y) / (nu * ny)
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


# ------------------------------------------------------------- operators

def _padded_length(tf, n, dt, pad_factor):
    poles = np.roots(np.asarray(tf.den)[::-1]) if tf.order else np.zeros(0)
    sigma = float(np.min(-poles.real)) if len(poles) else math.inf
    # impulse-response tail below 1e-9 (extra factor for repeated poles)
    settle = 0 if math.isinf(sigma) else int(math.ceil(30.0 / (sigma * dt)))
    N = max(pad_factor * n, n + settle)
    N = min(N, 1 << 23)
    return N | 1  # odd: no Nyquist bin, so the multiplier stays exactly conjugate-symmetric


def lti_response(tf: TransferFunction, u: SignalBuffer, pad_factor=4, truncate=True) -> SignalBuffer:
    """Output of the stable LTI operator by frequency-domain multiplication.

    With ``truncate=False`` the output over the whole padded grid is returned
    (and the input is understood as zero-padded to the same length), which
    makes the map an exact circulant operator.
    """
    if not is_stable(tf):
        raise OracleError("oracle simulates stable operators only")
    if tf.order == 0:
        k = tf.num[0] / tf.den[0]
        return SignalBuffer(u.dt, k * u.samples)
    n = len(u)
    N = _padded_length(tf, n, u.dt, pad_factor)
    y = _circulant(tf, u.samples, N, u.dt)
    return SignalBuffer(u.dt, y[:n] if truncate else y)


def _circulant(tf, x, N, dt):
    """Circular convolution on N samples with multiplier G(jω_k)."""
    w = 2 * math.pi * np.fft.rfftfreq(N, dt)
    H = tf_eval(tf, 1j * w)
    return np.fft.irfft(H * np.fft.rfft(x, N), N)


@dataclass(frozen=True)
class LureLoop:
    """Closed loop ``y = G(r - φ(y))`` seen as an operator r -> y."""

    plant: TransferFunction
    nl: PiecewiseLinearNl
    tail: float = 20.0  # seconds of zero input appended to capture the decay


@dataclass(frozen=True)
class SrgSample:
    gain: float
    angle: float

    @property
    def point(self):
        return self.gain * complex(math.cos(self.angle), math.sin(self.angle))

    @property
    def pair(self):
        p = self.point
        return p, p.conjugate()


@dataclass
class SrgCloud:
    gain: np.ndarray
    angle: np.ndarray
    mode: str = "SRG"
    seed: int = 0

    def __len__(self):
        return len(self.gain)

    def __iter__(self):
        for g, a in zip(self.gain, self.angle):
            yield SrgSample(float(g), float(a))

    def points(self, both=True):
        z = self.gain * np.exp(1j * self.angle)
        return np.concatenate([z, np.conj(z)]) if both else z

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["gain", "angle"])
            for g, a in zip(self.gain, self.angle):
                w.writerow([f"{g:.12g}", f"{a:.12g}"])


def _apply(op, u: SignalBuffer, circulant: bool):
    if isinstance(op, TransferFunction):
        if circulant and op.order > 0:
            # input already padded by _prepare; keep the exact circulant operator
            if not is_stable(op):
                raise OracleError("oracle simulates stable operators only")
            return SignalBuffer(u.dt, _circulant(op, u.samples, len(u), u.dt))
        return lti_response(op, u)
    if isinstance(op, PiecewiseLinearNl):
        return SignalBuffer(u.dt, nl_eval(op, u.samples))
    if isinstance(op, LureLoop):
        return lure_simulate(op.plant, op.nl, u).y
    if callable(op):
        return SignalBuffer(u.dt, np.asarray(op(u.samples), dtype=float))
    raise OracleError("unsupported operator")


def _prepare(op, u: SignalBuffer):
    """Input as seen by the operator (padded when the operator extends the horizon)."""
    if isinstance(op, TransferFunction) and op.order > 0:
        N = _padded_length(op, len(u), u.dt, 4)
        return u.padded(N - len(u))
    if isinstance(op, LureLoop):
        return u.padded(int(round(op.tail / u.dt)))
    return u


def _probe_pair(kind, rng, n, dt, sg0):
    """Two probe inputs; the mixture of shapes pushes ratios toward their extremes."""
    t = dt * np.arange(n)
    nyq = math.pi / dt
    if kind == 0:
        bw = nyq * 10 ** rng.uniform(-2.5, 0)
        a1, a2 = 10 ** rng.uniform(-1, 1, 2)
        u1 = a1 * random_signal(None, n, dt, bw, rng).samples
        u2 = a2 * random_signal(None, n, dt, bw, rng).samples
    elif kind == 1:
        w1, w2 = nyq * 10 ** rng.uniform(-3, -0.3, 2)
        u1 = 10 ** rng.uniform(-1, 1) * np.cos(w1 * t + rng.uniform(0, 2 * math.pi))
        u2 = 10 ** rng.uniform(-1, 1) * np.cos(w2 * t + rng.uniform(0, 2 * math.pi))
    elif kind == 2:
        c1, c2 = rng.uniform(-5, 5, 2)
        s = 10 ** rng.uniform(-2, 0)
        u1 = c1 + s * rng.standard_normal(n)
        u2 = c2 + s * rng.standard_normal(n)
    else:
        c = rng.uniform(-5, 5)
        u1 = c + rng.standard_normal(n) * 10 ** rng.uniform(-2, 0.5)
        u2 = u1 + 10 ** rng.uniform(-4, -1) * rng.standard_normal(n)
    if sg0:
        u2 = np.zeros(n)
    return u1, u2


def srg_cloud(op, n_pairs, seed, mode="SRG", n=256, dt=0.05) -> SrgCloud:
    """Sampled points of the SRG (mode "SRG") or the graph at zero (mode "SG0").

    Pair i draws from ``default_rng([seed, i])`` so results do not depend on
    evaluation order.  Degenerate pairs (u1 = u2, or zero output difference)
    are skipped.
    """
    if mode not in ("SRG", "SG0"):
        raise OracleError("mode must be 'SRG' or 'SG0'")
    sg0 = mode == "SG0"
    gains, angles = [], []
    for i in range(n_pairs):
        rng = np.random.default_rng([seed, i])
        u1, u2 = _probe_pair(i % 4, rng, n, dt, sg0)
        b1 = _prepare(op, SignalBuffer(dt, u1))
        b2 = _prepare(op, SignalBuffer(dt, u2))
        du = b1 - b2
        if du.norm() == 0:
            continue
        dy = _apply(op, b1, True) - _apply(op, b2, True)
        ny = dy.norm()
        gains.append(ny / du.norm())
        angles.append(signal_angle(du, dy) if ny > 0 else 0.0)
    return SrgCloud(np.asarray(gains), np.asarray(angles), mode, seed)


@dataclass(frozen=True)
class GainEstimate:
    value: float
    mode: str
    n_trials: int
    seed: int
    note: str = "sampled lower bound on the supremum"


def _curated_inputs(op, n, dt):
    """Near-worst-case probes: sinusoids at the peak frequency for LTI, offsets for maps."""
    t = dt * np.arange(n)
    out = []
    if isinstance(op, TransferFunction) and op.order > 0:
        w = np.concatenate([[0.0], np.logspace(-3, math.log10(math.pi / dt), 400)])
        mag = np.abs(tf_eval(op, 1j * w))
        w_peak = float(w[np.argmax(mag)])
        window = np.sin(math.pi * t / t[-1]) ** 2
        out.append(np.cos(w_peak * t) * window)
        out.append(window)
    elif isinstance(op, LureLoop):
        window = np.sin(math.pi * t / t[-1]) ** 2
        for amp in (0.01, 0.1, 1.0, 10.0):
            out.append(amp * window)
    else:
        for c in (-10.0, -3.0, 3.0, 10.0):
            out.append(np.full(n, c))
    return out


def empirical_gain(op, mode="incremental", n_trials=200, seed=0, n=256, dt=0.05) -> GainEstimate:
    """Largest sampled ratio ``||Ru1 - Ru2|| / ||u1 - u2||`` (or ``||Ru|| / ||u||``)."""
    if mode not in ("incremental", "non-incremental"):
        raise OracleError("mode must be 'incremental' or 'non-incremental'")
    cloud = srg_cloud(op, n_trials, seed, "SRG" if mode == "incremental" else "SG0", n, dt)
    best = float(np.max(cloud.gain)) if len(cloud) else 0.0
    zero = SignalBuffer(dt, np.zeros(n))
    # curated probes paired with the zero signal (valid pairs in both modes)
    b2 = _prepare(op, zero)
    for u in _curated_inputs(op, n, dt):
        b1 = _prepare(op, SignalBuffer(dt, u))
        du = b1 - b2
        if du.norm() == 0:
            continue
        dy = _apply(op, b1, True) - _apply(op, b2, True)
        best = max(best, dy.norm() / du.norm())
    return GainEstimate(best, mode, n_trials, seed)


# ------------------------------------------------------- closed-loop simulation

@dataclass
class LureResult:
    e: SignalBuffer
    y: SignalBuffer
    diverged: bool
    method: str = "zoh"

    def __iter__(self):
        yield self.e
        yield self.y


def _discretize(G: TransferFunction, dt, method):
    if not G.strictly_proper:
        raise OracleError("closed-loop simulation needs a strictly proper plant")
    A, B, C, D = sps.tf2ss(np.asarray(G.num)[::-1], np.asarray(G.den)[::-1])
    Ad, Bd, Cd, _, _ = sps.cont2discrete((A, B, C, D), dt, method=method)
    return Ad, Bd.ravel(), Cd.ravel()


def lure_simulate_batch(G: TransferFunction, nl: PiecewiseLinearNl, R, dt, method="zoh",
                        overflow_guard=OVERFLOW_GUARD):
    """Simulate many reference signals at once; rows of R are inputs.

    Returns (E, Y, diverged) with one row per input.
    """
    R = np.atleast_2d(np.asarray(R, dtype=float))
    Ad, Bd, Cd = _discretize(G, dt, method)
    m, n = R.shape
    x = np.zeros((Ad.shape[0], m))
    E = np.zeros((m, n))
    Y = np.zeros((m, n))
    diverged = np.zeros(m, dtype=bool)
    for k in range(n):
        y = Cd @ x
        bad = ~np.isfinite(y) | (np.abs(y) > overflow_guard)
        if np.any(bad):
            diverged |= bad
            x[:, bad] = 0.0
            y = np.where(bad, 0.0, y)
        e = R[:, k] - nl_eval(nl, y)
        Y[:, k], E[:, k] = y, e
        x = Ad @ x + np.outer(Bd, e)
    return E, Y, diverged


def lure_simulate(G: TransferFunction, nl: PiecewiseLinearNl, r: SignalBuffer, method="zoh",
                  overflow_guard=OVERFLOW_GUARD) -> LureResult:
    """Closed loop ``y = G(r - φ(y))`` with the plant discretized at the signal's dt."""
    E, Y, div = lure_simulate_batch(G, nl, r.samples, r.dt, method, overflow_guard)
    return LureResult(SignalBuffer(r.dt, E[0]), SignalBuffer(r.dt, Y[0]), bool(div[0]), method)


@dataclass
class ClosedLoopGain:
    value: float
    mode: str
    n_pairs: int
    seed: int
    diverged: int
    ratios: np.ndarray = field(repr=False, default=None)


def closed_loop_gain(G, nl, n_pairs=200, seed=0, dt=0.01, horizon=20.0, tail=20.0,
                     mode="incremental"):
    """Sampled gain of r -> y over random reference pairs (batched).

    In non-incremental mode the second reference of each pair is zero.
    """
    n = int(round(horizon / dt))
    pad = int(round(tail / dt))
    R1 = np.zeros((n_pairs, n + pad))
    R2 = np.zeros((n_pairs, n + pad))
    for i in range(n_pairs):
        rng = np.random.default_rng([seed, i])
        u1, u2 = _probe_pair(i % 4, rng, n, dt, False)
        # slow probes reach the low-frequency peak of the loop
        if i % 4 == 1:
            t = dt * np.arange(n)
            w = 10 ** rng.uniform(-2, 1)
            u1 = 10 ** rng.uniform(-2, 0) * np.sin(w * t)
            u2 = u1 + 10 ** rng.uniform(-3, 0) * np.sin(w * t + rng.uniform(0, 2 * math.pi))
        R1[i, :n] = u1
        if mode == "incremental":
            R2[i, :n] = u2
    _, Y1, d1 = lure_simulate_batch(G, nl, R1, dt)
    _, Y2, d2 = lure_simulate_batch(G, nl, R2, dt)
    num = np.sqrt(dt * np.sum((Y1 - Y2) ** 2, axis=1))
    den = np.sqrt(dt * np.sum((R1 - R2) ** 2, axis=1))
    ok = (den > 0) & ~(d1 | d2)
    ratios = num[ok] / den[ok]
    return ClosedLoopGain(float(np.max(ratios)) if len(ratios) else 0.0, mode, n_pairs, seed,
                          int(np.sum(d1 | d2)), ratios)
