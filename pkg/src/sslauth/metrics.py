"""Similarity metrics and the authentication decision rule.

Images are float arrays with values in [0, dynamic_range], shaped (H, W) for a
single plane or (H, W, 3) for RGB; batch operations add a leading axis. All
computation runs in float64, so results are identical across callers and runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import correlate2d

WINDOW_GAUSSIAN = "gaussian_11x11_sigma1.5"
WINDOW_GLOBAL = "global"
CHANNEL_MEAN = "per_channel_mean"
CHANNEL_LUMINANCE = "luminance_only"

MODE_RELATIVE = "relative_to_alpha0"
MODE_ABSOLUTE = "absolute"

GAUSSIAN_SIZE = 11
GAUSSIAN_SIGMA = 1.5

# ITU-R BT.601 luma weights, used by the luminance_only channel mode.
_LUMA = np.array([0.299, 0.587, 0.114], dtype=np.float64)


@dataclass(frozen=True)
class SsimConfig:
    """Constants and windowing for structural similarity.

    dynamic_range is the value range of the inputs (1.0 for float images in
    [0, 1], 255.0 for uint8-scaled data). The regularizers are derived from it:
    c1 = (k1 * dynamic_range)^2, c2 = (k2 * dynamic_range)^2, c3 = c2 / 2.
    """

    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 1.0
    window: str = WINDOW_GAUSSIAN
    channel_mode: str = CHANNEL_MEAN

    def __post_init__(self):
        if self.k1 <= 0 or self.k2 <= 0:
            raise ValueError("k1 and k2 must be positive")
        if self.dynamic_range <= 0:
            raise ValueError("dynamic_range must be positive")
        if self.window not in (WINDOW_GAUSSIAN, WINDOW_GLOBAL):
            raise ValueError(f"unknown window mode: {self.window!r}")
        if self.channel_mode not in (CHANNEL_MEAN, CHANNEL_LUMINANCE):
            raise ValueError(f"unknown channel mode: {self.channel_mode!r}")

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2

    @property
    def c3(self) -> float:
        return self.c2 / 2.0

    def to_dict(self) -> dict:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "dynamic_range": self.dynamic_range,
            "window": self.window,
            "channel_mode": self.channel_mode,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SsimConfig":
        return cls(**d)


@dataclass(frozen=True)
class AuthDecisionConfig:
    """Fault tolerance and normalization of the per-sample pass rule."""

    epsilon: float = 0.1
    mode: str = MODE_RELATIVE

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        if self.mode not in (MODE_RELATIVE, MODE_ABSOLUTE):
            raise ValueError(f"unknown decision mode: {self.mode!r}")


def cosine_similarity(a, b) -> float:
    """Cosine of the angle between two vectors, in [-1, 1].

    Raises ValueError for empty, mismatched, or zero-norm inputs rather than
    returning NaN.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or a.size != b.size:
        raise ValueError(f"vectors must have equal nonzero length, got {a.size} and {b.size}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity undefined for a zero-norm vector")
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


def cosine_per_sample(a, b) -> np.ndarray:
    """Row-wise cosine similarity of two (B, d) arrays."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] == 0:
        raise ValueError(f"expected matching (B, d) arrays, got {a.shape} and {b.shape}")
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    if np.any(na == 0.0) or np.any(nb == 0.0):
        raise ValueError("cosine similarity undefined for a zero-norm row")
    return np.clip(np.sum(a * b, axis=1) / (na * nb), -1.0, 1.0)


def _gaussian_window(size: int = GAUSSIAN_SIZE, sigma: float = GAUSSIAN_SIGMA) -> np.ndarray:
    coords = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-0.5 * (coords / sigma) ** 2)
    g /= g.sum()
    return np.outer(g, g)


def _validate_pair(x: np.ndarray, y: np.ndarray, cfg: SsimConfig) -> None:
    if x.shape != y.shape:
        raise ValueError(f"image shapes differ: {x.shape} vs {y.shape}")
    if x.ndim not in (2, 3) or (x.ndim == 3 and x.shape[2] != 3):
        raise ValueError(f"expected (H, W) or (H, W, 3) images, got shape {x.shape}")
    for name, arr in (("x", x), ("y", y)):
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"{name} contains non-finite values")
        if arr.min() < 0.0 or arr.max() > cfg.dynamic_range:
            raise ValueError(
                f"{name} has values outside [0, {cfg.dynamic_range}]: "
                f"range [{arr.min()}, {arr.max()}]"
            )
    if cfg.window == WINDOW_GAUSSIAN and min(x.shape[0], x.shape[1]) < GAUSSIAN_SIZE:
        raise ValueError(
            f"image {x.shape[:2]} is smaller than the {GAUSSIAN_SIZE}x{GAUSSIAN_SIZE} "
            f"window; use window='{WINDOW_GLOBAL}' for tiny images"
        )


def _planes(img: np.ndarray, cfg: SsimConfig):
    """Split an image into the 2-D planes SSIM is evaluated on."""
    if img.ndim == 2:
        return [img]
    if cfg.channel_mode == CHANNEL_LUMINANCE:
        return [img @ _LUMA]
    return [img[:, :, c] for c in range(3)]


def _plane_stats(x: np.ndarray, y: np.ndarray, cfg: SsimConfig):
    """Weighted first/second moments of one plane pair.

    Returns (mu_x, mu_y, var_x, var_y, cov), each scalar in global mode or a
    2-D map of valid window positions in gaussian mode. Variances use the
    weighted population convention (weights sum to one, no Bessel correction)
    and are clamped at zero against floating-point cancellation.
    """
    if cfg.window == WINDOW_GLOBAL:
        mu_x = x.mean()
        mu_y = y.mean()
        var_x = (x * x).mean() - mu_x**2
        var_y = (y * y).mean() - mu_y**2
        cov = (x * y).mean() - mu_x * mu_y
    else:
        w = _gaussian_window()
        mu_x = correlate2d(x, w, mode="valid")
        mu_y = correlate2d(y, w, mode="valid")
        var_x = correlate2d(x * x, w, mode="valid") - mu_x**2
        var_y = correlate2d(y * y, w, mode="valid") - mu_y**2
        cov = correlate2d(x * y, w, mode="valid") - mu_x * mu_y
    return mu_x, mu_y, np.maximum(var_x, 0.0), np.maximum(var_y, 0.0), cov


def ssim(x, y, cfg: SsimConfig = SsimConfig()) -> float:
    """Structural similarity of two images, in [-1, 1] (1 means identical).

    RGB inputs are reduced per cfg.channel_mode: SSIM of each channel averaged,
    or SSIM of the luma projection. In gaussian mode the per-window similarity
    map is averaged over all fully-valid window positions.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _validate_pair(x, y, cfg)
    vals = []
    for px, py in zip(_planes(x, cfg), _planes(y, cfg)):
        mu_x, mu_y, var_x, var_y, cov = _plane_stats(px, py, cfg)
        num = (2.0 * mu_x * mu_y + cfg.c1) * (2.0 * cov + cfg.c2)
        den = (mu_x**2 + mu_y**2 + cfg.c1) * (var_x + var_y + cfg.c2)
        vals.append(np.mean(num / den))
    return float(np.mean(vals))


def ssim_components(x, y, cfg: SsimConfig = SsimConfig()) -> tuple[float, float, float]:
    """The (luminance, contrast, structure) factors of the similarity score.

    With global statistics on a single plane (2-D input, or RGB with
    luminance_only) the product of the three factors equals ssim() exactly;
    with per-channel or windowed statistics the factors are averaged over
    channels/window positions and the product identity holds at the
    plane/window level instead.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _validate_pair(x, y, cfg)
    lums, cons, structs = [], [], []
    for px, py in zip(_planes(x, cfg), _planes(y, cfg)):
        mu_x, mu_y, var_x, var_y, cov = _plane_stats(px, py, cfg)
        sd_x = np.sqrt(var_x)
        sd_y = np.sqrt(var_y)
        lums.append(np.mean((2.0 * mu_x * mu_y + cfg.c1) / (mu_x**2 + mu_y**2 + cfg.c1)))
        cons.append(np.mean((2.0 * sd_x * sd_y + cfg.c2) / (var_x + var_y + cfg.c2)))
        structs.append(np.mean((cov + cfg.c3) / (sd_x * sd_y + cfg.c3)))
    return float(np.mean(lums)), float(np.mean(cons)), float(np.mean(structs))


def _validate_batches(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise ValueError(f"batch shapes differ: {x.shape} vs {y.shape}")
    if x.ndim not in (3, 4):
        raise ValueError(f"expected (B, H, W) or (B, H, W, 3) batches, got shape {x.shape}")
    if x.shape[0] == 0:
        raise ValueError("empty batch")


def ssim_per_sample(x, y, cfg: SsimConfig = SsimConfig()) -> np.ndarray:
    """SSIM of each aligned pair in two image batches."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _validate_batches(x, y)
    return np.array([ssim(x[i], y[i], cfg) for i in range(x.shape[0])])


def ssim_batch_mean(x, y, cfg: SsimConfig = SsimConfig()) -> float:
    """Arithmetic mean of per-sample SSIM over a batch."""
    return float(ssim_per_sample(x, y, cfg).mean())


def _validate_scores(per_sample_ssim) -> np.ndarray:
    s = np.asarray(per_sample_ssim, dtype=np.float64).ravel()
    if s.size == 0:
        raise ValueError("per-sample score vector is empty")
    return s


def confidence(per_sample_ssim, alpha0: float) -> float:
    """Mean per-sample SSIM normalized by the registration-time reference.

    Equals 1.0 when the verified encoder reproduces the registered
    reconstructions exactly.
    """
    s = _validate_scores(per_sample_ssim)
    if alpha0 <= 0.0:
        raise ValueError("alpha0 must be positive")
    return float(s.mean() / alpha0)


def auth_success_rate(
    per_sample_ssim, alpha0: float, cfg: AuthDecisionConfig = AuthDecisionConfig()
) -> tuple[float, np.ndarray]:
    """Fraction of samples whose similarity drop stays inside the tolerance.

    In relative mode sample i passes iff 1 - s_i / alpha0 < epsilon; absolute
    mode drops the alpha0 normalization (pass iff 1 - s_i < epsilon). Returns
    (rate, per-sample boolean pass mask).
    """
    s = _validate_scores(per_sample_ssim)
    if alpha0 <= 0.0:
        raise ValueError("alpha0 must be positive")
    if cfg.mode == MODE_RELATIVE:
        drop = 1.0 - s / alpha0
    else:
        drop = 1.0 - s
    mask = drop < cfg.epsilon
    return float(mask.sum() / mask.size), mask
