"""Reference structural-similarity oracle, written before the main library.

Deliberately naive: every window position is visited in a Python loop and the
three factors (luminance, contrast, structure) are evaluated straight from
their defining formulas. Shares no code with sslauth.metrics so it can act as
an independent check.
"""

import math

import numpy as np


def gaussian_window(size=11, sigma=1.5):
    half = (size - 1) / 2.0
    w = np.zeros((size, size), dtype=np.float64)
    for i in range(size):
        for j in range(size):
            w[i, j] = math.exp(-((i - half) ** 2 + (j - half) ** 2) / (2.0 * sigma**2))
    return w / w.sum()


def _factors(x, y, weights, c1, c2, c3):
    """Luminance, contrast, structure of one (weighted) window pair."""
    w = weights / weights.sum()
    mu_x = float((w * x).sum())
    mu_y = float((w * y).sum())
    var_x = float((w * (x - mu_x) ** 2).sum())
    var_y = float((w * (y - mu_y) ** 2).sum())
    cov = float((w * (x - mu_x) * (y - mu_y)).sum())
    sd_x = math.sqrt(max(var_x, 0.0))
    sd_y = math.sqrt(max(var_y, 0.0))
    lum = (2.0 * mu_x * mu_y + c1) / (mu_x**2 + mu_y**2 + c1)
    con = (2.0 * sd_x * sd_y + c2) / (var_x + var_y + c2)
    struct = (cov + c3) / (sd_x * sd_y + c3)
    return lum, con, struct


def reference_ssim_plane(x, y, k1=0.01, k2=0.03, data_range=1.0, window="global"):
    """SSIM of a single 2-D plane pair: mean over windows of l*c*s."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    assert x.shape == y.shape and x.ndim == 2
    c1 = (k1 * data_range) ** 2
    c2 = (k2 * data_range) ** 2
    c3 = c2 / 2.0
    if window == "global":
        weights = np.ones_like(x)
        lum, con, struct = _factors(x, y, weights, c1, c2, c3)
        return lum * con * struct
    assert window == "gaussian_11x11_sigma1.5"
    w = gaussian_window()
    size = 11
    h, ht = x.shape[0] - size + 1, x.shape[1] - size + 1
    assert h >= 1 and ht >= 1, "plane smaller than the window"
    vals = []
    for i in range(h):
        for j in range(ht):
            lum, con, struct = _factors(
                x[i : i + size, j : j + size], y[i : i + size, j : j + size], w, c1, c2, c3
            )
            vals.append(lum * con * struct)
    return float(np.mean(vals))


def reference_ssim(x, y, k1=0.01, k2=0.03, data_range=1.0, window="global",
                   channel_mode="per_channel_mean"):
    """SSIM for 2-D planes or (H, W, 3) images, averaging channels."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim == 2:
        return reference_ssim_plane(x, y, k1, k2, data_range, window)
    assert x.ndim == 3 and x.shape[2] == 3
    if channel_mode == "luminance_only":
        weights = np.array([0.299, 0.587, 0.114])
        lx = x @ weights
        ly = y @ weights
        return reference_ssim_plane(lx, ly, k1, k2, data_range, window)
    vals = [
        reference_ssim_plane(x[:, :, c], y[:, :, c], k1, k2, data_range, window)
        for c in range(3)
    ]
    return float(np.mean(vals))


def reference_auth_rate(per_sample, alpha0, epsilon, mode="relative_to_alpha0"):
    """Pass-rate oracle: literal per-sample loop over the decision rule."""
    cnt = 0
    for s in per_sample:
        if mode == "relative_to_alpha0":
            ok = 1.0 - s / alpha0 < epsilon
        else:
            ok = 1.0 - s < epsilon
        if ok:
            cnt += 1
    return cnt / len(per_sample)
