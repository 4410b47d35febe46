"""Seeded synthetic binary streams for tests, demos and the CLI."""

import numpy as np

from .data import Dataset


def two_gaussians(n_per_class=500, dim=2, margin=2.0, seed=0, name="synth-separable"):
    """Two unit-variance Gaussians with a hard geometric margin at the origin.

    Class means sit at ``+-(margin + 1)`` along the first axis. Samples
    with ``y * x_0 < margin`` are rejected and redrawn, so every sample
    lies at distance at least ``margin`` from the hyperplane ``x_0 = 0``:
    the set is linearly separable by ``w = e_0`` (no bias needed).
    """
    if dim < 1 or n_per_class < 1 or margin < 0:
        raise ValueError("need dim >= 1, n_per_class >= 1 and margin >= 0")
    rng = np.random.default_rng(seed)
    offset = margin + 1.0
    parts, labels = [], []
    for label in (-1, 1):
        rows = []
        have = 0
        while have < n_per_class:
            block = rng.standard_normal((2 * n_per_class, dim))
            block[:, 0] += label * offset
            block = block[label * block[:, 0] >= margin]
            rows.append(block)
            have += block.shape[0]
        parts.append(np.vstack(rows)[:n_per_class])
        labels.append(np.full(n_per_class, label))
    X = np.vstack(parts)
    y = np.concatenate(labels)
    order = rng.permutation(X.shape[0])
    return Dataset(name, X[order], y[order],
                   {"generator": "two_gaussians", "margin": margin, "seed": seed})


def imbalanced_gaussians(n_neg=1000, ratio=0.05, dim=2, separation=2.0, seed=0,
                         name=None):
    """Overlapping Gaussians with ``n_pos = round(ratio * n_neg)``.

    Negatives are centred at the origin, positives at ``separation``
    along the first axis; both have identity covariance. The set is not
    separable and the class prior is skewed by ``ratio``.
    """
    n_pos = int(round(ratio * n_neg))
    if n_pos < 1 or n_neg < 1:
        raise ValueError(f"ratio {ratio} with n_neg={n_neg} leaves an empty class")
    rng = np.random.default_rng(seed)
    neg = rng.standard_normal((n_neg, dim))
    pos = rng.standard_normal((n_pos, dim))
    pos[:, 0] += separation
    X = np.vstack([neg, pos])
    y = np.concatenate([-np.ones(n_neg, dtype=int), np.ones(n_pos, dtype=int)])
    order = rng.permutation(X.shape[0])
    name = name or f"synth-imbalanced-{ratio:g}"
    return Dataset(name, X[order], y[order],
                   {"generator": "imbalanced_gaussians", "ratio": ratio, "seed": seed})


def parse_synthetic(spec, seed=0):
    """Build a dataset from a ``synth:`` identifier.

    ``synth:separable`` or ``synth:imbalanced:<ratio>``, optionally
    followed by ``:d=<dim>`` and ``:n=<count>`` (per class for separable,
    negatives for imbalanced). Returns None if ``spec`` is not synthetic.
    """
    if not spec.startswith("synth:"):
        return None
    parts = spec.split(":")[1:]
    kind = parts[0]
    opts = {}
    positional = []
    for p in parts[1:]:
        if "=" in p:
            k, v = p.split("=", 1)
            opts[k] = v
        else:
            positional.append(p)
    dim = int(opts.get("d", 2))
    if kind == "separable":
        return two_gaussians(int(opts.get("n", 500)), dim, float(opts.get("margin", 2.0)),
                             seed=seed, name=spec)
    if kind == "imbalanced":
        ratio = float(positional[0]) if positional else float(opts.get("ratio", 0.1))
        return imbalanced_gaussians(int(opts.get("n", 1000)), ratio, dim,
                                    float(opts.get("sep", 2.0)), seed=seed, name=spec)
    raise ValueError(f"unknown synthetic generator {kind!r} in {spec!r}")
