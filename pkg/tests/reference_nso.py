"""Straight-line, loop-per-element NSO iteration used as a test oracle.

Deliberately shares no code with ``nsopt.nso``: plain Python floats and
lists, every sum accumulated left to right. The only numpy calls are the
random draws (same stream, same order as the library) and scalar ``exp``,
because numpy's exp and ``math.exp`` differ in the last ulp.
"""

import math

import numpy as np


def _clip(v, lo, hi):
    return min(max(v, lo), hi)


def _pull_row(i, X, W, normalize):
    n, d = len(X), len(X[0])
    w = W[i]
    if normalize:
        s = w[0]
        for j in range(1, n):
            s = s + w[j]
        if s == 0.0:
            return [0.0] * d
        w = [w[j] / s for j in range(n)]
    out = []
    for k in range(d):
        acc = w[0] * (X[0][k] - X[i][k])
        for j in range(1, n):
            acc = acc + w[j] * (X[j][k] - X[i][k])
        out.append(acc)
    return out


def reference_step(positions, fitness, evaluated, weights, best_value, best_point,
                   trace, iteration, rng, cfg, func, lower, upper):
    """Return ``(positions, fitness, weights, best_value, best_point, trace, iteration)``.

    ``func`` maps a list of floats to a float; ``rng`` is consumed exactly
    as the library consumes it.
    """
    X = [list(map(float, row)) for row in positions]
    F = list(map(float, fitness))
    W = [list(map(float, row)) for row in weights]
    n, d = len(X), len(X[0])
    lower = list(map(float, lower))
    upper = list(map(float, upper))
    best_point = list(map(float, best_point))
    trace = list(trace)

    # refresh fitness of moved neurons
    if not evaluated:
        F = [float(func(np.array(x))) for x in X]
        b = 0
        for i in range(1, n):
            if F[i] < F[b]:
                b = i
        if F[b] < best_value:
            best_value = F[b]
            best_point = list(X[b])

    # min-max normalization
    lo, hi = min(F), max(F)
    if hi == lo:
        nf = [0.5] * n
    else:
        nf = [(f - lo) / (hi - lo) for f in F]

    # Hebbian update
    for i in range(n):
        for j in range(n):
            if i == j:
                W[i][j] = 0.0
                continue
            s = (X[j][0] - X[i][0]) * (X[j][0] - X[i][0])
            for k in range(1, d):
                s = s + (X[j][k] - X[i][k]) * (X[j][k] - X[i][k])
            dist = math.sqrt(s)
            inc = (cfg.learning_rate * (1.0 - abs(nf[i] - nf[j]))) * float(
                np.exp(-cfg.distance_decay * dist))
            W[i][j] = _clip(W[i][j] + inc, 0.0, 1.0)

    # movement from a frozen snapshot
    eps = rng.normal((n, d))
    normalize = not cfg.literal_pull
    moved = []
    for i in range(n):
        pull = _pull_row(i, X, W, normalize)
        row = []
        for k in range(d):
            noise = cfg.perturbation * float(eps[i][k])
            if cfg.perturbation_scaling == "range":
                noise = noise * (upper[k] - lower[k])
            row.append(_clip(X[i][k] + pull[k] + noise, lower[k], upper[k]))
        moved.append(row)

    # pruning
    for i in range(n):
        for j in range(n):
            if W[i][j] < cfg.prune_threshold:
                W[i][j] = 0.0

    # reinforcement
    final = []
    for i in range(n):
        if cfg.reinforce_target == "best":
            b = None
            for j in range(n):
                if W[i][j] > 0 and (b is None or F[j] < F[b]):
                    b = j
            target = moved[i] if b is None else X[b]
            row = [_clip(moved[i][k] + cfg.reinforcement * (target[k] - moved[i][k]),
                         lower[k], upper[k]) for k in range(d)]
        else:
            pull = _pull_row(i, moved, W, normalize)
            row = [_clip(moved[i][k] + cfg.reinforcement * pull[k], lower[k], upper[k])
                   for k in range(d)]
        final.append(row)

    trace.append(best_value)
    return final, F, W, best_value, best_point, trace, iteration + 1
