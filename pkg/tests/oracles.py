"""Independent brute-force reference implementations used only by tests.

Everything here is pure-Python dict/loop code recomputed directly from the
definitions, deliberately sharing no code with the library: the production
paths are vectorized, these are not. Contract constants (minimum overlap,
positivity threshold, zero-variance guard, list truncation) are restated
as literals.
"""

import math

import numpy as np


def as_dicts(store):
    """(user profiles, item profiles) as token-keyed nested dicts."""
    users = {}
    items = {}
    for u, prof in enumerate(store.user_index):
        tok = store.users.token(u)
        users[tok] = {store.items.token(i): r for i, r in prof}
    for i, prof in enumerate(store.item_index):
        tok = store.items.token(i)
        items[tok] = {store.users.token(u): r for u, r in prof}
    return users, items


def mean_oracle(values):
    return math.fsum(values) / len(values)


def mae_oracle(pairs):
    diffs = [abs(a - p) for a, p in pairs]
    return math.fsum(diffs) / len(diffs)


def rmse_oracle(pairs):
    sq = [(a - p) ** 2 for a, p in pairs]
    return math.sqrt(math.fsum(sq) / len(sq))


def clamp(value, lo, hi):
    return min(max(value, lo), hi)


def fallback_oracle(users, items, user, item, lo, hi):
    if user in users:
        return clamp(mean_oracle(list(users[user].values())), lo, hi)
    if item in items:
        return clamp(mean_oracle(list(items[item].values())), lo, hi)
    all_ratings = [r for prof in users.values() for r in prof.values()]
    return clamp(mean_oracle(all_ratings), lo, hi)


def popularity_ranking_oracle(store):
    """Count-sort by (count desc, dense index asc), as item tokens."""
    counts = []
    for i, prof in enumerate(store.item_index):
        counts.append((-len(prof), i))
    counts.sort()
    return [store.items.token(i) for _, i in counts]


def slopeone_oracle(store, user, item):
    users, items = as_dicts(store)
    lo, hi = store.rating_min, store.rating_max
    if user not in users or item not in items:
        return fallback_oracle(users, items, user, item, lo, hi)
    num = 0.0
    den = 0.0
    for j, r_uj in users[user].items():
        if j == item:
            continue
        raters_i = items[item]
        raters_j = items[j]
        common = [u for u in raters_i if u in raters_j]
        c = len(common)
        if c == 0:
            continue
        d = math.fsum(raters_i[u] - raters_j[u] for u in common) / c
        num += c * (d + r_uj)
        den += c
    if den == 0:
        return fallback_oracle(users, items, user, item, lo, hi)
    return clamp(num / den, lo, hi)


def pearson_oracle(pa, pb):
    """Subset-centered Pearson between two token->rating dicts.

    Mirrors the contract: minimum overlap of 2, zero-variance guard, and
    12-decimal canonical rounding of the final value.
    """
    common = sorted(set(pa) & set(pb))
    if len(common) < 2:
        return 0.0
    xs = [pa[c] for c in common]
    ys = [pb[c] for c in common]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    xc = [x - mx for x in xs]
    yc = [y - my for y in ys]
    vx = sum(v * v for v in xc)
    vy = sum(v * v for v in yc)
    if vx <= 1e-9 or vy <= 1e-9:
        return 0.0
    corr = sum(a * b for a, b in zip(xc, yc)) / math.sqrt(vx * vy)
    return float(np.round(corr, 12))


def knn_neighbors_oracle(store, axis, dense_idx, k):
    """Every positive-similarity neighbor as (index, sim), best first."""
    del k  # k applies at prediction time, not to the stored list
    profiles = store.user_index if axis == "user" else store.item_index
    me = dict(profiles[dense_idx])
    sims = []
    for other in range(len(profiles)):
        if other == dense_idx:
            continue
        s = pearson_oracle(me, dict(profiles[other]))
        if s > 1e-12:
            sims.append((other, s))
    sims.sort(key=lambda t: (-t[1], t[0]))
    return sims


def knn_oracle(store, axis, k, user, item):
    users, items = as_dicts(store)
    lo, hi = store.rating_min, store.rating_max
    u = store.users.get(user)
    i = store.items.get(item)
    if u is None or i is None:
        return fallback_oracle(users, items, user, item, lo, hi)
    user_means = [mean_oracle([r for _, r in prof]) for prof in store.user_index]
    item_means = [mean_oracle([r for _, r in prof]) for prof in store.item_index]
    if axis == "user":
        neighbors = knn_neighbors_oracle(store, "user", u, k)
        raters = dict(store.item_index[i])
        usable = [(v, s) for v, s in neighbors if v in raters][:k]
        if not usable:
            return fallback_oracle(users, items, user, item, lo, hi)
        num = sum(s * (raters[v] - user_means[v]) for v, s in usable)
        den = sum(abs(s) for _, s in usable)
        return clamp(user_means[u] + num / den, lo, hi)
    neighbors = knn_neighbors_oracle(store, "item", i, k)
    rated = dict(store.user_index[u])
    usable = [(j, s) for j, s in neighbors if j in rated][:k]
    if not usable:
        return fallback_oracle(users, items, user, item, lo, hi)
    num = sum(s * (rated[j] - item_means[j]) for j, s in usable)
    den = sum(abs(s) for _, s in usable)
    return clamp(item_means[i] + num / den, lo, hi)


def funksvd_oracle(store, config):
    """Pure-Python twin of the SGD trainer; returns (p, q, b_u, b_i, mu).

    Consumes the seeded generator exactly like the trainer (init draws,
    then one permutation per epoch) and applies the update equations with
    plain floats in the same order.
    """
    rng = np.random.default_rng(config.seed)
    p = [list(row) for row in rng.uniform(0.0, 0.1, size=(store.n_users, config.factors))]
    q = [list(row) for row in rng.uniform(0.0, 0.1, size=(store.n_items, config.factors))]
    b_u = [0.0] * store.n_users
    b_i = [0.0] * store.n_items
    flat_u, flat_i, flat_r = store.flat_arrays()
    flat_u = flat_u.tolist()
    flat_i = flat_i.tolist()
    flat_r = flat_r.tolist()
    mu = math.fsum(flat_r) / len(flat_r)
    lr = config.learn_rate
    reg = config.regularization
    for _ in range(config.max_iter):
        order = rng.permutation(store.count).tolist()
        for n in order:
            u, i, r = flat_u[n], flat_i[n], flat_r[n]
            dot = 0.0
            for c in range(config.factors):
                dot += p[u][c] * q[i][c]
            err = r - (mu + b_u[u] + b_i[i] + dot)
            if config.use_biases:
                b_u[u] += lr * (err - reg * b_u[u])
                b_i[i] += lr * (err - reg * b_i[i])
            for c in range(config.factors):
                p_old = p[u][c]
                p[u][c] = p_old + lr * (err * q[i][c] - reg * p_old)
                q[i][c] += lr * (err * p_old - reg * q[i][c])
    return p, q, b_u, b_i, mu
