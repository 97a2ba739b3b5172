"""Biased latent-factor model trained by per-rating stochastic gradient descent.

Prediction is mu + b_u + b_i + p_u . q_i. Training visits every rating once
per epoch in a seeded shuffled order and applies the classic regularized
SGD step; the same seed, config and store always reproduce the model
bit for bit, so training is kept strictly single-threaded.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyScopeError, TrainingDivergedError
from .ranking import recommend_by_score

INIT_HIGH = 0.1  # factors start uniform in [0, INIT_HIGH); biases start at 0


@dataclass(frozen=True)
class FactorizationConfig:
    factors: int = 100
    max_iter: int = 100
    learn_rate: float = 0.01
    regularization: float = 0.1
    seed: int = 42
    use_biases: bool = True

    def __post_init__(self):
        if self.factors < 1:
            raise ValueError("factors must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.learn_rate <= 0:
            raise ValueError("learn_rate must be positive")
        if self.regularization < 0:
            raise ValueError("regularization must be non-negative")

    def with_factors(self, factors):
        return replace(self, factors=factors)


@dataclass
class FactorModel:
    users: object               # IdMap of the training store
    items: object
    mu: float
    p: np.ndarray                # num_users x factors
    q: np.ndarray                # num_items x factors
    b_u: np.ndarray
    b_i: np.ndarray
    rating_min: float
    rating_max: float
    config: FactorizationConfig
    epoch_rmse: list = None      # training-set RMSE after each epoch

    kind = "funksvd"

    @property
    def hyperparams(self):
        return {
            "factors": self.config.factors,
            "max_iter": self.config.max_iter,
            "learn_rate": self.config.learn_rate,
            "regularization": self.config.regularization,
            "seed": self.config.seed,
            "use_biases": self.config.use_biases,
        }

    def predict(self, user, item):
        return self.predict_detailed(user, item)[0]

    def predict_detailed(self, user, item):
        """Full formula for known pairs; partial terms for cold entities."""
        u = self.users.get(user)
        i = self.items.get(item)
        if u is None and i is None:
            return self._clamp(self.mu), True
        if u is None:
            return self._clamp(self.mu + float(self.b_i[i])), False
        if i is None:
            return self._clamp(self.mu + float(self.b_u[u])), False
        raw = self.mu + float(self.b_u[u]) + float(self.b_i[i]) + float(self.p[u] @ self.q[i])
        return self._clamp(raw), False

    def recommend(self, store, user, n, include_rated):
        return recommend_by_score(self, store, user, n, include_rated)

    def _clamp(self, value):
        return min(max(value, self.rating_min), self.rating_max)


def sgd_epoch(p, q, b_u, b_i, mu, users, items, ratings, order, lr, reg, use_biases):
    """One pass over the ratings in `order`, updating parameters in place.

    Compiled with numba for training (see _kernel); kept importable in
    plain Python so the update arithmetic is directly testable.
    """
    n_factors = p.shape[1]
    for t in range(order.shape[0]):
        n = order[t]
        u = users[n]
        i = items[n]
        dot = 0.0
        for c in range(n_factors):
            dot += p[u, c] * q[i, c]
        err = ratings[n] - (mu + b_u[u] + b_i[i] + dot)
        if use_biases:
            b_u[u] += lr * (err - reg * b_u[u])
            b_i[i] += lr * (err - reg * b_i[i])
        for c in range(n_factors):
            # q's step must see the pre-update p value
            p_old = p[u, c]
            p[u, c] = p_old + lr * (err * q[i, c] - reg * p_old)
            q[i, c] += lr * (err * p_old - reg * q[i, c])


_jit_kernel = None


def _kernel():
    """JIT-compiled sgd_epoch; numba is imported only when training."""
    global _jit_kernel
    if _jit_kernel is None:
        from numba import njit

        _jit_kernel = njit(cache=True)(sgd_epoch)
    return _jit_kernel


_warmed = False


def ensure_compiled():
    """Force JIT compilation of the SGD kernel outside any timed region."""
    global _warmed
    if not _warmed:
        one = np.zeros(1)
        _kernel()(
            np.zeros((1, 1)), np.zeros((1, 1)), one.copy(), one.copy(), 0.0,
            np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64),
            one.copy(), np.zeros(1, dtype=np.int64), 0.0, 0.0, True,
        )
        _warmed = True


def train_funksvd(store, config=FactorizationConfig()):
    """Run max_iter SGD epochs over the store's ratings.

    Raises TrainingDivergedError as soon as any parameter goes non-finite,
    naming the epoch (1-based).
    """
    if store.count == 0:
        raise EmptyScopeError("cannot train on an empty store")
    rng = np.random.default_rng(config.seed)
    p = rng.uniform(0.0, INIT_HIGH, size=(store.n_users, config.factors))
    q = rng.uniform(0.0, INIT_HIGH, size=(store.n_items, config.factors))
    b_u = np.zeros(store.n_users)
    b_i = np.zeros(store.n_items)
    mu = store.global_mean
    users, items, ratings = store.flat_arrays()
    kernel = _kernel()

    epoch_rmse = []
    for epoch in range(1, config.max_iter + 1):
        order = rng.permutation(store.count)
        kernel(
            p, q, b_u, b_i, mu, users, items, ratings, order,
            config.learn_rate, config.regularization, config.use_biases,
        )
        if not (
            np.isfinite(p).all()
            and np.isfinite(q).all()
            and np.isfinite(b_u).all()
            and np.isfinite(b_i).all()
        ):
            raise TrainingDivergedError(epoch)
        resid = ratings - (
            mu + b_u[users] + b_i[items] + np.einsum("nf,nf->n", p[users], q[items])
        )
        epoch_rmse.append(float(np.sqrt(np.mean(resid * resid))))

    return FactorModel(
        users=store.users,
        items=store.items,
        mu=mu,
        p=p,
        q=q,
        b_u=b_u,
        b_i=b_i,
        rating_min=store.rating_min,
        rating_max=store.rating_max,
        config=config,
        epoch_rmse=epoch_rmse,
    )


def predict_funksvd(model, user, item):
    return model.predict(user, item)


def recommend_funksvd(model, store, user, n, include_rated):
    return recommend_by_score(model, store, user, n, include_rated)
