"""Average-rating predictors and the count-based Most Popular recommender."""

from dataclasses import dataclass, field

from .dataio import RecommendationList
from .errors import EmptyScopeError
from .ranking import recommend_by_score


@dataclass
class MeansModel:
    """Per-user or per-item mean ratings with a global-mean fallback."""

    axis: str
    means: dict
    global_mean: float
    rating_min: float
    rating_max: float

    @property
    def kind(self):
        return "useravg" if self.axis == "user" else "itemavg"

    @property
    def hyperparams(self):
        return {}

    def predict(self, user, item):
        return self.predict_detailed(user, item)[0]

    def predict_detailed(self, user, item):
        """(prediction, used_fallback) for one pair; total for any tokens."""
        token = user if self.axis == "user" else item
        value = self.means.get(token)
        if value is None:
            return self._clamp(self.global_mean), True
        return self._clamp(value), False

    def recommend(self, store, user, n, include_rated):
        return recommend_by_score(self, store, user, n, include_rated)

    def _clamp(self, value):
        return min(max(value, self.rating_min), self.rating_max)


@dataclass
class PopularityModel:
    """Items ranked by rating count (ties: lower dense index first)."""

    ranked_items: list          # item dense indices, most popular first
    rated_by: dict              # user token -> set of item dense indices
    item_tokens: list           # dense index -> external token

    kind = "mostpopular"

    @property
    def hyperparams(self):
        return {}

    def recommend(self, user, n, include_rated):
        return recommend_popular(self, user, n, include_rated)


def train_means(store, axis):
    """Fit per-entity means for UserAvg (axis='user') or ItemAvg (axis='item')."""
    if store.count == 0:
        raise EmptyScopeError("cannot train on an empty store")
    idmap = store.users if axis == "user" else store.items
    means = store.axis_means(axis)
    return MeansModel(
        axis=axis,
        means={idmap.token(i): float(means[i]) for i in range(len(idmap))},
        global_mean=store.global_mean,
        rating_min=store.rating_min,
        rating_max=store.rating_max,
    )


def predict_means(model, user, item):
    return model.predict(user, item)


def train_popular(store):
    if store.count == 0:
        raise EmptyScopeError("cannot train on an empty store")
    counts = [len(store.profile_arrays("item", i)[0]) for i in range(store.n_items)]
    ranked = sorted(range(store.n_items), key=lambda i: (-counts[i], i))
    rated_by = {}
    for u in range(store.n_users):
        idx, _ = store.profile_arrays("user", u)
        rated_by[store.users.token(u)] = set(idx.tolist())
    return PopularityModel(
        ranked_items=ranked,
        rated_by=rated_by,
        item_tokens=store.items.tokens(),
    )


def recommend_popular(model, user, n, include_rated):
    """Top n of the popularity ranking, minus the user's rated items.

    Unknown users get the unfiltered ranking; a catalog smaller than n
    yields a shorter list.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    exclude = set() if include_rated else model.rated_by.get(user, set())
    picked = []
    for idx in model.ranked_items:
        if idx in exclude:
            continue
        picked.append(model.item_tokens[idx])
        if len(picked) == n:
            break
    return RecommendationList(user=user, items=tuple(picked))
