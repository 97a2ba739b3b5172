"""Sparse in-memory rating store with user-major and item-major views.

All recommendation algorithms read training data through this module, so
external user/item identifiers are mapped once to dense 0-based indices
(first-seen order) and every per-entity rating list is kept sorted by the
counterpart's dense index.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DuplicateRatingError, EmptyScopeError, UnknownEntityError


@dataclass(frozen=True)
class RatingTriple:
    """One (user, item, rating) observation from a data file."""

    user: str
    item: str
    rating: float

    def __post_init__(self):
        if not self.user or not self.item:
            raise ValueError("user and item tokens must be non-empty")
        if not math.isfinite(self.rating):
            raise ValueError(f"rating must be finite, got {self.rating!r}")


class IdMap:
    """Bidirectional map between external tokens and dense 0-based indices.

    Indices are contiguous and assigned in first-seen order, which makes
    every downstream tie-break reproducible.
    """

    def __init__(self):
        self._forward = {}
        self._backward = []

    def add(self, token):
        idx = self._forward.get(token)
        if idx is None:
            idx = len(self._backward)
            self._forward[token] = idx
            self._backward.append(token)
        return idx

    def index(self, token):
        return self._forward[token]

    def get(self, token):
        """Dense index for token, or None if unseen."""
        return self._forward.get(token)

    def token(self, index):
        return self._backward[index]

    def tokens(self):
        return list(self._backward)

    def __contains__(self, token):
        return token in self._forward

    def __len__(self):
        return len(self._backward)


class RatingStore:
    """Immutable dual-indexed view of a set of ratings.

    Built once by :func:`build_store`; safe to share across concurrent
    readers afterwards.
    """

    def __init__(self, users, items, user_profiles, item_profiles, flat):
        self.users = users
        self.items = items
        # per-entity (index array, rating array) pairs, sorted by index
        self._user_profiles = user_profiles
        self._item_profiles = item_profiles
        # all ratings in input order: (user idx, item idx, rating) arrays
        self._flat_u, self._flat_i, self._flat_r = flat
        self.count = len(self._flat_r)
        if self.count:
            self.rating_min = float(self._flat_r.min())
            self.rating_max = float(self._flat_r.max())
        else:
            self.rating_min = None
            self.rating_max = None
        self._dense_cache = None
        self._means_cache = {}

    @property
    def n_users(self):
        return len(self.users)

    @property
    def n_items(self):
        return len(self.items)

    @property
    def user_index(self):
        """Per-user list of (item dense index, rating) tuples."""
        return [list(zip(idx.tolist(), r.tolist())) for idx, r in self._user_profiles]

    @property
    def item_index(self):
        """Per-item list of (user dense index, rating) tuples."""
        return [list(zip(idx.tolist(), r.tolist())) for idx, r in self._item_profiles]

    def profile_arrays(self, axis, dense_idx):
        """(counterpart indices, ratings) numpy arrays for one entity."""
        profiles = self._user_profiles if axis == "user" else self._item_profiles
        return profiles[dense_idx]

    def flat_arrays(self):
        """(user idx, item idx, rating) arrays over all ratings, input order."""
        return self._flat_u, self._flat_i, self._flat_r

    def dense(self):
        """Dense (ratings, mask) float64 matrices, cached after first use."""
        if self._dense_cache is None:
            r = np.zeros((self.n_users, self.n_items))
            m = np.zeros((self.n_users, self.n_items))
            r[self._flat_u, self._flat_i] = self._flat_r
            m[self._flat_u, self._flat_i] = 1.0
            self._dense_cache = (r, m)
        return self._dense_cache

    @property
    def global_mean(self):
        if self.count == 0:
            raise EmptyScopeError("store holds no ratings")
        return float(self._flat_r.sum()) / self.count

    def axis_means(self, axis):
        """Per-entity mean ratings as a dense-index-aligned array."""
        if axis not in self._means_cache:
            profiles = self._user_profiles if axis == "user" else self._item_profiles
            self._means_cache[axis] = np.array(
                [float(r.sum()) / len(r) for _, r in profiles]
            )
        return self._means_cache[axis]

    def clamp(self, value):
        """Restrict a prediction to the observed rating bounds."""
        return min(max(value, self.rating_min), self.rating_max)


def build_store(triples):
    """Index a sequence of RatingTriple into a RatingStore.

    Dense indices follow first-seen order; a repeated (user, item) pair is
    a hard error because a silent overwrite would corrupt benchmarks.
    """
    users = IdMap()
    items = IdMap()
    flat_u, flat_i, flat_r = [], [], []
    seen = set()
    for t in triples:
        u = users.add(t.user)
        i = items.add(t.item)
        if (u, i) in seen:
            raise DuplicateRatingError(t.user, t.item)
        seen.add((u, i))
        flat_u.append(u)
        flat_i.append(i)
        flat_r.append(t.rating)

    flat = (
        np.asarray(flat_u, dtype=np.int64),
        np.asarray(flat_i, dtype=np.int64),
        np.asarray(flat_r, dtype=np.float64),
    )
    user_profiles = _group_profiles(len(users), flat[0], flat[1], flat[2])
    item_profiles = _group_profiles(len(items), flat[1], flat[0], flat[2])
    return RatingStore(users, items, user_profiles, item_profiles, flat)


def _group_profiles(n_entities, keys, counterparts, ratings):
    buckets = [[] for _ in range(n_entities)]
    for k, c, r in zip(keys.tolist(), counterparts.tolist(), ratings.tolist()):
        buckets[k].append((c, r))
    profiles = []
    for entries in buckets:
        entries.sort()
        idx = np.asarray([c for c, _ in entries], dtype=np.int64)
        val = np.asarray([r for _, r in entries], dtype=np.float64)
        profiles.append((idx, val))
    return profiles


def profile(store, axis, token):
    """Row (axis='user') or column (axis='item') of one external id."""
    idmap = store.users if axis == "user" else store.items
    dense = idmap.get(token)
    if dense is None:
        raise UnknownEntityError(axis, token)
    idx, ratings = store.profile_arrays(axis, dense)
    return list(zip(idx.tolist(), ratings.tolist()))


def mean(store, scope, token=None):
    """Arithmetic mean over a scope: 'global', 'user' or 'item'."""
    if scope == "global":
        return store.global_mean
    if scope not in ("user", "item"):
        raise ValueError(f"unknown scope {scope!r}")
    idmap = store.users if scope == "user" else store.items
    dense = idmap.get(token)
    if dense is None:
        raise UnknownEntityError(scope, token)
    _, ratings = store.profile_arrays(scope, dense)
    if len(ratings) == 0:
        raise EmptyScopeError(f"{scope} {token!r} has no ratings")
    return float(ratings.sum()) / len(ratings)
