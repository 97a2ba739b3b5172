"""Shared top-N selection: score descending, dense index ascending on ties."""

import numpy as np

from .dataio import RecommendationList


def top_n_indices(scores, n, exclude=None):
    """First n dense indices by (score desc, index asc), minus exclusions."""
    order = np.argsort(-np.asarray(scores), kind="stable")
    picked = []
    for idx in order.tolist():
        if exclude is not None and idx in exclude:
            continue
        picked.append(idx)
        if len(picked) == n:
            break
    return picked


def recommend_by_score(model, store, user, n, include_rated):
    """Score every trained item with model.predict and rank the top n.

    Items the user already rated are dropped unless include_rated is set;
    an unknown user simply gets no exclusions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    item_tokens = store.items.tokens()
    scores = [model.predict(user, tok) for tok in item_tokens]
    exclude = None
    if not include_rated:
        dense = store.users.get(user)
        if dense is not None:
            idx, _ = store.profile_arrays("user", dense)
            exclude = set(idx.tolist())
    picked = top_n_indices(scores, n, exclude)
    return RecommendationList(user=user, items=tuple(item_tokens[i] for i in picked))
