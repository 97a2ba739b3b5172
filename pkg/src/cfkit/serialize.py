"""Versioned json model files.

Every file carries a format tag, a version, the model kind, and an echo of
the training file (path + column spec) so commands that need the training
ratings back in memory (slope one, the KNNs, most popular, and any
recommendation with rated-item exclusion) can locate them by default.
Reals are written in shortest round-trip decimal form, so a reloaded model
predicts bit-identically.
"""

import json

import numpy as np

from .baseline import MeansModel, PopularityModel
from .dataio import DataFileSpec
from .errors import ConfigError, ModelFormatError
from .factorization import FactorizationConfig, FactorModel
from .neighborhood import DeviationModel, SimilarityModel
from .store import IdMap

FORMAT_TAG = "cfkit-model"
FORMAT_VERSION = 1

# kinds whose predictions read the training ratings, not just the tables
KINDS_NEEDING_STORE = {"slopeone", "userknn", "itemknn", "mostpopular"}


def save_model(model, path, train_path=None, file_spec=None):
    payload = {"format": FORMAT_TAG, "version": FORMAT_VERSION, "kind": model.kind}
    if train_path is not None:
        spec = file_spec or DataFileSpec()
        payload["train"] = {
            "path": str(train_path),
            "spec": {
                "delimiter": spec.delimiter,
                "has_header": spec.has_header,
                "user_col": spec.user_col,
                "item_col": spec.item_col,
                "rating_col": spec.rating_col,
            },
        }
    payload.update(_payload_for(model))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, separators=(",", ":")))


def _payload_for(model):
    if isinstance(model, MeansModel):
        return {
            "axis": model.axis,
            "global_mean": model.global_mean,
            "means": model.means,
            "rating_min": model.rating_min,
            "rating_max": model.rating_max,
        }
    if isinstance(model, PopularityModel):
        return {"ranking": [model.item_tokens[i] for i in model.ranked_items]}
    if isinstance(model, DeviationModel):
        iu, ij = np.nonzero(model.card)
        items = model.store.items
        return {
            "items": items.tokens(),
            "pair_i": [items.token(i) for i in iu.tolist()],
            "pair_j": [items.token(j) for j in ij.tolist()],
            "dev": model.dev[iu, ij].tolist(),
            "card": [int(c) for c in model.card[iu, ij].tolist()],
        }
    if isinstance(model, SimilarityModel):
        idmap = model.store.users if model.axis == "user" else model.store.items
        lists = [
            [[idmap.token(n), float(s)] for n, s in zip(idx.tolist(), sims.tolist())]
            for idx, sims in zip(model.neighbor_idx, model.neighbor_sim)
        ]
        return {
            "axis": model.axis,
            "k": model.k,
            "k_max": model.k_max,
            "entities": idmap.tokens(),
            "neighbors": lists,
        }
    if isinstance(model, FactorModel):
        return {
            "config": model.hyperparams,
            "mu": model.mu,
            "rating_min": model.rating_min,
            "rating_max": model.rating_max,
            "users": model.users.tokens(),
            "items": model.items.tokens(),
            "b_u": model.b_u.tolist(),
            "b_i": model.b_i.tolist(),
            "p": model.p.tolist(),
            "q": model.q.tolist(),
        }
    raise ModelFormatError(f"cannot serialize model of type {type(model).__name__}")


def read_model_file(path):
    """Load and validate the json envelope; returns the raw payload."""
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not a valid model file ({exc})") from None
    if not isinstance(payload, dict) or payload.get("format") != FORMAT_TAG:
        raise ModelFormatError(f"{path}: not a {FORMAT_TAG} file")
    if payload.get("version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported model version {payload.get('version')!r}"
        )
    if "kind" not in payload:
        raise ModelFormatError(f"{path}: missing model kind")
    return payload


def train_echo(payload):
    """(path, DataFileSpec) recorded at save time, or (None, None)."""
    echo = payload.get("train")
    if not echo:
        return None, None
    spec = echo.get("spec", {})
    return echo.get("path"), DataFileSpec(
        delimiter=spec.get("delimiter", "\t"),
        has_header=spec.get("has_header", False),
        user_col=spec.get("user_col", 0),
        item_col=spec.get("item_col", 1),
        rating_col=spec.get("rating_col", 2),
    )


def model_from_payload(payload, store=None):
    kind = payload["kind"]
    if kind in KINDS_NEEDING_STORE and store is None:
        raise ConfigError(f"{kind} models need the training ratings to be loaded")
    try:
        if kind in ("useravg", "itemavg"):
            return MeansModel(
                axis=payload["axis"],
                means=dict(payload["means"]),
                global_mean=float(payload["global_mean"]),
                rating_min=float(payload["rating_min"]),
                rating_max=float(payload["rating_max"]),
            )
        if kind == "mostpopular":
            return _popularity_from(payload, store)
        if kind == "slopeone":
            return _slopeone_from(payload, store)
        if kind in ("userknn", "itemknn"):
            return _knn_from(payload, store)
        if kind == "funksvd":
            return _factor_from(payload)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed {kind} model: {exc}") from None
    raise ModelFormatError(f"unknown model kind {kind!r}")


def load_model(path, store=None):
    return model_from_payload(read_model_file(path), store=store)


def _require_index(idmap, axis, token):
    dense = idmap.get(token)
    if dense is None:
        raise ModelFormatError(
            f"model references {axis} {token!r} absent from the training data"
        )
    return dense


def _popularity_from(payload, store):
    ranked = [_require_index(store.items, "item", t) for t in payload["ranking"]]
    rated_by = {}
    for u in range(store.n_users):
        idx, _ = store.profile_arrays("user", u)
        rated_by[store.users.token(u)] = set(idx.tolist())
    return PopularityModel(
        ranked_items=ranked, rated_by=rated_by, item_tokens=store.items.tokens()
    )


def _slopeone_from(payload, store):
    n = store.n_items
    dev = np.zeros((n, n))
    card = np.zeros((n, n))
    ii = np.array([_require_index(store.items, "item", t) for t in payload["pair_i"]], dtype=np.int64)
    jj = np.array([_require_index(store.items, "item", t) for t in payload["pair_j"]], dtype=np.int64)
    dv = np.asarray(payload["dev"], dtype=np.float64)
    cd = np.asarray(payload["card"], dtype=np.float64)
    if np.any(ii == jj):
        raise ModelFormatError("slopeone model pairs an item with itself")
    # keep storage upper-triangular regardless of the store's index order
    flip = ii > jj
    ii[flip], jj[flip] = jj[flip], ii[flip]
    dv[flip] = -dv[flip]
    dev[ii, jj] = dv
    card[ii, jj] = cd
    return DeviationModel(
        dev=dev,
        card=card,
        store=store,
        user_means=store.axis_means("user"),
        item_means=store.axis_means("item"),
        global_mean=store.global_mean,
    )


def _knn_from(payload, store):
    axis = payload["axis"]
    idmap = store.users if axis == "user" else store.items
    neighbor_idx = [np.zeros(0, dtype=np.int64)] * len(idmap)
    neighbor_sim = [np.zeros(0)] * len(idmap)
    for token, entries in zip(payload["entities"], payload["neighbors"]):
        e = _require_index(idmap, axis, token)
        neighbor_idx[e] = np.array(
            [_require_index(idmap, axis, t) for t, _ in entries], dtype=np.int64
        )
        neighbor_sim[e] = np.array([s for _, s in entries], dtype=np.float64)
    return SimilarityModel(
        axis=axis,
        k=int(payload["k"]),
        k_max=int(payload["k_max"]),
        neighbor_idx=neighbor_idx,
        neighbor_sim=neighbor_sim,
        store=store,
        user_means=store.axis_means("user"),
        item_means=store.axis_means("item"),
        global_mean=store.global_mean,
    )


def _factor_from(payload):
    users = IdMap()
    for t in payload["users"]:
        users.add(t)
    items = IdMap()
    for t in payload["items"]:
        items.add(t)
    config = FactorizationConfig(**payload["config"])
    return FactorModel(
        users=users,
        items=items,
        mu=float(payload["mu"]),
        p=np.asarray(payload["p"], dtype=np.float64),
        q=np.asarray(payload["q"], dtype=np.float64),
        b_u=np.asarray(payload["b_u"], dtype=np.float64),
        b_i=np.asarray(payload["b_i"], dtype=np.float64),
        rating_min=float(payload["rating_min"]),
        rating_max=float(payload["rating_max"]),
        config=config,
    )
