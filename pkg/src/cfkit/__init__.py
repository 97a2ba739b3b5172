"""cfkit: collaborative-filtering recommenders over sparse rating files."""

from .baseline import (
    MeansModel,
    PopularityModel,
    predict_means,
    recommend_popular,
    train_means,
    train_popular,
)
from .dataio import (
    DataFileSpec,
    PredictionRecord,
    RecommendationList,
    parse_ratings,
    write_predictions,
    write_ratings,
    write_recommendations,
)
from .errors import (
    CfkitError,
    ConfigError,
    DuplicateRatingError,
    EmptyEvaluationError,
    EmptyScopeError,
    MalformedLineError,
    ModelFormatError,
    ParseError,
    RatingValueError,
    TrainingDivergedError,
    UnknownEntityError,
)
from .evaluate import EvalReport, evaluate, mae, rmse, timing_sweep
from .factorization import (
    FactorizationConfig,
    FactorModel,
    predict_funksvd,
    recommend_funksvd,
    train_funksvd,
)
from .neighborhood import (
    DeviationModel,
    SimilarityModel,
    predict_knn,
    predict_slopeone,
    recommend_neighborhood,
    similarity,
    train_knn,
    train_slopeone,
)
from .serialize import load_model, save_model
from .store import IdMap, RatingStore, RatingTriple, build_store, mean, profile

__version__ = "0.1.0"
