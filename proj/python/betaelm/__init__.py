"""Python bindings for the betaelm C++ library."""

from ._core import (
    BetaParams,
    BetaRanges,
    ConfigError,
    DegenerateMatrix,
    Error,
    InvalidInput,
    ParseError,
    TrainedModel,
    UndefinedRate,
    beta_1d,
    beta_nd,
    classification_accuracy,
    improvement_rate,
    mse,
    pseudo_inverse,
    rmse,
    run_experiment,
    scale_to_spectral_radius,
    solve_output_weights,
    spectral_radius,
    train,
    validate_config,
)

MODELS = ("tanh-elm", "rec-tanh-elm", "elm-bbfnn", "rec-elm-bbfnn")
