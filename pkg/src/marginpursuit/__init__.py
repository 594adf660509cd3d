"""Margin pursuit: robust control of the margin distribution for linear classifiers."""
from ._accel import USE_NUMBA, backend
from .calibration import (
    PsiTable, build_psi_table, conditional_risk, optimal_conditional_risk,
    psi_inverse, psi_transform,
)
from .cubic import CubicPoly, RootSet, discriminant, solve_cubic
from .data import Dataset, SplitSpec, balanced_subsample, parse_csv, parse_libsvm, two_gaussians
from .estimator import (
    CatoniEstimate, catoni_estimate, lemma3_scale, scale_from_quantile,
    scale_from_variance, stability_radius,
)
from .harness import ExperimentConfig, run_experiment
from .loss import ScaledLoss, objective, objective_gradient, psi, rho, rho_second, surrogate_phi
from .metrics import MarginStats, margin_stats, misclassification_error
from .trainer import (
    TrainConfig, TrainTrace, gd_step, pegasos_train, project_ball, train,
    train_batch, train_stochastic,
)

__version__ = "0.1.0"
