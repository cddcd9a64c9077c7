"""Linear-time quantum kernel alignment with class centroids, on a batched state-vector simulator."""
from .baseline import default_gamma, rbf, rbf_centroid_classify
from .data import (
    Dataset,
    Normalizer,
    apply_normalizer,
    fit_normalizer,
    load_csv,
    relabel,
    save_csv,
    split_and_subsample,
    synth_blobs,
    synth_xor,
)
from .encoding import Centroid, CircuitSpec, EncodingParams, encode, gate_angles, init_params
from .gradients import Objective, grad_fd, grad_fd_objective, grad_param_shift, grad_reverse, value_and_grad
from .kernel import (
    DegenerateKernelError,
    KernelVector,
    boundary_penalty,
    centroid_kernel,
    co_loss,
    full_kernel_matrix,
    kao_loss,
    target_alignment,
)
from .metrics import EvalReport, accuracy, roc_auc
from .simulator import StateBatch, fidelity, init_zero_state
from .training import Model, TrainConfig, TrainHistory, class_means, predict, train

__version__ = "0.1.0"
