"""Good-arm identification with anytime-valid e-process tests."""
from .engine import EngineConfig, RunTrace, derive_seed, run, run_batch
from .eprocess import Decision, EvidenceState, LambdaSchedule, lambda_minus, lambda_plus
from .labeling import StoppingKind, StoppingRule, judge, min_pulls_to_label
from .policies import PolicyKind, PolicyState, regret_anomaly_rate
from .rewards import ArmKind, ArmModel, BanditInstance, true_labels
from .theory import BoundReport, e_power_reference, kl_bernoulli, lambda_opt, minimax_bounds

__version__ = "0.1.0"

__all__ = [
    "ArmKind", "ArmModel", "BanditInstance", "BoundReport", "Decision", "EngineConfig",
    "EvidenceState", "LambdaSchedule", "PolicyKind", "PolicyState", "RunTrace",
    "StoppingKind", "StoppingRule", "derive_seed", "e_power_reference", "judge",
    "kl_bernoulli", "lambda_minus", "lambda_opt", "lambda_plus", "min_pulls_to_label",
    "minimax_bounds", "regret_anomaly_rate", "run", "run_batch", "true_labels",
]
