from .manager import ExperimentManager, run_experiment, verify_description

__all__ = ["ExperimentManager", "run_experiment", "verify_description"]
