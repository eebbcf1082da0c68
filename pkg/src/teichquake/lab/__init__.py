from .experiments import EXPERIMENTS, ExperimentConfig, ExperimentResult, load_config, run

__all__ = ["EXPERIMENTS", "ExperimentConfig", "ExperimentResult", "load_config", "run"]
