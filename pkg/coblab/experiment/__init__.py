from coblab.experiment.config import ExperimentConfig
from coblab.experiment.run import Check, Experiment, ExperimentBuilder, render_report

__all__ = ["Check", "Experiment", "ExperimentBuilder", "ExperimentConfig", "render_report"]
