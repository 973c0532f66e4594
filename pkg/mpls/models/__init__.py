# Domain types and API schemas

from mpls.models.maxplus import MaxPlusMatrix, Injection
from mpls.models.assignment import AssignmentResult, AssignmentReport, HungarianScaledMatrix
from mpls.models.scores import ScoreKind, ScoreVector
from mpls.models.sampling import SamplingPlan, SampleDraws, SampledSolution
from mpls.models.puiseux import InverseValuationFit, PuiseuxMatrix, PuiseuxSeries, SlopeFit
from mpls.models.experiment import ExperimentConfig, ExperimentRecord, Regime

__all__ = [
    "MaxPlusMatrix",
    "Injection",
    "AssignmentResult",
    "AssignmentReport",
    "HungarianScaledMatrix",
    "ScoreKind",
    "ScoreVector",
    "SamplingPlan",
    "SampleDraws",
    "SampledSolution",
    "PuiseuxSeries",
    "PuiseuxMatrix",
    "SlopeFit",
    "InverseValuationFit",
    "ExperimentConfig",
    "ExperimentRecord",
    "Regime",
]
