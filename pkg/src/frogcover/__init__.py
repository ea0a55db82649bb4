"""Frog model on finite d-ary trees: simulation engine, exact oracles and a check harness."""
from .substrate import (TreeShape, WalkKind, WalkState, build_tree, children, level, neighbors,
                        parent, spine, step, subtree, transition_probs)
from ._rng import RandomStream
from .engine import (BernoulliExtended, Deterministic, FrogInitSpec, InitDistribution, Poisson,
                     RunRecord, SimState, SpecialFrogs, StopRule, TagConfig, init, measure_I_k,
                     return_process, run, sample_I_k, step_model, tag_counters, write_trace)

__all__ = [
    "TreeShape", "WalkKind", "WalkState", "build_tree", "children", "level", "neighbors",
    "parent", "spine", "step", "subtree", "transition_probs", "RandomStream",
    "BernoulliExtended", "Deterministic", "FrogInitSpec", "InitDistribution", "Poisson",
    "RunRecord", "SimState", "SpecialFrogs", "StopRule", "TagConfig", "init", "measure_I_k",
    "return_process", "run", "sample_I_k", "step_model", "tag_counters", "write_trace",
]
