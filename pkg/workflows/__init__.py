"""
Workflows package - Verification pipeline step functions
"""
from .verification_workflow import config_echo, executor_step, planner_step, run_pipeline, verifier_step

__all__ = ["planner_step", "executor_step", "verifier_step", "run_pipeline", "config_echo"]
