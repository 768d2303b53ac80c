"""Signed/unsigned integer range analysis for a small CFG language."""

from .analysis import AnalysisResult, check_against_oracle, report, value_analysis
from .syntax import format_program, parse

__all__ = ["AnalysisResult", "check_against_oracle", "format_program", "parse",
           "report", "value_analysis"]
