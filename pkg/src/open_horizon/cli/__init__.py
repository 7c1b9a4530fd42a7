"""
Command line front end.

Scenario parsing, task runners and deterministic output files.
"""

from .scenario import Scenario, parse_scenario
from .app import main, run_scenario
