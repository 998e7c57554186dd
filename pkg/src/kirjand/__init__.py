"""Grading harness for Estonian exam essays (kirjandid).

Two scoring routes over the same nine-aspect rubric: zero-shot LLM
grading of every aspect, and feature-based regression for the five
language aspects.  Evaluation compares either route against two
independent human raters.
"""

__version__ = "0.1.0"
