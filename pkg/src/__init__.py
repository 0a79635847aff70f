"""
RMRPA (Reed-Muller Recursive Projection-Aggregation) Package

Reed-Muller codes, their projection-aggregation decoders and a Monte-Carlo
evaluation harness for binary-input memoryless channels.
"""

__version__ = "1.0.0"
__author__ = "RMRPA Development Team"
__email__ = "rmrpa@example.com"
__description__ = "Recursive projection-aggregation decoding of Reed-Muller codes"
