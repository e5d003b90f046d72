"""rulemat: learns forward-chained logic programs from relational facts.

Small rule matrices are trained under differentiable constraint losses;
symbolic rules are then extracted from the matrix rows, precision-filtered,
and evaluated by forward chaining.
"""

__version__ = "0.1.0"
