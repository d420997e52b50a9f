"""Exact norms of step functions on [0, infinity), lattice growth criteria,
envelope constructions, and empirical space-comparison experiments.

Subpackages
-----------
phifn      expression trees for strictly increasing functions F with F(0)=0,
           their inverses, the reflection F~(t) = 1/F(1/t), growth verdicts,
           and envelope constructions
stepfn     finitely supported step functions and their rearrangements
quad       improper-integral evaluation with convergence verdicts
norms      Luxemburg, Orlicz-Lorentz, weak, Lorentz, L(p,q), multiplicative-
           scale, and chain-supremum norms
lattice    window-relative "almost convex/concave/linear/constant/vertical"
           verdicts and the shortest-path envelope construction
conditions integral criteria for slowly-varying weights and slowly-rising
           functions, with three-way consistency checks
testfam    generators for the step-function test families
compare    comparison reports combining lattice, integral, and ratio evidence
cli        command-line front end
"""

__version__ = "0.1.0"
