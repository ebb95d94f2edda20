"""Exact minimal log discrepancies and their computing divisors on surface germs."""
from .blowup import BlowupTower, DivisorOverGerm, enumerate_divisors, mld_bruteforce, resolve_pair
from .classifier import ClassificationReport, classify, verify_theorem
from .cluster import BranchCluster, Position, Site, local_intersection
from .discrepancy import (BoundaryBranch, DiscrepancyVector, GermModel, extraction_coefficients,
                          kollar_component_status, mld_on_resolution, pair_status, solve_discrepancies)
from .dual_graph import Vertex, WeightedDualGraph, classify_graph, intersection_matrix, structure

__version__ = "0.1.0"
