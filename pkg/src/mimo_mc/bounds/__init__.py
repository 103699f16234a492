"""Theoretical coherence and sample-count bounds."""
from .eigen import EigenBracket, wolkowicz_brackets
from .general import (AdmissibleSet, BandSet, DiagonalKernelWarning, GeneralBoundReport,
                      PointSet, PredicateSet, SupremumEstimate, general_beta, general_bounds,
                      kernel_surface, lemma2_set, locate_general_sup, phi_general,
                      separation_band)
from .kernel import (beta_sup_finite, beta_sup_uniform, dirichlet_sq, lemma2_xi,
                     min_separation_xi, wrap_g)
from .samples import SampleConstants, SampleThresholds, sample_requirement, ula_sample_estimate
from .ula import UlaBoundReport, ula_bounds, ula_bounds_for_scene

__all__ = [
    "AdmissibleSet", "BandSet", "DiagonalKernelWarning", "EigenBracket", "GeneralBoundReport",
    "PointSet", "PredicateSet", "SampleConstants", "SampleThresholds", "SupremumEstimate",
    "UlaBoundReport", "beta_sup_finite", "beta_sup_uniform", "dirichlet_sq", "general_beta",
    "general_bounds", "kernel_surface", "lemma2_set", "lemma2_xi", "locate_general_sup",
    "min_separation_xi", "phi_general", "sample_requirement", "separation_band",
    "ula_bounds", "ula_bounds_for_scene", "ula_sample_estimate", "wolkowicz_brackets", "wrap_g",
]
