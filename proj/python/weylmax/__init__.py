"""Weyl sums, divergence sets and maximal-function ratios on the torus."""

from ._core import (
    Polynomial,
    WeylmaxError,
    __version__,
    bump,
    build_divergence_set,
    coupling_Q,
    decompose,
    evaluate_solution,
    fit_exponent,
    good_set,
    lattice_pair_count,
    measure,
    primes_in_band,
    ratio_experiment,
    selftest,
    sobolev_norm,
    verify_deligne,
    weyl_table,
)

__all__ = [
    "Polynomial",
    "WeylmaxError",
    "__version__",
    "bump",
    "build_divergence_set",
    "coupling_Q",
    "decompose",
    "evaluate_solution",
    "fit_exponent",
    "good_set",
    "lattice_pair_count",
    "measure",
    "primes_in_band",
    "ratio_experiment",
    "selftest",
    "sobolev_norm",
    "verify_deligne",
    "weyl_table",
]
