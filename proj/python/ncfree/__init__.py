"""Exact noncommutative polynomials over complex rationals, free difference quotients,
conjugate-variable checks and random-matrix spectra."""

import json

from ._ncfree import (
    ConjugateCandidate,
    DegreeBoundExceeded,
    DistributionSpec,
    DomainError,
    Error,
    GeneratorMismatch,
    NcPoly,
    NotPositive,
    ParseError,
    Scalar,
    TensorPoly,
    TraceFunctional,
    __version__,
    bimodule_mul,
    check_conjugate,
    check_duality,
    collapse,
    d,
    delta,
    dstar,
    extract_leading_coeff,
    flip,
    free_cumulants,
    relation_kernel,
    sharp,
    tensor_star,
)
from ._ncfree import spectrum as _spectrum


def spectrum(p, ensemble, bins=80, with_eigenvalues=False):
    """`ensemble` is a dict such as {"dim": 200, "samples": 2, "seed": 1, "generators": [{"type": "gue"}]}."""
    if not isinstance(ensemble, str):
        ensemble = json.dumps(ensemble)
    return _spectrum(p, ensemble, bins, with_eigenvalues)


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return DistributionSpec.from_json(fh.read())
