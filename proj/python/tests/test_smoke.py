from fractions import Fraction

import pytest

import ncfree as nf


def test_arithmetic_round_trip():
    p = nf.NcPoly("1 * Z 1 2 + 1 * Z 2 1", 2)
    assert str(p) == "1 * Z 1 2 + 1 * Z 2 1"
    assert p.is_self_adjoint()
    q = nf.NcPoly("1/2+3 i * Z 1", 2)
    assert q.star() == nf.NcPoly("1/2-3 i * Z 1", 2)
    assert (p * q).degree == 3
    assert (2 * p).coeff([1, 2]) == 2
    assert nf.NcPoly(str(p * q - q), 2) == p * q - q
    with pytest.raises(nf.GeneratorMismatch):
        nf.NcPoly("Z 3", 2)
    with pytest.raises(nf.ParseError):
        nf.NcPoly("2 * * Z 1", 2)


def test_difference_quotient():
    n = 2
    z1 = nf.NcPoly.generator(n, 1)
    assert nf.d(2, nf.NcPoly("Z 1 2 1", n)) == nf.TensorPoly.simple(z1, z1)
    p = nf.NcPoly("Z 1 1 2 + 3 * Z 2", n)
    assert nf.flip(nf.tensor_star(nf.d(1, p))) == nf.d(1, p.star())


def test_trace_and_cumulants():
    t = nf.TraceFunctional(nf.DistributionSpec.semicircular([1, "1/2"]))
    assert t.moment([1, 1, 1, 1]) == 2
    assert t.moment([2, 2]).real == Fraction(1, 2)
    assert t(nf.NcPoly("Z 1 2 1 2", 2)) == 0
    assert nf.free_cumulants([0, 1, 0, 2]) == [0, 1, 0, 0]
    with pytest.raises(nf.DegreeBoundExceeded):
        t.moment([1] * 13)


def test_conjugate_check():
    spec = nf.DistributionSpec.semicircular([1, 1])
    report = nf.check_conjugate(nf.ConjugateCandidate.semicircular(spec), 8)
    assert report["passed"] and report["failures"] == []
    t = nf.TraceFunctional(spec)
    wrong = nf.ConjugateCandidate([nf.NcPoly("2 * Z 1", 2), nf.NcPoly("Z 2", 2)], t)
    bad = nf.check_conjugate(wrong, 3)
    assert not bad["passed"]
    assert bad["failures"][0]["word"] == "Z 1"


def test_reduction_and_relations():
    t = nf.TraceFunctional(nf.DistributionSpec.semicircular([1, 1]))
    p = nf.NcPoly("3 * Z 1 2 + Z 1", 2)
    assert nf.extract_leading_coeff(t, p, [1, 2]) == 3
    assert nf.relation_kernel(t, 3) == []
    bern = nf.TraceFunctional(nf.DistributionSpec.free_family([[0, 1, 0, 1]], 4))
    kernel = nf.relation_kernel(bern, 2)
    assert kernel == [nf.NcPoly("Z 1 1 - 1", 1)]


def test_spectrum_is_reproducible():
    ens = {"dim": 40, "samples": 2, "seed": 3, "generators": [{"type": "gue"}, {"type": "gue"}]}
    p = nf.NcPoly("Z 1 2 + Z 2 1", 2)
    a = nf.spectrum(p, ens, with_eigenvalues=True)
    b = nf.spectrum(p, ens, with_eigenvalues=True)
    assert a["eigenvalues"] == b["eigenvalues"]
    assert a["eigenvalue_count"] == 80
    assert sum(h["count"] for h in a["histogram"]) == 80
