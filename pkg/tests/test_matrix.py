import numpy as np
import pytest

from discbound.errors import DomainError
from discbound.matrix import MatrixSource, entries, entry, prefix

stats = pytest.importorskip("scipy.stats")


def test_deterministic():
    assert entry(MatrixSource(7), 3, 5) == entry(MatrixSource(7), 3, 5)


def test_prefix_property():
    src = MatrixSource(11)
    small = prefix(src, 4, 3).points.points
    big = prefix(src, 8, 5).points.points
    assert np.array_equal(small, big[:4, :3])
    assert prefix(src, 1, 1).points.points[0, 0] == entry(src, 1, 1)


@pytest.mark.parametrize("seed", [0, 1, 2**63 + 5, -3])
def test_prefix_restriction_quantified(seed):
    src = MatrixSource(seed)
    full = prefix(src, 40, 9).points.points
    for N in (1, 7, 40):
        for s in (1, 4, 9):
            assert np.array_equal(prefix(src, N, s).points.points, full[:N, :s])


def test_range():
    x = entries(MatrixSource(3), np.arange(1, 200_001)[:, None], np.arange(1, 6)[None, :])
    assert x.min() >= 0.0 and x.max() < 1.0


def test_chi_square_uniformity():
    x = entries(MatrixSource(12345), np.arange(1, 100_001)[:, None], np.arange(1, 11)[None, :]).ravel()
    counts = np.bincount((x * 100).astype(int), minlength=100)
    assert stats.chisquare(counts).pvalue > 0.001


def test_no_cross_correlation():
    m = prefix(MatrixSource(99), 20_000, 8).points.points
    corr = np.corrcoef(m, rowvar=False)
    off = corr[~np.eye(8, dtype=bool)]
    # 4.5 standard errors of a null correlation
    assert np.max(np.abs(off)) < 4.5 / np.sqrt(20_000)
    sv = np.linalg.svd(m - 0.5, compute_uv=False)
    assert sv[0] / sv[-1] < 1.2


def test_seeds_differ():
    for a in range(100):
        p = prefix(MatrixSource(a), 4, 2).points.points
        q = prefix(MatrixSource(a + 1000), 4, 2).points.points
        assert not np.array_equal(p, q)


def test_guards():
    with pytest.raises(DomainError):
        entry(MatrixSource(0), 0, 1)
    with pytest.raises(DomainError):
        prefix(MatrixSource(0), 10**5, 10**4)
    with pytest.raises(DomainError):
        prefix(MatrixSource(0), 0, 3)
