import numpy as np
import pytest
from heat_enclosure.dask_computations import chunk_slices
from heat_enclosure.managers import DaskManager
from heat_enclosure.managers.dask_manager import THREADS_VARIABLE, threads_from_environment


def test_chunk_slices():
    slices = chunk_slices(25, 10)
    assert slices == [slice(0, 10), slice(10, 20), slice(20, 25)]
    assert chunk_slices(0, 10) == []


def test_map_chunks_keeps_the_order():
    x = np.arange(1000.0)
    results = DaskManager(chunk_size=64).map_chunks(lambda a: a**2, x)
    assert len(results) == 16
    np.testing.assert_array_equal(np.concatenate(results), x**2)


def test_threads_give_identical_results():
    x = np.random.default_rng(0).normal(size=(500, 2))
    serial = DaskManager(chunk_size=50, num_workers=1)
    threaded = DaskManager(chunk_size=50, num_workers=4)
    assert not serial.is_active()
    assert threaded.is_active()

    def f(a, b):
        return np.sum(a * b, axis=1)

    np.testing.assert_array_equal(
        np.concatenate(serial.map_chunks(f, x, x)), np.concatenate(threaded.map_chunks(f, x, x))
    )
    assert threaded.compute([lambda k=k: k for k in range(5)]) == [0, 1, 2, 3, 4]


def test_threads_from_environment(monkeypatch):
    monkeypatch.delenv(THREADS_VARIABLE, raising=False)
    assert threads_from_environment() == 1
    monkeypatch.setenv(THREADS_VARIABLE, "3")
    assert threads_from_environment() == 3
    assert DaskManager().num_workers == 3
    monkeypatch.setenv(THREADS_VARIABLE, "many")
    assert threads_from_environment() == 1


def test_chunk_size_must_be_positive():
    with pytest.raises(ValueError):
        DaskManager(chunk_size=0)
