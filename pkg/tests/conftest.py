"""Shared fixtures.

Session scope for objects that are immutable once built (mappings, plans,
finished traces); per-test tmp dirs come from pytest's tmp_path.
"""
import pytest

from fixedlab import (
    Domain,
    GALLERY_AFFINE_MATRIX,
    GALLERY_AFFINE_SHIFT,
    GALLERY_BOX,
    IterationConfig,
    SamplePlan,
    affine_map,
    builtin_gallery,
    example1_map,
    krasnoselskii_run,
)


@pytest.fixture(scope="session")
def example1():
    return example1_map()


@pytest.fixture(scope="session")
def affine():
    return affine_map(GALLERY_BOX, GALLERY_AFFINE_MATRIX, GALLERY_AFFINE_SHIFT,
                      label="affine_contraction")


@pytest.fixture(scope="session")
def gallery():
    return builtin_gallery()


@pytest.fixture(scope="session")
def grid9():
    return SamplePlan.grid(9)


@pytest.fixture(scope="session")
def grid17():
    return SamplePlan.grid(17)


@pytest.fixture(scope="session")
def example1_trace(example1):
    # lam=1/2 from x0=3 halves the iterate each step: x_n = 3 * 2**-n
    cfg = IterationConfig(lam=0.5, max_iters=40, residual_tol=1e-12)
    return krasnoselskii_run(example1, [3.0], cfg)
