"""Smoke tests for the python bindings, checked against numpy/scipy."""

import numpy as np
import pytest
import splitconv

try:
    from scipy.signal import convolve2d
    HAVE_SCIPY = True
except ImportError:  # pragma: no cover
    HAVE_SCIPY = False

rng = np.random.default_rng(42)


def test_direct_conv_matches_scipy():
    if not HAVE_SCIPY:
        pytest.skip("scipy unavailable")
    x = rng.uniform(-1, 1, (16, 16))
    w = rng.uniform(-1, 1, (3, 3))
    ours = splitconv.direct_conv2d(x, w, pad="same", op="convolution")
    ref = convolve2d(x, w, mode="same", boundary="fill")
    assert np.max(np.abs(ours - ref)) < 1e-12


def test_engines_agree_with_direct():
    x = rng.uniform(-1, 1, (16, 16))
    w = rng.uniform(-1, 1, (5, 5))
    ref = splitconv.direct_conv2d(x, w, pad="valid", op="correlation")
    for fn in (splitconv.conv_full_fft, splitconv.conv_oaa):
        out, ops = fn(x, w, pad="valid", op="correlation")
        assert np.max(np.abs(out - ref)) < 1e-9
        assert ops.complex_mults > 0
    out, ops = splitconv.conv_split(x, w, s=8, pad="valid", op="correlation")
    assert np.max(np.abs(out - ref)) < 1e-9
    assert ops.mem_reads == 4 * (8 + 4) ** 2  # ceil(16/8)^2 * (S+2*halo)^2


def test_fft2_matches_numpy():
    x = rng.uniform(-1, 1, (8, 8)) + 1j * rng.uniform(-1, 1, (8, 8))
    out, ops = splitconv.fft2(x)
    assert np.max(np.abs(out - np.fft.fft2(x))) < 1e-10
    assert ops.complex_mults == 64 * 3
    back, _ = splitconv.fft2(out, inverse=True)
    assert np.max(np.abs(back - x)) < 1e-12


def test_split_plan_geometry():
    plan = splitconv.make_split_plan(224, 3, 16)
    assert plan.halo == 1
    assert plan.logical_patch == 18
    assert plan.fft_size == 32
    assert plan.grid_rows == 14


def test_layer_forward_multichannel():
    x = rng.uniform(-1, 1, (3, 12, 12))
    w = rng.uniform(-1, 1, (2, 3, 3, 3))
    ref, _, _, _ = splitconv.layer_forward(x, w, engine="direct")
    out, ops, fwd, inv = splitconv.layer_forward(x, w, engine="split", s=4)
    assert out.shape == (2, 12, 12)
    assert np.max(np.abs(out - ref)) < 1e-8
    assert inv == 9 * 2  # ceil(12/4)^2 patches x 2 output channels


def test_cost_model_values():
    assert splitconv.mul_split(16, 16, 1) == 4352.0
    assert splitconv.add_split(16, 16, 1) == 4096.0
    assert splitconv.mul_oaa(8, 1) == 64.0
    assert splitconv.add_oaa(224, 1) == 0.0


def test_planner():
    result = splitconv.choose_patch_size(224, 3, candidates=[4, 8, 16, 32])
    assert result["chosen_s"] == 8
    with pytest.raises(splitconv.InfeasiblePlanError):
        splitconv.choose_patch_size(224, 3, budget=10)


def test_vgg16_layers():
    layers = splitconv.vgg16_layers()
    assert len(layers) == 13
    assert all(l[5] == 3 for l in layers)
    assert layers[0][3] == 3 and layers[0][4] == 64
