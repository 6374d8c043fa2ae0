import numpy as np
import pytest

from volaug import (
    ClipVolume,
    VolaugError,
    freeze,
    freeze_multi,
    pseudo_label,
    rng_from_seed,
    sample_freeze_params,
)

from reference import ref_freeze


def make_clip(n, h=2, w=3, c=3, seed=0):
    rng = np.random.default_rng(seed)
    frames = rng.integers(0, 256, size=(n, h, w, c), dtype=np.uint8)
    return ClipVolume(frames=frames, dtype="u8", id=f"clip{n}")


def test_freeze_hand_example():
    clip = make_clip(6)
    labels = pseudo_label(6, 1, 3)
    out, out_labels, rec = freeze(clip, labels, r=2, m=3)
    f = clip.frames
    expect = np.stack([f[0], f[1], f[2], f[2], f[2], f[3]])
    assert np.array_equal(out.frames, expect)
    mass = out_labels.row_mass()
    assert mass.tolist() == [1, 1, 0, 0, 0, 1]
    assert rec.params["segments"] == [[2, 3]]


def test_freeze_whole_clip():
    clip = make_clip(4)
    labels = pseudo_label(4, 0, 2)
    out, out_labels, _ = freeze(clip, labels, r=0, m=4)
    assert np.array_equal(out.frames, np.repeat(clip.frames[:1], 4, axis=0))
    assert out_labels.row_mass().tolist() == [0, 0, 0, 0]


def test_freeze_matches_reference_exhaustive():
    for n in range(2, 9):
        clip = make_clip(n, seed=n)
        labels = pseudo_label(n, 0, 4)
        for r in range(0, n - 1):
            for m in range(2, n - r + 1):
                out, out_labels, _ = freeze(clip, labels, r, m)
                ref_f, ref_w = ref_freeze(clip.frames, labels.weights, r, m)
                assert out.length == n
                assert np.array_equal(out.frames, ref_f)
                assert np.array_equal(out_labels.weights, ref_w)
                # frozen run is pixel-identical to frame r, zero mass
                mass = out_labels.row_mass()
                assert (mass[r : r + m] == 0).all()
                assert (np.delete(mass, slice(r, r + m)) == 1).all()
                for t in range(r, r + m):
                    assert np.array_equal(out.frames[t], clip.frames[r])


def test_freeze_rejects_out_of_range():
    clip = make_clip(6)
    labels = pseudo_label(6, 0, 2)
    for r, m in [(-1, 2), (5, 2), (0, 1), (0, 7), (4, 3)]:
        with pytest.raises(VolaugError):
            freeze(clip, labels, r, m)


def test_freeze_multi_single_segment_equals_freeze():
    clip = make_clip(16)
    labels = pseudo_label(16, 2, 5)
    a = freeze(clip, labels, 7, 2)
    b = freeze_multi(clip, labels, [(7, 2)])
    assert np.array_equal(a[0].frames, b[0].frames)
    assert np.array_equal(a[1].weights, b[1].weights)


def test_freeze_multi_two_disjoint_segments():
    clip = make_clip(16)
    labels = pseudo_label(16, 0, 3)
    out, out_labels, rec = freeze_multi(clip, labels, [(2, 3), (10, 2)])
    assert out.length == 16
    assert int((out_labels.row_mass() == 0).sum()) == 5
    assert rec.params["segments"] == [[2, 3], [10, 2]]


def test_freeze_multi_same_start_matches_wider_freeze_in_label_space():
    clip = make_clip(12)
    labels = pseudo_label(12, 1, 4)
    twice, twice_labels, _ = freeze_multi(clip, labels, [(4, 2), (4, 2)])
    once, once_labels, _ = freeze(clip, labels, 4, 3)
    assert np.array_equal(twice_labels.weights, once_labels.weights)
    assert (twice_labels.row_mass()[4:7] == 0).all()


def test_sample_freeze_params_domain_n3():
    seen = set()
    for seed in range(200):
        seen.add(sample_freeze_params(3, rng_from_seed(seed)))
    assert seen == {(0, 2), (0, 3), (1, 2)}


def test_sample_freeze_params_deterministic():
    assert sample_freeze_params(16, rng_from_seed(5)) == sample_freeze_params(
        16, rng_from_seed(5)
    )


def test_sample_freeze_params_uniform_r():
    from scipy import stats

    rng = rng_from_seed(1234)
    n = 16
    draws = np.asarray([sample_freeze_params(n, rng)[0] for _ in range(100_000)])
    counts = np.bincount(draws, minlength=n - 1)
    assert counts.size == n - 1
    _, p = stats.chisquare(counts)
    assert p > 1e-4
    # and m stays within its r-dependent range
    rng = rng_from_seed(99)
    for _ in range(1000):
        r, m = sample_freeze_params(n, rng)
        assert 0 <= r <= n - 2 and 2 <= m <= n - r


def test_sample_freeze_params_too_short():
    with pytest.raises(VolaugError):
        sample_freeze_params(2, rng_from_seed(0))
