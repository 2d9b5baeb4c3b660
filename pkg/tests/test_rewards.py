import numpy as np
import pytest

from gai_lab.rewards import ArmKind, ArmModel, BanditInstance, UniformStream, sample, true_labels


def test_degenerate_bernoulli():
    rng = np.random.default_rng(0)
    assert {sample(ArmModel("bernoulli", 0.0), rng) for _ in range(200)} == {0.0}
    assert {sample(ArmModel("bernoulli", 1.0), rng) for _ in range(200)} == {1.0}


def test_mixture_range_enforced_at_construction():
    ArmModel(ArmKind.MIXTURE, 0.25)
    ArmModel(ArmKind.MIXTURE, 0.75)
    with pytest.raises(ValueError):
        ArmModel(ArmKind.MIXTURE, 0.2)
    with pytest.raises(ValueError):
        ArmModel(ArmKind.MIXTURE, 0.8)
    with pytest.raises(ValueError):
        ArmModel(ArmKind.BERNOULLI, 1.2)


def _draws(model, n, seed):
    stream = UniformStream(seed)
    return np.array([model.sample(stream) for _ in range(n)])


def test_mixture_mean_monte_carlo():
    # per-draw variance <= 0.25, so the 3-sigma band at 10^6 draws is 0.0015
    x = _draws(ArmModel("mixture", 0.6), 1_000_000, seed=11)
    assert abs(x.mean() - 0.6) <= 0.002
    assert x.min() >= 0.0 and x.max() <= 1.0


@pytest.mark.parametrize("kind", ["bernoulli", "mixture"])
@pytest.mark.parametrize("mean", [0.25, 0.4, 0.5, 0.537, 0.6, 0.75])
def test_mean_correctness_grid(kind, mean):
    x = _draws(ArmModel(kind, mean), 1_000_000, seed=int(mean * 1000) + (kind == "mixture"))
    assert np.all((0.0 <= x) & (x <= 1.0))
    assert abs(x.mean() - mean) <= 3 * 0.5 / 1000


def test_mixture_uses_two_uniforms_per_draw():
    model = ArmModel("mixture", 0.5)
    a, b = UniformStream(5), np.random.default_rng(5)
    ref = b.random(4096)
    xs = [model.sample(a) for _ in range(10)]
    for i, x in enumerate(xs):
        coin, u = ref[2 * i], ref[2 * i + 1]
        expected = (1.0 if u < model.inner_p else 0.0) if coin < 0.5 else u
        assert x == expected


def test_same_stream_state_same_draws():
    model = ArmModel("mixture", 0.45)
    assert list(_draws(model, 5000, 3)) == list(_draws(model, 5000, 3))
    assert list(_draws(model, 50, 3)) != list(_draws(model, 50, 4))


def test_uniform_stream_matches_generator_across_blocks():
    s = UniformStream(9, block=7)
    ref = np.random.default_rng(9)
    expected = np.concatenate([ref.random(7) for _ in range(3)])
    assert [s.random() for _ in range(21)] == expected.tolist()


@pytest.mark.parametrize(
    "means, good, bad",
    [
        ((0.6, 0.55, 0.45, 0.4), {0, 1}, {2, 3}),
        ((0.36, 0.34, 0.469, 0.465, 0.537), {4}, {0, 1, 2, 3}),
        ((0.5, 0.5, 0.5), set(), {0, 1, 2}),
    ],
)
def test_true_labels(means, good, bad):
    g, b = true_labels(BanditInstance.from_means(means, 0.5))
    assert g == good and b == bad
    assert not g & b and g | b == set(range(len(means)))


def test_instance_validation():
    with pytest.raises(ValueError):
        BanditInstance.from_means([], 0.5)
    with pytest.raises(ValueError):
        BanditInstance.from_means([0.5], 1.0)
    with pytest.raises(ValueError):
        BanditInstance.from_means([0.5], 0.0)
