import pytest

from gauss_kloosterman.utils.errors import ConsistencyError
from gauss_kloosterman.utils.gaussint import ONE, GaussianInt
from gauss_kloosterman.utils.matrix import IDENTITY, Mat2, rotation, translation


def test_inverse():
    gamma = Mat2.of(GaussianInt(2, 1), 1, GaussianInt(1, 1), 1)
    assert gamma.det() == ONE
    assert gamma @ gamma.inverse() == IDENTITY
    assert gamma.inverse() @ gamma == IDENTITY


@pytest.mark.parametrize(
    "a, b, c, d", [(2, 0, 0, 1), (1, 1, 1, 1), (GaussianInt(0, 1), 0, 0, GaussianInt(0, 1))]
)
def test_inverse_needs_determinant_one(a, b, c, d):
    with pytest.raises(ConsistencyError) as err:
        Mat2.of(a, b, c, d).inverse()
    assert err.value.exit_code == 2


def test_in_gamma0():
    q0 = GaussianInt(1, 1)
    assert Mat2.of(1, 0, GaussianInt(1, 1), 1).in_gamma0(q0)
    assert not Mat2.of(1, 0, 1, 1).in_gamma0(q0)
    assert not Mat2.of(2, 0, 0, 1).in_gamma0(q0)


def test_translation_and_rotation():
    assert translation(2) @ translation(GaussianInt(0, 1)) == translation(GaussianInt(2, 1))
    assert rotation(GaussianInt(0, 1)) @ rotation(GaussianInt(0, 1)) == -IDENTITY
    infinity = (GaussianInt(1, 0), GaussianInt(0, 0))
    assert translation(1).act(infinity) == infinity
