from fractions import Fraction

import pytest

from equitrans import (
    Affine,
    DimensionError,
    Exp,
    Game,
    GameTransformation,
    PatRefutation,
    PatSpec,
    PowerOddInt,
    apply_transformation,
    depends_only_on_opponents,
    detect_pat,
    pat_to_transformation,
)
from equitrans.transforms import (
    NON_AFFINE,
    NON_POSITIVE_SLOPE,
    OWN_STRATEGY_DEPENDENT,
    SLOPE_MISMATCH,
    apply_pat,
    compose_pats,
    join_profile,
    split_profile,
)

G = Game.from_tensors([[[1, 2], [3, 4]], [[5, 6], [7, 8]]])


def test_profile_split_join():
    assert split_profile((1, 2, 0), 1) == (2, (1, 0))
    assert join_profile(2, (1, 0), 1) == (1, 2, 0)


def test_bimatrix_pat():
    p = PatSpec.bimatrix((2, 2), alpha=2, a=(1, 0))
    g = apply_pat(p, G)
    assert g.payoffs[0] == (3, 4, 7, 8)
    assert g.payoffs[1] == G.payoffs[1]


def test_pat_constants_depend_on_opponents_only():
    p = PatSpec((2, 3), (1, 1), ((0, 10, 20), (5, 6)))
    h = pat_to_transformation(p)
    assert h.map_at(0, (1, 2)) == Affine(1, 20)
    assert h.map_at(1, (1, 2)) == Affine(1, 6)
    assert detect_pat(h) == p


def test_pat_validation():
    with pytest.raises(ValueError):
        PatSpec((2, 2), (0, 1), ((0, 0), (0, 0)))
    with pytest.raises(DimensionError):
        PatSpec((2, 2), (1, 1), ((0,), (0, 0)))


def test_compose_pats():
    p = PatSpec.bimatrix((2, 2), 2, (1, 0), 3, (0, 1))
    q = PatSpec.bimatrix((2, 2), Fraction(1, 2), (0, 5), 1, (1, 1))
    assert apply_pat(compose_pats(p, q), G) == apply_pat(q, apply_pat(p, G))


def test_apply_exp_is_approximate():
    g = apply_transformation(GameTransformation.uniform((2, 2), Exp()), G)
    assert g.approximate
    assert abs(g.payoffs[0][0] - Fraction(27182818284590452, 10**16)) < Fraction(1, 10**15)


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        apply_transformation(GameTransformation.identity((2, 3)), G)


@pytest.mark.parametrize(
    "h, reason, player, profile",
    [
        (GameTransformation.uniform((2, 2), PowerOddInt(3)), NON_AFFINE, 0, (0, 0)),
        (GameTransformation.identity((2, 2)).replace(1, (1, 0), Affine(-1, 0)), NON_POSITIVE_SLOPE, 1, (1, 0)),
        (
            GameTransformation.from_function((2, 2), lambda i, p: Affine(2 if p[1 - i] == 0 else 3, 0)),
            SLOPE_MISMATCH,
            0,
            (0, 1),
        ),
        (GameTransformation.from_function((2, 2), lambda i, p: Affine(1, p[i])), OWN_STRATEGY_DEPENDENT, 0, (1, 0)),
    ],
)
def test_detect_pat_refutations(h, reason, player, profile):
    found = detect_pat(h)
    assert isinstance(found, PatRefutation)
    assert (found.reason, found.player, found.profile) == (reason, player, profile)


def test_refutation_message_is_one_based():
    found = detect_pat(GameTransformation.uniform((2, 2), PowerOddInt(3)))
    assert found.message() == "non-affine map at (1; 1,1): x^3"


def test_depends_only_on_opponents():
    h = GameTransformation.from_function((2, 2), lambda i, p: Affine(1, p[i]))
    assert not depends_only_on_opponents(h, 0)
    assert depends_only_on_opponents(GameTransformation.uniform((2, 2), PowerOddInt(3)), 0)
