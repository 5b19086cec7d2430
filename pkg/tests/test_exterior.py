import pytest

from polycomplex.core import GF, QQ
from polycomplex.core.maps import MapSpace, solve_commuting
from polycomplex.exterior import (RelationError, application_sign, direct_sum, find_isomorphism,
                                  free_module, free_rank_profile, hom_basis, quotient,
                                  simple_module, split_free, subsets, tensor, verify_iso)
from polycomplex.sampling import conjugate, random_module
from polycomplex.tricomplex import Tricomplex


def brute_hom_dim(M, N):
    sp = MapSpace(M.field, M.space, N.space, (0,) * M.arity)
    return len(solve_commuting(sp, [(M.diffs[r], N.diffs[r], 1) for r in range(M.arity)]))


def test_application_sign():
    assert application_sign((1, 2)) == 1
    assert application_sign((2, 1)) == -1
    assert application_sign((3, 1, 2)) == 1
    assert application_sign((1, 1)) == 0


def test_subsets_count():
    assert len(list(subsets(3))) == 8


def test_free_module_is_valid(field):
    L = free_module(Tricomplex, field, (0, 0, 0))
    assert L.total_dim == 8
    assert free_rank_profile(L) == {(0, 0, 0): 1}


def test_bad_relation_is_reported_with_degree():
    F = GF
    one = F.eye(1)
    dims = {(0, 0, 0): 1, (1, 0, 0): 1, (0, 1, 0): 1, (1, 1, 0): 1}
    with pytest.raises(RelationError) as exc:
        Tricomplex.build(F, dims, [{(0, 0, 0): one, (0, 1, 0): one}, {(0, 0, 0): one, (1, 0, 0): one}, {}])
    assert exc.value.degree == (0, 0, 0)


def test_tensor_unit_and_dims(rng):
    F = GF
    M = random_module(Tricomplex, F, rng, (-1,) * 3, (1,) * 3)
    k = simple_module(Tricomplex, F, (0, 0, 0))
    assert tensor(k, M) == M
    N = random_module(Tricomplex, F, rng, (-1,) * 3, (1,) * 3)
    T = tensor(M, N)
    assert T.total_dim == M.total_dim * N.total_dim


def test_quotient_of_free_by_top():
    F = QQ
    L = free_module(Tricomplex, F, (0, 0, 0))
    Qt, reps, proj = quotient(L, {(1, 1, 1): F.eye(1)})
    assert Qt.total_dim == 7


def test_split_free_counts(rng):
    F = GF
    for _ in range(20):
        M = random_module(Tricomplex, F, rng, (-1,) * 3, (1,) * 3)
        L = free_module(Tricomplex, F, (0, 1, -1))
        S = split_free(conjugate(direct_sum(M, L), rng))
        base = split_free(M)
        want = dict(base.counts)
        want[(0, 1, -1)] = want.get((0, 1, -1), 0) + 1
        assert S.counts == want
        assert S.residue.total_dim == M.total_dim + 8 - 8 * sum(want.values())
        assert free_rank_profile(S.residue) == {}


def test_hom_basis_matches_brute_force(rng):
    F = GF
    for _ in range(25):
        M = random_module(Tricomplex, F, rng, (-1,) * 3, (1,) * 3)
        N = random_module(Tricomplex, F, rng, (-1,) * 3, (1,) * 3)
        assert len(hom_basis(M, N)) == brute_hom_dim(M, N)


def test_find_isomorphism_on_conjugates(rng):
    F = GF
    for _ in range(15):
        M = random_module(Tricomplex, F, rng, (-1,) * 3, (1,) * 3)
        res = find_isomorphism(M, conjugate(M, rng))
        assert res.outcome == "true" and verify_iso(res)


def test_find_isomorphism_rejects_shift():
    F = GF
    L = free_module(Tricomplex, F, (0, 0, 0))
    res = find_isomorphism(L, L.shift((1, 0, 0)))
    assert res.outcome == "false"


def test_shift_and_permute_roundtrip(rng):
    M = random_module(Tricomplex, GF, rng, (-1,) * 3, (1,) * 3)
    assert M.shift((1, 2, 3)).shift((-1, -2, -3)) == M
    P = M.permute_axes((1, 2, 0)).permute_axes((2, 0, 1))
    assert P == M
