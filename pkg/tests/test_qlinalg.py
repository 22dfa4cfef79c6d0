from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levelseries.qlinalg import (
    GF,
    QQ,
    Field,
    LinalgError,
    Matrix,
    Subspace,
    complement_and_graph,
    kernel,
    projective_points,
    random_subspace,
    rank_kernel_image,
    sum_intersect,
)

from oracles import image_set, kernel_set, log_p, span_set, subspace_sets

F2, F3 = GF(2), GF(3)


def sub(F, n, *vecs):
    return Subspace.span(F, n, vecs)


# fields


def test_field_rejects_composite():
    with pytest.raises(LinalgError):
        Field(4)
    with pytest.raises(LinalgError):
        Field(1)


def test_field_coercions():
    assert F3(Fraction(1, 2)) == 2
    assert F3("1/2") == 2
    assert F3(-1) == 2
    assert QQ("3/6") == Fraction(1, 2)
    with pytest.raises(LinalgError):
        F3(Fraction(1, 3))


# rank, kernel, image


def test_identity_over_f2():
    r, K, I = rank_kernel_image(Matrix.identity(F2, 3))
    assert r == 3 and K.dim == 0 and I == Subspace.full(F2, 3)


def test_zero_over_q():
    r, K, I = rank_kernel_image(Matrix.zeros(QQ, 2, 2))
    assert r == 0 and K == Subspace.full(QQ, 2) and I.dim == 0


def test_all_ones_2x2_over_f2():
    r, K, _ = rank_kernel_image(Matrix.from_rows(F2, [[1, 1], [1, 1]]))
    assert r == 1
    assert K == sub(F2, 2, (1, 1))


def test_rational_kernel():
    M = Matrix.from_rows(QQ, [[1, 2, 3], [2, 4, 6]])
    K = kernel(M)
    assert K.dim == 2
    assert all(v == (0, 0) for v in (M.apply(b) for b in K.basis))


def matrices(p, max_n=4):
    return st.integers(1, max_n).flatmap(
        lambda r: st.integers(1, max_n).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]).flatmap(lambda p: st.tuples(st.just(p), matrices(p))))
def test_rank_kernel_image_matches_enumeration(data):
    p, rows = data
    F = GF(p)
    M = Matrix.from_rows(F, rows)
    r, K, I = rank_kernel_image(M)
    assert r + K.dim == M.cols
    assert log_p(len(kernel_set(rows, p, M.cols)), p) == K.dim
    assert log_p(len(image_set(rows, p, M.cols)), p) == r == I.dim
    assert span_set(K.basis, p, M.cols) == kernel_set(rows, p, M.cols)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-5, 5), min_size=c, max_size=c), min_size=1, max_size=6)
    )
)
def test_rank_nullity_over_q(rows):
    M = Matrix.from_rows(QQ, rows)
    r, K, I = rank_kernel_image(M)
    assert r + K.dim == M.cols
    for v in K.basis:
        assert not any(M.apply(v))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 6), st.data())
def test_rank_nullity_over_fp_large(p, n, data):
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=1, max_size=6))
    r, K, _ = rank_kernel_image(Matrix.from_rows(GF(p), rows))
    assert r + K.dim == n


# canonical form


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 5), st.data())
def test_canonical_form_is_basis_independent(p, n, data):
    F = GF(p)
    vecs = data.draw(st.lists(st.tuples(*[st.integers(0, p - 1)] * n), max_size=4))
    S = Subspace.span(F, n, vecs)
    # a random invertible change of basis
    mix = data.draw(st.lists(st.integers(0, p - 1), min_size=S.dim * S.dim, max_size=S.dim * S.dim))
    new = [S.combine(mix[k * S.dim : (k + 1) * S.dim]) for k in range(S.dim)]
    T = Subspace.span(F, n, new)
    if T.dim == S.dim:
        assert T == S and hash(T) == hash(S)
    assert span_set(S.basis, p, n) == span_set(vecs, p, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_canonical_form_over_q(n, data):
    vecs = data.draw(st.lists(st.tuples(*[st.integers(-4, 4)] * n), min_size=1, max_size=3))
    S = Subspace.span(QQ, n, vecs)
    scaled = [tuple(Fraction(k + 2, 3) * x for x in v) for k, v in enumerate(vecs)]
    assert Subspace.span(QQ, n, scaled) == S


# sums and intersections


def test_sum_intersect_idempotent():
    U = sub(F3, 3, (1, 2, 0), (0, 1, 1))
    s, i = sum_intersect(U, U)
    assert s == U and i == U


def test_complementary_lines():
    s, i = sum_intersect(sub(QQ, 2, (1, 0)), sub(QQ, 2, (1, 1)))
    assert s == Subspace.full(QQ, 2) and i.dim == 0


def test_intersection_by_point_enumeration():
    U = sub(F2, 3, (1, 0, 1))
    W = sub(F2, 3, (1, 0, 0), (0, 0, 1))
    _, meet = sum_intersect(U, W)
    assert meet == sub(F2, 3, (1, 0, 1))
    assert span_set(meet.basis, 2, 3) == span_set(U.basis, 2, 3) & span_set(W.basis, 2, 3)


def test_mismatched_ambient_raises():
    with pytest.raises(LinalgError):
        sum_intersect(Subspace.full(F2, 2), Subspace.full(F2, 3))
    with pytest.raises(LinalgError):
        sum_intersect(Subspace.full(F2, 2), Subspace.full(F3, 2))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 4), st.data())
def test_modular_law_and_enumeration(p, n, data):
    F = GF(p)
    vec = st.tuples(*[st.integers(0, p - 1)] * n)
    U = Subspace.span(F, n, data.draw(st.lists(vec, max_size=3)))
    W = Subspace.span(F, n, data.draw(st.lists(vec, max_size=3)))
    s, i = sum_intersect(U, W)
    assert s.dim + i.dim == U.dim + W.dim
    assert span_set(i.basis, p, n) == span_set(U.basis, p, n) & span_set(W.basis, p, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_modular_law_over_q(n, data):
    vec = st.tuples(*[st.integers(-3, 3)] * n)
    U = Subspace.span(QQ, n, data.draw(st.lists(vec, max_size=3)))
    W = Subspace.span(QQ, n, data.draw(st.lists(vec, max_size=3)))
    s, i = sum_intersect(U, W)
    assert s.dim + i.dim == U.dim + W.dim
    assert i <= U and i <= W


# complements and graphs


def test_graph_trivial_when_nothing_to_complement():
    U = Subspace.full(F2, 2)
    ca, cb, graph = complement_and_graph(U, U, U, U)
    assert ca.dim == cb.dim == graph.dim == 0


def test_graph_of_identity_on_a_line():
    Z, F1 = Subspace.zero(QQ, 1), Subspace.full(QQ, 1)
    _, _, graph = complement_and_graph(Z, F1, Z, F1)
    assert graph == sub(QQ, 2, (1, 1))


def test_graph_pivot_rule():
    full = Subspace.full(F2, 2)
    ca, cb, graph = complement_and_graph(sub(F2, 2, (1, 0)), full, sub(F2, 2, (0, 1)), full)
    assert ca == sub(F2, 2, (0, 1))
    assert cb == sub(F2, 2, (1, 0))
    assert graph == sub(F2, 4, (0, 1, 1, 0))


def test_graph_dimension_mismatch():
    full = Subspace.full(F2, 2)
    with pytest.raises(LinalgError):
        complement_and_graph(Subspace.zero(F2, 2), full, full, full)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 4), st.data())
def test_complement_and_graph_properties(p, n, data):
    F = GF(p)
    vec = st.tuples(*[st.integers(0, p - 1)] * n)
    U = Subspace.span(F, n, data.draw(st.lists(vec, max_size=4)))
    A = Subspace.span(F, n, [U.combine(c) for c in data.draw(st.lists(st.tuples(*[st.integers(0, p - 1)] * U.dim), max_size=3))]) if U.dim else U
    W = Subspace.full(F, n)
    k = W.dim - (U.dim - A.dim)
    B = random_subspace(F, n, k, data.draw(st.integers(0, 99)))
    ca, cb, graph = complement_and_graph(A, U, B, W)
    s, meet = sum_intersect(A, ca)
    assert s == U and meet.dim == 0
    s, meet = sum_intersect(B, cb)
    assert s == W and meet.dim == 0
    assert graph.dim == ca.dim == cb.dim
    # both projections of the graph are isomorphisms onto the complements
    first = Subspace.span(F, n, [v[:n] for v in graph.basis])
    second = Subspace.span(F, n, [v[n:] for v in graph.basis])
    assert first == ca and second == cb


# random subspaces


def test_random_subspace_extremes():
    for seed in range(5):
        assert random_subspace(F3, 3, 0, seed).dim == 0
        assert random_subspace(F3, 3, 3, seed) == Subspace.full(F3, 3)


def test_random_subspace_reaches_every_line_of_f2_squared():
    got = {random_subspace(F2, 2, 1, seed) for seed in range(8)}
    lines = subspace_sets(2, 2, 1)
    assert len(lines) == 3
    assert {frozenset(span_set(S.basis, 2, 2)) for S in got} == set(lines)


def test_random_subspace_deterministic_and_errors():
    assert random_subspace(F3, 4, 2, 7) == random_subspace(F3, 4, 2, 7)
    with pytest.raises(LinalgError):
        random_subspace(F2, 2, 3, 0)
    with pytest.raises(LinalgError):
        random_subspace(QQ, 2, 1, 0)


def test_projective_points_count():
    for p in (2, 3):
        for k in range(4):
            S = random_subspace(GF(p), 4, k, 1)
            pts = list(projective_points(S))
            assert len(pts) == (p**k - 1) // (p - 1)
            assert all(S.contains(v) and any(v) for v in pts)
            lines = {span_set([v], p, 4) for v in pts}
            assert len(lines) == len(pts)


def test_preimage_and_matrix_product():
    M = Matrix.from_rows(F3, [[1, 0, 2], [0, 1, 1]])
    T = sub(F3, 2, (1, 1))
    pre = T.preimage(M)
    assert all(T.contains(M.apply(v)) for v in pre.basis)
    assert pre.dim == 2
    I = Matrix.identity(F3, 3)
    assert M @ I == M
