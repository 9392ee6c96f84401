from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadlab.series import (
    INF,
    BadSqrtBase,
    BiSeries,
    BlockContext,
    NonInvertible,
    Series,
    assemble_gf,
    base_series,
    block_series,
    delta_extract,
    delta_extract_bivariate,
    fbar_loop_bivariate,
)


# ----------------------------------------------------------------------
# Independent oracle: brute enumeration of labeled plane trees
# ----------------------------------------------------------------------

def all_plane_trees(n):
    """All rooted plane trees with n edges, as nested child tuples."""
    if n == 0:
        return [()]
    out = []
    for k in range(n):  # edges in the first child's subtree
        for first in all_plane_trees(k):
            for rest in all_plane_trees(n - 1 - k):
                out.append((first,) + rest)
    return out


def count_labeled(tree, root_label, minimum):
    """Number of ways to label the subtree below a root with fixed label so
    that adjacent labels differ by at most one and all labels >= minimum."""
    total = 1
    for child in tree:
        s = 0
        for d in (-1, 0, 1):
            lab = root_label + d
            if lab >= minimum:
                s += count_labeled(child, lab, minimum)
        total *= s
    return total


def brute_R_coefficient(n):
    """[g^n] of the unconstrained labeled-tree series (labels in Z)."""
    return sum(count_labeled(t, 0, -10 ** 9) for t in all_plane_trees(n))


def brute_R_ell_coefficient(ell, n):
    """[g^n] of the fan series with root label ell and labels >= 1."""
    if ell <= 0:
        return 0
    return sum(count_labeled(t, ell, 1) for t in all_plane_trees(n))


# ----------------------------------------------------------------------
# Series arithmetic
# ----------------------------------------------------------------------

def test_sqrt_one_minus_12g():
    g = Series.gen(5)
    s = (1 - 12 * g).sqrt()
    assert s.coeffs == [Fraction(c) for c in (1, -6, -18, -108, -810, -6804)]
    assert s * s == (1 - 12 * g)


def test_sqrt_rejects_non_square():
    with pytest.raises(BadSqrtBase):
        Series([2, 1], 3).sqrt()


small_fracs = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(small_fracs, min_size=5, max_size=5),
    st.lists(small_fracs, min_size=5, max_size=5),
)
def test_mul_div_roundtrip(acs, bcs):
    a = Series(acs, 4)
    b = Series(bcs, 4)
    if b.is_zero():
        return
    v = b.valuation()
    prod = a * b
    back = prod / b
    assert back == a.truncate(4 - v)


def test_division_valuation_rules():
    g = Series.gen(6)
    num = g * g * (1 + g)
    den = g * g * (1 - g)
    q = num / den
    assert q.order == 4
    assert q.coeffs[:3] == [Fraction(1), Fraction(2), Fraction(2)]
    with pytest.raises(NonInvertible):
        _ = (1 + g) / g


def test_compose_at_zero_gives_constant():
    f = Series([7, 3, 5], 4)
    z = Series.zero(4)
    assert f.compose(z) == Series.const(7, 4)


def test_compose_basic():
    # (1/(1-u)) o (g + g^2) = 1 + (g+g^2) + (g+g^2)^2 + ...
    n = 5
    u = Series.gen(n)
    f = (1 - u).inverse()
    inner = u + u * u
    lhs = f.compose(inner)
    rhs = Series.one(n)
    p = Series.one(n)
    for _ in range(n):
        p = p * inner
        rhs = rhs + p
    assert lhs == rhs


# ----------------------------------------------------------------------
# Base series
# ----------------------------------------------------------------------

def test_R_low_coefficients_against_brute_enumeration():
    R, _ = base_series(5)
    for n in range(5 + 1):
        assert R[n] == brute_R_coefficient(n)
    assert R.coeffs[:4] == [1, 3, 18, 135]


def test_R_at_zero_and_x_at_zero():
    R, x = base_series(8)
    assert R[0] == 1
    assert x[0] == 0


def test_R_ell_closed_vs_brute_enumeration():
    ctx = BlockContext(4)
    for ell in range(0, 5):
        r = ctx.r_closed(ell)
        for n in range(4 + 1):
            assert r[n] == brute_R_ell_coefficient(ell, n), (ell, n)


def test_R_ell_closed_vs_recursion():
    ctx = BlockContext(8)
    rec = ctx.r_recursion(6)
    for ell in range(7):
        assert rec[ell] == ctx.r_closed(ell), ell


def test_qnum_basics():
    ctx = BlockContext(6)
    assert ctx.qnum(0).is_zero()
    assert ctx.qnum(1) == Series.one(6)
    # [2]_x = 1 + x
    assert ctx.qnum(2) == Series.one(6) + ctx.x


# ----------------------------------------------------------------------
# Blocks: dual routes
# ----------------------------------------------------------------------

def test_block_routes_small_box():
    ctx = BlockContext(8)
    for a in range(0, 4):
        for b in range(0, 4):
            block_series("X", (a, b), 8, ctx=ctx)
    for ell in range(0, 4):
        for a in range(0, 4):
            for b in range(0, 4):
                block_series("Xt", (ell, a, b), 8, ctx=ctx)
    for a in range(1, 4):
        for b in range(1, 4):
            for c in range(1, 4):
                block_series("Y", (a, b, c), 8, ctx=ctx)
    for ell in range(0, 6):
        block_series("R", (ell,), 8, ctx=ctx)


def test_x_tilde_zero_is_one():
    ctx = BlockContext(6)
    for a in range(4):
        for b in range(4):
            assert ctx.Xt(0, a, b) == Series.one(6)


def test_blocks_are_one_plus_order_g():
    ctx = BlockContext(6)
    for s in range(1, 4):
        for t in range(1, 4):
            assert ctx.X(s, t)[0] == 1
            for u in range(1, 4):
                assert ctx.Y(s, t, u)[0] == 1


def test_infinite_parameters():
    ctx = BlockContext(6)
    # X_{inf,u} closed limit [3][u+1]/([1][u+3]) equals the transfer sum with R fans
    for u in range(0, 4):
        closed = ctx.qnum(3) * ctx.qnum(u + 1) / (ctx.qnum(1) * ctx.qnum(u + 3))
        assert ctx.x_comb(INF, u) == closed


# ----------------------------------------------------------------------
# Assembled families
# ----------------------------------------------------------------------

def test_h_loop_product_matches_closed_display():
    ctx = BlockContext(8)
    for s in range(0, 3):
        for t in range(0, 3):
            for u in range(1, 3):
                prod = assemble_gf(ctx, "H_loop3", (s, t, u))
                assert prod == ctx.h_loop3_closed(s, t, u), (s, t, u)


def test_f_loop_product_matches_closed_display():
    ctx = BlockContext(8)
    for s in range(0, 3):
        for t in range(0, 3):
            for u in range(0, 3):
                prod = assemble_gf(ctx, "F_loop3", (s, t, u))
                assert prod == ctx.f_loop3_closed(s, t, u), (s, t, u)


def test_remident_q_number_identity():
    # Delta_s of [s+1][s+2u+3]/([s+u+1][s+u+3]) = x^s [1][u][u+2][2s+2u+3]/prod_k [s+u+k]
    ctx = BlockContext(10)
    q = ctx.qnum

    def lhs_at(s, u):
        return q(s + 1) * q(s + 2 * u + 3) / (q(s + u + 1) * q(s + u + 3))

    for u in range(1, 4):
        for s in range(1, 4):
            lhs = lhs_at(s, u) - lhs_at(s - 1, u)
            den = Series.one(10)
            for k in range(4):
                den = den * q(s + u + k)
            rhs = ctx.xpow(s) * q(1) * q(u) * q(u + 2) * q(2 * s + 2 * u + 3) / den
            assert lhs == rhs, (s, u)


def test_route_consistency_small():
    # Delta_u H_loop = Delta_s Delta_t Delta_u F_loop (smaller box than acceptance)
    ctx = BlockContext(7)
    for s in range(0, 3):
        for t in range(0, 3):
            for u in range(1, 3):
                lhs = delta_extract(ctx, "H_loop3", (s, t, u), (2,))
                rhs = delta_extract(ctx, "F_loop3", (s, t, u), (0, 1, 2))
                assert lhs == rhs, (s, t, u)


def test_f_loop_vanishes_at_minus_one():
    ctx = BlockContext(6)
    for t in range(0, 3):
        for u in range(1, 3):
            assert assemble_gf(ctx, "F_loop3", (-1, t, u)).is_zero()
            assert assemble_gf(ctx, "F_loop3", (t, -1, u)).is_zero()


def test_loop_marginal_closed_matches_transfer():
    ctx = BlockContext(7)
    for u in range(0, 4):
        assert assemble_gf(ctx, "loop_marginal", (u,)) == ctx.loop_marginal_closed(u)


def test_refined_sum_collapse():
    # summing Delta_{u'}Delta_{u''} H over max(u',u'')=u recovers Delta_u H_loop;
    # the (u,u)-diagonal telescopes because H(s,t,w,w) = H_loop(s,t,w).
    ctx = BlockContext(6)
    for s in range(0, 3):
        for t in range(0, 3):
            assert assemble_gf(ctx, "H_loop4", (s, t, 2, 2)) == assemble_gf(
                ctx, "H_loop3", (s, t, 2)
            )
            assert assemble_gf(ctx, "F_loop4", (s, t, 2, 2)) == assemble_gf(
                ctx, "F_loop3", (s, t, 2)
            )
            assert assemble_gf(ctx, "Fbar_loop4", (s, t, 2, 2)) == assemble_gf(
                ctx, "F_loop3", (s, t, 2)
            )


def test_n1_master_cells():
    # by hand: the three 1-edge marked trees land at (s,t,u) = (0,0,1), (0,1,1), (1,0,1)
    ctx = BlockContext(3)
    cells = {}
    for s in range(0, 3):
        for t in range(0, 3):
            for u in range(1, 3):
                c = delta_extract(ctx, "H_loop3", (s, t, u), (2,))[1]
                if c:
                    cells[(s, t, u)] = c
    assert cells == {(0, 0, 1): 1, (0, 1, 1): 1, (1, 0, 1): 1}


def test_bivariate_diagonal_matches_univariate():
    ctx = BlockContext(4)
    for s in range(0, 2):
        for t in range(0, 2):
            bi = fbar_loop_bivariate(ctx, ctx, s, t, 1, 1)
            assert bi.diagonal() == assemble_gf(ctx, "Fbar_loop4", (s, t, 1, 1)).truncate(
                bi.diagonal().order
            )


def test_bivariate_outer_product_coefficients():
    a = Series([1, 2], 2)
    b = Series([3, 0, 5], 2)
    bi = BiSeries.outer(a, b)
    assert bi[0, 0] == 3 and bi[1, 0] == 6 and bi[0, 2] == 5 and bi[1, 2] == 10


def test_delta_bivariate_total_nonnegative_small():
    ctx = BlockContext(3)
    d = delta_extract_bivariate(ctx, ctx, 1, 1, 1, 1)
    for row in d.coeffs:
        for c in row:
            assert c.denominator == 1 and c >= 0
