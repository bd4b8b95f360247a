from __future__ import annotations

import numpy as np
import pytest

import oracles as o
from cosyx import css, gf2, zoo
from cosyx import homology as h
from cosyx.errors import InputError
from cosyx.tensor import tensor


@pytest.mark.parametrize("L", [3, 4])
def test_toric_code(L):
    T = tensor(zoo.cycle(L), zoo.cycle(L))
    code = css.from_complex(T, 1)
    p = css.code_params(code)
    assert (p.n, p.k_dim, p.dX, p.dZ) == o.toric_parameters(L)
    assert css.matrix_distances(code) == (L, L)
    assert code.orthogonal()
    assert p.hx_row == 4 and p.hz_row == 4


def test_code_dimension_is_betti():
    for X, k in [(zoo.simplex_skeleton(5, 2), 1), (zoo.flag_pg2(2), 1), (tensor(zoo.cycle(3), zoo.cycle(5)), 1)]:
        code = css.from_complex(X, k)
        assert code.k_dim == h.betti(X, k) == code.n - o.dense_rank(code.HX.to_dense()) - o.dense_rank(code.HZ.to_dense())


def test_no_logical_qubits():
    p = css.code_params(css.from_complex(zoo.simplex_skeleton(4, 2), 1))
    assert p.k_dim == 0 and p.d is None and "unknown" in " ".join(p.lines())


def test_matrix_distance_mitm_route():
    T = tensor(zoo.cycle(4), zoo.cycle(4))
    code = css.from_complex(T, 1)
    # a budget below the kernel dimension forces meet in the middle
    assert css.matrix_distance(code.HX, code.HZ, budget=16) == 4
    assert css.matrix_distance(code.HZ, code.HX, budget=16) == 4


def test_alist_roundtrip():
    code = css.from_complex(tensor(zoo.cycle(3), zoo.cycle(4)), 1)
    for H in (code.HX, code.HZ):
        text = css.dumps_alist(H)
        assert css.loads_alist(text) == H
        head = text.splitlines()[0].split()
        assert (int(head[0]), int(head[1])) == (H.ncols, H.nrows)
    with pytest.raises(InputError):
        css.loads_alist("x y\n")


def test_degree_out_of_range():
    with pytest.raises(InputError):
        css.from_complex(zoo.cycle(3), 3)


def test_balance_toric():
    r = css.balance(zoo.cycle(3), 0)
    assert r.L == 3 and r.sys == 1 and r.cosys == 3
    assert (r.params.n, r.params.k_dim, r.params.d) == (18, 2, 3)
    assert r.h_out >= r.h_in


def test_balance_needs_homology():
    with pytest.raises(InputError):
        css.balance(zoo.simplex_skeleton(4, 2), 1)


def test_prediction_formulas():
    p = css.predict_balanced(10, 2, 8)
    assert p.length == 40 and p.distance == 8 and p.dimension == 4
    with pytest.raises(InputError):
        css.predict_balanced(10, 3, 2)


def test_degree_zero_code():
    code = css.from_complex(zoo.cycle(5), 0)
    assert code.HX.nrows == 0 and code.k_dim == 1
    assert css.code_params(code).dZ == 5 and css.matrix_distances(code) == (1, 5)
